"""Shared fixtures and random-instance generators.

Random draws stay inside the model's admissible region (1 + alpha <= 2*beta,
beta <= alpha, 0 < delta < 1).  Budget pairs are screened so the equilibrium
case enumeration applies; see draw_instance.
"""
from __future__ import annotations

import sys

import numpy as np
import pytest

from netgame import BudgetSpec, ModelParams, SocialGraph, centrality, solve_nash
from netgame.equilibrium import SolverError, best_response_quality

EXAMPLE_N = 15


@pytest.fixture
def example_params() -> ModelParams:
    # alpha = beta = 1, delta = 1/2: the setting all worked values are frozen at
    return ModelParams(alpha=1.0, beta=1.0, delta=0.5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)


def draw_params(rng: np.random.Generator) -> ModelParams:
    alpha = float(rng.uniform(1.0, 2.2))
    beta = float(rng.uniform((1.0 + alpha) / 2.0, alpha))
    delta = float(rng.uniform(0.2, 0.85))
    return ModelParams(alpha=alpha, beta=beta, delta=delta)


def draw_graph(rng: np.random.Generator, n: int, density: float | None = None) -> SocialGraph:
    """Row-stochastic weights with a random sparsity pattern, zero diagonal."""
    if density is None:
        density = float(rng.uniform(0.3, 1.0))
    while True:
        w = rng.uniform(0.05, 1.0, size=(n, n))
        w *= rng.random((n, n)) < density
        np.fill_diagonal(w, 0.0)
        sums = w.sum(axis=1)
        if np.all(sums > 0.0):
            return SocialGraph(n, w / sums[:, None])


def draw_costs(rng: np.random.Generator) -> tuple[float, float]:
    return float(rng.uniform(0.5, 2.0)), float(rng.uniform(0.5, 2.0))


def draw_budget(rng: np.random.Generator, n: int, c_s: float, c_q: float) -> float:
    # from "barely affords some quality" to well past full saturation
    return float(rng.uniform(0.3, 1.2 * (c_s * n / 2.0 + c_q)))


def _assert_quality_floor_binds(
    g: SocialGraph, p: ModelParams, budget: BudgetSpec
) -> None:
    """Confirm by best-response iteration that a firm's quality hits the floor.

    Called when solve_nash rejects an instance: the only legitimate reason
    is an equilibrium with one quality pinned at epsilon, which the case
    enumeration deliberately has no branch for.  Anything else is a bug.
    """
    v = centrality(g, p)
    q_a = q_b = 1.0
    for _ in range(300):
        q_a, _, _ = best_response_quality(v, p, budget.K_a, budget.c_s, budget.c_q, q_b)
        q_b, _, _ = best_response_quality(v, p, budget.K_b, budget.c_s, budget.c_q, q_a)
    assert min(q_a, q_b) <= p.epsilon + 1e-9, (
        f"case enumeration failed away from the quality floor "
        f"(q_a={q_a}, q_b={q_b}, eps={p.epsilon}): solver bug"
    )


def draw_instance(
    rng: np.random.Generator, n_max: int = 10, n: int | None = None
) -> tuple[SocialGraph, ModelParams, BudgetSpec]:
    """A random graph, parameters and budget pair that solve_nash accepts.

    Lopsided enough draws (or small quality weights) can pin the poorer
    firm's quality at the floor, an equilibrium shape outside the case
    enumeration; those draws are replaced.  Each rejection must first be
    proven to be that corner via the independent best-response route, so
    a genuine solver failure can never hide inside the resampling loop.
    About 4-5% of raw draws are rejected this way.
    """
    while True:
        size = int(rng.integers(2, n_max + 1)) if n is None else n
        p = draw_params(rng)
        g = draw_graph(rng, size)
        c_s, c_q = draw_costs(rng)
        k_a = draw_budget(rng, size, c_s, c_q)
        k_b = k_a * 2.0 ** float(rng.uniform(-1.5, 1.5))
        k_b = min(max(k_b, 0.3), 1.2 * (c_s * size / 2.0 + c_q))
        budget = BudgetSpec(k_a, k_b, c_s, c_q)
        try:
            solve_nash(g, p, budget)
        except SolverError:
            _assert_quality_floor_binds(g, p, budget)
            continue
        return g, p, budget


def draw_seedings(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    s_a = rng.uniform(0.0, 0.5, size=n)
    s_b = rng.uniform(0.0, 0.5, size=n)
    return s_a, s_b


def random_seeding(rng: np.random.Generator, n: int, total: float) -> np.ndarray:
    """A random allocation of `total` across n agents with per-agent cap 1/2."""
    s = np.zeros(n)
    remaining = total
    while remaining > 1e-12:
        raw = rng.uniform(0.0, 1.0, size=n)
        raw *= remaining / raw.sum()
        add = np.minimum(raw, 0.5 - s)
        s += add
        remaining -= float(add.sum())
    return s


def bounded_argmax(fn, lo: float, hi: float, coarse: int = 400) -> tuple[float, float]:
    """Grid scan plus local refinement; independent check on closed-form optima."""
    from scipy.optimize import minimize_scalar

    xs = np.linspace(lo, hi, coarse)
    vals = np.array([fn(x) for x in xs])
    j = int(np.argmax(vals))
    a, b = xs[max(j - 1, 0)], xs[min(j + 1, coarse - 1)]
    res = minimize_scalar(lambda x: -fn(x), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-12})
    x_ref = float(res.x)
    if fn(x_ref) >= vals[j]:
        return x_ref, float(fn(x_ref))
    return float(xs[j]), float(vals[j])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None) if mod is not None else None
    if results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
