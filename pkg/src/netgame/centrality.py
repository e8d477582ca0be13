"""Discounted influence centrality and its closed forms for named graphs.

An agent's centrality aggregates the discounted influence it exerts on
others, directly and through chains: v = (I - delta * W^T)^{-1} 1 with
W the influence weights scaled by 1/(2*beta).  It is the exact weight
with which seeding that agent enters a firm's discounted utility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import SocialGraph, require_valid
from .params import ModelParams

_GUARD_TOL = 1e-9


@dataclass(frozen=True)
class CentralityVector:
    """Per-agent centralities plus the agent ordering used by all solvers.

    ``order[0]`` is the most central agent; ties break toward the lower
    agent index so the ordering is deterministic.
    """

    values: np.ndarray
    order: np.ndarray

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float, copy=True)
        order = np.array(self.order, dtype=int, copy=True)
        vals.setflags(write=False)
        order.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "order", order)

    @property
    def sorted_values(self) -> np.ndarray:
        """Centralities from most to least central."""
        return self.values[self.order]

    @property
    def total(self) -> float:
        return float(self.values.sum())


def centrality(g: SocialGraph, p: ModelParams, check: bool = True) -> CentralityVector:
    """Solve the centrality system directly and order the agents.

    With ``check`` (default) the analytic guards are asserted: every
    entry is at least 1, the total equals 2*beta*n/(2*beta - delta), and
    the maximum lies between the balanced value and the star-hub value.
    """
    require_valid(g)
    n = g.n
    w_t = g.weights.T / (2.0 * p.beta)
    values = np.linalg.solve(np.eye(n) - p.delta * w_t, np.ones(n))
    order = np.argsort(-values, kind="stable")
    if check:
        expected_total = 2.0 * p.beta * n / (2.0 * p.beta - p.delta)
        hub, _ = star_centralities(n, p)
        if values.min() < 1.0 - _GUARD_TOL:
            raise ArithmeticError(f"centrality below 1: {values.min()}")
        if abs(values.sum() - expected_total) > _GUARD_TOL * max(1.0, expected_total):
            raise ArithmeticError(
                f"centrality total {values.sum()} != {expected_total}"
            )
        if not (
            balanced_centrality(p) - _GUARD_TOL
            <= values.max()
            <= hub + _GUARD_TOL
        ):
            raise ArithmeticError(f"top centrality {values.max()} outside bounds")
    return CentralityVector(values=values, order=order)


def centrality_series(
    g: SocialGraph, p: ModelParams, tol: float = 1e-12, max_terms: int = 100000
) -> np.ndarray:
    """Evaluate the centrality power series; independent of the direct solve.

    Terms shrink geometrically at rate delta/(2*beta) <= 1/2, so the tail
    after a term of size t is below t * r / (1 - r); we stop once that
    bound drops under ``tol``.
    """
    require_valid(g)
    w_t = g.weights.T / (2.0 * p.beta)
    ratio = p.delta / (2.0 * p.beta)
    term = np.ones(g.n)
    acc = term.copy()
    for _ in range(max_terms):
        term = p.delta * (w_t @ term)
        acc += term
        if np.abs(term).max() * ratio / (1.0 - ratio) < tol:
            return acc
    raise ArithmeticError("centrality series did not converge")


def balanced_centrality(p: ModelParams) -> float:
    """Common centrality when every agent has total in-influence 1."""
    return 2.0 * p.beta / (2.0 * p.beta - p.delta)


def star_centralities(n: int, p: ModelParams) -> tuple[float, float]:
    """(hub, peripheral) centralities of the star on n agents."""
    x = p.delta / (2.0 * p.beta)
    hub = (1.0 + x * (n - 1)) / (1.0 - x * x)
    peripheral = (1.0 + x / (n - 1)) / (1.0 - x * x)
    return hub, peripheral


def l_star_centralities(n: int, l: int, p: ModelParams) -> tuple[float, float]:
    """(hub, peripheral) centralities of the l-star on n agents (l >= 2)."""
    if not 2 <= l <= n - 1:
        raise ValueError(f"l_star requires 2 <= l <= n-1, got l={l}, n={n}")
    hub = n * p.delta / (l * (2.0 * p.beta - p.delta)) + 1.0
    return hub, 1.0


def closed_form_centrality(
    kind: str, n: int, p: ModelParams, l: int | None = None
) -> dict[str, float]:
    """Known centralities by role for the graphs that admit closed forms."""
    if kind == "balanced":
        v = balanced_centrality(p)
        return {"all": v}
    if kind == "star":
        hub, peripheral = star_centralities(n, p)
        return {"hub": hub, "peripheral": peripheral}
    if kind == "l_star":
        if l is None:
            raise ValueError("l_star needs l")
        hub, peripheral = l_star_centralities(n, l, p)
        return {"hub": hub, "peripheral": peripheral}
    raise ValueError(f"no closed form for graph kind {kind!r}")
