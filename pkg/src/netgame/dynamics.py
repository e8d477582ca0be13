"""Consumption spread dynamics and discounted firm utilities.

State is tracked as each agent's tilt y_i = x_i - 1/2 away from an even
split between the two products, so the admissible range is |y_i| <= 1/2.
Myopic best responses make the tilt vector follow the linear recursion
y(t+1) = W y(t) + u * 1, where W scales the influence weights by
1/(2*beta) and u is the common drift induced by the quality gap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .centrality import centrality
from .graphs import SocialGraph, require_valid
from .params import ModelParams, require_qualities

_STATE_TOL = 1e-9


def externality_drift(q_a: float, q_b: float, p: ModelParams) -> float:
    """Per-step tilt toward the higher-quality product, common to all agents."""
    require_qualities(p, q_a, q_b)
    return (
        (1.0 + 2.0 * (p.alpha - p.beta))
        / (4.0 * p.beta)
        * (q_a - q_b)
        / (q_a + q_b)
    )


def _require_state(y: np.ndarray, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (n,):
        raise ValueError(f"state shape {y.shape} does not match n={n}")
    if np.abs(y).max() > 0.5 + _STATE_TOL:
        raise ValueError(f"state outside [-1/2, 1/2]: max |y| = {np.abs(y).max()}")
    return y


def require_seeding(s: np.ndarray, n: int) -> np.ndarray:
    """Seeding vectors live in [0, 1/2] per agent."""
    s = np.asarray(s, dtype=float)
    if s.shape != (n,):
        raise ValueError(f"seeding shape {s.shape} does not match n={n}")
    if s.min() < -_STATE_TOL or s.max() > 0.5 + _STATE_TOL:
        raise ValueError("seeding outside [0, 1/2] per agent")
    return s


def step(
    g: SocialGraph, p: ModelParams, q_a: float, q_b: float, y: np.ndarray
) -> np.ndarray:
    """One round of simultaneous myopic best responses.

    The output is asserted (not clamped) to stay in the admissible range;
    a violation means the inputs broke the model's assumptions upstream.
    """
    require_valid(g)
    y = _require_state(y, g.n)
    u = externality_drift(q_a, q_b, p)
    nxt = g.weights @ y / (2.0 * p.beta) + u
    if np.abs(nxt).max() > 0.5 + _STATE_TOL:
        raise ArithmeticError(
            f"updated state left [-1/2, 1/2]: max |y| = {np.abs(nxt).max()}"
        )
    return nxt


def agent_utility(
    g: SocialGraph,
    p: ModelParams,
    q_a: float,
    q_b: float,
    i: int,
    y_i: float,
    y: np.ndarray,
) -> float:
    """Agent i's one-round payoff given own tilt ``y_i`` and everyone's tilts.

    Standalone consumption value plus quality-weighted coordination with
    each influencer on both products; ``step`` is exactly the argmax of
    this in ``y_i``.
    """
    require_valid(g)
    require_qualities(p, q_a, q_b)
    y = _require_state(y, g.n)
    if abs(y_i) > 0.5 + _STATE_TOL:
        raise ValueError(f"y_i={y_i} outside [-1/2, 1/2]")
    row = g.weights[i]
    standalone = (q_a + q_b) * (p.alpha / 2.0 - p.beta / 4.0 - p.beta * y_i**2)
    direct = (q_a - q_b) * (p.alpha - p.beta) * y_i
    match_a = q_a * float(row @ ((0.5 + y_i) * (0.5 + y)))
    match_b = q_b * float(row @ ((0.5 - y_i) * (0.5 - y)))
    return standalone + direct + match_a + match_b


def simulate(
    g: SocialGraph,
    p: ModelParams,
    q_a: float,
    q_b: float,
    y0: np.ndarray,
    T: int,
) -> np.ndarray:
    """Iterate ``step`` T times; returns the (T+1, n) trajectory incl. y(0)."""
    require_valid(g)
    y = _require_state(y0, g.n)
    traj = np.empty((T + 1, g.n))
    traj[0] = y
    for t in range(T):
        y = step(g, p, q_a, q_b, y)
        traj[t + 1] = y
    return traj


def trajectory_via_powers(
    g: SocialGraph,
    p: ModelParams,
    q_a: float,
    q_b: float,
    y0: np.ndarray,
    T: int,
) -> np.ndarray:
    """Same trajectory from the unrolled form y(t) = W^t y0 + sum_k W^k u.

    Kept as an independent route for cross-checking ``simulate``.
    """
    require_valid(g)
    y0 = _require_state(y0, g.n)
    w = g.weights / (2.0 * p.beta)
    u = externality_drift(q_a, q_b, p) * np.ones(g.n)
    traj = np.empty((T + 1, g.n))
    power = y0.copy()
    drift = np.zeros(g.n)
    traj[0] = y0
    for t in range(1, T + 1):
        drift = w @ drift + u
        power = w @ power
        traj[t] = power + drift
    return traj


def stationary_state(
    g: SocialGraph, p: ModelParams, q_a: float, q_b: float
) -> np.ndarray:
    """Unique fixed point of the update; the influence operator contracts."""
    require_valid(g)
    u = externality_drift(q_a, q_b, p)
    w = g.weights / (2.0 * p.beta)
    return np.linalg.solve(np.eye(g.n) - w, u * np.ones(g.n))


def horizon_for_tolerance(p: ModelParams, n: int, tol: float = 1e-10) -> int:
    """Truncation horizon whose geometric tail bound stays below ``tol``.

    The per-step contribution to either firm's utility is within [0, n],
    so the tail after T is at most delta^(T+1) * n / (1 - delta).
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    target = tol * (1.0 - p.delta) / n
    if target >= 1.0:
        return 0
    return max(0, math.ceil(math.log(target) / math.log(p.delta)))


@dataclass(frozen=True)
class UtilityReport:
    """Both firms' discounted utilities with the closed-form decomposition.

    ``u_a = base + seeding_a - seeding_b + quality`` and ``u_b`` mirrors
    it; ``lam`` is the quality weight.  The decomposition is always the
    closed form even when the headline values come from simulation.
    """

    u_a: float
    u_b: float
    lam: float
    base: float
    seeding_a: float
    seeding_b: float
    quality: float
    mode: str
    horizon: int | None = None

    def to_dict(self) -> dict:
        return {
            "U_a": self.u_a,
            "U_b": self.u_b,
            "lambda": self.lam,
            "breakdown": {
                "base": self.base,
                "seeding_a": self.seeding_a,
                "seeding_b": self.seeding_b,
                "quality": self.quality,
            },
            "mode": self.mode,
            "horizon": self.horizon,
        }


def discounted_utilities(
    g: SocialGraph,
    p: ModelParams,
    q_a: float,
    q_b: float,
    s_a: np.ndarray,
    s_b: np.ndarray,
    mode: str = "closed_form",
    T: int | None = None,
    tol: float = 1e-10,
) -> UtilityReport:
    """Discounted total consumption utilities of both firms.

    ``closed_form`` evaluates the exact geometric sums through the
    centrality vector; ``simulated`` runs the spread process from
    y(0) = s_a - s_b and truncates once the tail bound drops under
    ``tol`` (or at an explicit horizon ``T``).
    """
    require_valid(g)
    require_qualities(p, q_a, q_b)
    s_a = require_seeding(s_a, g.n)
    s_b = require_seeding(s_b, g.n)
    n = g.n
    lam = p.quality_weight(n)
    v = centrality(g, p).values
    base = n / (2.0 * (1.0 - p.delta))
    seed_a = float(v @ s_a)
    seed_b = float(v @ s_b)
    quality = lam * (q_a - q_b) / (q_a + q_b)
    if mode == "closed_form":
        u_a = base + seed_a - seed_b + quality
        u_b = base + seed_b - seed_a - quality
        horizon = None
    elif mode == "simulated":
        horizon = horizon_for_tolerance(p, n, tol) if T is None else T
        traj = simulate(g, p, q_a, q_b, s_a - s_b, horizon)
        tilt = traj.sum(axis=1)
        weights = p.delta ** np.arange(horizon + 1)
        u_a = float(weights @ (n / 2.0 + tilt))
        u_b = float(weights @ (n / 2.0 - tilt))
    else:
        raise ValueError(f"unknown mode {mode!r}; use 'closed_form' or 'simulated'")
    return UtilityReport(
        u_a=u_a,
        u_b=u_b,
        lam=lam,
        base=base,
        seeding_a=seed_a,
        seeding_b=seed_b,
        quality=quality,
        mode=mode,
        horizon=horizon,
    )
