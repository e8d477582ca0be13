"""Nash equilibrium of the budget-allocation game between the two firms.

Each firm splits a budget between product quality and seeding agents'
initial consumption, paying c_q per quality unit and c_s per seeding
unit (at most 1/2 per agent).  Equilibrium seeding water-fills agents in
centrality order, and the marginal agent's (virtual) centrality pins the
equilibrium qualities through

    v~_k = 2 * lam * (c_s/c_q) * q_b / (q_a + q_b)^2     (firm a)
    v~_l = 2 * lam * (c_s/c_q) * q_a / (q_a + q_b)^2     (firm b)

``solve_nash`` enumerates the finitely many candidate cases of that
characterization; ``solve_nash_iterative`` reaches the same point by
alternating exact best responses and is kept as an independent route.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .centrality import CentralityVector, centrality
from .graphs import SocialGraph
from .params import ModelParams

log = logging.getLogger("netgame.equilibrium")

COND_TOL = 1e-9

CASE_INTERIOR = "interior"
CASE_BOUNDARY = "boundary_zero"
CASE_SATURATED = "saturated"
_CASE_RANK = {CASE_INTERIOR: 0, CASE_BOUNDARY: 1, CASE_SATURATED: 2}


class SolverError(RuntimeError):
    """No equilibrium candidate satisfied the characterization conditions."""


@dataclass(frozen=True)
class BudgetSpec:
    """Per-firm budgets and the common unit costs of seeding and quality."""

    K_a: float
    K_b: float
    c_s: float
    c_q: float

    def __post_init__(self) -> None:
        if self.c_s <= 0.0 or self.c_q <= 0.0:
            raise ValueError(f"costs must be positive: c_s={self.c_s}, c_q={self.c_q}")
        if self.K_a < 0.0 or self.K_b < 0.0:
            raise ValueError(f"budgets must be nonnegative: {self.K_a}, {self.K_b}")


@dataclass(frozen=True)
class FirmStrategy:
    """A firm's choice: per-agent seeding in [0, 1/2] plus a quality level."""

    seeding: np.ndarray
    quality: float

    def __post_init__(self) -> None:
        s = np.array(self.seeding, dtype=float, copy=True)
        s.setflags(write=False)
        object.__setattr__(self, "seeding", s)

    @property
    def seeding_total(self) -> float:
        return float(self.seeding.sum())

    def spend(self, c_s: float, c_q: float) -> float:
        return c_s * self.seeding_total + c_q * self.quality


@dataclass(frozen=True)
class NashOutcome:
    """Equilibrium strategies with the characterization bookkeeping.

    ``k``/``l`` are the 1-based marginal positions in centrality order,
    ``v_tilde_k``/``v_tilde_l`` the marginal (virtual) centralities, and
    the case tags say whether the marginal agent is partially seeded
    (interior), unseeded with a full prefix (boundary_zero), or whether
    the whole population is fully seeded (saturated).
    """

    strategy_a: FirmStrategy
    strategy_b: FirmStrategy
    k: int
    l: int
    v_tilde_k: float
    v_tilde_l: float
    case_a: str
    case_b: str
    utility_a: float
    utility_b: float

    def to_dict(self) -> dict:
        return {
            "qualities": {"a": self.strategy_a.quality, "b": self.strategy_b.quality},
            "seeding": {
                "a": self.strategy_a.seeding.tolist(),
                "b": self.strategy_b.seeding.tolist(),
            },
            "seeding_totals": {
                "a": self.strategy_a.seeding_total,
                "b": self.strategy_b.seeding_total,
            },
            "k": self.k,
            "l": self.l,
            "v_tilde_k": self.v_tilde_k,
            "v_tilde_l": self.v_tilde_l,
            "case": {"a": self.case_a, "b": self.case_b},
            "utilities": {"a": self.utility_a, "b": self.utility_b},
        }


def water_fill_seeding(v: CentralityVector, amount: float) -> tuple[np.ndarray, int]:
    """Spread ``amount`` over agents in centrality order, 1/2 each at most.

    Returns the per-agent seeding vector and the marginal index: the
    number of agents receiving any seed (the last of them may be
    partial).  Rejects negative amounts and amounts above n/2.
    """
    n = len(v.values)
    if amount < -COND_TOL:
        raise ValueError(f"seeding amount {amount} is negative")
    if amount > n / 2.0 + COND_TOL:
        raise ValueError(f"seeding amount {amount} exceeds capacity {n / 2.0}")
    seeding = np.zeros(n)
    remaining = min(max(amount, 0.0), n / 2.0)
    marginal = 0
    for pos, agent in enumerate(v.order):
        if remaining <= 0.0:
            break
        give = min(0.5, remaining)
        seeding[agent] = give
        remaining -= give
        marginal = pos + 1
    return seeding, marginal


def _prefix_seeding(order: np.ndarray, k: int, s_k: float) -> np.ndarray:
    """Prefix seeding: full up to position k-1, ``s_k`` at position k."""
    seeding = np.zeros(len(order))
    for pos in range(k - 1):
        seeding[order[pos]] = 0.5
    if k >= 1:
        seeding[order[k - 1]] = min(max(s_k, 0.0), 0.5)
    return seeding


def best_response_quality(
    v: CentralityVector,
    p: ModelParams,
    K: float,
    c_s: float,
    c_q: float,
    q_opp: float,
) -> tuple[float, np.ndarray, float]:
    """Exact best reply: optimal quality, its water-filled seeding, and value.

    The reduced objective v.S(q) + lam*(q - q_opp)/(q + q_opp) is concave
    in q and piecewise smooth between the spend levels where the marginal
    agent changes, so it suffices to compare the per-piece stationary
    points (closed form) with the piece endpoints.
    """
    n = len(v.values)
    if q_opp < p.epsilon - COND_TOL:
        raise ValueError(f"opponent quality {q_opp} below epsilon={p.epsilon}")
    if K < c_q * p.epsilon - COND_TOL:
        raise ValueError(f"budget {K} cannot afford minimum quality")
    lam = p.quality_weight(n)
    ratio = c_s / c_q
    vd = v.sorted_values
    q_hi = K / c_q
    q_lo = max(p.epsilon, (K - c_s * n / 2.0) / c_q)

    def value(q: float) -> float:
        spend = (K - c_q * q) / c_s
        seeding, _ = water_fill_seeding(v, min(spend, n / 2.0))
        return float(v.values @ seeding) + lam * (q - q_opp) / (q + q_opp)

    candidates = {q_lo, q_hi}
    for j in range(1, n + 1):
        piece_hi = min((K - c_s * (j - 1) / 2.0) / c_q, q_hi)
        piece_lo = max((K - c_s * j / 2.0) / c_q, q_lo)
        if piece_hi < q_lo or piece_lo > q_hi or piece_hi <= piece_lo:
            continue
        candidates.add(piece_lo)
        candidates.add(piece_hi)
        stationary = math.sqrt(2.0 * lam * ratio * q_opp / vd[j - 1]) - q_opp
        if piece_lo <= stationary <= piece_hi:
            candidates.add(stationary)
    best_q = max(candidates, key=value)
    spend = (K - c_q * best_q) / c_s
    seeding, _ = water_fill_seeding(v, min(spend, n / 2.0))
    return best_q, seeding, value(best_q)


def _firm_cases(K: float, c_s: float, c_q: float, eps: float, n: int):
    """Candidate (case, index, pinned quality) triples for one firm."""
    cases = []
    for k in range(1, n + 1):
        cases.append((CASE_INTERIOR, k, None))
        q_pinned = (K - c_s * (k - 1) / 2.0) / c_q
        if q_pinned >= eps - COND_TOL:
            cases.append((CASE_BOUNDARY, k, q_pinned))
    q_full = (K - c_s * n / 2.0) / c_q
    if q_full >= eps - COND_TOL:
        cases.append((CASE_SATURATED, n, q_full))
    return cases


def solve_nash(g: SocialGraph, p: ModelParams, budget: BudgetSpec) -> NashOutcome:
    """Unique equilibrium of the budget game via case enumeration.

    For every pair of marginal positions and case tags the two marginal
    conditions reduce to a closed-form solve for (q_a, q_b); a candidate
    is accepted iff every characterization condition holds within 1e-9.
    Ties between accepted candidates (degenerate centralities, exact
    boundaries) resolve to the lexicographically smallest (k, l, case).
    """
    v = centrality(g, p)
    n = g.n
    if budget.K_a < budget.c_q * p.epsilon - COND_TOL:
        raise ValueError(f"K_a={budget.K_a} cannot afford minimum quality")
    if budget.K_b < budget.c_q * p.epsilon - COND_TOL:
        raise ValueError(f"K_b={budget.K_b} cannot afford minimum quality")
    lam = p.quality_weight(n)
    ratio = budget.c_s / budget.c_q
    vd = v.sorted_values
    accepted = []
    cases_a = _firm_cases(budget.K_a, budget.c_s, budget.c_q, p.epsilon, n)
    cases_b = _firm_cases(budget.K_b, budget.c_s, budget.c_q, p.epsilon, n)
    for (ca, k, qa_pin), (cb, l, qb_pin) in itertools.product(cases_a, cases_b):
        sol = _solve_case(lam, ratio, vd, k, l, ca, cb, qa_pin, qb_pin)
        if sol is None:
            continue
        q_a, q_b, vt_k, vt_l = sol
        if not _conditions_ok(
            budget, p, vd, n, q_a, q_b, vt_k, vt_l, k, l, ca, cb
        ):
            continue
        accepted.append((k, l, _CASE_RANK[ca], _CASE_RANK[cb], q_a, q_b, vt_k, vt_l, ca, cb))
    if not accepted:
        raise SolverError(
            f"no equilibrium candidate satisfied the conditions "
            f"(n={n}, K_a={budget.K_a}, K_b={budget.K_b}, lam={lam})"
        )
    accepted.sort(key=lambda c: c[:4])
    k, l, _, _, q_a, q_b, vt_k, vt_l, ca, cb = accepted[0]
    log.debug("accepted %d candidate(s); chose k=%d l=%d (%s, %s)", len(accepted), k, l, ca, cb)
    return _build_outcome(g, p, v, budget, q_a, q_b, vt_k, vt_l, k, l, ca, cb)


def _solve_case(lam, ratio, vd, k, l, case_a, case_b, qa_pin, qb_pin):
    """Solve the two marginal conditions for (q_a, q_b, v~_k, v~_l)."""
    if case_a == CASE_INTERIOR and case_b == CASE_INTERIOR:
        vt_k, vt_l = vd[k - 1], vd[l - 1]
        den = (vt_k + vt_l) ** 2
        return 2 * lam * ratio * vt_l / den, 2 * lam * ratio * vt_k / den, vt_k, vt_l
    if case_a == CASE_INTERIOR:
        vt_k, q_b = vd[k - 1], qb_pin
        q_a = math.sqrt(2 * lam * ratio * q_b / vt_k) - q_b
        if q_a <= 0.0:
            return None
        vt_l = 2 * lam * ratio * q_a / (q_a + q_b) ** 2
        return q_a, q_b, vt_k, vt_l
    if case_b == CASE_INTERIOR:
        vt_l, q_a = vd[l - 1], qa_pin
        q_b = math.sqrt(2 * lam * ratio * q_a / vt_l) - q_a
        if q_b <= 0.0:
            return None
        vt_k = 2 * lam * ratio * q_b / (q_a + q_b) ** 2
        return q_a, q_b, vt_k, vt_l
    q_a, q_b = qa_pin, qb_pin
    total = (q_a + q_b) ** 2
    return q_a, q_b, 2 * lam * ratio * q_b / total, 2 * lam * ratio * q_a / total


def _conditions_ok(budget, p, vd, n, q_a, q_b, vt_k, vt_l, k, l, case_a, case_b):
    if q_a < p.epsilon - COND_TOL or q_b < p.epsilon - COND_TOL:
        return False
    for q, vt, idx, case, K in (
        (q_a, vt_k, k, case_a, budget.K_a),
        (q_b, vt_l, l, case_b, budget.K_b),
    ):
        if case == CASE_SATURATED:
            spend = K / budget.c_s - (budget.c_q / budget.c_s) * q
            if abs(spend - n / 2.0) > COND_TOL:
                return False
            if vt > vd[n - 1] + COND_TOL:
                return False
            continue
        s_marginal = K / budget.c_s - (idx - 1) / 2.0 - (budget.c_q / budget.c_s) * q
        if case == CASE_INTERIOR:
            if not -COND_TOL <= s_marginal <= 0.5 + COND_TOL:
                return False
        else:
            if abs(s_marginal) > COND_TOL:
                return False
            upper = math.inf if idx == 1 else vd[idx - 2] + COND_TOL
            if not vd[idx - 1] - COND_TOL <= vt <= upper:
                return False
    return True


def _build_outcome(g, p, v, budget, q_a, q_b, vt_k, vt_l, k, l, case_a, case_b):
    n = g.n

    def seeding_for(q, idx, case, K):
        if case == CASE_SATURATED:
            return _prefix_seeding(v.order, n, 0.5)
        s_marginal = K / budget.c_s - (idx - 1) / 2.0 - (budget.c_q / budget.c_s) * q
        return _prefix_seeding(v.order, idx, s_marginal)

    s_a = seeding_for(q_a, k, case_a, budget.K_a)
    s_b = seeding_for(q_b, l, case_b, budget.K_b)
    base = n / (2.0 * (1.0 - p.delta))
    lam = p.quality_weight(n)
    gap = lam * (q_a - q_b) / (q_a + q_b)
    swing = float(v.values @ (s_a - s_b))
    return NashOutcome(
        strategy_a=FirmStrategy(seeding=s_a, quality=q_a),
        strategy_b=FirmStrategy(seeding=s_b, quality=q_b),
        k=k,
        l=l,
        v_tilde_k=vt_k,
        v_tilde_l=vt_l,
        case_a=case_a,
        case_b=case_b,
        utility_a=base + swing + gap,
        utility_b=base - swing - gap,
    )


def solve_nash_iterative(
    g: SocialGraph,
    p: ModelParams,
    budget: BudgetSpec,
    move_tol: float = 1e-10,
    max_iter: int = 1000,
) -> NashOutcome:
    """Reach the equilibrium by alternating exact best responses.

    Started from a small grid of quality pairs; raises SolverError when no
    start settles within ``max_iter`` rounds.  Kept deliberately separate
    from the case enumeration so the two can cross-check each other.
    """
    v = centrality(g, p)
    starts = [p.epsilon, budget.K_a / (2 * budget.c_q), budget.K_a / budget.c_q]
    starts_b = [p.epsilon, budget.K_b / (2 * budget.c_q), budget.K_b / budget.c_q]
    for qa0, qb0 in itertools.product(starts, starts_b):
        q_a, q_b = max(qa0, p.epsilon), max(qb0, p.epsilon)
        for _ in range(max_iter):
            q_a_new, _, _ = best_response_quality(
                v, p, budget.K_a, budget.c_s, budget.c_q, q_b
            )
            q_b_new, _, _ = best_response_quality(
                v, p, budget.K_b, budget.c_s, budget.c_q, q_a_new
            )
            moved = max(abs(q_a_new - q_a), abs(q_b_new - q_b))
            q_a, q_b = q_a_new, q_b_new
            if moved < move_tol:
                return _outcome_from_qualities(g, p, v, budget, q_a, q_b)
        log.debug("best-response iteration did not settle from start (%g, %g)", qa0, qb0)
    raise SolverError(
        f"best-response iteration did not converge within {max_iter} rounds"
    )


def _outcome_from_qualities(g, p, v, budget, q_a, q_b):
    """Label a converged quality pair with the characterization bookkeeping."""
    n = g.n
    lam = p.quality_weight(n)
    ratio = budget.c_s / budget.c_q
    total = (q_a + q_b) ** 2
    vt_k = 2 * lam * ratio * q_b / total
    vt_l = 2 * lam * ratio * q_a / total

    def classify(q, K):
        spend = (K - budget.c_q * q) / budget.c_s
        if spend >= n / 2.0 - COND_TOL:
            return CASE_SATURATED, n
        full_levels = int(round(spend * 2.0))
        if abs(spend - full_levels / 2.0) <= COND_TOL and full_levels < n:
            return CASE_BOUNDARY, full_levels + 1
        return CASE_INTERIOR, math.ceil(spend * 2.0 - COND_TOL)

    case_a, k = classify(q_a, budget.K_a)
    case_b, l = classify(q_b, budget.K_b)
    return _build_outcome(g, p, v, budget, q_a, q_b, vt_k, vt_l, max(k, 1), max(l, 1), case_a, case_b)


def solve_symmetric_levels(
    values_desc: np.ndarray,
    n: int,
    p: ModelParams,
    K: float,
    c_s: float,
    c_q: float,
) -> tuple[int, float, str, float, float]:
    """Shared single-firm level search for the symmetric game.

    Works on any descending centrality-like sequence (the actual sorted
    centralities, or an extremal envelope).  Returns (l, v~_l, case, q,
    s_l): the marginal position, marginal virtual centrality, case tag,
    common equilibrium quality and the marginal agent's seed.
    """
    if K < c_q * p.epsilon - COND_TOL:
        raise ValueError(f"budget {K} cannot afford minimum quality")
    lam = p.quality_weight(n)
    ratio = c_s / c_q
    vd = np.asarray(values_desc, dtype=float)
    for l in range(1, n + 1):
        vt = vd[l - 1]
        q = lam / 2.0 * ratio / vt
        s_l = K / c_s - (l - 1) / 2.0 - (c_q / c_s) * q
        if q >= p.epsilon - COND_TOL and -COND_TOL <= s_l <= 0.5 + COND_TOL:
            return l, vt, CASE_INTERIOR, q, min(max(s_l, 0.0), 0.5)
        q = (K - c_s * (l - 1) / 2.0) / c_q
        if q >= p.epsilon - COND_TOL:
            vt = lam / 2.0 * ratio / q
            upper = math.inf if l == 1 else vd[l - 2] + COND_TOL
            if vd[l - 1] - COND_TOL <= vt <= upper:
                return l, vt, CASE_BOUNDARY, q, 0.0
    q = (K - c_s * n / 2.0) / c_q
    if q >= p.epsilon - COND_TOL:
        vt = lam / 2.0 * ratio / q
        if vt <= vd[n - 1] + COND_TOL:
            return n, vt, CASE_SATURATED, q, 0.5
    raise SolverError(
        f"no symmetric equilibrium level accepted (n={n}, K={K}, lam={lam})"
    )


def symmetric_nash(
    g: SocialGraph, p: ModelParams, K: float, c_s: float, c_q: float
) -> NashOutcome:
    """Equilibrium when both firms have the same budget: both play alike."""
    v = centrality(g, p)
    n = g.n
    l, vt, case, q, s_l = solve_symmetric_levels(v.sorted_values, n, p, K, c_s, c_q)
    if case == CASE_SATURATED:
        seeding = _prefix_seeding(v.order, n, 0.5)
    else:
        seeding = _prefix_seeding(v.order, l, s_l)
    strategy = FirmStrategy(seeding=seeding, quality=q)
    base = n / (2.0 * (1.0 - p.delta))
    return NashOutcome(
        strategy_a=strategy,
        strategy_b=strategy,
        k=l,
        l=l,
        v_tilde_k=vt,
        v_tilde_l=vt,
        case_a=case,
        case_b=case,
        utility_a=base,
        utility_b=base,
    )
