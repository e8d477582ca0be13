"""Shared model parameters for the two-firm consumption game."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Payoff curvature, discounting and the minimum admissible quality.

    ``alpha`` and ``beta`` shape each agent's standalone payoff from
    consuming either product, ``delta`` discounts future consumption in
    firm utilities, and ``epsilon`` is the smallest quality a firm may
    choose.  ``1 + alpha <= 2 * beta`` keeps per-agent consumption shares
    inside [0, 1] under best-response updates; ``beta <= alpha`` keeps the
    standalone payoff nondecreasing on the feasible range.
    """

    alpha: float
    beta: float
    delta: float
    epsilon: float = 1e-6

    def __post_init__(self) -> None:
        problems = []
        if self.beta > self.alpha:
            problems.append(f"beta={self.beta} exceeds alpha={self.alpha}")
        if 1.0 + self.alpha > 2.0 * self.beta:
            problems.append(
                f"1 + alpha = {1.0 + self.alpha} exceeds 2*beta = {2.0 * self.beta}"
            )
        if not 0.0 < self.delta < 1.0:
            problems.append(f"delta={self.delta} outside (0, 1)")
        if self.epsilon <= 0.0:
            problems.append(f"epsilon={self.epsilon} must be positive")
        if problems:
            raise ValueError("invalid model parameters: " + "; ".join(problems))

    def quality_weight(self, n: int) -> float:
        """Discounted weight of relative quality in a firm's total utility.

        This is the coefficient multiplying (q_a - q_b)/(q_a + q_b) in the
        closed-form discounted utility for a population of ``n`` agents.
        """
        return (
            self.delta
            * (1.0 + 2.0 * (self.alpha - self.beta))
            * n
            / (2.0 * (1.0 - self.delta) * (2.0 * self.beta - self.delta))
        )


def require_qualities(p: ModelParams, q_a: float, q_b: float) -> None:
    """Reject qualities below the admissible floor."""
    if q_a < p.epsilon or q_b < p.epsilon:
        raise ValueError(
            f"qualities must be at least epsilon={p.epsilon}: got q_a={q_a}, q_b={q_b}"
        )
