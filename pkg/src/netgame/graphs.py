"""Row-stochastic influence graphs: validation, generators and JSON round-trip.

``weights[i, j]`` is how strongly agent j's consumption sways agent i.
Every agent is swayed by someone (rows sum to one) and nobody sways
themselves (zero diagonal).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

ROW_SUM_TOL = 1e-9

KINDS = ("balanced", "star", "l_star", "near_star_one_bidirectional", "random")


class GraphValidationError(ValueError):
    """Raised when an operation requires a valid graph and gets violations."""


@dataclass(frozen=True)
class SocialGraph:
    """Weighted directed influence graph on ``n`` agents."""

    n: int
    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.array(self.weights, dtype=float, copy=True)
        if w.shape != (self.n, self.n):
            raise ValueError(f"weights shape {w.shape} does not match n={self.n}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def to_dict(self) -> dict:
        i, j = np.nonzero(self.weights)
        edges = [[int(a), int(b), float(self.weights[a, b])] for a, b in zip(i, j)]
        return {"n": self.n, "edges": edges}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SocialGraph":
        try:
            n = int(data["n"])
            edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"graph data must have 'n' and 'edges': {exc}") from exc
        w = np.zeros((n, n))
        seen = set()
        for entry in edges:
            if len(entry) != 3:
                raise ValueError(f"edge entry {entry!r} is not [i, j, weight]")
            i, j, wt = int(entry[0]), int(entry[1]), float(entry[2])
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
            w[i, j] = wt
        return cls(n=n, weights=w)

    @classmethod
    def from_json(cls, text: str) -> "SocialGraph":
        return cls.from_dict(json.loads(text))


def load_graph(path: str) -> SocialGraph:
    """Load a graph file, validating the influence-structure invariants."""
    with open(path, "r", encoding="utf-8") as fh:
        g = SocialGraph.from_json(fh.read())
    require_valid(g)
    return g


def save_graph(g: SocialGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(g.to_json())


def validate_graph(g: SocialGraph) -> list[str]:
    """Return a list of invariant violations; empty means the graph is valid."""
    violations = []
    w = g.weights
    if g.n < 2:
        violations.append(f"n {g.n} below minimum of 2")
        return violations
    diag = np.diagonal(w)
    for i in np.nonzero(diag != 0.0)[0]:
        violations.append(f"nonzero diagonal at {i}")
    neg_i, neg_j = np.nonzero(w < 0.0)
    for i, j in zip(neg_i, neg_j):
        violations.append(f"negative weight at ({i}, {j})")
    sums = w.sum(axis=1)
    for i in np.nonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)[0]:
        violations.append(f"row {i} sum {sums[i]:.6g}")
    return violations


def require_valid(g: SocialGraph) -> None:
    violations = validate_graph(g)
    if violations:
        raise GraphValidationError("invalid graph: " + "; ".join(violations))


def generate(
    kind: str,
    n: int,
    l: int | None = None,
    seed: int | None = None,
    density: float = 0.5,
) -> SocialGraph:
    """Build one of the named influence structures on ``n`` agents.

    balanced
        Directed cycle; everyone sways exactly one other agent with weight 1.
    star
        Agent 0 sways every other agent with weight 1 and is swayed a
        little (1/(n-1)) by each of them.
    l_star
        Agents 0..l-1 form a hub clique swaying each other uniformly;
        everyone else listens to the hubs uniformly (needs 2 <= l <= n-1).
    near_star_one_bidirectional
        Star in which the center's whole out-influence returns to a single
        designated peripheral (agent 1) instead of spreading out.
    random
        Bernoulli(density) off-diagonal pattern with uniform weights,
        rows renormalized; all-zero rows are redrawn.  Deterministic in
        ``seed``.
    """
    if n < 2:
        raise ValueError(f"need at least 2 agents, got n={n}")
    w = np.zeros((n, n))
    if kind == "balanced":
        for i in range(n):
            w[i, (i + 1) % n] = 1.0
    elif kind == "star":
        w[1:, 0] = 1.0
        w[0, 1:] = 1.0 / (n - 1)
    elif kind == "l_star":
        if l is None or not 2 <= l <= n - 1:
            raise ValueError(f"l_star requires 2 <= l <= n-1, got l={l}, n={n}")
        w[:l, :l] = 1.0 / (l - 1)
        np.fill_diagonal(w[:l, :l], 0.0)
        w[l:, :l] = 1.0 / l
    elif kind == "near_star_one_bidirectional":
        w[1:, 0] = 1.0
        w[0, 1] = 1.0
    elif kind == "random":
        rng = np.random.default_rng(seed)
        for i in range(n):
            while True:
                mask = rng.random(n) < density
                mask[i] = False
                if mask.any():
                    break
            row = np.zeros(n)
            row[mask] = rng.uniform(0.1, 1.0, size=int(mask.sum()))
            w[i] = row / row.sum()
    else:
        raise ValueError(f"unknown graph kind {kind!r}; choose from {KINDS}")
    g = SocialGraph(n=n, weights=w)
    require_valid(g)
    return g
