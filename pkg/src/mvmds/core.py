"""Domain types and stress evaluation for multi-view metric MDS.

All types are immutable after construction (arrays are copied and
write-locked), and the evaluators are pure functions, so values can be
shared freely between concurrent callers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import (
    AsymmetryError,
    DimensionMismatchError,
    GammaBelowOneError,
    MaskShapeMismatchError,
    MaskValueError,
    NegativeEntryError,
    NonFiniteEntryError,
    NonSquareError,
)

# Asymmetry below this (absolute) is treated as rounding noise and averaged
# away; anything larger is an error.
SYMMETRY_TOL = 1e-9

# Allowed deviation of a weight vector from the probability simplex.
SIMPLEX_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DistanceView:
    """One n-by-n dissimilarity matrix with a binary observation mask.

    ``mask[i, j] == 1`` means the pair (i, j) is observed.  The mask
    diagonal is irrelevant (all pair sums run over i < j) and is stored
    as zero.  Build instances through :func:`validate_view`, which
    enforces the invariants.
    """

    delta: np.ndarray
    mask: np.ndarray

    @property
    def n(self) -> int:
        return self.delta.shape[0]

    @property
    def is_complete(self) -> bool:
        """True when every off-diagonal pair is observed."""
        off = ~np.eye(self.n, dtype=bool)
        return bool(np.all(self.mask[off] == 1.0))


@dataclass(frozen=True, eq=False)
class MultiViewProblem:
    """M aligned distance views over the same n objects."""

    views: tuple

    def __post_init__(self):
        views = tuple(self.views)
        if len(views) < 1:
            raise DimensionMismatchError("a problem needs at least one view")
        n = views[0].n
        for i, v in enumerate(views):
            if v.n != n:
                raise DimensionMismatchError(
                    f"view {i} is {v.n}x{v.n}, expected {n}x{n}"
                )
        object.__setattr__(self, "views", views)

    @property
    def n(self) -> int:
        return self.views[0].n

    @property
    def m(self) -> int:
        return len(self.views)

    @property
    def is_complete(self) -> bool:
        return all(v.is_complete for v in self.views)


@dataclass(frozen=True, eq=False)
class Configuration:
    """An n-by-p matrix of embedding coordinates."""

    x: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.ndim != 2:
            raise DimensionMismatchError(
                f"configuration must be 2-d, got {x.ndim}-d"
            )
        if not np.all(np.isfinite(x)):
            raise NonFiniteEntryError("configuration has non-finite entries")
        object.__setattr__(self, "x", _freeze(x))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def distances(self) -> np.ndarray:
        """Euclidean distances between all rows (symmetric, zero diagonal)."""
        return cdist(self.x, self.x)


@dataclass(frozen=True, eq=False)
class ViewWeights:
    """A point on the probability simplex: one importance per view."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=float)
        if a.ndim != 1 or a.size < 1:
            raise DimensionMismatchError("weights must be a non-empty vector")
        if np.any(a < -SIMPLEX_TOL) or np.any(a > 1.0 + SIMPLEX_TOL):
            raise ValueError(f"weights outside [0, 1]: {a}")
        if abs(float(a.sum()) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"weights sum to {a.sum()!r}, expected 1")
        object.__setattr__(self, "alpha", _freeze(np.clip(a, 0.0, 1.0)))

    @property
    def m(self) -> int:
        return self.alpha.size


def uniform_weights(m: int) -> ViewWeights:
    """Equal weight 1/m on every view."""
    if m < 1:
        raise DimensionMismatchError("need at least one view")
    return ViewWeights(np.full(m, 1.0 / m))


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters.

    gamma is the weight controller: 1 selects a single view per sweep,
    larger values flatten the weight distribution.
    """

    p: int
    gamma: float
    tol: float = 1e-6
    max_iter: int = 500
    init: str = "classical"
    seed: int = 0

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 1:
            raise ValueError(f"embedding dimension must be >= 1, got {self.p}")
        if self.gamma < 1.0:
            raise GammaBelowOneError(f"gamma must be >= 1, got {self.gamma}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if self.init not in ("classical", "random"):
            raise ValueError(f"init must be 'classical' or 'random', got {self.init!r}")


def validate_view(raw, mask=None) -> DistanceView:
    """Validate a raw dissimilarity matrix into a DistanceView.

    Symmetrizes via (A + A')/2 when the asymmetry is within 1e-9, zeroes
    the diagonal, and locks the arrays.  The optional mask must be a
    symmetric binary matrix of the same shape; it defaults to all-ones
    (complete observation).
    """
    a = np.array(raw, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntryError("dissimilarities must be finite")
    gap = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if gap > SYMMETRY_TOL:
        raise AsymmetryError(
            f"asymmetry {gap:g} exceeds tolerance {SYMMETRY_TOL:g}"
        )
    a = (a + a.T) / 2.0
    if np.any(a < 0):
        raise NegativeEntryError("dissimilarities must be >= 0")
    np.fill_diagonal(a, 0.0)

    n = a.shape[0]
    if mask is None:
        w = np.ones((n, n))
    else:
        w = np.array(mask, dtype=float)
        if w.shape != a.shape:
            raise MaskShapeMismatchError(
                f"mask shape {w.shape} does not match matrix shape {a.shape}"
            )
        if not np.array_equal(w, w.T):
            raise MaskValueError("mask must be symmetric")
        if not np.all(np.isin(w, (0.0, 1.0))):
            raise MaskValueError("mask entries must be 0 or 1")
    np.fill_diagonal(w, 0.0)
    return DistanceView(delta=_freeze(a), mask=_freeze(w))


def stress(view: DistanceView, config: Configuration) -> float:
    """Weighted squared misfit between a view and an embedding.

    sum over i < j of w_ij * (delta_ij - d_ij(X))^2.
    """
    if view.n != config.n:
        raise DimensionMismatchError(
            f"view has {view.n} objects, configuration has {config.n}"
        )
    d = config.distances()
    iu = np.triu_indices(view.n, k=1)
    diff = view.delta[iu] - d[iu]
    return float(np.sum(view.mask[iu] * diff * diff))


def per_view_stress(problem: MultiViewProblem, config: Configuration) -> np.ndarray:
    """Stress of each view against a shared embedding."""
    if problem.n != config.n:
        raise DimensionMismatchError(
            f"problem has {problem.n} objects, configuration has {config.n}"
        )
    d = config.distances()
    iu = np.triu_indices(problem.n, k=1)
    out = np.empty(problem.m)
    for v, view in enumerate(problem.views):
        diff = view.delta[iu] - d[iu]
        out[v] = np.sum(view.mask[iu] * diff * diff)
    return out


def objective(
    problem: MultiViewProblem,
    weights: ViewWeights,
    config: Configuration,
    gamma: float,
) -> float:
    """Weighted multi-view objective: sum_v alpha_v**gamma * stress_v."""
    if weights.m != problem.m:
        raise DimensionMismatchError(
            f"{weights.m} weights for {problem.m} views"
        )
    if gamma < 1.0:
        raise GammaBelowOneError(f"gamma must be >= 1, got {gamma}")
    j = per_view_stress(problem, config)
    return float(np.sum(np.power(weights.alpha, gamma) * j))
