"""Alternating optimizer for multi-view stress.

Each sweep majorizes the weighted stress and applies the closed-form
configuration update X = V+ B Z (a multi-view Guttman transform), then
refreshes the view weights with the closed-form simplex solution.  The
objective never increases, so the loop terminates once the relative
decrease falls under the configured tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .core import (
    Configuration,
    DistanceView,
    MultiViewProblem,
    SolverConfig,
    ViewWeights,
    objective,
    per_view_stress,
    uniform_weights,
)
from .errors import (
    AllPairsMissingError,
    AsymmetryError,
    DimensionMismatchError,
    EigenFailureError,
    GammaBelowOneError,
    NegativeStressError,
    NonSquareError,
    SingularUpdateError,
)

# Relative eigenvalue cutoff for the Moore-Penrose inverse.  V is a
# Laplacian-like matrix whose constant-vector null space must be truncated
# without touching the informative spectrum.
PINV_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class IterationRecord:
    """State after one sweep: objective, weights, per-view stresses."""

    iteration: int
    objective_value: float
    alpha: ViewWeights
    per_view_stress: np.ndarray


@dataclass(frozen=True, eq=False)
class SolveReport:
    config_out: Configuration
    weights_out: ViewWeights
    trace: tuple
    converged: bool
    iterations_used: int


def _check_weights(problem: MultiViewProblem, weights: ViewWeights) -> None:
    if weights.m != problem.m:
        raise DimensionMismatchError(
            f"{weights.m} weights for {problem.m} views"
        )


def _gamma_coefficients(alpha: np.ndarray, gamma: float) -> np.ndarray:
    """alpha**gamma rescaled so the largest coefficient is 1.

    The configuration update is invariant to a positive rescaling of the
    per-view coefficients; rescaling keeps them representable for very
    large gamma, where alpha**gamma itself underflows.
    """
    pos = alpha > 0
    out = np.zeros_like(alpha)
    logs = gamma * np.log(alpha[pos])
    out[pos] = np.exp(logs - logs.max())
    return out


def _v_from_coefficients(problem: MultiViewProblem, coeffs: np.ndarray) -> np.ndarray:
    n = problem.n
    s = np.zeros((n, n))
    for c, view in zip(coeffs, problem.views):
        if c != 0.0:
            s += c * view.mask
    v = -s
    np.fill_diagonal(v, s.sum(axis=1))
    return v


def _b_from_coefficients(
    problem: MultiViewProblem, coeffs: np.ndarray, z: np.ndarray
) -> np.ndarray:
    n = problem.n
    num = np.zeros((n, n))
    for c, view in zip(coeffs, problem.views):
        if c != 0.0:
            num += c * (view.mask * view.delta)
    dz = cdist(z, z)
    ratio = np.divide(num, dz, out=np.zeros_like(num), where=dz > 0)
    np.fill_diagonal(ratio, 0.0)
    b = -ratio
    np.fill_diagonal(b, ratio.sum(axis=1))
    return b


def build_v_matrix(
    problem: MultiViewProblem, weights: ViewWeights, gamma: float
) -> np.ndarray:
    """Weighted mask Laplacian: v_ij = -sum_v alpha_v**gamma w_ij for i != j,
    diagonal = negative row sum.  Symmetric PSD with zero row sums."""
    _check_weights(problem, weights)
    if gamma < 1.0:
        raise GammaBelowOneError(f"gamma must be >= 1, got {gamma}")
    return _v_from_coefficients(problem, np.power(weights.alpha, gamma))


def build_b_matrix(
    problem: MultiViewProblem,
    weights: ViewWeights,
    z: Configuration,
    gamma: float,
) -> np.ndarray:
    """Majorization matrix: off-diagonal
    b_ij = -sum_v alpha_v**gamma w_ij delta_ij / d_ij(Z), zero where
    d_ij(Z) = 0; diagonal = negative row sum."""
    _check_weights(problem, weights)
    if z.n != problem.n:
        raise DimensionMismatchError(
            f"previous configuration has {z.n} rows, problem has {problem.n}"
        )
    if gamma < 1.0:
        raise GammaBelowOneError(f"gamma must be >= 1, got {gamma}")
    return _b_from_coefficients(problem, np.power(weights.alpha, gamma), z.x)


def pseudoinverse(v: np.ndarray) -> np.ndarray:
    """Moore-Penrose inverse of a symmetric matrix via eigendecomposition.

    Eigenvalues with magnitude below 1e-10 times the largest magnitude are
    treated as exactly zero.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {v.shape}")
    gap = float(np.max(np.abs(v - v.T))) if v.size else 0.0
    if gap > 1e-9:
        raise AsymmetryError(f"matrix asymmetry {gap:g} exceeds 1e-9")
    sym = (v + v.T) / 2.0
    try:
        evals, evecs = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(str(exc)) from exc
    amax = float(np.max(np.abs(evals))) if evals.size else 0.0
    if amax == 0.0:
        return np.zeros_like(sym)
    keep = np.abs(evals) > PINV_CUTOFF * amax
    inv = np.zeros_like(evals)
    inv[keep] = 1.0 / evals[keep]
    return (evecs * inv) @ evecs.T


def update_configuration(
    problem: MultiViewProblem,
    weights: ViewWeights,
    z: Configuration,
    gamma: float,
) -> Configuration:
    """One majorization step: X = V+ B Z, or B Z / (n * sum of coefficients)
    when every pair is observed.  Never increases the objective for fixed
    weights."""
    _check_weights(problem, weights)
    if z.n != problem.n:
        raise DimensionMismatchError(
            f"previous configuration has {z.n} rows, problem has {problem.n}"
        )
    if gamma < 1.0:
        raise GammaBelowOneError(f"gamma must be >= 1, got {gamma}")
    coeffs = _gamma_coefficients(weights.alpha, gamma)
    b = _b_from_coefficients(problem, coeffs, z.x)
    if problem.is_complete:
        s = float(coeffs.sum())
        x = (b @ z.x) / (problem.n * s)
    else:
        v = _v_from_coefficients(problem, coeffs)
        try:
            v_pinv = pseudoinverse(v)
        except EigenFailureError as exc:
            raise SingularUpdateError(
                "pseudoinverse of the weight matrix failed"
            ) from exc
        x = v_pinv @ (b @ z.x)
    return Configuration(x)


def update_weights(per_view_stress_values, gamma: float) -> ViewWeights:
    """Closed-form optimal simplex weights for fixed configuration.

    For gamma > 1: alpha_v proportional to J_v**(1/(1-gamma)).  For
    gamma = 1 the optimum is one-hot on the smallest stress (ties go to
    the lowest view index).  Views with numerically zero stress share the
    weight uniformly, which is the continuous limit of the general form.
    """
    j = np.asarray(per_view_stress_values, dtype=float)
    if j.ndim != 1 or j.size < 1:
        raise DimensionMismatchError("per-view stress must be a non-empty vector")
    if np.any(j < 0):
        raise NegativeStressError(f"negative per-view stress: {j}")
    if gamma < 1.0:
        raise GammaBelowOneError(f"gamma must be >= 1, got {gamma}")

    alpha = np.zeros(j.size)
    if gamma == 1.0:
        alpha[int(np.argmin(j))] = 1.0
        return ViewWeights(alpha)

    eps = 1e-12 * max(1.0, float(j.max()))
    near_zero = j <= eps
    if np.any(near_zero):
        alpha[near_zero] = 1.0 / int(near_zero.sum())
        return ViewWeights(alpha)

    # log-space for stability: 1/(1-gamma) is large for gamma near 1
    logs = np.log(j) / (1.0 - gamma)
    logs -= logs.max()
    alpha = np.exp(logs)
    alpha /= alpha.sum()
    return ViewWeights(alpha)


def mean_matrix(problem: MultiViewProblem) -> np.ndarray:
    """Per-pair mean of the observed dissimilarities across views."""
    deltas = np.stack([v.delta for v in problem.views])
    if problem.is_complete:
        return np.mean(deltas, axis=0)
    masks = np.stack([v.mask for v in problem.views])
    wsum = masks.sum(axis=0)
    off = ~np.eye(problem.n, dtype=bool)
    if np.any(wsum[off] == 0):
        i, j = np.argwhere((wsum == 0) & off)[0]
        raise AllPairsMissingError(
            f"pair ({i}, {j}) is observed in no view; cannot form the mean"
        )
    out = np.divide(
        (masks * deltas).sum(axis=0),
        wsum,
        out=np.zeros((problem.n, problem.n)),
        where=wsum > 0,
    )
    np.fill_diagonal(out, 0.0)
    return out


def _mean_observed_delta(problem: MultiViewProblem) -> float:
    iu = np.triu_indices(problem.n, k=1)
    total = 0.0
    count = 0.0
    for view in problem.views:
        total += float(np.sum(view.mask[iu] * view.delta[iu]))
        count += float(np.sum(view.mask[iu]))
    if count == 0:
        raise AllPairsMissingError("no observed pairs in any view")
    return total / count


def _classical_mds(d: np.ndarray, p: int) -> np.ndarray:
    """Torgerson embedding: double-center -D^2/2, keep the top-p eigenpairs
    with negative eigenvalues clamped to zero."""
    n = d.shape[0]
    center = np.eye(n) - np.full((n, n), 1.0 / n)
    g = -0.5 * center @ (d * d) @ center
    try:
        evals, evecs = np.linalg.eigh(g)
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(str(exc)) from exc
    order = np.argsort(evals)[::-1]
    evals = np.clip(evals[order], 0.0, None)
    evecs = evecs[:, order]
    take = min(p, n)
    x = evecs[:, :take] * np.sqrt(evals[:take])
    if take < p:
        x = np.hstack([x, np.zeros((n, p - take))])
    return x


def initialize(problem: MultiViewProblem, cfg: SolverConfig) -> Configuration:
    """Starting configuration, deterministic given (problem, cfg).

    'classical' runs Torgerson MDS on the per-pair mean of the observed
    dissimilarities; 'random' draws seeded normal coordinates scaled to
    the mean observed dissimilarity.
    """
    if cfg.init == "classical":
        return Configuration(_classical_mds(mean_matrix(problem), cfg.p))
    rng = np.random.default_rng(cfg.seed)
    scale = _mean_observed_delta(problem) / np.sqrt(cfg.p)
    return Configuration(rng.standard_normal((problem.n, cfg.p)) * scale)


def solve(
    problem: MultiViewProblem,
    cfg: SolverConfig,
    frozen_weights: ViewWeights | None = None,
) -> SolveReport:
    """Alternate configuration and weight updates until convergence.

    Weights start uniform.  Every sweep updates the configuration first
    and the weights second; the recorded objective is the value after
    both updates and is non-increasing across sweeps.  Convergence is a
    relative objective decrease of at most cfg.tol.  Passing
    frozen_weights skips the weight update and keeps the given weights
    for every sweep.
    """
    if frozen_weights is not None:
        _check_weights(problem, frozen_weights)
    z = initialize(problem, cfg)
    alpha = frozen_weights if frozen_weights is not None else uniform_weights(problem.m)
    prev = objective(problem, alpha, z, cfg.gamma)
    trace = []
    converged = False
    for t in range(1, cfg.max_iter + 1):
        x = update_configuration(problem, alpha, z, cfg.gamma)
        j = per_view_stress(problem, x)
        if frozen_weights is None:
            alpha = update_weights(j, cfg.gamma)
        obj = float(np.sum(np.power(alpha.alpha, cfg.gamma) * j))
        trace.append(IterationRecord(t, obj, alpha, j))
        z = x
        if (prev - obj) / max(prev, 1e-30) <= cfg.tol:
            converged = True
            break
        prev = obj
    return SolveReport(
        config_out=z,
        weights_out=alpha,
        trace=tuple(trace),
        converged=converged,
        iterations_used=len(trace),
    )


def solve_single_view(view: DistanceView, cfg: SolverConfig) -> SolveReport:
    """Plain stress majorization on one view (the single-view special case)."""
    return solve(MultiViewProblem((view,)), cfg)
