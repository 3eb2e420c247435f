"""Six-cities synthetic benchmark: ground truth, noisy views, baseline.

The benchmark perturbs the true inter-city distance matrix into several
simulated "participant" views of varying reliability and compares
embeddings against the unperturbed truth.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DistanceView, MultiViewProblem, SolverConfig, validate_view
from .errors import KOutOfRangeError, MaskValueError
from .solver import SolveReport, mean_matrix, solve_single_view

CITY_NAMES = ("LA", "SFO", "CHI", "HOU", "NY", "WC")

_CITY_DISTANCES = (
    (0, 380, 2034, 1566, 2824, 2689),
    (380, 0, 2148, 1945, 2946, 2840),
    (2034, 2148, 0, 1085, 821, 715),
    (1566, 1945, 1085, 0, 1653, 1414),
    (2824, 2946, 821, 1653, 0, 237),
    (2689, 2840, 715, 1414, 237, 0),
)

# (K, sigma) per simulated participant, from most careful to most careless.
CITY_NOISE_SETUPS = ((4, 0.3), (4, 0.7), (8, 0.3), (8, 0.7))


@dataclass(frozen=True)
class NoiseSpec:
    """Perturb k distinct pairs with relative Gaussian noise of sd sigma."""

    k: int
    sigma: float
    seed: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise KOutOfRangeError(f"k must be a nonnegative integer, got {self.k}")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


def six_cities() -> DistanceView:
    """True pairwise distances among six US cities (LA, SFO, CHI, HOU, NY, WC)."""
    return validate_view(np.array(_CITY_DISTANCES, dtype=float))


def perturb_view(truth: DistanceView, spec: NoiseSpec) -> DistanceView:
    """Replace k randomly chosen pair distances with noisy estimates.

    Each selected entry is redrawn from Normal(delta_ij, sigma * delta_ij),
    clamped at zero, and mirrored.  Pair selection is uniform without
    replacement over the i < j pairs.  Deterministic given the seed.
    """
    n = truth.n
    iu = np.triu_indices(n, k=1)
    n_pairs = len(iu[0])
    if spec.k > n_pairs:
        raise KOutOfRangeError(
            f"k={spec.k} exceeds the {n_pairs} available pairs"
        )
    rng = np.random.default_rng(spec.seed)
    chosen = rng.choice(n_pairs, size=spec.k, replace=False)
    out = np.array(truth.delta)
    rows, cols = iu[0][chosen], iu[1][chosen]
    old = out[rows, cols]
    drawn = np.maximum(rng.normal(loc=old, scale=spec.sigma * old), 0.0)
    out[rows, cols] = drawn
    out[cols, rows] = drawn
    return validate_view(out, mask=truth.mask)


def city_noise_specs(base_seed: int) -> list:
    """The four standard noise setups with per-view seeds derived from base_seed."""
    return [
        NoiseSpec(k=k, sigma=sigma, seed=base_seed * 4 + v)
        for v, (k, sigma) in enumerate(CITY_NOISE_SETUPS)
    ]


def make_city_problem(specs) -> MultiViewProblem:
    """One perturbed view of the six-cities truth per noise spec."""
    truth = six_cities()
    return MultiViewProblem(tuple(perturb_view(truth, s) for s in specs))


def lc_mds_baseline(problem: MultiViewProblem, cfg: SolverConfig) -> SolveReport:
    """Equal-weight linear combination baseline: single-view solve on the
    element-wise mean of the view matrices.  Requires complete masks."""
    if not problem.is_complete:
        raise MaskValueError("the linear-combination baseline needs complete masks")
    return solve_single_view(validate_view(mean_matrix(problem)), cfg)
