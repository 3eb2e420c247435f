"""Metric MDS on multiple input distance matrices with learned view weights."""

from .core import (
    Configuration,
    DistanceView,
    MultiViewProblem,
    SolverConfig,
    ViewWeights,
    objective,
    per_view_stress,
    stress,
    uniform_weights,
    validate_view,
)
from .errors import MvmdsError
from .io import (
    ProblemManifest,
    load_problem,
    procrustes_align,
    read_manifest,
    read_matrix_csv,
    read_report_json,
    write_matrix_csv,
    write_report_json,
    write_scatter_svg,
)
from .metrics import (
    ClusteringScores,
    LabeledEmbedding,
    RetrievalScores,
    clustering_scores,
    kmeans,
    retrieval_scores,
)
from .solver import (
    IterationRecord,
    SolveReport,
    build_b_matrix,
    build_v_matrix,
    initialize,
    mean_matrix,
    pseudoinverse,
    solve,
    solve_single_view,
    update_configuration,
    update_weights,
)
from .synth import (
    CITY_NAMES,
    NoiseSpec,
    city_noise_specs,
    lc_mds_baseline,
    make_city_problem,
    perturb_view,
    six_cities,
)

__version__ = "0.1.0"

__all__ = [
    "CITY_NAMES",
    "ClusteringScores",
    "Configuration",
    "DistanceView",
    "IterationRecord",
    "LabeledEmbedding",
    "MultiViewProblem",
    "MvmdsError",
    "NoiseSpec",
    "ProblemManifest",
    "RetrievalScores",
    "SolveReport",
    "SolverConfig",
    "ViewWeights",
    "build_b_matrix",
    "build_v_matrix",
    "city_noise_specs",
    "clustering_scores",
    "initialize",
    "kmeans",
    "lc_mds_baseline",
    "load_problem",
    "make_city_problem",
    "mean_matrix",
    "objective",
    "per_view_stress",
    "perturb_view",
    "procrustes_align",
    "pseudoinverse",
    "read_manifest",
    "read_matrix_csv",
    "read_report_json",
    "retrieval_scores",
    "six_cities",
    "solve",
    "solve_single_view",
    "stress",
    "uniform_weights",
    "update_configuration",
    "update_weights",
    "validate_view",
    "write_matrix_csv",
    "write_report_json",
    "write_scatter_svg",
]
