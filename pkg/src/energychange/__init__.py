"""Nonparametric multiple change point detection via energy statistics.

Two estimators over a shared divergence core: a divisive bisection search
validated by within-segment permutation tests, and an agglomerative merge
of an initial segmentation driven by a goodness-of-fit statistic. Rand-type
indices and seeded scenario generators support simulation studies.
"""

__version__ = "0.1.0"

from .agglo import AggloResult, apply_penalty, e_agglo, gof, member_from_widths
from .divisive import (
    DivisiveConfig,
    DivisiveResult,
    SplitCandidate,
    best_split,
    e_divisive,
    permutation_test,
)
from .energy import (
    alpha_distance_matrix,
    as_time_series,
    check_alpha,
    e_hat_u,
    e_hat_v,
    merge_update,
    q_hat,
)
from .io import RunRecord, ingest_csv, plot_series_svg, record_from_json, record_to_json
from .metrics import adjusted_rand_index, rand_index, segmentation_to_membership
from .rng import RandomStream
from .simulate import (
    Block,
    Scenario,
    four_block_gaussian,
    generate,
    mean_change,
    mv_correlation,
    mv_covariance,
    mv_mean,
    mv_tail,
    run_study,
    scenario_from_config,
    scenario_to_config,
    stpp_scenario,
    study_cells,
    study_report_csv,
    tail_change,
    variance_change,
)

__all__ = [
    "__version__",
    "AggloResult",
    "Block",
    "DivisiveConfig",
    "DivisiveResult",
    "RandomStream",
    "RunRecord",
    "Scenario",
    "SplitCandidate",
    "adjusted_rand_index",
    "alpha_distance_matrix",
    "apply_penalty",
    "as_time_series",
    "best_split",
    "check_alpha",
    "e_agglo",
    "e_divisive",
    "e_hat_u",
    "e_hat_v",
    "four_block_gaussian",
    "generate",
    "gof",
    "ingest_csv",
    "mean_change",
    "member_from_widths",
    "merge_update",
    "mv_correlation",
    "mv_covariance",
    "mv_mean",
    "mv_tail",
    "permutation_test",
    "plot_series_svg",
    "q_hat",
    "rand_index",
    "record_from_json",
    "record_to_json",
    "run_study",
    "scenario_from_config",
    "scenario_to_config",
    "segmentation_to_membership",
    "stpp_scenario",
    "study_cells",
    "study_report_csv",
    "tail_change",
    "variance_change",
]
