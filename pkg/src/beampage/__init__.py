"""beampage: analytic models and a cycle-driven simulator for feedback-activated
beam paging in directional multi-beam cellular systems."""

from .accounting import DEFAULT_COST_MODEL, ConfigurationError, CostModel
from .activation_model import (
    ActivationModelParams,
    ActivationProfile,
    GainParams,
    MonteCarloEstimate,
    Pmf,
    activation_profile,
    conditional_active_pmf,
    expected_par_count,
    expected_unique_active_beams,
    gain_factor,
    monte_carlo_unique_beams,
)
from .combinatorics import (
    LogCount,
    TruncatedPoisson,
    log_binomial,
    surjection_count,
    surjection_count_exact,
    truncated_poisson,
)
from .engine import (
    CycleMetrics,
    MetricsSummary,
    SimConfig,
    SimulationResult,
    draw_paging_arrivals,
    populate_ues,
    run_simulation,
)
from .experiments import (
    AnalyticGrid,
    ExperimentSpec,
    ResultRow,
    compare_to_baseline,
    read_results_csv,
    run_experiment,
    write_results_csv,
)
from .geometry import (
    BeamTiling,
    MobilityClass,
    TrackingArea,
    beam_of,
    build_grid,
    build_tracking_area,
    make_beam_tiling,
    serving_cell,
    split_population,
    step_random_walk,
)
from .protocols import (
    DliBroadcast,
    GnbBeamState,
    PageQueueEntry,
    SchemeKind,
    SchemeName,
    UePagingKnowledge,
    end_of_cycle,
    gnb_collect_pars,
    gnb_emit_dli,
    gnb_page,
    ue_cycle_decision,
)

__version__ = "0.1.0"

__all__ = [
    "ActivationModelParams",
    "ActivationProfile",
    "AnalyticGrid",
    "BeamTiling",
    "ConfigurationError",
    "CostModel",
    "CycleMetrics",
    "DEFAULT_COST_MODEL",
    "DliBroadcast",
    "ExperimentSpec",
    "GainParams",
    "GnbBeamState",
    "LogCount",
    "MetricsSummary",
    "MobilityClass",
    "MonteCarloEstimate",
    "PageQueueEntry",
    "Pmf",
    "ResultRow",
    "SchemeKind",
    "SchemeName",
    "SimConfig",
    "SimulationResult",
    "TrackingArea",
    "TruncatedPoisson",
    "UePagingKnowledge",
    "activation_profile",
    "beam_of",
    "build_grid",
    "build_tracking_area",
    "compare_to_baseline",
    "conditional_active_pmf",
    "draw_paging_arrivals",
    "end_of_cycle",
    "expected_par_count",
    "expected_unique_active_beams",
    "gain_factor",
    "gnb_collect_pars",
    "gnb_emit_dli",
    "gnb_page",
    "log_binomial",
    "make_beam_tiling",
    "monte_carlo_unique_beams",
    "populate_ues",
    "read_results_csv",
    "run_experiment",
    "run_simulation",
    "serving_cell",
    "split_population",
    "step_random_walk",
    "surjection_count",
    "surjection_count_exact",
    "truncated_poisson",
    "ue_cycle_decision",
    "write_results_csv",
]
