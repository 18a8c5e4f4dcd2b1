"""Clustering and separation analytics for distance-kernel random networks.

Nodes sit at unit spacing on a circle (or per-axis on a flat torus) and each
pair links independently with a probability set by an even periodic kernel of
their angular separation.  The package computes mean clustering coefficients
and expected chain counts between node pairs three independent ways: cosine
series analytics, direct numerical quadrature, and Monte Carlo sampling of
whole graphs.  The three routes cross-check each other; ``ringnet
mc-validate`` runs that comparison as a pass/fail battery.
"""

from .kernels import (
    CircleModel,
    CosineSeries,
    DimensionError,
    KernelValidationError,
    ProductKernel,
    TorusModel,
    UniformWindow,
    ZeroMeanDegreeWarning,
    kernel_from_config,
    kernel_to_config,
    mean_degree,
    model_from_config,
    model_to_config,
    validate,
    wrap_angle,
)
from .quadrature import (
    ChainCounts,
    IntegrationResult,
    QuadratureError,
    chain_count_by_quadrature,
    chain_count_torus_grid,
    clustering_by_quadrature,
    clustering_torus_grid,
    discrete_chain_count,
    discrete_mean_degree,
    integrate_periodic,
)
from .fourier import (
    AntipodalChainCount,
    CorrectionCostWarning,
    FourierSeries,
    SeparationCurve,
    UncertainValue,
    antipodal_chain_count_uniform,
    chain_count_leading,
    chain_count_one,
    chain_count_torus,
    chain_count_two,
    chain_count_uniform,
    clustering_from_series,
    clustering_uniform,
    series_from_kernel,
    uniform_window_series,
)
from .montecarlo import (
    CostBudgetError,
    EstimateUndefinedError,
    GraphSample,
    McEstimate,
    SeparationHistogram,
    chain_count_in_sample,
    empirical_chain_count,
    empirical_clustering,
    empirical_separation_histogram,
    estimate_chain_count,
    estimate_clustering,
    estimate_mean_degree,
    estimate_separation_histogram,
    run_trials,
    sample_graph,
    separation_in_sample,
    trial_seed,
)

__version__ = "0.1.0"

__all__ = [
    "AntipodalChainCount",
    "ChainCounts",
    "CircleModel",
    "CorrectionCostWarning",
    "CosineSeries",
    "CostBudgetError",
    "DimensionError",
    "EstimateUndefinedError",
    "FourierSeries",
    "GraphSample",
    "IntegrationResult",
    "KernelValidationError",
    "McEstimate",
    "ProductKernel",
    "QuadratureError",
    "SeparationCurve",
    "SeparationHistogram",
    "TorusModel",
    "UncertainValue",
    "UniformWindow",
    "ZeroMeanDegreeWarning",
    "antipodal_chain_count_uniform",
    "chain_count_by_quadrature",
    "chain_count_in_sample",
    "chain_count_leading",
    "chain_count_one",
    "chain_count_torus",
    "chain_count_torus_grid",
    "chain_count_two",
    "chain_count_uniform",
    "clustering_by_quadrature",
    "clustering_from_series",
    "clustering_torus_grid",
    "clustering_uniform",
    "discrete_chain_count",
    "discrete_mean_degree",
    "empirical_chain_count",
    "empirical_clustering",
    "empirical_separation_histogram",
    "estimate_chain_count",
    "estimate_clustering",
    "estimate_mean_degree",
    "estimate_separation_histogram",
    "integrate_periodic",
    "kernel_from_config",
    "kernel_to_config",
    "mean_degree",
    "model_from_config",
    "model_to_config",
    "run_trials",
    "sample_graph",
    "separation_in_sample",
    "series_from_kernel",
    "trial_seed",
    "uniform_window_series",
    "validate",
    "wrap_angle",
    "__version__",
]
