"""Simulation-based confidence regions from box-acceptance depth sampling.

Propose parameters uniformly on a bounded support, simulate pseudo-data,
accept a proposal when the observed summary statistic falls inside the
coordinate-wise box spanned by the simulated summaries, estimate the
resulting depth surface by kernel density estimation, and read off point
estimates, calibrated confidence regions, and replicated coverage studies.
"""

from .models import (CapabilityError, GaussianLocationModel, LogisticRegressionModel,
                     MixtureModel, Model, MultivariateTModel, RickerModel, build_model)
from .sampler import (BoxRegion, SamplerConfig, SamplerOutput, SupportDiagnostic,
                      TrialSimulationError, box_contains, build_box, propose,
                      run_sampler, scalar_acceptance_oracle, support_diagnostic)
from .depth import (BandwidthSelection, DepthSurface, depth_max, eval_depth,
                    fit_depth_surface, knn_depth, select_bandwidth)
from .regions import (DEPTH_QUANTILE, LEVEL_SET_ALPHA_M, SCALAR_EXACT_EQUITAIL,
                      ConfidenceRegion, RegionRule, ScalarInterval, build_region,
                      export_region_grid, member, region_threshold, scalar_interval,
                      surface_threshold)
from .harness import (CoverageReport, CoverageStudySpec, LengthReport, MedianReport,
                      ScalingReport, SVariabilityReport, abc_ball_acceptance,
                      box_acceptance_curve, run_coverage_study, run_length_study,
                      run_lrt_coverage, run_median_unbiasedness_study,
                      run_s_variability_study, run_scaling_study)
from .rng import derived_rng, derived_seed

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # models
    "Model", "GaussianLocationModel", "LogisticRegressionModel", "MultivariateTModel",
    "MixtureModel", "RickerModel", "build_model", "CapabilityError",
    # sampler
    "BoxRegion", "SamplerConfig", "SamplerOutput", "SupportDiagnostic",
    "TrialSimulationError", "propose", "build_box", "box_contains", "run_sampler",
    "scalar_acceptance_oracle", "support_diagnostic",
    # depth
    "BandwidthSelection", "DepthSurface", "select_bandwidth", "fit_depth_surface",
    "eval_depth", "knn_depth", "depth_max",
    # regions
    "RegionRule", "ConfidenceRegion", "ScalarInterval", "LEVEL_SET_ALPHA_M",
    "SCALAR_EXACT_EQUITAIL", "DEPTH_QUANTILE", "region_threshold",
    "surface_threshold", "build_region", "member", "scalar_interval",
    "export_region_grid",
    # harness
    "CoverageStudySpec", "CoverageReport", "ScalingReport", "SVariabilityReport",
    "LengthReport", "MedianReport", "run_coverage_study", "run_lrt_coverage",
    "run_scaling_study", "run_s_variability_study", "run_length_study",
    "run_median_unbiasedness_study", "abc_ball_acceptance", "box_acceptance_curve",
    # rng
    "derived_seed", "derived_rng",
]
