"""Classical simulator of multi-mode squeezed light.

Squeezed states are modelled as improper complex Gaussian random vectors
produced by a classical Bogoliubov transform; measurement is threshold
detection with exclusive-coincidence post-selection, which reproduces
Bell-CHSH violation curves.
"""

from .linalg import (
    PolarForm,
    SvdResult,
    determinant,
    eig_hermitian,
    hermitian_matrix_function,
    polar_decompose,
    svd,
)
from .model import (
    BELL_SINGLET_ALPHA,
    SEPARABLE_UNIFORM_ALPHA,
    SampleBatch,
    SeparabilityVerdict,
    SqueezingSpec,
    StateMoments,
    analytic_moments,
    bogoliubov_transform,
    empirical_moments,
    impropriety,
    impropriety_isotropic,
    load_xi_file,
    log_density,
    log_density_isotropic,
    mix_seed,
    sample_vacuum,
    separability_threshold,
    symmetric_two_mode_squeezing,
    two_photon_squeezing,
)
from .detection import (
    BellResult,
    EventCounts,
    MeasurementSetting,
    SETTING_PAIRS,
    SideOutcome,
    UndefinedStatisticError,
    bell_statistic,
    classify_events,
    correlation,
    correlation_stderr,
    efficiency,
    run_chsh,
    setting_rotation,
    threshold_detect,
)
from .sweep import CSV_HEADER, SweepConfig, SweepRow, grid_values, run_sweep
from .svgplot import emit_svg
from .validate import CheckResult, format_report, run_validation

__version__ = "0.1.0"

__all__ = [
    "BELL_SINGLET_ALPHA",
    "BellResult",
    "CheckResult",
    "CSV_HEADER",
    "EventCounts",
    "MeasurementSetting",
    "PolarForm",
    "SampleBatch",
    "SeparabilityVerdict",
    "SEPARABLE_UNIFORM_ALPHA",
    "SETTING_PAIRS",
    "SideOutcome",
    "SqueezingSpec",
    "StateMoments",
    "SvdResult",
    "SweepConfig",
    "SweepRow",
    "UndefinedStatisticError",
    "analytic_moments",
    "bell_statistic",
    "bogoliubov_transform",
    "classify_events",
    "correlation",
    "correlation_stderr",
    "determinant",
    "efficiency",
    "eig_hermitian",
    "emit_svg",
    "empirical_moments",
    "format_report",
    "grid_values",
    "hermitian_matrix_function",
    "impropriety",
    "impropriety_isotropic",
    "load_xi_file",
    "log_density",
    "log_density_isotropic",
    "mix_seed",
    "polar_decompose",
    "run_chsh",
    "run_sweep",
    "run_validation",
    "sample_vacuum",
    "separability_threshold",
    "setting_rotation",
    "svd",
    "symmetric_two_mode_squeezing",
    "threshold_detect",
    "two_photon_squeezing",
]
