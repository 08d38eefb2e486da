"""Nonlinear reflection of a single two-level atom in a one-sided bad cavity."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CavityFlipError,
    ConfigError,
    ConvergenceError,
    DegenerateParameterError,
    DegenerateResponseError,
    InvalidParameterError,
    SolverError,
    StepInstabilityError,
    TruncationError,
    ZeroInputError,
)
from .params import AtomCavityParams, RawCavityParams, derive, invert, saturation_scale  # noqa: E402
from .response import (  # noqa: E402
    BlochState,
    DriveCondition,
    ReflectionResponse,
    linear_reflectivity,
    nonlinear_phase_shift,
    output_amplitude,
    response_vs_intensity,
    steady_state,
    weak_field_ratio,
)
from .dynamics import DriveEnvelope, IntegratorConfig, derivative, integrate, relax_to_steady  # noqa: E402
from .sweep import (  # noqa: E402
    find_max_phase,
    intensity_transition,
    phase_spectrum,
    required_beta_for_efficiency,
)
