"""Bell-inequality violations of continuous-variable GHZ states in phase space."""

from .bell import (
    BellTerm,
    BellValue,
    ClassCoefficients,
    SettingsTable,
    bell_asymptotic,
    bell_value_equal_settings,
    bell_value_general,
    bell_zero_squeezing,
    class_coefficients,
    mk_expand,
    pi_by_class,
)
from .errors import CapacityExceeded, InvalidArgument, NumericFailure
from .gaussian import (
    GaussianState,
    SymplecticOp,
    beamsplitter,
    build_ghz_state,
    quadratic_form_of,
    squeeze_mode,
    vacuum_state,
    wigner_at,
)
from .optimize import (
    OptimizationResult,
    maximize_asymptotic,
    maximize_over_displacement,
    optimize_phases,
    scan_surface,
)
from .parity import pi_closed_form, pi_from_state

__version__ = "0.1.0"
