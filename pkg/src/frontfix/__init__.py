"""American put pricing by a front-fixing explicit finite-difference scheme
with Richardson-extrapolation a posteriori error control."""

from .errors import (
    BlowUpError,
    FrontFixError,
    LatticeError,
    NestingError,
    ParameterError,
    SingularDenominatorError,
    StabilityError,
    ToleranceUnreachableError,
)
from .estimator import AmericanPutPricer
from .grid import Grid, GridSpec, ModelParams, StabilityReport, build_grid, check_stability
from .oracle import (
    LatticeSpec,
    black_scholes_european_put,
    crr_american_put,
    crr_european_put,
)
from .refine import (
    LevelRecord,
    RefinementConfig,
    RefinementReport,
    adaptive_solve,
    nested_grid,
)
from .richardson import (
    ErrorEstimate,
    OrderSchedule,
    Tableau,
    estimate_error,
    estimate_order,
    extrapolate,
    restrict,
)
from .solver import (
    Coefficients,
    PricePoint,
    Solution,
    SolveOptions,
    TimeSlice,
    advance,
    initial_slice,
    price_at,
    solve,
    step_coefficients,
    untransform,
)

__version__ = "0.1.0"

__all__ = [
    "AmericanPutPricer",
    "BlowUpError",
    "Coefficients",
    "ErrorEstimate",
    "FrontFixError",
    "Grid",
    "GridSpec",
    "LatticeError",
    "LatticeSpec",
    "LevelRecord",
    "ModelParams",
    "NestingError",
    "OrderSchedule",
    "ParameterError",
    "PricePoint",
    "RefinementConfig",
    "RefinementReport",
    "SingularDenominatorError",
    "Solution",
    "SolveOptions",
    "StabilityError",
    "StabilityReport",
    "Tableau",
    "TimeSlice",
    "ToleranceUnreachableError",
    "adaptive_solve",
    "advance",
    "black_scholes_european_put",
    "build_grid",
    "check_stability",
    "crr_american_put",
    "crr_european_put",
    "estimate_error",
    "estimate_order",
    "extrapolate",
    "initial_slice",
    "nested_grid",
    "price_at",
    "restrict",
    "solve",
    "step_coefficients",
    "untransform",
]
