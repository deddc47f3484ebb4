"""Rotation intervals and tongue-boundary geometry for the standard
two-parameter family of degree-one circle-map lifts."""

from .errors import (
    AmbiguityError,
    ArnoldTonguesError,
    BadWindowError,
    ContinuationLostError,
    CriticalPointError,
    EmptyPlateauError,
    NoOrbitError,
    RootBracketError,
)
from .maps import (
    MINUS,
    PLUS,
    TWO_PI,
    CriticalSet,
    MonotoneLift,
    Params,
    critical_points,
    deriv,
    envelope,
    eval_lift,
    schwarzian,
)
from .orbits import (
    Itinerary,
    PeriodicOrbit,
    find_periodic_orbits,
    itinerary,
    orbit_pair,
)
from .rotation import (
    Q_MAX_DEFAULT,
    Rational,
    RhoEstimate,
    RotationInterval,
    level_sign,
    rho_bounds_bruteforce,
    rho_exact_rational_test,
    rho_monotone,
    rotation_interval,
    snap_rational,
)
from .sweep import (
    Palette,
    RasterGrid,
    export_csv,
    load_curve_csv,
    load_raster_csv,
    load_region_csv,
    raster,
    render_ppm,
)
from .tongues import (
    BoundaryCurve,
    BoundaryResiduals,
    IntersectionPoint,
    KIND_TO_EDGE,
    LipschitzReport,
    Region,
    boundary_condition_residuals,
    intersect_curves,
    lipschitz_check,
    plateau_edges,
    region_boundary,
    trace_curve,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError",
    "ArnoldTonguesError",
    "BadWindowError",
    "BoundaryCurve",
    "BoundaryResiduals",
    "ContinuationLostError",
    "CriticalPointError",
    "CriticalSet",
    "EmptyPlateauError",
    "IntersectionPoint",
    "Itinerary",
    "KIND_TO_EDGE",
    "LipschitzReport",
    "MINUS",
    "MonotoneLift",
    "NoOrbitError",
    "PLUS",
    "Palette",
    "Params",
    "PeriodicOrbit",
    "Q_MAX_DEFAULT",
    "RasterGrid",
    "Rational",
    "Region",
    "RhoEstimate",
    "RootBracketError",
    "RotationInterval",
    "TWO_PI",
    "boundary_condition_residuals",
    "critical_points",
    "deriv",
    "envelope",
    "eval_lift",
    "export_csv",
    "find_periodic_orbits",
    "intersect_curves",
    "itinerary",
    "level_sign",
    "lipschitz_check",
    "load_curve_csv",
    "load_raster_csv",
    "load_region_csv",
    "orbit_pair",
    "plateau_edges",
    "raster",
    "region_boundary",
    "render_ppm",
    "rho_bounds_bruteforce",
    "rho_exact_rational_test",
    "rho_monotone",
    "rotation_interval",
    "schwarzian",
    "snap_rational",
    "trace_curve",
]
