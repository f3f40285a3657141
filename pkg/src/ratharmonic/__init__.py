"""Zeros of rational harmonic functions conj(r(z)) - z and n-point lens images."""
from .critical import CurveSet, orientation_at, trace_critical_set
from .errors import (
    CoincidentMasses,
    ContourTooClose,
    DegreeTooLow,
    HypothesisViolation,
    NotApplicable,
    NumericalFailure,
    RatHarmonicError,
)
from .lensing import (
    ImageSet,
    LensConfig,
    RadialBlob,
    find_images,
    find_images_extended,
    lens_to_rational,
    parity_check,
    polygon_lens,
    reduce_extended,
)
from .poly import ComplexPolynomial, coprime
from .rational import RationalFunction, five_zero_example
from .roots import RootOptions, RootSet, find_roots
from .solver import (
    HarmonicZero,
    Orientation,
    SolveOptions,
    SolveReport,
    build_Q,
    critical_orbit_census,
    fixed_point_candidates,
    pole_orders,
    solve_zeros,
    verify_argument_principle,
    winding,
)

__version__ = "0.1.0"
