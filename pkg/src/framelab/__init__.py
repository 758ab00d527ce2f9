"""Numerical toolkit for orbit frames of diagonal and weighted composition operators."""

__version__ = "0.1.0"

from .disk import (
    DiskPoint,
    DiskSequence,
    FiniteBlaschke,
    carleson_constant,
    is_interpolating,
    mobius,
    pseudo_hyperbolic,
)
from .exponents import ExponentSet, make_exponent_set
from .orbits import (
    DiagonalOperator,
    FrameBoundsReport,
    OrbitFrameSystem,
    check_carleson_frame,
    frame_bounds,
    frame_operator_closed,
    frame_operator_partial,
    subsample_orbit,
)
from .muntz import AtomicMeasure, muntz_szasz_sum, pointwise_condition, s_of_x
from .interpolation import (
    InterpolationProblem,
    KernelFamily,
    mcphail_check,
    min_norm_interpolant,
    multi_weight_interpolant,
    riesz_basic_test,
)
from .hardy import (
    LinearFractionalMap,
    RationalWeight,
    cowen_adjoint_factors,
    invertibility_check,
    isometry_rkh_check,
    multiplication_orbit_frame,
    unitarity_check,
    wco_matrix,
)
from .model import join_J, k0_theta, model_basis, parseval_orbit_check, split_J

__all__ = [name for name in dir() if not name.startswith("_")]
