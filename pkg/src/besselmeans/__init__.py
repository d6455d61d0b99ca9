"""Weighted spherical means, Bessel translations and Fourier-Bessel reconstruction."""
from .config import ConfigError, RunConfig
from .fields import (
    BUILTIN_FIELDS,
    EvenField,
    MultiIndex,
    SeparableField,
    builtin_field,
    gaussian,
    j_gamma_field,
    one,
    poly_gaussian,
    radial_field,
)
from .hankel import GridTable, fbt_forward, fbt_inverse, grid_transform, inversion_constant, transformed_field
from .means import (
    ball_integral,
    evaluate_iterated,
    iterated_alpha_beta,
    iterated_direct,
    iterated_via_kernel,
    iterated_via_translation,
    sphere_constant,
    spherical_mean,
)
from .quadrature import QuadOrders, gauss_jacobi, gauss_legendre, sphere_rule
from .reconstruct import (
    EwaldProblem,
    SupportError,
    make_phantom,
    reconstruct_double_sphere,
    reconstruct_radial,
)
from .special import bessel_j, gamma, j_gamma, normalized_j
from .translation import poisson, shift1d, shift1d_kernel, shift_nd
from .verify import VerificationReport, run_suite

__version__ = "0.1.0"
