"""Numerical verification of spectral identities for the Jacobi theta
function: special-function kernels, modular-curve quadrature, theta and
Eisenstein evaluators, Hecke operators, and the verification harness."""

from .specfun import (
    DomainError,
    PoleError,
    SpectralPoint,
    bessel_k,
    divisor_sigma,
    gamma_complex,
    xi,
    zeta_complex,
)
from .hyperbolic import (
    HalfPlanePoint,
    IntegerMatrix,
    QuadratureGrid,
    build_grid,
    coset_reps_gamma0_4,
    height,
    inner_product,
    reduce_to_fundamental,
)
from .thetaforms import (
    TruncationPolicy,
    E_incomplete,
    f_profile,
    jacobi_theta,
    squared_theta_direct,
    squared_theta_poisson,
    squared_theta_reduced,
)
from .eisenstein import (
    contour_reconstruct,
    eisenstein_direct,
    eisenstein_fourier,
    eisenstein_star,
    mellin_f,
)
from .hecke import (
    HeckeCosetSystem,
    hecke_apply,
    hecke_eigenvalue_eisenstein,
    hecke_selfadjointness_residual,
)
from .harness import ObservablePhi, RunConfig, VerificationReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "E_incomplete",
    "HalfPlanePoint",
    "HeckeCosetSystem",
    "IntegerMatrix",
    "ObservablePhi",
    "PoleError",
    "QuadratureGrid",
    "RunConfig",
    "SpectralPoint",
    "TruncationPolicy",
    "VerificationReport",
    "bessel_k",
    "build_grid",
    "contour_reconstruct",
    "coset_reps_gamma0_4",
    "divisor_sigma",
    "eisenstein_direct",
    "eisenstein_fourier",
    "eisenstein_star",
    "f_profile",
    "gamma_complex",
    "hecke_apply",
    "hecke_eigenvalue_eisenstein",
    "hecke_selfadjointness_residual",
    "height",
    "inner_product",
    "jacobi_theta",
    "mellin_f",
    "reduce_to_fundamental",
    "run_suite",
    "squared_theta_direct",
    "squared_theta_poisson",
    "squared_theta_reduced",
    "xi",
    "zeta_complex",
    "__version__",
]
