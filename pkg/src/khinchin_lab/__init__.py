"""Numerical checks of sharp Khinchin-type inequalities for perturbed random signs and sphere vectors."""

from .dist import (Distribution1D, RadialDist3D, UnitVector, make_perturbed_rademacher,
                   make_radial, parse_dist_spec)
from .perturbed import phi3, phi3_prime, psi, psi_prime
from .report import LemmaReport, Quantity, Verdict
from .specialfn import ball_I, phi0, psi0, psi0_prime
from .verify import (MomentEstimate, exact_rademacher_mean, fourier_mean, gf_neg_moment,
                     verify_ball, verify_szarek)

__version__ = "0.1.0"

__all__ = [
    "Distribution1D", "RadialDist3D", "UnitVector", "make_perturbed_rademacher", "make_radial",
    "parse_dist_spec", "psi", "psi_prime", "phi3", "phi3_prime", "LemmaReport", "Quantity",
    "Verdict", "psi0", "psi0_prime", "ball_I", "phi0", "MomentEstimate", "exact_rademacher_mean",
    "fourier_mean", "gf_neg_moment", "verify_ball", "verify_szarek", "__version__",
]
