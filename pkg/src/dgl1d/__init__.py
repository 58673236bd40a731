"""Spectral and variational toolkit for the half-line oscillator with a
Neumann wall, the associated one-dimensional Ginzburg-Landau-type energy,
and the profile-perturbed operator, with numeric certification of the
known inequalities between them."""

from .kernel import (GridSpec, RootBracket, HERMITE_BACKEND, eig_tridiag,
                     find_root, hermite_h, minimize_1d, quad)
from .degennes import (EigenResult, UniversalConstants, analytic_lower_bounds,
                       asymptotic_check, dirichlet_mu, mu, mu_prime,
                       universal_constants, virial_check)
from .glmin import (MinimizerProfile, ZetaRecord, identity_suite,
                    minimize_functional, norm_bounds, surface_energy, zeta)
from .perturbed import (PerturbedSpectrum, certify_local_minimum,
                        certify_theorem_largenu, spectrum,
                        stationary_identities, temple_bound)
from .report import CertificateReport

__version__ = "0.1.0"

__all__ = [
    "GridSpec", "RootBracket", "HERMITE_BACKEND", "eig_tridiag", "find_root",
    "hermite_h", "minimize_1d", "quad",
    "EigenResult", "UniversalConstants", "analytic_lower_bounds",
    "asymptotic_check", "dirichlet_mu", "mu", "mu_prime",
    "universal_constants", "virial_check",
    "MinimizerProfile", "ZetaRecord", "identity_suite", "minimize_functional",
    "norm_bounds", "surface_energy", "zeta",
    "PerturbedSpectrum", "certify_local_minimum", "certify_theorem_largenu",
    "spectrum", "stationary_identities", "temple_bound",
    "CertificateReport",
]
