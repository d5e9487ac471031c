"""ricekit: exact binomial/Poisson transforms, Rice and inverse-Laplace
contour machinery, and average-case trie cost analysis."""

__version__ = "0.1.0"

from .binomial import pi_transform, pi_involution_check, poisson_transform_eval
from .charlier import (charlier_tau, charlier_truncated_estimate,
                       js_admissibility_scan, poisson_derivatives)
from .laplace import (G_ratio, HatPhiForm, TwistedGammaSpec, bromwich_inverse,
                      hat_phi_closed_form, hat_phi_for_pair,
                      psi_singular_expansion, psi_via_laplace, tameness_probe,
                      twisted_gamma, twisted_gamma_closed_form)
from .rice import (AnalyticFunctionHandle, AsymptoticTerm, PoleSpec,
                   laurent_coefficients, log_gamma, newton_psi, rice_kernel,
                   rice_recover_f, shift_left_asymptotics)
from .sequences import (BasicSeq, GrowthProfile, PlussedSeq, SequenceSpec,
                        ShiftedSeq, TabulatedSeq, Toll, canonicalize,
                        format_spec, lifting_phi, parse_spec, plus_modify,
                        shift_T, sigma)
from .tries import (FitReport, MemorylessSource, TrieStats,
                    asymptotic_constant_fit, entropy, exact_mean_recurrence,
                    lambda_series, mean_via_rice_pair, poisson_mean_harmonic,
                    simulate_trie)

__all__ = [name for name in dir() if not name.startswith("_")]
