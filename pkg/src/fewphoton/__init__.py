"""Few-photon transport through a waveguide coupled to a Jaynes-Cummings system.

Non-Hermitian excitation-sector spectra and exceptional points, one- and
two-photon S matrices, two- and N-photon bound states and the output
second-order correlation, with numerical cross-checks of every closed form.
"""
from .boundstate import (BoundStateProfile, Regime, bound_state_prefactor, default_tau_grid, f_tau,
                         generic_bound_profile, oracle_bound_profile, resonant_profile, resonant_regime,
                         tail_decay_rate)
from .correlation import CorrelationCurve, approach_rate, g2_asymptote, g2_curve, g2_resonant
from .errors import (ComplexityLimitError, DegenerateSpectrumError, DomainError, FewPhotonError,
                     InsufficientDataError, InvalidArgumentError, NumericalInstabilityError,
                     PrincipalValuePointError, QuadratureWarning)
from .model import (ExcitationSector, SpectrumSweep, SystemParams, build_sector, eigenvalues,
                    exceptional_point_kappa, is_resonant, sector_matrix, sweep_spectrum)
from .nphoton import (NPhotonEnvelope, aux_single_decay, aux_two_decay, envelope_general, envelope_resonant,
                      g_tau, gap_decay_rate)
from .numerics import (QuadConfig, QuadResult, adaptive_integrate, fit_damped_modes, fit_exp_rate,
                       slowest_decay_rate)
from .scattering import (SpectralAmplitudes, TwoPhotonSMatrixEval, connected_amplitude, connected_s2,
                         s_aux, spectral_amplitudes, spectral_g, spectral_g2_kernel, symmetrized_kernel_sum,
                         transmission, two_photon_F)

__version__ = "0.1.0"
