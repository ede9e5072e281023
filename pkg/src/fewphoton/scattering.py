"""Single- and two-photon S matrices.

Amplitudes of the connected two-photon S matrix are densities: the factor
``δ(p1 + p2 - k1 - k2)`` is stripped, and ``p2`` is always ``k1 + k2 - p1``.

Two independent routes are provided:

* closed forms: :func:`transmission`, :func:`s_aux`, :func:`connected_amplitude`;
* spectral sums over biorthogonal eigenvectors of the effective Hamiltonian:
  :func:`spectral_g` and :func:`spectral_g2_kernel`.

They are tied together by ``1 + G(k) = t_k`` and by the four-term
symmetrisation of the kernel reproducing the connected amplitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PrincipalValuePointError
from .model import ExcitationSector, SystemParams, build_sector

# photon annihilation from sector 2 {|2,g>, |1,e>} to sector 1 {|1,g>, |0,e>}
_A_21 = np.array([[math.sqrt(2.0), 0.0], [0.0, 1.0]])


def _scaled(params: SystemParams, k):
    # (k - Ω)/s and g/s with s = max(|k - Ω|, g); keeps g² from underflowing at k = Ω
    b = k - params.Omega
    s = np.maximum(np.abs(b), params.g)
    s = np.where(s == 0, 1.0, s)
    return b / s, params.g / s


def _denominator(params: SystemParams, k):
    """``(k - ω + iκ/2)(k - Ω) - g²`` divided by ``max(|k - Ω|, g)``."""
    b, gs = _scaled(params, k)
    return (k - params.omega + 0.5j * params.kappa) * b - params.g * gs


def transmission(params: SystemParams, k):
    """Single-photon transmission ``t_k``; unimodular for real ``k``."""
    k = np.asarray(k, dtype=float)
    if params.kappa == 0:
        t = np.ones_like(k, dtype=complex)
    elif params.g == 0:
        # bare cavity; the common factor (k - Ω) cancels
        t = (k - params.omega - 0.5j * params.kappa) / (k - params.omega + 0.5j * params.kappa)
    else:
        # conj(den)/den, written as a pure phase so denormal g cannot give 0/0
        t = np.exp(-2j * np.angle(_denominator(params, k)))
    return t[()] if t.ndim == 0 else t


def s_aux(params: SystemParams, k):
    """Auxiliary amplitudes ``(s_c, s_a)`` of cavity and atom excitation."""
    k = np.asarray(k, dtype=float)
    root_kappa = math.sqrt(params.kappa)
    if params.g == 0:
        s_c = root_kappa / (k - params.omega + 0.5j * params.kappa)
        s_a = np.zeros_like(s_c)
    else:
        b, gs = _scaled(params, k)
        den = _denominator(params, k)
        s_c = root_kappa * b / den
        s_a = root_kappa * gs / den
    if s_c.ndim == 0:
        return s_c[()], s_a[()]
    return s_c, s_a


def two_photon_F(params: SystemParams, k1, k2, sector2: ExcitationSector | None = None):
    """Analytic prefactor ``F(k1, k2)`` of the connected two-photon S matrix."""
    sector2 = sector2 or build_sector(params, 2)
    sc1, sa1 = s_aux(params, k1)
    sc2, sa2 = s_aux(params, k2)
    total = np.asarray(k1) + np.asarray(k2)
    num = 2 * params.g * (sc1 + sc2) + (total - 2 * params.omega + 1j * params.kappa) * (sa1 + sa2)
    den = (total - sector2.e_plus) * (total - sector2.e_minus)
    return 1j * math.sqrt(params.kappa) * params.g / math.pi * num / den


@dataclass(frozen=True)
class TwoPhotonSMatrixEval:
    """``S^C`` at ``(p1, p2 = k1 + k2 - p1; k1, k2)`` with the delta stripped."""

    amplitude: complex
    p1: float
    p2: float
    k1: float
    k2: float


def connected_amplitude(params: SystemParams, p1, k1, k2, sectors=None):
    """Vectorised connected amplitude (in ``p1``); see :func:`connected_s2`."""
    s1, s2 = sectors or (build_sector(params, 1), build_sector(params, 2))
    assert params.kappa == 0 or (s1.e_plus.imag < 0 and s1.e_minus.imag < 0) or params.g == 0
    p1 = np.asarray(p1, dtype=float)
    p2 = k1 + k2 - p1
    F = two_photon_F(params, k1, k2, s2)
    poles = (p1 - s1.e_plus) * (p1 - s1.e_minus) * (p2 - s1.e_plus) * (p2 - s1.e_minus)
    amp = params.kappa * params.g ** 2 * F / poles
    return amp[()] if amp.ndim == 0 else amp


def connected_s2(params: SystemParams, p1: float, k1: float, k2: float) -> TwoPhotonSMatrixEval:
    amp = connected_amplitude(params, p1, k1, k2)
    return TwoPhotonSMatrixEval(complex(amp), float(p1), float(k1 + k2 - p1), float(k1), float(k2))


@dataclass(frozen=True)
class SpectralAmplitudes:
    """Matrix elements between biorthogonal eigenstates.

    Index 0 is the "+" branch, 1 the "-" branch.

    ``vac_a[λ]``      = <0|a|λ>_1
    ``adag_vac[λ]``   = _1<λ̄|a†|0>
    ``a_21[ν, λ]``    = _1<ν̄|a|λ>_2
    ``adag_12[λ, μ]`` = _2<λ̄|a†|μ>_1
    """

    e1: np.ndarray
    e2: np.ndarray
    vac_a: np.ndarray
    adag_vac: np.ndarray
    a_21: np.ndarray
    adag_12: np.ndarray


def spectral_amplitudes(params: SystemParams, sector1: ExcitationSector | None = None,
                        sector2: ExcitationSector | None = None) -> SpectralAmplitudes:
    s1 = sector1 or build_sector(params, 1)
    s2 = sector2 or build_sector(params, 2)
    s1.require_nondegenerate()
    s2.require_nondegenerate()
    r1, l1, r2, l2 = s1.right_vecs, s1.left_vecs, s2.right_vecs, s2.left_vecs
    return SpectralAmplitudes(
        e1=s1.energies, e2=s2.energies,
        vac_a=r1[0, :].copy(),
        adag_vac=l1[:, 0].copy(),
        a_21=l1 @ _A_21 @ r2,
        adag_12=l2 @ _A_21.T @ r1,
    )


def spectral_g(params: SystemParams, k, amps: SpectralAmplitudes | None = None):
    """``G(k) = -iκ Σ_λ <0|a|λ>_1 _1<λ̄|a†|0> / (k - E_{1λ})``.

    Raises :class:`~fewphoton.errors.DegenerateSpectrumError` near the
    single-excitation EP; :func:`transmission` covers that point.
    """
    amps = amps or spectral_amplitudes(params)
    k = np.asarray(k, dtype=float)
    weights = amps.vac_a * amps.adag_vac
    out = -1j * params.kappa * np.sum(weights / (k[..., None] - amps.e1), axis=-1)
    return out[()] if out.ndim == 0 else out


def _kernel_bracket(params, amps, P1, K1, K2):
    # Σ_μν <0|a|ν> X_νμ(P1) _1<μ̄|a†|0> / (K1 - E_1μ), with X the bracket;
    # returned without the (K2 - P1 - E_1ν) denominators
    ladder = (amps.a_21 / (K2 - amps.e2)[None, :]) @ amps.adag_12
    pv = np.outer(amps.adag_vac, amps.vac_a) / (K1 - P1)
    return pv + ladder


def spectral_g2_kernel(params: SystemParams, P1, K1, K2, amps: SpectralAmplitudes | None = None):
    """Two-photon kernel ``𝒢(P1, K1, K2)``.

    Summing the kernel over ``(p1, k1), (p2, k1), (p1, k2), (p2, k2)`` with
    ``K2 = k1 + k2`` gives the connected amplitude; the principal-value poles
    at ``P1 = K1`` cancel pairwise in that sum. The two-excitation ladder term
    enters the bracket with a plus sign; that is the sign that makes the sum
    equal :func:`connected_amplitude` and vanish for a bare cavity (``g = 0``).
    """
    if P1 == K1:
        raise PrincipalValuePointError("kernel is singular at P1 == K1 (principal-value point)")
    amps = amps or spectral_amplitudes(params)
    bracket = _kernel_bracket(params, amps, P1, K1, K2)
    left = amps.vac_a / (K2 - P1 - amps.e1)
    right = amps.adag_vac / (K1 - amps.e1)
    return params.kappa ** 2 / (2j * math.pi) * (left @ bracket @ right)


def kernel_numerator(params: SystemParams, P1, K1, K2, amps: SpectralAmplitudes | None = None):
    """``ℬ(P1, K1, K2) = 2πi 𝒢 (K2 - P1 - E_{1,+})(K2 - P1 - E_{1,-})``.

    Evaluated in pole-free form, so complex ``P1`` at the residues
    ``K2 - E_{1,±}`` is allowed.
    """
    amps = amps or spectral_amplitudes(params)
    bracket = _kernel_bracket(params, amps, P1, K1, K2)
    left = amps.vac_a * (K2 - P1 - amps.e1[::-1])
    right = amps.adag_vac / (K1 - amps.e1)
    return params.kappa ** 2 * (left @ bracket @ right)


def symmetrized_kernel_sum(params: SystemParams, p1, k1, k2, amps: SpectralAmplitudes | None = None):
    """Four-term kernel sum that reproduces the connected amplitude."""
    amps = amps or spectral_amplitudes(params)
    total = k1 + k2
    p2 = total - p1
    return sum(spectral_g2_kernel(params, P, K, total, amps)
               for P in (p1, p2) for K in (k1, k2))
