"""Slowest-decaying part of the N-photon bound state.

At large separations the N-photon bound state is governed by the
single-excitation poles only and takes a pairwise product form over the
ordering of the photon coordinates,

    B(x_1..x_N) ∝ Σ_Q D_1(x_Q1 - x_Q2) θ(x_Q1 - x_Q2) Π_{j>=2} D_j(x_Qj - x_Qj+1) θ(...),

with ``D_1`` a two-photon residue combination (:func:`aux_two_decay`) and the
remaining factors single-photon ones (:func:`aux_single_decay`). At resonance
these collapse to ``f`` and :func:`g_tau`.

Coincident coordinates
----------------------
The step functions are evaluated by their symmetric limit: an ordering ``Q``
that is non-increasing (rather than strictly decreasing) gets weight
``1 / Π m_i!`` for tie groups of sizes ``m_i``. All such orderings give the
same product, so the envelope is continuous across coincidences.

Only the slowest-decay sector is computed; terms from multi-excitation poles
``E_{n,λ}``, ``n >= 2``, decay faster and are not included.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .boundstate import Regime, _require_resonant, f_tau, resonant_regime
from .errors import ComplexityLimitError, InvalidArgumentError
from .model import SystemParams, build_sector
from .numerics import slowest_decay_rate
from .scattering import SpectralAmplitudes, kernel_numerator, spectral_amplitudes

MAX_RESONANT_N = 8
MAX_GENERAL_N = 6


@dataclass(frozen=True)
class NPhotonEnvelope:
    n: int
    coordinates: np.ndarray
    value: complex
    resonant: bool


def g_tau(params: SystemParams, tau):
    """Single-photon decay factor ``g(τ)`` of the resonant envelope, ``g(0) = 0``.

    ``sin(rτ)/r e^{-κτ/4}`` (κ < 4g), ``|τ| e^{-g|τ|}`` (κ = 4g), and
    ``sinh(sτ)/s e^{-κτ/4}`` with ``s = √(κ²/16 - g²)`` (κ > 4g).
    """
    _require_resonant(params, "g_tau")
    t = np.abs(np.asarray(tau, dtype=float))
    quarter = 0.25 * params.kappa
    g = params.g
    r2 = (g - quarter) * (g + quarter)
    regime = resonant_regime(params)
    if regime is Regime.CRITICAL:
        out = t * np.exp(-g * t)
    elif regime is Regime.UNDERDAMPED:
        r = math.sqrt(r2)
        out = np.sin(r * t) / r * np.exp(-quarter * t)
    else:
        s = math.sqrt(-r2)
        out = 0.5 * (np.exp((s - quarter) * t) - np.exp(-(s + quarter) * t)) / s
    return out[()] if out.ndim == 0 else out


def _poles(params: SystemParams):
    s1 = build_sector(params, 1)
    s1.require_nondegenerate()
    return s1.e_plus, s1.e_minus


def aux_two_decay(params: SystemParams, k_r1: float, k_r2: float, x,
                  amps: SpectralAmplitudes | None = None):
    """``F_{k1,k2}(x)``: residue combination of the two-photon kernel numerator.

    ``[ℬ(K - E_+, k1, K) e^{-iE_+ x} - ℬ(K - E_-, k1, K) e^{-iE_- x}] / (E_+ - E_-)``
    with ``K = k1 + k2``. Not defined at the single-excitation EP.
    """
    e_plus, e_minus = _poles(params)
    amps = amps or spectral_amplitudes(params)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidArgumentError("separation x must be non-negative")
    K = k_r1 + k_r2
    b_plus = kernel_numerator(params, K - e_plus, k_r1, K, amps)
    b_minus = kernel_numerator(params, K - e_minus, k_r1, K, amps)
    out = (b_plus * np.exp(-1j * e_plus * x) - b_minus * np.exp(-1j * e_minus * x)) / (e_plus - e_minus)
    return out[()] if out.ndim == 0 else out


def residue_weight(params: SystemParams, k):
    """Numerator ``𝒜(k) = -iκ(k - Ω)`` of ``G(k) = 𝒜(k) / ((k - E_+)(k - E_-))``."""
    return -1j * params.kappa * (np.asarray(k) - params.Omega)


def aux_single_decay(params: SystemParams, k_next: float, x):
    """``F_k(x)``: ``[𝒜(E_+) e^{-iE_+ x}/(k - E_+) - 𝒜(E_-) e^{-iE_- x}/(k - E_-)] / (E_+ - E_-)``."""
    e_plus, e_minus = _poles(params)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise InvalidArgumentError("separation x must be non-negative")
    a_plus = residue_weight(params, e_plus) / (k_next - e_plus)
    a_minus = residue_weight(params, e_minus) / (k_next - e_minus)
    out = (a_plus * np.exp(-1j * e_plus * x) - a_minus * np.exp(-1j * e_minus * x)) / (e_plus - e_minus)
    return out[()] if out.ndim == 0 else out


def _check_coords(coords, cap):
    x = np.asarray(coords, dtype=float)
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise InvalidArgumentError("coordinates must be a finite 1-D array")
    if x.size < 2:
        raise InvalidArgumentError("need at least two photons")
    if x.size > cap:
        raise ComplexityLimitError(f"n = {x.size} exceeds the permutation-sum cap of {cap}")
    return x


def _orderings(x, exhaustive):
    """Yield ``(Q, weight)`` for the orderings surviving the step functions."""
    n = x.size
    if not exhaustive:
        q = tuple(np.argsort(-x, kind="stable"))
        yield q, 1.0
        return
    ties = Counter(x.tolist())
    weight = 1.0 / math.prod(math.factorial(m) for m in ties.values())
    for q in itertools.permutations(range(n)):
        xs = x[list(q)]
        if np.all(np.diff(xs) <= 0):
            yield q, weight


def envelope_resonant(params: SystemParams, coords, exhaustive: bool = False) -> NPhotonEnvelope:
    """``Σ_Q f(x_Q1 - x_Q2) Π_{j=2}^{N-1} g(x_Qj - x_Qj+1)`` with step functions.

    ``exhaustive=True`` runs the literal sum over all ``N!`` orderings; the
    default evaluates only the descending ordering, which is the single
    surviving term (ties are handled by the symmetric limit).
    """
    _require_resonant(params, "envelope_resonant")
    x = _check_coords(coords, MAX_RESONANT_N)
    total = 0.0
    for q, weight in _orderings(x, exhaustive):
        xs = x[list(q)]
        gaps = xs[:-1] - xs[1:]
        term = f_tau(params, gaps[0])
        for gap in gaps[1:]:
            term *= g_tau(params, gap)
        total += weight * term
    return NPhotonEnvelope(x.size, x, complex(total), True)


def envelope_general(params: SystemParams, k_list, coords) -> NPhotonEnvelope:
    """Slowest-decay envelope for arbitrary incident frequencies.

    Double sum over photon orderings ``Q`` and frequency assignments ``R``::

        √N!/(2π)^{N/2} Σ_{Q,R} F_{k_R1,k_R2}(x_Q1 - x_Q2) e^{i(k_R1 + k_R2) x_Q1}
                              Π_{j=2}^{N-1} F_{k_R(j+1)}(x_Qj - x_Qj+1) e^{i k_R(j+1) x_Qj}

    Only orderings with non-increasing coordinates contribute.
    """
    x = _check_coords(coords, MAX_GENERAL_N)
    ks = np.asarray(k_list, dtype=float)
    if ks.shape != x.shape:
        raise InvalidArgumentError("k_list and coords must have the same length")
    amps = spectral_amplitudes(params)
    n = x.size
    pair_cache: dict = {}
    total = 0.0j
    for q, weight in _orderings(x, exhaustive=True):
        xs = x[list(q)]
        gaps = xs[:-1] - xs[1:]
        for r in itertools.permutations(range(n)):
            kr = ks[list(r)]
            key = (kr[0], kr[1], gaps[0])
            if key not in pair_cache:
                pair_cache[key] = aux_two_decay(params, kr[0], kr[1], gaps[0], amps)
            term = pair_cache[key] * np.exp(1j * (kr[0] + kr[1]) * xs[0])
            for j in range(1, n - 1):
                term *= aux_single_decay(params, kr[j + 1], gaps[j]) * np.exp(1j * kr[j + 1] * xs[j])
            total += weight * term
    prefactor = math.sqrt(math.factorial(n)) / (2.0 * math.pi) ** (n / 2.0)
    resonant = bool(np.all(ks == params.omega) and params.omega == params.Omega)
    return NPhotonEnvelope(n, x, complex(prefactor * total), resonant)


def gap_decay_rate(params: SystemParams, n: int, gap_index: int, fixed_gap: float | None = None,
                   span: float | None = None, points: int = 384) -> float:
    """Decay rate of the resonant envelope as one nearest-neighbour gap grows.

    Photons sit in descending order with every gap equal to ``fixed_gap``
    (default ``1/g``) except gap ``gap_index`` (0-based), which is swept over
    the last two-thirds of ``[0, span]``; the rate comes from a two-mode fit.
    """
    if not 0 <= gap_index < n - 1:
        raise InvalidArgumentError("gap_index out of range")
    _require_resonant(params, "gap_decay_rate")
    if fixed_gap is None:
        fixed_gap = 1.0 / params.g
    if span is None:
        span = 12.0 / min(0.25 * params.kappa, params.g)
    sweep = np.linspace(span / 3.0, span, points)
    values = np.empty(points)
    for i, gap in enumerate(sweep):
        gaps = np.full(n - 1, fixed_gap)
        gaps[gap_index] = gap
        coords = np.concatenate([[0.0], -np.cumsum(gaps)])
        values[i] = envelope_resonant(params, coords).value.real
    return slowest_decay_rate(sweep, values, n_modes=2)
