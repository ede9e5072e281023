"""Two-photon bound state as a function of photon separation.

The output bound state for incident frequencies ``k1, k2`` is

    B(x1, x2) = 1/(4√2 π) ∫ dp1 dp2 S^C (e^{i p1 x1 + i p2 x2} + e^{i p1 x2 + i p2 x1}),

which factorises as ``exp(i (k1 + k2) x_c) * b(τ)`` with centre of mass
``x_c = (x1 + x2)/2`` and separation ``τ = x1 - x2``. Profiles store ``b(τ)``;
the centre-of-mass frequency ``k1 + k2`` is kept as metadata only.

Three routes to ``b(τ)``:

``resonant_profile``       closed form ``prefactor * f(τ)`` (``k1 = k2 = ω = Ω``)
``generic_bound_profile``  residues of the two single-excitation poles, or the
                           double pole at the exceptional point
``oracle_bound_profile``   direct adaptive quadrature of the integral above
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError, InsufficientDataError, InvalidArgumentError, NumericalInstabilityError
from .model import SystemParams, build_sector, is_resonant
from .numerics import QuadConfig, adaptive_integrate, fit_exp_rate, slowest_decay_rate
from .scattering import connected_amplitude, two_photon_F

#: |κ - 4g| below this many g selects the critical-damping formula
SEAM_TOL = 1e-9
#: generic profiles between the EP tolerance and this relative gap are double-checked
SEAM_CHECK = 1e-6
UNDERFLOW_FLOOR = 1e-280


class Regime(str, Enum):
    UNDERDAMPED = "underdamped"
    CRITICAL = "critical"
    OVERDAMPED = "overdamped"


def resonant_regime(params: SystemParams) -> Regime:
    g, kappa = params.g, params.kappa
    if abs(kappa - 4 * g) < SEAM_TOL * g:
        return Regime.CRITICAL
    return Regime.UNDERDAMPED if kappa < 4 * g else Regime.OVERDAMPED


def _require_resonant(params: SystemParams, what: str):
    if not is_resonant(params):
        raise DomainError(f"{what} is a resonant closed form (omega == Omega); "
                          "use generic_bound_profile off resonance")
    if params.g <= 0 or params.kappa <= 0:
        raise DomainError(f"{what} needs g > 0 and kappa > 0")


def _damping(params: SystemParams):
    quarter = 0.25 * params.kappa
    g = params.g
    # (g - κ/4)(g + κ/4) keeps the seam accurate
    return quarter, (g - quarter) * (g + quarter)


def f_tau(params: SystemParams, tau):
    """Separation profile ``f(τ)`` of the resonant bound state, ``f(0) = 1``.

    Underdamped (κ < 4g): ``(cos rτ + (κ/4r) sin rτ) e^{-κτ/4}``, ``r = √(g² - κ²/16)``;
    critical: ``(1 + g|τ|) e^{-g|τ|}``; overdamped: cosh/sinh analogue.
    """
    _require_resonant(params, "f_tau")
    t = np.abs(np.asarray(tau, dtype=float))
    gamma, r2 = _damping(params)
    regime = resonant_regime(params)
    if regime is Regime.CRITICAL:
        g = params.g
        out = (1 + g * t) * np.exp(-g * t)
    elif regime is Regime.UNDERDAMPED:
        r = math.sqrt(r2)
        out = (np.cos(r * t) + gamma / r * np.sin(r * t)) * np.exp(-gamma * t)
    else:
        s = math.sqrt(-r2)
        # cosh and sinh folded into the exponential to avoid overflow
        grow = np.exp((s - gamma) * t)
        fall = np.exp(-(s + gamma) * t)
        out = 0.5 * (grow + fall) + gamma / s * 0.5 * (grow - fall)
    return out[()] if out.ndim == 0 else out


def bound_state_prefactor(params: SystemParams) -> float:
    """``-4κ² / (√2 π (κ² + 4g²))``, the resonant amplitude at zero separation."""
    k2 = params.kappa ** 2
    return -4.0 * k2 / (math.sqrt(2.0) * math.pi * (k2 + 4.0 * params.g ** 2))


@dataclass(frozen=True)
class BoundStateProfile:
    tau_grid: np.ndarray
    amplitude: np.ndarray
    regime: Regime
    center_phase_freq: float
    params: Optional[SystemParams] = None
    k1: Optional[float] = None
    k2: Optional[float] = None
    error_estimate: Optional[float] = None
    converged: bool = True
    method: str = field(default="closed")

    def metadata(self) -> dict:
        meta = {
            "method": self.method,
            "regime": self.regime.value,
            "center_phase_freq": self.center_phase_freq,
            "k1": self.k1,
            "k2": self.k2,
            "points": int(self.tau_grid.size),
        }
        if self.params is not None:
            meta["params"] = self.params.as_dict()
        if self.error_estimate is not None:
            meta["error_estimate"] = self.error_estimate
            meta["converged"] = self.converged
        return meta


def _check_tau_grid(tau_grid) -> np.ndarray:
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if tau.ndim != 1 or tau.size == 0 or not np.all(np.isfinite(tau)):
        raise InvalidArgumentError("tau_grid must be a non-empty finite 1-D array")
    if tau.size > 1 and np.any(np.diff(tau) <= 0):
        raise InvalidArgumentError("tau_grid must be strictly ascending")
    return tau


def default_tau_grid(params: SystemParams, n_points: int = 512) -> np.ndarray:
    """``n_points`` samples over ``[0, 12 / min(κ/4, g)]``."""
    rates = [r for r in (0.25 * params.kappa, params.g) if r > 0]
    if not rates:
        raise InvalidArgumentError("default grid needs kappa > 0 or g > 0")
    return np.linspace(0.0, 12.0 / min(rates), n_points)


def resonant_profile(params: SystemParams, tau_grid=None) -> BoundStateProfile:
    _require_resonant(params, "resonant_profile")
    tau = default_tau_grid(params) if tau_grid is None else _check_tau_grid(tau_grid)
    amp = bound_state_prefactor(params) * np.asarray(f_tau(params, tau)) + 0j
    return BoundStateProfile(tau, amp, resonant_regime(params), 2 * params.omega, params,
                             params.omega, params.omega, method="resonant")


def _regime(params: SystemParams, sector1) -> Regime:
    if is_resonant(params) and params.g > 0:
        return resonant_regime(params)
    if sector1.is_ep:
        return Regime.CRITICAL
    gap = sector1.gap
    return Regime.OVERDAMPED if abs(gap.imag) > abs(gap.real) else Regime.UNDERDAMPED


def generic_bound_profile(params: SystemParams, k1: float, k2: float, tau_grid=None) -> BoundStateProfile:
    """Bound-state profile from the residues of the connected S matrix.

    Closing the ``p1`` contour in the upper half-plane picks up the poles of
    the outgoing partner photon, ``p2 = E_{1,±}``; with
    ``q_± = (k1 + k2)/2 - E_{1,±}`` the result is a divided difference

        b(τ) ∝ [h(q_+) - h(q_-)] / (q_+ - q_-),   h(q) = e^{iq|τ|} / P(q),

    which becomes ``h'(q_+)`` when the poles coalesce. That is the critical-damping
    form ``[1 - i((k1 + k2)/2 - E_{1,+})|τ|] e^{-i E_{1,+} |τ|}`` up to a
    constant.
    """
    tau = default_tau_grid(params) if tau_grid is None else _check_tau_grid(tau_grid)
    s1, s2 = build_sector(params, 1), build_sector(params, 2)
    total = float(k1 + k2)
    regime = _regime(params, s1)
    coeff = params.kappa * params.g ** 2 * two_photon_F(params, k1, k2, s2) if params.g > 0 and params.kappa > 0 else 0.0
    if coeff == 0:
        return BoundStateProfile(tau, np.zeros(tau.size, complex), regime, total, params, k1, k2)
    t = np.abs(tau)
    half = 0.5 * total
    e_plus, e_minus = s1.e_plus, s1.e_minus

    def P(q):
        return (half + q - e_plus) * (half + q - e_minus)

    def h(q):
        return np.exp(1j * q * t) / P(q)

    def dh(q):
        dP = (half + q - e_plus) + (half + q - e_minus)
        return np.exp(1j * q * t) * (1j * t / P(q) - dP / P(q) ** 2)

    q_plus, q_minus = half - e_plus, half - e_minus
    confluent = dh(0.5 * (q_plus + q_minus))
    if s1.is_ep:
        dd = confluent
    else:
        dd = (h(q_plus) - h(q_minus)) / (q_plus - q_minus)
        if abs(s1.gap) < SEAM_CHECK * s1.scale:
            mismatch = np.max(np.abs(dd - confluent))
            if mismatch > SEAM_CHECK * max(np.max(np.abs(dd)), 1e-300):
                raise NumericalInstabilityError(
                    f"two-pole and confluent forms disagree by {mismatch:.3e} near the EP")
    amp = 2j * math.pi * coeff * dd / (2.0 * math.sqrt(2.0) * math.pi)
    return BoundStateProfile(tau, amp, regime, total, params, k1, k2, method="residue")


def default_quad_config(params: SystemParams, k1: float, k2: float, tau_max: float = 0.0,
                        rel_tol: float = 1e-9) -> QuadConfig:
    """Truncation ``Λ = 200 max(κ, g, |k̄ - ω|) + 50`` with an initial mesh of
    two panels per oscillation of ``e^{i p τ_max}``."""
    kbar = 0.5 * (k1 + k2)
    half_width = 200.0 * max(params.kappa, params.g, abs(kbar - params.omega)) + 50.0
    panels = int(math.ceil(2.0 * half_width * abs(tau_max) / math.pi)) + 16
    return QuadConfig(half_width=half_width, rel_tol=rel_tol, initial_intervals=panels)


def oracle_bound_profile(params: SystemParams, k1: float, k2: float, tau_grid=None,
                         quad_config: QuadConfig | None = None, chunk: int = 4096) -> BoundStateProfile:
    """Bound-state profile by direct quadrature over the outgoing frequency.

    The delta function removes ``p2``; the remaining ``p1`` integral of the
    connected amplitude times both exchange phases is evaluated for the whole
    ``τ`` grid at once. Profiles whose quadrature hit the subdivision cap come
    back with ``converged=False`` and the achieved error estimate.
    """
    tau = default_tau_grid(params) if tau_grid is None else _check_tau_grid(tau_grid)
    s1, s2 = build_sector(params, 1), build_sector(params, 2)
    total = float(k1 + k2)
    regime = _regime(params, s1)
    if params.g == 0 or params.kappa == 0:
        return BoundStateProfile(tau, np.zeros(tau.size, complex), regime, total, params, k1, k2,
                                 error_estimate=0.0, method="oracle")
    config = quad_config or default_quad_config(params, k1, k2, float(np.max(np.abs(tau))))
    half = 0.5 * total

    def integrand(p1):
        amp = connected_amplitude(params, p1, k1, k2, sectors=(s1, s2))
        out = np.empty((p1.size, tau.size), dtype=complex)
        for start in range(0, p1.size, chunk):
            sl = slice(start, start + chunk)
            q = (p1[sl] - half)[:, None]
            # e^{i p1 x1 + i p2 x2} + e^{i p1 x2 + i p2 x1}, centre-of-mass phase removed
            out[sl] = amp[sl, None] * (np.exp(1j * q * tau[None, :]) + np.exp(-1j * q * tau[None, :]))
        return out

    result = adaptive_integrate(integrand, config, center=half)
    norm = 1.0 / (4.0 * math.sqrt(2.0) * math.pi)
    return BoundStateProfile(tau, norm * np.asarray(result.value), regime, total, params, k1, k2,
                             error_estimate=norm * result.error, converged=result.converged,
                             method="oracle")


def tail_decay_rate(profile: BoundStateProfile, method: str = "modes") -> float:
    """Decay rate of the profile over the last third of its grid.

    ``method="modes"`` (default) fits the tail with two damped exponentials,
    one per single-excitation pole (they coalesce at the EP), and returns the
    slower rate. It is unaffected by the zeros of underdamped profiles and by
    the linear prefactor of critical damping. ``method="logslope"`` is the
    plain least-squares slope of ``log|b|``.
    """
    tau = np.asarray(profile.tau_grid)
    amp = np.asarray(profile.amplitude)
    start = (2 * tau.size) // 3
    t_tail, a_tail = tau[start:], amp[start:]
    alive = np.abs(a_tail) > UNDERFLOW_FLOOR
    if alive.sum() < 20:
        raise InsufficientDataError("fewer than 20 tail points above the underflow floor")
    if method == "modes":
        if not alive.all():
            raise InsufficientDataError("tail contains underflowed samples; shorten the grid")
        return slowest_decay_rate(t_tail, a_tail, n_modes=2)
    if method == "logslope":
        return fit_exp_rate(t_tail[alive], np.abs(a_tail[alive]))[0]
    raise InvalidArgumentError(f"unknown method {method!r}")
