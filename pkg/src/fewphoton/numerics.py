"""Shared numerical engines.

* :func:`adaptive_integrate`: vectorised Gauss-Kronrod (7/15) adaptive
  bisection with optional principal-value folding.
* :func:`fit_exp_rate`: log-linear least squares decay rate.
* :func:`fit_damped_modes` / :func:`slowest_decay_rate`: matrix-pencil
  extraction of damped exponential modes from uniformly sampled data.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import InsufficientDataError, InvalidArgumentError, QuadratureWarning

# Gauss-Kronrod 15-point abscissae on [0, 1] (symmetric), descending.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# 7-point Gauss weights for the odd-indexed Kronrod abscissae.
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1:7:2] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class QuadConfig:
    """Settings for :func:`adaptive_integrate`.

    The integration range is ``[center - half_width, center + half_width]``.
    ``max_subdivisions`` caps the total number of subintervals.
    """

    half_width: float
    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 200_000
    pv_point: Optional[float] = None
    initial_intervals: int = 16

    def __post_init__(self):
        if not (self.half_width > 0 and np.isfinite(self.half_width)):
            raise InvalidArgumentError("half_width must be positive and finite")
        if not 0 < self.rel_tol < 1:
            raise InvalidArgumentError("rel_tol must lie in (0, 1)")
        if self.abs_tol < 0:
            raise InvalidArgumentError("abs_tol must be non-negative")
        if self.max_subdivisions < 1 or self.initial_intervals < 1:
            raise InvalidArgumentError("subdivision counts must be positive")


class QuadResult(NamedTuple):
    value: complex | np.ndarray
    error: float
    converged: bool
    intervals: int


_ROUNDOFF = 50 * np.finfo(float).eps


def _gk15_batch(f, lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()))
    fx = fx.reshape(x.shape + fx.shape[1:])
    kron = np.einsum("in...,n->i...", fx, KRONROD_WEIGHTS)
    gauss = np.einsum("in...,n->i...", fx, GAUSS_WEIGHTS)
    scale = half.reshape((-1,) + (1,) * (kron.ndim - 1))
    kron = kron * scale
    err = np.abs(kron - gauss * scale)
    if err.ndim > 1:
        err = err.reshape(err.shape[0], -1).max(axis=1)
    return kron, err


def _gk15(f, lo, hi, batch=256):
    if lo.size <= batch:
        return _gk15_batch(f, lo, hi)
    parts = [_gk15_batch(f, lo[i:i + batch], hi[i:i + batch]) for i in range(0, lo.size, batch)]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _integrate_interval(f, a, b, rel_tol, abs_tol, max_sub, n_init):
    edges = np.linspace(a, b, n_init + 1)
    lo, hi = edges[:-1], edges[1:]
    vals, errs = _gk15(f, lo, hi)
    width = b - a
    while True:
        total = vals.sum(axis=0)
        total_err = float(errs.sum())
        # the roundoff floor keeps integrals that cancel to ~0 from refining forever
        resabs = float(np.max(np.abs(vals).sum(axis=0)))
        tol = max(abs_tol, rel_tol * float(np.max(np.abs(total))), _ROUNDOFF * resabs)
        if total_err <= tol:
            return total, total_err, True, lo.size
        # refine intervals whose error density exceeds the allowed average
        bad = errs > tol * (hi - lo) / width
        if not bad.any():
            bad = errs == errs.max()
        if lo.size + bad.sum() > max_sub:
            return total, total_err, False, lo.size
        blo, bhi = lo[bad], hi[bad]
        bmid = 0.5 * (blo + bhi)
        new_lo = np.concatenate([blo, bmid])
        new_hi = np.concatenate([bmid, bhi])
        nv, ne = _gk15(f, new_lo, new_hi)
        keep = ~bad
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])


def adaptive_integrate(f: Callable, config: QuadConfig, center: float = 0.0) -> QuadResult:
    """Integrate ``f`` over ``[center - Λ, center + Λ]``.

    ``f`` must accept a 1-D float array of abscissae and return an array whose
    leading axis matches it; trailing axes are integrated component-wise
    (useful for a whole grid of Fourier phases at once). Convergence is judged
    on the largest component.

    With ``config.pv_point`` set, the Cauchy principal value is computed by
    folding a symmetric neighbourhood of the singular point,
    ``∫_{c-h}^{c+h} f = ∫_0^h [f(c+u) + f(c-u)] du``, so the odd singular
    part cancels exactly before any node is evaluated.

    A run that hits ``max_subdivisions`` returns its best estimate with
    ``converged=False`` and emits :class:`QuadratureWarning`.
    """
    a = center - config.half_width
    b = center + config.half_width
    c = config.pv_point
    pieces = []
    if c is None:
        pieces.append((f, a, b))
    else:
        if not a < c < b:
            raise InvalidArgumentError("pv_point must lie strictly inside the range")
        h = min(c - a, b - c)

        def folded(u):
            # representable offset, so f is sampled exactly symmetrically about c
            u = (c + u) - c
            return f(c + u) + f(c - u)

        pieces.append((folded, 0.0, h))
        if c - h > a:
            pieces.append((f, a, c - h))
        if c + h < b:
            pieces.append((f, c + h, b))
    meshes = [max(1, int(round(config.initial_intervals * (hi - lo) / (b - a)))) for _, lo, hi in pieces]
    abs_tol = config.abs_tol
    if len(pieces) > 1:
        # one global target, so a piece that cancels to ~0 is not held to a relative tolerance
        rough = sum(_gk15(fn, np.linspace(lo, hi, m + 1)[:-1], np.linspace(lo, hi, m + 1)[1:])[0].sum(axis=0)
                    for (fn, lo, hi), m in zip(pieces, meshes))
        abs_tol = max(abs_tol, config.rel_tol * float(np.max(np.abs(rough))))
    total, err, ok, count = 0.0, 0.0, True, 0
    for (fn, lo, hi), n_init in zip(pieces, meshes):
        v, e, conv, n = _integrate_interval(
            fn, lo, hi, config.rel_tol, abs_tol / len(pieces),
            config.max_subdivisions, n_init)
        total = total + v
        err += e
        ok = ok and conv
        count += n
    if not ok:
        warnings.warn(
            f"adaptive_integrate hit the subdivision cap; error estimate {err:.3e}",
            QuadratureWarning, stacklevel=2)
    return QuadResult(total, err, ok, count)


def fit_exp_rate(xs, ys):
    """Least-squares fit of ``log y = c - rate * x``.

    Returns
    -------
    rate : float
        Positive for decaying data.
    r_squared : float
        Coefficient of determination of the log-linear fit.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise InvalidArgumentError("xs and ys must be 1-D arrays of equal length")
    if xs.size < 8:
        raise InsufficientDataError("fit_exp_rate needs at least 8 points")
    if np.any(ys <= 0) or not np.all(np.isfinite(ys)):
        raise InvalidArgumentError("ys must be positive and finite")
    if np.ptp(xs) == 0:
        raise InvalidArgumentError("xs are degenerate")
    ly = np.log(ys)
    slope, intercept = np.polyfit(xs, ly, 1)
    resid = ly - (slope * xs + intercept)
    ss_tot = np.sum((ly - ly.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / ss_tot if ss_tot > 0 else 1.0
    return float(-slope), float(r2)


@dataclass(frozen=True)
class DampedModes:
    """Modes of ``y(x) ≈ Σ_i c_i exp(s_i (x - x0))`` fitted on a uniform grid."""

    exponents: np.ndarray  # s_i, complex; decay rate is -Re s_i
    amplitudes: np.ndarray  # c_i at x0
    x0: float

    @property
    def rates(self):
        return -self.exponents.real

    @property
    def frequencies(self):
        return self.exponents.imag


def fit_damped_modes(xs, ys, n_modes=None, rank_tol=1e-10, pencil=None) -> DampedModes:
    """Matrix-pencil fit of a sum of damped exponentials.

    If ``n_modes`` is None the model order is the numerical rank of the Hankel
    data matrix (singular values above ``rank_tol`` times the largest).
    Confluent (double) poles are resolved as two nearly equal exponents.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise InvalidArgumentError("xs and ys must be 1-D arrays of equal length")
    n = xs.size
    if n < 8:
        raise InsufficientDataError("need at least 8 samples")
    dx = np.diff(xs)
    h = (xs[-1] - xs[0]) / (n - 1)
    if h <= 0 or np.max(np.abs(dx - h)) > 1e-8 * abs(h):
        raise InvalidArgumentError("fit_damped_modes needs a uniform ascending grid")
    L = pencil or min(n // 3, 200)
    if n_modes is not None and L < n_modes + 1:
        raise InsufficientDataError("too few samples for the requested model order")
    idx = np.arange(n - L)[:, None] + np.arange(L + 1)[None, :]
    Y = ys[idx]
    _, s, vh = np.linalg.svd(Y, full_matrices=False)
    if s[0] == 0:
        raise InsufficientDataError("data are identically zero")
    m = n_modes if n_modes is not None else int(np.sum(s > rank_tol * s[0]))
    m = max(1, min(m, L))
    v = vh[:m].T
    z = np.linalg.eigvals(np.linalg.pinv(v[:-1]) @ v[1:])
    vander = z[None, :] ** np.arange(n)[:, None]
    amps = np.linalg.lstsq(vander, ys.astype(complex), rcond=None)[0]
    return DampedModes(np.log(z.astype(complex)) / h, amps, float(xs[0]))


def slowest_decay_rate(xs, ys, n_modes=None, amp_tol=1e-6, rank_tol=1e-10) -> float:
    """Decay rate of the slowest mode that carries non-negligible weight.

    Modes whose amplitude at the window start is below ``amp_tol`` times the
    largest one are treated as fit artefacts and ignored.
    """
    modes = fit_damped_modes(xs, ys, n_modes=n_modes, rank_tol=rank_tol)
    weight = np.abs(modes.amplitudes)
    keep = weight >= amp_tol * weight.max()
    return float(modes.rates[keep].min())
