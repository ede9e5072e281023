"""Jaynes-Cummings system parameters and the excitation-sector spectrum.

The effective Hamiltonian ``(ω - iκ/2) a†a + Ω σ+σ- + g (a†σ- + σ+a)``
conserves ``a†a + σ+σ-``; for ``n >= 1`` each sector is two dimensional with
ordered basis ``{|n, ground>, |n-1, excited>}``.

Eigenvalue labelling
--------------------
The ``+`` branch of an isolated evaluation is ``center + sqrt(disc)`` with the
principal square root. Along parameter sweeps the two branches are instead
paired greedily with the nearest values at the previous grid point, so the
labels follow continuous sheets rather than jumping at the branch cut. The
model itself does not single out either root off resonance; this labelling is
a convention.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateSpectrumError, DomainError, InvalidArgumentError

DEFAULT_EP_TOLERANCE = 1e-9
#: spectral decompositions are refused when the gap is below this many EP tolerances
EP_EXCLUSION_FACTOR = 100.0


@dataclass(frozen=True)
class SystemParams:
    """Cavity frequency ``omega``, atomic frequency ``Omega``, atom-cavity
    coupling ``g`` and waveguide coupling ``kappa``.

    All quantities share one (arbitrary) frequency unit; the waveguide group
    velocity is 1, so lengths are measured in inverse frequency units.
    """

    omega: float
    Omega: float
    g: float
    kappa: float

    def __post_init__(self):
        for name in ("omega", "Omega", "g", "kappa"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
                raise InvalidArgumentError(f"{name} must be a finite real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.g < 0:
            raise InvalidArgumentError("g must be non-negative")
        if self.kappa < 0:
            raise InvalidArgumentError("kappa must be non-negative")

    @classmethod
    def resonant(cls, Omega: float, g: float, kappa: float) -> "SystemParams":
        return cls(Omega, Omega, g, kappa)

    def replace(self, **changes) -> "SystemParams":
        values = {"omega": self.omega, "Omega": self.Omega, "g": self.g, "kappa": self.kappa}
        values.update(changes)
        return SystemParams(**values)

    @property
    def is_resonant(self) -> bool:
        return is_resonant(self)

    def as_dict(self) -> dict:
        return {"omega": self.omega, "Omega": self.Omega, "g": self.g, "kappa": self.kappa}


def is_resonant(params: SystemParams, rtol: float = 1e-12) -> bool:
    scale = max(abs(params.omega), abs(params.Omega), 1e-300)
    return abs(params.omega - params.Omega) <= rtol * scale


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgumentError(f"excitation number must be a positive integer, got {n!r}")
    return int(n)


def sector_matrix(params: SystemParams, n: int) -> np.ndarray:
    n = _check_n(n)
    c = params.omega - 0.5j * params.kappa
    off = math.sqrt(n) * params.g
    return np.array([[n * c, off], [off, (n - 1) * c + params.Omega]], dtype=complex)


def _discriminant(params: SystemParams, n: int) -> complex:
    # ((ω - Ω)/2 - iκ/4)^2 + n g^2, with n g^2 - (κ/4)^2 factored so that the
    # EP value κ = 4 (√n g) cancels exactly
    half_detuning = 0.5 * (params.omega - params.Omega)
    quarter_kappa = 0.25 * params.kappa
    root_n_g = math.sqrt(n) * params.g
    re = half_detuning * half_detuning + (root_n_g - quarter_kappa) * (root_n_g + quarter_kappa)
    im = -2.0 * half_detuning * quarter_kappa
    return complex(re, im + 0.0)


def _center(params: SystemParams, n: int) -> complex:
    return 0.5 * ((2 * n - 1) * (params.omega - 0.5j * params.kappa) + params.Omega)


def eigenvalues(params: SystemParams, n: int) -> tuple[complex, complex]:
    """Closed-form ``(E_{n,+}, E_{n,-})`` with the principal-root labelling."""
    n = _check_n(n)
    root = cmath.sqrt(_discriminant(params, n))
    center = _center(params, n)
    return center + root, center - root


def discriminant_gap(params: SystemParams, n: int) -> complex:
    """``E_{n,+} - E_{n,-}`` under the principal-root labelling."""
    n = _check_n(n)
    return 2.0 * cmath.sqrt(_discriminant(params, n))


def _eigvec(h: np.ndarray, e: complex) -> np.ndarray:
    a, b, d = h[0, 0], h[0, 1], h[1, 1]
    v1 = np.array([b, e - a])
    v2 = np.array([e - d, b])
    v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    norm = np.linalg.norm(v)
    if norm == 0:  # h proportional to identity
        v = np.array([1.0, 0.0], dtype=complex)
        norm = 1.0
    return v / norm


@dataclass(frozen=True)
class ExcitationSector:
    """The n-excitation block with its eigen-decomposition.

    ``right_vecs[:, i]`` is the right eigenvector of branch ``i`` (0 = "+",
    1 = "-") with unit Euclidean norm; ``left_vecs[i, :]`` is the matching left
    row vector scaled so that ``left_vecs @ right_vecs`` is the identity. The
    block is complex symmetric, so each left vector is the transpose of its
    right vector up to scale. Both are None at an exceptional point, where the
    matrix is defective.
    """

    n: int
    h_matrix: np.ndarray
    e_plus: complex
    e_minus: complex
    right_vecs: Optional[np.ndarray]
    left_vecs: Optional[np.ndarray]
    is_ep: bool
    ep_tolerance: float = DEFAULT_EP_TOLERANCE
    kappa: float = field(default=0.0, repr=False)

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.e_plus, self.e_minus])

    @property
    def gap(self) -> complex:
        return self.e_plus - self.e_minus

    @property
    def scale(self) -> float:
        return max(abs(self.e_plus), abs(self.e_minus), self.kappa, 1e-300)

    def require_nondegenerate(self, factor: float = EP_EXCLUSION_FACTOR) -> None:
        """Raise :class:`DegenerateSpectrumError` inside the EP exclusion zone."""
        if self.right_vecs is None or abs(self.gap) < factor * self.ep_tolerance * self.scale:
            raise DegenerateSpectrumError(
                f"sector n={self.n} is within the exceptional-point exclusion zone "
                f"(|gap| = {abs(self.gap):.3e}); use the closed-form/confluent routines")


def build_sector(params: SystemParams, n: int, ep_tolerance: float = DEFAULT_EP_TOLERANCE) -> ExcitationSector:
    n = _check_n(n)
    h = sector_matrix(params, n)
    e_plus, e_minus = eigenvalues(params, n)
    scale = max(abs(e_plus), abs(e_minus), params.kappa, 1e-300)
    is_ep = abs(e_plus - e_minus) < ep_tolerance * scale
    right = left = None
    if not is_ep:
        right = np.column_stack([_eigvec(h, e_plus), _eigvec(h, e_minus)])
        left = right.T.copy()
        left /= np.diag(left @ right)[:, None]
    return ExcitationSector(n, h, e_plus, e_minus, right, left, bool(is_ep), ep_tolerance, params.kappa)


def exceptional_point_kappa(params: SystemParams, n: int = 1) -> float:
    """Waveguide coupling ``4 √n g`` at which sector ``n`` becomes defective."""
    n = _check_n(n)
    if not is_resonant(params):
        raise DomainError("EP requires resonance (omega == Omega)")
    if params.g <= 0:
        raise DomainError("EP requires g > 0")
    return 4.0 * (math.sqrt(n) * params.g)


@dataclass(frozen=True)
class SpectrumSweep:
    """Flat table of a spectrum sweep, one row per (n, omega, kappa) point."""

    n: np.ndarray
    omega: np.ndarray
    kappa: np.ndarray
    e_plus: np.ndarray
    e_minus: np.ndarray

    FIELDS = ("n", "omega", "kappa", "re_E_plus", "im_E_plus", "re_E_minus", "im_E_minus")

    def __len__(self):
        return self.n.size

    def rows(self):
        for i in range(len(self)):
            yield (int(self.n[i]), float(self.omega[i]), float(self.kappa[i]),
                   self.e_plus[i].real, self.e_plus[i].imag,
                   self.e_minus[i].real, self.e_minus[i].imag)

    def records(self) -> list[dict]:
        return [dict(zip(self.FIELDS, row)) for row in self.rows()]

    def select(self, n: int) -> "SpectrumSweep":
        m = self.n == n
        return SpectrumSweep(self.n[m], self.omega[m], self.kappa[m], self.e_plus[m], self.e_minus[m])


def _check_grid(grid, name) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(grid, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty 1-D grid")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} must be finite")
    if arr.size > 1:
        d = np.diff(arr)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise InvalidArgumentError(f"{name} must be strictly monotone")
    return arr


def _pair(prev, cand):
    """Order ``cand`` (2 values) to best continue ``prev``."""
    a, b = cand
    keep = abs(a - prev[0]) + abs(b - prev[1])
    swap = abs(b - prev[0]) + abs(a - prev[1])
    return (b, a) if swap < keep else (a, b)


def sweep_spectrum(params: SystemParams, n_list: Sequence[int], kappa_grid,
                   omega_grid=None) -> SpectrumSweep:
    """Eigenvalues of each sector in ``n_list`` over a kappa (or omega x kappa) grid.

    ``params.kappa`` (and ``params.omega`` when ``omega_grid`` is given) are
    replaced by the grid values. Branch labels are carried continuously along
    kappa; for a 2-D grid each omega row is seeded from the first point of the
    previous row.
    """
    kappas = _check_grid(kappa_grid, "kappa_grid")
    omegas = _check_grid(omega_grid, "omega_grid") if omega_grid is not None else np.array([params.omega])
    if np.any(kappas < 0):
        raise InvalidArgumentError("kappa values must be non-negative")
    ns, om, ka, ep, em = [], [], [], [], []
    for n in n_list:
        n = _check_n(n)
        seed = None
        for w in omegas:
            prev = seed
            for j, k in enumerate(kappas):
                pair = eigenvalues(params.replace(omega=float(w), kappa=float(k)), n)
                if prev is not None:
                    pair = _pair(prev, pair)
                if j == 0:
                    seed = pair
                prev = pair
                ns.append(n); om.append(w); ka.append(k)
                ep.append(pair[0]); em.append(pair[1])
    return SpectrumSweep(np.array(ns), np.array(om), np.array(ka),
                         np.array(ep, dtype=complex), np.array(em, dtype=complex))
