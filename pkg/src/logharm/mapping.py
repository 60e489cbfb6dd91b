"""Log-harmonic maps ``f(z) = z |z|^(2 beta) h(z) conj(g(z))``.

The Wirtinger derivatives are computed analytically from the logarithmic
derivatives of ``h`` and ``g``::

    z f_z / f        = 1 + beta + z h'/h
    conj(z) f_zbar/f = beta + conj(z g'/g)

so the second complex dilatation is the analytic function
``w = (conj(beta) + z g'/g) / (1 + beta + z h'/h)``.

All functions accept a scalar or an ndarray of points. Scalars come back as
Python ``complex``/``float``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DegenerateDenominator, OriginSingularity, SingularityDetected
from .series import (
    DEFAULT_ORDER,
    DEFAULT_RADIUS,
    TaylorSeries,
    check_radius,
    derivative,
)

ZERO_THRESHOLD = 1e-10
DENOMINATOR_FLOOR = 1e-10


def _out(x, scalar):
    if scalar:
        x = x.item() if isinstance(x, np.ndarray) else x
        return complex(x) if np.iscomplexobj(x) or isinstance(x, complex) else float(x)
    return x


@dataclass(frozen=True)
class LogHarmonicMap:
    """The triple (beta, h, g); ``alpha`` records the intended starlikeness order.

    ``g(0) == 1`` is enforced exactly, ``h(0) != 0`` is required, and
    ``normalized`` tells whether the stronger ``h(0) == 1`` also holds.
    """

    beta: complex
    h: TaylorSeries
    g: TaylorSeries
    alpha: float | None = None
    schwarz_certified: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", complex(self.beta))
        if not np.isfinite(self.beta.real) or not np.isfinite(self.beta.imag):
            raise ValueError("beta must be finite")
        if not self.beta.real > -0.5:
            raise ValueError(f"Re(beta) must exceed -1/2, got {self.beta.real}")
        if self.g.coeffs[0] != 1:
            raise ValueError(f"g(0) must equal 1 exactly, got {self.g.coeffs[0]}")
        if self.h.coeffs[0] == 0:
            raise ValueError("h(0) must be non-zero")
        if self.alpha is not None and not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")

    @property
    def normalized(self) -> bool:
        return self.h.coeffs[0] == 1

    @property
    def ref_radius(self) -> float:
        return min(self.h.ref_radius, self.g.ref_radius)

    @property
    def gamma(self) -> complex:
        """``w(0) = conj(beta) / (1 + beta)``."""
        return self.beta.conjugate() / (1.0 + self.beta)

    @cached_property
    def dh(self) -> TaylorSeries:
        return derivative(self.h)

    @cached_property
    def dg(self) -> TaylorSeries:
        return derivative(self.g)

    def __call__(self, z):
        return eval_map(self, z)


@dataclass(frozen=True)
class WirtingerPair:
    f_z: complex | np.ndarray
    f_zbar: complex | np.ndarray

    @property
    def f_x(self):
        return self.f_z + self.f_zbar

    @property
    def f_y(self):
        return 1j * (self.f_z - self.f_zbar)


@dataclass(frozen=True)
class DilatationValue:
    w: complex | np.ndarray

    @property
    def modulus(self):
        return np.abs(self.w)

    @property
    def sense_preserving(self):
        return np.abs(self.w) < 1.0


def _values(m: LogHarmonicMap, z: np.ndarray):
    """h, h', g, g' at z, refusing points where h or g (numerically) vanish."""
    check_radius(m.ref_radius, z)
    h = m.h(z)
    g = m.g(z)
    bad = (np.abs(h) <= ZERO_THRESHOLD) | (np.abs(g) <= ZERO_THRESHOLD)
    if np.any(bad):
        zb = z[bad].flat[0]
        raise SingularityDetected(f"h or g vanishes (|value| <= {ZERO_THRESHOLD}) near z = {zb}")
    return h, m.dh(z), g, m.dg(z)


def _modulus_power(beta: complex, z: np.ndarray) -> np.ndarray:
    """``|z|^(2 beta) = exp(2 beta ln|z|)``; callers handle z == 0."""
    with np.errstate(divide="ignore"):
        return np.exp(2.0 * beta * np.log(np.abs(z)))


def log_terms(m: LogHarmonicMap, z):
    """``(z h'/h, z g'/g)`` evaluated at z (arrays)."""
    zz = np.asarray(z, dtype=np.complex128)
    h, dh, g, dg = _values(m, zz)
    return zz * dh / h, zz * dg / g


def eval_map(m: LogHarmonicMap, z):
    """``f(z)``, with ``f(0) = 0``."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=np.complex128)
    check_radius(m.ref_radius, zz)
    nz = zz != 0
    out = np.zeros(zz.shape, dtype=np.complex128)
    zn = zz[nz]
    out[nz] = zn * _modulus_power(m.beta, zn) * m.h(zn) * np.conj(m.g(zn))
    return _out(out, scalar)


def starlike_functional(m: LogHarmonicMap, z):
    """``1 + z h'/h - conj(z g'/g)``, which equals ``(z f_z - conj(z) f_zbar)/f``.

    The analytic expression is used everywhere, so the value at 0 is 1.
    """
    scalar = np.ndim(z) == 0
    lh, lg = log_terms(m, z)
    return _out(1.0 + lh - np.conj(lg), scalar)


def _require_nonzero(zz):
    if np.any(zz == 0):
        raise OriginSingularity("Wirtinger derivatives of z|z|^(2 beta) are undefined at z = 0")


def wirtinger(m: LogHarmonicMap, z) -> WirtingerPair:
    """Analytic ``(f_z, f_zbar)`` at z != 0."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=np.complex128)
    _require_nonzero(zz)
    h, dh, g, dg = _values(m, zz)
    # f/z = |z|^(2 beta) h conj(g); dividing f by z explicitly is avoided
    f_over_z = _modulus_power(m.beta, zz) * h * np.conj(g)
    f_z = f_over_z * (1.0 + m.beta + zz * dh / h)
    f_zbar = f_over_z * (zz / np.conj(zz)) * (m.beta + np.conj(zz * dg / g))
    return WirtingerPair(_out(f_z, scalar), _out(f_zbar, scalar))


def dilatation(m: LogHarmonicMap, z) -> DilatationValue:
    """``w(z) = (conj(beta) + z g'/g) / (1 + beta + z h'/h)``; ``w(0) = gamma``."""
    scalar = np.ndim(z) == 0
    lh, lg = log_terms(m, z)
    den = 1.0 + m.beta + lh
    if np.any(np.abs(den) < DENOMINATOR_FLOOR):
        raise DegenerateDenominator("1 + beta + z h'/h vanishes on the requested points")
    return DilatationValue(_out((m.beta.conjugate() + lg) / den, scalar))


def pde_residual(m: LogHarmonicMap, z):
    """``|conj(f_zbar)/conj(f) - w f_z / f|`` at z != 0."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=np.complex128)
    pair = wirtinger(m, zz)
    f = eval_map(m, zz)
    if np.any(np.abs(f) <= ZERO_THRESHOLD * np.abs(zz)):
        raise SingularityDetected("f vanishes away from the origin")
    w = dilatation(m, zz).w
    res = np.abs(np.conj(pair.f_zbar) / np.conj(f) - w * pair.f_z / f)
    return _out(res, scalar)


def jacobian(m: LogHarmonicMap, z):
    """``J_f = |f_z|^2 (1 - |w|^2)`` at z != 0."""
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=np.complex128)
    pair = wirtinger(m, zz)
    w = dilatation(m, zz).w
    return _out(np.abs(pair.f_z) ** 2 * (1.0 - np.abs(w) ** 2), scalar)


def identity_map(order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS) -> LogHarmonicMap:
    one = TaylorSeries.constant(1.0, order=order, ref_radius=ref_radius)
    return LogHarmonicMap(0.0, one, one)


def power_map(beta: complex, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS) -> LogHarmonicMap:
    """``f_beta(z) = z |z|^(2 beta)`` (h = g = 1)."""
    one = TaylorSeries.constant(1.0, order=order, ref_radius=ref_radius)
    return LogHarmonicMap(beta, one, one)
