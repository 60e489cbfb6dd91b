"""Truncated complex power series.

A :class:`TaylorSeries` holds the coefficients ``c_0 .. c_N`` of an analytic
function together with the radius ``ref_radius`` inside which evaluating the
partial sum is trusted. All arithmetic truncates to the smaller order of the
operands and propagates the smaller radius, so a result is never trusted on a
larger disc than its inputs.

Every operation is pure; series are immutable (the coefficient array is
marked read-only).
"""

from __future__ import annotations

import cmath
from numbers import Number

import numpy as np

from .errors import BranchAmbiguity, PointOutsideRadius, SingularLeadingCoefficient

DEFAULT_ORDER = 512
DEFAULT_RADIUS = 0.95
DIVISION_FLOOR = 1e-12

# slack on the radius test so that points generated as r*exp(i*theta) with
# r == ref_radius are not rejected because of rounding
_RADIUS_SLACK = 1e-12


def _as_coeff_array(coeffs) -> np.ndarray:
    arr = np.array(coeffs, dtype=np.complex128).reshape(-1)
    if arr.size == 0:
        raise ValueError("a series needs at least one coefficient")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series coefficients must be finite")
    return arr


class TaylorSeries:
    """Truncated power series ``sum(c_n z**n, n=0..order)``."""

    __slots__ = ("_c", "ref_radius")

    def __init__(self, coeffs, order: int | None = None, ref_radius: float = DEFAULT_RADIUS):
        arr = _as_coeff_array(coeffs)
        if order is not None:
            if order < 0:
                raise ValueError("order must be non-negative")
            if arr.size > order + 1:
                arr = arr[: order + 1].copy()
            elif arr.size < order + 1:
                arr = np.concatenate([arr, np.zeros(order + 1 - arr.size, dtype=np.complex128)])
        if not (0.0 < ref_radius <= 1.0):
            raise ValueError(f"ref_radius must lie in (0, 1], got {ref_radius}")
        arr.flags.writeable = False
        self._c = arr
        self.ref_radius = float(ref_radius)

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS):
        return cls([value], order=order, ref_radius=ref_radius)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS):
        """The series ``z``."""
        return cls([0, 1], order=order, ref_radius=ref_radius)

    @classmethod
    def geometric(cls, ratio=1.0, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS):
        """``1/(1 - ratio*z)`` truncated at ``order``."""
        return cls(np.power(complex(ratio), np.arange(order + 1)), ref_radius=ref_radius)

    # -- basic accessors --------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def order(self) -> int:
        return self._c.size - 1

    def __len__(self):
        return self._c.size

    def __getitem__(self, n):
        return self._c[n]

    def __repr__(self):
        head = ", ".join(f"{c:.6g}" for c in self._c[:6])
        more = ", ..." if self._c.size > 6 else ""
        return f"TaylorSeries([{head}{more}], order={self.order}, ref_radius={self.ref_radius})"

    def __eq__(self, other):
        if not isinstance(other, TaylorSeries):
            return NotImplemented
        return (
            self.ref_radius == other.ref_radius
            and self._c.size == other._c.size
            and bool(np.all(self._c == other._c))
        )

    __hash__ = None

    def truncate(self, order: int) -> TaylorSeries:
        return TaylorSeries(self._c, order=order, ref_radius=self.ref_radius)

    def with_radius(self, ref_radius: float) -> TaylorSeries:
        return TaylorSeries(self._c, ref_radius=ref_radius)

    # -- evaluation -------------------------------------------------------

    def __call__(self, z):
        return eval_series(self, z)

    # -- operators --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, TaylorSeries):
            return other
        if isinstance(other, (Number, np.number)):
            return TaylorSeries.constant(other, order=self.order, ref_radius=self.ref_radius)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else sub(other, self)

    def __neg__(self):
        return TaylorSeries(-self._c, ref_radius=self.ref_radius)

    def __mul__(self, other):
        if isinstance(other, (Number, np.number)):
            return TaylorSeries(self._c * complex(other), ref_radius=self.ref_radius)
        if isinstance(other, TaylorSeries):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Number, np.number)):
            return TaylorSeries(self._c / complex(other), ref_radius=self.ref_radius)
        if isinstance(other, TaylorSeries):
            return div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else div(other, self)


def _common(a: TaylorSeries, b: TaylorSeries) -> tuple[int, float]:
    return min(a.order, b.order), min(a.ref_radius, b.ref_radius)


def check_radius(s_radius: float, z) -> None:
    """Raise :class:`PointOutsideRadius` if any ``|z|`` exceeds ``s_radius``."""
    if np.size(z) == 0:
        return
    zmax = float(np.max(np.abs(z))) if np.ndim(z) else abs(z)
    if zmax > s_radius * (1.0 + _RADIUS_SLACK):
        raise PointOutsideRadius(f"|z| = {zmax:.17g} exceeds trusted radius {s_radius}")


def eval_series(s: TaylorSeries, z):
    """Horner evaluation of the partial sum at a point or an array of points.

    Returns a Python ``complex`` for scalar input and a complex ndarray
    otherwise.
    """
    check_radius(s.ref_radius, z)
    scalar = np.ndim(z) == 0
    zz = np.asarray(z, dtype=np.complex128)
    nz = np.flatnonzero(s.coeffs)
    top = int(nz[-1]) if nz.size else 0
    cs = s.coeffs[: top + 1]
    acc = np.full(zz.shape, cs[-1], dtype=np.complex128)
    for c in cs[-2::-1]:
        acc = acc * zz + c
    return complex(acc) if scalar else acc


def add(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    n, r = _common(a, b)
    return TaylorSeries(a.coeffs[: n + 1] + b.coeffs[: n + 1], ref_radius=r)


def sub(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    n, r = _common(a, b)
    return TaylorSeries(a.coeffs[: n + 1] - b.coeffs[: n + 1], ref_radius=r)


def mul(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """Cauchy product truncated to the smaller order."""
    n, r = _common(a, b)
    prod = np.convolve(a.coeffs[: n + 1], b.coeffs[: n + 1])[: n + 1]
    return TaylorSeries(prod, ref_radius=r)


def div(a: TaylorSeries, b: TaylorSeries) -> TaylorSeries:
    """The series ``q`` with ``q*b == a`` up to the common truncation order."""
    n, r = _common(a, b)
    b0 = b.coeffs[0]
    if abs(b0) <= DIVISION_FLOOR:
        raise SingularLeadingCoefficient(f"|b_0| = {abs(b0):.3g} is below the division floor")
    ac = a.coeffs[: n + 1]
    bc = b.coeffs[: n + 1]
    q = np.zeros(n + 1, dtype=np.complex128)
    for k in range(n + 1):
        # q_k = (a_k - sum_{j=1..k} b_j q_{k-j}) / b_0
        q[k] = (ac[k] - np.dot(bc[1 : k + 1], q[k - 1 :: -1][:k])) / b0
    return TaylorSeries(q, ref_radius=r)


def _scale_by_index(c: np.ndarray, k: np.ndarray, divide: bool) -> np.ndarray:
    # real and imaginary parts separately: dividing a complex by a real via
    # complex division is not correctly rounded
    if divide:
        return c.real / k + 1j * (c.imag / k)
    return c.real * k + 1j * (c.imag * k)


def derivative(s: TaylorSeries) -> TaylorSeries:
    """Termwise derivative; the order drops by one (never below 0)."""
    if s.order == 0:
        return TaylorSeries([0], ref_radius=s.ref_radius)
    k = np.arange(1, s.order + 1, dtype=float)
    return TaylorSeries(_scale_by_index(s.coeffs[1:], k, divide=False), ref_radius=s.ref_radius)


def antiderivative(s: TaylorSeries) -> TaylorSeries:
    """Termwise integral from 0; the order rises by one."""
    k = np.arange(1, s.order + 2, dtype=float)
    body = _scale_by_index(s.coeffs, k, divide=True)
    return TaylorSeries(np.concatenate([[0.0], body]), ref_radius=s.ref_radius)


def exp_series(s: TaylorSeries) -> TaylorSeries:
    """``exp(s)`` from the recurrence ``E' = s' E``."""
    c = s.coeffs
    n = s.order
    ks = np.arange(n + 1, dtype=float) * c  # k * s_k
    e = np.zeros(n + 1, dtype=np.complex128)
    e[0] = cmath.exp(c[0])
    for m in range(1, n + 1):
        # m E_m = sum_{k=1..m} k s_k E_{m-k}
        e[m] = np.dot(ks[1 : m + 1], e[m - 1 :: -1][:m]) / m
    return TaylorSeries(e, ref_radius=s.ref_radius)


def log_series(s: TaylorSeries) -> TaylorSeries:
    """Principal ``log(s)`` anchored at ``log(c_0)``; needs ``Re c_0 > 0``.

    ``|c_0 - 1| < 1`` implies ``Re c_0 > 0``, so the right half-plane is the
    only test needed.
    """
    c0 = s.coeffs[0]
    if not c0.real > 0.0:
        raise BranchAmbiguity(f"constant term {c0} is not in the right half-plane")
    body = antiderivative(div(derivative(s), s.truncate(max(s.order - 1, 0))))
    out = np.array(body.coeffs[: s.order + 1])
    out[0] = cmath.log(c0)
    return TaylorSeries(out, ref_radius=s.ref_radius)


def log_derivative(s: TaylorSeries) -> TaylorSeries:
    """Series of ``z s'(z) / s(z)``; its constant term is exactly 0."""
    if abs(s.coeffs[0]) <= DIVISION_FLOOR:
        raise SingularLeadingCoefficient(f"|c_0| = {abs(s.coeffs[0]):.3g} is below the division floor")
    k = np.arange(s.order + 1, dtype=float)
    zs = TaylorSeries(_scale_by_index(s.coeffs, k, divide=False), ref_radius=s.ref_radius)
    return div(zs, s)


def shift_down(s: TaylorSeries) -> TaylorSeries:
    """``s(z)/z`` for a series with ``c_0 == 0`` (order drops by one)."""
    if s.coeffs[0] != 0:
        raise ValueError("shift_down needs a series with zero constant term")
    if s.order == 0:
        return TaylorSeries([0], ref_radius=s.ref_radius)
    return TaylorSeries(s.coeffs[1:], ref_radius=s.ref_radius)


def power_of_one_minus(exponent: float, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS):
    """``(1 - z)**exponent`` from the binomial recurrence."""
    c = np.zeros(order + 1, dtype=np.complex128)
    c[0] = 1.0
    for n in range(1, order + 1):
        c[n] = c[n - 1] * (n - 1 - exponent) / n
    return TaylorSeries(c, ref_radius=ref_radius)


def koebe_factor(alpha: float, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS):
    """``(1 - z)**(-2(1 - alpha))``."""
    return power_of_one_minus(-2.0 * (1.0 - alpha), order=order, ref_radius=ref_radius)


def exponential(c, order: int = DEFAULT_ORDER, ref_radius: float = DEFAULT_RADIUS):
    """``exp(c z)`` with coefficients ``c**n / n!``."""
    c = complex(c)
    out = np.zeros(order + 1, dtype=np.complex128)
    out[0] = 1.0
    for n in range(1, order + 1):
        out[n] = out[n - 1] * c / n
    return TaylorSeries(out, ref_radius=ref_radius)


def max_coeff_error(a: TaylorSeries, b: TaylorSeries) -> float:
    n = min(a.order, b.order)
    return float(np.max(np.abs(a.coeffs[: n + 1] - b.coeffs[: n + 1])))


__all__ = [
    "DEFAULT_ORDER",
    "DEFAULT_RADIUS",
    "DIVISION_FLOOR",
    "TaylorSeries",
    "add",
    "antiderivative",
    "check_radius",
    "derivative",
    "div",
    "eval_series",
    "exp_series",
    "exponential",
    "koebe_factor",
    "log_derivative",
    "log_series",
    "max_coeff_error",
    "mul",
    "power_of_one_minus",
    "shift_down",
    "sub",
]
