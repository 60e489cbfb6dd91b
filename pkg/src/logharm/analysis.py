"""Constructors and grid certifiers for starlike log-harmonic maps.

Every certifier evaluates one inequality on a :class:`SampleGrid` and reduces
it to a signed ``worst_margin`` (positive means the inequality holds at every
sampled point). The result is a :class:`VerificationReport`; a report says
nothing about points off the grid.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlphaOutOfRange,
    DegenerateDenominator,
    NotSchwarz,
    PointOutsideRadius,
)
from .mapping import LogHarmonicMap, dilatation, log_terms, wirtinger
from .series import (
    TaylorSeries,
    antiderivative,
    div,
    exp_series,
    log_derivative,
    mul,
    shift_down,
)

DEFAULT_TOL = 1e-9
SCHWARZ_TOL = 1e-12
DEFAULT_RADII = tuple(round(0.05 * k, 2) for k in range(1, 20))
DEFAULT_ANGLES = 720


class TheoremId(str, enum.Enum):
    STARLIKE = "starlike"
    SUBORDINATION = "subordination"
    SENSE = "sense"
    DILATATION = "dilatation"
    HG = "hg"
    JACOBIAN = "jacobian"
    DISC = "disc"


@dataclass(frozen=True)
class SampleGrid:
    """Concentric rings ``r * exp(2 pi i j / angles_per_ring)``."""

    radii: tuple[float, ...] = DEFAULT_RADII
    angles_per_ring: int = DEFAULT_ANGLES
    includes_origin: bool = False

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii:
            raise ValueError("a grid needs at least one radius")
        if any(not (0.0 < r < 1.0) for r in radii):
            raise ValueError("grid radii must lie in (0, 1)")
        if any(b <= a for a, b in itertools.pairwise(radii)):
            raise ValueError("grid radii must be strictly increasing")
        if self.angles_per_ring < 1:
            raise ValueError("angles_per_ring must be positive")

    @classmethod
    def default(cls, max_radius: float = 0.95, angles: int = DEFAULT_ANGLES) -> SampleGrid:
        radii = tuple(r for r in DEFAULT_RADII if r <= max_radius + 1e-12)
        if not radii:
            radii = (max_radius / 2, max_radius)
        return cls(radii, angles)

    @classmethod
    def uniform(cls, max_radius: float, rings: int, angles: int = DEFAULT_ANGLES) -> SampleGrid:
        return cls(tuple(max_radius * k / rings for k in range(1, rings + 1)), angles)

    @classmethod
    def parse(cls, text: str) -> SampleGrid:
        """Parse ``"r1,r2,.../angles"``."""
        try:
            radii_part, _, angles_part = text.partition("/")
            radii = tuple(float(t) for t in radii_part.split(",") if t.strip())
            angles = int(angles_part) if angles_part.strip() else DEFAULT_ANGLES
        except ValueError as exc:
            raise ValueError(f"bad grid spec {text!r}: {exc}") from None
        return cls(radii, angles)

    @property
    def max_radius(self) -> float:
        return self.radii[-1]

    def ring_angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.angles_per_ring) / self.angles_per_ring

    def points(self) -> np.ndarray:
        unit = np.exp(1j * self.ring_angles())
        pts = (np.asarray(self.radii)[:, None] * unit[None, :]).ravel()
        if self.includes_origin:
            pts = np.concatenate([[0.0 + 0.0j], pts])
        return pts

    def restricted(self, max_radius: float) -> SampleGrid:
        radii = tuple(r for r in self.radii if r <= max_radius * (1 + 1e-12))
        if not radii:
            raise PointOutsideRadius(f"no grid ring inside radius {max_radius}")
        return SampleGrid(radii, self.angles_per_ring, self.includes_origin)

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "angles_per_ring": self.angles_per_ring,
            "includes_origin": self.includes_origin,
        }

    def spec(self) -> str:
        return ",".join(repr(r) for r in self.radii) + f"/{self.angles_per_ring}"


@dataclass
class VerificationReport:
    theorem_id: TheoremId
    passed: bool
    worst_margin: float
    witness_point: complex
    grid: SampleGrid | None
    truncation_order: int
    verdict: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id.value,
            "passed": bool(self.passed),
            "worst_margin": float(self.worst_margin),
            "witness": {"re": float(self.witness_point.real), "im": float(self.witness_point.imag)},
            "grid": self.grid.to_dict() if self.grid is not None else None,
            "truncation_order": int(self.truncation_order),
            "verdict": self.verdict,
            "details": _jsonable(self.details),
        }

    @classmethod
    def from_dict(cls, d: dict) -> VerificationReport:
        grid = d.get("grid")
        return cls(
            theorem_id=TheoremId(d["theorem_id"]),
            passed=bool(d["passed"]),
            worst_margin=float(d["worst_margin"]),
            witness_point=complex(d["witness"]["re"], d["witness"]["im"]),
            grid=SampleGrid(tuple(grid["radii"]), grid["angles_per_ring"], grid["includes_origin"]) if grid else None,
            truncation_order=int(d["truncation_order"]),
            verdict=d.get("verdict", ""),
            details=d.get("details", {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        w = self.witness_point
        return (
            f"{self.theorem_id.value:<13} {status}  worst_margin={self.worst_margin:+.6e}"
            f"  at z={w.real:+.6f}{w.imag:+.6f}i  {self.verdict}"
        ).rstrip()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _reduce(theorem, margins, points, grid, order, tol, verdict="", **details):
    margins = np.asarray(margins, dtype=float)
    i = int(np.argmin(margins))  # first minimum: deterministic witness
    worst = float(margins[i])
    return VerificationReport(
        theorem_id=theorem,
        passed=bool(worst > -tol),
        worst_margin=worst,
        witness_point=complex(points[i]),
        grid=grid,
        truncation_order=order,
        verdict=verdict,
        details=details,
    )


def _map_order(m: LogHarmonicMap) -> int:
    return min(m.h.order, m.g.order)


def _check_alpha(alpha: float):
    if not (0.0 <= alpha < 1.0):
        raise AlphaOutOfRange(f"alpha must lie in [0, 1), got {alpha}")


# -- Schwarz functions -------------------------------------------------------


@dataclass(frozen=True)
class SchwarzWitness:
    """A candidate Schwarz function with its measured ``max |psi(z)/z|``.

    ``certified`` is true only if the ratio never exceeded 1 on the sampled
    rings. Uncertified witnesses come from :func:`measure_schwarz` and are
    still accepted by :func:`construct_starlike`, which then marks the map as
    not Schwarz-certified.
    """

    psi: TaylorSeries
    verified_radius: float
    max_ratio: float
    argmax: complex = 0j
    max_modulus: float = 0.0

    @property
    def certified(self) -> bool:
        return self.max_ratio <= 1.0 + SCHWARZ_TOL


def _witness_points(radius: float, grid: SampleGrid | None) -> np.ndarray:
    grid = grid or SampleGrid.default(min(radius, DEFAULT_RADII[-1]))
    # psi/z is analytic, so its maximum modulus sits on the outer circle;
    # that circle is always sampled even if the grid stops short of it.
    # radius may be 1 here, which a SampleGrid does not allow.
    radii = np.array(sorted({r for r in grid.radii if r < radius} | {radius}))
    unit = np.exp(1j * grid.ring_angles())
    return np.concatenate([[0.0 + 0.0j], (radii[:, None] * unit[None, :]).ravel()])


def measure_schwarz(psi: TaylorSeries, radius: float, grid: SampleGrid | None = None) -> SchwarzWitness:
    """Measure ``max |psi(z)/z|`` on ``|z| <= radius`` without judging it."""
    if not (0.0 < radius <= 1.0):
        raise ValueError(f"radius must lie in (0, 1], got {radius}")
    if radius > psi.ref_radius * (1 + 1e-12):
        raise PointOutsideRadius(f"radius {radius} exceeds the series radius {psi.ref_radius}")
    if psi.coeffs[0] != 0:
        raise NotSchwarz(f"psi(0) = {psi.coeffs[0]} != 0")
    pts = _witness_points(radius, grid)
    ratio = np.abs(shift_down(psi)(pts))
    i = int(np.argmax(ratio))
    return SchwarzWitness(
        psi=psi,
        verified_radius=float(radius),
        max_ratio=float(ratio[i]),
        argmax=complex(pts[i]),
        max_modulus=float(np.max(np.abs(psi(pts)))),
    )


def schwarz_check(psi: TaylorSeries, radius: float, grid: SampleGrid | None = None) -> SchwarzWitness:
    """Certify ``psi(0) = 0`` and ``|psi(z)| <= |z|`` on the sampled disc.

    Raises :class:`NotSchwarz` (with the measured witness attached) if the
    ratio exceeds ``1 + 1e-12`` anywhere.
    """
    witness = measure_schwarz(psi, radius, grid)
    if not witness.certified:
        raise NotSchwarz(
            f"max |psi(z)/z| = {witness.max_ratio:.6g} > 1 at z = {witness.argmax:.6g} "
            f"(radius {radius})",
            witness,
        )
    return witness


def schwarz_integrand(psi: TaylorSeries, alpha: float) -> TaylorSeries:
    """Series of ``2(1-alpha) psi(t) / (t (1 - psi(t)))``."""
    q = shift_down(psi)
    one_minus = TaylorSeries.constant(1.0, order=psi.order, ref_radius=psi.ref_radius) - psi
    return div(q, one_minus.truncate(q.order)) * (2.0 * (1.0 - alpha))


def construct_starlike(
    g: TaylorSeries,
    witness: SchwarzWitness,
    alpha: float,
    beta: complex = 0.0,
    grid: SampleGrid | None = None,
    order: int | None = None,
) -> LogHarmonicMap:
    """Build ``h = g * exp(integral_0^z 2(1-alpha) psi/(t(1-psi)) dt)``.

    Works at ``order`` (default: the larger of the orders of ``g`` and
    ``psi``); the shorter input is zero-padded, which is exact for the
    polynomial it represents. The returned map is trusted on
    ``witness.verified_radius`` and annotated with ``alpha``.
    """
    _check_alpha(alpha)
    beta = complex(beta)
    if not beta.real > -0.5:
        raise ValueError(f"Re(beta) must exceed -1/2, got {beta.real}")
    if g.coeffs[0] != 1:
        raise ValueError("g(0) must equal 1")
    psi = witness.psi
    radius = min(witness.verified_radius, g.ref_radius)
    pts = _witness_points(witness.verified_radius, grid)
    gap = np.abs(1.0 - psi(pts))
    if np.min(gap) < 1e-10:
        i = int(np.argmin(gap))
        raise DegenerateDenominator(f"|1 - psi| = {gap[i]:.3g} at z = {pts[i]:.6g}")
    order = max(g.order, psi.order) if order is None else order
    g = g.truncate(order)
    exponent = antiderivative(schwarz_integrand(psi.truncate(order), alpha))
    ratio = exp_series(exponent)
    h = mul(g, ratio).with_radius(radius)
    return LogHarmonicMap(beta, h, g.with_radius(radius), alpha=alpha, schwarz_certified=witness.certified)


# -- certifiers -------------------------------------------------------------


def _grid_points(m: LogHarmonicMap, grid: SampleGrid | None, exclude_origin=False):
    grid = grid or SampleGrid.default(m.ref_radius)
    if exclude_origin and grid.includes_origin:
        grid = SampleGrid(grid.radii, grid.angles_per_ring, False)
    return grid, grid.points()


def verify_starlike(m: LogHarmonicMap, alpha: float, grid: SampleGrid | None = None, tol: float = DEFAULT_TOL):
    """Margin ``1 + Re{z h'/h - z g'/g} - alpha`` over the grid."""
    _check_alpha(alpha)
    grid, pts = _grid_points(m, grid)
    lh, lg = log_terms(m, pts)
    margins = (1.0 + (lh - lg).real) - alpha
    return _reduce(TheoremId.STARLIKE, margins, pts, grid, _map_order(m), tol, alpha=alpha)


def subordination_margin(m: LogHarmonicMap, alpha: float, grid: SampleGrid | None = None, tol: float = DEFAULT_TOL):
    """Range inclusion of ``z h'/h - z g'/g`` in ``{Re w > alpha - 1}``.

    ``2(1-alpha) z/(1-z)`` is univalent onto that half-plane and vanishes at
    0; the subordinate function also vanishes at 0 by construction, so range
    inclusion is the whole test.
    """
    _check_alpha(alpha)
    grid, pts = _grid_points(m, grid)
    lh, lg = log_terms(m, pts)
    phi = lh - lg
    margins = phi.real - (alpha - 1.0)
    lh0, lg0 = log_terms(m, 0.0)
    return _reduce(
        TheoremId.SUBORDINATION,
        margins,
        pts,
        grid,
        _map_order(m),
        tol,
        alpha=alpha,
        half_plane_bound=alpha - 1.0,
        value_at_origin=complex(lh0 - lg0),
    )


def log_derivative_coeffs(m: LogHarmonicMap, n_trunc: int | None = None):
    """Coefficients ``h_n`` and ``g_n`` (n = 1..n_trunc) of z h'/h and z g'/g."""
    order = _map_order(m)
    n_trunc = order if n_trunc is None else n_trunc
    if not (1 <= n_trunc <= order):
        raise ValueError(f"n_trunc must lie in [1, {order}]")
    hn = log_derivative(m.h).coeffs[1 : n_trunc + 1]
    gn = log_derivative(m.g).coeffs[1 : n_trunc + 1]
    return hn, gn


def sense_preserving_check(m: LogHarmonicMap, n_trunc: int | None = None, tol: float = DEFAULT_TOL):
    """Truncated coefficient conditions for sense preservation.

    Condition A: ``sum |h_n| < 1 - |beta|``.
    Condition B: ``sum (|h_n| + |g_n|) <= 1 - 2|beta|``.

    Partial sums of non-negative terms only grow with n, so a FAIL is
    conclusive while a PASS is a heuristic certificate for the truncation.
    """
    hn, gn = log_derivative_coeffs(m, n_trunc)
    b = abs(m.beta)
    sum_h = float(np.sum(np.abs(hn)))
    sum_g = float(np.sum(np.abs(gn)))
    margin_a = (1.0 - b) - sum_h
    margin_b = (1.0 - 2.0 * b) - (sum_h + sum_g)
    worst = min(margin_a, margin_b)
    passed = worst > -tol
    return VerificationReport(
        theorem_id=TheoremId.SENSE,
        passed=passed,
        worst_margin=worst,
        witness_point=0j,
        grid=None,
        truncation_order=len(hn),
        verdict="heuristic (truncated)" if passed else "conclusive",
        details={
            "sum_abs_h": sum_h,
            "sum_abs_g": sum_g,
            "margin_h": margin_a,
            "margin_h_plus_g": margin_b,
            "condition_h": bool(margin_a > -tol),
            "condition_h_plus_g": bool(margin_b > -tol),
        },
    )


def dilatation_series_bound(m: LogHarmonicMap, n_trunc: int | None = None) -> float:
    """``(|beta| + sum|g_n|) / (1 - |beta| - sum|h_n|)``; ``inf`` if the
    denominator is not positive."""
    hn, gn = log_derivative_coeffs(m, n_trunc)
    b = abs(m.beta)
    den = 1.0 - b - float(np.sum(np.abs(hn)))
    if den <= 0.0:
        return math.inf
    return (b + float(np.sum(np.abs(gn)))) / den


def dilatation_bound_check(m: LogHarmonicMap, grid: SampleGrid | None = None, tol: float = DEFAULT_TOL):
    """Margin ``1 - |w(z)|`` over the grid, plus the coefficient bound."""
    grid, pts = _grid_points(m, grid)
    w = dilatation(m, pts).w
    bound = dilatation_series_bound(m)
    return _reduce(
        TheoremId.DILATATION,
        1.0 - np.abs(w),
        pts,
        grid,
        _map_order(m),
        tol,
        max_abs_w=float(np.max(np.abs(w))),
        series_bound=bound,
        series_bound_below_one=bool(bound < 1.0),
    )


def hg_threshold(alpha: float) -> float:
    """``1 / (3 - 2 alpha)``."""
    return 1.0 / (3.0 - 2.0 * alpha)


def h_over_g_bound_check(m: LogHarmonicMap, alpha: float, grid: SampleGrid | None = None, tol: float = DEFAULT_TOL):
    """Margin ``Re{h/g} - 1/(3 - 2 alpha)`` over the grid (alpha in (1/2, 1))."""
    if not (0.5 < alpha < 1.0):
        raise AlphaOutOfRange(f"the Re(h/g) bound needs alpha in (1/2, 1), got {alpha}")
    grid, pts = _grid_points(m, grid)
    ratio = m.h(pts) / m.g(pts)
    mu = hg_threshold(alpha)
    return _reduce(
        TheoremId.HG, ratio.real - mu, pts, grid, _map_order(m), tol,
        alpha=alpha, threshold=mu, min_real=float(np.min(ratio.real)),
    )


def jacobian_bound_factors(gamma_abs: float, r):
    """Lower and upper bounds for ``J_f / |f_z|^2`` at ``|z| = r``."""
    r = np.asarray(r, dtype=float)
    c = (1.0 - gamma_abs**2) * (1.0 - r**2)
    lower = c / (1.0 + gamma_abs * r) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = c / (1.0 - gamma_abs * r) ** 2
    upper = np.where(r < gamma_abs, inner, 1.0)
    return lower, upper


def jacobian_bounds_check(m: LogHarmonicMap, grid: SampleGrid | None = None, tol: float = DEFAULT_TOL):
    """Two-sided Jacobian bounds in terms of ``|f_z|^2`` and ``gamma``.

    Margins are reported for ``J_f / |f_z|^2 = 1 - |w|^2``, i.e. the theorem's
    inequalities divided by the positive ``|f_z|^2``; this keeps the margin
    independent of the size of ``f`` near the rim.
    """
    grid, pts = _grid_points(m, grid, exclude_origin=True)
    r = np.abs(pts)
    ga = abs(m.gamma)
    pair = wirtinger(m, pts)
    w = dilatation(m, pts).w
    fz2 = np.abs(pair.f_z) ** 2
    ratio = 1.0 - np.abs(w) ** 2
    lower, upper = jacobian_bound_factors(ga, r)
    margins = np.minimum(ratio - lower, upper - ratio)
    jac = fz2 * ratio
    return _reduce(
        TheoremId.JACOBIAN,
        margins,
        pts,
        grid,
        _map_order(m),
        tol,
        gamma_abs=ga,
        points_inside_gamma=int(np.sum(r < ga)),
        points_outside_gamma=int(np.sum(r >= ga)),
        min_lower_slack=float(np.min(ratio - lower)),
        min_upper_slack=float(np.min(upper - ratio)),
        min_absolute_slack=float(np.min(np.minimum(jac - lower * fz2, upper * fz2 - jac))),
        min_jacobian=float(np.min(jac)),
    )


def dilatation_disc(gamma: complex, r):
    """Centre and radius of the disc containing ``w(z)`` for ``|z| = r``."""
    r = np.asarray(r, dtype=float)
    ga2 = abs(gamma) ** 2
    den = 1.0 - ga2 * r**2
    return gamma * (1.0 - r**2) / den, (1.0 - ga2) * r / den


def dilatation_disc_check(m: LogHarmonicMap, grid: SampleGrid | None = None, tol: float = DEFAULT_TOL):
    """Margin ``radius - |w(z) - centre|`` over the grid."""
    grid, pts = _grid_points(m, grid, exclude_origin=True)
    w = dilatation(m, pts).w
    centre, rad = dilatation_disc(m.gamma, np.abs(pts))
    return _reduce(
        TheoremId.DISC, rad - np.abs(w - centre), pts, grid, _map_order(m), tol, gamma=m.gamma
    )


def starlike_exponent_roundtrip(m: LogHarmonicMap, witness: SchwarzWitness, alpha: float) -> float:
    """Max coefficient gap between ``z h'/h - z g'/g`` and ``2(1-alpha) psi/(1-psi)``."""
    recovered = log_derivative(m.h) - log_derivative(m.g)
    psi = witness.psi.truncate(max(witness.psi.order, recovered.order))
    one_minus = TaylorSeries.constant(1.0, order=psi.order, ref_radius=psi.ref_radius) - psi
    target = div(psi, one_minus) * (2.0 * (1.0 - alpha))
    n = min(recovered.order, target.order)
    return float(np.max(np.abs(recovered.coeffs[: n + 1] - target.coeffs[: n + 1])))


def report_dict(reports) -> dict:
    return {"reports": [r.to_dict() for r in reports], "all_passed": all(r.passed for r in reports)}


__all__ = [
    "DEFAULT_TOL",
    "SampleGrid",
    "SchwarzWitness",
    "TheoremId",
    "VerificationReport",
    "construct_starlike",
    "dilatation_bound_check",
    "dilatation_disc",
    "dilatation_disc_check",
    "dilatation_series_bound",
    "h_over_g_bound_check",
    "hg_threshold",
    "jacobian_bound_factors",
    "jacobian_bounds_check",
    "log_derivative_coeffs",
    "measure_schwarz",
    "report_dict",
    "schwarz_check",
    "schwarz_integrand",
    "sense_preserving_check",
    "starlike_exponent_roundtrip",
    "subordination_margin",
    "verify_starlike",
]
