"""Images of discs under log-harmonic maps.

Boundary curves ``f(r e^{i theta})`` for figure reproduction, CSV/SVG export,
and a sampled injectivity test.

Injectivity is probed on a polar mesh of the disc ``|z| <= r``: rings spaced
``resolution`` apart (the inner disc of radius ``resolution`` is left out),
each split into triangles. A sample point whose image lands inside the
image of a mesh triangle lying more than ``10 * resolution`` away from it in
the preimage is a collision *candidate*; candidates come from a spatial hash
on the image plane, so the cost is close to linear in the number of samples.
A candidate is confirmed by solving for a second preimage with Newton's
method. Finding no collision means only that: no collision at that
resolution.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import PointOutsideRadius
from .mapping import LogHarmonicMap, eval_map, wirtinger

MIN_POINTS = 16
SEPARATION_FACTOR = 10.0
# barycentric slack; covers points sitting on a shared image edge
BARY_TOL = 1e-9


@dataclass(frozen=True)
class BoundaryCurve:
    radius: float
    thetas: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        if len(self.points) < MIN_POINTS:
            raise ValueError(f"a boundary curve needs at least {MIN_POINTS} points")
        if len(self.points) != len(self.thetas):
            raise ValueError("thetas and points differ in length")

    def __len__(self):
        return len(self.points)


def sample_boundary(m: LogHarmonicMap, r: float, n_points: int, offset: int = 0) -> BoundaryCurve:
    """Image of the circle ``|z| = r`` at ``n_points`` equally spaced angles.

    ``offset`` rotates the angles by ``offset * 2 pi / n_points``; angle
    indices are reduced modulo ``n_points`` before scaling, so a rotation is
    an exact permutation of an unrotated curve.
    """
    if n_points < MIN_POINTS:
        raise ValueError(f"n_points must be at least {MIN_POINTS}")
    if not (0.0 < r <= m.ref_radius * (1 + 1e-12)):
        raise PointOutsideRadius(f"radius {r} outside (0, {m.ref_radius}]")
    idx = (np.arange(n_points) + offset) % n_points
    thetas = 2.0 * np.pi * idx / n_points
    z = r * np.exp(1j * thetas)
    return BoundaryCurve(float(r), thetas, np.asarray(eval_map(m, z)))


# -- export -----------------------------------------------------------------


def export_curve(curve: BoundaryCurve, fmt: str = "csv") -> bytes:
    """Serialize a curve as UTF-8 CSV (``theta,re,im``) or as an SVG path."""
    if fmt == "csv":
        return _to_csv(curve)
    if fmt == "svg":
        return _to_svg(curve)
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'svg'")


def _to_csv(curve: BoundaryCurve) -> bytes:
    lines = ["theta,re,im"]
    for t, p in zip(curve.thetas, curve.points):
        lines.append(f"{t:.15g},{p.real:.15g},{p.imag:.15g}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_curve_csv(data: bytes | str, radius: float = math.nan) -> BoundaryCurve:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if [h.strip() for h in header] != ["theta", "re", "im"]:
        raise ValueError(f"unexpected CSV header {header}")
    rows = [tuple(float(v) for v in row) for row in reader if row]
    arr = np.array(rows, dtype=float)
    return BoundaryCurve(radius, arr[:, 0], arr[:, 1] + 1j * arr[:, 2])


def _to_svg(curve: BoundaryCurve) -> bytes:
    # SVG's y axis points down; plot (re, -im) so the picture is not mirrored
    x = curve.points.real
    y = -curve.points.imag
    xmin, xmax, ymin, ymax = x.min(), x.max(), y.min(), y.max()
    span = max(xmax - xmin, ymax - ymin, 1e-12)
    pad = 0.05 * span
    vb = (xmin - pad, ymin - pad, (xmax - xmin) + 2 * pad, (ymax - ymin) + 2 * pad)
    stroke = span / 400.0
    coords = " L ".join(f"{a:.17g} {b:.17g}" for a, b in zip(x, y))  # round-trip precision
    path = f"M {coords} Z"
    svg = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vb[0]:.10g} {vb[1]:.10g} {vb[2]:.10g} {vb[3]:.10g}" '
        'width="600" height="600" preserveAspectRatio="xMidYMid meet">\n'
        f'  <path d="{path}" fill="none" stroke="black" stroke-width="{stroke:.6g}"/>\n'
        "</svg>\n"
    )
    return svg.encode("utf-8")


def parse_svg_path(data: bytes) -> np.ndarray:
    """Vertices of the single path in an SVG written by :func:`export_curve`
    (in SVG coordinates, i.e. ``re - i im``)."""
    text = data.decode("utf-8")
    start = text.index(' d="') + 4
    d = text[start : text.index('"', start)]
    if not (d.startswith("M ") and d.endswith(" Z")):
        raise ValueError("path is not a single closed polyline")
    pts = []
    for chunk in d[2:-2].split(" L "):
        a, b = chunk.split()
        pts.append(complex(float(a), float(b)))
    return np.array(pts)


# -- injectivity ------------------------------------------------------------


@dataclass(frozen=True)
class InjectivityEstimate:
    """Bracket for the radius of injectivity.

    ``upper`` is ``None`` when no collision was found at any tested radius;
    then ``lower`` is the largest radius tested.
    """

    lower: float
    upper: float | None
    collision_pair: tuple[complex, complex] | None
    resolution: float
    samples_per_ring: int
    tested: tuple[tuple[float, bool], ...] = ()

    @property
    def bracketed(self) -> bool:
        return self.upper is not None

    def statement(self) -> str:
        if self.upper is None:
            return f"no collision found at resolution {self.resolution} up to r = {self.lower}"
        return (
            f"no collision found at resolution {self.resolution} for r <= {self.lower}; "
            f"collision at r = {self.upper}"
        )

    def to_dict(self) -> dict:
        pair = None
        if self.collision_pair is not None:
            pair = [{"re": c.real, "im": c.imag} for c in self.collision_pair]
        return {
            "lower": self.lower,
            "upper": self.upper,
            "collision_pair": pair,
            "resolution": self.resolution,
            "samples_per_ring": self.samples_per_ring,
            "tested": [{"radius": r, "collision": c} for r, c in self.tested],
            "statement": self.statement(),
        }


def polar_mesh(r: float, resolution: float, samples_per_ring: int):
    """Sample points and triangles of an annulus ``resolution <= |z| <= r``.

    Returns ``(z, triangles)`` with ``triangles`` an ``(T, 3)`` index array.
    """
    rings = max(1, round(r / resolution))
    radii = r * np.arange(1, rings + 1) / rings
    m = samples_per_ring
    theta = 2.0 * np.pi * np.arange(m) / m
    z = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    if rings == 1:
        return z, np.empty((0, 3), dtype=np.int64)
    k = np.arange(rings - 1)[:, None]
    j = np.arange(m)[None, :]
    a = k * m + j
    b = k * m + (j + 1) % m
    c = (k + 1) * m + j
    d = (k + 1) * m + (j + 1) % m
    tris = np.concatenate(
        [np.stack([a, b, d], axis=-1).reshape(-1, 3), np.stack([a, d, c], axis=-1).reshape(-1, 3)]
    )
    return z, tris


def _cells(x, y, x0, y0, cell):
    return np.floor((x - x0) / cell).astype(np.int64), np.floor((y - y0) / cell).astype(np.int64)


class _TriangleHash:
    """Triangles bucketed by image cell; each triangle covers at most 2 x 2
    cells of side ``cell``."""

    def __init__(self, x0, y0, cell, txmin, txmax, tymin, tymax, tri_ids):
        self.x0, self.y0, self.cell = x0, y0, cell
        c0x, c0y = _cells(txmin, tymin, x0, y0, cell)
        c1x, c1y = _cells(txmax, tymax, x0, y0, cell)
        keys, ids = [], []
        for dx in (0, 1):
            for dy in (0, 1):
                ok = (c0x + dx <= c1x) & (c0y + dy <= c1y)
                keys.append(_key(c0x[ok] + dx, c0y[ok] + dy))
                ids.append(tri_ids[ok])
        keys = np.concatenate(keys)
        ids = np.concatenate(ids)
        order = np.argsort(keys, kind="stable")
        self.keys, self.ids = keys[order], ids[order]

    def query(self, px, py, pt_ids):
        cx, cy = _cells(px, py, self.x0, self.y0, self.cell)
        pkey = _key(cx, cy)
        lo = np.searchsorted(self.keys, pkey, side="left")
        n = np.searchsorted(self.keys, pkey, side="right") - lo
        offs = np.arange(int(n.sum())) - np.repeat(np.cumsum(n) - n, n)
        return self.ids[np.repeat(lo, n) + offs], np.repeat(pt_ids, n)


def _key(cx, cy):
    # cell indices stay far below 2**31 for any sane image, so packing two of
    # them into one int64 is collision-free
    return (cx << 32) + (cy & 0xFFFFFFFF)


def candidate_hits(z: np.ndarray, fz: np.ndarray, tris: np.ndarray, min_separation: float, block: int = 4096):
    """All (point, triangle) pairs where the point's image lies in the
    piecewise-linear image of a triangle whose vertices are all farther than
    ``min_separation`` from the point in the preimage.

    Triangle images can differ in size by orders of magnitude (``exp(2z)``,
    a Koebe map near the rim, a spiralling ``z|z|^(2 beta)``), so triangles
    are hashed in levels: one of size s lands in the level whose cell side is
    the smallest ``base * 2**k >= s``. Points are processed in blocks to keep
    memory bounded.
    """
    empty = (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64))
    if len(tris) == 0:
        return empty
    px, py = fz.real, fz.imag
    tx, ty = px[tris], py[tris]
    txmin, txmax = tx.min(axis=1), tx.max(axis=1)
    tymin, tymax = ty.min(axis=1), ty.max(axis=1)
    size = np.maximum(txmax - txmin, tymax - tymin)
    base = float(np.median(size))
    if not base > 0:
        base = float(np.max(size)) or 1.0
    level = np.maximum(0, np.ceil(np.log2(np.maximum(size, base * 1e-300) / base))).astype(np.int64)
    x0, y0 = float(px.min()), float(py.min())
    hashes = []
    for lv in np.unique(level):
        sel = np.flatnonzero(level == lv)
        hashes.append(
            _TriangleHash(x0, y0, base * 2.0 ** int(lv), txmin[sel], txmax[sel], tymin[sel], tymax[sel], sel)
        )

    hit_pt, hit_tri = [], []
    for start in range(0, len(z), block):
        ids = np.arange(start, min(start + block, len(z)))
        for th in hashes:
            pair_tri, pair_pt = th.query(px[ids], py[ids], ids)
            if len(pair_pt) == 0:
                continue
            verts = tris[pair_tri]
            far = np.all(np.abs(z[verts] - z[pair_pt][:, None]) > min_separation, axis=1)
            pair_tri, pair_pt, verts = pair_tri[far], pair_pt[far], verts[far]
            a, b, c = fz[verts[:, 0]], fz[verts[:, 1]], fz[verts[:, 2]]
            v0, v1, v2 = b - a, c - a, fz[pair_pt] - a
            den = v0.real * v1.imag - v0.imag * v1.real
            with np.errstate(divide="ignore", invalid="ignore"):
                s = (v2.real * v1.imag - v2.imag * v1.real) / den
                t = (v0.real * v2.imag - v0.imag * v2.real) / den
            inside = (den != 0) & (s >= -BARY_TOL) & (t >= -BARY_TOL) & (s + t <= 1 + BARY_TOL)
            hit_pt.append(pair_pt[inside])
            hit_tri.append(pair_tri[inside])
    if not hit_pt:
        return empty
    hp, ht = np.concatenate(hit_pt), np.concatenate(hit_tri)
    order = np.lexsort((ht, hp))
    return hp[order], ht[order]


def _newton_preimage(m: LogHarmonicMap, target, start, r: float, steps: int = 40):
    """Solve ``f(zeta) = target`` from ``start`` inside ``|zeta| <= r``.

    Uses the real 2x2 Newton step written with Wirtinger derivatives:
    ``dz = (conj(f_z) F - f_zbar conj(F)) / (|f_zbar|^2 - |f_z|^2)``.
    Iterates that leave the disc are pulled back to its rim.
    """
    zeta = np.array(start, dtype=np.complex128)
    live = np.ones(zeta.shape, dtype=bool)
    floor = 1e-12
    for _ in range(steps):
        if not np.any(live):
            break
        zl = zeta[live]
        zl = np.where(np.abs(zl) < floor, floor, zl)
        F = np.asarray(eval_map(m, zl)) - target[live]
        pair = wirtinger(m, zl)
        fz = np.asarray(pair.f_z)
        fzb = np.asarray(pair.f_zbar)
        det = np.abs(fz) ** 2 - np.abs(fzb) ** 2
        ok = np.abs(det) > 1e-300
        dz = np.zeros_like(zl)
        dz[ok] = -(np.conj(fz[ok]) * F[ok] - fzb[ok] * np.conj(F[ok])) / det[ok]
        znew = zl + dz
        out = np.abs(znew) > r
        znew[out] = znew[out] / np.abs(znew[out]) * r
        zeta[live] = znew
        idx = np.flatnonzero(live)
        live[idx[(np.abs(dz) < 1e-15) | ~ok]] = False
    return zeta


def collision_tolerance(ring_images: np.ndarray) -> float:
    """``1e-6`` times the median ``|f|`` on a ring (the local image scale)."""
    return 1e-6 * float(np.median(np.abs(ring_images)))


def has_collision(m: LogHarmonicMap, r: float, resolution: float, samples_per_ring: int, max_refine: int = 4096):
    """Confirmed collision pair on ``|z| <= r`` or ``None``.

    Candidates from :func:`candidate_hits` are refined by Newton's method
    to a second preimage; a pair counts only if that preimage lies in the
    disc, is farther than ``10 * resolution`` from the first point, and the
    two images agree to ``collision_tol`` (see :func:`collision_tolerance`).
    """
    z, tris = polar_mesh(r, resolution, samples_per_ring)
    fz = np.asarray(eval_map(m, z))
    sep = SEPARATION_FACTOR * resolution
    hp, ht = candidate_hits(z, fz, tris, sep)
    if len(hp) == 0:
        return None
    tol = collision_tolerance(fz[-samples_per_ring:])
    for start in range(0, len(hp), max_refine):
        p, t = hp[start : start + max_refine], ht[start : start + max_refine]
        verts = tris[t]
        # initial guess: barycentric interpolation of the triangle's preimage
        a, b, c = fz[verts[:, 0]], fz[verts[:, 1]], fz[verts[:, 2]]
        v0, v1, v2 = b - a, c - a, fz[p] - a
        den = v0.real * v1.imag - v0.imag * v1.real
        s_ = (v2.real * v1.imag - v2.imag * v1.real) / den
        t_ = (v0.real * v2.imag - v0.imag * v2.real) / den
        guess = (1 - s_ - t_) * z[verts[:, 0]] + s_ * z[verts[:, 1]] + t_ * z[verts[:, 2]]
        zeta = _newton_preimage(m, fz[p], guess, r)
        gap = np.abs(np.asarray(eval_map(m, zeta)) - fz[p])
        good = (gap < tol) & (np.abs(zeta - z[p]) > sep) & (np.abs(zeta) <= r * (1 + 1e-12))
        hits = np.flatnonzero(good)
        if len(hits):
            i = hits[0]
            return complex(z[p[i]]), complex(zeta[i])
    return None


def injectivity_radius(
    m: LogHarmonicMap,
    resolution: float = 0.01,
    samples_per_ring: int = 200,
    r_max: float | None = None,
) -> InjectivityEstimate:
    """Bisect on radii that are multiples of ``resolution``.

    Radii tested are ``k * resolution`` up to ``r_max`` (default: the map's
    trusted radius). A collision at radius r is assumed to persist for every
    larger radius, which holds for the true map; the sampled test is only
    an approximation of that.
    """
    if resolution < 1e-3:
        raise ValueError("resolution must be at least 1e-3")
    r_max = m.ref_radius if r_max is None else min(r_max, m.ref_radius)
    k_max = math.floor(r_max / resolution + 1e-9)
    if k_max < 1:
        raise ValueError("r_max is smaller than the resolution")
    tested = []

    def probe(k):
        r = k * resolution if k < k_max else r_max
        hit = has_collision(m, r, resolution, samples_per_ring)
        tested.append((float(r), hit is not None))
        return r, hit

    r_top, hit_top = probe(k_max)
    if hit_top is None:
        return InjectivityEstimate(float(r_top), None, None, resolution, samples_per_ring, tuple(tested))
    lo, hi, hit_hi = 0, k_max, hit_top
    r_lo = 0.0
    r_hi = r_top
    if k_max > 1:
        r1, hit1 = probe(1)
        if hit1 is not None:
            return InjectivityEstimate(0.0, float(r1), hit1, resolution, samples_per_ring, tuple(tested))
        lo, r_lo = 1, r1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        r_mid, hit_mid = probe(mid)
        if hit_mid is None:
            lo, r_lo = mid, r_mid
        else:
            hi, r_hi, hit_hi = mid, r_mid, hit_mid
    return InjectivityEstimate(float(r_lo), float(r_hi), hit_hi, resolution, samples_per_ring, tuple(tested))
