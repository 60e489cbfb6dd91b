import numpy as np
import pytest
from conftest import ORDER

from logharm.errors import PointOutsideRadius
from logharm.geometry import (
    BoundaryCurve,
    candidate_hits,
    collision_tolerance,
    export_curve,
    injectivity_radius,
    parse_curve_csv,
    parse_svg_path,
    polar_mesh,
    sample_boundary,
)
from logharm.mapping import LogHarmonicMap, eval_map, identity_map, power_map
from logharm.series import TaylorSeries, exponential, koebe_factor


def one(radius=0.95):
    return TaylorSeries.constant(1.0, order=ORDER, ref_radius=radius)


def exp2z():
    return LogHarmonicMap(0, exponential(2.0, order=ORDER), one())


# -- boundary sampling ----------------------------------------------------------


def test_identity_boundary_is_a_circle():
    c = sample_boundary(identity_map(), 0.5, 64)
    assert np.max(np.abs(np.abs(c.points) - 0.5)) < 1e-15
    assert len(c) == 64 and c.radius == 0.5


@pytest.mark.parametrize("beta", [1j, complex(-1 / 3, 4)])
def test_power_map_boundary_modulus_and_spiral(beta):
    r = 0.99
    c = sample_boundary(power_map(beta, ref_radius=1.0), r, 1024)
    assert np.max(np.abs(np.abs(c.points) - r ** (1 + 2 * beta.real))) < 1e-12
    z = r * np.exp(1j * c.thetas)
    turn = np.angle(c.points / z) - 2 * beta.imag * np.log(r)
    assert np.max(np.abs(np.angle(np.exp(1j * turn)))) < 1e-10


def test_boundary_preconditions():
    with pytest.raises(ValueError):
        sample_boundary(identity_map(), 0.5, 15)
    with pytest.raises(PointOutsideRadius):
        sample_boundary(identity_map(), 0.96, 64)


@pytest.mark.parametrize("offset", [1, 7, 64, -3])
def test_rotation_permutes_points_exactly(offset):
    m = LogHarmonicMap(0.2 + 0.3j, TaylorSeries([1, 0.3j], order=ORDER), TaylorSeries([1, 0.1], order=ORDER))
    base = sample_boundary(m, 0.8, 64)
    rot = sample_boundary(m, 0.8, 64, offset=offset)
    assert np.array_equal(rot.points, np.roll(base.points, -offset))
    assert np.array_equal(rot.thetas, np.roll(base.thetas, -offset))


# -- export ---------------------------------------------------------------------


def test_csv_format_and_round_trip():
    c = sample_boundary(power_map(0.1 + 2j), 0.7, 16)
    data = export_curve(c, "csv")
    text = data.decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == "theta,re,im" and lines[-1] == "" and "\r" not in text
    assert len(lines) == 16 + 2
    back = parse_curve_csv(data, c.radius)
    assert np.max(np.abs(back.points - c.points)) < 1e-14
    assert np.max(np.abs(back.thetas - c.thetas)) < 1e-14
    assert np.max(np.abs(np.abs(back.points) - 0.7 ** 1.2)) < 1e-14


def test_svg_is_a_single_closed_path_with_fitted_view_box():
    c = sample_boundary(exp2z(), 0.65, 256)
    data = export_curve(c, "svg")
    text = data.decode("utf-8")
    assert text.count("<path") == 1
    pts = parse_svg_path(data)
    assert np.max(np.abs(pts - np.conj(c.points))) < 1e-15 * np.max(np.abs(c.points))
    vb = [float(v) for v in text.split('viewBox="')[1].split('"')[0].split()]
    x, y = c.points.real, -c.points.imag
    span = max(x.max() - x.min(), y.max() - y.min())
    assert vb[0] == pytest.approx(x.min() - 0.05 * span)
    assert vb[1] == pytest.approx(y.min() - 0.05 * span)
    assert vb[2] == pytest.approx(x.max() - x.min() + 0.1 * span)


def test_export_rejects_unknown_format():
    c = sample_boundary(identity_map(), 0.5, 16)
    with pytest.raises(ValueError):
        export_curve(c, "png")


def test_curve_requires_sixteen_points():
    with pytest.raises(ValueError):
        BoundaryCurve(0.5, np.zeros(4), np.zeros(4, complex))


# -- collision search -------------------------------------------------------------


def _brute_force_hits(z, fz, tris, min_sep):
    hits = set()
    for t, (i, j, k) in enumerate(tris):
        a, b, c = fz[i], fz[j], fz[k]
        den = (b - a).real * (c - a).imag - (b - a).imag * (c - a).real
        if den == 0:
            continue
        for p in range(len(z)):
            if min(abs(z[p] - z[i]), abs(z[p] - z[j]), abs(z[p] - z[k])) <= min_sep:
                continue
            v = fz[p] - a
            s = (v.real * (c - a).imag - v.imag * (c - a).real) / den
            u = ((b - a).real * v.imag - (b - a).imag * v.real) / den
            if s >= -1e-9 and u >= -1e-9 and s + u <= 1 + 1e-9:
                hits.add((p, t))
    return hits


@pytest.mark.parametrize("r", [0.45, 0.6, 0.8])
def test_candidate_hits_match_brute_force(r):
    m = exp2z()
    z, tris = polar_mesh(r, 0.1, 24)
    fz = eval_map(m, z)
    hp, ht = candidate_hits(z, fz, tris, 0.15)
    oracle = _brute_force_hits(z, fz, tris, 0.15)
    assert set(zip(hp.tolist(), ht.tolist())) == oracle
    # exp(2z) folds over beyond r = 1/2
    assert bool(oracle) == (r > 0.5)


def test_polar_mesh_shape():
    z, tris = polar_mesh(0.5, 0.01, 200)
    assert len(z) == 50 * 200
    assert tris.shape == (2 * 49 * 200, 3)
    assert np.min(np.abs(z)) == pytest.approx(0.01)


# -- injectivity ------------------------------------------------------------------


def test_identity_has_no_collision():
    est = injectivity_radius(identity_map(), 0.05, 64)
    assert est.upper is None and est.collision_pair is None
    assert est.lower >= 0.99 * 0.95
    assert "no collision found at resolution" in est.statement()


def test_exponential_bracket():
    est = injectivity_radius(exp2z(), 0.01, 200)
    assert est.lower < 0.5 + 1e-12 <= est.upper + 1e-12
    assert est.upper - est.lower <= 0.02 + 1e-12
    z1, z2 = est.collision_pair
    assert abs(z1 - z2) > 0.1
    ring = eval_map(exp2z(), est.upper * np.exp(2j * np.pi * np.arange(200) / 200))
    assert abs(eval_map(exp2z(), z1) - eval_map(exp2z(), z2)) < collision_tolerance(ring)


def test_refinement_is_monotone():
    lowers = [injectivity_radius(exp2z(), res, 120).lower for res in (0.05, 0.02, 0.01)]
    assert lowers[0] >= lowers[1] >= lowers[2]
    assert all(abs(x - 0.5) <= 0.05 for x in lowers)


def test_koebe_has_no_collision_and_brute_force_agrees():
    m = LogHarmonicMap(0, koebe_factor(0.0, order=1024), TaylorSeries.constant(1.0, order=1024))
    est = injectivity_radius(m, 0.05, 64)
    assert est.upper is None and est.lower == pytest.approx(0.95)
    # all-pairs oracle on 10^4 points: no two far-apart samples share an image
    res = 0.0095
    z, _ = polar_mesh(0.95, res, 100)
    fz = eval_map(m, z)
    tol = collision_tolerance(fz[-100:])
    worst = np.inf
    for start in range(0, len(z), 1000):
        blk = slice(start, start + 1000)
        d_img = np.abs(fz[blk, None] - fz[None, :])
        far = np.abs(z[blk, None] - z[None, :]) > 10 * res
        worst = min(worst, float(np.min(np.where(far, d_img, np.inf))))
    assert len(z) == 10_000
    assert worst > tol
