import numpy as np
import pytest

from logharm.mapping import LogHarmonicMap, eval_map
from logharm.series import TaylorSeries

ORDER = 512


def random_map(rng: np.random.Generator, degree: int = 5, scale: float = 0.1, normalized: bool = False):
    """Admissible map: Re beta in (-0.4, 0.8), |coefficients| <= scale."""
    beta = complex(rng.uniform(-0.4, 0.8), rng.uniform(-1.0, 1.0))

    def poly(c0):
        mag = scale * rng.uniform(0, 1, degree)
        ph = rng.uniform(0, 2 * np.pi, degree)
        return TaylorSeries([c0, *(mag * np.exp(1j * ph))], order=ORDER)

    h0 = 1.0 if normalized else complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
    return LogHarmonicMap(beta, poly(h0), poly(1.0))


def random_points(rng, n, rmin=0.1, rmax=0.9):
    r = rng.uniform(rmin, rmax, n)
    t = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * t)


def fd_wirtinger(m, z, step=1e-4):
    """Fourth-order central differences of f in x and y."""
    def d(direction):
        e = step * direction
        return (
            -eval_map(m, z + 2 * e) + 8 * eval_map(m, z + e) - 8 * eval_map(m, z - e) + eval_map(m, z - 2 * e)
        ) / (12 * step)

    fx, fy = d(1.0), d(1j)
    return (fx - 1j * fy) / 2, (fx + 1j * fy) / 2


def linear_dilatation_bound(beta: complex, a: complex, b: complex) -> float:
    """Bound for |w| on the whole unit disc when h = 1 + a z and g = 1 + b z.

    |z h'/h| <= |a|/(1-|a|) and |z g'/g| <= |b|/(1-|b|) for |z| < 1.
    """
    num = abs(beta) + abs(b) / (1 - abs(b))
    den = abs(1 + beta) - abs(a) / (1 - abs(a))
    return num / den if den > 0 else np.inf


SUITE_BETAS = (0.0, 0.3, complex(-0.3, 0.5), 0.8, 0.8j)
SUITE_COEFFS = ((0.0, 0.0), (0.2, 0.0), (0.0, 0.1j), (0.15 - 0.1j, 0.05), (-0.1j, -0.08 + 0.04j))


def sense_preserving_suite():
    """Maps with |w| < 1 proven on the full disc by the linear bound."""
    out = []
    for beta in SUITE_BETAS:
        for a, b in SUITE_COEFFS:
            if linear_dilatation_bound(beta, a, b) < 1:
                out.append(
                    LogHarmonicMap(beta, TaylorSeries([1, a], order=ORDER), TaylorSeries([1, b], order=ORDER))
                )
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# -- acceptance reporting ----------------------------------------------------

_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        n, text = marker
        _criteria[n] = ("PASS" if report.outcome == "passed" else "FAIL", text)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m is not None:
        item.user_properties.append(("criterion", (m.args[0], m.args[1])))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria, key=int):
        status, text = _criteria[n]
        terminalreporter.write_line(f"criterion {int(n):>2}: {status}  {text}")
