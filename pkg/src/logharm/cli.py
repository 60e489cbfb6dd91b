"""``logharm`` command line: construct, verify, render, injectivity.

A *map spec* is a small JSON object::

    {"beta_re": 0, "beta_im": 0, "alpha": 0.25,
     "psi": "identity", "g": "poly(0.1, 0.2)", "radius": 0.9, "order": 512}

``h`` and ``g`` are coefficient lists (numbers or ``[re, im]`` pairs) or one
of the builtins ``one``, ``koebe_factor(a)``, ``exp(c)``, ``poly(c1, ...)``
(meaning ``1 + c1 z + ...``). ``psi`` is ``identity``, ``mobius``
(``z/(1+z)``), ``zero`` or a coefficient list; when it is present, ``h`` is
built from ``psi`` and ``g`` and must not be given.

A *map file* is what ``construct`` writes: the full coefficient lists plus
beta, alpha and radius. Every command that reads a map accepts either form.

Exit codes: 0 success, 1 a certifier failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import analysis as an
from .errors import LogHarmonicError, NotSchwarz, SpecParseError
from .geometry import export_curve, injectivity_radius, sample_boundary
from .mapping import LogHarmonicMap
from .series import (
    DEFAULT_ORDER,
    DEFAULT_RADIUS,
    TaylorSeries,
    exponential,
    koebe_factor,
)

MAP_FORMAT = "logharm-map"
MAP_VERSION = 1
ALL_THEOREMS = ("starlike", "subordination", "sense", "dilatation", "jacobian", "hg", "disc")
SPEC_KEYS = {"beta_re", "beta_im", "alpha", "h", "g", "psi", "radius", "order"}

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


# -- spec parsing -----------------------------------------------------------


@dataclass(frozen=True)
class MapSpec:
    beta: complex
    alpha: float | None
    h: TaylorSeries | None
    g: TaylorSeries
    psi: TaylorSeries | None
    radius: float
    order: int


def _number(value, field: str) -> complex:
    if isinstance(value, bool):
        raise SpecParseError(field, "expected a number, got a boolean")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", ""))
        except ValueError:
            pass
    raise SpecParseError(field, f"expected a number or [re, im], got {value!r}")


def _real(spec: dict, key: str, default=None) -> float | None:
    if key not in spec:
        return default
    v = spec[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecParseError(key, f"expected a real number, got {v!r}")
    if not np.isfinite(v):
        raise SpecParseError(key, "must be finite")
    return float(v)


def _call_args(text: str, field: str) -> tuple[str, list[complex]]:
    match = _CALL.match(text)
    if not match:
        raise SpecParseError(field, f"cannot parse {text!r}")
    name, arglist = match.group(1), match.group(2)
    args = []
    if arglist is not None and arglist.strip():
        for i, tok in enumerate(arglist.split(",")):
            try:
                args.append(complex(tok.replace(" ", "")))
            except ValueError:
                raise SpecParseError(f"{field}.args[{i}]", f"not a number: {tok.strip()!r}") from None
    return name, args


def _coeff_list(value: list, field: str, order: int, radius: float) -> TaylorSeries:
    if not value:
        raise SpecParseError(field, "coefficient list is empty")
    coeffs = [_number(v, f"{field}[{i}]") for i, v in enumerate(value)]
    if len(coeffs) > order + 1:
        raise SpecParseError(field, f"{len(coeffs)} coefficients exceed order {order}")
    return TaylorSeries(coeffs, order=order, ref_radius=radius)


def _analytic(value, field: str, order: int, radius: float) -> TaylorSeries:
    if isinstance(value, list):
        return _coeff_list(value, field, order, radius)
    if not isinstance(value, str):
        raise SpecParseError(field, f"expected a builtin name or a coefficient list, got {value!r}")
    name, args = _call_args(value, field)

    def arity(n):
        if len(args) != n:
            raise SpecParseError(field, f"{name} takes {n} argument(s), got {len(args)}")

    if name == "one":
        arity(0)
        return TaylorSeries.constant(1.0, order=order, ref_radius=radius)
    if name == "koebe_factor":
        arity(1)
        a = args[0]
        if a.imag != 0 or not (0.0 <= a.real < 1.0):
            raise SpecParseError(field, f"koebe_factor needs a real argument in [0, 1), got {a}")
        return koebe_factor(a.real, order=order, ref_radius=radius)
    if name == "exp":
        arity(1)
        return exponential(args[0], order=order, ref_radius=radius)
    if name == "poly":
        if len(args) > order:
            raise SpecParseError(field, f"poly has {len(args)} coefficients, more than order {order}")
        return TaylorSeries([1.0, *args], order=order, ref_radius=radius)
    raise SpecParseError(field, f"unknown builtin {name!r}; expected one, koebe_factor, exp or poly")


def _schwarz(value, order: int, radius: float) -> TaylorSeries:
    field = "psi"
    if isinstance(value, list):
        psi = _coeff_list(value, field, order, radius)
        if psi.coeffs[0] != 0:
            raise SpecParseError("psi[0]", "a Schwarz function must vanish at 0")
        return psi
    if not isinstance(value, str):
        raise SpecParseError(field, f"expected a builtin name or a coefficient list, got {value!r}")
    name, args = _call_args(value, field)
    if args:
        raise SpecParseError(field, f"{name} takes no arguments")
    if name == "identity":
        return TaylorSeries.identity(order=order, ref_radius=radius)
    if name == "zero":
        return TaylorSeries([0.0], order=order, ref_radius=radius)
    if name == "mobius":
        # z/(1+z) = sum_{n>=1} (-1)^(n-1) z^n
        c = np.zeros(order + 1)
        c[1:] = (-1.0) ** np.arange(order)
        return TaylorSeries(c, ref_radius=radius)
    raise SpecParseError(field, f"unknown Schwarz builtin {name!r}; expected identity, mobius or zero")


def parse_spec(spec: dict, order_override: int | None = None) -> MapSpec:
    """Validate a spec dict; errors name the offending field."""
    if not isinstance(spec, dict):
        raise SpecParseError("<root>", "a map spec must be a JSON object")
    unknown = sorted(set(spec) - SPEC_KEYS)
    if unknown:
        raise SpecParseError(unknown[0], f"unknown key; expected one of {sorted(SPEC_KEYS)}")
    beta = complex(_real(spec, "beta_re", 0.0), _real(spec, "beta_im", 0.0))
    if not beta.real > -0.5:
        raise SpecParseError("beta_re", f"Re(beta) must exceed -1/2, got {beta.real}")
    alpha = _real(spec, "alpha")
    if alpha is not None and not (0.0 <= alpha < 1.0):
        raise SpecParseError("alpha", f"alpha must lie in [0, 1), got {alpha}")
    radius = _real(spec, "radius", DEFAULT_RADIUS)
    if not (0.0 < radius <= 1.0):
        raise SpecParseError("radius", f"radius must lie in (0, 1], got {radius}")
    order = spec.get("order", DEFAULT_ORDER)
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        raise SpecParseError("order", f"expected a positive integer, got {order!r}")
    if order_override is not None:
        order = order_override
    g = _analytic(spec.get("g", "one"), "g", order, radius)
    if g.coeffs[0] != 1:
        raise SpecParseError("g", f"g(0) must equal 1, got {g.coeffs[0]}")
    psi = None
    h = None
    if "psi" in spec:
        if "h" in spec:
            raise SpecParseError("h", "h is determined by psi and g; give one or the other")
        psi = _schwarz(spec["psi"], order, radius)
    else:
        h = _analytic(spec.get("h", "one"), "h", order, radius)
        if h.coeffs[0] == 0:
            raise SpecParseError("h", "h(0) must be non-zero")
    return MapSpec(beta, alpha, h, g, psi, radius, order)


def build_map(spec: MapSpec, warn=None) -> LogHarmonicMap:
    if spec.psi is None:
        return LogHarmonicMap(spec.beta, spec.h, spec.g, alpha=spec.alpha)
    alpha = 0.0 if spec.alpha is None else spec.alpha
    try:
        witness = an.schwarz_check(spec.psi, spec.radius)
    except NotSchwarz as exc:
        if exc.witness is None:
            raise
        witness = exc.witness
        if warn is not None:
            warn(f"warning: psi is not a Schwarz function on |z| <= {spec.radius}: {exc}")
    return an.construct_starlike(spec.g, witness, alpha, spec.beta)


# -- map files ----------------------------------------------------------------


def _pairs(c: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in c]


def map_to_dict(m: LogHarmonicMap) -> dict:
    return {
        "format": MAP_FORMAT,
        "version": MAP_VERSION,
        "beta": [m.beta.real, m.beta.imag],
        "alpha": m.alpha,
        "radius": m.ref_radius,
        "order": min(m.h.order, m.g.order),
        "schwarz_certified": m.schwarz_certified,
        "h": _pairs(m.h.coeffs),
        "g": _pairs(m.g.coeffs),
    }


def dump_map(m: LogHarmonicMap) -> str:
    # json writes floats with repr, so a reload reproduces every coefficient bit for bit
    return json.dumps(map_to_dict(m), sort_keys=True, separators=(",", ":")) + "\n"


def map_from_dict(d: dict, order_override: int | None = None) -> LogHarmonicMap:
    try:
        radius = float(d["radius"])
        beta = _number(d["beta"], "beta")
        h = [_number(v, f"h[{i}]") for i, v in enumerate(d["h"])]
        g = [_number(v, f"g[{i}]") for i, v in enumerate(d["g"])]
    except KeyError as exc:
        raise SpecParseError(exc.args[0], "missing from map file") from None
    order = order_override
    try:
        return LogHarmonicMap(
            beta,
            TaylorSeries(h, order=order, ref_radius=radius),
            TaylorSeries(g, order=order, ref_radius=radius),
            alpha=d.get("alpha"),
            schwarz_certified=d.get("schwarz_certified"),
        )
    except ValueError as exc:
        raise SpecParseError("<map>", str(exc)) from None


def loads_map(text: str, order_override: int | None = None, warn=None) -> LogHarmonicMap:
    """Load a map from map-file or spec JSON text."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"line {exc.lineno}", exc.msg) from None
    if isinstance(obj, dict) and obj.get("format") == MAP_FORMAT:
        return map_from_dict(obj, order_override)
    spec = parse_spec(obj, order_override)
    try:
        return build_map(spec, warn)
    except ValueError as exc:
        if isinstance(exc, SpecParseError):
            raise
        raise SpecParseError("<spec>", str(exc)) from None


def load_map(path: str, order_override: int | None = None, warn=None) -> LogHarmonicMap:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecParseError(path, exc.strerror or str(exc)) from None
    return loads_map(text, order_override, warn)


# -- verification -------------------------------------------------------------


def _thread_count() -> int:
    raw = os.environ.get("LOGHARM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise SpecParseError("LOGHARM_THREADS", f"expected an integer, got {raw!r}") from None
    return max(1, n)


def run_theorems(m: LogHarmonicMap, theorems, alpha: float, grid, tol: float, threads: int = 1):
    """Run certifiers in the given order; returns ``(reports, skipped)``."""
    jobs = []
    skipped = {}
    for name in theorems:
        if name == "starlike":
            jobs.append(lambda: an.verify_starlike(m, alpha, grid, tol))
        elif name == "subordination":
            jobs.append(lambda: an.subordination_margin(m, alpha, grid, tol))
        elif name == "sense":
            jobs.append(lambda: an.sense_preserving_check(m, tol=tol))
        elif name == "dilatation":
            jobs.append(lambda: an.dilatation_bound_check(m, grid, tol))
        elif name == "jacobian":
            jobs.append(lambda: an.jacobian_bounds_check(m, grid, tol))
        elif name == "disc":
            jobs.append(lambda: an.dilatation_disc_check(m, grid, tol))
        elif name == "hg":
            if 0.5 < alpha < 1.0:
                jobs.append(lambda: an.h_over_g_bound_check(m, alpha, grid, tol))
            else:
                skipped["hg"] = f"needs alpha in (1/2, 1), got {alpha}"
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(j) for j in jobs]
            reports = [f.result() for f in futures]
    else:
        reports = [j() for j in jobs]
    return reports, skipped


def _parse_theorems(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    for n in names:
        if n not in ALL_THEOREMS:
            raise SpecParseError("--theorems", f"unknown theorem {n!r}; expected {','.join(ALL_THEOREMS)}")
    return list(dict.fromkeys(names))


def _write(path: str | None, data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _warn(msg: str):
    print(msg, file=sys.stderr)


# -- commands ---------------------------------------------------------------


def cmd_construct(args) -> int:
    m = load_map(args.spec, args.order, _warn)
    _write(args.output, dump_map(m).encode("utf-8"))
    return 0


def cmd_verify(args) -> int:
    m = load_map(args.map, args.order, _warn)
    alpha = args.alpha if args.alpha is not None else (m.alpha if m.alpha is not None else 0.0)
    if not (0.0 <= alpha < 1.0):
        raise SpecParseError("--alpha", f"alpha must lie in [0, 1), got {alpha}")
    theorems = _parse_theorems(args.theorems)
    if args.grid:
        try:
            grid = an.SampleGrid.parse(args.grid)
        except ValueError as exc:
            raise SpecParseError("--grid", str(exc)) from None
    else:
        grid = an.SampleGrid.default(m.ref_radius)
    reports, skipped = run_theorems(m, theorems, alpha, grid, args.tol, _thread_count())
    doc = an.report_dict(reports)
    doc["alpha"] = alpha
    doc["beta"] = {"re": m.beta.real, "im": m.beta.imag}
    doc["skipped"] = skipped
    doc["tol"] = args.tol
    _write(args.output, (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8"))
    for r in reports:
        print(r.summary(), file=sys.stderr)
    for name, why in skipped.items():
        print(f"{name:<13} SKIP  {why}", file=sys.stderr)
    failed = [r for r in reports if not r.passed]
    if failed:
        print(f"FAILED: {failed[0].theorem_id.value}", file=sys.stderr)
        return 1
    return 0


def cmd_render(args) -> int:
    m = load_map(args.map, args.order, _warn)
    r = m.ref_radius if args.r is None else args.r
    curve = sample_boundary(m, r, args.points)
    _write(args.output, export_curve(curve, args.format))
    return 0


def cmd_injectivity(args) -> int:
    m = load_map(args.map, args.order, _warn)
    est = injectivity_radius(m, args.resolution, args.samples_per_ring, args.r_max)
    print(est.statement(), file=sys.stderr)
    _write(args.output, (json.dumps(est.to_dict(), sort_keys=True, indent=2) + "\n").encode("utf-8"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logharm", description="Starlike log-harmonic mappings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, source="map"):
        sp.add_argument(source, help="map file or map spec (JSON)")
        sp.add_argument("-o", "--output", help="output file (default: stdout)")
        sp.add_argument("--order", type=int, help="truncation order override")

    sp = sub.add_parser("construct", help="build a map file from a spec")
    common(sp, "spec")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="run certifiers and write a JSON report")
    common(sp)
    sp.add_argument("--theorems", default=",".join(ALL_THEOREMS))
    sp.add_argument("--grid", help="rings and angles, e.g. 0.1,0.5,0.9/720")
    sp.add_argument("--tol", type=float, default=an.DEFAULT_TOL)
    sp.add_argument("--alpha", type=float, help="order of starlikeness (default: from the map, else 0)")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="boundary curve of the image of |z| = r")
    common(sp)
    sp.add_argument("--r", type=float, help="circle radius (default: map radius)")
    sp.add_argument("--points", type=int, default=512)
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("injectivity", help="bracket the radius of injectivity")
    common(sp)
    sp.add_argument("--resolution", type=float, default=0.01)
    sp.add_argument("--samples-per-ring", type=int, default=200)
    sp.add_argument("--r-max", type=float)
    sp.set_defaults(func=cmd_injectivity)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LogHarmonicError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
