"""Command-line interface: ``unitshapes <command> [flags]``.

Exit codes: 0 ok, 1 check failed, 2 usage, 3 domain/degenerate input,
4 data/parse error, 5 network.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from pathlib import Path

import mpmath

from . import __version__
from .errors import ConfigurationError, DataError, ParseError, UnitShapesError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

# flag -> built-in default; None means "let the command pick"
COMMON = {
    "p": 5,
    "precision": None,
    "bound": 6,
    "limit": None,
    "tol": None,
    "cache_dir": None,
    "out": None,
    "workers": None,
}


def load_config(path):
    """Flat ``key = value`` TOML file; a table named after the command overrides the top level."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"config {path}: {exc}") from exc
    return data


def resolve(args, command):
    """Fill unset flags from the config file, then from built-in defaults."""
    cfg = load_config(args.config) if args.config else {}
    section = cfg.get(command, {}) if isinstance(cfg.get(command), dict) else {}
    flat = {k.replace("-", "_"): v for k, v in cfg.items() if not isinstance(v, dict)}
    flat.update({k.replace("-", "_"): v for k, v in section.items()})
    unknown = set(flat) - set(vars(args))
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, value in flat.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in COMMON.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _prime(p):
    from .realcyclo import PrimeConfig
    try:
        return PrimeConfig(int(p))
    except (UnitShapesError, ValueError) as exc:
        raise ConfigurationError(str(exc)) from exc


# ---------------------------------------------------------------- commands

def cmd_trace_form(args, out):
    from .traceform import report_text
    print(report_text(_prime(args.p)), file=out)
    return 0


def read_gram_file(path):
    """JSON list of rows, or one whitespace/comma separated row per line."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        rows = json.loads(text)
    except json.JSONDecodeError:
        rows = [line.replace(",", " ").split() for line in text.splitlines() if line.strip()]
    try:
        rows = [[mpmath.mpf(str(x)) for x in row] for row in rows]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: cannot read Gram matrix: {exc}") from exc
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ParseError(f"{path}: Gram matrix must be square")
    return rows


def _shape_lines(raw, check, extra):
    from .fields.pipeline import _s
    lines = [
        f"raw point: ({_s(raw.x, 15)}, {_s(raw.y, 15)})",
        f"reduced: ({_s(check.reduced.x, 15)}, {_s(check.reduced.y, 15)})",
        f"mirror: ({_s(check.mirror.x, 15)}, {_s(check.mirror.y, 15)})",
        f"on arc: {'yes' if check.passed else 'no'} at ({_s(check.point.x, 15)}, {_s(check.point.y, 15)})",
        f"circle residual: {_s(check.residual, 6)}",
    ]
    return lines + extra


def cmd_shape(args, out):
    from .fields.pipeline import _s
    from .hypgeo import on_arc_mod_gl2
    from .lattice import (DEFAULT_PRECISION, GramMatrix, norm_form, quintic_gram, quintic_log_rows,
                          regulator_from_logs, uhp_from_gram)

    modes = [args.a0 is not None or args.a1 is not None, args.gram_file is not None, args.label is not None]
    if sum(modes) != 1:
        raise ConfigurationError("give exactly one of --a0/--a1, --gram-file, --label")
    prec = args.precision or DEFAULT_PRECISION
    payload = {"precision": prec, "version": __version__}

    if args.label is not None:
        from .fields import verify_field
        from .fields.records import find_record
        res = verify_field(find_record(args.label, args.cache_dir), precision=max(prec, 192),
                           bound=args.bound, tol=args.tol or 1e-9)
        payload.update(res.to_json())
        if args.json:
            print(json.dumps(payload, indent=1), file=out)
        else:
            for key in ("label", "status", "raw_x", "raw_y", "x", "y", "circle_residual", "orbit_residual",
                        "regulator", "regulator_delta", "labeling_index", "exponents"):
                if payload.get(key) is not None:
                    print(f"{key}: {payload[key]}", file=out)
        return 0 if res.passed else 1

    if modes[0]:
        if args.a0 is None or args.a1 is None:
            raise ConfigurationError("--a0 and --a1 must be given together")
        with mpmath.workprec(prec):
            a0, a1 = mpmath.mpf(args.a0), mpmath.mpf(args.a1)
            G = quintic_gram(a0, a1, prec)
            reg = regulator_from_logs(quintic_log_rows(a0, a1, prec))
            N = norm_form(a0, a1)
        extra = [f"regulator: {_s(reg, 15)}", f"N(a0, a1): {_s(N, 15)}"]
        payload.update({"a0": str(args.a0), "a1": str(args.a1), "regulator": _s(reg), "norm_form": _s(N)})
    else:
        rows = read_gram_file(args.gram_file)
        if len(rows) != 2:
            raise ConfigurationError("shape takes a 2 x 2 Gram matrix; use 'orbit check' for larger ranks")
        G = GramMatrix(rows, prec)
        extra = [f"det(Gram): {_s(G.det(), 15)}"]

    raw = uhp_from_gram(G)
    check = on_arc_mod_gl2(raw, args.tol, prec)
    if args.json:
        payload.update({
            "raw": [_s(raw.x, 20), _s(raw.y, 20)],
            "reduced": [_s(check.reduced.x, 20), _s(check.reduced.y, 20)],
            "mirror": [_s(check.mirror.x, 20), _s(check.mirror.y, 20)],
            "on_arc": check.passed,
            "circle_residual": _s(check.residual, 6),
        })
        print(json.dumps(payload, indent=1), file=out)
    else:
        print("\n".join(_shape_lines(raw, check, extra)), file=out)
    return 0


def _records(args):
    if args.source == "fixtures":
        from .fields.records import load_fixtures
        try:
            return load_fixtures(int(args.p), args.limit)
        except DataError as exc:
            raise ConfigurationError(str(exc)) from exc
    from .fields.lmfdb import fetch_lmfdb
    cfg = _prime(args.p)
    return fetch_lmfdb(cfg.p, args.galois or f"{cfg.p}T2", cfg.r, args.limit, args.cache_dir)


def _max_residual(results):
    vals = []
    for r in results:
        for v in (r.circle_residual, r.orbit_residual):
            if v is not None:
                vals.append(float(v))
    return max(vals) if vals else float("nan")


def cmd_verify(args, out):
    from .fields.pipeline import CSV_COLUMNS, DEFAULT_PRECISION, verify_many
    records = _records(args)
    if not records:
        raise ConfigurationError(f"no records from source {args.source!r} for p = {args.p}")
    prec = args.precision or DEFAULT_PRECISION
    workers = args.workers if args.workers is not None else min(4, os.cpu_count() or 1)
    results = verify_many(records, prec, args.bound, args.tol or 1e-9, workers)

    outdir = Path(args.out or "results")
    outdir.mkdir(parents=True, exist_ok=True)
    with (outdir / "shapes.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow(r.csv_row())
    (outdir / "shapes.json").write_text(
        json.dumps([r.to_json() for r in results], indent=1) + "\n", encoding="utf-8")

    passed = [r for r in results if r.passed]
    failed = [r for r in results if not r.passed]
    reg = [float(r.regulator_delta) for r in results if r.regulator_delta is not None]
    summary = [
        f"{len(passed)}/{len(results)} pass, max residual {_max_residual(results):.3g}",
        f"max regulator delta {max(reg) if reg else float('nan'):.3g}",
        f"p = {args.p}, source = {args.source}, precision = {prec} bits, bound = {args.bound}, "
        f"unitshapes {__version__}",
    ]
    if failed:
        summary.append("failing: " + ", ".join(f"{r.label} ({r.status})" for r in failed))
    text = "\n".join(summary)
    (outdir / "summary.txt").write_text(text + "\n", encoding="utf-8")
    print(text, file=out)
    return 0 if not failed else 1


def cmd_fetch(args, out):
    from .fields.lmfdb import default_cache_dir, fetch_lmfdb
    cfg = _prime(args.p)
    cache = args.cache_dir or default_cache_dir()
    recs = fetch_lmfdb(cfg.p, args.galois or f"{cfg.p}T2", cfg.r, args.limit, cache)
    print(f"{len(recs)} records in {cache}", file=out)
    return 0


def cmd_plot(args, out):
    from .plot import PlotSpec, read_points, write_svg
    spec = PlotSpec(width=args.width, height=args.height, arc_samples=args.arc_samples,
                    point_radius=args.point_radius, out=args.out or "shapes.svg")
    points = read_points(args.csv)
    path = write_svg(points, spec)
    print(f"wrote {path} with {len(points)} points", file=out)
    return 0


def cmd_orbit(args, out):
    from .lattice import GramMatrix
    from .torus import TorusPoint, default_setup, orbit_membership_mod_gl, orbit_point
    cfg = _prime(args.p)
    prec = args.precision or 128
    data, P = default_setup(cfg.p, prec)
    gunit = [list(r) for r in data.Gunit]

    if args.action == "sample":
        rng = random.Random(args.seed)
        samples = []
        for _ in range(args.count):
            t = [rng.choice((-1, 1)) * rng.uniform(0.5, 2.0) for _ in range(cfg.r)]
            G = orbit_point(gunit, P, TorusPoint(t))
            samples.append({"t": t, "gram": [[mpmath.nstr(x, 30) for x in row] for row in G.entries]})
        print(json.dumps({"p": cfg.p, "precision": prec, "samples": samples}, indent=1), file=out)
        return 0

    if args.gram_file is None:
        raise ConfigurationError("orbit check needs --gram-file")
    rows = read_gram_file(args.gram_file)
    if len(rows) != cfg.r:
        raise ConfigurationError(f"Gram matrix has rank {len(rows)}, p = {cfg.p} needs {cfg.r}")
    hit = orbit_membership_mod_gl(GramMatrix(rows, prec), gunit, P, tol=args.tol or 1e-10,
                                 max_word_length=args.max_word_length)
    m = hit.membership
    print(f"accepted: yes (after {hit.tested} candidates)", file=out)
    print(f"U = {[list(r) for r in hit.U]}", file=out)
    print(f"t = {[mpmath.nstr(x, 15) for x in m.t.t]}", file=out)
    print(f"residual = {mpmath.nstr(m.residual, 6)}", file=out)
    return 0


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--precision", type=int, help="working precision in bits")
    common.add_argument("--bound", type=int, help="exponent bound for the Moser basis search")
    common.add_argument("--limit", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--cache-dir")
    common.add_argument("--out")
    common.add_argument("--workers", type=int)
    common.add_argument("--config", help="key = value file; flags override it")

    ap = argparse.ArgumentParser(prog="unitshapes", description="Unit lattice shapes of D_p fields")
    ap.add_argument("--version", action="version", version=f"unitshapes {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("trace-form", parents=[common], help="exact trace-form matrices")
    s.set_defaults(func=cmd_trace_form)

    s = sub.add_parser("shape", parents=[common], help="UHP point of a quintic unit lattice")
    s.add_argument("--a0")
    s.add_argument("--a1")
    s.add_argument("--gram-file")
    s.add_argument("--label")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_shape)

    s = sub.add_parser("verify", parents=[common], help="verify fixture or LMFDB fields")
    s.add_argument("--source", choices=["fixtures", "lmfdb"], default="fixtures")
    s.add_argument("--galois")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fetch", parents=[common], help="download fields from the LMFDB into the cache")
    s.add_argument("--galois")
    s.set_defaults(func=cmd_fetch)

    s = sub.add_parser("plot", parents=[common], help="SVG of points from a verify CSV")
    s.add_argument("csv")
    s.add_argument("--width", type=int, default=720)
    s.add_argument("--height", type=int, default=540)
    s.add_argument("--arc-samples", type=int, default=200)
    s.add_argument("--point-radius", type=float, default=3.0)
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("orbit", parents=[common], help="sample or test torus-orbit Gram matrices")
    s.add_argument("action", choices=["sample", "check"])
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gram-file")
    s.add_argument("--max-word-length", type=int, default=3,
                   help="length bound for the unimodular change-of-basis search")
    s.set_defaults(func=cmd_orbit)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        resolve(args, args.command)
        return args.func(args, out)
    except UnitShapesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
