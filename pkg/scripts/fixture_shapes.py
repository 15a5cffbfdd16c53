#!/usr/bin/env python3
"""Desk-scale reproduction of the unit-shape plot from the bundled fixtures.

Verifies every bundled D5 record (and the D7 records for the torus-orbit
check), writes CSV/JSON per degree, and draws the D5 points against the arc.

    python scripts/fixture_shapes.py --out results/fixture_shapes
"""

import argparse
import csv
import json
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from unitshapes import __version__
from unitshapes.fields import load_fixtures, verify_many
from unitshapes.fields.pipeline import CSV_COLUMNS
from unitshapes.plot import PlotSpec, read_points, write_svg


@dataclass
class FixtureShapesConfig:
    out: str = "results/fixture_shapes"
    precision: int = 192
    bound: int = 6
    tol: float = 1e-9
    workers: int = 4
    limit_d5: int = 0          # 0 means every bundled record
    arc_samples: int = 400


def write_results(results, directory: Path, stem: str):
    with (directory / f"{stem}.csv").open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow(r.csv_row())
    (directory / f"{stem}.json").write_text(json.dumps([r.to_json() for r in results], indent=1) + "\n")


def summarize(results, key):
    vals = [float(getattr(r, key)) for r in results if getattr(r, key) is not None]
    return f"{sum(r.passed for r in results)}/{len(results)} pass, max {key} {max(vals) if vals else float('nan'):.3g}"


def run(cfg: FixtureShapesConfig):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = [f"unitshapes {__version__}", json.dumps(asdict(cfg))]

    t0 = time.perf_counter()
    d5 = verify_many(load_fixtures(5, cfg.limit_d5 or None), cfg.precision, cfg.bound, cfg.tol, cfg.workers)
    write_results(d5, out, "d5")
    lines.append(f"D5: {summarize(d5, 'circle_residual')}; {summarize(d5, 'regulator_delta')} "
                 f"({time.perf_counter() - t0:.1f}s)")

    t0 = time.perf_counter()
    d7 = verify_many(load_fixtures(7), cfg.precision, cfg.bound, cfg.tol, cfg.workers)
    write_results(d7, out, "d7")
    lines.append(f"D7: {summarize(d7, 'orbit_residual')} ({time.perf_counter() - t0:.1f}s)")

    svg = write_svg(read_points(out / "d5.csv"), PlotSpec(arc_samples=cfg.arc_samples, out=str(out / "d5.svg")))
    lines.append(f"plot: {svg}")
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return all(r.passed for r in d5 + d7)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = FixtureShapesConfig()
    for name, value in asdict(defaults).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    args = ap.parse_args()
    ok = run(FixtureShapesConfig(**vars(args)))
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
