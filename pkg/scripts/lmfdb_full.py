#!/usr/bin/env python3
"""Extended run over every LMFDB quintic D5 field with one real embedding.

Needs network access on the first run (records are cached per label, so a
rerun works offline).  Not part of the acceptance suite.

    python scripts/lmfdb_full.py --cache-dir ~/.cache/unitshapes/lmfdb --out results/lmfdb
"""

import argparse
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from unitshapes.cli import main as cli_main
from unitshapes.errors import TransportError
from unitshapes.fields.lmfdb import LmfdbConfig, default_cache_dir, fetch_lmfdb


@dataclass
class FullRunConfig:
    out: str = "results/lmfdb"
    cache_dir: str = str(default_cache_dir())
    limit: int = 0             # 0 means no limit
    workers: int = 8
    page_size: int = 100
    delay: float = 0.5


def run(cfg: FullRunConfig):
    t0 = time.perf_counter()
    try:
        recs = fetch_lmfdb(5, "5T2", 2, cfg.limit or None, cfg.cache_dir,
                           config=LmfdbConfig(page_size=cfg.page_size, delay=cfg.delay))
    except TransportError as exc:
        print(f"LMFDB unreachable and cache empty: {exc}", file=sys.stderr)
        return 5
    print(f"{len(recs)} records available ({time.perf_counter() - t0:.0f}s)")
    argv = ["verify", "--source", "lmfdb", "--p", "5", "--cache-dir", cfg.cache_dir,
            "--out", cfg.out, "--workers", str(cfg.workers)]
    if cfg.limit:
        argv += ["--limit", str(cfg.limit)]
    code = cli_main(argv)
    cli_main(["plot", str(Path(cfg.out) / "shapes.csv"), "--out", str(Path(cfg.out) / "shapes.svg")])
    return code


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, value in asdict(FullRunConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(value), default=value)
    raise SystemExit(run(FullRunConfig(**vars(ap.parse_args()))))


if __name__ == "__main__":
    main()
