"""LMFDB number-field API client with a per-label JSON cache.

Endpoint, query template and page size live in ``LmfdbConfig``.  The HTTP
session is injectable so tests never touch the network.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from filelock import FileLock

from ..errors import ConfigurationError, ParseError, TransportError
from ..realcyclo import is_prime
from .records import FieldRecord, load_record, save_record

log = logging.getLogger(__name__)

CACHE_ENV = "UNITSHAPES_CACHE_DIR"


@dataclass
class LmfdbConfig:
    base_url: str = "https://www.lmfdb.org/api/nf_fields/"
    page_size: int = 100
    delay: float = 0.5
    timeout: float = 30.0
    fields: tuple = ("label", "coeffs", "degree", "r2", "galois_label", "units",
                     "regulator", "disc_abs", "disc_sign")
    extra_params: dict = field(default_factory=lambda: {"_format": "json"})

    def query(self, degree, galois_label, r2, offset, limit):
        params = dict(self.extra_params)
        params.update({
            "degree": degree,
            "galois_label": galois_label,
            "r2": r2,
            "_offset": offset,
            "_limit": limit,
            "_fields": ",".join(self.fields),
        })
        return params


def default_cache_dir():
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "unitshapes" / "lmfdb"))


def parse_unit(text, degree, var="a"):
    """Coefficients (ascending, length ``degree``) of a unit written as a polynomial string."""
    if isinstance(text, (list, tuple)):
        coeffs = [Fraction(c) for c in text]
    else:
        import sympy
        sym = sympy.Symbol(var)
        try:
            expr = sympy.sympify(str(text).replace("^", "**"), locals={var: sym})
            poly = sympy.Poly(expr, sym, domain="QQ")
        except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
            raise ParseError(f"cannot parse unit {text!r}: {exc}") from exc
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    if len(coeffs) > degree:
        raise ParseError(f"unit {text!r} has degree >= {degree}")
    return tuple(coeffs + [Fraction(0)] * (degree - len(coeffs)))


def normalize(obj: dict) -> FieldRecord:
    """One LMFDB ``nf_fields`` row to a FieldRecord."""
    try:
        degree = int(obj["degree"])
        coeffs = tuple(int(c) for c in obj["coeffs"])
        r2 = int(obj["r2"])
        units = obj.get("units")
        if not units:
            raise ParseError(f"{obj.get('label')}: record carries no fundamental units")
        disc = obj.get("disc_abs", 0)
        sign = obj.get("disc_sign", 1)
        reg = obj.get("regulator")
        return FieldRecord(
            label=str(obj["label"]),
            p=degree,
            coeffs=coeffs,
            r1=degree - 2 * r2,
            r2=r2,
            galois_label=str(obj.get("galois_label", "")),
            units=tuple(parse_unit(u, degree) for u in units),
            regulator_ref=None if reg is None else repr(float(reg)) if isinstance(reg, float) else str(reg),
            disc=int(sign) * int(disc),
            provenance={"source": "LMFDB API"},
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed LMFDB row ({exc!r}): {str(obj)[:200]}") from exc


def _cached(cache_dir: Path, degree, galois_label, r2):
    out = []
    for path in sorted(cache_dir.glob("*.json")):
        rec = load_record(path)
        if rec.p == degree and rec.r2 == r2 and rec.galois_label == galois_label:
            out.append(rec)
    return out


def fetch_lmfdb(degree, galois_label, r2, limit=None, cache_dir=None, session=None,
                config: Optional[LmfdbConfig] = None):
    """Fetch matching fields, cache one JSON file per label, return the records.

    Falls back to the cache when the network is unavailable.
    """
    if degree < 5 or not is_prime(degree):
        raise ConfigurationError(f"degree must be an odd prime >= 5, got {degree}")
    cfg = config or LmfdbConfig()
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    locks = cache / ".locks"
    locks.mkdir(parents=True, exist_ok=True)
    if session is None:
        import requests
        session = requests.Session()

    records, offset, first = [], 0, True
    try:
        while limit is None or len(records) < limit:
            page = cfg.page_size if limit is None else min(cfg.page_size, limit - len(records))
            if not first and cfg.delay:
                time.sleep(cfg.delay)
            first = False
            payload = _get(session, cfg, cfg.query(degree, galois_label, r2, offset, page))
            rows = payload.get("data") if isinstance(payload, dict) else None
            if rows is None:
                raise ParseError(f"LMFDB response has no 'data' list: {str(payload)[:200]}")
            for row in rows:
                try:
                    rec = normalize(row)
                except ParseError as exc:
                    log.warning("skipping row: %s", exc)
                    continue
                with FileLock(str(locks / f"{rec.label}.lock")):
                    save_record(rec, cache)
                records.append(rec)
            offset += len(rows)
            if len(rows) < page:
                break
    except TransportError:
        cached = _cached(cache, degree, galois_label, r2)
        if not cached:
            raise
        log.warning("network unavailable, using %d cached records", len(cached))
        records = cached
    return records[:limit] if limit is not None else records


def _get(session, cfg: LmfdbConfig, params):
    try:
        resp = session.get(cfg.base_url, params=params, timeout=cfg.timeout)
        resp.raise_for_status()
    except Exception as exc:  # requests raises several unrelated types
        raise TransportError(f"LMFDB request failed: {exc}") from exc
    try:
        return resp.json()
    except ValueError as exc:
        raise ParseError(f"LMFDB returned non-JSON: {getattr(resp, 'text', '')[:200]}") from exc
