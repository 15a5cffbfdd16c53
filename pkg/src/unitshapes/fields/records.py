"""FieldRecord: the JSON record format shared by fixtures and the LMFDB cache."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from ..errors import DataError, ParseError, ValidationError
from ..realcyclo import is_prime

FIXTURE_SETS = {"5T2": 5, "7T2": 7}


@dataclass(frozen=True)
class FieldRecord:
    label: str
    p: int
    coeffs: tuple                  # monic, ascending
    r1: int
    r2: int
    galois_label: str
    units: tuple                   # each a tuple of p Fractions, ascending
    regulator_ref: Optional[str] = None
    disc: int = 0
    provenance: dict = field(default_factory=dict, compare=False)

    def validate(self) -> "FieldRecord":
        p = self.p
        if p < 5 or not is_prime(p):
            raise ValidationError(f"{self.label}: degree {p} is not a prime >= 5")
        if len(self.coeffs) != p + 1 or self.coeffs[-1] != 1:
            raise ValidationError(f"{self.label}: defining polynomial must be monic of degree {p}")
        r = (p - 1) // 2
        if (self.r1, self.r2) != (1, r):
            raise ValidationError(
                f"{self.label}: signature ({self.r1}, {self.r2}) is not (1, {r})")
        if len(self.units) != r:
            raise ValidationError(f"{self.label}: {len(self.units)} units given, unit rank is {r}")
        for u in self.units:
            if len(u) != p:
                raise ValidationError(f"{self.label}: unit with {len(u)} coefficients, expected {p}")
        return self

    def to_json(self) -> dict:
        out = {
            "label": self.label,
            "degree": self.p,
            "coeffs": list(self.coeffs),
            "r1": self.r1,
            "r2": self.r2,
            "galois_label": self.galois_label,
            "units": [[f"{c.numerator}/{c.denominator}" for c in u] for u in self.units],
            "regulator": self.regulator_ref,
            "disc": str(self.disc),
        }
        if self.provenance:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FieldRecord":
        try:
            units = tuple(tuple(Fraction(c) for c in u) for u in obj["units"])
            return cls(
                label=str(obj["label"]),
                p=int(obj["degree"]),
                coeffs=tuple(int(c) for c in obj["coeffs"]),
                r1=int(obj["r1"]),
                r2=int(obj["r2"]),
                galois_label=str(obj.get("galois_label", "")),
                units=units,
                regulator_ref=None if obj.get("regulator") is None else str(obj["regulator"]),
                disc=int(obj.get("disc") or 0),
                provenance=dict(obj.get("provenance") or {}),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            excerpt = json.dumps(obj)[:200]
            raise ParseError(f"malformed field record ({exc!r}): {excerpt}") from exc


def load_record(path) -> FieldRecord:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return FieldRecord.from_json(obj)


def save_record(rec: FieldRecord, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{rec.label}.json"
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(json.dumps(rec.to_json(), indent=1) + "\n", encoding="utf-8")
    tmp.replace(path)
    return path


def fixture_dir(galois_label: str) -> Path:
    return Path(str(resources.files("unitshapes") / "data" / "fixtures" / galois_label))


def load_fixtures(p: int, limit: Optional[int] = None):
    """Bundled records for degree ``p``, sorted by |disc| then label."""
    labels = [g for g, deg in FIXTURE_SETS.items() if deg == p]
    if not labels:
        raise DataError(f"no bundled fixtures for p = {p}")
    recs = [load_record(f) for f in sorted(fixture_dir(labels[0]).glob("*.json"))]
    recs.sort(key=lambda rec: (abs(rec.disc), rec.label))
    return recs[:limit] if limit is not None else recs


def find_record(label: str, cache_dir=None) -> FieldRecord:
    for g in FIXTURE_SETS:
        path = fixture_dir(g) / f"{label}.json"
        if path.exists():
            return load_record(path)
    if cache_dir is not None:
        path = Path(cache_dir) / f"{label}.json"
        if path.exists():
            return load_record(path)
    raise DataError(f"no record with label {label!r} in fixtures or cache")
