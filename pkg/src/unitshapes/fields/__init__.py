"""Field data: records, LMFDB ingestion, root finding and the verification pipeline."""

from .records import FieldRecord, load_fixtures, load_record, save_record
from .pipeline import (ShapeResult, UnitLogData, candidate_labelings, find_moser_basis,
                       pair_orderings, unit_logs, verify_field, verify_many)
from .roots import roots

__all__ = [
    "FieldRecord", "ShapeResult", "UnitLogData", "candidate_labelings", "find_moser_basis",
    "load_fixtures", "load_record", "pair_orderings", "roots", "save_record", "unit_logs",
    "verify_field", "verify_many",
]
