import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitshapes.errors import DataError, ParseError, StageError, ValidationError
from unitshapes.fields import (FieldRecord, candidate_labelings, find_moser_basis, load_fixtures,
                               load_record, pair_orderings, roots, save_record, unit_logs,
                               verify_field, verify_many)
from unitshapes.fields.pipeline import UnitLogData, exponent_vectors, sigma_integer_matrices
from unitshapes.fields.records import find_record
from unitshapes.lattice import LogMatrix, quintic_log_rows, regulator_from_logs
from unitshapes.realcyclo import PrimeConfig

FIXTURES_5 = load_fixtures(5)
FIXTURES_7 = load_fixtures(7)


def synthetic_logs(W, a0="0.9", a1="0.35", prec=192):
    """Unit logs whose lattice has Moser basis quintic_log_rows(a0, a1) and fundamental units W^-1 B."""
    cfg = PrimeConfig(5)
    B = quintic_log_rows(a0, a1, prec).rows
    with mpmath.workprec(prec):
        V = mpmath.inverse(mpmath.matrix(W)) * mpmath.matrix([list(r) for r in B])
        rows = tuple(tuple(V[i, j] for j in range(3)) for i in range(2))
    return UnitLogData(cfg, rows, rows, prec)


# ------------------------------------------------------------------ roots

def test_roots_of_x5_minus_2():
    rs = roots([-2, 0, 0, 0, 0, 1], 192)
    with mpmath.workprec(192):
        assert abs(rs.real - mpmath.root(2, 5)) < mpmath.mpf(2) ** -180
    assert str(rs.real).startswith("1.148698")
    assert len(rs.pairs) == 2 and all(z.imag > 0 for z in rs.pairs)


@pytest.mark.parametrize("rec", FIXTURES_5[:5] + FIXTURES_7[:2], ids=lambda r: r.label)
def test_roots_vieta_and_conjugates(rec):
    rs = roots(rec.coeffs, 192)
    with mpmath.workprec(192):
        total = mpmath.fsum(rs.all_roots())
        assert abs(total + rec.coeffs[-2]) < mpmath.mpf(2) ** -170
        assert abs(total.imag) < mpmath.mpf(2) ** -170
        for z in rs.all_roots():
            v = mpmath.polyval(list(reversed(rec.coeffs)), z)
            assert abs(v) < mpmath.mpf(2) ** -150


def test_totally_real_polynomial_rejected():
    # x^5 - 5x^3 + 5x - 1 has five real roots
    with pytest.raises(DataError, match="real root"):
        roots([-1, 5, 0, -5, 0, 1], 128)


# ------------------------------------------------------------------ logs

@pytest.mark.parametrize("rec", FIXTURES_5[:3] + FIXTURES_7[:2], ids=lambda r: r.label)
def test_unit_log_invariants(rec):
    logs = unit_logs(rec)
    p, r = rec.p, (rec.p - 1) // 2
    with mpmath.workprec(192):
        for row, col in zip(logs.full, logs.collapsed):
            assert len(row) == p and len(col) == r + 1
            assert abs(mpmath.fsum(row)) < 1e-40
            for k in range(1, r + 1):
                assert abs(row[k] - row[p - k]) < 1e-40
        G = LogMatrix(logs.config, logs.collapsed, 192).gram()
        assert G.det() > 0


def test_torsion_unit_has_zero_logs():
    rec = FIXTURES_5[0]
    minus_one = tuple(Fraction(-1) if i == 0 else Fraction(0) for i in range(5))
    logs = unit_logs(FieldRecord(rec.label, 5, rec.coeffs, 1, 2, "5T2", (minus_one, rec.units[0])))
    assert all(abs(x) < 1e-50 for x in logs.full[0])


def test_vanishing_unit_is_data_error():
    rec = FIXTURES_5[0]
    zero = tuple(Fraction(0) for _ in range(5))
    with pytest.raises(DataError, match="vanishes"):
        unit_logs(FieldRecord(rec.label, 5, rec.coeffs, 1, 2, "5T2", (zero, rec.units[0])))


def test_non_unit_is_data_error():
    rec = FIXTURES_5[0]
    two = tuple(Fraction(2) if i == 0 else Fraction(0) for i in range(5))
    with pytest.raises(DataError, match="log-norm"):
        unit_logs(FieldRecord(rec.label, 5, rec.coeffs, 1, 2, "5T2", (two, rec.units[0])))


# ------------------------------------------------------------------ labelings

def test_candidate_labelings():
    assert candidate_labelings(PrimeConfig(5)) == [(1, 2), (2, 1)]
    labs = candidate_labelings(PrimeConfig(7))
    assert len(labs) == 3 and labs[0] == (1, 2, 3)
    assert all(sorted(lab) == [1, 2, 3] for lab in labs)


def test_pair_orderings_count():
    assert len(pair_orderings(PrimeConfig(7))) == 6


def test_exponent_vectors_order():
    vs = list(exponent_vectors(2, 2))
    assert vs[:4] == [(1, 0), (0, 1), (0, -1), (-1, 0)]
    assert len(vs) == 24 and len(set(vs)) == 24
    norms = [abs(a) + abs(b) for a, b in vs]
    assert norms == sorted(norms)


# ------------------------------------------------------------------ Moser basis

def test_moser_round_trip():
    logs = synthetic_logs([[1, 0], [0, 1]])
    mb = find_moser_basis(logs, (1, 2), None, 1)
    assert mb.c == (1, 0)


def test_moser_needs_bound_two():
    # units[0]^2 * units[1]^-1 is the Moser generator; no generator has exponents within 1
    logs = synthetic_logs([[2, -1], [5, -2]])
    assert find_moser_basis(logs, (1, 2), None, 1) is None
    mb = find_moser_basis(logs, (1, 2), None, 2)
    assert mb.c == (2, -1)
    with mpmath.workprec(192):
        assert abs(regulator_from_logs(mb.L) - regulator_from_logs(quintic_log_rows("0.9", "0.35", 192))) < 1e-40


def test_moser_with_wrong_regulator_fails():
    logs = synthetic_logs([[1, 0], [0, 1]])
    assert find_moser_basis(logs, (1, 2), "123.0", 3) is None


def test_sigma_matrices_integral_for_true_lattice():
    logs = synthetic_logs([[2, -1], [5, -2]])
    mats, worst = sigma_integer_matrices(logs.config, logs.collapsed, 192)
    assert mats is not None and worst < 1e-40


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_moser_found_for_any_unimodular_change(a, b, c, d):
    if a * d - b * c not in (1, -1):
        return
    logs = synthetic_logs([[a, b], [c, d]])
    mb = find_moser_basis(logs, (1, 2), None, 12)
    assert mb is not None


# ------------------------------------------------------------------ records

def test_record_json_round_trip(tmp_path):
    rec = FIXTURES_7[0]
    path = save_record(rec, tmp_path)
    assert load_record(path) == rec
    obj = json.loads(path.read_text())
    assert obj["degree"] == 7 and isinstance(obj["disc"], str)
    assert all("/" in c for u in obj["units"] for c in u)


def test_record_unknown_keys_ignored():
    obj = FIXTURES_5[0].to_json()
    obj["extra"] = [1, 2]
    assert FieldRecord.from_json(obj) == FIXTURES_5[0]


def test_record_malformed_has_excerpt():
    obj = FIXTURES_5[0].to_json()
    obj["units"] = [["1/0"]]
    with pytest.raises(ParseError, match="malformed field record"):
        FieldRecord.from_json(obj)


def test_record_bad_json_file(tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_record(bad)


def test_totally_real_record_rejected():
    rec = FieldRecord("5.5.14641.1", 5, (1, 4, -3, -3, 1, 1), 5, 0, "5T1",
                      tuple(tuple(Fraction(0) for _ in range(5)) for _ in range(4)))
    with pytest.raises(ValidationError, match="signature"):
        rec.validate()
    with pytest.raises(StageError) as info:
        verify_field(rec)
    assert info.value.stage == "validate" and info.value.exit_code == 3


def test_fixture_sets_complete():
    assert len(FIXTURES_5) >= 20 and len(FIXTURES_7) >= 3
    discs = [abs(r.disc) for r in FIXTURES_5]
    assert discs == sorted(discs)
    for rec in FIXTURES_5 + FIXTURES_7:
        rec.validate()
        assert rec.provenance.get("oracle")
        assert rec.regulator_ref is not None


def test_find_record():
    assert find_record(FIXTURES_5[0].label) == FIXTURES_5[0]
    with pytest.raises(DataError):
        find_record("5.1.1.99")


# ------------------------------------------------------------------ pipeline

def test_smallest_d5_field():
    res = verify_field(FIXTURES_5[0])
    assert res.passed and res.status == "pass"
    assert res.bound_used <= 6
    assert float(res.circle_residual) < 1e-6
    assert float(res.regulator_delta) < 1e-6
    assert float(res.norm_form_delta) < 1e-6
    assert res.ideal_stable
    assert len(res.passing_labelings) == 2


def test_d7_field_orbit():
    res = verify_field(FIXTURES_7[0])
    assert res.passed
    assert res.x is None and res.orbit_residual is not None
    assert float(res.orbit_residual) < 1e-6
    assert len(res.passing_labelings) == 3


def test_verify_deterministic():
    a = json.dumps(verify_field(FIXTURES_5[1]).to_json(), sort_keys=True)
    b = json.dumps(verify_field(FIXTURES_5[1]).to_json(), sort_keys=True)
    assert a == b


def test_verify_many_parallel_matches_serial():
    recs = FIXTURES_5[:4]
    serial = [r.to_json() for r in verify_many(recs, workers=1)]
    parallel = [r.to_json() for r in verify_many(recs, workers=2)]
    assert serial == parallel


def test_verify_many_reports_errors():
    rec = FIXTURES_5[0]
    zero = tuple(Fraction(0) for _ in range(5))
    bad = FieldRecord("bad", 5, rec.coeffs, 1, 2, "5T2", (zero, rec.units[0]))
    (res,) = verify_many([bad])
    assert res.status == "error" and "unit_logs" in res.error


def test_csv_row_has_spec_columns():
    row = verify_field(FIXTURES_5[0]).csv_row()
    for key in ("label", "x", "y", "circle_residual", "regulator_delta", "labeling_index", "exponents"):
        assert key in row
