"""From a field record to a verified unit shape.

roots -> unit logs -> embedding labelings -> Moser basis -> Gram ->
(arc test for p = 5, torus-orbit membership for every p) -> regulator checks.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from typing import Optional

import mpmath

from .. import exact
from ..errors import DataError, SearchExhausted, StageError, UnitShapesError
from ..hypgeo import on_arc_mod_gl2
from ..lattice import (GramMatrix, LogMatrix, _mpf, ideal_norm_from_logs, norm_form,
                       quintic_gram, regulator_from_logs, uhp_from_gram)
from ..realcyclo import PrimeConfig
from ..torus import embedding_matrix, orbit_membership_mod_gl
from ..traceform import TraceFormData, sigma_action
from .records import FieldRecord
from .roots import roots

DEFAULT_PRECISION = 192
DEFAULT_BOUND = 6
ESCALATED_BOUND = 12
INTEGRALITY_TOL = 1e-6


@dataclass(frozen=True)
class UnitLogData:
    """Log vectors of the fundamental units.

    ``full[i]`` has length p: index 0 is the real embedding, index j and p - j
    (1 <= j <= r) the j-th conjugate pair in base order.  ``collapsed[i]`` is
    ``(log|iota_0|, 2 log|iota_1|, ..., 2 log|iota_r|)`` in base order.
    """

    config: PrimeConfig
    full: tuple
    collapsed: tuple
    precision: int

    def labeled(self, labeling):
        """Collapsed rows with pair columns permuted; ``labeling[j-1]`` is the base pair used as label j."""
        return tuple((row[0],) + tuple(row[b] for b in labeling) for row in self.collapsed)


def _eval_poly(coeffs, z):
    v = mpmath.mpc(0)
    for c in reversed(coeffs):
        v = v * z + _mpf(c)
    return v


def unit_logs(record: FieldRecord, precision=DEFAULT_PRECISION, root_set=None) -> UnitLogData:
    cfg = PrimeConfig(record.p)
    rs = root_set or roots(record.coeffs, precision)
    p, r = cfg.p, cfg.r
    small = mpmath.mpf(2) ** (-precision // 2)
    full, collapsed = [], []
    with mpmath.workprec(precision + 16):
        for n, u in enumerate(record.units):
            vals = [_eval_poly(u, mpmath.mpc(rs.real))] + [_eval_poly(u, z) for z in rs.pairs]
            if any(abs(v) < small for v in vals):
                raise DataError(f"{record.label}: unit {n} nearly vanishes at an embedding")
            logs = [mpmath.log(abs(v)) for v in vals]
            row = [logs[0]] + logs[1:] + logs[:0:-1]
            total = mpmath.fsum(row)
            if abs(total) > mpmath.mpf("1e-10"):
                raise DataError(f"{record.label}: unit {n} has log-norm {mpmath.nstr(total, 5)}, not 0")
            full.append(tuple(row))
            collapsed.append(tuple([logs[0]] + [2 * x for x in logs[1:]]))
    assert len(full[0]) == p and len(collapsed[0]) == r + 1
    return UnitLogData(cfg, tuple(full), tuple(collapsed), precision)


def candidate_labelings(config: PrimeConfig):
    """Relabelings ``sigma -> sigma^m`` (m = 1..r): label k takes pair fold(m k)."""
    return [tuple(config.fold(m * k) for k in range(1, config.r + 1)) for m in range(1, config.r + 1)]


def pair_orderings(config: PrimeConfig):
    """All r! assignments of conjugate pairs to labels 1..r, lexicographic."""
    return list(itertools.permutations(range(1, config.r + 1)))


def sigma_integer_matrices(config: PrimeConfig, rows, precision):
    """Integer matrices S_k with ``sigma_action(k)(rows_i) = sum_j S_k[i][j] rows_j``, k = 1..r-1.

    Returns ``(matrices, max_deviation)``; matrices is None when some entry is
    further than the integrality tolerance from an integer.
    """
    r = config.r
    with mpmath.workprec(precision):
        A = mpmath.matrix([list(row[:r]) for row in rows])
        Ainv = mpmath.inverse(A)
        mats, worst = [], mpmath.mpf(0)
        for k in range(1, r):
            img = mpmath.matrix([sigma_action(config, k, list(row))[:r] for row in rows])
            S = img * Ainv
            ints = [[int(mpmath.nint(S[i, j])) for j in range(r)] for i in range(r)]
            dev = max(abs(S[i, j] - ints[i][j]) for i in range(r) for j in range(r))
            worst = max(worst, dev)
            mats.append(ints)
    if worst > INTEGRALITY_TOL:
        return None, worst
    return mats, worst


def _shell(r, total, bound):
    if r == 1:
        if total <= bound:
            yield (total,)
            if total:
                yield (-total,)
        return
    for a in range(min(total, bound), -1, -1):
        for rest in _shell(r - 1, total - a, bound):
            yield (a,) + rest
            if a:
                yield (-a,) + rest


def exponent_vectors(r, bound):
    """Nonzero vectors with entries in [-bound, bound], by increasing L1 norm, then descending lexicographic."""
    for total in range(1, r * bound + 1):
        yield from sorted(set(_shell(r, total, bound)), reverse=True)


@dataclass
class MoserBasis:
    c: tuple
    X: list                 # integer coefficient rows relative to the fundamental units
    L: LogMatrix


def moser_rows(c, mats):
    rows = [list(c)]
    for S in mats:
        rows.append([sum(c[i] * S[i][j] for i in range(len(c))) for j in range(len(c))])
    return rows


def find_moser_basis(logs: UnitLogData, labeling, regulator_ref=None, bound=DEFAULT_BOUND) -> Optional[MoserBasis]:
    """Search ``u0 = prod units^c`` such that ``{u0, (sigma^k + sigma^-k) u0}`` is a basis.

    Returns None when the labeling does not preserve the unit lattice or the
    search box is exhausted.
    """
    cfg = logs.config
    U = logs.labeled(labeling)
    mats, _ = sigma_integer_matrices(cfg, U, logs.precision)
    if mats is None:
        return None
    Ulog = LogMatrix(cfg, U, logs.precision)
    if regulator_ref is None:
        target = regulator_from_logs(Ulog)
    else:
        with mpmath.workprec(logs.precision):
            target = mpmath.mpf(regulator_ref)
    for c in exponent_vectors(cfg.r, bound):
        X = moser_rows(c, mats)
        if abs(exact.int_det(X)) != 1:
            continue
        with mpmath.workprec(logs.precision):
            Lrows = mpmath.matrix(X) * mpmath.matrix([list(row) for row in U])
            L = LogMatrix(cfg, tuple(tuple(Lrows[i, j] for j in range(cfg.r + 1)) for i in range(cfg.r)),
                          logs.precision)
        reg = regulator_from_logs(L)
        if abs(reg - target) <= mpmath.mpf("1e-8") * target:
            return MoserBasis(tuple(c), X, L)
    return None


@dataclass
class ShapeResult:
    label: str
    p: int
    passed: bool
    status: str
    precision: int
    labeling_index: Optional[int] = None
    labeling: Optional[tuple] = None
    passing_labelings: list = field(default_factory=list)
    exponents: Optional[tuple] = None
    bound_used: Optional[int] = None
    x: Optional[str] = None
    y: Optional[str] = None
    raw_x: Optional[str] = None
    raw_y: Optional[str] = None
    circle_residual: Optional[str] = None
    orbit_residual: Optional[str] = None
    orbit_t: Optional[list] = None
    orbit_U: Optional[list] = None
    regulator: Optional[str] = None
    regulator_ref: Optional[str] = None
    regulator_delta: Optional[str] = None
    norm_form_delta: Optional[str] = None
    ideal_norm: Optional[str] = None
    ideal_norm_delta: Optional[str] = None
    ideal_stable: Optional[bool] = None
    error: Optional[str] = None

    def to_json(self):
        out = asdict(self)
        for k in ("labeling", "exponents"):
            if out[k] is not None:
                out[k] = list(out[k])
        return out

    def csv_row(self):
        return {
            "label": self.label,
            "x": self.x or "",
            "y": self.y or "",
            "circle_residual": self.circle_residual or "",
            "regulator_delta": self.regulator_delta or "",
            "labeling_index": "" if self.labeling_index is None else self.labeling_index,
            "exponents": "" if self.exponents is None else " ".join(map(str, self.exponents)),
            "orbit_residual": self.orbit_residual or "",
            "passed": int(self.passed),
        }


CSV_COLUMNS = ["label", "x", "y", "circle_residual", "regulator_delta", "labeling_index",
               "exponents", "orbit_residual", "passed"]


def _s(x, digits=30):
    return mpmath.nstr(x, digits, min_fixed=-3, max_fixed=3)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except UnitShapesError as exc:
        raise StageError(name, exc) from exc


def ideal_stable(L: LogMatrix):
    mats, worst = sigma_integer_matrices(L.config, L.rows, L.precision)
    return mats is not None, worst


def verify_field(record: FieldRecord, precision=DEFAULT_PRECISION, bound=DEFAULT_BOUND,
                 tol=1e-9, escalate=True) -> ShapeResult:
    """Run the full pipeline on one record.

    Stage errors are raised as ``StageError``; an exhausted Moser search is
    reported in the result with ``status = "search-exhausted"``.
    """
    _stage("validate", record.validate)
    cfg = PrimeConfig(record.p)
    res = ShapeResult(record.label, record.p, False, "started", precision,
                      regulator_ref=record.regulator_ref)
    logs = _stage("unit_logs", unit_logs, record, precision)

    orderings = pair_orderings(cfg)
    bounds = [bound] + ([ESCALATED_BOUND] if escalate and ESCALATED_BOUND > bound else [])
    found = {}
    for b in bounds:
        for idx, lab in enumerate(orderings):
            mb = _stage("moser", find_moser_basis, logs, lab, record.regulator_ref, b)
            if mb is not None:
                found[idx] = (lab, mb)
        if found:
            res.bound_used = b
            break
    if not found:
        res.status = "search-exhausted"
        return res
    res.passing_labelings = sorted(found)
    idx = min(found)
    lab, mb = found[idx]
    res.labeling_index, res.labeling, res.exponents = idx, lab, mb.c
    L = mb.L

    with mpmath.workprec(precision):
        data = TraceFormData.build(cfg)
        reg = _stage("regulator", regulator_from_logs, L)
        res.regulator = _s(reg)
        if record.regulator_ref is not None:
            ref = mpmath.mpf(record.regulator_ref)
            reg_delta = abs(reg - ref) / ref
            res.regulator_delta = _s(reg_delta, 6)
        else:
            reg_delta = mpmath.mpf(0)
        inorm = _stage("ideal_norm", ideal_norm_from_logs, L, [list(r) for r in data.Gtilde])
        res.ideal_norm = _s(inorm)
        norm_gap = abs(inorm * data.det_G - reg) / reg
        res.ideal_norm_delta = _s(norm_gap, 6)
        stable, _ = ideal_stable(L)
        res.ideal_stable = stable

        ok = stable and reg_delta < mpmath.mpf("1e-6") and norm_gap < mpmath.mpf("1e-6")
        if cfg.p == 5:
            a0, a1 = L.rows[0][0], L.rows[1][0]
            nf = abs(norm_form(a0, a1))
            res.norm_form_delta = _s(abs(nf - reg) / reg, 6)
            raw = _stage("uhp", uhp_from_gram, quintic_gram(a0, a1, precision))
            res.raw_x, res.raw_y = _s(raw.x, 20), _s(raw.y, 20)
            arc = _stage("arc", on_arc_mod_gl2, raw, None, precision)
            res.x, res.y = _s(arc.point.x, 20), _s(arc.point.y, 20)
            res.circle_residual = _s(arc.residual, 6)
            ok = ok and arc.passed and abs(nf - reg) / reg < mpmath.mpf("1e-6")

        gram = GramMatrix.from_rows(L.rows, precision)
        P = embedding_matrix(cfg, precision)
        try:
            hit = orbit_membership_mod_gl(gram, data.Gunit, P, tol=tol, max_word_length=2)
            res.orbit_residual = _s(hit.membership.residual, 6)
            res.orbit_t = [_s(t, 20) for t in hit.membership.t.t]
            res.orbit_U = [list(row) for row in hit.U]
        except SearchExhausted:
            ok = False
            res.orbit_residual = None
    res.passed = bool(ok)
    res.status = "pass" if ok else "fail"
    return res


def _verify_one(args):
    record, precision, bound, tol = args
    try:
        return verify_field(record, precision, bound, tol)
    except UnitShapesError as exc:
        return ShapeResult(record.label, record.p, False, "error", precision, error=str(exc))


def verify_many(records, precision=DEFAULT_PRECISION, bound=DEFAULT_BOUND, tol=1e-9, workers=1):
    """Verify records independently; output order follows input order."""
    jobs = [(rec, precision, bound, tol) for rec in records]
    if workers <= 1 or len(jobs) <= 1:
        return [_verify_one(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_verify_one, jobs))
