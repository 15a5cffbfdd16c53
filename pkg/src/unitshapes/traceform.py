"""Trace-form Gram matrices for the real cyclotomic field and the phi-map check.

Row/column 0 always belongs to the basis element 1.  Everything here is exact
(``int`` or ``Fraction``); there are no tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import exact
from .errors import ValidationError
from .realcyclo import CycloRealElement, PrimeConfig, eta, trace


def basis(config: PrimeConfig):
    """The integral basis ``[1, eta_1, ..., eta_{r-1}]``."""
    return [CycloRealElement.one(config)] + [eta(config, k) for k in range(1, config.r)]


def build_trace_gram(config: PrimeConfig):
    b = basis(config)
    out = []
    for x in b:
        row = []
        for y in b:
            t = trace(x * y)
            assert t.denominator == 1
            row.append(int(t))
        out.append(row)
    return out


def closed_form_trace_gram(config: PrimeConfig):
    """(p-1)/2 in the corner, -1 on the rest of row/col 0, p-2 diagonal, -2 elsewhere."""
    r, p = config.r, config.p
    g = [[-2] * r for _ in range(r)]
    for i in range(r):
        g[i][i] = p - 2
        g[0][i] = g[i][0] = -1
    g[0][0] = r
    return g


def zeroing_extend(G):
    if any(len(row) != len(G) for row in G):
        raise ValidationError("zeroing_extend needs a square matrix")
    return [list(row) + [-sum(row)] for row in G]


def unit_gram(Gtilde):
    for i, row in enumerate(Gtilde):
        if sum(row) != 0:
            raise ValidationError(f"row {i} of Gtilde sums to {sum(row)}, not 0")
    return exact.matmul(Gtilde, exact.transpose(Gtilde))


def sigma_action(config: PrimeConfig, k: int, v):
    """Apply ``sigma^k + sigma^-k`` to a collapsed log vector.

    ``v = (a_0, a_1, ..., a_r)`` with ``a_0 = log|iota_0|`` and
    ``a_j = 2 log|iota_j|``.  With ``f(0) = 2 a_0`` and ``f(m) = a_fold(m)``
    the image is ``f(k)`` in slot 0 and ``f(j + k) + f(j - k)`` in slot j >= 1.
    Slot 0 only sees one conjugate pair, hence no doubling there.
    """
    r = config.r
    if len(v) != r + 1:
        raise ValidationError(f"expected a vector of length {r + 1}, got {len(v)}")
    if not 1 <= k <= r:
        raise ValidationError(f"k must lie in [1, {r}], got {k}")

    def f(m):
        j = config.fold(m)
        return 2 * v[0] if j == 0 else v[j]

    return [f(k)] + [f(j + k) + f(j - k) for j in range(1, r + 1)]


def _case(i, j):
    if j == 0:
        return "case1: j = 0"
    if i != j:
        return "case2: 0 < j, i != j"
    return "case3: 0 < i = j"


@dataclass
class EquivarianceReport:
    p: int
    results: dict = field(default_factory=dict)  # i -> list of mismatches

    @property
    def passed(self) -> bool:
        return all(not bad for bad in self.results.values())

    def lines(self):
        out = []
        for i, bad in sorted(self.results.items()):
            status = "pass" if not bad else "FAIL " + "; ".join(
                f"col {j} ({c}): got {got}, want {want}" for j, c, got, want in bad)
            out.append(f"(sigma^{i} + sigma^-{i}) row0 == row{i}: {status}")
        return out


def verify_equivariance(config: PrimeConfig) -> EquivarianceReport:
    """Check ``(sigma^i + sigma^-i) row_0(Gtilde) == row_i(Gtilde)`` for 1 <= i < r."""
    gt = zeroing_extend(build_trace_gram(config))
    report = EquivarianceReport(config.p)
    for i in range(1, config.r):
        image = sigma_action(config, i, gt[0])
        report.results[i] = [(j, _case(i, j) if j < config.r else "zeroing column", image[j], gt[i][j])
                             for j in range(config.r + 1) if image[j] != gt[i][j]]
    return report


@dataclass(frozen=True)
class TraceFormData:
    config: PrimeConfig
    G: tuple
    Gtilde: tuple
    Gunit: tuple

    @classmethod
    def build(cls, config: PrimeConfig) -> "TraceFormData":
        g = build_trace_gram(config)
        gt = zeroing_extend(g)
        gu = unit_gram(gt)
        return cls(config, _freeze(g), _freeze(gt), _freeze(gu))

    @property
    def det_G(self) -> int:
        d = exact.det(self.G)
        assert d.denominator == 1
        return int(d)

    def unit_gram_minors(self):
        return [int(m) for m in exact.leading_minors(self.Gunit)]


def _freeze(m):
    return tuple(tuple(row) for row in m)


def format_matrix(m) -> str:
    def fmt(x):
        if isinstance(x, Fraction) and x.denominator == 1:
            return str(x.numerator)
        return str(x)
    return "[" + ", ".join("[" + ", ".join(fmt(x) for x in row) + "]" for row in m) + "]"


def report_text(config: PrimeConfig) -> str:
    data = TraceFormData.build(config)
    eq = verify_equivariance(config)
    lines = [
        f"p = {config.p}, r = {config.r}",
        f"G = {format_matrix(data.G)}",
        f"Gtilde = {format_matrix(data.Gtilde)}",
        f"G_unit = {format_matrix(data.Gunit)}",
        f"det(G) = {data.det_G}",
        f"det(G) == p^((p-3)/2): {data.det_G == config.p ** ((config.p - 3) // 2)}",
        f"equivariance: {'pass' if eq.passed else 'FAIL'}",
    ]
    lines += ["  " + s for s in eq.lines()]
    return "\n".join(lines)
