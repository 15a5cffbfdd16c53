"""Unit-lattice shapes: log matrices, Gram matrices, the rank-2 upper half plane.

Reals are ``mpmath.mpf`` evaluated at an explicit working precision in bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import exact
from .errors import DomainError, RankError, ValidationError
from .realcyclo import PrimeConfig

DEFAULT_PRECISION = 128


def _mpf(x):
    # never re-round an existing mpf to the ambient precision
    if isinstance(x, mpmath.mpf):
        return x
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def zero_sum_tol(precision):
    return mpmath.mpf(2) ** (-precision + 16)


@dataclass(frozen=True)
class LogMatrix:
    config: PrimeConfig
    rows: tuple
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        r = self.config.r
        with mpmath.workprec(self.precision):
            rows = tuple(tuple(_mpf(x) for x in row) for row in self.rows)
            if len(rows) != r or any(len(row) != r + 1 for row in rows):
                raise ValidationError(f"log matrix must be {r} x {r + 1}")
            scale = max([abs(x) for row in rows for x in row] + [mpmath.mpf(1)])
            for i, row in enumerate(rows):
                if abs(mpmath.fsum(row)) > zero_sum_tol(self.precision) * scale:
                    raise ValidationError(f"row {i} does not sum to zero: {mpmath.nstr(mpmath.fsum(row), 5)}")
        object.__setattr__(self, "rows", rows)

    def gram(self) -> "GramMatrix":
        return GramMatrix.from_rows(self.rows, self.precision)

    def scaled(self, c) -> "LogMatrix":
        with mpmath.workprec(self.precision):
            return LogMatrix(self.config, tuple(tuple(c * x for x in row) for row in self.rows),
                             self.precision)


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        with mpmath.workprec(self.precision):
            e = tuple(tuple(_mpf(x) for x in row) for row in self.entries)
        n = len(e)
        if any(len(row) != n for row in e):
            raise ValidationError("Gram matrix must be square")
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_rows(cls, rows, precision=DEFAULT_PRECISION):
        with mpmath.workprec(precision):
            rows = [[_mpf(x) for x in row] for row in rows]
            g = [[mpmath.fdot(a, b) for b in rows] for a in rows]
        return cls(tuple(map(tuple, g)), precision)

    @property
    def n(self):
        return len(self.entries)

    def matrix(self):
        with mpmath.workprec(self.precision):
            return mpmath.matrix([list(row) for row in self.entries])

    def det(self):
        with mpmath.workprec(self.precision):
            return mpmath.det(self.matrix())

    def is_positive_definite(self) -> bool:
        with mpmath.workprec(self.precision):
            try:
                mpmath.cholesky(self.matrix())
            except ValueError:
                return False
        return True


@dataclass(frozen=True)
class UHPPoint:
    x: mpmath.mpf
    y: mpmath.mpf

    def __post_init__(self):
        object.__setattr__(self, "x", _mpf(self.x))
        object.__setattr__(self, "y", _mpf(self.y))
        if not self.y > 0:
            raise DomainError(f"point is not in the upper half plane: y = {self.y}")

    def __iter__(self):
        yield self.x
        yield self.y

    def as_floats(self):
        return float(self.x), float(self.y)


def norm_form(a0, a1):
    """Norm form of Z[(1 + sqrt 5)/2] in the basis {1, zeta_5 + zeta_5^-1}."""
    return a0 * a0 - a0 * a1 - a1 * a1


def _check_quintic(a0, a1, precision):
    n = norm_form(a0, a1)
    if n == 0 or abs(n) <= mpmath.mpf(2) ** (-precision) * (a0 * a0 + a1 * a1):
        raise RankError(f"norm form a0^2 - a0*a1 - a1^2 vanishes at ({a0}, {a1})")


def quintic_log_rows(a0, a1, precision=DEFAULT_PRECISION) -> LogMatrix:
    """``[Log u0, Log u1]`` for ``Log u0 = (a0, a1, -a0 - a1)``."""
    with mpmath.workprec(precision):
        a0, a1 = _mpf(a0), _mpf(a1)
        _check_quintic(a0, a1, precision)
        rows = ((a0, a1, -a0 - a1), (a1, a0 - a1, -a0))
    return LogMatrix(PrimeConfig(5), rows, precision)


def quintic_gram(a0, a1, precision=DEFAULT_PRECISION) -> GramMatrix:
    """Closed-form Gram matrix of ``{-Log u1, Log u0}``."""
    with mpmath.workprec(precision):
        a0, a1 = _mpf(a0), _mpf(a1)
        _check_quintic(a0, a1, precision)
        g00 = 2 * (a0 * a0 - a0 * a1 + a1 * a1)
        g01 = a1 * a1 - 3 * a0 * a1 - a0 * a0
        g11 = 2 * (a0 * a0 + a0 * a1 + a1 * a1)
    return GramMatrix(((g00, g01), (g01, g11)), precision)


def uhp_from_gram(G: GramMatrix) -> UHPPoint:
    if G.n != 2:
        raise ValidationError("uhp_from_gram needs a 2 x 2 Gram matrix")
    (g00, g01), (g10, g11) = G.entries
    with mpmath.workprec(G.precision):
        if not (g00 > 0 and g00 * g11 - g01 * g10 > 0):
            raise DomainError("Gram matrix is not positive definite")
        x = g01 / g00
        y = mpmath.sqrt(g11 / g00 - x * x)
    return UHPPoint(x, y)


def reduce_fundamental(z: UHPPoint, precision=DEFAULT_PRECISION):
    """Move ``z`` into ``{|x| <= 1/2, x^2 + y^2 >= 1}``.

    Returns the reduced point and the word of moves: ``("T", n)`` is
    ``z -> z + n`` and ``("S",)`` is ``z -> -1/z``.  Ties at ``x = -1/2`` go to
    ``+1/2``; no inversion is applied on ``|z| = 1``.
    """
    with mpmath.workprec(precision):
        eps = mpmath.mpf(2) ** (-precision + 4)
        x, y = _mpf(z.x), _mpf(z.y)
        word = []
        while True:
            n = int(mpmath.floor(x + mpmath.mpf(0.5)))
            if n:
                x -= n
                word.append(("T", -n))
            r2 = x * x + y * y
            if r2 < 1 - eps:
                x, y = -x / r2, y / r2
                word.append(("S",))
                continue
            break
        if abs(x + mpmath.mpf(0.5)) <= eps:
            x += 1
            word.append(("T", 1))
        return UHPPoint(x, y), word


def gl2_orbit_pair(z: UHPPoint, precision=DEFAULT_PRECISION):
    """``(z, mirror)``: the SL2(Z)-reduced representatives of a GL2(Z) class."""
    mirror, _ = reduce_fundamental(UHPPoint(-z.x, z.y), precision)
    return z, mirror


def apply_word(z: UHPPoint, word, precision=DEFAULT_PRECISION) -> UHPPoint:
    with mpmath.workprec(precision):
        w = mpmath.mpc(z.x, z.y)
        for move in word:
            w = w + move[1] if move[0] == "T" else -1 / w
        return UHPPoint(w.real, w.imag)


def _minors(rows):
    ncol = len(rows[0])
    for drop in range(ncol):
        yield mpmath.det(mpmath.matrix([[x for j, x in enumerate(row) if j != drop] for row in rows]))


def regulator_from_logs(L: LogMatrix):
    """|det| of the minor obtained by deleting a column; all minors must agree."""
    with mpmath.workprec(L.precision + 16):
        dets = [abs(d) for d in _minors(L.rows)]
        ref = max(dets)
        scale = max(abs(x) for row in L.rows for x in row) ** len(L.rows)
        if ref <= mpmath.mpf(2) ** (-L.precision // 2) * scale:
            raise RankError("log matrix is rank deficient")
        tol = mpmath.mpf(2) ** (-L.precision // 2)
        if any(abs(d - ref) > tol * ref for d in dets):
            raise ValidationError("maximal minors disagree; rows are not zero-sum")
    with mpmath.workprec(L.precision):
        return +dets[-1]


def ideal_norm_from_logs(L: LogMatrix, Gtilde):
    """``|det X|`` for the solution of ``X Gtilde = L``.

    The projector ``Gtilde^T (Gtilde Gtilde^T)^-1`` is exact; only ``L`` is
    floating point.
    """
    gram_inv = exact.inverse(exact.matmul(Gtilde, exact.transpose(Gtilde)))
    proj = exact.matmul(exact.transpose(Gtilde), gram_inv)
    with mpmath.workprec(L.precision + 16):
        X = mpmath.matrix([list(row) for row in L.rows]) * mpmath.matrix([[_mpf(q) for q in row] for row in proj])
        d = abs(mpmath.det(X))
        if d == 0:
            raise RankError("log matrix is rank deficient")
    with mpmath.workprec(L.precision):
        return +d
