"""Conjugated diagonal torus ``P T P^-1`` acting on ``G_unit``, and orbit membership.

``P`` has the real embeddings of the basis ``[1, eta_1, ..., eta_{r-1}]`` as
rows.  The torus acts on Gram matrices by ``G -> A G A^T``.  Conjugating by
``P`` diagonalises the action, so membership reduces to matching
``(P^-1 G P^-T)_ij = t_i t_j C_ij``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from . import exact
from .errors import ConfigurationError, DomainError, SearchExhausted, ValidationError
from .lattice import DEFAULT_PRECISION, GramMatrix, _mpf
from .realcyclo import PrimeConfig
from .traceform import TraceFormData


def _mat(rows):
    return mpmath.matrix([[_mpf(x) for x in row] for row in rows])


def _rows(m):
    return tuple(tuple(m[i, j] for j in range(m.cols)) for i in range(m.rows))


@dataclass(frozen=True)
class EmbeddingMatrix:
    config: PrimeConfig
    P: tuple
    precision: int = DEFAULT_PRECISION

    def matrix(self):
        return _mat(self.P)


def embedding_matrix(config: PrimeConfig, precision=DEFAULT_PRECISION) -> EmbeddingMatrix:
    if precision < 64:
        raise ConfigurationError("embedding_matrix needs at least 64 bits")
    r, p = config.r, config.p
    with mpmath.workprec(precision):
        rows = [[mpmath.mpf(1)] * r]
        for k in range(1, r):
            rows.append([2 * mpmath.cospi(mpmath.mpf(2 * i * k) / p) for i in range(1, r + 1)])
    return EmbeddingMatrix(config, tuple(map(tuple, rows)), precision)


@dataclass(frozen=True)
class IdealBasisMatrix:
    """Rational matrix ``M`` with ``M B^T = B_a^T``."""

    M: tuple

    def __post_init__(self):
        m = tuple(tuple(Fraction(x) for x in row) for row in self.M)
        if exact.det(m) == 0:
            raise DomainError("ideal basis matrix is singular")
        object.__setattr__(self, "M", m)

    @classmethod
    def identity(cls, r):
        return cls(tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))


@dataclass(frozen=True)
class TorusPoint:
    t: tuple

    def __post_init__(self):
        t = tuple(_mpf(x) for x in self.t)
        if any(x == 0 for x in t):
            raise DomainError("torus coordinates must be nonzero")
        object.__setattr__(self, "t", t)


def torus_element(P: EmbeddingMatrix, t: TorusPoint, M: Optional[IdealBasisMatrix] = None):
    """``M P diag(t) P^-1`` as an mpmath matrix."""
    with mpmath.workprec(P.precision):
        Pm = P.matrix()
        A = Pm * mpmath.diag(list(t.t)) * mpmath.inverse(Pm)
        if M is not None:
            A = _mat(M.M) * A
        return A


def orbit_point(Gunit, P: EmbeddingMatrix, t: TorusPoint,
                M: Optional[IdealBasisMatrix] = None) -> GramMatrix:
    r = P.config.r
    if len(t.t) != r or len(Gunit) != r:
        raise ValidationError(f"expected rank {r} inputs")
    with mpmath.workprec(P.precision):
        A = torus_element(P, t, M)
        G = A * _mat(Gunit) * A.T
        G = (G + G.T) / 2
    return GramMatrix(_rows(G), P.precision)


@dataclass
class OrbitMembership:
    accepted: bool
    t: Optional[TorusPoint] = None
    residual: Optional[mpmath.mpf] = None
    reason: str = ""


def _sign_pattern(C, D, r, tiny):
    """Propagate signs ``s_j = s_i sign(D_ij / C_ij)`` from ``s_0 = +1`` over nonzero ``C`` entries."""
    signs = [0] * r
    signs[0] = 1
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(r):
            if signs[j] or abs(C[i, j]) <= tiny:
                continue
            if abs(D[i, j]) <= tiny:
                return None, f"D[{i},{j}] vanishes but C[{i},{j}] = {mpmath.nstr(C[i, j], 6)} does not"
            signs[j] = signs[i] * (1 if (D[i, j] / C[i, j]) > 0 else -1)
            queue.append(j)
    return [s or 1 for s in signs], ""


def _base_matrices(Gunit, P: EmbeddingMatrix, M: Optional[IdealBasisMatrix]):
    """``C = P^-1 G_unit P^-T`` and ``(M P)^-1``; call inside a workprec block."""
    Pm = P.matrix()
    Pinv = mpmath.inverse(Pm)
    C = Pinv * _mat(Gunit) * Pinv.T
    MPinv = Pinv if M is None else mpmath.inverse(_mat(M.M) * Pm)
    return C, MPinv


def _match(C, D, r, prec, tol) -> OrbitMembership:
    detC, detD = mpmath.det(C), mpmath.det(D)
    if not (detC > 0 and detD > 0):
        return OrbitMembership(False, reason="target is not positive definite")
    D = D * (detC / detD) ** (mpmath.mpf(1) / r)
    mags = []
    for i in range(r):
        q = D[i, i] / C[i, i]
        if q <= 0:
            return OrbitMembership(False, reason=f"D[{i},{i}]/C[{i},{i}] <= 0")
        mags.append(mpmath.sqrt(q))
    scale = max(abs(D[i, j]) for i in range(r) for j in range(r))
    tiny = scale * mpmath.mpf(2) ** (-prec // 2)
    signs, why = _sign_pattern(C, D, r, tiny)
    if signs is None:
        return OrbitMembership(False, reason=why)
    t = [s * m for s, m in zip(signs, mags)]
    res = max(abs(t[i] * t[j] * C[i, j] - D[i, j]) for i in range(r) for j in range(r)) / scale
    tp = TorusPoint(t)
    if res < tol:
        return OrbitMembership(True, tp, res)
    return OrbitMembership(False, tp, res, reason=f"residual {mpmath.nstr(res, 6)} >= tol")


def orbit_membership(Gtarget: GramMatrix, Gunit, P: EmbeddingMatrix,
                     M: Optional[IdealBasisMatrix] = None, tol=1e-10) -> OrbitMembership:
    """Decide whether ``Gtarget`` is (up to scale) ``A G_unit A^T`` with ``A = M P diag(t) P^-1``.

    ``t`` is reported with ``t_0 > 0`` and normalised so ``det D = det C``.
    """
    r = P.config.r
    if Gtarget.n != r:
        raise ValidationError(f"target Gram has rank {Gtarget.n}, expected {r}")
    prec = max(P.precision, Gtarget.precision)
    with mpmath.workprec(prec):
        C, MPinv = _base_matrices(Gunit, P, M)
        D = MPinv * Gtarget.matrix() * MPinv.T
        return _match(C, D, r, prec, tol)


def gl_generators(r):
    """Transvections ``E_ij^{+-1}``, adjacent transpositions, single sign flips."""
    gens = []
    eye = [[int(i == j) for j in range(r)] for i in range(r)]
    for i, j in itertools.permutations(range(r), 2):
        for e in (1, -1):
            m = [row[:] for row in eye]
            m[i][j] = e
            gens.append(m)
    for i in range(r - 1):
        m = [row[:] for row in eye]
        m[i], m[i + 1] = m[i + 1], m[i]
        gens.append(m)
    for i in range(r):
        m = [row[:] for row in eye]
        m[i][i] = -1
        gens.append(m)
    return [tuple(map(tuple, g)) for g in gens]


def _imul(a, b):
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in zip(*b)) for row in a)


def unimodular_words(r, max_word_length=6, search_bound=None):
    """Breadth-first enumeration of GL_r(Z) matrices by word length, deduplicated.

    The order is canonical: word length, then generator order.  Matrices with
    an entry larger than ``search_bound`` are pruned.
    """
    eye = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    gens = gl_generators(r)
    seen = {eye}
    frontier = [eye]
    yield eye
    for _ in range(max_word_length):
        nxt = []
        for u in frontier:
            for g in gens:
                v = _imul(g, u)
                if v in seen:
                    continue
                if search_bound is not None and max(abs(x) for row in v for x in row) > search_bound:
                    continue
                seen.add(v)
                nxt.append(v)
                yield v
        frontier = nxt


@dataclass
class OrbitHit:
    M: IdealBasisMatrix
    U: tuple
    membership: OrbitMembership
    tested: int = field(default=0)


def orbit_membership_mod_gl(Gtarget: GramMatrix, Gunit, P: EmbeddingMatrix, ideal_reps=None,
                            tol=1e-10, search_bound=3, max_word_length=3) -> OrbitHit:
    """First ``(M, U)`` such that ``U Gtarget U^T`` lies on the orbit through ``M``.

    Raises ``SearchExhausted`` when nothing is found within the bounds.
    """
    r = P.config.r
    if Gtarget.n != r:
        raise ValidationError(f"target Gram has rank {Gtarget.n}, expected {r}")
    reps = ideal_reps or [IdealBasisMatrix.identity(r)]
    tested = 0
    prec = max(P.precision, Gtarget.precision)
    with mpmath.workprec(prec):
        G = Gtarget.matrix()
        bases = [(M,) + _base_matrices(Gunit, P, M) for M in reps]
        for U in unimodular_words(r, max_word_length, search_bound):
            Um = _mat(U)
            for M, C, MPinv in bases:
                tested += 1
                A = MPinv * Um
                m = _match(C, A * G * A.T, r, prec, tol)
                if m.accepted:
                    return OrbitHit(M, U, m, tested)
    raise SearchExhausted(
        f"not found within bound (word length {max_word_length}, entries <= {search_bound}, "
        f"{tested} candidates)")


def default_setup(p, precision=DEFAULT_PRECISION):
    cfg = PrimeConfig(p)
    data = TraceFormData.build(cfg)
    return data, embedding_matrix(cfg, precision)


def class_number_hint(p):
    """Class number of Q(zeta_p)^+ is 1 for every p <= 67; default to the identity representative."""
    return 1 if p <= 67 else None

