"""Exact arithmetic in the real cyclotomic field Q(zeta_p + zeta_p^-1).

Elements are stored in the integral basis ``B = [1, eta_1, ..., eta_{r-1}]``
with ``eta_k = zeta_p^k + zeta_p^-k`` and ``r = (p - 1) / 2``.  The last
conjugate ``eta_r`` is never a coordinate; it is rewritten through
``1 + eta_1 + ... + eta_r = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from . import exact
from .errors import ConfigurationError

MAX_P = 101


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeConfig:
    p: int
    allow_large: bool = False

    def __post_init__(self):
        p = self.p
        if isinstance(p, bool) or not isinstance(p, int):
            raise ConfigurationError(f"p must be an integer, got {p!r}")
        if p < 5 or not is_prime(p):
            raise ConfigurationError(f"p must be a prime >= 5, got {p}")
        if p > MAX_P and not self.allow_large:
            raise ConfigurationError(
                f"p = {p} exceeds the desk-scale guard {MAX_P}; pass allow_large=True")

    @property
    def r(self) -> int:
        return (self.p - 1) // 2

    def fold(self, k: int) -> int:
        """Representative of {k, -k} mod p in [0, r]."""
        m = k % self.p
        return min(m, self.p - m)


def _coerce(config, value):
    if isinstance(value, CycloRealElement):
        if value.config != config:
            raise ConfigurationError(
                f"mixed configurations p={value.config.p} and p={config.p}")
        return value
    if isinstance(value, (int, Fraction)):
        return CycloRealElement.scalar(config, value)
    return NotImplemented


@dataclass(frozen=True)
class CycloRealElement:
    config: PrimeConfig
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.config.r:
            raise ConfigurationError(
                f"expected {self.config.r} coordinates, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def scalar(cls, config, q):
        return cls(config, (Fraction(q),) + (0,) * (config.r - 1))

    @classmethod
    def one(cls, config):
        return cls.scalar(config, 1)

    def __add__(self, other):
        other = _coerce(self.config, other)
        if other is NotImplemented:
            return other
        return CycloRealElement(self.config, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloRealElement(self.config, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = _coerce(self.config, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(self.config, other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*eta{j}")
        return f"<p={self.config.p}: {' + '.join(terms) or '0'}>"


@lru_cache(maxsize=None)
def _eta_coeffs(config: PrimeConfig, k: int) -> tuple:
    r = config.r
    j = config.fold(k)
    v = [Fraction(0)] * r
    if j == 0:
        v[0] = Fraction(2)
    elif j == r:
        v = [Fraction(-1)] * r
    else:
        v[j] = Fraction(1)
    return tuple(v)


def eta(config: PrimeConfig, k: int) -> CycloRealElement:
    """``zeta^k + zeta^-k`` in basis B; ``k`` is folded mod p."""
    return CycloRealElement(config, _eta_coeffs(config, k))


@lru_cache(maxsize=None)
def _product_table(config: PrimeConfig):
    # table[i][j] = coordinates of B_i * B_j
    r = config.r
    table = [[None] * r for _ in range(r)]
    for i in range(r):
        for j in range(r):
            if i == 0 or j == 0:
                v = [Fraction(0)] * r
                v[max(i, j)] = Fraction(1)
                table[i][j] = tuple(v)
            else:
                a, b = _eta_coeffs(config, i + j), _eta_coeffs(config, i - j)
                table[i][j] = tuple(x + y for x, y in zip(a, b))
    return table


def mul(a: CycloRealElement, b: CycloRealElement) -> CycloRealElement:
    if a.config != b.config:
        raise ConfigurationError(f"mixed configurations p={a.config.p} and p={b.config.p}")
    table = _product_table(a.config)
    out = [Fraction(0)] * a.config.r
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            if not y:
                continue
            xy = x * y
            for k, t in enumerate(table[i][j]):
                if t:
                    out[k] += xy * t
    return CycloRealElement(a.config, tuple(out))


def trace(a: CycloRealElement) -> Fraction:
    r = a.config.r
    return a.coeffs[0] * r - sum(a.coeffs[1:], Fraction(0))


def multiplication_matrix(a: CycloRealElement):
    """Row i holds the coordinates of ``a * B_i``."""
    cfg = a.config
    return [list(mul(a, CycloRealElement(cfg, _unit_vector(cfg.r, i))).coeffs)
            for i in range(cfg.r)]


def _unit_vector(n, i):
    return tuple(Fraction(int(j == i)) for j in range(n))


def norm(a: CycloRealElement) -> Fraction:
    return exact.det(multiplication_matrix(a))


def embed(a: CycloRealElement, precision: int = 128):
    """Real embeddings ``(j_1(a), ..., j_r(a))`` with ``j_i(eta_k) = 2cos(2 pi i k / p)``."""
    if precision < 64:
        raise ConfigurationError("embed needs at least 64 bits of precision")
    cfg = a.config
    with mpmath.workprec(precision):
        out = []
        for i in range(1, cfg.r + 1):
            s = mpmath.mpf(a.coeffs[0].numerator) / a.coeffs[0].denominator
            for k in range(1, cfg.r):
                c = a.coeffs[k]
                if c:
                    s += (mpmath.mpf(c.numerator) / c.denominator) * 2 * mpmath.cospi(
                        mpmath.mpf(2 * i * k) / cfg.p)
            out.append(+s)
    return out
