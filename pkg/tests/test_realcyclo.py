from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitshapes.errors import ConfigurationError
from unitshapes.realcyclo import (CycloRealElement, PrimeConfig, embed, eta, is_prime,
                                  multiplication_matrix, norm, trace)

PRIMES = [5, 7, 11, 13]


def elements(p):
    r = (p - 1) // 2
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.lists(coeff, min_size=r, max_size=r).map(lambda c: CycloRealElement(PrimeConfig(p), c))


@pytest.mark.parametrize("p", [4, 9, 3, 2, 1, 0, -5])
def test_rejects_bad_p(p):
    with pytest.raises(ConfigurationError):
        PrimeConfig(p)


def test_large_p_guarded():
    with pytest.raises(ConfigurationError, match="allow_large"):
        PrimeConfig(103)
    assert PrimeConfig(103, allow_large=True).r == 51


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p", PRIMES)
def test_eta_r_is_minus_one_minus_rest(p):
    cfg = PrimeConfig(p)
    total = CycloRealElement.one(cfg)
    for k in range(1, cfg.r + 1):
        total = total + eta(cfg, k)
    assert total == CycloRealElement.scalar(cfg, 0)


@pytest.mark.parametrize("p", PRIMES)
def test_traces_of_basis(p):
    cfg = PrimeConfig(p)
    assert trace(CycloRealElement.one(cfg)) == cfg.r
    for k in range(1, cfg.r + 1):
        assert trace(eta(cfg, k)) == -1


def test_eta_product_p5():
    cfg = PrimeConfig(5)
    # eta1^2 = eta2 + 2 = 1 - eta1
    assert eta(cfg, 1) * eta(cfg, 1) == CycloRealElement(cfg, (1, -1))


@pytest.mark.parametrize("p", PRIMES)
def test_multiplication_agrees_with_embeddings(p):
    cfg = PrimeConfig(p)
    a = CycloRealElement(cfg, [Fraction(k + 1, 3) for k in range(cfg.r)])
    b = CycloRealElement(cfg, [(-1) ** k * (k + 2) for k in range(cfg.r)])
    with mpmath.workprec(128):
        for x, y, z in zip(embed(a), embed(b), embed(a * b)):
            assert abs(x * y - z) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("p", PRIMES)
def test_norm_is_product_of_embeddings(p):
    cfg = PrimeConfig(p)
    a = CycloRealElement(cfg, [3] + [1] * (cfg.r - 1))
    with mpmath.workprec(128):
        assert abs(mpmath.fprod(embed(a)) - norm(a)) < mpmath.mpf(10) ** -25


def test_golden_ratio_unit_norm():
    cfg = PrimeConfig(5)
    assert norm(eta(cfg, 1)) == -1   # (sqrt5 - 1)/2 * (-(sqrt5 + 1)/2)


def test_multiplication_matrix_of_one_is_identity():
    cfg = PrimeConfig(7)
    m = multiplication_matrix(CycloRealElement.one(cfg))
    assert m == [[int(i == j) for j in range(3)] for i in range(3)]


def test_embed_low_precision_rejected():
    with pytest.raises(ConfigurationError):
        embed(CycloRealElement.one(PrimeConfig(5)), precision=32)


def test_mixed_configs_rejected():
    with pytest.raises(ConfigurationError):
        eta(PrimeConfig(5), 1) * eta(PrimeConfig(7), 1)


@pytest.mark.parametrize("p", PRIMES)
def test_ring_axioms(p):
    @given(elements(p), elements(p), elements(p))
    def check(a, b, c):
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert trace(a + b) == trace(a) + trace(b)

    check()


@given(elements(7), elements(7))
def test_norm_multiplicative(a, b):
    assert norm(a * b) == norm(a) * norm(b)
