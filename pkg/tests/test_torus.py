import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from unitshapes import exact
from unitshapes.errors import DomainError, SearchExhausted, ValidationError
from unitshapes.hypgeo import on_arc_mod_gl2
from unitshapes.lattice import GramMatrix, uhp_from_gram
from unitshapes.realcyclo import PrimeConfig
from unitshapes.torus import (IdealBasisMatrix, TorusPoint, _mat, _rows, default_setup,
                              embedding_matrix, gl_generators, orbit_membership,
                              orbit_membership_mod_gl, orbit_point, unimodular_words)


def _gunit(data):
    return [list(r) for r in data.Gunit]


def _same_up_to_scale_sign(t, s):
    ratio = [a / b for a, b in zip(t, s)]
    mags = [abs(q) for q in ratio]
    return max(mags) - min(mags), ratio


def test_embedding_matrix_shape():
    P = embedding_matrix(PrimeConfig(7))
    m = P.matrix()
    assert m.rows == m.cols == 3
    assert all(m[0, j] == 1 for j in range(3))
    with mpmath.workprec(128):
        assert abs(m[1, 0] - 2 * mpmath.cos(2 * mpmath.pi / 7)) < 1e-35


def test_torus_point_rejects_zero():
    with pytest.raises(DomainError):
        TorusPoint((1, 0))


def test_ideal_basis_must_be_invertible():
    with pytest.raises(DomainError):
        IdealBasisMatrix(((1, 2), (2, 4)))


@pytest.mark.parametrize("p", [5, 7, 11])
def test_identity_point_is_base_gram(p):
    data, P = default_setup(p)
    G = orbit_point(_gunit(data), P, TorusPoint([1] * data.config.r))
    with mpmath.workprec(128):
        for i in range(data.config.r):
            for j in range(data.config.r):
                assert abs(G.entries[i][j] - data.Gunit[i][j]) < 1e-30


@pytest.mark.parametrize("p", [5, 7, 11])
def test_round_trip(p):
    data, P = default_setup(p)
    rng = random.Random(p)
    for _ in range(10):
        t = [rng.choice((-1, 1)) * rng.uniform(0.3, 3) for _ in range(data.config.r)]
        G = orbit_point(_gunit(data), P, TorusPoint(t))
        m = orbit_membership(G, _gunit(data), P)
        assert m.accepted and m.residual < 1e-30
        with mpmath.workprec(128):
            spread, _ = _same_up_to_scale_sign(m.t.t, t)
            assert spread < 1e-25


def test_scaled_target_accepted():
    data, P = default_setup(7)
    G = orbit_point(_gunit(data), P, TorusPoint([1.5, -0.7, 2.0]))
    with mpmath.workprec(128):
        G5 = GramMatrix(tuple(tuple(5 * x for x in row) for row in G.entries))
    assert orbit_membership(G5, _gunit(data), P).accepted


def test_identity_gram_rejected_for_p5():
    data, P = default_setup(5)
    m = orbit_membership(GramMatrix(((1, 0), (0, 1))), _gunit(data), P)
    assert not m.accepted
    assert "vanishes" in m.reason


def test_generic_gram_rejected_for_p7():
    data, P = default_setup(7)
    m = orbit_membership(GramMatrix(((3, 1, 0), (1, 4, 1), (0, 1, 5))), _gunit(data), P)
    assert not m.accepted


def test_rank_mismatch():
    data, P = default_setup(7)
    with pytest.raises(ValidationError):
        orbit_membership(GramMatrix(((1, 0), (0, 1))), _gunit(data), P)


@pytest.mark.parametrize("p", [5, 7])
def test_orbit_after_unimodular_change(p):
    data, P = default_setup(p)
    r = data.config.r
    U = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    U[0][1] = 1                     # transvection
    G = orbit_point(_gunit(data), P, TorusPoint([1.3] + [0.8] * (r - 1)))
    with mpmath.workprec(128):
        Um = _mat(U)
        target = GramMatrix(_rows(Um * G.matrix() * Um.T))
    assert not orbit_membership(target, _gunit(data), P).accepted or p == 5
    hit = orbit_membership_mod_gl(target, _gunit(data), P, max_word_length=2)
    assert hit.membership.accepted and hit.membership.residual < 1e-20


def test_search_exhausted_is_distinct():
    data, P = default_setup(7)
    with pytest.raises(SearchExhausted, match="not found within bound"):
        orbit_membership_mod_gl(GramMatrix(((3, 1, 0), (1, 4, 1), (0, 1, 5))), _gunit(data), P,
                                max_word_length=1)


def test_unimodular_words_are_unimodular_and_unique():
    words = list(unimodular_words(3, max_word_length=2))
    assert words[0] == tuple(tuple(int(i == j) for j in range(3)) for i in range(3))
    assert len(set(words)) == len(words)
    assert all(abs(exact.int_det(w)) == 1 for w in words)
    assert len(gl_generators(3)) > 0


@pytest.mark.parametrize("p", [5])
def test_p5_orbit_points_on_arc(p):
    data, P = default_setup(p)

    @given(st.floats(min_value=0.2, max_value=5), st.floats(min_value=0.2, max_value=5),
           st.booleans())
    def check(t0, t1, flip):
        G = orbit_point(_gunit(data), P, TorusPoint([t0, -t1 if flip else t1]))
        with mpmath.workprec(128):
            assert on_arc_mod_gl2(uhp_from_gram(G)).passed

    check()
