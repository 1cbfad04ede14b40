from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from fglchar.arith import make_field, qp, unramified_field
from fglchar.errors import BadUniformizerSeries, InputError
from fglchar.fgl import compare, hazewinkel_law
from fglchar.lubin_tate import (
    lubin_tate_endomorphism,
    lubin_tate_law,
    standard_series,
    uniformizer_series,
    verify_lubin_tate,
)
from fglchar.series import Series, compose, reduce_mod_max, weierstrass_degree

R2 = make_field(2, 1, [0, 1], 2, [-2, 0, 1])


def low(c, K):
    """Coordinates of ``c`` reduced to the precision of ``K``."""
    return tuple(x % K.modulus for x in c.coords)


def cyclotomic(K, D):
    p = K.p
    return uniformizer_series(K, [0] + [comb(p, k) for k in range(1, p + 1)], D)


@pytest.mark.parametrize("p", [2, 3])
def test_cyclotomic_series_gives_multiplicative_law(p):
    K = qp(p)
    F = lubin_tate_law(K, cyclotomic(K, 16), 16)
    mult = Series(F.ring, 2, 16, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert F.precision_achieved == 16
    assert compare(F.law, mult, F.precision_achieved) is None
    assert verify_lubin_tate(F).passed


def test_standard_series_q3():
    K = qp(3)
    F = lubin_tate_law(K, standard_series(K, 16), 16)
    assert {e: low(c, K) for e, c in F.law.truncate(1).terms.items()} == {(1, 0): (1,), (0, 1): (1,)}
    assert verify_lubin_tate(F).passed
    assert F.precision_achieved >= 8


def test_ramified_quadratic():
    f = standard_series(R2, 16)
    assert f.coeff(1) == R2.uniformizer and f.coeff(2) == R2.one
    F = lubin_tate_law(R2, f, 16)
    assert F.precision_achieved >= 8
    assert verify_lubin_tate(F).passed
    # [y] is the uniformizer series itself
    assert lubin_tate_endomorphism(F, R2.uniformizer) is F.f_series
    # the XY coefficient solves c (y^2 - y) = 2, i.e. c = y / (y - 1) = 2 + y
    assert low(F.law.coeff((1, 1)), R2) == (2, 1)


def test_unramified_quadratic_residue_and_exact_agree():
    K = unramified_field(2, 2)
    F = lubin_tate_law(K, standard_series(K, 10), 10)
    E = lubin_tate_law(K, standard_series(K, 10, exact=True), 10)
    assert E.precision_achieved is None
    assert verify_lubin_tate(F).passed
    for e, c in E.law.terms.items():
        assert all(t.denominator % 2 for t in c.coords)
    m = 2 ** F.precision_achieved
    for e in set(F.law.terms) | set(E.law.terms):
        exact = E.law.coeff(e)
        exact = [0, 0] if not exact else [int(t.numerator * pow(t.denominator, -1, m)) % m
                                          for t in exact.coords]
        assert [c % m for c in F.law.coeff(e).coords] == exact


def test_height_from_reduction():
    for K in (qp(2), qp(3), unramified_field(2, 2), R2):
        F = lubin_tate_law(K, standard_series(K, 12), 12)
        p_series = lubin_tate_endomorphism(F, K.p)
        assert weierstrass_degree(reduce_mod_max(p_series)) == K.p ** K.n


def test_bad_uniformizer_series():
    K = qp(3)
    with pytest.raises(BadUniformizerSeries):
        lubin_tate_law(K, uniformizer_series(K, [0, 1, 0, 1], 8), 8)
    with pytest.raises(BadUniformizerSeries):
        lubin_tate_law(K, uniformizer_series(K, [0, 3, 1, 1], 8), 8)
    with pytest.raises(BadUniformizerSeries):
        lubin_tate_law(K, uniformizer_series(K, [1, 3, 0, 1], 8), 8)
    with pytest.raises(InputError):
        standard_series(R2, 8, exact=True)


def test_exact_mode_matches_hazewinkel_p_series_shape():
    # over Q_p the Hazewinkel law of height one has [p] = F(pX, X^p); the
    # Lubin-Tate law for f = pX + X^p is a different law of the same height
    H = hazewinkel_law(3, 1, 9)
    F = lubin_tate_law(qp(3), standard_series(qp(3), 9, exact=True), 9)
    assert weierstrass_degree(reduce_mod_max(H.p_series)) == 3
    assert compose(F.f_series, F.law) == F(compose(F.f_series, F.X(2, 0)),
                                           compose(F.f_series, F.X(2, 1)))


@pytest.fixture(scope="module")
def lt3():
    return lubin_tate_law(qp(3), standard_series(qp(3), 8), 8)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 80).filter(lambda a: a % 3), st.integers(1, 80).filter(lambda a: a % 3))
def test_endomorphisms_multiply(lt3, a, b):
    F = lt3
    K = F.field
    ea = lubin_tate_endomorphism(F, a)
    eb = lubin_tate_endomorphism(F, b)
    eab = lubin_tate_endomorphism(F, a * b)
    assert compare(compose(ea, eb), eab, F.precision_achieved) is None
    assert compare(compose(ea, F.law), F(compose(ea, F.X(2, 0)), compose(ea, F.X(2, 1))),
                   F.precision_achieved) is None
    assert low(ea.coeff(1), K) == (a,)
