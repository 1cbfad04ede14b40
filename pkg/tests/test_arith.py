from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fglchar.arith import (
    INF,
    LocalRational,
    balanced,
    first_irreducible,
    frobenius_apply,
    frobenius_lift,
    is_irreducible_mod_p,
    make_field,
    multiplication_matrix,
    qp,
    ring_arithmetic,
    trace,
    trace_pairing_matrix,
    unit_count,
    unit_group,
    unramified_field,
    valuation,
)
from fglchar.errors import (
    DegreeCapExceeded,
    InputError,
    NotAUnit,
    NotEisenstein,
    NotIrreducible,
    RamifiedUnsupported,
)

Q4 = make_field(2, 2, [1, 1, 1])
Q9 = unramified_field(3, 2)
R2 = make_field(2, 1, [0, 1], 2, [-2, 0, 1])


def test_local_rational():
    a = LocalRational(Fraction(12, 10), 2)
    assert (a.numerator, a.denominator) == (6, 5)
    assert a.valuation == 1 and a.is_integral()
    assert LocalRational(Fraction(1, 4), 2).valuation == -2
    assert LocalRational(0, 3).valuation == INF
    assert valuation(Fraction(9, 2), 3) == 2
    assert LocalRational(Fraction(1, 2), 2) + LocalRational(Fraction(1, 2), 2) == 1


def test_balanced():
    assert balanced(31, 32) == -1
    assert balanced(16, 32) == 16
    assert balanced(3, 32) == 3


def test_make_field_examples():
    Q2 = make_field(2, 1, [0, 1])
    assert Q2.n == 1 and Q2.is_unramified
    assert Q4.n == 2 and Q4.residue_size == 4
    assert R2.n == 2 and R2.e == 2
    assert R2.uniformizer.valuation() == 1
    assert R2.uniformizer ** 2 == R2.from_int(2)


def test_make_field_rejects():
    with pytest.raises(NotIrreducible):
        make_field(2, 2, [1, 0, 1])          # (x+1)^2 mod 2
    with pytest.raises(NotEisenstein):
        make_field(2, 1, [0, 1], 2, [-4, 0, 1])
    with pytest.raises(NotEisenstein):
        make_field(2, 1, [0, 1], 2, [-2, 1, 1])
    with pytest.raises(DegreeCapExceeded):
        make_field(2, 9)
    with pytest.raises(InputError):
        make_field(6)


def test_irreducible_search():
    assert first_irreducible(2, 2) == (1, 1, 1)
    assert first_irreducible(3, 2) == (1, 0, 1)
    for p in (2, 3, 5):
        for f in (1, 2, 3):
            assert is_irreducible_mod_p(first_irreducible(p, f), p)


def test_invert_examples():
    Z32 = qp(2, 5)
    assert ring_arithmetic(Z32.from_int(3), None, "invert") == Z32.from_int(11)
    x = Q4.x
    assert ring_arithmetic(x, None, "invert") == -(x + 1)
    with pytest.raises(NotAUnit):
        ring_arithmetic(qp(2).from_int(2), None, "invert")


def test_frobenius():
    assert frobenius_lift(qp(5)) == qp(5).x
    F1 = Q4.with_precision(1)
    assert frobenius_lift(F1) == F1.x + 1
    for F in (Q4, Q9, unramified_field(2, 3)):
        x = F.x
        assert frobenius_apply(x, F.f) == x
        # the lift is a root of u_poly
        s = frobenius_lift(F)
        acc = F.zero
        for c in reversed(F.u_poly):
            acc = acc * s + c
        assert acc == F.zero
    with pytest.raises(RamifiedUnsupported):
        frobenius_lift(R2)


def test_trace_pairing():
    assert trace_pairing_matrix(qp(3), 4) == [[1]]
    T = trace_pairing_matrix(Q4, 3)
    assert T == [[2, -1], [-1, -1]]
    assert (T[0][0] * T[1][1] - T[0][1] * T[1][0]) == -3
    T9 = trace_pairing_matrix(Q9, 2)
    assert (T9[0][0] * T9[1][1] - T9[0][1] * T9[1][0]) % 3 != 0
    assert trace(Q4.x) == Q4.modulus - 1
    with pytest.raises(RamifiedUnsupported):
        trace_pairing_matrix(R2, 1)


def test_unit_groups():
    assert [u.coords for u in unit_group(qp(3), 1).elements] == [(1,), (2,)]
    assert len(unit_group(Q4, 1)) == 3
    assert [u.coords for u in unit_group(qp(2), 2).elements] == [(1,), (3,)]
    for F in (qp(2), qp(3), Q4, Q9, R2):
        for r in (1, 2):
            U = unit_group(F, r)
            assert len(U) == unit_count(F, r) == F.p ** (r * F.n) - F.p ** (r * F.n - F.f)
            one = U.elements[U.index[(1,) + (0,) * (F.n - 1)]]
            assert multiplication_matrix(one) == tuple(
                tuple(int(i == j) for j in range(F.n)) for i in range(F.n))


def test_residue_ring_size():
    for F in (Q4.with_precision(2), R2.with_precision(2)):
        assert sum(1 for _ in F.elements()) == F.p ** (F.precision * F.n)


def test_div_uniformizer_ramified():
    y = R2.uniformizer
    z = R2.element((3, 5)) * y
    assert z.div_uniformizer() == R2.element((3, 5))


coords = st.tuples(st.integers(-50, 50), st.integers(-50, 50))


@settings(max_examples=60, deadline=None)
@given(coords, coords, coords, st.sampled_from([Q4, Q9, R2]))
def test_ring_axioms(a, b, c, F):
    a, b, c = F.element(a), F.element(b), F.element(c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == F.zero


@settings(max_examples=60, deadline=None)
@given(coords, st.sampled_from([Q4, Q9, R2]))
def test_inverse_of_units(a, F):
    z = F.element(a)
    if z.is_unit():
        assert z * z.inverse() == F.one
    else:
        with pytest.raises(NotAUnit):
            z.inverse()


@settings(max_examples=40, deadline=None)
@given(coords, coords)
def test_trace_is_additive_and_frobenius_invariant(a, b):
    a, b = Q9.element(a), Q9.element(b)
    assert trace(a + b) == (trace(a) + trace(b)) % Q9.modulus
    assert trace(frobenius_apply(a)) == trace(a)
    assert frobenius_apply(a * b) == frobenius_apply(a) * frobenius_apply(b)
