from collections import Counter
from fractions import Fraction

import pytest

from fglchar.arith import make_field, qp, unit_group, unramified_field
from fglchar.errors import NotACharacter, RamifiedUnsupported
from fglchar.groups import (
    apply_matrix,
    corpus_groups,
    cyclic,
    direct_product,
    trivial_group,
    tuple_classes,
)
from fglchar.hkr import (
    additivity_check,
    all_characters,
    character,
    character_pullback,
    cyclic_hom_count,
    equivariance_check,
    frobenius_orbits,
    hom_classes,
    hom_model,
    is_refinement,
    level_stability,
    p_class_count,
    product_check,
    rank,
    rank_report,
    unit_orbits,
)

CORPUS = corpus_groups()
S3, Q8 = CORPUS["S3"], CORPUS["Q8"]
Q2, Q3 = qp(2), qp(3)
Q4 = make_field(2, 2, [1, 1, 1])
Q9 = unramified_field(3, 2)
R2 = make_field(2, 1, [0, 1], 2, [-2, 0, 1])
FIELDS = [Q2, Q3, Q4, Q9, R2]


def brute_orbits(field, G):
    """Unit orbits on classes, computed tuple by tuple from the unit matrices."""
    S = tuple_classes(G, field.n, field.p)
    r = hom_model(field, G).level
    mats = unit_group(field, r).matrices
    seen, sizes = set(), []
    for c in S.classes:
        if c.rep in seen:
            continue
        orb = {S.class_of(apply_matrix(G, c.rep, C)) for C in mats}
        seen |= {S.classes[k].rep for k in orb}
        sizes.append(len(orb))
    return sorted(sizes)


def test_hom_classes_examples():
    assert len(hom_classes(Q3, S3)) == 2
    assert len(hom_classes(Q9, S3)) == 5
    for F in FIELDS:
        assert rank(F, trivial_group()) == 1
    assert rank(Q3, S3) == 2 and rank(Q9, S3) == 5


def test_unit_orbit_examples():
    assert unit_orbits(Q3, cyclic(3)).degrees == [1, 2]
    assert unit_orbits(Q2, cyclic(4)).degrees == [1, 1, 2]
    d = unit_orbits(Q4, cyclic(2))
    assert d.degrees == [1, 3]
    assert d.acting_group_order == 3
    assert [pt.stabilizer_order for pt in d.points] == [3, 1]


def test_frobenius_examples():
    assert frobenius_orbits(Q3, S3).degrees == unit_orbits(Q3, S3).degrees
    assert frobenius_orbits(Q4, cyclic(2)).degrees == [1, 3]
    G = direct_product(cyclic(3), cyclic(3))
    fine, coarse = unit_orbits(Q9, G), frobenius_orbits(Q9, G)
    assert len(coarse.points) <= len(fine.points)
    assert is_refinement(fine, coarse)
    assert sum(coarse.degrees) == sum(fine.degrees) == 81
    with pytest.raises(RamifiedUnsupported):
        frobenius_orbits(R2, S3)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.name or "ram2")
def test_decompositions_over_corpus(F):
    for name, G in CORPUS.items():
        d = unit_orbits(F, G)
        assert sum(d.degrees) == d.total_classes == rank(F, G)
        assert all(d.acting_group_order % k == 0 for k in d.degrees)
        assert all(pt.degree * pt.stabilizer_order == d.acting_group_order for pt in d.points)
        assert sorted(d.degrees) == brute_orbits(F, G)
        assert level_stability(F, G).passed
        assert rank_report(F, G).passed
        if F.is_unramified:
            assert is_refinement(d, frobenius_orbits(F, G))


def test_rank_depends_only_on_degree():
    for G in CORPUS.values():
        assert rank(Q4, G) == rank(R2, G)


@pytest.mark.parametrize("p", [2, 3])
def test_rank_over_qp_counts_p_classes(p):
    for G in CORPUS.values():
        assert rank(qp(p), G) == p_class_count(G, p)


def test_product_check():
    assert product_check(Q3, cyclic(3), cyclic(3)).passed
    assert product_check(Q2, S3, cyclic(2)).passed
    rep = product_check(Q3, S3, trivial_group())
    assert rep.passed and rep.details["orbit_sizes"] == sorted(unit_orbits(Q3, S3).degrees)
    assert product_check(Q4, cyclic(2), cyclic(2)).passed
    assert product_check(R2, cyclic(2), Q8).passed


def test_cyclic_hom_count():
    assert cyclic_hom_count(Q3, 1).details["homs"] == 3
    assert cyclic_hom_count(Q4, 1).details["homs"] == 4
    assert cyclic_hom_count(R2, 1).details["homs"] == 4
    for F in FIELDS:
        nu = 1
        while F.p ** (nu * F.n) <= 3 ** 6:
            rep = cyclic_hom_count(F, nu)
            assert rep.passed and rep.details["homs"] == F.p ** (nu * F.n)
            if F.is_unramified:
                assert rep.details["trace_images"] == rep.details["homs"]
            nu += 1


def test_character_examples():
    Z3 = cyclic(3)
    chi = character(Z3, [Fraction(1, 3)])
    S = hom_classes(Q3, Z3)
    assert character_pullback(chi, S)[S.class_of((1,))] == (Fraction(1, 3),)
    zero = character(S3, [0] * len(S3.generators))
    assert all(v == (0,) for v in character_pullback(zero, hom_classes(Q2, S3)))
    # generators are a transposition and a 3-cycle
    sign = character(S3, [Fraction(1, 2), 0])
    S = hom_classes(Q2, S3)
    transposition = next(c.rep for c in S.classes if c.rep != (0,))
    assert character_pullback(sign, S)[S.class_of(transposition)] == (Fraction(1, 2),)


def test_characters_of_corpus():
    counts = {name: len(all_characters(G)) for name, G in CORPUS.items()}
    assert counts == {"S3": 2, "S4": 2, "A4": 3, "D4": 4, "Q8": 4, "Z6": 6, "Z4xZ2": 8}
    for G in (Q8, S3):
        chars = all_characters(G)
        for F in (Q2, Q3, Q4):
            assert additivity_check(chars, hom_classes(F, G)).passed


def test_not_a_character():
    # the 3-cycle generator of S3 cannot go to 1/2
    with pytest.raises(NotACharacter):
        character(S3, [Fraction(1, 2), Fraction(1, 2)])
    with pytest.raises(NotACharacter):
        character(S3, [Fraction(1, 2)])
    with pytest.raises(NotACharacter):
        character(cyclic(4), [Fraction(1, 3)])


@pytest.mark.parametrize("F", [Q2, Q3, Q4, Q9], ids=lambda F: F.name)
def test_equivariance(F):
    for G in CORPUS.values():
        for chi in all_characters(G):
            assert equivariance_check(F, chi).passed


def test_equivariance_needs_unramified():
    with pytest.raises(RamifiedUnsupported):
        equivariance_check(R2, all_characters(cyclic(2))[1])


def test_json_shape():
    d = unit_orbits(Q3, S3).to_json()
    assert d["group"] == "S3" and d["total_classes"] == 2 and d["refinement"] == "none"
    assert [pt["degree"] for pt in d["points"]] == [1, 1]
    assert Counter(pt["stabilizer_order"] for pt in d["points"]) == Counter([2, 2])
