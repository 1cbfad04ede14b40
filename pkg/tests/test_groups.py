import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fglchar.errors import (
    BudgetExceeded,
    ClosureCapExceeded,
    InputError,
    MatrixNotInvertible,
    NoIdentity,
    NoInverse,
    NotAssociative,
)
from fglchar.groups import (
    FiniteGroup,
    abelianization,
    action_level,
    apply_matrix,
    burnside_count,
    centralizer_count_oracle,
    commuting_tuples,
    conjugacy_classes,
    corpus_groups,
    cyclic,
    det_mod,
    direct_product,
    exponent,
    from_permutations,
    from_table,
    load_group,
    matrix_action,
    p_elements,
    quaternion8,
    symmetric,
    trivial_group,
    tuple_classes,
)

from oracles import commuting_tuples_naive, conjugation_orbits_naive

CORPUS = corpus_groups()
S3 = CORPUS["S3"]
Q8 = CORPUS["Q8"]


def test_load_examples():
    G = load_group({"name": "S3", "perm_degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    assert G.order == 6 and not G.is_abelian()
    assert G.perms[0] == (0, 1, 2)
    Z4 = load_group({"name": "Z4", "order": 4,
                     "table": [[(a + b) % 4 for b in range(4)] for a in range(4)]})
    assert Z4.element_order.tolist() == [1, 4, 2, 4]


def test_corpus_orders():
    assert {k: G.order for k, G in CORPUS.items()} == {
        "S3": 6, "S4": 24, "A4": 12, "D4": 8, "Q8": 8, "Z6": 6, "Z4xZ2": 8}
    for G in CORPUS.values():
        assert G.check_associative()
        assert all(G.order % k == 0 for k in G.element_order.tolist())
        assert sorted(G.mul[G.inv, np.arange(G.order)].tolist()) == [0] * G.order


def test_table_validation():
    with pytest.raises(NotAssociative):
        # a Latin square with identity 0 that is not a group
        from_table([[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3],
                    [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]])
    with pytest.raises(NoIdentity):
        from_table([[1, 1], [1, 1]])
    with pytest.raises(NoInverse):
        from_table([[0, 1], [1, 1]])
    with pytest.raises(InputError):
        from_table([[0, 1, 2]])
    with pytest.raises(InputError):
        from_permutations([[0, 0, 1]])


def test_identity_relabelled():
    # Z/3 written with identity 2
    G = from_table([[1, 2, 0], [2, 0, 1], [0, 1, 2]])
    assert G.order == 3 and G.element_order.tolist() == [1, 3, 3]


def test_closure_cap():
    with pytest.raises(ClosureCapExceeded):
        symmetric(8)
    with pytest.raises(ClosureCapExceeded):
        from_permutations(symmetric(5).perms[1:3], 5, cap=3)


def test_conjugacy_classes():
    assert sorted(len(c) for c in conjugacy_classes(S3)) == [1, 2, 3]
    assert sorted(len(c) for c in conjugacy_classes(Q8)) == [1, 1, 2, 2, 2]
    Z6 = CORPUS["Z6"]
    assert conjugacy_classes(Z6) == [[g] for g in range(6)]
    for c in conjugacy_classes(CORPUS["S4"]):
        assert c[0] == min(c)


def test_p_elements():
    assert len(p_elements(S3, 3)) == 3
    assert len(p_elements(S3, 2)) == 4
    assert p_elements(cyclic(9), 2) == [0]
    assert action_level(cyclic(9), 3) == 2
    assert action_level(S3, 2) == 1
    assert action_level(cyclic(5), 3) == 1


def test_commuting_tuples_examples():
    assert commuting_tuples(S3, 1, 3) == [(g,) for g in p_elements(S3, 3)]
    pairs = commuting_tuples(S3, 2, 3)
    assert len(pairs) == 9 and pairs == sorted(pairs)
    assert commuting_tuples(trivial_group(), 3, 2) == [(0, 0, 0)]
    with pytest.raises(BudgetExceeded):
        commuting_tuples(CORPUS["Z4xZ2"], 3, 2, budget=100)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_tuples_match_product_scan(name):
    G = CORPUS[name]
    mul = G.mul.tolist()
    orders = G.element_order.tolist()
    for p in (2, 3):
        for n in (1, 2):
            naive = commuting_tuples_naive(mul, orders, n, p)
            assert commuting_tuples(G, n, p) == naive
            S = tuple_classes(G, n, p)
            orbits = conjugation_orbits_naive(mul, naive)
            assert sorted(len(o) for o in orbits) == sorted(c.size for c in S.classes)
            assert sorted(min(o) for o in orbits) == [c.rep for c in S.classes]


def test_class_count_examples():
    assert len(tuple_classes(S3, 1, 3)) == 2
    assert len(tuple_classes(S3, 2, 3)) == 5
    assert len(tuple_classes(S3, 1, 2)) == 2
    assert len(tuple_classes(Q8, 1, 2)) == 5
    for n in range(4):
        assert len(tuple_classes(trivial_group(), n, 3)) == 1
    assert centralizer_count_oracle(S3, 1, 3) == 2
    assert centralizer_count_oracle(S3, 2, 3) == 5


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_three_counts_agree(name):
    G = CORPUS[name]
    for p in (2, 3):
        p_classes = sum(1 for c in conjugacy_classes(G) if c[0] in set(p_elements(G, p)))
        for n in (1, 2, 3):
            S = tuple_classes(G, n, p)
            assert sum(c.size for c in S.classes) == S.total_tuples
            assert all(G.order % c.size == 0 for c in S.classes)
            assert len(S) == centralizer_count_oracle(G, n, p) == burnside_count(G, n, p)
            if n == 1:
                assert len(S) == p_classes


def test_class_set_json():
    d = tuple_classes(S3, 2, 3).to_json()
    assert d["n"] == 2 and d["p"] == 3
    assert d["classes"][0] == {"rep": [0, 0], "size": 1}
    assert tuple_classes(S3, 2, 3).to_json() == d


def test_matrix_action_examples():
    S = tuple_classes(S3, 2, 3)
    assert matrix_action(S, [[1, 0], [0, 1]]) == list(range(5))
    S1 = tuple_classes(S3, 1, 3)
    assert matrix_action(S1, [[-1]]) == [0, 1]
    swap = matrix_action(S, [[0, 1], [1, 0]])
    reps = [c.rep for c in S.classes]
    fixed = [reps[k] for k in range(5) if swap[k] == k]
    assert len(fixed) == 3
    assert (0, 0) in fixed
    moved = [reps[k] for k in range(5) if swap[k] != k]
    assert len(moved) == 2 and {moved[0][::-1], moved[1][::-1]} == set(moved)
    assert all(0 in t for t in moved)
    with pytest.raises(MatrixNotInvertible):
        matrix_action(S, [[3, 0], [0, 1]])
    with pytest.raises(InputError):
        matrix_action(S, [[1]])


def test_apply_matrix_is_right_action():
    # (t_i) -> (prod_j t_j^M[j][i]); for n=1 this is powering
    Z9 = cyclic(9)
    assert apply_matrix(Z9, (1,), [[4]]) == (4,)
    assert apply_matrix(Z9, (1, 3), [[1, 0], [1, 1]]) == (4, 3)


def test_det_mod():
    assert det_mod([[1, 2], [3, 4]], 5) == 3
    assert det_mod([[2, 0], [0, 2]], 2) == 0
    assert det_mod([], 3) == 1


def test_abelianization():
    Q, proj = abelianization(S3)
    assert Q.order == 2 and Q.is_abelian()
    assert proj[0] == 0 and all(proj[int(S3.mul[a, b])] == Q.mul[proj[a], proj[b]]
                                for a in range(6) for b in range(6))
    Q, _ = abelianization(Q8)
    assert Q.order == 4 and exponent(Q) == 2
    Z = CORPUS["Z4xZ2"]
    Q, proj = abelianization(Z)
    assert Q.order == Z.order and sorted(proj) == list(range(Z.order))
    assert abelianization(CORPUS["A4"])[0].order == 3
    assert abelianization(CORPUS["S4"])[0].order == 2


def test_direct_product():
    G = direct_product(cyclic(3), cyclic(3))
    assert G.order == 9 and G.is_abelian() and exponent(G) == 3
    assert len(tuple_classes(G, 1, 3)) == 9


def test_quaternion():
    assert Q8.element_order.tolist().count(4) == 6
    assert Q8.element_order.tolist().count(2) == 1
    assert quaternion8().mul.tolist() == Q8.mul.tolist()


def test_group_is_immutable_input_copy():
    rows = [[0, 1], [1, 0]]
    G = FiniteGroup(rows)
    rows[0][0] = 1
    assert G.mul.tolist() == [[0, 1], [1, 0]]


@st.composite
def invertible(draw, n, p):
    """A diagonal unit matrix followed by a few elementary row operations."""
    units = [u for u in range(1, 2 * p + 2) if u % p]
    M = [[draw(st.sampled_from(units)) if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 4))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        c = draw(st.integers(-3, 3))
        if i != j:
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


@pytest.fixture(scope="module")
def class_sets():
    return [tuple_classes(CORPUS[g], n, p) for g, n, p in
            [("S3", 2, 3), ("Q8", 2, 2), ("D4", 2, 2), ("Z4xZ2", 3, 2), ("A4", 2, 2),
             ("S4", 2, 3), ("Z6", 3, 3)]]


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_matrix_action_composes(class_sets, data):
    S = data.draw(st.sampled_from(class_sets))
    M1 = data.draw(invertible(S.n, S.p))
    M2 = data.draw(invertible(S.n, S.p))
    perm1 = matrix_action(S, M1)
    perm2 = matrix_action(S, M2)
    perm12 = matrix_action(S, matmul(M1, M2))
    assert perm12 == [perm2[perm1[k]] for k in range(len(S))]
    assert sorted(perm1) == list(range(len(S)))
    # orbit sizes are preserved, so class sizes are permuted
    assert sorted(S.classes[k].size for k in perm1) == sorted(c.size for c in S.classes)


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(1, 6)))
def test_class_count_invariant_under_relabelling(rest):
    # relabel S3 by a permutation fixing 0; counts must not change
    sigma = np.array([0] + list(rest))
    inv = np.argsort(sigma)
    table = sigma[S3.mul[np.ix_(inv, inv)]]
    G = FiniteGroup(table)
    for n in (1, 2, 3):
        for p in (2, 3):
            assert len(tuple_classes(G, n, p)) == len(tuple_classes(S3, n, p))
