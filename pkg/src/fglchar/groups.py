"""Finite groups as Cayley tables, and conjugacy classes of commuting tuples.

Elements are dense indices ``0..m-1`` with ``0`` the identity. Groups given
by permutation generators are enumerated breadth first, so element numbering
(and every canonical representative derived from it) is reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    ClosureCapExceeded,
    InputError,
    MatrixNotInvertible,
    NoIdentity,
    NoInverse,
    NotAssociative,
)

CLOSURE_CAP = 5000
TUPLE_BUDGET = 10**7
ASSOCIATIVITY_CHECK_LIMIT = 200


class FiniteGroup:
    def __init__(self, table, name: str = "G", generators: Sequence[int] | None = None,
                 perms: Sequence[tuple[int, ...]] | None = None, validate: bool = True):
        mul = np.asarray(table, dtype=np.int32)
        m = mul.shape[0]
        if mul.ndim != 2 or mul.shape != (m, m) or m == 0:
            raise InputError("Cayley table must be a nonempty square array")
        if mul.min() < 0 or mul.max() >= m:
            raise InputError("Cayley table entries out of range")
        idx = np.arange(m)
        if not (np.array_equal(mul[0], idx) and np.array_equal(mul[:, 0], idx)):
            raise NoIdentity("element 0 is not a two-sided identity")
        if validate and m <= ASSOCIATIVITY_CHECK_LIMIT:
            if not np.array_equal(_left_assoc(mul), _right_assoc(mul)):
                raise NotAssociative("Cayley table is not associative")
        ident = mul == 0
        if not (ident.any(axis=1).all() and ident.any(axis=0).all()):
            raise NoInverse("some element has no inverse")
        inv = ident.argmax(axis=1).astype(np.int32)
        if not np.array_equal(mul[inv, idx], np.zeros(m, dtype=np.int32)):
            raise NoInverse("left and right inverses differ")
        self.mul = mul
        self.inv = inv
        self.name = name
        self.perms = tuple(perms) if perms is not None else None
        self.generators = tuple(generators) if generators is not None else _greedy_generators(mul)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    @cached_property
    def element_order(self) -> np.ndarray:
        m = self.order
        out = np.zeros(m, dtype=np.int64)
        for g in range(m):
            k, x = 1, g
            while x != 0:
                x = self.mul[x, g]
                k += 1
            out[g] = k
        return out

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, x] = g x g^-1``."""
        return _conj_table(self.mul, self.inv)

    @cached_property
    def commutes(self) -> np.ndarray:
        return self.mul == self.mul.T

    def power(self, g: int, k: int) -> int:
        k %= int(self.element_order[g])
        x = 0
        for _ in range(k):
            x = int(self.mul[x, g])
        return x

    @cached_property
    def power_table(self) -> list[list[int]]:
        """``power_table[g][k] = g^k`` for ``0 <= k < order(g)``."""
        out = []
        for g in range(self.order):
            row, x = [0], g
            while x != 0:
                row.append(x)
                x = int(self.mul[x, g])
            out.append(row)
        return out

    def is_abelian(self) -> bool:
        return bool(self.commutes.all())

    def check_associative(self) -> bool:
        return bool(np.array_equal(_left_assoc(self.mul), _right_assoc(self.mul)))


def _left_assoc(mul):
    # (ab)c indexed [a, b, c]
    return mul[mul, :]


def _right_assoc(mul):
    # a(bc) indexed [a, b, c]
    return mul[np.arange(mul.shape[0])[:, None, None], mul[None, :, :]]


def _conj_table(mul, inv):
    # [g, x] -> (g x) g^-1
    m = mul.shape[0]
    return mul[mul, np.broadcast_to(inv[:, None], (m, m))]


def _greedy_generators(mul) -> tuple[int, ...]:
    m = mul.shape[0]
    gens: list[int] = []
    span = {0}
    for g in range(1, m):
        if g not in span:
            gens.append(g)
            span = _closure(mul, gens)
        if len(span) == m:
            break
    return tuple(gens)


def _closure(mul, gens: Iterable[int]) -> set[int]:
    gens = list(gens)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(mul[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# ---------------------------------------------------------------------------
# construction

def from_table(table, name: str = "G", validate: bool = True) -> FiniteGroup:
    """Group from a Cayley table; the identity is relabelled to index 0."""
    mul = np.asarray(table, dtype=np.int64)
    m = mul.shape[0] if mul.ndim == 2 else 0
    if mul.ndim != 2 or mul.shape != (m, m) or m == 0:
        raise InputError("Cayley table must be a nonempty square array")
    if mul.min() < 0 or mul.max() >= m:
        raise InputError("Cayley table entries out of range")
    idx = np.arange(m)
    e = next((a for a in range(m) if np.array_equal(mul[a], idx) and np.array_equal(mul[:, a], idx)),
             None)
    if e is None:
        raise NoIdentity("no two-sided identity")
    if e != 0:
        perm = np.arange(m)
        perm[0], perm[e] = e, 0          # new label -> old label
        relabel = np.argsort(perm)        # old label -> new label
        mul = relabel[mul[np.ix_(perm, perm)]]
    return FiniteGroup(mul, name, validate=validate)


def from_permutations(generators: Sequence[Sequence[int]], degree: int | None = None,
                      name: str = "G", cap: int = CLOSURE_CAP) -> FiniteGroup:
    """Breadth-first closure of permutations given as 0-based one-line images.

    The product is composition ``(g*h)(i) = g(h(i))``.
    """
    gens = [tuple(int(i) for i in g) for g in generators]
    if degree is None:
        degree = max((len(g) for g in gens), default=0)
    for g in gens:
        if len(g) != degree or sorted(g) != list(range(degree)):
            raise InputError(f"{list(g)} is not a permutation of {degree} points")
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = tuple(x[i] for i in s)
            if y not in index:
                if len(elements) >= cap:
                    raise ClosureCapExceeded(f"closure exceeds {cap} elements")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    P = np.array(elements, dtype=np.int64).reshape(len(elements), degree)
    m = len(elements)
    table = np.empty((m, m), dtype=np.int32)
    for g in range(m):
        comp = P[g][P] if degree else np.zeros((m, 0), dtype=np.int64)  # row h: g(h(i))
        table[g] = [index[tuple(row)] for row in comp.tolist()]
    gen_idx = tuple(index[g] for g in gens)
    return FiniteGroup(table, name, generators=gen_idx, perms=elements, validate=False)


def cyclic(k: int) -> FiniteGroup:
    """``Z/k`` with element ``i`` the i-th power of the generator ``1``."""
    if k > CLOSURE_CAP:
        raise ClosureCapExceeded(f"order {k} exceeds closure cap")
    idx = np.arange(k)
    return FiniteGroup((idx[:, None] + idx[None, :]) % k, f"Z{k}",
                       generators=(1,) if k > 1 else (), validate=False)


def symmetric(k: int) -> FiniteGroup:
    gens = [[1, 0] + list(range(2, k)), list(range(1, k)) + [0]] if k > 1 else []
    return from_permutations(gens, k, f"S{k}")


def alternating4() -> FiniteGroup:
    return from_permutations([[1, 2, 0, 3], [1, 0, 3, 2]], 4, "A4")


def dihedral8() -> FiniteGroup:
    return from_permutations([[1, 2, 3, 0], [0, 3, 2, 1]], 4, "D4")


def quaternion8() -> FiniteGroup:
    """``Q8`` via its regular representation on ``{+-1, +-i, +-j, +-k}``."""
    # points: 0=1 1=i 2=j 3=k 4=-1 5=-i 6=-j 7=-k ; left multiplication
    i_perm = [1, 4, 3, 6, 5, 0, 7, 2]
    j_perm = [2, 7, 4, 1, 6, 3, 0, 5]
    return from_permutations([i_perm, j_perm], 8, "Q8")


def direct_product(G0: FiniteGroup, G1: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """Elements ``(a, b)`` are numbered ``a * |G1| + b``."""
    m0, m1 = G0.order, G1.order
    if m0 * m1 > CLOSURE_CAP:
        raise ClosureCapExceeded("product exceeds closure cap")
    a = np.arange(m0 * m1) // m1
    b = np.arange(m0 * m1) % m1
    table = G0.mul[a[:, None], a[None, :]] * m1 + G1.mul[b[:, None], b[None, :]]
    gens = [g * m1 for g in G0.generators] + list(G1.generators)
    return FiniteGroup(table, name or f"{G0.name}x{G1.name}", generators=gens, validate=False)


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], "1", generators=())


def load_group(desc: dict, validate: bool = True) -> FiniteGroup:
    """Group from its JSON description (permutation generators or a table)."""
    name = desc.get("name", "G")
    if "generators" in desc:
        return from_permutations(desc["generators"], desc.get("perm_degree"), name)
    if "table" in desc:
        if "order" in desc and len(desc["table"]) != desc["order"]:
            raise InputError("declared order does not match table size")
        return from_table(desc["table"], name, validate=validate)
    raise InputError("group JSON needs 'generators' or 'table'")


def group_to_json(G: FiniteGroup) -> dict:
    return {"name": G.name, "order": G.order, "table": G.mul.tolist()}


# ---------------------------------------------------------------------------
# classes, centralizers, p-elements

def conjugacy_classes(G: FiniteGroup, subset: Iterable[int] | None = None) -> list[list[int]]:
    """Conjugation orbits (within ``subset``, if given, which must be a subgroup)."""
    H = sorted(subset) if subset is not None else list(range(G.order))
    seen: set[int] = set()
    classes = []
    for x in H:
        if x in seen:
            continue
        orb = sorted({int(G.conj[h, x]) for h in H})
        seen.update(orb)
        classes.append(orb)
    return classes


def centralizer(G: FiniteGroup, g: int, subset: Iterable[int] | None = None) -> list[int]:
    H = range(G.order) if subset is None else subset
    return sorted(h for h in H if G.commutes[g, h])


def is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def p_elements(G: FiniteGroup, p: int) -> list[int]:
    return [g for g in range(G.order) if is_p_power(int(G.element_order[g]), p)]


def action_level(G: FiniteGroup, p: int) -> int:
    """Least ``r >= 1`` with ``p^r`` at least every p-element order."""
    top = max(int(G.element_order[g]) for g in p_elements(G, p))
    r = 1
    while p ** r < top:
        r += 1
    return r


def commuting_tuples(G: FiniteGroup, n: int, p: int, budget: int = TUPLE_BUDGET) -> list[tuple[int, ...]]:
    """Ordered n-tuples of pairwise commuting p-elements, lexicographically."""
    P = np.array(p_elements(G, p), dtype=np.int64)
    C = G.commutes
    out: list[tuple[int, ...]] = []
    visits = 0

    def rec(prefix: list[int], mask: np.ndarray):
        nonlocal visits
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        cands = P[mask]
        visits += len(cands)
        if visits > budget:
            raise BudgetExceeded(f"more than {budget} candidate visits")
        for g in cands.tolist():
            rec(prefix + [g], mask & C[g, P])

    rec([], np.ones(len(P), dtype=bool))
    return out


@dataclass
class TupleClass:
    rep: tuple[int, ...]
    size: int


@dataclass
class TupleClassSet:
    group: FiniteGroup
    n: int
    p: int
    classes: list[TupleClass]
    total_tuples: int
    index: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.classes)

    def class_of(self, t: Sequence[int]) -> int:
        return self.index[tuple(t)]

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p,
                "classes": [{"rep": list(c.rep), "size": c.size} for c in self.classes]}


def tuple_classes(G: FiniteGroup, n: int, p: int, budget: int = TUPLE_BUDGET) -> TupleClassSet:
    """Orbits of simultaneous conjugation on commuting p-element n-tuples."""
    tuples = commuting_tuples(G, n, p, budget)
    index: dict[tuple[int, ...], int] = {}
    orbits: list[list[tuple[int, ...]]] = []
    CJ = G.conj
    for t in tuples:
        if t in index:
            continue
        if n:
            imgs = CJ[:, list(t)]
            orb = sorted(set(map(tuple, imgs.tolist())))
        else:
            orb = [()]
        for s in orb:
            index[s] = -1
        orbits.append(orb)
    orbits.sort(key=lambda o: o[0])
    classes = []
    for k, orb in enumerate(orbits):
        for s in orb:
            index[s] = k
        classes.append(TupleClass(orb[0], len(orb)))
    return TupleClassSet(G, n, p, classes, len(tuples), index)


def centralizer_count_oracle(G: FiniteGroup, n: int, p: int, budget: int = TUPLE_BUDGET) -> int:
    """``|C_{n,p}(G)| = sum over p-classes [g] of |C_{n-1,p}(C_G(g))|``."""
    pset = set(p_elements(G, p))
    visits = 0

    def count(H: list[int], k: int) -> int:
        nonlocal visits
        if k == 0:
            return 1
        total = 0
        for cls in conjugacy_classes(G, H):
            g = cls[0]
            if g not in pset:
                continue
            visits += 1
            if visits > budget:
                raise BudgetExceeded("centralizer recursion exceeded budget")
            total += count(centralizer(G, g, H), k - 1)
        return total

    return count(list(range(G.order)), n)


def burnside_count(G: FiniteGroup, n: int, p: int, tuples: Sequence | None = None) -> int:
    """Orbit count as the average number of tuples fixed by each element."""
    T = np.array(tuples if tuples is not None else commuting_tuples(G, n, p), dtype=np.int64)
    if n == 0:
        return 1
    C = G.commutes
    fixed = sum(int(C[g][T].all(axis=1).sum()) for g in range(G.order))
    if fixed % G.order:  # pragma: no cover
        raise ArithmeticError("Burnside sum not divisible by |G|")
    return fixed // G.order


# ---------------------------------------------------------------------------
# matrix action

def det_mod(M: Sequence[Sequence[int]], m: int) -> int:
    """Determinant mod a prime ``m`` by elimination."""
    A = [[x % m for x in row] for row in M]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % m
        inv = pow(A[c][c], -1, m)
        for r in range(c + 1, n):
            if A[r][c]:
                fac = A[r][c] * inv % m
                A[r] = [(a - fac * b) % m for a, b in zip(A[r], A[c])]
    return det % m


def apply_matrix(G: FiniteGroup, t: Sequence[int], M: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """``(t_i) -> (prod_j t_j^(M[j][i]))`` for commuting entries."""
    pt = G.power_table
    n = len(t)
    out = []
    for i in range(n):
        x = 0
        for j in range(n):
            row = pt[t[j]]
            e = M[j][i] % len(row)
            if e:
                x = int(G.mul[x, row[e]])
        out.append(x)
    return tuple(out)


def matrix_action(S: TupleClassSet, M: Sequence[Sequence[int]], r: int | None = None) -> list[int]:
    """Permutation of ``S.classes`` induced by precomposition with ``M``.

    ``perm[k]`` is the class of ``M`` applied to the representative of class
    ``k``. The action is on the right: the permutation for ``M1 @ M2`` is
    that of ``M1`` followed by that of ``M2``.
    """
    G, n, p = S.group, S.n, S.p
    M = [[int(x) for x in row] for row in M]
    if len(M) != n or any(len(row) != n for row in M):
        raise InputError(f"matrix must be {n}x{n}")
    if n and det_mod(M, p) == 0:
        raise MatrixNotInvertible("matrix is not invertible mod p")
    if r is not None and p ** r < max(int(G.element_order[g]) for g in p_elements(G, p)):
        raise InputError(f"p^{r} is below the exponent of the p-elements")
    perm = [S.index[apply_matrix(G, c.rep, M)] for c in S.classes]
    if sorted(perm) != list(range(len(S.classes))):
        raise MatrixNotInvertible("induced map on classes is not a bijection")
    return perm


# ---------------------------------------------------------------------------
# abelianization

def subgroup_closure(G: FiniteGroup, gens: Iterable[int]) -> list[int]:
    return sorted(_closure(G.mul, gens))


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, list[int]]:
    """Quotient by the commutator subgroup and the projection onto it."""
    m = G.order
    comms = {int(G.mul[G.mul[a, b], G.mul[G.inv[a], G.inv[b]]]) for a in range(m) for b in range(m)}
    K = subgroup_closure(G, comms)
    proj = [-1] * m
    reps: list[int] = []
    for g in range(m):
        if proj[g] >= 0:
            continue
        label = len(reps)
        reps.append(g)
        for k in K:
            proj[int(G.mul[g, k])] = label
    table = [[proj[int(G.mul[a, b])] for b in reps] for a in reps]
    Q = FiniteGroup(table, f"{G.name}^ab", generators=sorted({proj[g] for g in G.generators} - {0}),
                    validate=False)
    return Q, proj


def exponent(G: FiniteGroup) -> int:
    e = 1
    for k in G.element_order.tolist():
        e = e * k // gcd(e, k)
    return e


def corpus_groups() -> dict[str, FiniteGroup]:
    """The seven groups the acceptance sweep runs over."""
    return {
        "S3": symmetric(3),
        "S4": symmetric(4),
        "A4": alternating4(),
        "D4": dihedral8(),
        "Q8": quaternion8(),
        "Z6": cyclic(6),
        "Z4xZ2": direct_product(cyclic(4), cyclic(2), "Z4xZ2"),
    }
