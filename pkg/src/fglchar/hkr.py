"""Homomorphisms from ``(o_L, +)`` to a finite group, up to conjugacy.

A continuous additive homomorphism ``o_L -> G`` is determined by the images
``(phi(b_1), ..., phi(b_n))`` of the tower basis, which must be pairwise
commuting elements of p-power order. The units of ``o_L`` act by
``phi -> phi o (alpha *)``; on tuples this is precomposition with the
multiplication matrix of ``alpha``. Orbits of that action are the closed
points of an étale scheme over ``L``; the degree of a point is the size of
its orbit.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .arith import (
    DEFAULT_ENUMERATION_CAP,
    LocalField,
    frobenius_matrix,
    trace,
    trace_pairing_matrix,
    unit_group,
)
from .errors import CapExceeded, CheckFailed, InputError, NotACharacter, RamifiedUnsupported
from .groups import (
    FiniteGroup,
    TupleClassSet,
    abelianization,
    action_level,
    apply_matrix,
    commuting_tuples,
    conjugacy_classes,
    cyclic,
    direct_product,
    matrix_action,
    p_elements,
    tuple_classes,
)
from .report import Report, combine

CHARACTER_CAP = 64


@dataclass
class HomModel:
    field: LocalField
    group: FiniteGroup
    level: int
    classes: TupleClassSet

    @property
    def basis(self):
        return self.field.with_precision(self.level).basis()


def hom_model(field: LocalField, G: FiniteGroup, level: int | None = None) -> HomModel:
    r = action_level(G, field.p) if level is None else level
    if field.p ** r < max(int(G.element_order[g]) for g in p_elements(G, field.p)):
        raise InputError(f"level {r} does not kill every p-element")
    return HomModel(field, G, r, tuple_classes(G, field.n, field.p))


def hom_classes(field: LocalField, G: FiniteGroup) -> TupleClassSet:
    """``Hom(o_L, G) / conj`` modelled as classes of commuting n-tuples."""
    return tuple_classes(G, field.n, field.p)


def rank(field: LocalField, G: FiniteGroup) -> int:
    return len(hom_classes(field, G))


# ---------------------------------------------------------------------------
# orbit decompositions

@dataclass
class Point:
    rep: tuple[int, ...]
    degree: int
    stabilizer_order: int
    members: list[int] = dc_field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {"rep": list(self.rep), "degree": self.degree,
                "stabilizer_order": self.stabilizer_order}


@dataclass
class EtaleDecomposition:
    field: LocalField
    group: FiniteGroup
    level: int
    points: list[Point]
    acting_group_order: int
    total_classes: int
    refinement: str = "none"

    @property
    def degrees(self) -> list[int]:
        return [pt.degree for pt in self.points]

    def to_json(self) -> dict:
        from .io import field_to_json
        return {"field": field_to_json(self.field), "group": self.group.name,
                "level": self.level, "points": [pt.to_json() for pt in self.points],
                "acting_group_order": self.acting_group_order,
                "total_classes": self.total_classes, "refinement": self.refinement}


def check_well_defined(S: TupleClassSet, M: Sequence[Sequence[int]]) -> int | None:
    """First class whose members do not all land in one class, else None."""
    G = S.group
    image: dict[int, int] = {}
    for t, k in S.index.items():
        c = S.index[apply_matrix(G, t, M)]
        if image.setdefault(k, c) != c:
            return k
    return None


def _orbits(nclasses: int, perms: Sequence[Sequence[int]]) -> list[list[int]]:
    seen = [False] * nclasses
    orbits = []
    for k in range(nclasses):
        if seen[k]:
            continue
        orb, stack = {k}, [k]
        seen[k] = True
        while stack:
            x = stack.pop()
            for perm in perms:
                y = perm[x]
                if not seen[y]:
                    seen[y] = True
                    orb.add(y)
                    stack.append(y)
        orbits.append(sorted(orb))
    return orbits


def _decomposition(field, G, S, r, perms, group_order, refinement, stabilizer_counts=None):
    points = []
    for orb in _orbits(len(S), perms):
        k = orb[0]
        if stabilizer_counts is not None:
            stab = sum(1 for perm in perms if perm[k] == k)
            if stab * len(orb) != group_order:
                raise CheckFailed(f"orbit-stabilizer fails at class {k}")
        else:
            stab = group_order // len(orb)
        points.append(Point(S.classes[k].rep, len(orb), stab, orb))
    points.sort(key=lambda pt: (pt.degree, pt.rep))
    return EtaleDecomposition(field, G, r, points, group_order, len(S), refinement)


def unit_perms(field: LocalField, S: TupleClassSet, r: int, check: bool = True,
               cap: int = DEFAULT_ENUMERATION_CAP) -> list[list[int]]:
    """Permutation of classes for every unit of ``o_L / p^r``."""
    U = unit_group(field, r, cap)
    perms = []
    for C in U.matrices:
        if check:
            bad = check_well_defined(S, C)
            if bad is not None:
                raise CheckFailed(f"unit action not defined on class {bad}")
        perms.append(matrix_action(S, C))
    return perms


def unit_orbits(field: LocalField, G: FiniteGroup, level: int | None = None,
                check: bool = True, cap: int = DEFAULT_ENUMERATION_CAP) -> EtaleDecomposition:
    """Closed points of ``C_L G``: orbits of ``(o_L/p^r)^x`` acting on classes."""
    model = hom_model(field, G, level)
    perms = unit_perms(field, model.classes, model.level, check, cap)
    # every unit is listed, so stabilizers are counted directly
    return _decomposition(field, G, model.classes, model.level, perms, len(perms), "none", True)


def frobenius_orbits(field: LocalField, G: FiniteGroup, level: int | None = None,
                     cap: int = DEFAULT_ENUMERATION_CAP) -> EtaleDecomposition:
    """Orbits once the Frobenius of an unramified field is added to the units."""
    if not field.is_unramified:
        raise RamifiedUnsupported("Frobenius refinement needs an unramified field")
    model = hom_model(field, G, level)
    S, r = model.classes, model.level
    perms = unit_perms(field, S, r, True, cap)
    frob = frobenius_matrix(field.with_precision(r))
    if check_well_defined(S, frob) is not None:
        raise CheckFailed("Frobenius action not defined on classes")
    fperm = matrix_action(S, frob)
    # units and Frobenius powers generate a group of order |U| * f
    return _decomposition(field, G, S, r, perms + [fperm], len(perms) * field.f, "frobenius")


def is_refinement(fine: EtaleDecomposition, coarse: EtaleDecomposition) -> bool:
    """Every orbit of ``fine`` lies inside one orbit of ``coarse``."""
    where = {}
    for i, pt in enumerate(coarse.points):
        for k in pt.members:
            where[k] = i
    return all(len({where[k] for k in pt.members}) == 1 for pt in fine.points)


# ---------------------------------------------------------------------------
# product formula and cyclic targets

def product_check(field: LocalField, G0: FiniteGroup, G1: FiniteGroup,
                  cap: int = DEFAULT_ENUMERATION_CAP) -> Report:
    """Compare ``C_L(G0 x G1)`` with the diagonal action on ``C_L G0 x C_L G1``."""
    p, n = field.p, field.n
    G = direct_product(G0, G1)
    m1 = G1.order
    r = action_level(G, p)
    S, S0, S1 = (tuple_classes(H, n, p) for H in (G, G0, G1))

    # class bijection induced by the coordinate projections
    pair_of = []
    for c in S.classes:
        a = tuple(x // m1 for x in c.rep)
        b = tuple(x % m1 for x in c.rep)
        pair_of.append((S0.class_of(a), S1.class_of(b)))
    if len(set(pair_of)) != len(S) or len(S) != len(S0) * len(S1):
        return Report("product formula", False, "class bijection", None,
                      {"classes": [len(S), len(S0), len(S1)]})

    U = unit_group(field, r, cap)
    perms, diag = [], []
    pairs = {pc: i for i, pc in enumerate(sorted(pair_of))}
    for C in U.matrices:
        perm = matrix_action(S, C)
        p0, p1 = matrix_action(S0, C), matrix_action(S1, C)
        for k, (a, b) in enumerate(pair_of):
            if pair_of[perm[k]] != (p0[a], p1[b]):
                return Report("product formula", False, f"equivariance at class {k}")
        perms.append(perm)
        diag.append([pairs[(p0[a], p1[b])] for a, b in sorted(pair_of)])
    prod_sizes = sorted(len(o) for o in _orbits(len(S), perms))
    diag_sizes = sorted(len(o) for o in _orbits(len(pairs), diag))
    ok = prod_sizes == diag_sizes
    return Report("product formula", ok, None if ok else "orbit sizes", None,
                  {"group": G.name, "orbit_sizes": prod_sizes, "diagonal_sizes": diag_sizes})


def cyclic_hom_count(field: LocalField, nu: int, budget: int = 10**7) -> Report:
    """``|Hom(o_L, Z/p^nu)|`` against ``p^(nu n)``.

    For unramified fields the tuple count is matched with the ``p^nu``
    torsion of ``L/o_L`` through ``z -> (Tr(z b_i))``, which must be a
    bijection onto the tuples.
    """
    p, n = field.p, field.n
    target = p ** (nu * n)
    G = cyclic(p ** nu)
    tuples = commuting_tuples(G, n, p, budget)
    details = {"nu": nu, "homs": len(tuples), "expected": target}
    ok = len(tuples) == target
    if ok and field.is_unramified:
        F = field.with_precision(nu)
        images = set()
        for z in F.elements(budget):
            images.add(tuple(trace(z * b) % F.modulus for b in F.basis()))
        details["trace_images"] = len(images)
        ok = images == set(tuples)
    return Report(f"Hom(o_L, Z/{p}^{nu})", ok, None if ok else "count", None, details)


# ---------------------------------------------------------------------------
# characters and their pullback

@dataclass(frozen=True)
class Character:
    """A homomorphism ``G -> Q/Z`` given on generators; values lie in ``[0, 1)``."""
    group: FiniteGroup
    generator_images: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __call__(self, g: int) -> Fraction:
        return self.values[g]

    def __add__(self, other: "Character") -> "Character":
        return character(self.group, [(a + b) % 1 for a, b in
                                      zip(self.generator_images, other.generator_images)])

    def to_json(self) -> dict:
        return {"generator_images": [{"num": v.numerator, "den": v.denominator}
                                     for v in self.generator_images]}


def character(G: FiniteGroup, images: Sequence) -> Character:
    """Extend generator images to all of ``G``; raise NotACharacter if impossible."""
    gens = G.generators
    imgs = tuple(Fraction(v) % 1 for v in images)
    if len(imgs) != len(gens):
        raise NotACharacter(f"expected {len(gens)} generator images, got {len(imgs)}")
    values: list[Fraction | None] = [None] * G.order
    values[0] = Fraction(0)
    stack = [0]
    while stack:
        x = stack.pop()
        for s, v in zip(gens, imgs):
            y = int(G.mul[x, s])
            w = (values[x] + v) % 1
            if values[y] is None:
                values[y] = w
                stack.append(y)
            elif values[y] != w:
                raise NotACharacter("generator images do not extend to a homomorphism")
    if any(v is None for v in values):
        raise NotACharacter("generators do not generate the group")
    return Character(G, imgs, tuple(values))


def all_characters(G: FiniteGroup, cap: int = CHARACTER_CAP) -> list[Character]:
    """Every homomorphism ``G -> Q/Z`` (the abelianization must be small)."""
    Q, _ = abelianization(G)
    if Q.order > cap:
        raise CapExceeded(f"abelianization of order {Q.order} exceeds {cap}")
    orders = [int(G.element_order[s]) for s in G.generators]
    out, seen = [], set()

    def rec(prefix):
        if len(prefix) == len(orders):
            try:
                chi = character(G, prefix)
            except NotACharacter:
                return
            if chi.values not in seen:
                seen.add(chi.values)
                out.append(chi)
            return
        k = orders[len(prefix)]
        for j in range(k):
            rec(prefix + [Fraction(j, k)])

    rec([])
    return out


def character_pullback(chi: Character, S: TupleClassSet) -> list[tuple[Fraction, ...]]:
    """The section ``class -> (chi(g_1), ..., chi(g_n))``, checked on every member."""
    table = [tuple(chi(g) for g in c.rep) for c in S.classes]
    for t, k in S.index.items():
        if tuple(chi(g) for g in t) != table[k]:
            raise CheckFailed(f"character section not constant on class {k}")
    return table


def _inverse_mod(T: Sequence[Sequence[int]], m: int, p: int) -> list[list[int]]:
    """Inverse of an integer matrix mod ``m = p^s`` by Gauss-Jordan."""
    n = len(T)
    A = [[x % m for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(T)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            raise CheckFailed("trace form is not perfect")
        A[c], A[piv] = A[piv], A[c]
        inv = pow(A[c][c], -1, m)
        A[c] = [x * inv % m for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                fac = A[r][c]
                A[r] = [(x - fac * y) % m for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def equivariance_check(field: LocalField, chi: Character, S: TupleClassSet | None = None,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> Report:
    """``f(alpha . phi) = alpha . f(phi)`` in ``L/o_L`` for every unit ``alpha``.

    ``f(phi) = (chi(phi(b_i)))_i`` in ``(Q_p/Z_p)^n`` is sent to ``z`` with
    ``Tr(z b_i) = f(phi)_i`` using the inverse of the trace matrix.
    """
    if not field.is_unramified:
        raise RamifiedUnsupported("the trace identification needs an unramified field")
    G, p = chi.group, field.p
    S = S if S is not None else hom_classes(field, G)
    r = action_level(G, p)
    m = p ** r
    Tinv = _inverse_mod(trace_pairing_matrix(field, r), m, p)
    n = field.n

    def to_L(w):  # w in (p^-r Z / Z)^n as integers mod p^r
        return tuple(sum(Tinv[k][i] * w[i] for i in range(n)) % m for k in range(n))

    def scaled(vals):
        out = []
        for v in vals:
            if m % v.denominator:
                raise CheckFailed(f"value {v} is not p^{r}-torsion")
            out.append(int(v * m) % m)
        return out

    units = unit_group(field, r, cap)
    checked = 0
    for alpha, C in zip(units.elements, units.matrices):
        for c in S.classes:
            z = to_L(scaled(chi(g) for g in c.rep))
            moved = apply_matrix(G, c.rep, C)
            lhs = to_L(scaled(chi(g) for g in moved))
            rhs = tuple(sum(C[j][i] * z[i] for i in range(n)) % m for j in range(n))
            checked += 1
            if lhs != rhs:
                return Report("equivariance", False,
                              {"unit": list(alpha.coords), "class": list(c.rep)}, r,
                              {"checked": checked})
    return Report("equivariance", True, None, r, {"checked": checked, "units": len(units)})


def additivity_check(chars: Sequence[Character], S: TupleClassSet) -> Report:
    """The pullback of ``chi1 + chi2`` is the sum of the pullbacks."""
    tables = [character_pullback(c, S) for c in chars]
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            summed = character_pullback(a + b, S)
            expected = [tuple((x + y) % 1 for x, y in zip(u, v))
                        for u, v in zip(tables[i], tables[j])]
            if summed != expected:
                return Report("pullback additivity", False, {"pair": [i, j]})
    return Report("pullback additivity", True, None, None, {"characters": len(chars)})


def p_class_count(G: FiniteGroup, p: int) -> int:
    """Independent count of conjugacy classes of p-power order."""
    pset = set(p_elements(G, p))
    return sum(1 for cls in conjugacy_classes(G) if cls[0] in pset)


def level_stability(field: LocalField, G: FiniteGroup) -> Report:
    """Orbit-size multisets agree at the minimal level and one above it."""
    r = action_level(G, field.p)
    a = unit_orbits(field, G, r)
    b = unit_orbits(field, G, r + 1)
    ok = Counter(a.degrees) == Counter(b.degrees) and a.total_classes == b.total_classes
    return Report("level stability", ok, None if ok else f"level {r + 1}", None,
                  {"level": r, "degrees": sorted(a.degrees), "bumped": sorted(b.degrees)})


def rank_report(field: LocalField, G: FiniteGroup) -> Report:
    d = unit_orbits(field, G)
    total = sum(d.degrees)
    ok = total == d.total_classes and all(d.acting_group_order % k == 0 for k in d.degrees)
    return combine("rank", [Report("degrees sum to class count", ok, None if ok else "sum", None,
                                   {"rank": d.total_classes, "degrees": d.degrees})])
