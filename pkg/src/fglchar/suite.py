"""Registered end-to-end checks, run by ``fglchar suite``.

Each check returns a :class:`Report`. Checks run in registration order and
their JSON never contains timings, so two runs on the same corpus produce
identical bytes.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from .arith import NumberFieldRing, make_field, qp, unramified_field
from .errors import FGLCharError, NonUnitScale, NotPTypical
from .fgl import (
    additive_log,
    araki_coordinates,
    check_axioms,
    compare,
    genus_value,
    hazewinkel_law,
    hazewinkel_log,
    honda_log,
    integral_g,
    multiplicative_law,
    rescale,
    rescale_graded_check,
    torsion_order,
    verify_functional_equation,
    verify_p_corollary,
    verify_ring_hom,
)
from .groups import (
    FiniteGroup,
    burnside_count,
    centralizer_count_oracle,
    cyclic,
    quaternion8,
    symmetric,
    tuple_classes,
)
from .hkr import (
    additivity_check,
    all_characters,
    cyclic_hom_count,
    equivariance_check,
    hom_classes,
    level_stability,
    p_class_count,
    product_check,
    rank,
    unit_orbits,
)
from .lubin_tate import lubin_tate_law, standard_series, uniformizer_series, verify_lubin_tate
from .report import Report, combine
from .series import Series

FGL_CORPUS = [(2, 1), (2, 2), (3, 1), (5, 1)]
LAW_CORPUS = [(2, 1), (3, 1), (2, 2)]


@dataclass
class Context:
    fields: dict
    groups: dict[str, FiniteGroup]
    load_errors: dict[str, str]


@dataclass
class Check:
    name: str
    area: str
    run: Callable[[Context], Report]


def _expect(name, got, want) -> Report:
    ok = got == want
    return Report(name, ok, None if ok else f"got {got}, expected {want}",
                  details={"value": got})


# formal groups ---------------------------------------------------------------

def check_functional_equation(ctx) -> Report:
    parts = []
    for p, n in FGL_CORPUS:
        parts.append(verify_functional_equation(hazewinkel_log(p, n, 50), p, p ** n, 50))
        parts[-1].check = f"functional equation ({p},{n})"
        q = p ** n
        for label, log in (("Honda", honda_log(p, n, 50)), ("additive", additive_log(p, 50))):
            r = verify_functional_equation(log, p, q, 50)
            parts.append(_expect(f"{label} log fails at degree q ({p},{n})", r.first_failure, q))
    return combine("functional equation", parts)


def check_integrality_of_g(ctx) -> Report:
    parts = []
    for p, n in FGL_CORPUS:
        g, rep = integral_g(hazewinkel_log(p, n, 50), p)
        rep.check = f"integrality of g ({p},{n})"
        parts.append(rep)
        if (p, n) == (2, 1):
            parts.append(_expect("g coefficient of X^2", g.coeff(2), Fraction(-1)))
            parts.append(_expect("g coefficient of X^4", g.coeff(4), Fraction(2, 7)))
    return combine("integrality of g", parts)


def check_law_axioms(ctx) -> Report:
    parts = []
    for p, n in LAW_CORPUS:
        F = hazewinkel_law(p, n, 20)  # raises on a non-integral coefficient
        rep = check_axioms(F)
        rep.check = f"law axioms ({p},{n})"
        parts.append(rep)
        if (p, n) == (2, 1):
            low = F.law.truncate(3)
            want = Series(low.ring, 2, 3, {(1, 0): 1, (0, 1): 1, (1, 1): 1, (2, 1): 1, (1, 2): 1})
            parts.append(_expect("(2,1) law through degree 3", low == want, True))
    return combine("law integrality and axioms", parts)


def check_p_series(ctx) -> Report:
    parts = []
    for p, n in LAW_CORPUS:
        F = hazewinkel_law(p, n, 20)
        rep = verify_p_corollary(F)
        rep.check = f"[p] = pX +F X^q ({p},{n})"
        parts.append(rep)
        parts.append(_expect(f"torsion order ({p},{n}), r=1", torsion_order(F, 1), p ** n))
    parts.append(_expect("torsion order (2,1), r=2", torsion_order(hazewinkel_law(2, 1, 20), 2), 4))
    return combine("p-series corollary", parts)


def check_endomorphisms(ctx) -> Report:
    parts = []
    for p, n in LAW_CORPUS:
        F = hazewinkel_law(p, n, 20)
        vals = sorted({0, 1, -1, 2, 3, p, 1 + p})
        for a in vals:
            for b in vals:
                parts.append(verify_ring_hom(F, a, b, 20))
    F = hazewinkel_law(2, 2, 20)
    x = NumberFieldRing.of_field(F.field).x
    for a, b in [(x, x), (x, 1 + x), (1 + x, 1 + x), (x, 2), (x, -1), (x, 3)]:
        parts.append(verify_ring_hom(F, a, b, 20))
    return combine("endomorphism ring", parts)


def check_araki(ctx) -> Report:
    parts = []
    for p, n in LAW_CORPUS:
        F = hazewinkel_law(p, n, 20)
        coords = araki_coordinates(F, n + 1)
        want = [p] + [0] * (n - 1) + [1, 0]
        parts.append(_expect(f"Araki coordinates ({p},{n})", coords.values, want))
    try:
        araki_coordinates(multiplicative_law(2, 8), 3)
        parts.append(Report("multiplicative law rejected", False, "accepted"))
    except NotPTypical:
        parts.append(Report("multiplicative law rejected", True))
    return combine("Araki coordinates", parts)


def check_graded_rescale(ctx) -> Report:
    parts = []
    for p, n in LAW_CORPUS:
        F = hazewinkel_law(p, n, 20)
        rep = rescale_graded_check(F, [1, 3, 1 + p], 20)
        rep.check = f"graded rescale ({p},{n})"
        parts.append(rep)
    try:
        rescale(hazewinkel_law(2, 1, 8), 0)
        parts.append(Report("u=0 rejected", False, "accepted"))
    except NonUnitScale:
        parts.append(Report("u=0 rejected", True))
    return combine("graded rescale", parts)


def check_genus(ctx) -> Report:
    parts = [
        _expect("genus (2,1) CP1", genus_value(2, 1, 1).value, Fraction(-1)),
        _expect("genus (2,1) CP2", genus_value(2, 1, 2).value, Fraction(0)),
        _expect("genus (2,1) CP3", genus_value(2, 1, 3).value, Fraction(1, 7)),
        _expect("genus (3,1) CP2", genus_value(3, 1, 2).value, Fraction(-1, 8)),
    ]
    for p, n in FGL_CORPUS:
        log = hazewinkel_log(p, n, 41)
        bad = [m for m in range(41)
               if genus_value(p, n, m).value != (m + 1) * log.coeff(m + 1)
               or not genus_value(p, n, m).is_integral()]
        parts.append(Report(f"genus = (m+1) log coefficient ({p},{n})", not bad,
                            bad[0] if bad else None))
    return combine("genus", parts)


# Lubin-Tate -------------------------------------------------------------------

def check_lubin_tate(ctx) -> Report:
    parts = []
    for p in (2, 3):
        K = qp(p)
        f = uniformizer_series(K, [0] + [comb(p, k) for k in range(1, p + 1)], 16)
        F = lubin_tate_law(K, f, 16)
        ring = F.ring
        mult = Series(ring, 2, 16, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
        bad = compare(F.law, mult, F.precision_achieved)
        parts.append(Report(f"(1+X)^{p} - 1 gives X+Y+XY", bad is None, bad, F.precision_achieved))
    fields = [qp(2), qp(3), unramified_field(2, 2)]
    for K in fields:
        F = lubin_tate_law(K, standard_series(K, 16), 16)
        rep = verify_lubin_tate(F)
        rep.check = f"Lubin-Tate pX + X^q over {K.label()}"
        parts.append(rep)
        parts.append(Report(f"precision >= 8 over {K.label()}", F.precision_achieved >= 8, None,
                            F.precision_achieved))
    R = make_field(2, 1, (0, 1), 2, [-2, 0, 1], name="Q2(sqrt2)")
    F = lubin_tate_law(R, standard_series(R, 16), 16)
    rep = verify_lubin_tate(F)
    rep.check = "Lubin-Tate over Q2(sqrt2)"
    parts.append(rep)
    parts.append(Report("precision >= 8 over Q2(sqrt2)", F.precision_achieved >= 8, None,
                        F.precision_achieved))
    return combine("Lubin-Tate", parts)


# groups and characters -----------------------------------------------------------

def check_corpus(ctx) -> Report:
    parts = [Report(f"load {k}", False, v) for k, v in sorted(ctx.load_errors.items())]
    parts += [Report(f"load {k}", True, details={"order": G.order})
              for k, G in sorted(ctx.groups.items())]
    return combine("corpus validation", parts)


def check_group_counts(ctx) -> Report:
    S3, Q8 = symmetric(3), quaternion8()
    parts = [
        _expect("|C_1,3(S3)|", len(tuple_classes(S3, 1, 3)), 2),
        _expect("|C_2,3(S3)|", len(tuple_classes(S3, 2, 3)), 5),
        _expect("|C_1,2(S3)|", len(tuple_classes(S3, 1, 2)), 2),
        _expect("|C_1,2(Q8)|", len(tuple_classes(Q8, 1, 2)), 5),
    ]
    start = time.perf_counter()
    mismatches = []
    for name, G in sorted(ctx.groups.items()):
        for n in range(4):
            for p in (2, 3):
                S = tuple_classes(G, n, p)
                counts = (len(S), centralizer_count_oracle(G, n, p),
                          burnside_count(G, n, p))
                if len(set(counts)) != 1:
                    mismatches.append([name, n, p, *counts])
    elapsed = time.perf_counter() - start
    parts.append(Report("orbit = centralizer = Burnside", not mismatches,
                        mismatches[0] if mismatches else None))
    parts.append(Report("sweep under 60 s", elapsed < 60, None))
    return combine("group counts", parts)


def check_etale(ctx) -> Report:
    Q2, Q3, Q4 = qp(2), qp(3), unramified_field(2, 2)
    parts = [
        _expect("(Q3, Z/3) degrees", sorted(unit_orbits(Q3, cyclic(3)).degrees), [1, 2]),
        _expect("(Q2, Z/4) degrees", sorted(unit_orbits(Q2, cyclic(4)).degrees), [1, 1, 2]),
        _expect("(Q4, Z/2) degrees", sorted(unit_orbits(Q4, cyclic(2)).degrees), [1, 3]),
    ]
    bad_sum, bad_level = [], []
    for fname, K in sorted(ctx.fields.items()):
        for gname, G in sorted(ctx.groups.items()):
            d = unit_orbits(K, G)
            if sum(d.degrees) != d.total_classes or \
                    any(d.acting_group_order % k for k in d.degrees):
                bad_sum.append([fname, gname])
            if not level_stability(K, G).passed:
                bad_level.append([fname, gname])
    parts.append(Report("degrees sum to class count", not bad_sum, bad_sum[0] if bad_sum else None))
    parts.append(Report("stable under level bump", not bad_level,
                        bad_level[0] if bad_level else None))
    return combine("étale decompositions", parts)


def check_cyclic_and_product(ctx) -> Report:
    parts = []
    fields = dict(ctx.fields)
    fields.setdefault("ram2", make_field(2, 1, (0, 1), 2, [-2, 0, 1], name="Q2(sqrt2)"))
    for fname, K in sorted(fields.items()):
        nu = 1
        while K.p ** (nu * K.n) <= 3 ** 6:
            rep = cyclic_hom_count(K, nu)
            rep.check = f"Hom(o_L, Z/{K.p}^{nu}) over {fname}"
            parts.append(rep)
            nu += 1
    parts.append(product_check(qp(3), cyclic(3), cyclic(3)))
    parts.append(product_check(qp(2), symmetric(3), cyclic(2)))
    return combine("cyclic homs and product formula", parts)


def check_artin_atiyah(ctx) -> Report:
    bad = []
    for name, G in sorted(ctx.groups.items()):
        for p in (2, 3):
            if rank(qp(p), G) != p_class_count(G, p):
                bad.append([name, p])
    return Report("rank over Q_p = p-power classes", not bad, bad[0] if bad else None)


def check_characters(ctx) -> Report:
    parts = []
    for G in (quaternion8(), symmetric(3)):
        chars = all_characters(G)
        rep = additivity_check(chars, hom_classes(qp(2), G))
        rep.check = f"pullback additivity on {G.name}"
        parts.append(rep)
    failures = []
    for fname, K in sorted(ctx.fields.items()):
        if not K.is_unramified:
            continue
        for gname, G in sorted(ctx.groups.items()):
            S = hom_classes(K, G)
            for chi in all_characters(G):
                if not equivariance_check(K, chi, S).passed:
                    failures.append([fname, gname, [str(v) for v in chi.generator_images]])
    parts.append(Report("equivariance under units", not failures,
                        failures[0] if failures else None))
    return combine("characters", parts)


def check_determinism(ctx) -> Report:
    from .cli import run
    argv = ["hkr-scheme", "--field", "builtin:q4", "--group", "builtin:s4", "--format", "json"]
    first, second = run(argv), run(argv)
    argv2 = ["fgl-law", "--p", "2", "--n", "1", "--degree", "8", "--format", "json"]
    ok = first == second and run(argv2) == run(argv2)
    return Report("byte-identical reruns", ok, None if ok else "output differs")


CHECKS: list[Check] = [
    Check("corpus validation", "groups", check_corpus),
    Check("functional equation", "fgl", check_functional_equation),
    Check("integrality of g", "fgl", check_integrality_of_g),
    Check("law integrality and axioms", "fgl", check_law_axioms),
    Check("p-series corollary", "fgl", check_p_series),
    Check("endomorphism ring", "fgl", check_endomorphisms),
    Check("Araki coordinates", "fgl", check_araki),
    Check("graded rescale", "fgl", check_graded_rescale),
    Check("genus", "fgl", check_genus),
    Check("Lubin-Tate", "lt", check_lubin_tate),
    Check("group counts", "groups", check_group_counts),
    Check("étale decompositions", "hkr", check_etale),
    Check("cyclic homs and product formula", "hkr", check_cyclic_and_product),
    Check("rank over Q_p", "hkr", check_artin_atiyah),
    Check("characters", "hkr", check_characters),
    Check("determinism", "cli", check_determinism),
]

AREAS = sorted({c.area for c in CHECKS})


def run_suite(ctx: Context, only: list[str] | None = None, time_limit: float = 600.0,
              progress: Callable[[Report, float], None] | None = None) -> list[Report]:
    """Run the selected checks in order; past the time limit the rest fail."""
    start = time.perf_counter()
    reports = []
    for chk in CHECKS:
        if only and chk.area not in only and chk.name not in only:
            continue
        t0 = time.perf_counter()
        if t0 - start > time_limit:
            rep = Report(chk.name, False, "time limit exceeded")
        else:
            try:
                rep = chk.run(ctx)
            except FGLCharError as exc:
                rep = Report(chk.name, False, f"{type(exc).__name__}: {exc}")
            rep.check = chk.name
        reports.append(rep)
        if progress is not None:
            progress(rep, time.perf_counter() - t0)
    return reports
