"""Hazewinkel logarithms, formal group laws and their endomorphisms.

Everything in this module runs over exact coefficients (rationals, or
``Q[x]/(u_poly)`` for endomorphism parameters in the unramified ring), so
"p-integral" always means "denominator prime to p" rather than a statement
about working precision. Lubin-Tate laws in residue mode live in
:mod:`fglchar.lubin_tate` but share :class:`FormalGroupLaw` and the checks
defined here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .arith import (
    LocalField,
    LocalRational,
    NFElement,
    RationalRing,
    is_prime,
    unramified_field,
)
from .errors import (
    CheckFailed,
    InputError,
    IntegralityViolation,
    NonIntegralParameter,
    NonUnitScale,
    NotPTypical,
    NotPTypifiable,
    TruncationTooSmall,
)
from .report import Report, combine
from .series import (
    INF,
    Series,
    compose,
    reduce_mod_max,
    revert,
    substitute,
    weierstrass_degree,
)


def default_truncation(q: int) -> int:
    return max(q * q + 4, 20)


# ---------------------------------------------------------------------------
# logarithms

def hazewinkel_log(p: int, n: int, D: int) -> Series:
    """``X + sum_k prod_{i<=k} (1 - p^(q^i - 1))^-1 X^(q^k) / p^k`` through degree D."""
    _check_pn(p, n)
    q = p ** n
    R = RationalRing(p)
    terms = {(1,): Fraction(1)}
    c = Fraction(1)
    k, deg = 1, q
    while deg <= D:
        c = c / (p * (1 - Fraction(p) ** (deg - 1)))
        terms[(deg,)] = c
        k += 1
        deg *= q
    return Series(R, 1, D, terms)


def _check_pn(p: int, n: int):
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if n < 1:
        raise InputError("height must be positive")


def honda_log(p: int, n: int, D: int) -> Series:
    """``sum_k X^(q^k) / p^k``: the ``g = 0`` case of the functional equation."""
    q = p ** n
    terms, k, deg = {}, 0, 1
    while deg <= D:
        terms[(deg,)] = Fraction(1, p ** k)
        k += 1
        deg *= q
    return Series(RationalRing(p), 1, D, terms)


def additive_log(p: int, D: int) -> Series:
    return Series.var(RationalRing(p), D)


def multiplicative_log(p: int, D: int) -> Series:
    """``log(1 + X)``."""
    return Series(RationalRing(p), 1, D,
                  {(k,): Fraction((-1) ** (k + 1), k) for k in range(1, D + 1)})


def _scaled_arg(ring, D: int, c, power: int = 1) -> Series:
    return Series(ring, 1, D, {(power,): c})


def verify_functional_equation(log: Series, p: int, q: int, D: int | None = None) -> Report:
    """Check ``p*log(X) = log(pX) + log(X^q)`` coefficientwise through D."""
    D = log.trunc if D is None else min(D, log.trunc)
    log = log.truncate(D)
    lhs = log.scale(p)
    rhs = compose(log, _scaled_arg(log.ring, D, p)) + compose(log, _scaled_arg(log.ring, D, 1, q))
    bad = sorted(e[0] for e in (lhs - rhs).terms)
    # the per-coefficient identity the identity reduces to: p = p^(q^k) + p(1 - p^(q^k - 1))
    deg, cross_ok = q, True
    while deg <= D:
        cross_ok &= p == p ** deg + p * (1 - p ** (deg - 1))
        deg *= q
    first = bad[0] if bad else None
    return Report("functional equation", not bad and cross_ok, first,
                  details={"p": p, "q": q, "degree": D, "coefficient_identity": cross_ok})


def integral_g(log: Series, p: int) -> tuple[Series, Report]:
    """``g(X) = log(pX)/p`` and whether all its coefficients are p-integral."""
    if log.ring.mode == "residue":
        raise InputError("integral_g needs exact rational coefficients")
    D = log.trunc
    g = compose(log, _scaled_arg(log.ring, D, p)).scale(Fraction(1, p))
    bad = sorted(e[0] for e, c in g.terms.items() if log.ring.valuation(c) < 0)
    return g, Report("integrality of g", not bad, bad[0] if bad else None,
                     details={"degree": D})


def p_typify(log: Series, p: int) -> Series:
    """Keep only the coefficients of ``X^(p^k)``."""
    if log.ring.mode == "residue":
        raise NotPTypifiable("p-typification needs a logarithm with exact coefficients")
    return Series._raw(log.ring, 1, log.trunc,
                       {e: c for e, c in log.terms.items() if _is_p_power(e[0], p)})


def _is_p_power(m: int, p: int) -> bool:
    while m % p == 0:
        m //= p
    return m == 1


# ---------------------------------------------------------------------------
# formal group laws

@dataclass
class FormalGroupLaw:
    law: Series
    logarithm: Series | None = None
    field: LocalField | None = None
    provenance: dict = dc_field(default_factory=dict)
    height: int | None = None
    precision_achieved: int | None = None
    endomorphisms: dict = dc_field(default_factory=dict)
    f_series: Series | None = None
    uniformizer: object = None

    @property
    def ring(self):
        return self.law.ring

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def trunc(self) -> int:
        return self.law.trunc

    def __call__(self, a: Series, b: Series) -> Series:
        return substitute(self.law, (a, b))

    def X(self, nvars: int = 1, index: int = 0) -> Series:
        return Series.var(self.ring, self.trunc, index, nvars)

    @cached_property
    def p_series(self) -> Series:
        return p_series(self)

    @cached_property
    def inverse(self) -> Series:
        return formal_inverse(self)

    def base_change(self, ring) -> "FormalGroupLaw":
        conv = ring.coerce
        law = Series(ring, 2, self.trunc, {e: conv(c) for e, c in self.law.terms.items()})
        log = None
        if self.logarithm is not None:
            log = Series(ring, 1, self.logarithm.trunc,
                         {e: conv(c) for e, c in self.logarithm.terms.items()})
        return FormalGroupLaw(law, log, self.field, dict(self.provenance), self.height,
                              self.precision_achieved)

    def truncated(self, D: int) -> "FormalGroupLaw":
        log = self.logarithm.truncate(D) if self.logarithm is not None else None
        return FormalGroupLaw(self.law.truncate(D), log, self.field, dict(self.provenance),
                              self.height, self.precision_achieved)


def _first_failure(diff_terms: dict, ring, precision: int | None) -> int | None:
    """Lowest total degree of a coefficient that is nonzero at the given precision."""
    degs = []
    for e, c in diff_terms.items():
        if precision is not None and ring.mode == "residue":
            if c.valuation() >= ring.field.e * precision:
                continue
        degs.append(sum(e))
    return min(degs) if degs else None


def compare(a: Series, b: Series, precision: int | None = None) -> int | None:
    """First degree where ``a`` and ``b`` differ (``None`` if they agree)."""
    return _first_failure((a - b).terms, a.ring, precision)


def check_axioms(F: FormalGroupLaw, D: int | None = None) -> Report:
    """Unit, commutativity and associativity of ``F`` through degree D."""
    Fl = F.law if D is None else F.law.truncate(D)
    D = Fl.trunc
    ring, prec = Fl.ring, F.precision_achieved
    X1 = Series.var(ring, D)
    unit = compare(Fl.restrict(1), X1, prec)
    unit = unit if unit is not None else compare(Fl.restrict(0), X1, prec)
    comm = compare(Fl.swap(), Fl, prec)
    X, Y, Z = (Series.var(ring, D, i, 3) for i in range(3))
    left = substitute(Fl, (substitute(Fl, (X, Y)), Z))
    right = substitute(Fl, (X, substitute(Fl, (Y, Z))))
    assoc = compare(left, right, prec)
    parts = [Report("unit", unit is None, unit, prec),
             Report("commutativity", comm is None, comm, prec),
             Report("associativity", assoc is None, assoc, prec)]
    return combine("group law axioms", parts)


def law_from_log(log: Series, D: int | None = None, field: LocalField | None = None,
                 provenance: dict | None = None, height: int | None = None,
                 check_integrality: bool = True) -> FormalGroupLaw:
    """``F(X,Y) = log^-1(log X + log Y)``; every coefficient must be p-integral."""
    if log.ring.mode == "residue":
        raise InputError("law_from_log needs exact coefficients")
    if log.coeff(1) != 1 or log.coeff(0):
        raise InputError("logarithm must be X + higher order terms")
    D = log.trunc if D is None else min(D, log.trunc)
    log = log.truncate(D)
    ring = log.ring
    exp = revert(log)
    X = Series.var(ring, D, 0, 2)
    Y = Series.var(ring, D, 1, 2)
    law = compose(exp, compose(log, X) + compose(log, Y))
    if check_integrality:
        bad = sorted((sum(e), e) for e, c in law.terms.items() if ring.valuation(c) < 0)
        if bad:
            deg, e = bad[0]
            raise IntegralityViolation(
                f"coefficient of X^{e[0]} Y^{e[1]} is {law.terms[e]}, not p-integral")
    return FormalGroupLaw(law, log, field, dict(provenance or {}), height)


def hazewinkel_law(p: int, n: int, D: int | None = None) -> FormalGroupLaw:
    q = p ** n
    D = default_truncation(q) if D is None else D
    field = unramified_field(p, n)
    return law_from_log(hazewinkel_log(p, n, D), D, field,
                        {"provenance": "hazewinkel", "p": p, "n": n}, height=n)


def additive_law(p: int, D: int = 20) -> FormalGroupLaw:
    return law_from_log(additive_log(p, D), D, provenance={"provenance": "additive", "p": p})


def multiplicative_law(p: int, D: int = 20) -> FormalGroupLaw:
    """``X + Y + XY`` given directly, without its logarithm."""
    R = RationalRing(p)
    law = Series(R, 2, D, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    return FormalGroupLaw(law, None, None, {"provenance": "multiplicative", "p": p}, height=1)


def logarithm_from_law(F: FormalGroupLaw) -> Series:
    """Logarithm via the invariant differential ``dX / F_Y(X, 0)``."""
    if F.logarithm is not None:
        return F.logarithm
    if F.ring.mode == "residue":
        raise NotPTypifiable("no logarithm over a residue ring")
    from .series import series_inverse
    dY = F.law.derivative(1).restrict(1)
    dY = Series._raw(F.ring, 1, F.trunc - 1, dict(dY.terms))
    return series_inverse(dY).integrate()


def formal_inverse(F: FormalGroupLaw) -> Series:
    """``i(X)`` with ``F(X, i(X)) = 0``, solved degree by degree."""
    ring, D = F.ring, F.trunc
    X = Series.var(ring, D)
    if F.logarithm is not None and ring.mode != "residue":
        return compose(revert(F.logarithm), F.logarithm.scale(-1))
    i = X.scale(-1)
    for d in range(2, D + 1):
        err = F(X, i)
        c = err.coeff(d)
        if c:
            i = i - Series(ring, 1, D, {(d,): c})
    if compare(F(X, i), Series.zero(ring, D), F.precision_achieved) is not None:
        raise CheckFailed("formal inverse did not converge")  # pragma: no cover
    return i


def multiple(F: FormalGroupLaw, k: int) -> Series:
    """``[k]_F`` by repeated formal addition (no logarithm needed)."""
    X = F.X()
    if k == 0:
        return Series.zero(F.ring, F.trunc)
    base = X if k > 0 else F.inverse
    acc = base
    for _ in range(abs(k) - 1):
        acc = F(acc, base)
    return acc


# ---------------------------------------------------------------------------
# endomorphisms

def _coerce_parameter(F: FormalGroupLaw, a):
    ring = F.ring
    if isinstance(a, NFElement):
        if ring.mode == "rational":
            ring = a.ring
        elif ring != a.ring:
            raise InputError("parameter lives in a different number field")
    if isinstance(a, LocalRational):
        a = a.value
    a = ring.coerce(a)
    if ring.mode != "residue" and a and ring.valuation(a) < 0:
        raise NonIntegralParameter(f"{a} is not p-integral")
    return ring, a


def endomorphism(F: FormalGroupLaw, a) -> Series:
    """``[a]_F(X) = log^-1(a log X)``; coefficients must stay p-integral."""
    if F.logarithm is None:
        if F.ring.mode == "residue" and a in F.endomorphisms:
            return F.endomorphisms[a]
        if isinstance(a, int):
            return multiple(F, a)
        raise InputError("endomorphism needs a logarithm or an integer parameter")
    ring, a = _coerce_parameter(F, a)
    if ring != F.ring:
        F = F.base_change(ring)
    log = F.logarithm.truncate(F.trunc)
    if not a:
        return Series.zero(ring, F.trunc)
    out = compose(revert(log), log.scale(a))
    bad = sorted(e[0] for e, c in out.terms.items() if ring.valuation(c) < 0)
    if bad:
        raise IntegralityViolation(f"[{a}] has a non-integral coefficient at degree {bad[0]}")
    return out


def verify_ring_hom(F: FormalGroupLaw, a, b, D: int | None = None) -> Report:
    """``[a] o [b] = [ab]`` and ``F([a]X, [b]X) = [a+b]X`` through D."""
    if D is not None and D < F.trunc:
        F = F.truncated(D)
    ring_a, a = _coerce_parameter(F, a)
    ring_b, b = _coerce_parameter(F, b)
    ring = ring_a if ring_a.mode == "numberfield" else ring_b
    if ring != F.ring:
        F = F.base_change(ring)
        a, b = ring.coerce(a), ring.coerce(b)
    ea, eb = endomorphism(F, a), endomorphism(F, b)
    comp = compare(compose(ea, eb), endomorphism(F, a * b))
    add = compare(F(ea, eb), endomorphism(F, a + b))
    return combine(f"endomorphism ring hom ({a}, {b})", [
        Report("[a]o[b] = [ab]", comp is None, comp),
        Report("[a] +F [b] = [a+b]", add is None, add),
    ])


def p_series(F: FormalGroupLaw) -> Series:
    if F.logarithm is not None:
        return endomorphism(F, F.p)
    return multiple(F, F.p)


def verify_p_corollary(F: FormalGroupLaw) -> Report:
    """``[p]_F(X) = F(pX, X^q)`` and ``[p]_F = X^q mod p``."""
    if F.height is None:
        raise InputError("law has no declared height")
    p, q, D, ring = F.p, F.p ** F.height, F.trunc, F.ring
    ps = F.p_series
    X = F.X()
    rhs = F(X.scale(p), Series(ring, 1, D, {(q,): 1}))
    ident = compare(ps, rhs, F.precision_achieved)
    red = reduce_mod_max(ps)
    target = Series(ring, 1, D, {(q,): 1}) if q <= D else Series.zero(ring, D)
    # reduce_mod_max keeps unit coefficients; mod p they must equal X^q exactly
    mod_p = [e[0] for e, c in (ps - target).terms.items() if ring.valuation(c) <= 0]
    mod_first = min(mod_p) if mod_p else None
    return combine("[p]_F = pX +_F X^q", [
        Report("p-series identity", ident is None, ident, F.precision_achieved),
        Report("p-series mod p equals X^q", mod_first is None, mod_first,
               details={"weierstrass_degree": weierstrass_degree(red)}),
    ])


# ---------------------------------------------------------------------------
# p-typical coordinates

@dataclass
class PTypicalCoordinates:
    values: list
    convention: str
    residual: float
    degree: int

    def to_json(self) -> dict:
        return {"values": [str(v) for v in self.values], "convention": self.convention,
                "residual": "inf" if self.residual == INF else self.residual,
                "degree": self.degree}


def _require_p_typical(F: FormalGroupLaw) -> Series | None:
    if F.ring.mode == "residue" and F.logarithm is None:
        return None
    log = logarithm_from_law(F)
    bad = sorted(e[0] for e in log.terms if not _is_p_power(e[0], F.p))
    if bad:
        raise NotPTypical(f"logarithm has a term of degree {bad[0]}, not a power of {F.p}")
    return log


def araki_coordinates(F: FormalGroupLaw, kmax: int, convention: str = "araki") -> PTypicalCoordinates:
    """Solve ``[p]_F(X) = sum_F v_k X^(p^k)`` lowest degree first."""
    p = F.p
    top = p ** kmax
    if F.trunc < top:
        raise TruncationTooSmall(f"truncation {F.trunc} < p^kmax = {top}")
    log = _require_p_typical(F)
    if convention == "hazewinkel":
        return _hazewinkel_generators(log, p, kmax)
    if convention != "araki":
        raise InputError(f"unknown convention {convention!r}")
    G = F.truncated(top)
    prec = G.precision_achieved
    R = G.p_series
    inv = G.inverse
    values = []
    for k in range(kmax + 1):
        deg = p ** k
        low = _first_failure({e: c for e, c in R.terms.items() if e[0] < deg}, G.ring, prec)
        if low is not None:
            raise NotPTypical(f"unmatched term of degree {low} between p-powers")
        v = R.coeff(deg)
        values.append(v)
        if v:
            R = G(R, compose(inv, Series(G.ring, 1, top, {(deg,): v})))
    residual = _first_failure(R.terms, G.ring, prec)
    return PTypicalCoordinates(values, "araki", INF if residual is None else residual, top)


def _hazewinkel_generators(log: Series, p: int, kmax: int) -> PTypicalCoordinates:
    """``p l_m = sum_{i<m} l_i V_{m-i}^(p^i)`` solved for the V's."""
    l = [log.coeff(p ** i) for i in range(kmax + 1)]
    V = [log.ring.coerce(p)]
    for m in range(1, kmax + 1):
        s = l[m] * p
        for i in range(1, m):
            s = s - l[i] * V[m - i] ** (p ** i)
        V.append(s)
    return PTypicalCoordinates(V, "hazewinkel", INF, p ** kmax)


def ptypical_coordinates(field: LocalField | None, F: FormalGroupLaw,
                         kmax: int | None = None) -> PTypicalCoordinates:
    """Araki coordinates ``w_i`` of the p-typification of ``F``."""
    p = F.p
    if kmax is None:
        kmax = int(math.log(F.trunc, p) + 1e-9)
    if F.ring.mode == "residue" and F.logarithm is None:
        try:
            return araki_coordinates(F, kmax)
        except NotPTypical as exc:
            raise NotPTypifiable(
                f"residue-mode law without logarithm is not p-typical: {exc}") from exc
    log = p_typify(logarithm_from_law(F), p)
    G = law_from_log(log, F.trunc, field or F.field, {"provenance": "p-typification"})
    return araki_coordinates(G, kmax)


# ---------------------------------------------------------------------------
# torsion, genus, grading

def torsion_order(F: FormalGroupLaw, r: int) -> int:
    """Weierstrass degree of ``[p]^r`` mod the maximal ideal (= ``p^(r*height)``)."""
    if F.height is None:
        raise InputError("law has no declared height")
    expected = F.p ** (r * F.height)
    if expected > F.trunc:
        raise TruncationTooSmall(f"p^(rn) = {expected} exceeds truncation {F.trunc}")
    ps = F.p_series
    it = ps
    for _ in range(r - 1):
        it = compose(ps, it)
    if F.precision_achieved is not None:
        it = Series._raw(it.ring, 1, it.trunc, {
            e: c for e, c in it.terms.items() if c.valuation() < F.ring.field.e * F.precision_achieved})
    wd = weierstrass_degree(it)
    if wd != expected:
        raise CheckFailed(f"Weierstrass degree {wd} != p^(rn) = {expected}")
    return wd


def genus_value(p: int, n: int, m: int) -> LocalRational:
    """Value of the genus on ``CP^m``: nonzero only for ``m = q^k - 1``."""
    _check_pn(p, n)
    if m < 0:
        raise InputError("m must be nonnegative")
    q = p ** n
    value = Fraction(0)
    k, deg = 0, 1
    while deg < m + 1:
        deg *= q
        k += 1
    if deg == m + 1:
        value = Fraction(q, p) ** k
        for i in range(1, k + 1):
            value /= 1 - Fraction(p) ** (q ** i - 1)
    out = LocalRational(value, p)
    log_coeff = hazewinkel_log(p, n, m + 1).coeff(m + 1)
    if out.value != (m + 1) * log_coeff:
        raise CheckFailed(f"genus({m}) disagrees with (m+1) * log coefficient")
    if not out.is_integral():
        raise IntegralityViolation(f"genus value {out} is not p-integral")
    return out


def rescale(F: FormalGroupLaw, u) -> FormalGroupLaw:
    """``F_u(X, Y) = u^-1 F(uX, uY)``.

    ``u`` must be invertible in the coefficient ring. Over Q this allows
    u = p: the coefficient of X^i Y^j is scaled by u^(i+j-1) with i+j >= 1,
    so F_u stays p-integral, though it is no longer isomorphic to F over
    Z_(p).
    """
    ring = F.ring
    u = ring.coerce(u)
    if not ring.invertible(u):
        raise NonUnitScale(f"{u} is not invertible in the coefficient ring")
    law = Series._raw(ring, 2, F.trunc, {
        e: c * u ** (sum(e) - 1) for e, c in F.law.terms.items()})
    log = None
    if F.logarithm is not None:
        log = Series._raw(ring, 1, F.logarithm.trunc, {
            e: c * u ** (e[0] - 1) for e, c in F.logarithm.terms.items()})
    prov = dict(F.provenance, rescaled_by=str(u))
    return FormalGroupLaw(law, log, F.field, prov, F.height, F.precision_achieved)


def rescale_graded_check(F: FormalGroupLaw, u_samples: Iterable, D: int | None = None) -> Report:
    """For each sample u: ``[p]_{F_u}(X) = F_u(pX, u^(q-1) X^q)`` through D."""
    if F.height is None:
        raise InputError("law has no declared height")
    if D is not None and D < F.trunc:
        F = F.truncated(D)
    p, q, ring = F.p, F.p ** F.height, F.ring
    parts = []
    for u in u_samples:
        Fu = rescale(F, u)
        # [p] through the law alone, independent of the logarithm
        Fu_nolog = FormalGroupLaw(Fu.law, None, Fu.field, Fu.provenance, Fu.height,
                                  Fu.precision_achieved)
        lhs = multiple(Fu_nolog, p)
        uu = ring.coerce(u)
        rhs = Fu(Fu.X().scale(p), Series(ring, 1, F.trunc, {(q,): uu ** (q - 1)}))
        bad = compare(lhs, rhs, F.precision_achieved)
        parts.append(Report(f"graded p-series u={u}", bad is None, bad))
    rep = combine("graded rescale [p] = pX +F u^(q-1) X^q", parts)
    rep.details["identity"] = "u^(q-1)"
    return rep
