"""Lubin-Tate formal group laws over ``o_L``.

Given a uniformizer series ``f`` (``f = pi X mod deg 2``, ``f = X^q mod pi``)
the law ``F_f`` is built degree by degree: if ``F`` is correct below degree
``d``, the degree-``d`` part of ``f(F) - F(f, f)`` equals ``(pi^d - pi)``
times the missing homogeneous term. Endomorphisms ``[a]_f`` come from the
same recursion. Every result is re-verified afterwards at the precision the
divisions leave behind.

Residue mode works in ``o_L / p^(N + D)`` and loses one pi-adic digit per
division. For unramified ``L`` and ``f`` with coefficients in ``Z_p[x]`` the
construction can also run exactly over ``Q[x]/(u_poly)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .arith import LocalField, NumberFieldRing, RationalRing, ResidueElement, ResidueRing
from .errors import BadUniformizerSeries, InputError, PrecisionExhausted, NotDivisible
from .fgl import FormalGroupLaw, check_axioms, compare, multiple
from .report import Report, combine
from .series import Series, compose, substitute


def uniformizer_series(field: LocalField, coeffs: Sequence, D: int | None = None,
                       exact: bool = False) -> Series:
    """A one-variable series from an ascending coefficient list.

    Coefficients are integers or coordinate lists in the tower basis.
    """
    ring = _exact_ring(field) if exact else ResidueRing(field)
    D = len(coeffs) - 1 if D is None else D
    terms = {}
    for k, c in enumerate(coeffs):
        if isinstance(c, (list, tuple)):
            if exact:
                c = ring.element(c) if ring.mode == "numberfield" else Fraction(c[0])
            else:
                c = field.element(tuple(c) + (0,) * (field.n - len(c)))
        terms[(k,)] = c
    return Series(ring, 1, D, terms)


def standard_series(field: LocalField, D: int, exact: bool = False) -> Series:
    """``pi X + X^q`` with ``q`` the residue-field size."""
    q = field.residue_size
    if exact:
        if not field.is_unramified:
            raise InputError("exact mode needs an unramified field")
        return uniformizer_series(field, [0, field.p] + [0] * (q - 2) + [1], D, exact=True)
    pi = field.uniformizer
    coeffs = [0] * (q + 1)
    coeffs[1] = list(pi.coords)
    coeffs[q] = 1
    return uniformizer_series(field, coeffs, D)


def _exact_ring(field: LocalField):
    if not field.is_unramified:
        raise InputError("exact Lubin-Tate construction needs an unramified field")
    if field.f == 1:
        return RationalRing(field.p)
    return NumberFieldRing.of_field(field)


def _working_ring(field: LocalField, f_series: Series, D: int):
    """Ring for the recursion plus the uniformizer and its pi-adic precision."""
    if f_series.ring.mode in ("rational", "numberfield"):
        ring = f_series.ring
        return ring, ring.coerce(field.p), None
    work = field.with_precision(field.precision + D)
    return ResidueRing(work), work.uniformizer, work.e * work.precision


def _to_ring(f_series: Series, ring) -> Series:
    if f_series.ring == ring:
        return f_series
    if f_series.ring.mode == "residue" and ring.mode == "residue":
        return Series(ring, 1, f_series.trunc, {
            e: ring.field.element(c.coords) for e, c in f_series.terms.items()})
    return Series(ring, 1, f_series.trunc,
                  {e: ring.coerce(c) for e, c in f_series.terms.items()})


def _check_uniformizer_series(field: LocalField, f: Series, pi):
    ring = f.ring
    q = field.residue_size
    if f.coeff(0):
        raise BadUniformizerSeries("f must have zero constant term")
    if f.coeff(1) != pi:
        raise BadUniformizerSeries("linear coefficient of f must be the uniformizer")
    if q > f.trunc:
        raise BadUniformizerSeries(f"truncation {f.trunc} below residue-field size {q}")
    for (k,), c in f.terms.items():
        target = c - 1 if k == q else c
        if target and ring.valuation(target) < 1:
            raise BadUniformizerSeries(f"f is not X^{q} mod pi at degree {k}")


def _divide(c, pi, d: int, ring):
    """``c / (pi^d - pi)`` in the working ring."""
    if ring.mode != "residue":
        return c * ring.inverse(pi ** d - pi)
    unit = (pi ** (d - 1) - 1).inverse()
    try:
        return (c * unit).div_uniformizer()
    except NotDivisible as exc:
        raise PrecisionExhausted(f"degree-{d} obstruction is not divisible by pi") from exc


def lubin_tate_law(field: LocalField, f_series: Series, D: int = 16,
                   endomorphisms: Iterable = ()) -> FormalGroupLaw:
    """The unique law ``F_f`` with ``f(F(X, Y)) = F(f(X), f(Y))``."""
    D = min(D, f_series.trunc)
    ring, pi, digits = _working_ring(field, f_series, D)
    f = _to_ring(f_series, ring).truncate(D)
    _check_uniformizer_series(field, f, pi)

    X = Series.var(ring, D, 0, 2)
    Y = Series.var(ring, D, 1, 2)
    F = X + Y
    fX, fY = compose(f, X), compose(f, Y)
    for d in range(2, D + 1):
        Fd = F.truncate(d)
        obstruction = compose(f.truncate(d), Fd) - substitute(Fd, (fX.truncate(d), fY.truncate(d)))
        extra = {}
        for e, c in obstruction.degree_part(d).items():
            extra[e] = _divide(c, pi, d, ring)
        F = Series._raw(ring, 2, D, {**F.terms, **{e: c for e, c in extra.items() if c}})

    prec = None
    if digits is not None:
        # one pi-adic digit lost per division along any chain of degrees
        pi_digits = digits - (D - 1)
        if pi_digits < field.e:
            raise PrecisionExhausted("no p-adic digits survive the construction")
        prec = min(field.precision, pi_digits // field.e)
    law = FormalGroupLaw(F, None, field, {
        "provenance": "lubin_tate",
        "f_series": [str(f.coeff(k)) for k in range(min(D, f.trunc) + 1)],
    }, height=field.n, precision_achieved=prec, f_series=f, uniformizer=pi)
    law.endomorphisms[_key(pi)] = f
    for a in endomorphisms:
        lubin_tate_endomorphism(law, a)
    return law


def _key(a):
    return a.coords if isinstance(a, ResidueElement) else a


def lubin_tate_endomorphism(F: FormalGroupLaw, a) -> Series:
    """``[a]_f``: the series ``aX + ...`` commuting with ``f``."""
    f = F.f_series
    ring, pi, D = F.ring, F.uniformizer, F.trunc
    if isinstance(a, ResidueElement):
        a = ring.field.element(a.coords) if ring.mode == "residue" else a
    a = ring.coerce(a)
    key = _key(a)
    if key in F.endomorphisms:
        return F.endomorphisms[key]
    X = Series.var(ring, D)
    g = X.scale(a)
    for d in range(2, D + 1):
        gd = g.truncate(d)
        obstruction = compose(f.truncate(d), gd) - compose(gd, f.truncate(d))
        c = obstruction.coeff(d)
        if c:
            g = g + Series(ring, 1, D, {(d,): _divide(c, pi, d, ring)})
    F.endomorphisms[key] = g
    return g


def verify_lubin_tate(F: FormalGroupLaw) -> Report:
    """A-posteriori checks: axioms, ``f o F = F o (f, f)`` and ``[pi] = f``."""
    f, prec, ring, D = F.f_series, F.precision_achieved, F.ring, F.trunc
    X = Series.var(ring, D, 0, 2)
    Y = Series.var(ring, D, 1, 2)
    lhs = compose(f, F.law)
    rhs = F(compose(f, X), compose(f, Y))
    commute = compare(lhs, rhs, prec)

    field = F.field
    bare = FormalGroupLaw(F.law, None, field, F.provenance, F.height, prec)
    if field.e == 1:
        # [p] by repeated formal addition, independent of the recursion
        pi_check = compare(multiple(bare, field.p), f, prec)
        pi_name = "[p] (by addition) = f"
    else:
        fe = f
        for _ in range(field.e - 1):
            fe = compose(f, fe)
        pie = F.uniformizer ** field.e
        integral = ring.mode == "residue" and not any(pie.coords[1:])
        if integral:
            from .arith import balanced
            m = balanced(pie.coords[0], ring.field.modulus)
            target = multiple(bare, m)
        else:
            target = lubin_tate_endomorphism(F, pie)
        pi_check = compare(fe, target, prec)
        pi_name = f"f^{field.e} = [pi^{field.e}]"
    return combine("Lubin-Tate law", [
        check_axioms(F),
        Report("f(F) = F(f, f)", commute is None, commute, prec),
        Report(pi_name, pi_check is None, pi_check, prec),
    ])
