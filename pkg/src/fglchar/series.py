"""Truncated multivariate power series over the coefficient rings of
:mod:`fglchar.arith`.

A :class:`Series` stores its nonzero coefficients in a dict keyed by
exponent tuples and is exact through total degree ``trunc``. One and two
variable series are the workhorses; three variables appear only when a group
law is checked for associativity.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ModeMismatch, NonUnitLinearTerm, NonzeroConstantTerm, InputError

INF = math.inf


def _encode(e: tuple[int, ...], base: int) -> int:
    code = 0
    for k in reversed(e):
        code = code * base + k
    return code


def _decode(code: int, base: int, nvars: int) -> tuple[int, ...]:
    out = []
    for _ in range(nvars):
        code, r = divmod(code, base)
        out.append(r)
    return tuple(out)


class Series:
    __slots__ = ("ring", "nvars", "trunc", "terms")

    def __init__(self, ring, nvars: int, trunc: int, terms: Mapping | None = None):
        self.ring = ring
        self.nvars = nvars
        self.trunc = trunc
        clean = {}
        if terms:
            for e, c in terms.items():
                if isinstance(e, int):
                    e = (e,)
                if len(e) != nvars:
                    raise InputError(f"exponent {e} does not have {nvars} entries")
                if sum(e) <= trunc:
                    c = ring.coerce(c)
                    if c:
                        clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ring, nvars, trunc, terms):
        s = cls.__new__(cls)
        s.ring, s.nvars, s.trunc, s.terms = ring, nvars, trunc, terms
        return s

    # constructors ---------------------------------------------------------
    @classmethod
    def var(cls, ring, trunc: int, index: int = 0, nvars: int = 1) -> "Series":
        e = [0] * nvars
        e[index] = 1
        return cls(ring, nvars, trunc, {tuple(e): 1})

    @classmethod
    def zero(cls, ring, trunc: int, nvars: int = 1) -> "Series":
        return cls._raw(ring, nvars, trunc, {})

    @classmethod
    def constant(cls, ring, c, trunc: int, nvars: int = 1) -> "Series":
        return cls(ring, nvars, trunc, {(0,) * nvars: c})

    @classmethod
    def from_list(cls, ring, coeffs: Sequence, trunc: int | None = None) -> "Series":
        """One-variable series from an ascending coefficient list."""
        if trunc is None:
            trunc = len(coeffs) - 1
        return cls(ring, 1, trunc, {(k,): c for k, c in enumerate(coeffs)})

    # inspection -----------------------------------------------------------
    def coeff(self, *e):
        if len(e) == 1 and isinstance(e[0], tuple):
            e = e[0]
        return self.terms.get(tuple(e), self.ring.zero)

    def __getitem__(self, e):
        if isinstance(e, int):
            e = (e,)
        return self.coeff(e)

    def coeff_list(self) -> list:
        if self.nvars != 1:
            raise InputError("coeff_list is for one-variable series")
        return [self.terms.get((k,), self.ring.zero) for k in range(self.trunc + 1)]

    def min_degree(self) -> float:
        return min((sum(e) for e in self.terms), default=INF)

    def degree_part(self, d: int) -> dict:
        return {e: c for e, c in self.terms.items() if sum(e) == d}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Series({self.nvars} var, trunc={self.trunc}, {self})"

    def __str__(self):
        names = "XYZW"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            elif cs.lstrip("-").isdigit():
                parts.append(f"{cs}*{mono}")
            else:
                parts.append(f"({cs})*{mono}")
        text = (" + ".join(parts) or "0").replace("+ -", "- ")
        return text + f" + O({self.trunc + 1})"

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Series"):
        if other.ring != self.ring:
            raise ModeMismatch(f"cannot combine {self.ring!r} with {other.ring!r}")
        if other.nvars != self.nvars:
            raise InputError("series have different numbers of variables")

    def truncate(self, trunc: int) -> "Series":
        if trunc >= self.trunc:
            return self._raw(self.ring, self.nvars, self.trunc, dict(self.terms))
        return self._raw(self.ring, self.nvars, trunc,
                         {e: c for e, c in self.terms.items() if sum(e) <= trunc})

    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(self.ring, other, self.trunc, self.nvars)
        self._check(other)
        D = min(self.trunc, other.trunc)
        out = {e: c for e, c in self.terms.items() if sum(e) <= D}
        for e, c in other.terms.items():
            if sum(e) > D:
                continue
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return self._raw(self.ring, self.nvars, D, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.ring, self.nvars, self.trunc,
                         {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        c = self.ring.coerce(c)
        out = {}
        for e, a in self.terms.items():
            t = a * c
            if t:
                out[e] = t
        return self._raw(self.ring, self.nvars, self.trunc, out)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "Series":
        result = Series.constant(self.ring, 1, self.trunc, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return not difference_terms(self, other)

    def __hash__(self):  # pragma: no cover - series are compared, not hashed
        raise TypeError("Series is unhashable")

    def map_coeffs(self, fn: Callable, ring=None) -> "Series":
        ring = ring if ring is not None else self.ring
        return Series(ring, self.nvars, self.trunc, {e: fn(c) for e, c in self.terms.items()})

    # calculus -------------------------------------------------------------
    def derivative(self, var: int = 0) -> "Series":
        out = {}
        for e, c in self.terms.items():
            k = e[var]
            if k:
                e2 = e[:var] + (k - 1,) + e[var + 1:]
                t = c * k
                if t:
                    out[e2] = t
        return self._raw(self.ring, self.nvars, self.trunc - 1, out)

    def integrate(self) -> "Series":
        """Formal antiderivative in one variable (rational modes only)."""
        if self.nvars != 1:
            raise InputError("integrate is for one-variable series")
        from fractions import Fraction
        return self._raw(self.ring, 1, self.trunc + 1,
                         {(e[0] + 1,): c * Fraction(1, e[0] + 1) for e, c in self.terms.items()})

    def restrict(self, var: int, value_zero: bool = True) -> "Series":
        """Set variable ``var`` to zero and drop it."""
        out = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                out[e[:var] + e[var + 1:]] = c
        return self._raw(self.ring, self.nvars - 1, self.trunc, out)

    def swap(self) -> "Series":
        """Exchange the two variables of a two-variable series."""
        return self._raw(self.ring, 2, self.trunc, {(j, i): c for (i, j), c in self.terms.items()})


def difference_terms(a: Series, b: Series) -> dict:
    """Nonzero coefficients of ``a - b`` through the common truncation."""
    a._check(b)
    return (a - b).terms


def mul(a: Series, b: Series, trunc: int | None = None) -> Series:
    a._check(b)
    D = min(a.trunc, b.trunc)
    if trunc is not None:
        D = min(D, trunc)
    return _mul_to(a, b, D)


def _mul_to(a: Series, b: Series, D: int) -> Series:
    """Product through degree ``D``; the caller vouches that the operands
    are known far enough (e.g. because one factor has high order)."""
    if not a.terms or not b.terms:
        return Series._raw(a.ring, a.nvars, D, {})
    nv = a.nvars
    if nv == 1:
        al = sorted((e[0], c) for e, c in a.terms.items() if e[0] <= D)
        bl = sorted(((e[0], c) for e, c in b.terms.items() if e[0] <= D), key=lambda t: t[0])
        out: dict = {}
        for da, ca in al:
            lim = D - da
            for db, cb in bl:
                if db > lim:
                    break
                k = da + db
                s = out.get(k)
                out[k] = ca * cb if s is None else s + ca * cb
        return Series._raw(a.ring, 1, D, {(k,): c for k, c in out.items() if c})
    base = D + 1
    al = [(sum(e), _encode(e, base), c) for e, c in a.terms.items() if sum(e) <= D]
    bl = sorted(((sum(e), _encode(e, base), c) for e, c in b.terms.items() if sum(e) <= D),
                key=lambda t: t[0])
    out = {}
    for da, ka, ca in al:
        lim = D - da
        for db, kb, cb in bl:
            if db > lim:
                break
            k = ka + kb
            s = out.get(k)
            out[k] = ca * cb if s is None else s + ca * cb
    return Series._raw(a.ring, nv, D, {_decode(k, base, nv): c for k, c in out.items() if c})


def _require_no_constant(*gs: Series):
    for g in gs:
        c = g.terms.get((0,) * g.nvars)
        if c:
            raise NonzeroConstantTerm("substituted series must have zero constant term")


def compose(f: Series, g: Series) -> Series:
    """``f(g)`` for a one-variable ``f`` and any ``g`` with zero constant term."""
    if f.nvars != 1:
        raise InputError("compose expects a one-variable outer series")
    if f.ring != g.ring:
        raise ModeMismatch(f"cannot compose {f.ring!r} with {g.ring!r}")
    _require_no_constant(g)
    D = min(f.trunc, g.trunc)
    v = g.min_degree()
    if v == INF:
        return Series.constant(g.ring, f.coeff(0), D, g.nvars)
    top = min(max((e[0] for e in f.terms), default=0), D // v)
    acc = Series.zero(g.ring, D, g.nvars)
    # Horner: acc_k = c_k + g * acc_{k+1}, needed through degree D - k*v
    for k in range(top, 0, -1):
        acc = _mul_to(g, acc + f.coeff(k), D - (k - 1) * v)
    acc = acc.truncate(D)
    acc.trunc = D
    c0 = f.coeff(0)
    return acc + c0 if c0 else acc


def substitute(F: Series, args: Sequence[Series]) -> Series:
    """``F(args[0], args[1])`` for a one- or two-variable ``F``."""
    if len(args) != F.nvars:
        raise InputError(f"expected {F.nvars} arguments")
    if F.nvars == 1:
        return compose(F, args[0])
    if F.nvars != 2:
        raise InputError("substitution is implemented for at most two variables")
    A, B = args
    for g in args:
        if g.ring != F.ring:
            raise ModeMismatch(f"cannot substitute {g.ring!r} into {F.ring!r}")
    if A.nvars != B.nvars:
        raise InputError("arguments must live in the same polynomial ring")
    _require_no_constant(A, B)
    D = min(F.trunc, A.trunc, B.trunc)
    nv = A.nvars
    vA = A.min_degree()
    vB = B.min_degree()
    vA = D + 1 if vA == INF else vA
    vB = D + 1 if vB == INF else vB
    by_i: dict[int, dict[int, object]] = {}
    for (i, j), c in F.terms.items():
        if i * vA + j * vB <= D:
            by_i.setdefault(i, {})[j] = c
    if not by_i:
        return Series.zero(F.ring, D, nv)
    jmax = max(j for row in by_i.values() for j in row)
    Bp = [Series.constant(F.ring, 1, D, nv)]
    for j in range(1, jmax + 1):
        Bp.append(mul(Bp[-1], B, D))

    def P(i: int) -> Series:
        row = by_i.get(i, {})
        t = D - i * vA
        out: dict = {}
        for j, c in row.items():
            for e, b in Bp[j].terms.items():
                if sum(e) <= t:
                    s = out.get(e)
                    s = b * c if s is None else s + b * c
                    out[e] = s
        return Series._raw(F.ring, nv, t, {e: c for e, c in out.items() if c})

    imax = max(by_i)
    acc = P(imax)
    for i in range(imax - 1, -1, -1):
        acc = P(i) + _mul_to(A, acc, D - i * vA)
    acc = acc.truncate(D)
    acc.trunc = D
    return acc


def substitute2(F: Series, g: Series, h: Series) -> Series:
    return substitute(F, (g, h))


def series_inverse(h: Series) -> Series:
    """Multiplicative inverse of a one-variable series with invertible constant term."""
    ring = h.ring
    c0 = h.coeff(0)
    if not c0 or not ring.invertible(c0):
        raise NonUnitLinearTerm("constant term is not invertible")
    inv0 = ring.inverse(c0)
    D = h.trunc
    hc = h.coeff_list()
    out = [inv0]
    for k in range(1, D + 1):
        s = ring.zero
        for j in range(1, k + 1):
            if hc[j]:
                s = s + hc[j] * out[k - j]
        out.append(-(s * inv0))
    return Series.from_list(ring, out, D)


def revert(f: Series) -> Series:
    """Compositional inverse ``g`` with ``f(g(X)) = X`` through the truncation.

    Newton iteration ``g <- g - (f(g) - X) / f'(g)``, doubling the correct
    precision each step.
    """
    if f.nvars != 1:
        raise InputError("revert expects a one-variable series")
    ring = f.ring
    _require_no_constant(f)
    c = f.coeff(1)
    if not c or not ring.invertible(c):
        raise NonUnitLinearTerm("linear coefficient is not invertible")
    D = f.trunc
    X = Series.var(ring, D)
    g = X.scale(ring.inverse(c))
    df = f.derivative()
    prec = 1
    while prec < D:
        prec = min(2 * prec, D)
        g = Series._raw(ring, 1, prec, dict(g.terms))
        fg = compose(f.truncate(prec), g)
        err = fg - X.truncate(prec)
        if not err.terms:
            continue
        dfg = compose(df.truncate(prec), g)
        dfg = Series._raw(ring, 1, prec, dict(dfg.terms))
        g = g - mul(err, series_inverse(dfg), prec)
    g = g.truncate(D)
    g.trunc = D
    return g


def weierstrass_degree(f: Series) -> float:
    """Smallest exponent whose coefficient is a unit of the local ring."""
    if f.nvars != 1:
        raise InputError("weierstrass_degree expects a one-variable series")
    ring = f.ring
    for k in sorted(e[0] for e in f.terms):
        if ring.is_unit(f.terms[(k,)]):
            return k
    return INF


def reduce_mod_max(f: Series) -> Series:
    """Drop coefficients in the maximal ideal (keeps units and nothing else)."""
    ring = f.ring
    return Series._raw(ring, f.nvars, f.trunc,
                       {e: c for e, c in f.terms.items() if ring.valuation(c) <= 0})


def monomial(ring, trunc: int, exps: Iterable[int], coeff=1) -> Series:
    exps = tuple(exps)
    return Series(ring, len(exps), trunc, {exps: coeff})
