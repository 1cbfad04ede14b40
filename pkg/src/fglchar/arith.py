"""Exact local-field coefficient arithmetic.

Three coefficient domains are provided, each wrapped in a small "ring"
object that the series kernels use for constants and predicates:

* :class:`RationalRing` -- exact rationals (``fractions.Fraction``) with a
  distinguished prime, so integrality is a statement about denominators.
* :class:`NumberFieldRing` -- ``Q[x]/(u_poly)``, a dense subring of the
  unramified extension of ``Q_p`` of degree ``f``.
* :class:`ResidueRing` -- ``o_L / p^N`` for a :class:`LocalField` presented
  as an unramified step ``Z_p[x]/(u_poly)`` followed by an Eisenstein step
  ``y^e + ... = 0``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    CapExceeded,
    DegreeCapExceeded,
    InputError,
    NotAUnit,
    NotDivisible,
    NotEisenstein,
    NotIrreducible,
    RamifiedUnsupported,
)

INF = math.inf

DEFAULT_PRECISION = 16
DEFAULT_DEGREE_CAP = 8
DEFAULT_ENUMERATION_CAP = 10**6


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def int_valuation(a: int, p: int) -> float:
    if a == 0:
        return INF
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def valuation(x, p: int) -> float:
    """p-adic valuation of an integer or rational; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return INF
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def balanced(a: int, m: int) -> int:
    """Representative of ``a mod m`` in ``(-m/2, m/2]``."""
    a %= m
    return a - m if 2 * a > m else a


class LocalRational:
    """An exact rational number together with a prime and its valuation."""

    __slots__ = ("value", "prime", "valuation")

    def __init__(self, value, prime: int):
        self.value = Fraction(value)
        self.prime = prime
        self.valuation = valuation(self.value, prime)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def is_integral(self) -> bool:
        return self.valuation >= 0

    def _other(self, other):
        if isinstance(other, LocalRational):
            if other.prime != self.prime:
                raise InputError("cannot combine rationals for different primes")
            return other.value
        return Fraction(other)

    def __add__(self, other):
        return LocalRational(self.value + self._other(other), self.prime)

    __radd__ = __add__

    def __sub__(self, other):
        return LocalRational(self.value - self._other(other), self.prime)

    def __rsub__(self, other):
        return LocalRational(self._other(other) - self.value, self.prime)

    def __mul__(self, other):
        return LocalRational(self.value * self._other(other), self.prime)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return LocalRational(self.value / self._other(other), self.prime)

    def __rtruediv__(self, other):
        return LocalRational(self._other(other) / self.value, self.prime)

    def __neg__(self):
        return LocalRational(-self.value, self.prime)

    def __eq__(self, other):
        if isinstance(other, LocalRational):
            return self.value == other.value and self.prime == other.prime
        try:
            return self.value == Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.prime))

    def __repr__(self):
        return f"LocalRational({self.value}, p={self.prime})"

    def __str__(self):
        return str(self.value)


# ---------------------------------------------------------------------------
# polynomials over Z/p (ascending coefficient lists)

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` by the monic-mod-p polynomial ``b`` over ``F_p``."""
    r = _poly_trim([c % p for c in a])
    b = _poly_trim([c % p for c in b])
    lead_inv = pow(b[-1], -1, p)
    while len(r) >= len(b):
        c = r[-1] * lead_inv % p
        shift = len(r) - len(b)
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bc) % p
        _poly_trim(r)
    return r


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Exhaustive search for monic factors of degree <= deg/2."""
    poly = [c % p for c in poly]
    deg = len(_poly_trim(list(poly))) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_mod_p(poly, list(low) + [1], p):
                return False
    return True


def first_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree ``f`` over F_p."""
    if f == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=f):
        cand = tuple(reversed(low)) + (1,)
        if is_irreducible_mod_p(cand, p):
            return cand
    raise NotIrreducible(f"no irreducible of degree {f} mod {p}")  # pragma: no cover


# ---------------------------------------------------------------------------
# local fields

def _unram_mul(a: Sequence[int], b: Sequence[int], u: Sequence[int], m: int) -> list[int]:
    f = len(u) - 1
    if f == 1:
        return [a[0] * b[0] % m]
    r = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                r[i + j] += ai * bj
    for k in range(2 * f - 2, f - 1, -1):
        c = r[k]
        if c:
            for t in range(f):
                r[k - f + t] -= c * u[t]
    return [c % m for c in r[:f]]


@dataclass(frozen=True)
class LocalField:
    """Tower presentation ``o_L = Z_p[x]/(u_poly) [y]/(e_poly)`` modulo ``p^N``.

    ``u_poly`` is an ascending list of integers; ``e_poly`` (absent when
    ``e == 1``) is an ascending list whose entries are elements of the
    unramified step, each a length-``f`` coordinate tuple.
    """

    p: int
    f: int
    u_poly: tuple[int, ...]
    e: int = 1
    e_poly: tuple[tuple[int, ...], ...] | None = None
    precision: int = DEFAULT_PRECISION
    name: str = dc_field(default="", compare=False)

    @property
    def n(self) -> int:
        return self.e * self.f

    @property
    def modulus(self) -> int:
        return self.p ** self.precision

    @property
    def residue_size(self) -> int:
        return self.p ** self.f

    @property
    def is_unramified(self) -> bool:
        return self.e == 1

    def with_precision(self, precision: int) -> "LocalField":
        return LocalField(self.p, self.f, self.u_poly, self.e, self.e_poly,
                          precision, self.name)

    def label(self) -> str:
        if self.name:
            return self.name
        if self.n == 1:
            return f"Q{self.p}"
        return f"L(p={self.p},f={self.f},e={self.e})"

    # element constructors -------------------------------------------------
    def element(self, coords: Iterable[int]) -> "ResidueElement":
        coords = tuple(coords)
        if len(coords) != self.n:
            raise InputError(f"expected {self.n} coordinates, got {len(coords)}")
        m = self.modulus
        return ResidueElement(self, tuple(c % m for c in coords))

    def from_int(self, a: int) -> "ResidueElement":
        return ResidueElement(self, (a % self.modulus,) + (0,) * (self.n - 1))

    def from_unramified(self, coords: Sequence[int]) -> "ResidueElement":
        return self.element(tuple(coords) + (0,) * (self.n - self.f))

    @property
    def zero(self) -> "ResidueElement":
        return self.from_int(0)

    @property
    def one(self) -> "ResidueElement":
        return self.from_int(1)

    @property
    def x(self) -> "ResidueElement":
        """Generator of the unramified step (the residue-field generator)."""
        if self.f == 1:
            return self.from_int(-self.u_poly[0])
        return self.basis_element(1)

    @property
    def y(self) -> "ResidueElement":
        if self.e == 1:
            raise InputError("unramified field has no Eisenstein generator")
        return self.basis_element(self.f)

    @property
    def uniformizer(self) -> "ResidueElement":
        return self.from_int(self.p) if self.e == 1 else self.y

    def basis_element(self, k: int) -> "ResidueElement":
        c = [0] * self.n
        c[k] = 1
        return ResidueElement(self, tuple(c))

    def basis(self) -> list["ResidueElement"]:
        """Monomial basis ``x^i y^j`` ordered by ``j * f + i``."""
        return [self.basis_element(k) for k in range(self.n)]

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP):
        if self.modulus ** self.n > cap:
            raise CapExceeded(f"|o_L/p^{self.precision}| = {self.modulus ** self.n} > {cap}")
        for coords in itertools.product(range(self.modulus), repeat=self.n):
            yield ResidueElement(self, coords)

    # raw kernels ----------------------------------------------------------
    def _mul_coords(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        m = self.modulus
        if self.n == 1:
            return (a[0] * b[0] % m,)
        f, e, u = self.f, self.e, self.u_poly
        if e == 1:
            return tuple(_unram_mul(a, b, u, m))
        A = [a[j * f:(j + 1) * f] for j in range(e)]
        B = [b[j * f:(j + 1) * f] for j in range(e)]
        r = [[0] * f for _ in range(2 * e - 1)]
        for i, ai in enumerate(A):
            if not any(ai):
                continue
            for j, bj in enumerate(B):
                if any(bj):
                    prod = _unram_mul(ai, bj, u, m)
                    r[i + j] = [(s + t) for s, t in zip(r[i + j], prod)]
        for k in range(2 * e - 2, e - 1, -1):
            c = r[k]
            if any(c):
                for t in range(e):
                    prod = _unram_mul(c, self.e_poly[t], u, m)
                    r[k - e + t] = [s - q for s, q in zip(r[k - e + t], prod)]
        return tuple(c % m for j in range(e) for c in r[j])

    def __str__(self):
        return self.label()


def make_field(p: int, f: int = 1, u_poly: Sequence[int] | None = None, e: int = 1,
               e_poly: Sequence | None = None, precision: int = DEFAULT_PRECISION,
               degree_cap: int = DEFAULT_DEGREE_CAP, name: str = "") -> LocalField:
    """Validate a tower presentation and return the corresponding field.

    ``u_poly`` defaults to the lexicographically least monic irreducible of
    degree ``f``. Entries of ``e_poly`` may be integers or coordinate lists
    over the unramified step.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if f < 1 or e < 1:
        raise InputError("residue degree and ramification index must be positive")
    if e * f > degree_cap:
        raise DegreeCapExceeded(f"degree {e * f} exceeds cap {degree_cap}")
    if precision < 1:
        raise InputError("precision must be positive")
    if u_poly is None:
        u_poly = first_irreducible(p, f)
    u_poly = tuple(int(c) for c in u_poly)
    if len(u_poly) != f + 1 or u_poly[-1] != 1:
        raise InputError(f"u_poly must be monic of degree {f}")
    if not is_irreducible_mod_p(u_poly, p):
        raise NotIrreducible(f"{list(u_poly)} is reducible mod {p}")

    if e == 1:
        if e_poly is not None and len(e_poly) > 2:
            raise InputError("e_poly given but e = 1")
        return LocalField(p, f, u_poly, 1, None, precision, name)

    if e_poly is None or len(e_poly) != e + 1:
        raise InputError(f"e_poly must have degree {e}")
    coeffs = []
    for c in e_poly:
        c = [int(c)] if isinstance(c, int) else [int(t) for t in c]
        if len(c) > f:
            raise InputError("e_poly coefficient has too many coordinates")
        coeffs.append(tuple(c + [0] * (f - len(c))))
    if coeffs[-1] != (1,) + (0,) * (f - 1):
        raise NotEisenstein("e_poly must be monic")
    for c in coeffs[:-1]:
        if any(t % p for t in c):
            raise NotEisenstein("non-leading coefficients must be divisible by p")
    if all(t % (p * p) == 0 for t in coeffs[0]):
        raise NotEisenstein("constant term must have valuation exactly 1")
    return LocalField(p, f, u_poly, e, tuple(coeffs), precision, name)


def qp(p: int, precision: int = DEFAULT_PRECISION) -> LocalField:
    return make_field(p, 1, (0, 1), precision=precision, name=f"Q{p}")


def unramified_field(p: int, f: int, precision: int = DEFAULT_PRECISION) -> LocalField:
    return make_field(p, f, first_irreducible(p, f), precision=precision)


# ---------------------------------------------------------------------------
# elements of o_L / p^N

class ResidueElement:
    __slots__ = ("field", "coords")

    def __init__(self, field: LocalField, coords: tuple[int, ...]):
        self.field = field
        self.coords = coords

    def _coerce(self, other) -> "ResidueElement | None":
        if isinstance(other, ResidueElement):
            if other.field != self.field:
                raise InputError("elements of different fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction) and other.denominator % self.field.p:
            return self.field.from_int(other.numerator) * \
                self.field.from_int(other.denominator).inverse()
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = self.field.modulus
        return ResidueElement(self.field, tuple((a + b) % m for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        m = self.field.modulus
        return ResidueElement(self.field, tuple(-a % m for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            m = self.field.modulus
            return ResidueElement(self.field, tuple(a * other % m for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ResidueElement(self.field, self.field._mul_coords(self.coords, o.coords))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, ResidueElement) else other
        if o is None:
            return NotImplemented
        return self.field == o.field and self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"ResidueElement({list(self.coords)})"

    def __str__(self):
        m = self.field.modulus
        if self.field.n == 1:
            return str(balanced(self.coords[0], m))
        return "[" + ", ".join(str(balanced(c, m)) for c in self.coords) + "]"

    # local structure --------------------------------------------------------
    def valuation(self) -> float:
        """pi-adic valuation (``inf`` for zero mod p^N)."""
        F = self.field
        best = INF
        for j in range(F.e):
            block = self.coords[j * F.f:(j + 1) * F.f]
            v = min(int_valuation(c, F.p) for c in block)
            if v != INF:
                best = min(best, F.e * v + j)
        return best

    def is_unit(self) -> bool:
        p = self.field.p
        return any(c % p for c in self.coords[:self.field.f])

    def residue(self) -> tuple[int, ...]:
        """Image in the residue field, as coordinates over F_p."""
        p = self.field.p
        return tuple(c % p for c in self.coords[:self.field.f])

    def inverse(self) -> "ResidueElement":
        if not self.is_unit():
            raise NotAUnit(f"{self} is not a unit")
        F = self.field
        b = self ** (F.residue_size - 2) if F.residue_size > 2 else F.one
        one = F.one
        for _ in range(2 * F.precision.bit_length() + 4 + F.e):
            if self * b == one:
                return b
            b = b * (2 - self * b)
        raise ArithmeticError("Newton inversion failed to converge")  # pragma: no cover

    def div_uniformizer(self) -> "ResidueElement":
        """Exact division by the uniformizer; the top digit becomes unreliable."""
        F = self.field
        p, f, e = F.p, F.f, F.e
        c0 = self.coords[:f]
        if any(c % p for c in c0):
            raise NotDivisible(f"{self} is not divisible by the uniformizer")
        if e == 1:
            return ResidueElement(F, tuple(c // p for c in self.coords))
        # a_0 = p*u0 gives p = -u0^{-1} * y * (y^{e-1} + a_{e-1} y^{e-2} + ... + a_1)
        u0 = F.element(tuple(c // p for c in F.e_poly[0]) + (0,) * (F.n - f))
        tail = F.from_int(0)
        for j in range(1, e + 1):
            tail = tail + F.element(_shift_y(F, F.e_poly[j], j - 1))
        quotient_c0 = F.element(tuple(c // p for c in c0) + (0,) * (F.n - f))
        rest = [0] * F.n
        for j in range(1, e):
            rest[(j - 1) * f:j * f] = self.coords[j * f:(j + 1) * f]
        return F.element(rest) - quotient_c0 * u0.inverse() * tail

    def frobenius(self) -> "ResidueElement":
        return frobenius_apply(self)


def _shift_y(F: LocalField, coeff: tuple[int, ...], j: int) -> tuple[int, ...]:
    out = [0] * F.n
    out[j * F.f:(j + 1) * F.f] = coeff
    return tuple(out)


# ---------------------------------------------------------------------------
# Frobenius, trace, unit groups

def frobenius_lift(field: LocalField) -> ResidueElement:
    """The root ``s`` of ``u_poly`` with ``s = x^p mod p``, by Hensel lifting."""
    if not field.is_unramified:
        raise RamifiedUnsupported("Frobenius lift is implemented for unramified fields")
    return _frobenius_lift(field)


_FROB_CACHE: dict[LocalField, ResidueElement] = {}


def _frobenius_lift(field: LocalField) -> ResidueElement:
    if field in _FROB_CACHE:
        return _FROB_CACHE[field]
    u = field.u_poly
    du = [k * c for k, c in enumerate(u)][1:]

    def ev(poly, s):
        acc = field.zero
        for c in reversed(poly):
            acc = acc * s + c
        return acc

    s = field.x ** field.p
    for _ in range(field.precision.bit_length() + 2):
        s = s - ev(u, s) * ev(du, s).inverse()
    if ev(u, s):  # pragma: no cover
        raise ArithmeticError("Hensel lift did not converge")
    _FROB_CACHE[field] = s
    return s


def frobenius_apply(z: ResidueElement, times: int = 1) -> ResidueElement:
    F = z.field
    if not F.is_unramified:
        raise RamifiedUnsupported("Frobenius is implemented for unramified fields")
    s = _frobenius_lift(F)
    for _ in range(times % F.f if F.f > 1 else 0):
        acc = F.zero
        for c in reversed(z.coords):
            acc = acc * s + c
        z = acc
    return z


def multiplication_matrix(alpha: ResidueElement) -> tuple[tuple[int, ...], ...]:
    """Matrix ``C`` with ``alpha * b_i = sum_j C[j][i] b_j`` in the tower basis."""
    F = alpha.field
    cols = [(alpha * b).coords for b in F.basis()]
    return tuple(tuple(cols[i][j] for i in range(F.n)) for j in range(F.n))


def frobenius_matrix(field: LocalField) -> tuple[tuple[int, ...], ...]:
    cols = [frobenius_apply(b).coords for b in field.basis()]
    return tuple(tuple(cols[i][j] for i in range(field.n)) for j in range(field.n))


def trace(z: ResidueElement) -> int:
    """``Tr_{L/Q_p}`` as the sum of Frobenius conjugates, an integer mod p^N."""
    F = z.field
    if not F.is_unramified:
        raise RamifiedUnsupported("trace is implemented for unramified fields")
    total, conj = F.zero, z
    for _ in range(F.f):
        total = total + conj
        conj = frobenius_apply(conj)
    if any(total.coords[1:]):  # pragma: no cover
        raise ArithmeticError("trace did not land in Z_p")
    return total.coords[0]


def trace_pairing_matrix(field: LocalField, nu: int) -> list[list[int]]:
    """Gram matrix ``Tr(b_i b_j) mod p^nu`` in balanced representatives."""
    if not field.is_unramified:
        raise RamifiedUnsupported("the ramified trace normalization is unresolved")
    F = field.with_precision(nu)
    B = F.basis()
    m = F.modulus
    return [[balanced(trace(bi * bj), m) for bj in B] for bi in B]


@dataclass(frozen=True)
class UnitGroupSample:
    field: LocalField
    level: int
    elements: tuple[ResidueElement, ...]
    matrices: tuple[tuple[tuple[int, ...], ...], ...]

    def __len__(self):
        return len(self.elements)

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {u.coords: i for i, u in enumerate(self.elements)}


def unit_group(field: LocalField, level: int,
               cap: int = DEFAULT_ENUMERATION_CAP) -> UnitGroupSample:
    """All units of ``o_L / p^level`` with their multiplication matrices."""
    F = field.with_precision(level)
    if F.modulus ** F.n > cap:
        raise CapExceeded(f"|o_L/p^{level}| = {F.modulus ** F.n} exceeds cap {cap}")
    units = [z for z in F.elements(cap) if z.is_unit()]
    return UnitGroupSample(F, level, tuple(units),
                           tuple(multiplication_matrix(u) for u in units))


def unit_count(field: LocalField, level: int) -> int:
    return field.p ** (level * field.n) - field.p ** (level * field.n - field.f)


# ---------------------------------------------------------------------------
# coefficient rings for series

class RationalRing:
    mode = "rational"

    def __init__(self, p: int):
        self.p = p
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalRing) and other.p == self.p

    def __hash__(self):
        return hash(("rational", self.p))

    def __repr__(self):
        return f"RationalRing(p={self.p})"

    def coerce(self, c):
        if isinstance(c, LocalRational):
            return c.value
        return Fraction(c)

    def valuation(self, c) -> float:
        return valuation(c, self.p)

    def is_unit(self, c) -> bool:
        return self.valuation(c) == 0

    def invertible(self, c) -> bool:
        return c != 0

    def inverse(self, c):
        return 1 / c


class NFElement:
    """Element of ``Q[x]/(u_poly)`` with rational coordinates."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring: "NumberFieldRing", coords: tuple[Fraction, ...]):
        self.ring = ring
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, NFElement):
            if other.ring != self.ring:
                raise InputError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.coerce(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.ring, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.ring, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return NFElement(self.ring, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return NFElement(self.ring, self.ring._mul(self.coords, o.coords))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.ring.inverse(self) ** (-k)
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __repr__(self):
        return f"NFElement({[str(c) for c in self.coords]})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}")
        return " + ".join(terms).replace("+ -", "- ") or "0"


class NumberFieldRing:
    """``Q[x]/(u_poly)``; integrality means p-integral coordinates."""

    mode = "numberfield"

    def __init__(self, p: int, u_poly: Sequence[int]):
        self.p = p
        self.u_poly = tuple(u_poly)
        self.f = len(self.u_poly) - 1
        self.zero = NFElement(self, (Fraction(0),) * self.f)
        self.one = self.coerce(1)

    @classmethod
    def of_field(cls, field: LocalField) -> "NumberFieldRing":
        if not field.is_unramified:
            raise RamifiedUnsupported("number-field mode covers the unramified step only")
        return cls(field.p, field.u_poly)

    def __eq__(self, other):
        return isinstance(other, NumberFieldRing) and other.p == self.p \
            and other.u_poly == self.u_poly

    def __hash__(self):
        return hash(("numberfield", self.p, self.u_poly))

    def __repr__(self):
        return f"NumberFieldRing(p={self.p}, u={list(self.u_poly)})"

    @property
    def x(self) -> NFElement:
        if self.f == 1:
            return self.coerce(-self.u_poly[0])
        return self.element([0, 1])

    def element(self, coords: Sequence) -> NFElement:
        coords = [Fraction(c) for c in coords]
        if len(coords) > self.f:
            raise InputError("too many coordinates")
        return NFElement(self, tuple(coords + [Fraction(0)] * (self.f - len(coords))))

    def coerce(self, c) -> NFElement:
        if isinstance(c, NFElement):
            return c
        if isinstance(c, LocalRational):
            c = c.value
        return NFElement(self, (Fraction(c),) + (Fraction(0),) * (self.f - 1))

    def _mul(self, a, b):
        f, u = self.f, self.u_poly
        if f == 1:
            return (a[0] * b[0],)
        r = [Fraction(0)] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        r[i + j] += ai * bj
        for k in range(2 * f - 2, f - 1, -1):
            c = r[k]
            if c:
                for t in range(f):
                    r[k - f + t] -= c * u[t]
        return tuple(r[:f])

    def valuation(self, c: NFElement) -> float:
        return min(valuation(t, self.p) for t in c.coords)

    def is_unit(self, c: NFElement) -> bool:
        if self.valuation(c) != 0:
            return False
        p = self.p
        # residues mod p of the p-integral coordinates
        red = [t.numerator * pow(t.denominator, -1, p) % p for t in c.coords]
        return any(red)

    def invertible(self, c) -> bool:
        return bool(c)

    def inverse(self, c: NFElement) -> NFElement:
        """Inverse via the multiplication matrix (exact linear algebra over Q)."""
        if not c:
            raise NotAUnit("zero is not invertible")
        f = self.f
        basis = [self.element([0] * i + [1]) for i in range(f)]
        cols = [(c * b).coords for b in basis]
        # solve M v = e_0 where M[j][i] = cols[i][j]
        M = [[cols[i][j] for i in range(f)] + [Fraction(int(j == 0))] for j in range(f)]
        for col in range(f):
            piv = next(r for r in range(col, f) if M[r][col] != 0)
            M[col], M[piv] = M[piv], M[col]
            inv = 1 / M[col][col]
            M[col] = [t * inv for t in M[col]]
            for r in range(f):
                if r != col and M[r][col] != 0:
                    fac = M[r][col]
                    M[r] = [a - fac * b for a, b in zip(M[r], M[col])]
        return NFElement(self, tuple(M[j][f] for j in range(f)))


class ResidueRing:
    mode = "residue"

    def __init__(self, field: LocalField):
        self.field = field
        self.p = field.p
        self.zero = field.zero
        self.one = field.one

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and other.field == self.field

    def __hash__(self):
        return hash(("residue", self.field))

    def __repr__(self):
        return f"ResidueRing({self.field.label()}, N={self.field.precision})"

    def coerce(self, c) -> ResidueElement:
        if isinstance(c, ResidueElement):
            if c.field != self.field:
                raise InputError("element of a different field")
            return c
        if isinstance(c, int):
            return self.field.from_int(c)
        if isinstance(c, (Fraction, LocalRational)):
            c = Fraction(c.value if isinstance(c, LocalRational) else c)
            if c.denominator % self.p == 0:
                raise NotAUnit(f"{c} is not p-integral")
            return self.field.from_int(c.numerator) * self.field.from_int(c.denominator).inverse()
        raise InputError(f"cannot coerce {c!r} into {self}")

    def valuation(self, c: ResidueElement) -> float:
        return c.valuation()

    def is_unit(self, c: ResidueElement) -> bool:
        return c.is_unit()

    def invertible(self, c) -> bool:
        return c.is_unit()

    def inverse(self, c: ResidueElement) -> ResidueElement:
        return c.inverse()


def ring_arithmetic(a: ResidueElement, b: ResidueElement | None, op: str) -> ResidueElement:
    """Dispatch ``add``/``mul``/``invert`` on residue elements."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert":
        return a.inverse()
    raise InputError(f"unknown operation {op!r}")
