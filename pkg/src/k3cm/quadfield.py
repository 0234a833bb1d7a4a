"""Exact arithmetic in imaginary quadratic fields.

Conventions, fixed once for the whole package:

* d is a negative fundamental discriminant and w = (d + sqrt(d))/2, so the
  maximal order is Z + Z*w, w^2 = d*w - (d^2 - d)/4, and conj(w) = d - w.
* The complex embedding sends sqrt(d) to +i*|d|^(1/2).
* A fractional ideal is stored as (c/den) * (Z*a + Z*(b + w)) with
  a, c, den > 0, 0 <= b < a and a | Nm(b + w); this Hermite-normal-form
  triple with gcd(c, den) = 1 is a canonical representative, so ideal
  equality is plain field-by-field equality.

Elements carry Fraction coordinates; ideal arithmetic is pure integer work
on the triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .abelian import FiniteAbelianGroup, structure_from_elements
from .errors import (
    InvalidInput,
    MixedFields,
    NotFundamental,
    NotImaginary,
)
from .intmath import factorize, is_fundamental_discriminant, kronecker, sqrt_mod
from .matrices import hnf_pair_basis

_FIELD_CACHE: dict[int, "ImaginaryQuadraticField"] = {}
_CLASS_GROUP_CACHE: dict[int, "ClassGroup"] = {}


@dataclass(frozen=True)
class ImaginaryQuadraticField:
    d: int

    @property
    def norm_const(self) -> int:
        """Nm(w) = w * conj(w) = (d^2 - d)/4."""
        return (self.d * self.d - self.d) // 4

    def element(self, x, y=0) -> "FieldElement":
        return FieldElement(self, Fraction(x), Fraction(y))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def sqrt_d(self) -> "FieldElement":
        return self.element(-self.d, 2)

    def maximal_order(self) -> "OIdeal":
        return OIdeal(self, 1, 1, 0, 1)

    def different(self) -> "OIdeal":
        """The different ideal (sqrt(d))."""
        return OIdeal.principal(self.sqrt_d())

    def roots_of_unity(self) -> tuple["FieldElement", ...]:
        """All units of the maximal order (the group is finite here)."""
        units = []
        n0 = self.norm_const
        for y in range(-1, 2):
            # x^2 + d*x*y + n0*y^2 = 1
            disc = (self.d * y) ** 2 - 4 * (n0 * y * y - 1)
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc:
                continue
            for sign in (1, -1):
                num = -self.d * y + sign * r
                if num % 2 == 0:
                    units.append(self.element(num // 2, y))
        return tuple(sorted(set(units), key=lambda u: (u.x, u.y)))

    def mu_generator(self) -> "FieldElement":
        """A generator of the (cyclic) group of roots of unity."""
        best = None
        best_order = 0
        for u in self.roots_of_unity():
            order = 1
            power = u
            while power != self.one():
                power = power * u
                order += 1
            if order > best_order:
                best, best_order = u, order
        return best

    def class_group(self) -> "ClassGroup":
        cg = _CLASS_GROUP_CACHE.get(self.d)
        if cg is None:
            cg = ClassGroup(self)
            _CLASS_GROUP_CACHE[self.d] = cg
        return cg

    def class_number(self) -> int:
        return len(self.class_group().forms)

    def primes_above(self, p: int) -> tuple["OIdeal", ...]:
        """Prime ideals over the rational prime p, tagged by splitting."""
        chi = kronecker(self.d, p)
        if chi == -1:
            return (OIdeal(self, 1, 1, 0, p),)
        n0 = self.norm_const
        if p == 2:
            roots = [b for b in range(2) if (b * b + self.d * b + n0) % 2 == 0]
        else:
            r = sqrt_mod(self.d, p)
            inv2 = pow(2, p - 2, p)
            roots = sorted({(-self.d + s) * inv2 % p for s in (r, -r)})
        ideals = tuple(OIdeal(self, 1, p, b, 1) for b in roots)
        if chi == 0:
            return ideals[:1]
        return ideals

    def splitting(self, p: int) -> str:
        chi = kronecker(self.d, p)
        return {1: "split", -1: "inert", 0: "ramified"}[chi]

    def __repr__(self):
        radicand = self.d // 4 if self.d % 4 == 0 else self.d
        return f"Q(sqrt({radicand}))"


def make_field(d: int) -> ImaginaryQuadraticField:
    """The imaginary quadratic field of fundamental discriminant d."""
    if d >= 0:
        raise NotImaginary(f"discriminant must be negative, got {d}")
    if not is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    field = _FIELD_CACHE.get(d)
    if field is None:
        field = ImaginaryQuadraticField(d)
        _FIELD_CACHE[d] = field
    return field


@dataclass(frozen=True)
class FieldElement:
    """x + y*w with rational x, y."""

    field: ImaginaryQuadraticField
    x: Fraction
    y: Fraction

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, self.x - other.x, self.y - other.y)

    def __neg__(self):
        return FieldElement(self.field, -self.x, -self.y)

    def __mul__(self, other):
        other = self._coerce(other)
        d, n0 = self.field.d, self.field.norm_const
        x = self.x * other.x - n0 * self.y * other.y
        y = self.x * other.y + self.y * other.x + d * self.y * other.y
        return FieldElement(self.field, x, y)

    def __truediv__(self, other):
        other = self._coerce(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero field element")
        return self * other.conjugate() * FieldElement(self.field, Fraction(1, 1) / n, Fraction(0))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise MixedFields("elements of different fields")
            return other
        return FieldElement(self.field, Fraction(other), Fraction(0))

    def conjugate(self) -> "FieldElement":
        return FieldElement(self.field, self.x + self.field.d * self.y, -self.y)

    def norm(self) -> Fraction:
        d, n0 = self.field.d, self.field.norm_const
        return self.x * self.x + d * self.x * self.y + n0 * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x + self.field.d * self.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def __hash__(self):
        return hash((self.field.d, self.x, self.y))


@dataclass(frozen=True)
class OIdeal:
    """Fractional ideal (c/den) * (Z*a + Z*(b + w)) in canonical form."""

    field: ImaginaryQuadraticField
    den: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.den <= 0 or self.a <= 0 or self.c <= 0:
            raise InvalidInput("ideal must be nonzero with positive HNF entries")
        if not 0 <= self.b < self.a:
            raise InvalidInput("HNF triple not reduced: need 0 <= b < a")
        n0 = self.field.norm_const
        if (self.b * self.b + self.field.d * self.b + n0) % self.a != 0:
            raise InvalidInput("HNF triple is not an O_E-module")
        g = gcd(self.c, self.den)
        if g != 1:
            raise InvalidInput("unnormalized ideal: gcd(c, den) must be 1")

    @classmethod
    def _normalized(cls, field, den, a, b, c) -> "OIdeal":
        g = gcd(c, den)
        return cls(field, den // g, a, b % a, c // g)

    @classmethod
    def from_hnf(cls, field, a, b, c, den=1) -> "OIdeal":
        return cls._normalized(field, den, a, b % a, c)

    @classmethod
    def from_generators(cls, elements) -> "OIdeal":
        """The fractional ideal generated by the given field elements."""
        elements = [e for e in elements if not e.is_zero()]
        if not elements:
            raise InvalidInput("zero ideal")
        field = elements[0].field
        d, n0 = field.d, field.norm_const
        rows = []
        denom = 1
        for e in elements:
            if e.field != field:
                raise MixedFields("generators from different fields")
            ew_x, ew_y = -n0 * e.y, e.x + d * e.y  # e * w
            for x, y in ((e.x, e.y), (ew_x, ew_y)):
                denom = denom * (x.denominator * y.denominator) // gcd(
                    denom, x.denominator * y.denominator
                )
        for e in elements:
            ew_x, ew_y = -n0 * e.y, e.x + d * e.y
            for x, y in ((e.x, e.y), (ew_x, ew_y)):
                rows.append((int(x * denom), int(y * denom)))
        basis = hnf_pair_basis(rows)
        if basis is None:
            raise InvalidInput("generators do not span a rank-2 module")
        big_a, big_b, big_c = basis
        if big_a % big_c != 0 or big_b % big_c != 0:
            raise InvalidInput("generated module is not an O_E-ideal")
        a = big_a // big_c
        return cls._normalized(field, denom, a, (big_b // big_c) % a, big_c)

    @classmethod
    def principal(cls, element) -> "OIdeal":
        return cls.from_generators([element])

    # ----- basic invariants -----

    @property
    def is_integral(self) -> bool:
        return self.den == 1

    def norm(self) -> Fraction:
        return Fraction(self.a * self.c * self.c, self.den * self.den)

    def basis_elements(self) -> tuple[FieldElement, FieldElement]:
        f = self.field
        return (
            FieldElement(f, Fraction(self.a * self.c, self.den), Fraction(0)),
            FieldElement(f, Fraction(self.b * self.c, self.den), Fraction(self.c, self.den)),
        )

    def smallest_positive_integer(self) -> Fraction:
        """Positive generator of (this ideal) intersected with Q."""
        return Fraction(self.a * self.c, self.den)

    # ----- arithmetic -----

    def _check_field(self, other: "OIdeal"):
        if self.field != other.field:
            raise MixedFields("ideals over different fields")

    def __mul__(self, other: "OIdeal") -> "OIdeal":
        self._check_field(other)
        d, n0 = self.field.d, self.field.norm_const
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        rows = [
            (a1 * a2, 0),
            (a1 * b2, a1),
            (a2 * b1, a2),
            (b1 * b2 - n0, b1 + b2 + d),
        ]
        big_a, big_b, big_c = hnf_pair_basis(rows)
        a = big_a // big_c
        return OIdeal._normalized(
            self.field,
            self.den * other.den,
            a,
            (big_b // big_c) % a,
            self.c * other.c * big_c,
        )

    def __add__(self, other: "OIdeal") -> "OIdeal":
        self._check_field(other)
        s1, s2 = self.c * other.den, other.c * self.den
        rows = [
            (self.a * s1, 0),
            (self.b * s1, s1),
            (other.a * s2, 0),
            (other.b * s2, s2),
        ]
        big_a, big_b, big_c = hnf_pair_basis(rows)
        a = big_a // big_c
        return OIdeal._normalized(
            self.field, self.den * other.den, a, (big_b // big_c) % a, big_c
        )

    def intersection(self, other: "OIdeal") -> "OIdeal":
        # gcd * lcm = product in a Dedekind domain
        return self * other * (self + other).inverse()

    def conjugate(self) -> "OIdeal":
        b = (-self.b - self.field.d) % self.a
        return OIdeal(self.field, self.den, self.a, b, self.c)

    def scale(self, factor: Fraction) -> "OIdeal":
        """Multiply by the principal ideal of a positive rational."""
        factor = Fraction(factor)
        if factor <= 0:
            raise InvalidInput("scale factor must be positive")
        return OIdeal._normalized(
            self.field,
            self.den * factor.denominator,
            self.a,
            self.b,
            self.c * factor.numerator,
        )

    def inverse(self) -> "OIdeal":
        return self.conjugate().scale(1 / self.norm())

    def __pow__(self, n: int) -> "OIdeal":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.maximal_order()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # ----- predicates -----

    def contains(self, element: FieldElement) -> bool:
        x = element.x * self.den
        y = element.y * self.den
        if x.denominator != 1 or y.denominator != 1:
            return False
        x, y = int(x), int(y)
        if y % self.c != 0:
            return False
        n = y // self.c
        return (x - n * self.b * self.c) % (self.a * self.c) == 0

    def contains_ideal(self, other: "OIdeal") -> bool:
        self._check_field(other)
        return all(self.contains(e) for e in other.basis_elements())

    def is_coprime_to(self, other: "OIdeal") -> bool:
        return (self + other) == self.field.maximal_order()

    def is_principal(self) -> FieldElement | None:
        """A generator if the ideal is principal, else None.

        Searches for an element of the ideal whose norm equals the ideal
        norm; such an element exists exactly in the principal case because
        containment plus equal norm forces equality of ideals.
        """
        d, n0 = self.field.d, self.field.norm_const
        a, b = self.a, self.b
        qa = a * a
        qb = a * (2 * b + d)
        qc = b * b + d * b + n0
        n_bound = isqrt(4 * a // -d)
        for n in range(n_bound + 1):
            disc = qb * qb * n * n - 4 * qa * (qc * n * n - a)
            if disc < 0:
                continue
            r = isqrt(disc)
            if r * r != disc:
                continue
            for sign in (1, -1):
                num = -qb * n + sign * r
                if num % (2 * qa) == 0:
                    m = num // (2 * qa)
                    if m == 0 and n == 0:
                        continue
                    return FieldElement(
                        self.field,
                        Fraction((m * a + n * b) * self.c, self.den),
                        Fraction(n * self.c, self.den),
                    )
        return None

    # ----- factorization -----

    def valuation(self, prime: "OIdeal") -> int:
        """Valuation at a prime ideal (works for fractional ideals)."""
        num = self.scale(Fraction(self.den))  # integral: self * den
        v = 0
        while prime.contains_ideal(num):
            num = num * prime.inverse()
            v += 1
        den_ideal = OIdeal(self.field, 1, 1, 0, self.den)
        w = 0
        while prime.contains_ideal(den_ideal):
            den_ideal = den_ideal * prime.inverse()
            w += 1
        return v - w

    def factor(self, rho_iterations=None) -> list[tuple["OIdeal", int]]:
        """Prime factorization of an integral ideal, sorted by norm.

        Raises FactorizationIncomplete if the norm resists the configured
        factoring effort.
        """
        if not self.is_integral:
            raise InvalidInput("factor expects an integral ideal")
        kwargs = {} if rho_iterations is None else {"rho_iterations": rho_iterations}
        n = int(self.norm())
        result = []
        for p in factorize(n, **kwargs):
            for prime in self.field.primes_above(p):
                v = self.valuation(prime)
                if v:
                    result.append((prime, v))
        result.sort(key=lambda pv: (int(pv[0].norm()), pv[0].a, pv[0].b, pv[0].c))
        return result

    def __repr__(self):
        return f"{self.den}:[{self.a},{self.b},{self.c}]"


def enumerate_ideals(field: ImaginaryQuadraticField, norm_bound: int) -> list[OIdeal]:
    """All integral ideals of norm <= norm_bound, sorted by (norm, triple)."""
    d, n0 = field.d, field.norm_const
    found = []
    for a in range(1, norm_bound + 1):
        for b in range(a):
            if (b * b + d * b + n0) % a != 0:
                continue
            c = 1
            while a * c * c <= norm_bound:
                found.append(OIdeal(field, 1, a, b, c))
                c += 1
    found.sort(key=lambda idl: (int(idl.norm()), idl.a, idl.b, idl.c))
    return found


# ----- binary quadratic forms and the class group -----


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Gauss reduction of a positive definite integral form."""
    while True:
        if -a < b <= a <= c and not (a == c and b < 0):
            return a, b, c
        if b > a or b <= -a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a


def reduced_forms(d: int) -> list[tuple[int, int, int]]:
    """All primitive reduced forms of negative discriminant d."""
    forms = []
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b - d) % 2 != 0:
                continue
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
        a += 1
    return sorted(forms)


def ideal_of_form(field: ImaginaryQuadraticField, form: tuple[int, int, int]) -> OIdeal:
    """The primitive ideal Z*a + Z*((b + sqrt(d))/2) of the form (a, b, c)."""
    a, b, _ = form
    return OIdeal(field, 1, a, ((b - field.d) // 2) % a, 1)


def form_of_ideal(ideal: OIdeal) -> tuple[int, int, int]:
    """Reduced form of the ideal class (den and content are irrelevant)."""
    field = ideal.field
    a, b = ideal.a, ideal.b
    n0 = field.norm_const
    big_b = 2 * b + field.d
    big_c = (b * b + field.d * b + n0) // a
    return reduce_form(a, big_b, big_c)


class ClassGroup:
    """Ideal class group, with reduced-form representatives and discrete log."""

    def __init__(self, field: ImaginaryQuadraticField):
        self.field = field
        self.forms = tuple(reduced_forms(field.d))
        principal = reduce_form(1, field.d % 2, (((field.d % 2) ** 2) - field.d) // 4)

        def compose(f1, f2):
            return form_of_ideal(ideal_of_form(field, f1) * ideal_of_form(field, f2))

        self._structure = structure_from_elements(list(self.forms), compose, principal)
        self.group: FiniteAbelianGroup = self._structure.group

    @property
    def h(self) -> int:
        return len(self.forms)

    def log(self, ideal: OIdeal) -> tuple[int, ...]:
        if ideal.field != self.field:
            raise MixedFields("ideal over a different field")
        return self._structure.log(form_of_ideal(ideal))

    def log_form(self, form) -> tuple[int, ...]:
        return self._structure.log(reduce_form(*form))

    def generator_ideals(self) -> tuple[OIdeal, ...]:
        return tuple(ideal_of_form(self.field, f) for f in self._structure.generators)

    def representative(self, vec) -> OIdeal:
        """The reduced-form ideal representing the class with chain coords vec."""
        acc = self.field.maximal_order()
        for ideal, e in zip(self.generator_ideals(), vec):
            acc = acc * ideal ** int(e)
        return ideal_of_form(self.field, form_of_ideal(acc))
