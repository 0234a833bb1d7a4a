"""Types of singular K3 surfaces with CM by a maximal imaginary quadratic order.

A type is a triple (E, I, alpha): a fractional ideal I of O_E and a positive
rational alpha such that the trace pairing tr(alpha * x * conj(y)) on I is
integral and even; this pairing is the intersection form of the rank-2
transcendental lattice.  The discriminant ideal is

    D = (alpha) * I * conj(I) * D_E,

an integral conjugation-stable ideal with O_E / D isomorphic to the
discriminant group of the lattice.  Because I * conj(I) = (Nm I), the
discriminant ideal is always k * D_E for the positive integer
k = alpha * Nm(I), which drives the enumeration routines.

A type "has big discriminant" when the roots of unity of E inject into
(O_E / D)^x; exactly two types over all imaginary quadratic fields fail
this, and the classification here recomputes that fact rather than citing
it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import (
    MixedFields,
    NonMaximalOrder,
    NotEven,
    NotIntegralPairing,
    NotPositiveDefinite,
)
from .intmath import is_fundamental_discriminant
from .lattice import IntegerLattice, discriminant_form
from .matrices import smith_normal_form
from .quadfield import (
    FieldElement,
    ImaginaryQuadraticField,
    OIdeal,
    ideal_of_form,
    make_field,
    reduce_form,
)


@dataclass(frozen=True)
class K3Type:
    field: ImaginaryQuadraticField
    ideal: OIdeal
    alpha: Fraction

    def __post_init__(self):
        if self.ideal.field != self.field:
            raise MixedFields("ideal belongs to a different field")
        if self.alpha <= 0:
            raise NotPositiveDefinite("alpha must be positive")
        if (self.alpha * self.ideal.norm()).denominator != 1:
            raise NotIntegralPairing(
                "trace pairing is not integral and even on the ideal"
            )

    @property
    def level(self) -> int:
        """k = alpha * Nm(I); the discriminant ideal is k * D_E."""
        return int(self.alpha * self.ideal.norm())

    def __repr__(self):
        return f"(d={self.field.d}; I={self.ideal!r}; alpha={self.alpha})"


def make_type(field: ImaginaryQuadraticField, ideal: OIdeal, alpha) -> K3Type:
    return K3Type(field, ideal, Fraction(alpha))


def discriminant_ideal(t: K3Type) -> OIdeal:
    """D = (alpha) * I * conj(I) * D_E, integral and conjugation-stable."""
    product = t.ideal * t.ideal.conjugate() * t.field.different()
    return product.scale(t.alpha)


def normalize_type(t: K3Type) -> K3Type:
    """Canonical representative of the equivalence class of t.

    The ideal is replaced by the reduced-form representative of its class
    (the integral primitive ideal of minimal norm) and alpha is rescaled to
    keep the pairing.
    """
    cg = t.field.class_group()
    rep = cg.representative(cg.log(t.ideal))
    alpha = t.alpha * t.ideal.norm() / rep.norm()
    return K3Type(t.field, rep, alpha)


def types_equivalent(t1: K3Type, t2: K3Type) -> bool:
    """Whether some e in E^x carries t1 to t2 (J = I/e, beta = e conj(e) alpha)."""
    if t1.field != t2.field:
        raise MixedFields("types over different fields")
    quotient = t1.ideal * t2.ideal.inverse()
    if quotient.norm() != t2.alpha / t1.alpha:
        return False
    return quotient.is_principal() is not None


# ----- Gram matrices -----


def _halved_form(gram) -> tuple[int, int, int]:
    """The integral binary form (a, b, c) with even Gram [[2a, b], [b, 2c]]."""
    if len(gram) != 2 or any(len(row) != 2 for row in gram):
        raise NotEven("expected a 2x2 Gram matrix")
    g11, g12, g21, g22 = gram[0][0], gram[0][1], gram[1][0], gram[1][1]
    if g12 != g21:
        raise NotEven("Gram matrix must be symmetric")
    if g11 % 2 or g22 % 2:
        raise NotEven("transcendental lattice must be even")
    return g11 // 2, g12, g22 // 2


def extract_type(gram) -> K3Type:
    """The type of the surface with transcendental lattice `gram`.

    The primitive part of the halved form must have fundamental
    discriminant; otherwise the Hodge endomorphism order is non-maximal and
    the surface is rejected as NonMaximalOrder.
    """
    a, b, c = _halved_form(gram)
    if a <= 0 or 4 * a * c - b * b <= 0:
        raise NotPositiveDefinite("transcendental lattice must be positive definite")
    content = gcd(gcd(a, abs(b)), c)
    a0, b0, c0 = a // content, b // content, c // content
    d = b0 * b0 - 4 * a0 * c0
    if not is_fundamental_discriminant(d):
        raise NonMaximalOrder(
            f"primitive form has non-fundamental discriminant {d}"
        )
    field = make_field(d)
    # basis (a0, (b0 + sqrt(d))/2) of the ideal below realizes the input Gram
    ideal = OIdeal(field, 1, a0, ((b0 - d) // 2) % a0, 1)
    return normalize_type(K3Type(field, ideal, Fraction(content, a0)))


def raw_gram_of_type(t: K3Type) -> tuple[tuple[int, int], tuple[int, int]]:
    """Gram of tr(alpha * x * conj(y)) on the stored HNF basis of the ideal."""
    v1, v2 = t.ideal.basis_elements()
    alpha = t.field.element(t.alpha)

    def pair(u, v) -> int:
        value = (alpha * u * v.conjugate()).trace()
        if value.denominator != 1:
            raise NotIntegralPairing("trace pairing is not integral on the ideal")
        return int(value)

    g11, g12, g22 = pair(v1, v1), pair(v1, v2), pair(v2, v2)
    if g11 % 2 or g22 % 2:
        raise NotIntegralPairing("trace pairing is not even on the ideal")
    return ((g11, g12), (g12, g22))


def gram_of_type(t: K3Type) -> tuple[tuple[int, int], tuple[int, int]]:
    """Reduced (canonical) Gram matrix of the transcendental lattice of t.

    Reduction is proper (SL2), which keeps the orientation consistent with
    extract_type: flipping the sign of the off-diagonal entry would replace
    the type by its conjugate, a generally inequivalent type.
    """
    (g11, g12), (_, g22) = raw_gram_of_type(t)
    a, b, c = reduce_form(g11 // 2, g12, g22 // 2)
    return ((2 * a, b), (b, 2 * c))


def grams_isometric(g1, g2) -> bool:
    """Isometry of positive definite even rank-2 lattices, via reduced forms."""
    forms = []
    for g in (g1, g2):
        a, b, c = _halved_form(g)
        a, b, c = reduce_form(a, b, c)
        forms.append((a, abs(b), c))
    return forms[0] == forms[1]


# ----- discriminant group comparison -----


@dataclass(frozen=True)
class DiscGroupReport:
    """Cross-check of the lattice discriminant group against O_E / D."""

    lattice_divisors: tuple[int, ...]
    quotient_divisors: tuple[int, ...]
    lattice_order: int
    discriminant_norm: int

    @property
    def passed(self) -> bool:
        return (
            self.lattice_divisors == self.quotient_divisors
            and self.lattice_order == self.discriminant_norm
        )


def quotient_group_structure(ideal: OIdeal) -> tuple[int, ...]:
    """Elementary divisor chain of O_E / ideal (ideal integral)."""
    rows = [
        [ideal.a * ideal.c, 0],
        [ideal.b * ideal.c, ideal.c],
    ]
    diag = smith_normal_form(rows).diagonal
    return tuple(x for x in diag if x > 1)


def check_disc_group_iso(t: K3Type) -> DiscGroupReport:
    gram = gram_of_type(t)
    form = discriminant_form(IntegerLattice.from_rows(gram))
    disc = discriminant_ideal(t)
    return DiscGroupReport(
        lattice_divisors=form.group.divisors,
        quotient_divisors=quotient_group_structure(disc),
        lattice_order=form.group.order,
        discriminant_norm=int(disc.norm()),
    )


# ----- big discriminant -----


def kernel_of_unit_map(
    field: ImaginaryQuadraticField, ideal: OIdeal
) -> tuple[FieldElement, ...]:
    """{zeta in mu(E) : zeta = 1 mod ideal}, the kernel of mu(E) -> (O/I)^x."""
    return tuple(
        zeta for zeta in field.roots_of_unity() if ideal.contains(zeta - field.one())
    )


def has_big_discriminant(t: K3Type) -> bool:
    return len(kernel_of_unit_map(t.field, discriminant_ideal(t))) == 1


# ----- enumeration -----


def enumerate_types(field: ImaginaryQuadraticField, norm_bound: int) -> list[K3Type]:
    """All inequivalent types with Nm(D) <= norm_bound.

    Since D = k * D_E with k = alpha * Nm(I), the possible discriminant
    norms are k^2 * |d|; for each k and each ideal class representative J
    there is exactly one type (J, k / Nm(J)).
    """
    if norm_bound < -field.d:
        return []
    cg = field.class_group()
    reps = [ideal_of_form(field, f) for f in cg.forms]
    k_max = isqrt(norm_bound // -field.d)
    types = []
    for k in range(1, k_max + 1):
        for rep in reps:
            types.append(K3Type(field, rep, Fraction(k) / rep.norm()))
    types.sort(
        key=lambda t: (
            int(discriminant_ideal(t).norm()),
            (t.ideal.a, t.ideal.b, t.ideal.c, t.ideal.den),
            t.alpha,
        )
    )
    return types


def max_non_injective_norm(field: ImaginaryQuadraticField) -> int:
    """Largest possible Nm(D) for which mu(E) -> (O/D)^x can fail to inject.

    If zeta != 1 lies in the kernel then D divides (zeta - 1), so
    Nm(D) <= max Nm(zeta - 1) over nontrivial roots of unity.
    """
    bound = 0
    one = field.one()
    for zeta in field.roots_of_unity():
        if zeta != one:
            bound = max(bound, int((zeta - one).norm()))
    return bound


def enumerate_non_big(field: ImaginaryQuadraticField) -> list[K3Type]:
    """The finitely many inequivalent types over E without big discriminant."""
    bound = max_non_injective_norm(field)
    return [
        t for t in enumerate_types(field, bound) if not has_big_discriminant(t)
    ]
