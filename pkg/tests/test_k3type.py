import random
from fractions import Fraction

import pytest

from k3cm.errors import NonMaximalOrder, NotEven, NotPositiveDefinite
from k3cm.k3type import (
    K3Type,
    check_disc_group_iso,
    discriminant_ideal,
    enumerate_non_big,
    enumerate_types,
    extract_type,
    gram_of_type,
    grams_isometric,
    has_big_discriminant,
    kernel_of_unit_map,
    make_type,
    normalize_type,
    types_equivalent,
)
from k3cm.quadfield import OIdeal, make_field


def sqrt_trace_gram(d, basis, alpha):
    """Oracle: Gram of tr(alpha x conj(y)) computed in the sqrt(d) basis.

    Elements are pairs (p, q) = (p + q*sqrt(d))/2 with p, q rational halves
    avoided by working over Fractions directly.
    """
    def conj(v):
        return (v[0], -v[1])

    def mul(u, v):
        return (u[0] * v[0] + d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    def trace(v):
        return 2 * v[0]

    return [
        [trace(mul((Fraction(alpha), Fraction(0)), mul(x, conj(y)))) for y in basis]
        for x in basis
    ]


def test_extract_type_fermat():
    t = extract_type([[8, 0], [0, 8]])
    assert t.field.d == -4
    assert t.ideal == t.field.maximal_order()
    assert t.alpha == 4


def test_extract_type_qm7():
    t = extract_type([[2, 1], [1, 4]])
    assert t.field.d == -7
    assert t.ideal == t.field.maximal_order()
    assert t.alpha == 1
    # oracle: recompute the Gram by direct trace evaluation on 1, (1+sqrt(-7))/2
    basis = [(Fraction(1), Fraction(0)), (Fraction(1, 2), Fraction(1, 2))]
    assert sqrt_trace_gram(-7, basis, 1) == [[2, 1], [1, 4]]


def test_extract_type_normalizes_non_reduced_gram():
    # the Gram on the raw HNF basis of (O, 4) over d = -4 is GL2-equivalent
    # to the diagonal form and must produce the identical normalized type
    assert extract_type([[8, -16], [-16, 40]]) == extract_type([[8, 0], [0, 8]])


def test_extract_type_rejects_non_maximal():
    with pytest.raises(NonMaximalOrder):
        extract_type([[2, 0], [0, 8]])  # primitive form x^2 + 4y^2, disc -16


def test_make_type_validates_pairing():
    from fractions import Fraction as F

    from k3cm.errors import MixedFields, NotIntegralPairing

    field = make_field(-4)
    with pytest.raises(NotIntegralPairing):
        make_type(field, field.maximal_order(), F(1, 3))
    with pytest.raises(NotPositiveDefinite):
        make_type(field, field.maximal_order(), -1)
    with pytest.raises(MixedFields):
        K3Type(field, make_field(-7).maximal_order(), F(1))
    with pytest.raises(MixedFields):
        types_equivalent(
            make_type(field, field.maximal_order(), 1),
            make_type(make_field(-7), make_field(-7).maximal_order(), 1),
        )


def test_extract_type_rejects_bad_grams():
    with pytest.raises(NotEven):
        extract_type([[1, 0], [0, 2]])
    with pytest.raises(NotPositiveDefinite):
        extract_type([[2, 0], [0, -2]])
    with pytest.raises(NotEven):
        extract_type([[2, 1], [2, 2]])


def test_gram_of_type_fermat():
    t = make_type(make_field(-4), make_field(-4).maximal_order(), 4)
    assert gram_of_type(t) == ((8, 0), (0, 8))


def test_gram_of_type_qm7():
    t = make_type(make_field(-7), make_field(-7).maximal_order(), 1)
    assert gram_of_type(t) == ((2, 1), (1, 4))


def test_gram_of_type_eisenstein():
    t = make_type(make_field(-3), make_field(-3).maximal_order(), 1)
    assert gram_of_type(t) == ((2, 1), (1, 2))


def test_gram_of_type_gaussian_unit_alpha():
    t = make_type(make_field(-4), make_field(-4).maximal_order(), 1)
    assert gram_of_type(t) == ((2, 0), (0, 2))


def test_round_trip_extract_gram():
    total = 0
    for d in (-3, -4, -7, -8, -11, -15, -20, -23):
        field = make_field(d)
        for t in enumerate_types(field, 25000):
            gram = gram_of_type(t)
            back = extract_type(gram)
            assert types_equivalent(t, back)
            assert grams_isometric(gram, gram_of_type(back))
            total += 1
    assert total >= 500


def test_types_equivalent_examples():
    field = make_field(-4)
    order = field.maximal_order()
    t_fermat = make_type(field, order, 4)
    assert types_equivalent(t_fermat, t_fermat)
    # (1+i)^{-1} Z[i] with alpha = 8 is the same surface via e = 1+i
    one_plus_i = field.element(3, 1)
    scaled = make_type(field, OIdeal.principal(one_plus_i).inverse(), 8)
    assert types_equivalent(scaled, t_fermat)
    assert types_equivalent(t_fermat, scaled)


def test_types_inequivalent_across_classes():
    field = make_field(-20)
    order_type = make_type(field, field.maximal_order(), 1)
    nonprincipal = OIdeal.from_generators([field.element(2), field.element(11, 1)])
    other = make_type(field, nonprincipal, Fraction(1, 2))
    assert not types_equivalent(order_type, other)
    # norms match (both have D = D_E) so the obstruction is principality
    assert discriminant_ideal(order_type) == discriminant_ideal(other)


def test_types_equivalent_brute_force_oracle():
    # search e = (p + q*w)/r over a small height box and compare verdicts
    rng = random.Random(12)
    field = make_field(-20)
    types = enumerate_types(field, 2000)
    for _ in range(40):
        t1 = rng.choice(types)
        t2 = rng.choice(types)
        found = False
        for p in range(-6, 7):
            for q in range(-6, 7):
                for r in (1, 2, 3, 4):
                    e = field.element(Fraction(p, r), Fraction(q, r))
                    if e.is_zero():
                        continue
                    image_ideal = t1.ideal * OIdeal.principal(e).inverse()
                    image_alpha = t1.alpha * e.norm()
                    if image_ideal == t2.ideal and image_alpha == t2.alpha:
                        found = True
        if found:
            assert types_equivalent(t1, t2)
        # the box search can miss witnesses, so only the positive direction binds


def test_types_equivalence_is_equivalence_relation():
    rng = random.Random(5)
    field = make_field(-23)
    types = enumerate_types(field, 4000)
    for t in types:
        assert types_equivalent(t, t)
    for _ in range(80):
        t1, t2, t3 = rng.choice(types), rng.choice(types), rng.choice(types)
        assert types_equivalent(t1, t2) == types_equivalent(t2, t1)
        if types_equivalent(t1, t2) and types_equivalent(t2, t3):
            assert types_equivalent(t1, t3)


def test_discriminant_ideal_examples():
    f4 = make_field(-4)
    t = make_type(f4, f4.maximal_order(), 4)
    assert discriminant_ideal(t) == OIdeal.principal(f4.element(8))

    f7 = make_field(-7)
    t7 = make_type(f7, f7.maximal_order(), 1)
    assert discriminant_ideal(t7) == f7.different()

    f8 = make_field(-8)
    t8 = make_type(f8, f8.maximal_order(), 1)
    # (2 sqrt(-2)) = (sqrt(-8)) = the different
    assert discriminant_ideal(t8) == f8.different()
    assert discriminant_ideal(t8).norm() == 8


def test_discriminant_ideal_invariants():
    rng = random.Random(31)
    for d in (-3, -4, -7, -8, -15, -20, -23):
        field = make_field(d)
        for t in enumerate_types(field, 3000):
            disc = discriminant_ideal(t)
            assert disc.is_integral
            assert disc.conjugate() == disc
            assert field.different().contains_ideal(disc)
            assert disc.norm() == t.level ** 2 * abs(d)


def test_disc_group_iso_fermat():
    report = check_disc_group_iso(make_type(make_field(-4), make_field(-4).maximal_order(), 4))
    assert report.passed
    assert report.lattice_divisors == (8, 8)
    assert report.lattice_order == 64
    assert report.discriminant_norm == 64


def test_disc_group_iso_qm7():
    report = check_disc_group_iso(make_type(make_field(-7), make_field(-7).maximal_order(), 1))
    assert report.passed
    assert report.lattice_divisors == (7,)


def test_disc_group_iso_different_general():
    # type (O_E, 1): the discriminant group is O_E / D_E
    for d in (-3, -4, -7, -8, -11, -20):
        field = make_field(d)
        report = check_disc_group_iso(make_type(field, field.maximal_order(), 1))
        assert report.passed
        assert report.discriminant_norm == abs(d)


def test_kernel_of_unit_map_examples():
    f4 = make_field(-4)
    eight = OIdeal.principal(f4.element(8))
    assert kernel_of_unit_map(f4, eight) == (f4.one(),)
    two = OIdeal.principal(f4.element(2))
    kernel = kernel_of_unit_map(f4, two)
    assert set(kernel) == {f4.one(), -f4.one()}

    f3 = make_field(-3)
    kernel3 = kernel_of_unit_map(f3, f3.different())
    assert len(kernel3) == 3
    assert all((z * z * z) == f3.one() for z in kernel3)


def test_has_big_discriminant_examples():
    f4 = make_field(-4)
    assert has_big_discriminant(make_type(f4, f4.maximal_order(), 4))
    assert not has_big_discriminant(make_type(f4, f4.maximal_order(), 1))
    f3 = make_field(-3)
    assert not has_big_discriminant(make_type(f3, f3.maximal_order(), 1))
    f7 = make_field(-7)
    assert has_big_discriminant(make_type(f7, f7.maximal_order(), 1))


def test_enumerate_types_gaussian():
    field = make_field(-4)
    types = enumerate_types(field, 16)
    assert len(types) == 2
    assert [t.level for t in types] == [1, 2]
    discs = [discriminant_ideal(t) for t in types]
    assert discs[0] == OIdeal.principal(field.element(2))
    assert discs[1] == OIdeal.principal(field.element(4))


def test_enumerate_types_eisenstein():
    field = make_field(-3)
    types = enumerate_types(field, 3)
    assert len(types) == 1
    assert types[0].ideal == field.maximal_order()
    assert types[0].alpha == 1


def test_enumerate_types_complete_and_irredundant():
    for d in (-4, -15, -20, -23):
        field = make_field(d)
        types = enumerate_types(field, 4000)
        expected = field.class_number() * int((4000 / abs(d)) ** 0.5)
        assert len(types) == expected
        for i, t1 in enumerate(types):
            for t2 in types[i + 1:]:
                assert not types_equivalent(t1, t2)
        # every type with this norm bound is equivalent to a listed one
        assert all(int(discriminant_ideal(t).norm()) <= 4000 for t in types)


def test_normalize_type_is_canonical():
    field = make_field(-20)
    nonprincipal = OIdeal.from_generators([field.element(2), field.element(11, 1)])
    t = make_type(field, nonprincipal.scale(Fraction(3, 7)), Fraction(49, 18))
    normalized = normalize_type(t)
    assert types_equivalent(t, normalized)
    assert normalized.ideal.is_integral and normalized.ideal.c == 1
    assert normalize_type(normalized) == normalized


def test_enumerate_non_big():
    f4 = make_field(-4)
    non_big = enumerate_non_big(f4)
    assert len(non_big) == 1
    assert non_big[0].ideal == f4.maximal_order() and non_big[0].alpha == 1

    f3 = make_field(-3)
    non_big3 = enumerate_non_big(f3)
    assert len(non_big3) == 1
    assert non_big3[0].ideal == f3.maximal_order() and non_big3[0].alpha == 1

    assert enumerate_non_big(make_field(-7)) == []
    assert enumerate_non_big(make_field(-20)) == []


def test_kernel_norm_bound_is_what_it_claims():
    # any modulus with non-injective unit map divides some (zeta - 1), so its
    # norm is at most max Nm(zeta - 1); sample ideals above the bound
    from k3cm.k3type import max_non_injective_norm
    from k3cm.quadfield import enumerate_ideals

    for d in (-3, -4, -7, -20):
        field = make_field(d)
        bound = max_non_injective_norm(field)
        assert bound <= 4
        for ideal in enumerate_ideals(field, 60):
            if int(ideal.norm()) > bound:
                assert kernel_of_unit_map(field, ideal) == (field.one(),)


def test_enumerate_non_big_matches_filter():
    # the kernel bound: beyond max Nm(zeta - 1) every type is automatically big
    for d in (-3, -4, -7, -8, -20):
        field = make_field(d)
        filtered = [
            t for t in enumerate_types(field, 400) if not has_big_discriminant(t)
        ]
        assert enumerate_non_big(field) == filtered
