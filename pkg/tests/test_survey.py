import json
import random
from fractions import Fraction

import pytest

from k3cm.errors import InconsistentInvariants, InvalidInput, InvalidPrimePower
from k3cm.quadfield import make_field
from k3cm.survey import (
    finiteness_search,
    growth_ratio_report,
    point_count_bounds,
    supersingular_point_count,
    verify_all,
    verify_class_number_one_models,
    verify_exceptional_classification,
    verify_fermat_quartic,
)


def test_verify_fermat_quartic_passes():
    report = verify_fermat_quartic()
    assert report.passed
    assert len(report.checks) == 6
    assert all(c.source in ("golden", "derived") for c in report.checks)


def test_verify_class_number_one_passes():
    report = verify_class_number_one_models()
    assert report.passed
    asserted = [c for c in report.checks if c.source != "info"]
    assert len(asserted) == 4 * 7
    info = [c for c in report.checks if c.source == "info"]
    assert len(info) == 1
    # the documentation strings ride along on the model rows
    equations = [c.note for c in report.checks if "model over E" in c.name]
    assert all("y^2 = x^3" in note for note in equations)


def test_verify_exceptional_classification_passes():
    report = verify_exceptional_classification(disc_bound=60)
    assert report.passed


def test_reports_serialize_with_tags():
    payload = json.dumps([r.to_dict() for r in verify_all()], sort_keys=True)
    data = json.loads(payload)
    assert all("checks" in report for report in data)
    sources = {c["source"] for report in data for c in report["checks"]}
    assert "golden" in sources and "info" in sources


def test_fermat_degree_check_fails_on_wrong_gram():
    # replacing the Fermat lattice with [[2,0],[0,2]] must break the pipeline:
    # that type has small discriminant, so the degree-2 expectation cannot hold
    from k3cm.k3type import discriminant_ideal, extract_type
    from k3cm.rayclass import k3_class_field_degree

    t = extract_type([[2, 0], [0, 2]])
    disc = discriminant_ideal(t)
    assert int(disc.norm()) == 4  # D = (2), not (8)
    assert k3_class_field_degree(t.field, disc) == 1  # not 2


# ----- point counts -----

def test_supersingular_point_count_values():
    assert supersingular_point_count(2) == 49
    assert supersingular_point_count(3) == 76
    assert supersingular_point_count(5) == 136


def test_supersingular_point_count_validation():
    with pytest.raises(InvalidPrimePower):
        supersingular_point_count(6)
    with pytest.raises(InvalidPrimePower):
        supersingular_point_count(1)
    assert supersingular_point_count(8) == 64 + 176 + 1
    assert supersingular_point_count(9) == 81 + 198 + 1


def test_point_count_bounds_example():
    # q = 2, rho = 20, deg 2: 4 + 2*(20 - 2) + 1 = 41 up to 4 + 2*22 + 1 = 49
    bounds = point_count_bounds(2, 20, 2)
    assert bounds.minimum == 41
    assert bounds.maximum == 49
    assert bounds.hensel_ok


def test_point_count_bounds_positive():
    for q in (2, 3, 5, 7, 11, 13):
        bounds = point_count_bounds(q, 20, 2)
        assert 0 < bounds.minimum <= bounds.maximum


def test_point_count_bounds_hensel_flag():
    assert not point_count_bounds(2, 6, 16).hensel_ok
    assert point_count_bounds(19, 6, 16).hensel_ok
    assert point_count_bounds(2, 10, 12).hensel_ok


def test_point_count_bounds_validation():
    with pytest.raises(InconsistentInvariants):
        point_count_bounds(2, 19, 2)
    with pytest.raises(InvalidInput):
        point_count_bounds(2, 19, 3)
    with pytest.raises(InvalidInput):
        point_count_bounds(1, 20, 2)


def test_point_count_random_substitution():
    rng = random.Random(42)
    for _ in range(100):
        deg_e = 2 * rng.randrange(1, 11)
        rho = 22 - deg_e
        q = rng.randrange(2, 200)
        bounds = point_count_bounds(q, rho, deg_e)
        assert bounds.minimum == q * q + q * (rho - deg_e) + 1
        assert bounds.maximum == q * q + q * (rho + deg_e) + 1
        # every count q^2 + q*rho + q*t + 1 with |t| <= deg_e sits inside
        for t in range(-deg_e, deg_e + 1):
            assert bounds.minimum <= q * q + q * rho + q * t + 1 <= bounds.maximum
        # supersingular counts sit inside the interval when rho = 20, deg 2
        if deg_e == 2:
            count = q * q + 22 * q + 1
            assert bounds.minimum <= count <= bounds.maximum


# ----- finiteness search -----

def test_finiteness_search_class_number_one_window():
    entries = finiteness_search(1, 200)
    found_d = [e.d for e in entries]
    assert found_d == [-3, -4, -7, -8, -11, -19, -43, -67, -163]
    for entry in entries:
        assert entry.class_number == 1
        for row in entry.rows:
            assert row.ratio <= 1
            assert row.type_count == 1
    # even discriminants have phi(m) lagging by a factor 2: no ideal passes
    by_d = {e.d: e for e in entries}
    assert by_d[-4].rows == ()
    assert by_d[-8].rows == ()
    assert by_d[-163].rows and by_d[-163].rows[0].level == 1


def test_finiteness_search_qm7_levels():
    entry = next(e for e in finiteness_search(1, 8) if e.d == -7)
    # level 1 passes with ratio 6/6 = 1; level 2 also passes because 2 splits
    # and phi_E((2)) = 1, giving ratio 6/phi(14) = 1; level 3 onward fail
    assert [r.level for r in entry.rows] == [1, 2]
    assert all(r.ratio == 1 for r in entry.rows)


def test_finiteness_search_monotone():
    small = finiteness_search(1, 50)
    bigger = finiteness_search(2, 80)
    small_keys = {(e.d, r.level) for e in small for r in e.rows}
    bigger_keys = {(e.d, r.level) for e in bigger for r in e.rows}
    assert small_keys <= bigger_keys
    assert {e.d for e in small} <= {e.d for e in bigger}


def test_finiteness_search_empty_cases():
    assert finiteness_search(0, 100) == []
    with pytest.raises(InvalidInput):
        finiteness_search(1, 2)


# ----- growth ratios -----

def test_growth_ratio_report_qm7():
    field = make_field(-7)
    report = growth_ratio_report(field, 1000)
    assert report.rows
    assert 0 < report.min_ratio <= report.max_ratio
    # level-1 type: ramified modulus, phi_E(D_E) = phi(|d|), ratio = degree = 1
    first = report.rows[0]
    assert first.disc_norm == 7
    assert first.phi_ratio == 1
    assert first.ratio == first.degree == 1


def test_growth_ratio_report_empty():
    field = make_field(-3)
    report = growth_ratio_report(field, 2)  # below Nm(D_E) = 3
    assert report.rows == ()
    assert report.min_ratio is None


def test_growth_ratio_degree_consistency():
    from k3cm.k3type import discriminant_ideal, enumerate_types, has_big_discriminant
    from k3cm.rayclass import k3_class_field_degree

    field = make_field(-8)
    report = growth_ratio_report(field, 800)
    expected_rows = [
        t for t in enumerate_types(field, 800) if has_big_discriminant(t)
    ]
    assert len(report.rows) == len(expected_rows)
    for row, t in zip(report.rows, expected_rows):
        assert row.degree == k3_class_field_degree(field, discriminant_ideal(t))
        assert row.ratio == Fraction(row.degree) / row.phi_ratio
