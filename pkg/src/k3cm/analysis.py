"""Composite reports: everything the service and CLI print about a surface.

The analyze report chains the whole pipeline together: type extraction,
discriminant ideal, big-discriminant predicate, ray class group with
conjugation, class field degree and the model-over-E verdict.  Output is a
plain JSON-ready dict with a schema tag; the service validates it against
its pydantic response models and the CLI renders either form.
"""

from __future__ import annotations

from .errors import K3CMError
from .k3type import K3Type, discriminant_ideal, gram_of_type, kernel_of_unit_map
from .rayclass import (
    DEFAULT_RESIDUE_CAP,
    RayClassGroup,
    degree_formula_factors,
    ray_class_group,
)
from .textforms import format_element, format_ideal, format_type

ANALYZE_SCHEMA = "analyze@1"
RAYCLASS_SCHEMA = "rayclass@1"


def ray_class_report(rcg: RayClassGroup) -> dict:
    """JSON form of a ray class group: divisors, generators, conjugation."""
    try:
        generator_texts = [format_ideal(g) for g in rcg.generator_ideals()]
    except K3CMError:
        generator_texts = []
    report = {
        "schema": RAYCLASS_SCHEMA,
        "modulus": format_ideal(rcg.modulus),
        "modulus_norm": int(rcg.modulus.norm()),
        "divisors": list(rcg.group.divisors),
        "order": rcg.group.order,
        "generators": generator_texts,
        "residue_unit_order": rcg.units.order,
    }
    if rcg.is_conjugation_stable():
        matrix = rcg.conjugation_matrix()
        fixed = rcg.fixed_subgroup()
        report["conjugation"] = [list(row) for row in matrix]
        report["fixed_subgroup_order"] = fixed.group.order
        report["fixed_subgroup_divisors"] = list(fixed.group.divisors)
        report["class_field_degree"] = rcg.group.order // fixed.group.order
    else:
        report["conjugation"] = None
        report["note"] = "modulus is not conjugation-stable; no conjugation action"
    return report


def analyze_type(t: K3Type, residue_cap: int = DEFAULT_RESIDUE_CAP) -> dict:
    field = t.field
    disc = discriminant_ideal(t)
    kernel = kernel_of_unit_map(field, disc)
    big = len(kernel) == 1
    rcg = ray_class_group(field, disc, residue_cap)
    rc_report = ray_class_report(rcg)
    degree = rc_report["class_field_degree"]
    report = {
        "schema": ANALYZE_SCHEMA,
        "field": {
            "d": field.d,
            "label": repr(field),
            "class_number": field.class_number(),
            "roots_of_unity": len(field.roots_of_unity()),
        },
        "type": {
            "text": format_type(t),
            "ideal": format_ideal(t.ideal),
            "alpha": str(t.alpha),
            "level": t.level,
        },
        "gram": [list(row) for row in gram_of_type(t)],
        "discriminant_ideal": {
            "text": format_ideal(disc),
            "norm": int(disc.norm()),
            "smallest_integer": disc.a * disc.c,
        },
        "big_discriminant": big,
        "unit_kernel": [format_element(z) for z in kernel],
        "ray_class_group": rc_report,
        "class_field_degree": degree,
    }
    if big:
        admits = degree == 1
        report["model_over_E"] = {
            "applicable": True,
            "admits_model": admits,
            "reason": (
                "conjugation acts trivially on the ray class group"
                if admits
                else f"conjugation moves ray classes; minimal field degree {degree}"
            ),
        }
        factors = degree_formula_factors(t, residue_cap)
        report["degree_formula"] = {
            "h": factors.h,
            "phi_disc": factors.phi_disc,
            "m": factors.m,
            "phi_m": factors.phi_m,
            "norm_unit_index": factors.norm_unit_index,
            "unit_congruence_index": factors.unit_congruence_index,
            "e_factor": factors.e_factor,
            "formula_without_h1": str(factors.formula_without_h1),
            "residual_h1": str(factors.residual_h1),
        }
    else:
        report["model_over_E"] = {
            "applicable": False,
            "admits_model": None,
            "reason": (
                "roots of unity do not inject modulo the discriminant ideal; "
                "the canonical-model criterion needs big discriminant "
                "(descend with a level-structure modulus instead)"
            ),
        }
    return report
