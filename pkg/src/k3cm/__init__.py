"""Arithmetic invariants of CM K3 surfaces over imaginary quadratic fields."""

from .errors import K3CMError
from .k3type import (
    K3Type,
    discriminant_ideal,
    enumerate_non_big,
    enumerate_types,
    extract_type,
    gram_of_type,
    has_big_discriminant,
    make_type,
    types_equivalent,
)
from .quadfield import FieldElement, ImaginaryQuadraticField, OIdeal, make_field
from .rayclass import (
    k3_class_field_degree,
    model_over_E,
    ray_class_group,
    residue_units,
)

__version__ = "0.1.0"

__all__ = [
    "K3CMError",
    "K3Type",
    "FieldElement",
    "ImaginaryQuadraticField",
    "OIdeal",
    "make_field",
    "make_type",
    "extract_type",
    "gram_of_type",
    "types_equivalent",
    "discriminant_ideal",
    "has_big_discriminant",
    "enumerate_types",
    "enumerate_non_big",
    "ray_class_group",
    "residue_units",
    "k3_class_field_degree",
    "model_over_E",
    "__version__",
]
