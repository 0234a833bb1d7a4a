"""Pydantic request/response models for the service."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..rayclass import DEFAULT_RESIDUE_CAP


class AnalyzeRequest(BaseModel):
    gram: str | None = None
    type_text: str | None = Field(default=None, alias="type")
    residue_cap: int = DEFAULT_RESIDUE_CAP
    factor_cap: int = 10 ** 6

    model_config = {"populate_by_name": True}


class RayClassRequest(BaseModel):
    d: int
    modulus: str
    residue_cap: int = DEFAULT_RESIDUE_CAP
    factor_cap: int = 10 ** 6


class EnumerateRequest(BaseModel):
    d: int
    norm_bound: int = 100
    residue_cap: int = DEFAULT_RESIDUE_CAP


class VerifyRequest(BaseModel):
    disc_bound: int = 400


class SearchRequest(BaseModel):
    max_ratio: int = 1
    disc_bound: int = 200


class PointCountRequest(BaseModel):
    q: int
    rho: int | None = None
    deg_e: int | None = None


class GrowthRequest(BaseModel):
    d: int
    norm_bound: int = 1000
    residue_cap: int = DEFAULT_RESIDUE_CAP


class FieldInfo(BaseModel):
    d: int
    label: str
    class_number: int
    roots_of_unity: int


class TypeInfo(BaseModel):
    text: str
    ideal: str
    alpha: str
    level: int


class IdealInfo(BaseModel):
    text: str
    norm: int
    smallest_integer: int


class RayClassReport(BaseModel):
    schema_: str = Field(alias="schema")
    modulus: str
    modulus_norm: int
    divisors: list[int]
    order: int
    generators: list[str]
    residue_unit_order: int
    conjugation: list[list[int]] | None = None
    fixed_subgroup_order: int | None = None
    fixed_subgroup_divisors: list[int] | None = None
    class_field_degree: int | None = None
    note: str | None = None

    model_config = {"populate_by_name": True}


class ModelVerdictInfo(BaseModel):
    applicable: bool
    admits_model: bool | None
    reason: str


class DegreeFormulaInfo(BaseModel):
    h: int
    phi_disc: int
    m: int
    phi_m: int
    norm_unit_index: int
    unit_congruence_index: int
    e_factor: int
    formula_without_h1: str
    residual_h1: str


class AnalyzeResponse(BaseModel):
    schema_: str = Field(alias="schema")
    field_info: FieldInfo = Field(alias="field")
    type_info: TypeInfo = Field(alias="type")
    gram: list[list[int]]
    discriminant_ideal: IdealInfo
    big_discriminant: bool
    unit_kernel: list[str]
    ray_class_group: RayClassReport
    class_field_degree: int
    model_over_E: ModelVerdictInfo
    degree_formula: DegreeFormulaInfo | None = None

    model_config = {"populate_by_name": True}


class EnumeratedType(BaseModel):
    text: str
    disc_norm: int
    big_discriminant: bool


class EnumerateResponse(BaseModel):
    schema_: str = Field(alias="schema", default="enumerate@1")
    d: int
    norm_bound: int
    types: list[EnumeratedType]

    model_config = {"populate_by_name": True}


class CheckInfo(BaseModel):
    name: str
    expected: str
    computed: str
    passed: bool
    source: str
    note: str = ""


class ReportInfo(BaseModel):
    title: str
    passed: bool
    checks: list[CheckInfo]


class VerifyResponse(BaseModel):
    schema_: str = Field(alias="schema", default="verify@1")
    passed: bool
    reports: list[ReportInfo]

    model_config = {"populate_by_name": True}


class SearchRow(BaseModel):
    level: int
    ideal: str
    disc_norm: int
    ratio: str
    type_count: int


class SearchFieldEntry(BaseModel):
    d: int
    class_number: int
    rows: list[SearchRow]


class SearchResponse(BaseModel):
    schema_: str = Field(alias="schema", default="search@1")
    max_ratio: int
    disc_bound: int
    fields: list[SearchFieldEntry]

    model_config = {"populate_by_name": True}


class PointCountResponse(BaseModel):
    schema_: str = Field(alias="schema", default="pointcount@1")
    q: int
    mode: str
    count: int | None = None
    minimum: int | None = None
    maximum: int | None = None
    hensel_ok: bool | None = None

    model_config = {"populate_by_name": True}


class GrowthRow(BaseModel):
    type_text: str
    disc_norm: int
    degree: int
    phi_ratio: str
    ratio: str


class GrowthResponse(BaseModel):
    schema_: str = Field(alias="schema", default="growth@1")
    d: int
    norm_bound: int
    rows: list[GrowthRow]
    min_ratio: str | None
    max_ratio: str | None

    model_config = {"populate_by_name": True}


class HealthResponse(BaseModel):
    schema_: str = Field(alias="schema", default="health@1")
    status: str = "ok"
    version: str

    model_config = {"populate_by_name": True}
