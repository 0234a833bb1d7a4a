"""FastAPI service exposing the library; the CLI is a client of this app.

Domain errors map to HTTP 400 (unparseable input) or 422 (valid input the
mathematics rejects) with a stable JSON error body carrying the error name
and the CLI exit code.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..analysis import analyze_type, ray_class_report
from ..errors import InvalidInput, K3CMError, ParseError
from ..intmath import rho_iteration_cap
from ..k3type import discriminant_ideal, enumerate_types, extract_type, has_big_discriminant
from ..quadfield import make_field
from ..rayclass import ray_class_group
from ..survey import (
    finiteness_search,
    growth_ratio_report,
    point_count_bounds,
    supersingular_point_count,
    verify_all,
)
from ..textforms import format_type, parse_gram, parse_ideal, parse_type
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    EnumerateRequest,
    EnumerateResponse,
    GrowthRequest,
    GrowthResponse,
    HealthResponse,
    PointCountRequest,
    PointCountResponse,
    RayClassRequest,
    RayClassReport,
    SearchRequest,
    SearchResponse,
    VerifyRequest,
    VerifyResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="k3cm",
        version=__version__,
        description=(
            "Arithmetic invariants of CM K3 surfaces over imaginary quadratic "
            "fields: types, discriminant ideals, ray class groups and fields "
            "of definition"
        ),
    )

    @app.exception_handler(K3CMError)
    async def domain_error_handler(_, exc: K3CMError):
        status = 400 if isinstance(exc, ParseError) else 422
        return JSONResponse(
            status_code=status,
            content={
                "schema": "error@1",
                "error": exc.name,
                "code": exc.exit_code,
                "detail": str(exc),
            },
        )

    @app.get("/health", response_model=HealthResponse, response_model_by_alias=True)
    def health():
        return HealthResponse(version=__version__)

    @app.post("/analyze", response_model=AnalyzeResponse, response_model_by_alias=True)
    def analyze(request: AnalyzeRequest):
        if (request.gram is None) == (request.type_text is None):
            raise ParseError("provide exactly one of 'gram' or 'type'")
        with rho_iteration_cap(request.factor_cap):
            if request.gram is not None:
                t = extract_type(parse_gram(request.gram))
            else:
                t = parse_type(request.type_text)
            return analyze_type(t, request.residue_cap)

    @app.post("/rayclass", response_model=RayClassReport, response_model_by_alias=True)
    def rayclass(request: RayClassRequest):
        field = make_field(request.d)
        modulus = parse_ideal(field, request.modulus)
        if not modulus.is_integral:
            raise InvalidInput("ray class modulus must be an integral ideal")
        with rho_iteration_cap(request.factor_cap):
            rcg = ray_class_group(field, modulus, request.residue_cap)
            return ray_class_report(rcg)

    @app.post("/enumerate", response_model=EnumerateResponse, response_model_by_alias=True)
    def enumerate_(request: EnumerateRequest):
        field = make_field(request.d)
        types = enumerate_types(field, request.norm_bound)
        return {
            "schema": "enumerate@1",
            "d": request.d,
            "norm_bound": request.norm_bound,
            "types": [
                {
                    "text": format_type(t),
                    "disc_norm": int(discriminant_ideal(t).norm()),
                    "big_discriminant": has_big_discriminant(t),
                }
                for t in types
            ],
        }

    @app.post("/verify", response_model=VerifyResponse, response_model_by_alias=True)
    def verify(request: VerifyRequest):
        reports = verify_all(request.disc_bound)
        return {
            "schema": "verify@1",
            "passed": all(r.passed for r in reports),
            "reports": [r.to_dict() for r in reports],
        }

    @app.post("/search", response_model=SearchResponse, response_model_by_alias=True)
    def search(request: SearchRequest):
        entries = finiteness_search(request.max_ratio, request.disc_bound)
        return {
            "schema": "search@1",
            "max_ratio": request.max_ratio,
            "disc_bound": request.disc_bound,
            "fields": [
                {
                    "d": entry.d,
                    "class_number": entry.class_number,
                    "rows": [
                        {
                            "level": row.level,
                            "ideal": row.ideal,
                            "disc_norm": row.disc_norm,
                            "ratio": str(row.ratio),
                            "type_count": row.type_count,
                        }
                        for row in entry.rows
                    ],
                }
                for entry in entries
            ],
        }

    @app.post("/pointcount", response_model=PointCountResponse, response_model_by_alias=True)
    def pointcount(request: PointCountRequest):
        if (request.rho is None) != (request.deg_e is None):
            raise ParseError("provide both 'rho' and 'deg_e' or neither")
        if request.rho is None:
            return {
                "schema": "pointcount@1",
                "q": request.q,
                "mode": "supersingular",
                "count": supersingular_point_count(request.q),
            }
        bounds = point_count_bounds(request.q, request.rho, request.deg_e)
        return {
            "schema": "pointcount@1",
            "q": request.q,
            "mode": "bounds",
            "minimum": bounds.minimum,
            "maximum": bounds.maximum,
            "hensel_ok": bounds.hensel_ok,
        }

    @app.post("/growth", response_model=GrowthResponse, response_model_by_alias=True)
    def growth(request: GrowthRequest):
        field = make_field(request.d)
        report = growth_ratio_report(field, request.norm_bound)
        return {
            "schema": "growth@1",
            "d": request.d,
            "norm_bound": request.norm_bound,
            "rows": [
                {
                    "type_text": row.type_text,
                    "disc_norm": row.disc_norm,
                    "degree": row.degree,
                    "phi_ratio": str(row.phi_ratio),
                    "ratio": str(row.ratio),
                }
                for row in report.rows
            ],
            "min_ratio": None if report.min_ratio is None else str(report.min_ratio),
            "max_ratio": None if report.max_ratio is None else str(report.max_ratio),
        }

    return app


app = create_app()
