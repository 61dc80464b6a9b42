"""FastAPI service wrapping the exact-computation core.

Endpoints mirror the CLI verbs: expand, eval, root, radial, enumerate,
verify, plus a catalog listing.  Handlers are synchronous (they run in the
threadpool) since the work is CPU-bound exact arithmetic.  Domain errors map
to HTTP 400 with a one-line message.
"""

from __future__ import annotations

from fractions import Fraction
from functools import wraps

import mpmath
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from . import numeric, partitions, roots, series, verify
from .algebra import BigComplex, CycloElem
from .errors import QlabError
from .schemas import (
    CatalogResponse,
    CountDoc,
    DiscrepancyDoc,
    EnumerateRequest,
    ErrorResponse,
    EvalRequest,
    EvalResponse,
    ExpandRequest,
    RadialReportDoc,
    RadialRequest,
    RadialSampleDoc,
    RootRequest,
    SeriesDoc,
    SuiteReportDoc,
    TableDoc,
    ValueDoc,
    VerifyRequest,
    VerifyResponse,
    fraction_str,
    mpf_str,
    parse_fraction,
    series_doc,
    value_doc,
)
from .zexpr import parse_z_expr

_CLI_SERIES_NAMES = {
    "f": "f",
    "b": "b",
    "g3": "g3_forward",
    "g3inv": "g3_inverted",
    "u": "U_k",
    "utilde": "Utilde_k",
    "crank": "crank_gf",
    "jbracket": "jbracket",
    "triple": "triple_product",
}


def _domain_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (QlabError, ValueError, ZeroDivisionError) as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})

    return wrapper


def _suite_report_doc(rep) -> SuiteReportDoc:
    return SuiteReportDoc(
        id=rep.id,
        strategy=rep.strategy,
        passed=rep.passed,
        order=rep.order,
        tolerance=rep.tolerance,
        first_discrepancy=None
        if rep.first_discrepancy is None
        else DiscrepancyDoc(**rep.first_discrepancy.to_json_dict()),
        runtime_seconds=round(rep.runtime_seconds, 4),
        detail=rep.detail,
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="qlab",
        description="Exact q-series computation and verification service",
        version="0.1.0",
    )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/catalog", response_model=CatalogResponse)
    def catalog():
        return CatalogResponse(series=sorted(_CLI_SERIES_NAMES), suites=verify.suite_ids())

    @app.post("/expand", response_model=SeriesDoc,
              responses={400: {"model": ErrorResponse}})
    @_domain_errors
    def expand(req: ExpandRequest):
        name = _CLI_SERIES_NAMES.get(req.series, req.series)
        s = series.by_name(name, req.order, fold=req.k, form=req.form)
        return series_doc(s)

    @app.post("/eval", response_model=EvalResponse, response_model_exclude_none=True,
              responses={400: {"model": ErrorResponse}})
    @_domain_errors
    def eval_series(req: EvalRequest):
        name = _CLI_SERIES_NAMES.get(req.series, req.series)
        bits = req.precision_bits
        q0 = BigComplex.from_rational(parse_fraction(req.q), bits)
        z0 = parse_z_expr(req.z) if req.z is not None else None
        result = series.eval_numeric(name, z0, q0, order=req.order, bits=bits, fold=req.k)
        return EvalResponse(
            value=value_doc(result.value),
            tail_estimate=mpf_str(result.tail_estimate, 64),
        )

    @app.post("/root", response_model=ValueDoc, response_model_exclude_none=True,
              responses={400: {"model": ErrorResponse}})
    @_domain_errors
    def root(req: RootRequest):
        bits = req.precision_bits
        if req.series == "f":
            val = roots.f_at_odd_root(req.m, req.form)
        else:
            if req.z is None:
                raise ValueError(f"series {req.series!r} needs a z-expression")
            z = parse_z_expr(req.z)
            if req.series == "g3":
                val = roots.g3_at_root(z, req.m, bits)
            else:
                val = roots.uk_at_root(req.k, z, req.m, bits)
        if not req.exact and isinstance(val, CycloElem):
            val = val.embed(bits)
        return value_doc(val, bits)

    @app.post("/radial", response_model=RadialReportDoc,
              responses={400: {"model": ErrorResponse}})
    @_domain_errors
    def radial(req: RadialRequest):
        bits = req.precision_bits
        if req.rho is not None:
            rhos = tuple(parse_fraction(r) for r in req.rho)
            sched = roots.RadialSchedule(req.m, rhos, bits)
        else:
            sched = roots.default_radial_schedule(req.m, req.j_lo, req.j_hi, bits)
        z = parse_z_expr(req.z) if req.z is not None else None
        name = {"g3": "g3_forward", "g3inv": "g3_inverted",
                "u": "U_k", "utilde": "Utilde_k"}.get(req.series, req.series)
        if name in ("f", "b"):
            evaluator = lambda q: numeric.series_value(name, None, q, bits)
        else:
            if z is None:
                raise ValueError(f"series {req.series!r} needs a z-expression")
            evaluator = lambda q: numeric.series_value(name, z, q, bits, fold=req.k)
        report = roots.radial_limit(evaluator, sched)
        doc = report.to_json_dict()
        return RadialReportDoc(
            target_m=doc["target_m"],
            samples=[RadialSampleDoc(**s) for s in doc["samples"]],
            estimate=doc["estimate"],
            error_bound=doc["error_bound"],
            unreliable=doc["unreliable"],
        )

    @app.post("/enumerate", response_model=TableDoc,
              responses={400: {"model": ErrorResponse}})
    @_domain_errors
    def enumerate_tables(req: EnumerateRequest):
        table = partitions.unimodal_counts(req.max_weight, req.k, req.strong)
        doc = table.to_json_dict()
        return TableDoc(
            strong=doc["strong"],
            k=doc["k"],
            max_weight=doc["max_weight"],
            counts=[CountDoc(**c) for c in doc["counts"]],
        )

    @app.post("/verify", response_model=VerifyResponse,
              responses={400: {"model": ErrorResponse}})
    @_domain_errors
    def run_verify(req: VerifyRequest):
        reports = verify.run_all(req.order, ids=req.suites)
        return VerifyResponse(
            reports=[_suite_report_doc(r) for r in reports],
            all_passed=all(r.passed for r in reports),
        )

    return app


app = create_app()
