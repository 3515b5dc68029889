"""FastAPI application exposing the toolkit as a JSON service.

Run with:  uvicorn heisext.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import CertificateError, HeisextError, InvalidParamsError, NumericalError
from . import handlers
from .models import (
    ClassifyRequest,
    ClassifyResponse,
    FuzzRequest,
    FuzzResponse,
    InvariantsRequest,
    InvariantsResponse,
    RepcheckRequest,
    RepcheckResponse,
    Table1Request,
    Table1Response,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(
    title="heisext",
    version=__version__,
    description="Group arithmetic, classification invariants and representation "
                "checks for two-parameter dilation extensions of the Heisenberg group.",
)


def _guard(fn, request):
    try:
        return fn(request)
    except (InvalidParamsError, CertificateError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except NumericalError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    except HeisextError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/validate", response_model=ValidateResponse)
def validate(request: ValidateRequest) -> ValidateResponse:
    return _guard(handlers.run_validate, request)


@app.post("/invariants", response_model=InvariantsResponse)
def invariants(request: InvariantsRequest) -> InvariantsResponse:
    return _guard(handlers.run_invariants, request)


@app.post("/classify", response_model=ClassifyResponse)
def classify(request: ClassifyRequest) -> ClassifyResponse:
    return _guard(handlers.run_classify, request)


@app.post("/table1", response_model=Table1Response)
def table1(request: Table1Request) -> Table1Response:
    try:
        return _guard(handlers.run_table1, request)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/fuzz", response_model=FuzzResponse)
def fuzz(request: FuzzRequest) -> FuzzResponse:
    return _guard(handlers.run_fuzz, request)


@app.post("/repcheck", response_model=RepcheckResponse)
def repcheck(request: RepcheckRequest) -> RepcheckResponse:
    return _guard(handlers.run_repcheck, request)
