"""Pydantic request/response models of the service API."""

from __future__ import annotations

from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..classify import Certificate
from ..extension import DilationParams


class ParamsModel(BaseModel):
    """Wire form of a parameter set: {"n": 1, "p": [1, 0], "B1": [[...]], "B2": [[...]]}."""

    n: int = Field(ge=1)
    p: list[float] = Field(min_length=2, max_length=2)
    B1: list[list[float]]
    B2: list[list[float]]

    @model_validator(mode="after")
    def _check_shapes(self):
        for name, mat in (("B1", self.B1), ("B2", self.B2)):
            if len(mat) != self.n or any(len(row) != self.n for row in mat):
                raise ValueError(f"{name} must be {self.n}x{self.n}")
        return self

    def to_params(self) -> DilationParams:
        return DilationParams(n=self.n, p=np.asarray(self.p), b1=self.B1, b2=self.B2)

    @classmethod
    def from_params(cls, params: DilationParams) -> "ParamsModel":
        return cls(**params.to_dict())


class CertificateModel(BaseModel):
    """Wire form of an isomorphism certificate: a 2x2 basis change and a symplectic S."""

    A: list[list[float]]
    S: list[list[float]]

    @field_validator("A")
    @classmethod
    def _check_a(cls, v):
        if len(v) != 2 or any(len(row) != 2 for row in v):
            raise ValueError("A must be 2x2")
        return v

    def to_certificate(self) -> Certificate:
        return Certificate(a=np.asarray(self.A), s=np.asarray(self.S))


class ValidateRequest(BaseModel):
    params: ParamsModel
    tol: float = Field(default=1e-10, gt=0)


class ValidateResponse(BaseModel):
    version: str
    commute: bool
    m1_ok: bool
    m2_ok: bool
    m2_heuristic: bool
    ok: bool


class InvariantsRequest(BaseModel):
    params: ParamsModel


class SpecialDirectionModel(BaseModel):
    theta: float
    code: list
    coeffs: list[float]


class PencilProfileModel(BaseModel):
    sample_thetas: list[float]
    sample_coeffs: list[list[float]]
    generic_code: list
    specials: list[SpecialDirectionModel]
    kernel: Optional[SpecialDirectionModel] = None


class InvariantsResponse(BaseModel):
    version: str
    n: int
    p1: int
    center_dim: int
    nilradical_dim: int
    is_nilpotent_algebra: bool
    case_id: int
    derived_series_dims: list[int]
    lower_central_dims: list[int]
    pencil_profile: PencilProfileModel


class ClassifyRequest(BaseModel):
    params_a: ParamsModel
    params_b: ParamsModel
    certificate: Optional[CertificateModel] = None


class ClassifyResponse(BaseModel):
    version: str
    verdict: str  # refuted | inconclusive | certified | certificate_invalid
    witness: Optional[str] = None
    certificate_report: Optional[dict] = None


class Table1Request(BaseModel):
    n: int = Field(default=1, ge=1, le=2)
    choices: Optional[dict[str, list[float]]] = None


class Table1RowModel(BaseModel):
    label: str
    params: ParamsModel


class Table1Response(BaseModel):
    version: str
    rows: list[Table1RowModel]
    verdicts: list[list[str]]
    witnesses: list[list[Optional[str]]]
    all_separated: bool


class FuzzRequest(BaseModel):
    params: ParamsModel
    count: int = Field(default=1000, ge=1)
    seed: int = 12345
    tol: float = Field(default=1e-10, gt=0)


class FuzzResponse(BaseModel):
    version: str
    seed: int
    count: int
    checks: dict[str, float]
    passed: bool


class RepcheckRequest(BaseModel):
    params: ParamsModel
    points: int = Field(default=200, ge=1)
    probes: int = Field(default=5, ge=1)
    pairs: int = Field(default=50, ge=1)
    seed: int = 12345
    tol: float = Field(default=1e-9, gt=0)
    factorization_tol: float = Field(default=1e-10, gt=0)
    quad_tol: float = Field(default=1e-4, gt=0)


class RepcheckResponse(BaseModel):
    version: str
    seed: int
    metrics: dict[str, float]
    records: list[dict]
    support_violations: int
    passed: bool
