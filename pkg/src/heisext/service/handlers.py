"""Service handlers: the single implementation behind the HTTP endpoints and the CLI."""

from __future__ import annotations

import numpy as np

from .. import __version__
from ..classify import refute_isomorphism, invariant_vector, table1_report, verify_certificate
from ..extension import g_identity, g_inverse, g_mul, g_to_matrix, validate_params
from ..reps import (
    SampleCheckConfig,
    QuadConfig,
    a_matrix,
    check_homomorphism,
    check_intertwining,
    check_record,
    check_unitarity,
    chirp,
    left_dilation,
    m_matrix,
    metaplectic_op,
    sample_points,
    support_violations,
)
from ..sampling import random_group_element, random_probe
from .models import (
    ClassifyRequest,
    ClassifyResponse,
    FuzzRequest,
    FuzzResponse,
    InvariantsRequest,
    InvariantsResponse,
    ParamsModel,
    PencilProfileModel,
    RepcheckRequest,
    RepcheckResponse,
    SpecialDirectionModel,
    Table1Request,
    Table1Response,
    Table1RowModel,
    ValidateRequest,
    ValidateResponse,
)


def run_validate(req: ValidateRequest) -> ValidateResponse:
    report = validate_params(req.params.to_params(), tol=req.tol)
    return ValidateResponse(version=__version__, **report.as_dict())


def _profile_model(profile) -> PencilProfileModel:
    data = profile.as_dict()
    return PencilProfileModel(
        sample_thetas=data["sample_thetas"],
        sample_coeffs=data["sample_coeffs"],
        generic_code=data["generic_code"],
        specials=[SpecialDirectionModel(**s) for s in data["specials"]],
        kernel=SpecialDirectionModel(**data["kernel"]) if data["kernel"] else None,
    )


def run_invariants(req: InvariantsRequest) -> InvariantsResponse:
    vec = invariant_vector(req.params.to_params())
    return InvariantsResponse(
        version=__version__,
        n=vec.n,
        p1=vec.p1,
        center_dim=vec.center_dim,
        nilradical_dim=vec.nilradical_dim,
        is_nilpotent_algebra=vec.is_nilpotent_algebra,
        case_id=vec.case_id,
        derived_series_dims=list(vec.derived_series_dims),
        lower_central_dims=list(vec.lower_central_dims),
        pencil_profile=_profile_model(vec.pencil_profile),
    )


def run_classify(req: ClassifyRequest) -> ClassifyResponse:
    pa = req.params_a.to_params()
    pb = req.params_b.to_params()
    if req.certificate is not None:
        cert = req.certificate.to_certificate()
        ok, report = verify_certificate(pa, pb, cert)
        verdict = "certified" if ok else "certificate_invalid"
        return ClassifyResponse(version=__version__, verdict=verdict,
                                certificate_report=report)
    witness = refute_isomorphism(pa, pb)
    if witness is not None:
        return ClassifyResponse(version=__version__, verdict="refuted", witness=witness)
    return ClassifyResponse(version=__version__, verdict="inconclusive")


def run_table1(req: Table1Request) -> Table1Response:
    report = table1_report(req.n, req.choices)
    rows = [Table1RowModel(label=lab, params=ParamsModel.from_params(par))
            for lab, par in zip(report.labels, report.params)]
    return Table1Response(
        version=__version__,
        rows=rows,
        verdicts=[list(r) for r in report.verdicts],
        witnesses=[list(r) for r in report.witnesses],
        all_separated=report.all_separated,
    )


def _rel_err(got: np.ndarray, want: np.ndarray) -> float:
    return float(np.max(np.abs(got - want) / (1.0 + np.abs(want))))


def run_fuzz(req: FuzzRequest) -> FuzzResponse:
    params = req.params.to_params()
    rng = np.random.default_rng(req.seed)
    ident = g_identity(params)

    mul_vs_matrix = 0.0
    associativity = 0.0
    inverse_err = 0.0
    identity_err = 0.0
    for _ in range(req.count):
        a = random_group_element(params, rng)
        b = random_group_element(params, rng)
        c = random_group_element(params, rng)
        left = g_to_matrix(params, g_mul(params, a, b))
        right = g_to_matrix(params, a) @ g_to_matrix(params, b)
        mul_vs_matrix = max(mul_vs_matrix, _rel_err(left, right))
        lhs = g_to_matrix(params, g_mul(params, g_mul(params, a, b), c))
        rhs = g_to_matrix(params, g_mul(params, a, g_mul(params, b, c)))
        associativity = max(associativity, _rel_err(lhs, rhs))
        inv = g_mul(params, a, g_inverse(params, a))
        inverse_err = max(inverse_err, _rel_err(g_to_matrix(params, inv), np.eye(params.n + 2)))
        ide = g_mul(params, ident, a)
        identity_err = max(identity_err, _rel_err(g_to_matrix(params, ide), g_to_matrix(params, a)))

    checks = {
        "mul_vs_matrix": mul_vs_matrix,
        "associativity": associativity,
        "inverse": inverse_err,
        "identity": identity_err,
    }
    return FuzzResponse(version=__version__, seed=req.seed, count=req.count,
                        checks=checks, passed=all(v <= req.tol for v in checks.values()))


class _Worst:
    """Track the worst error per check and the element that produced it."""

    def __init__(self):
        self.error = 0.0
        self.element = None

    def update(self, error: float, element) -> None:
        if self.element is None or error > self.error:
            self.error = float(error)
            self.element = element


def run_repcheck(req: RepcheckRequest) -> RepcheckResponse:
    params = req.params.to_params()
    n = params.n
    rng = np.random.default_rng(req.seed)
    cfg = SampleCheckConfig(count=req.points, seed=req.seed, tol=req.tol)
    pts = sample_points(cfg, n + 1, rng=rng)

    pairs = [(random_group_element(params, rng), random_group_element(params, rng))
             for _ in range(req.pairs)]
    probes_o = [random_probe(n, rng, "O+") for _ in range(req.probes)]
    probes_u = [random_probe(n, rng, "U+") for _ in range(req.probes)]
    probes_um = [random_probe(n, rng, "U-") for _ in range(req.probes)]

    worst = {name: _Worst() for name in (
        "wavelet_homomorphism", "metaplectic_homomorphism",
        "metaplectic_factorization", "intertwining_plus", "intertwining_minus",
        "unitarity")}

    for g1, g2 in pairs:
        for fo, fu in zip(probes_o, probes_u):
            worst["wavelet_homomorphism"].update(
                check_homomorphism(params, "wavelet", g1, g2, fo, pts), g1)
            worst["metaplectic_homomorphism"].update(
                check_homomorphism(params, "metaplectic", g1, g2, fu, pts), g1)

    violations = 0
    for g1, _ in pairs:
        for fu, fm in zip(probes_u, probes_um):
            mu = metaplectic_op(params, g1)(fu)
            factored = chirp(m_matrix(g1.z, g1.x))(
                left_dilation(a_matrix(params, g1.t, g1.y))(fu))
            worst["metaplectic_factorization"].update(
                float(np.max(np.abs(mu.evaluate(pts) - factored.evaluate(pts)))), g1)
            worst["intertwining_plus"].update(
                check_intertwining(params, g1, 1, fu, cfg), g1)
            worst["intertwining_minus"].update(
                check_intertwining(params, g1, -1, fm, cfg), g1)
        violations += support_violations(params, "wavelet", g1, pts)
        violations += support_violations(params, "metaplectic", g1, pts)

    quad = QuadConfig(tol=req.quad_tol)
    for g1, _ in pairs[:2]:
        worst["unitarity"].update(
            check_unitarity(params, "wavelet", g1, probes_o[0], quad), g1)
        worst["unitarity"].update(
            check_unitarity(params, "metaplectic", g1, probes_u[0], quad), g1)

    tolerances = {
        "wavelet_homomorphism": req.tol,
        "metaplectic_homomorphism": req.tol,
        "metaplectic_factorization": req.factorization_tol,
        "intertwining_plus": req.tol,
        "intertwining_minus": req.tol,
        "unitarity": req.quad_tol,
    }
    metrics = {name: w.error for name, w in worst.items()}
    records = [check_record(name, params, w.element, w.error, tolerances[name])
               for name, w in worst.items()]
    passed = (all(rec["pass"] for rec in records) and violations == 0)
    return RepcheckResponse(version=__version__, seed=req.seed, metrics=metrics,
                            records=records, support_violations=violations,
                            passed=passed)
