"""Batch command-line client of the service layer.

Each subcommand builds the corresponding service request model, calls the
same handler the HTTP endpoint uses, and prints the response as JSON.

Exit codes: 0 success, 1 domain failure (validation/certificate/tolerance),
2 input error (unreadable file, malformed JSON, bad request shape).
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .errors import HeisextError, InvalidParamsError, CertificateError
from .service import handlers
from .service.models import (
    CertificateModel,
    ClassifyRequest,
    FuzzRequest,
    InvariantsRequest,
    ParamsModel,
    RepcheckRequest,
    Table1Request,
    ValidateRequest,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INPUT = 2


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_params(path: str) -> ParamsModel:
    try:
        return ParamsModel(**_load_json(path))
    except (ValidationError, TypeError) as exc:
        raise InputError(f"bad params file {path}: {exc}") from exc


def _emit(response, out_path: str | None) -> None:
    text = json.dumps(response.model_dump(), indent=2, sort_keys=True)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _cmd_validate(args) -> int:
    req = ValidateRequest(params=_load_params(args.params), tol=args.tol)
    resp = handlers.run_validate(req)
    _emit(resp, args.out)
    return EXIT_OK if resp.ok else EXIT_DOMAIN


def _cmd_invariants(args) -> int:
    req = InvariantsRequest(params=_load_params(args.params))
    resp = handlers.run_invariants(req)
    _emit(resp, args.out)
    return EXIT_OK


def _cmd_classify(args) -> int:
    certificate = None
    if args.certificate:
        try:
            certificate = CertificateModel(**_load_json(args.certificate))
        except (ValidationError, TypeError) as exc:
            raise InputError(f"bad certificate file {args.certificate}: {exc}") from exc
    req = ClassifyRequest(params_a=_load_params(args.params),
                          params_b=_load_params(args.params_b),
                          certificate=certificate)
    resp = handlers.run_classify(req)
    _emit(resp, args.out)
    return EXIT_DOMAIN if resp.verdict == "certificate_invalid" else EXIT_OK


def _cmd_table1(args) -> int:
    choices = None
    if args.choices:
        choices = _load_json(args.choices)
    try:
        req = Table1Request(n=args.n, choices=choices)
    except ValidationError as exc:
        raise InputError(str(exc)) from exc
    resp = handlers.run_table1(req)
    _emit(resp, args.out)
    return EXIT_OK if resp.all_separated else EXIT_DOMAIN


def _cmd_fuzz(args) -> int:
    req = FuzzRequest(params=_load_params(args.params), count=args.samples,
                      seed=args.seed, tol=args.tol)
    resp = handlers.run_fuzz(req)
    _emit(resp, args.out)
    return EXIT_OK if resp.passed else EXIT_DOMAIN


def _cmd_repcheck(args) -> int:
    req = RepcheckRequest(params=_load_params(args.params), points=args.samples,
                          probes=args.probes, pairs=args.pairs, seed=args.seed,
                          tol=args.tol)
    resp = handlers.run_repcheck(req)
    _emit(resp, args.out)
    return EXIT_OK if resp.passed else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisext",
        description="Validate, classify and check representations of "
                    "two-parameter dilation extensions of the Heisenberg group.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_params=True):
        if needs_params:
            p.add_argument("--params", required=True, help="params JSON file")
        p.add_argument("--out", default=None, help="also write the JSON report here")

    p = sub.add_parser("validate", help="check commutation and the closedness conditions")
    add_common(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("invariants", help="compute the isomorphism invariants")
    add_common(p)
    p.set_defaults(fn=_cmd_invariants)

    p = sub.add_parser("classify", help="refute isomorphism or verify a certificate")
    add_common(p)
    p.add_argument("--params-b", required=True, help="second params JSON file")
    p.add_argument("--certificate", default=None, help="certificate JSON file")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("table1", help="pairwise separation report over the catalog")
    add_common(p, needs_params=False)
    p.add_argument("--n", type=int, default=1, choices=(1, 2))
    p.add_argument("--choices", default=None, help="JSON file of parameter samples")
    p.set_defaults(fn=_cmd_table1)

    p = sub.add_parser("fuzz", help="randomized group-axiom checks against the matrix form")
    add_common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(fn=_cmd_fuzz)

    p = sub.add_parser("repcheck", help="representation and intertwining checks")
    add_common(p)
    p.add_argument("--samples", type=int, default=200, help="sample points per check")
    p.add_argument("--probes", type=int, default=5)
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(fn=_cmd_repcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidParamsError, CertificateError, HeisextError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
