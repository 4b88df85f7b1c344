"""Command-line front end.

    qkzmod params --N 5 --kappa 2
    qkzmod solve --N 5 --kappa 2 --n 3 --l 1 --r 4
    qkzmod solve-kz --N 5 --kappa 2 --n 3 --l 1 --r 4
    qkzmod verify --N 5 --kappa 2 --input solution.json
    qkzmod compare-top --N 5 --kappa 2 --n 3 --l 1 --r 4
    qkzmod selftest --grid small

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 ok, 1 a
verification failed, 2 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import selftest
from .diffcalc import ModParams, RSequence, compute_params
from .hyperqkz import (
    TrivialSequenceWarning,
    check_dims,
    solve_r,
    verify_integrand_symmetry,
    verify_qkz,
    verify_singular,
    verify_symmetric_qkz,
)
from .kzlimit import compare_top_degree, solve_kz_r, top_degree, verify_kz_mod_n
from .tensorrep import VectorPolynomial, VerificationReport

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2


class InvalidInput(Exception):
    pass


def _parse_r(text: str | None, l: int) -> tuple[int, ...]:
    if text is None:
        if l == 0:
            return ()
        raise InvalidInput("--r is required")
    try:
        r = tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise InvalidInput(f"--r must be comma-separated integers, got {text!r}")
    if len(r) != l or any(x < 0 for x in r):
        raise InvalidInput(f"--r needs {l} non-negative entries, got {text!r}")
    return r


def _params(args) -> ModParams:
    if args.N is None or args.kappa is None:
        raise InvalidInput("--N and --kappa are required")
    try:
        return compute_params(args.N, args.kappa)
    except ValueError as exc:
        raise InvalidInput(str(exc))


def _dims(args) -> tuple[int, int]:
    if args.n is None or args.l is None:
        raise InvalidInput("--n and --l are required")
    try:
        check_dims(args.n, args.l)
    except ValueError as exc:
        raise InvalidInput(str(exc))
    return args.n, args.l


def _solution_json(f: VectorPolynomial, params: ModParams, mod_reduce: bool) -> dict:
    out = {"solution": f.to_json()}
    if mod_reduce:
        out["solution_mod_N"] = f.reduce_mod(params.N).to_json()
    return out


def _reports_json(reports: dict[str, VerificationReport], witness: bool) -> dict:
    return {name: {"pass": rep.passed, "entries": rep.to_json(with_witness=witness)} for name, rep in reports.items()}


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text)


def _qkz_reports(f: VectorPolynomial, params: ModParams) -> dict[str, VerificationReport]:
    return {
        "symmetric_qkz": verify_symmetric_qkz(f, params),
        "qkz": verify_qkz(f, params),
        "singular": verify_singular(f, params.N),
    }


# ---------------------------------------------------------------------------
# commands

def cmd_params(args) -> int:
    _emit(_params(args).to_json(), args)
    return EXIT_OK


def cmd_solve(args) -> int:
    params = _params(args)
    n, l = _dims(args)
    r = _parse_r(args.r, l)
    rs = RSequence.of(r, params.N)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TrivialSequenceWarning)
        f = solve_r(params, n, l, r)
    if rs.trivial and l:
        print(f"warning: r={list(r)} is trivial for N={params.N}; the solution vanishes mod N", file=sys.stderr)
    reports = _qkz_reports(f, params)
    if args.verify_integrand:
        reports["integrand_symmetry"] = verify_integrand_symmetry(params, n, l)
    ok = all(rep.passed for rep in reports.values())
    payload = {
        "params": params.to_json(),
        "n": n,
        "l": l,
        "r": list(r),
        **_solution_json(f, params, args.mod_reduce_output),
        "trivial_r": rs.trivial,
        "N_r": rs.N_r,
        "M_r": rs.M_r,
        "is_singular_mod_N": reports["singular"].passed,
        "qkz_verified": reports["symmetric_qkz"].passed and reports["qkz"].passed,
        "verified": ok,
        "reports": _reports_json(reports, args.emit_witness),
    }
    _emit(payload, args)
    return EXIT_OK if ok else EXIT_FAIL


def _kz_r(params, l, text):
    r = _parse_r(text, l)
    if any((x + 1) % params.N for x in r):
        raise InvalidInput(f"r={list(r)} is not maximal: every r_i must be -1 mod N={params.N}")
    return r


def cmd_solve_kz(args) -> int:
    params = _params(args)
    n, l = _dims(args)
    r = _kz_r(params, l, args.r)
    f0 = solve_kz_r(params, n, l, r)
    report = verify_kz_mod_n(f0, params)
    payload = {
        "params": params.to_json(),
        "n": n,
        "l": l,
        "r": list(r),
        **_solution_json(f0, params, args.mod_reduce_output),
        "kz_verified": report.passed,
        "verified": report.passed,
        "reports": _reports_json({"kz": report}, args.emit_witness),
    }
    _emit(payload, args)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    params = _params(args)
    if not args.input:
        raise InvalidInput("--input is required")
    try:
        data = json.loads(Path(args.input).read_text())
        body = data.get("solution", data)
        f = VectorPolynomial.from_json(body)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidInput(f"cannot read a solution from {args.input}: {exc}")
    if args.kz:
        reports = {"kz": verify_kz_mod_n(f, params)}
    else:
        reports = _qkz_reports(f, params)
    ok = all(rep.passed for rep in reports.values())
    _emit({"params": params.to_json(), "n": f.n, "l": f.l, "verified": ok,
           "reports": _reports_json(reports, args.emit_witness)}, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compare_top(args) -> int:
    params = _params(args)
    n, l = _dims(args)
    r = _kz_r(params, l, args.r)
    f = solve_r(params, n, l, r)
    f0 = solve_kz_r(params, n, l, r)
    report = compare_top_degree(f, f0, params, r)
    payload = {
        "params": params.to_json(),
        "n": n,
        "l": l,
        "r": list(r),
        "degree": top_degree(params, n, l, r),
        "qkz_solution": f.to_json(),
        "kz_solution": f0.to_json(),
        "pass": report.passed,
        "reports": _reports_json({"top_degree": report}, args.emit_witness),
    }
    _emit(payload, args)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_selftest(args) -> int:
    results = selftest.run(args.grid, seed=args.seed, inject_fault=args.inject_fault)
    for res in results:
        status = "ok" if res["pass"] else "FAIL"
        print(f"{res['suite']:<10} {res['checks']:>5} checks  {res['seconds']:8.3f}s  {status}", file=sys.stderr)
    ok = all(res["pass"] for res in results)
    _emit({"grid": args.grid, "pass": ok, "suites": results}, args)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "params": cmd_params,
    "solve": cmd_solve,
    "solve-kz": cmd_solve_kz,
    "verify": cmd_verify,
    "compare-top": cmd_compare_top,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qkzmod", description="Polynomial qKZ and KZ solutions modulo N.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--output", help="also write the JSON result to this file")
        if name == "selftest":
            p.add_argument("--grid", choices=sorted(selftest.SELFTEST_BUDGET), default="default")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
            continue
        p.add_argument("--N", type=int)
        p.add_argument("--kappa", type=int)
        if name == "params":
            continue
        p.add_argument("--emit-witness", action="store_true", help="include residues in the reports")
        if name == "verify":
            p.add_argument("--input", help="JSON from solve/solve-kz, or a bare vector polynomial")
            p.add_argument("--kz", action="store_true", help="check the KZ congruences instead of qKZ")
            continue
        p.add_argument("--n", type=int)
        p.add_argument("--l", type=int)
        p.add_argument("--r", help="comma-separated r_1,...,r_l")
        if name in ("solve", "solve-kz"):
            p.add_argument("--mod-reduce-output", action="store_true")
        if name == "solve":
            p.add_argument("--verify-integrand", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
