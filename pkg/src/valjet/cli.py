"""Batch command-line front end.

One job per invocation: parse the inputs, run the pipeline behind the
requested command, and print a single JSON document to stdout.  Exit
code 0 means success, 2 a domain error (malformed input, reducible
curve, window too small), 1 a violated internal claim or any other
internal failure.  Identical arguments produce byte-identical output.
"""

import argparse
import json
import sys
from pathlib import Path

from .branch import BranchParam, newton_puiseux, semigroup
from .errors import ClaimViolation, DomainError, ParseError
from .genseq import run_genseq, run_genseq_divisorial, verify_genseq
from .jets import boundary_level, classify_components, expand_jets
from .poly import parse_poly, render_poly
from .toric import toric_resolution
from .valuation import initial_form, nu_C, nu_E

SCHEMA = "valjet/1"

COMMANDS = ("semigroup", "jets", "nu", "initial-form", "nu-e", "components",
            "genseq", "divisorial", "toric", "verify")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="valjet",
        description="exact jet-scheme valuations for plane curve branches")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--f", metavar="POLY",
                        help="curve polynomial in x0, x1")
    parser.add_argument("--h", metavar="POLY",
                        help="probe polynomial in x0, x1")
    parser.add_argument("--param", metavar="FILE",
                        help="parametrization JSON; - reads stdin")
    parser.add_argument("--p", type=int, help="divisorial contact order")
    parser.add_argument("--m", type=int, help="jet level")
    parser.add_argument("--trials", type=int, default=2,
                        help="points per prime for randomized zero tests")
    parser.add_argument("--exact", action="store_true",
                        help="symbolic zero tests instead of specialization")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pretty", action="store_true",
                        help="indent the output document")
    parser.add_argument("--toric", action="store_true", dest="with_toric",
                        help="attach the toric resolution to the output")
    return parser


def _branch(args):
    """Parametrization from --param (file or stdin) or from --f."""
    if args.param:
        try:
            text = (sys.stdin.read() if args.param == "-"
                    else Path(args.param).read_text())
        except OSError as exc:
            raise DomainError(f"cannot read parametrization: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(
                f"parametrization is not valid JSON: {exc}") from exc
        param = BranchParam.from_json(doc)
        if args.f:
            param.source = parse_poly(args.f)
        return param
    if args.f:
        return newton_puiseux(parse_poly(args.f))
    raise DomainError("command needs --f or --param")


def _need(args, **flags):
    for name, value in flags.items():
        if value is None:
            raise DomainError(f"{args.command} needs --{name}")


def _policy_doc(args):
    if args.exact:
        return {"mode": "exact"}
    return {"mode": "probabilistic", "trials": args.trials, "primes": 3}


def _genseq_doc(gs):
    doc = {"kind": gs.kind, "values": gs.values}
    if gs.contact is not None:
        doc["contact"] = gs.contact
    doc.update(gs.to_json())
    return doc


def _sequence_for(args, param):
    if args.p is not None:
        return run_genseq_divisorial(param, args.p)
    return run_genseq(param)


def _run(args):
    cmd = args.command
    if cmd == "semigroup":
        param = _branch(args)
        return {"param": param.to_json(),
                "semigroup": semigroup(param).to_json()}
    if cmd == "jets":
        _need(args, f=args.f, m=args.m)
        return expand_jets(parse_poly(args.f), args.m).to_json()
    if cmd == "nu":
        _need(args, h=args.h)
        return nu_C(parse_poly(args.h), _branch(args)).to_json()
    if cmd == "initial-form":
        _need(args, h=args.h)
        P, value = initial_form(parse_poly(args.h), _branch(args))
        return {"value": value, "initial": render_poly(P)}
    if cmd == "nu-e":
        _need(args, h=args.h, p=args.p)
        return {"p": args.p,
                "value": nu_E(parse_poly(args.h), _branch(args), args.p)}
    if cmd == "components":
        _need(args, m=args.m)
        sg = semigroup(_branch(args))
        return {"m": args.m,
                "boundary": boundary_level(sg, args.m),
                "components": [c.to_json()
                               for c in classify_components(sg, args.m)]}
    if cmd == "genseq":
        return _genseq_doc(run_genseq(_branch(args)))
    if cmd == "divisorial":
        _need(args, p=args.p)
        param = _branch(args)
        gs = run_genseq_divisorial(param, args.p)
        doc = _genseq_doc(gs)
        if args.with_toric:
            doc["toric"] = toric_resolution(gs, param).to_json()
        return doc
    if cmd == "toric":
        param = _branch(args)
        gs = _sequence_for(args, param)
        return {"genseq": _genseq_doc(gs),
                "toric": toric_resolution(gs, param).to_json()}
    if cmd == "verify":
        param = _branch(args)
        gs = _sequence_for(args, param)
        doc = {"genseq": _genseq_doc(gs),
               "report": verify_genseq(gs, param).to_json()}
        if args.with_toric:
            doc["toric"] = toric_resolution(gs, param).to_json()
        return doc
    raise ClaimViolation(f"claim violated: unhandled command {cmd}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    doc = {
        "schema": SCHEMA,
        "command": args.command,
        "seed": args.seed,
        "zero_test": _policy_doc(args),
    }
    try:
        doc["result"] = _run(args)
        code = 0
    except (DomainError, ParseError) as exc:
        doc["error"] = {"type": "domain", "message": str(exc)}
        code = 2
    except ClaimViolation as exc:
        doc["error"] = {"type": "claim-violation", "message": str(exc)}
        code = 1
    except Exception as exc:  # pragma: no cover - nothing should get here
        doc["error"] = {"type": "internal",
                        "message": f"{type(exc).__name__}: {exc}"}
        code = 1
    print(json.dumps(doc, indent=2 if args.pretty else None, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
