"""
Command-line front end.

    jbstar verify    --model M [--samples N] [--seed S] [--tol X]
    jbstar factor    --in unitary.json | path.json   [--out chain.json]
    jbstar classify  --in unitary.json
    jbstar decompose --in isometry.json | --isometry identity|adjoint|random --model M

Models are ModelDescriptor JSON, inline or as a file name.  Reports are JSON
(default) or a markdown table.  Exit codes: 0 pass, 1 check failure,
2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import checks
from .errors import JBStarError
from .isometry import (
    StructuredIsometry,
    decompose_isometry,
    gauge_matrix,
    identity_isometry,
    random_structured_isometry,
)
from .models import build_model, distance, element_from_json, random_unitary
from .tolerances import EPS_ID, EPS_REC
from .unitary import factor_path, in_principal_component

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


def _read_json(text):
    """Inline JSON, or the contents of the file it names."""
    p = Path(text)
    try:
        if not text.lstrip().startswith(("{", "[")) and p.exists():
            text = p.read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read JSON from {text[:60]!r}: {exc}") from None


def _model(arg):
    if arg is None:
        raise ConfigError("--model is required")
    try:
        return build_model(_read_json(arg))
    except JBStarError as exc:
        raise ConfigError(f"invalid model: {exc}") from None


def _input(args):
    if args.input is None:
        raise ConfigError("--in is required")
    try:
        return json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}") from None


def _element(d):
    try:
        return element_from_json(d)
    except JBStarError as exc:
        raise ConfigError(f"invalid element: {exc}") from None


# ---- commands -------------------------------------------------------------------

def cmd_verify(args):
    m = _model(args.model)
    ops = checks.STANDARD_OPS if args.inject_fault is None else checks.corrupted_ops(args.inject_fault)
    tol = EPS_ID if args.tol is None else args.tol
    results = checks.run_identity_suite(m, args.samples, args.seed, tol, ops)
    passed = all(r.passed for r in results)
    report = {
        "command": "verify",
        "model": m.descriptor.to_dict(),
        "seed": args.seed,
        "samples": args.samples,
        "checks": [r.to_dict() for r in results],
        "passed": passed,
    }
    return report, EXIT_PASS if passed else EXIT_FAIL


def cmd_factor(args):
    d = _input(args)
    tol = EPS_REC if args.tol is None else args.tol
    if isinstance(d, list) or (isinstance(d, dict) and "path" in d):
        path = [_element(x) for x in (d if isinstance(d, list) else d["path"])]
        target = path[-1]
        chain = factor_path(path)
        verdict = None
    else:
        target = _element(d)
        verdict = in_principal_component(target)
        if not verdict:
            report = {
                "command": "factor",
                "status": verdict.status,
                "windings": verdict.windings,
                "reason": verdict.reason,
                "passed": False,
            }
            return report, EXIT_FAIL
        chain = verdict.certificate
    err = distance(chain.evaluate(target.model), target)
    report = {
        "command": "factor",
        "status": "factored",
        "length": len(chain.hs),
        "reconstruction_error": err,
        "tol": tol,
        "windings": None if verdict is None else verdict.windings,
        "chain": chain.to_json(target.model),
        "passed": bool(err <= tol),
    }
    return report, EXIT_PASS if report["passed"] else EXIT_FAIL


def cmd_classify(args):
    u = _element(_input(args))
    v = in_principal_component(u, seed=args.seed)
    report = {
        "command": "classify",
        "status": v.status,
        "principal": v.principal,
        "winding": None if v.windings is None else int(sum(v.windings)),
        "block_windings": v.windings,
        "reason": v.reason,
        "certificate": None if v.certificate is None else v.certificate.to_json(u.model),
        "passed": v.principal is not None,
    }
    return report, EXIT_PASS if report["passed"] else EXIT_FAIL


def _named_isometry(name, m, seed):
    if name == "identity":
        return identity_isometry(m)
    if name == "adjoint":
        return StructuredIsometry(m, m, (), m.zero(), np.eye(m.real_dim))
    if name == "random":
        return random_structured_isometry(m, seed)
    raise ConfigError(f"unknown isometry {name!r}")


def cmd_decompose(args):
    if args.input is not None:
        try:
            original = StructuredIsometry.from_json(_input(args))
        except (KeyError, TypeError, JBStarError) as exc:
            raise ConfigError(f"invalid isometry: {exc}") from None
    elif args.isometry is not None:
        original = _named_isometry(args.isometry, _model(args.model), args.seed)
    else:
        raise ConfigError("decompose needs --in or --isometry")
    if original.source_unit is not None or original.target_unit is not None:
        raise ConfigError("decompose works on isometries between principal components of M")
    m = original.source
    tol = 1e-6 if args.tol is None else args.tol
    rec = decompose_isometry(original, m, original.target, seed=args.seed)

    rng = np.random.default_rng(args.seed)
    roundtrip = 0.0
    for _ in range(args.samples):
        u = random_unitary(m, rng, float(rng.uniform(0.1, 3.0)))
        roundtrip = max(roundtrip, distance(rec(u), original(u)))
    V = gauge_matrix(original, rec)
    rows = [
        {"quantity": "p", "residual": distance(rec.p, original.p)},
        {"quantity": "phi (up to prefactor gauge)", "residual": float(np.abs(rec.phi - V @ original.phi).max())},
        {"quantity": "round trip", "residual": roundtrip, "samples": args.samples},
    ]
    passed = all(r["residual"] <= tol for r in rows)
    report = {
        "command": "decompose",
        "isometry": rec.to_json(),
        "residuals": rows,
        "tol": tol,
        "passed": passed,
    }
    return report, EXIT_PASS if passed else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "factor": cmd_factor, "classify": cmd_classify, "decompose": cmd_decompose}


# ---- output ---------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def to_markdown(report):
    lines = [f"# {report['command']}", ""]
    if "checks" in report:
        lines += ["| check | samples | max residual | tol | pass |", "|---|---|---|---|---|"]
        for c in report["checks"]:
            lines.append(f"| {c['name']} | {c['samples']} | {c['max_residual']:.3e} | {c['tol']:.1e} | {'yes' if c['passed'] else 'NO'} |")
    elif "residuals" in report:
        lines += ["| quantity | residual |", "|---|---|"]
        for r in report["residuals"]:
            lines.append(f"| {r['quantity']} | {r['residual']:.3e} |")
    else:
        lines += ["| field | value |", "|---|---|"]
        for k, v in report.items():
            if k in ("command", "chain", "certificate"):
                continue
            lines.append(f"| {k} | {v} |")
    lines += ["", f"**{'PASS' if report['passed'] else 'FAIL'}**", ""]
    return "\n".join(lines)


def build_parser():
    ap = argparse.ArgumentParser(prog="jbstar", description="Jordan calculus on finite-dimensional models.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--model", help="ModelDescriptor JSON, inline or file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=200 if name == "verify" else 100)
        p.add_argument("--tol", type=float)
        p.add_argument("--in", dest="input", help="input JSON file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "md"), default="json")
        if name == "decompose":
            p.add_argument("--isometry", choices=("identity", "adjoint", "random"))
        if name == "verify":
            p.add_argument("--inject-fault", choices=("involution", "jordan"), help=argparse.SUPPRESS)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.samples < 1:
            raise ConfigError("--samples must be at least 1")
        if args.tol is not None and not args.tol > 0:
            raise ConfigError("--tol must be positive")
        report, code = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"jbstar: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except JBStarError as exc:
        report = {"command": args.command, "error": type(exc).__name__, "message": str(exc), "passed": False}
        code = EXIT_FAIL
    report = _jsonable(report)
    text = to_markdown(report) if args.format == "md" else json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return code
