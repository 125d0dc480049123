"""Command-line front end.

Each subcommand drives one family of operations and writes a deterministic
JSON (or CSV) report: same configuration and seed, byte-identical output.
Reports embed the full configuration, the tool version, and enough data
(matrices, seeds, certificates) to re-verify offline with ``verify``.

Exit codes: 0 success, 2 a certificate failed, 3 a precondition was violated,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .algebraic import certify, q_reduction, random_element, spectral_resolution, validate_roots
from .components import ComponentSignature, distance_scan, is_isolated, line_direction, signature
from .errors import CertificationError, PreconditionError
from .matkernel import ToleranceConfig, operator_norm
from .paths import (
    connect_exp_global,
    connect_exp_local,
    connect_polygonal,
    connect_selfadjoint,
    min_degree_search,
    verify_path,
)
from . import serialize as ser
from .suite import run_suite

EXIT_OK = 0
EXIT_CERTIFICATION = 2
EXIT_PRECONDITION = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which collides with the certification
    # exit code; route usage problems to a dedicated code instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _parse_roots(text: str) -> list[complex]:
    return [complex(part.strip().replace(" ", "")) for part in text.split(",")]


def _parse_sig(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(","))


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_element(path: str, cfg: ToleranceConfig, roots_flag=None):
    obj = _load_json(path)
    if "tool" in obj and "result" in obj:  # full report files are fine too
        obj = obj["result"]
    if "matrix" in obj:
        return ser.element_from_json(obj, cfg)
    # raw matrix file: the root system must come from the command line
    if "entries" not in obj:
        raise PreconditionError(f"{path} holds neither an element nor a matrix")
    if roots_flag is None:
        raise PreconditionError(f"{path} holds a bare matrix; pass --roots to certify it")
    return certify(ser.matrix_from_json(obj), validate_roots(_parse_roots(roots_flag)), cfg)


def _tolerances(ns) -> ToleranceConfig:
    kwargs = {}
    if ns.tol is not None:
        kwargs["residual_tol"] = ns.tol
    if ns.rank_tol is not None:
        kwargs["rank_rel_tol"] = ns.rank_tol
    if ns.margin is not None:
        kwargs["invertibility_margin"] = ns.margin
    return ToleranceConfig(**kwargs)


def _emit(report: dict, ns) -> None:
    text = ser.canonical_dumps(report)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_VOLATILE_FLAGS = {"func", "out", "config"}  # not part of the experiment


def _report(ns, result: dict) -> dict:
    config = {
        k: v for k, v in sorted(vars(ns).items())
        if k not in _VOLATILE_FLAGS and v is not None
    }
    return {"tool": "algpaths", "version": __version__, "command": ns.command, "config": config, "result": result}


# -- subcommand bodies ---------------------------------------------------------


def _cmd_sample(ns) -> int:
    cfg = _tolerances(ns)
    roots = validate_roots(_parse_roots(ns.roots))
    sig = ComponentSignature(ranks=_parse_sig(ns.sig), dim=sum(_parse_sig(ns.sig)))
    el = random_element(sig, roots, seed=ns.seed, self_adjoint=ns.self_adjoint, cond_bound=ns.cond, cfg=cfg)
    _emit(_report(ns, ser.element_to_json(el)), ns)
    return EXIT_OK


def _cmd_decompose(ns) -> int:
    cfg = _tolerances(ns)
    el = _load_element(ns.a, cfg, ns.roots)
    part = spectral_resolution(el, cfg)
    result = ser.partition_to_json(part)
    result["signature"] = ser.signature_to_json(signature(el, cfg))
    result["isolated"] = is_isolated(el, cfg)
    _emit(_report(ns, result), ns)
    return EXIT_OK


def _cmd_connect(ns) -> int:
    cfg = _tolerances(ns)
    a = _load_element(ns.a, cfg, ns.roots)
    b = _load_element(ns.b, cfg, ns.roots)
    if ns.method == "exp-local":
        path = connect_exp_local(a, b, cfg)
    elif ns.method == "exp-global":
        path = connect_exp_global(a, b, cfg, seed=ns.seed)
    elif ns.method == "selfadjoint":
        path = connect_selfadjoint(a, b, cfg, seed=ns.seed)
    elif ns.method == "polygonal":
        path = connect_polygonal(a, b, cfg, seed=ns.seed)
    elif ns.method == "poly":
        found = min_degree_search(a, b, d_max=ns.dmax, budget=ns.budget, seed=ns.seed, cfg=cfg,
                                  self_adjoint=ns.self_adjoint, min_motion=ns.min_motion)
        if not found.succeeded:
            result = {"success": False, "residual_by_degree": {str(k): v for k, v in found.residual_by_degree.items()}}
            _emit(_report(ns, result), ns)
            return EXIT_CERTIFICATION
        path = found.path
    else:  # pragma: no cover - argparse restricts choices
        raise PreconditionError(f"unknown method {ns.method}")
    cert = verify_path(path, a.roots, cfg, expected_endpoint=b.a)
    result = {"path": ser.path_to_json(path), "certificate": {
        "worst_membership": cert.worst_membership,
        "endpoint_error": cert.endpoint_error,
    }}
    _emit(_report(ns, result), ns)
    return EXIT_OK


def _cmd_verify(ns) -> int:
    cfg = _tolerances(ns)
    obj = _load_json(ns.path)
    if "result" in obj and "path" in obj.get("result", {}):  # accept connect reports
        obj = obj["result"]["path"]
    path = ser.path_from_json(obj, cfg)
    roots = validate_roots(_parse_roots(ns.roots)) if ns.roots else None
    if roots is None and obj.get("kind") == "polynomial":
        raise PreconditionError("polynomial paths need --roots for verification")
    cert = verify_path(path, roots, cfg)
    result = {
        "kind": cert.kind,
        "worst_membership": cert.worst_membership,
        "worst_hermiticity": cert.worst_hermiticity,
        "segment_certificates": list(cert.segment_certificates),
        "samples": cert.samples,
    }
    _emit(_report(ns, result), ns)
    return EXIT_OK


def _cmd_line(ns) -> int:
    cfg = _tolerances(ns)
    el = _load_element(ns.a, cfg, ns.roots)
    witness = line_direction(el, cfg)
    result = ser.line_witness_to_json(witness)
    result["direction_norm"] = operator_norm(witness.direction)
    _emit(_report(ns, result), ns)
    return EXIT_OK


def _cmd_distance(ns) -> int:
    cfg = _tolerances(ns)
    roots = validate_roots(_parse_roots(ns.roots))
    ranks1, ranks2 = _parse_sig(ns.sig), _parse_sig(ns.sig2)
    dim = ns.dim if ns.dim is not None else sum(ranks1)
    sig1 = ComponentSignature(ranks=ranks1, dim=dim)
    sig2 = ComponentSignature(ranks=ranks2, dim=dim)
    report = distance_scan(sig1, sig2, roots, budget=ns.budget, seed=ns.seed,
                           self_adjoint=ns.self_adjoint, cfg=cfg, workers=ns.threads)
    if ns.format == "csv":
        row = ser.scan_csv_row(report) + "\n"
        if ns.out:
            # scan batches accumulate: append rows, write the header once
            try:
                fresh = os.path.getsize(ns.out) == 0
            except OSError:
                fresh = True
            with open(ns.out, "a", encoding="utf-8") as fh:
                if fresh:
                    fh.write(ser.SCAN_CSV_HEADER + "\n")
                fh.write(row)
        else:
            sys.stdout.write(ser.SCAN_CSV_HEADER + "\n" + row)
    else:
        _emit(_report(ns, ser.scan_report_to_json(report)), ns)
    return EXIT_OK


def _cmd_mindeg(ns) -> int:
    cfg = _tolerances(ns)
    a = _load_element(ns.a, cfg, ns.roots)
    b = _load_element(ns.b, cfg, ns.roots)
    found = min_degree_search(a, b, d_max=ns.dmax, budget=ns.budget, seed=ns.seed, cfg=cfg,
                              self_adjoint=ns.self_adjoint, min_motion=ns.min_motion)
    result = {
        "success": found.succeeded,
        "degree": found.degree,
        "residual_by_degree": {str(k): v for k, v in found.residual_by_degree.items()},
    }
    if found.succeeded:
        result["path"] = ser.path_to_json(found.path)
    _emit(_report(ns, result), ns)
    return EXIT_OK if found.succeeded else EXIT_CERTIFICATION


def _cmd_suite(ns) -> int:
    cfg = _tolerances(ns)
    outcome = run_suite(seed=ns.seed, samples=ns.samples, budget=ns.budget, cfg=cfg,
                        stream=sys.stdout)
    _emit(_report(ns, outcome), ns)
    return EXIT_OK if outcome["all_passed"] else 1


# -- wiring ---------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--tol", type=float, default=None, help="residual tolerance override")
    p.add_argument("--rank-tol", type=float, default=None, help="relative rank threshold override")
    p.add_argument("--margin", type=float, default=None, help="invertibility margin override")
    p.add_argument("--out", default=None, help="report file (stdout when omitted)")
    p.add_argument("--config", default=None, help="JSON file with defaults for any flag")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="algpaths", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"algpaths {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw a random certified element")
    p.add_argument("--roots", required=True, help="comma-separated roots, e.g. '0,1' or '1+1j,-1'")
    p.add_argument("--sig", required=True, help="rank per root, e.g. '1,2'")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--self-adjoint", action="store_true")
    p.add_argument("--cond", type=float, default=20.0, help="similarity condition bound")
    _add_common(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("decompose", help="spectral idempotents of an element")
    p.add_argument("--a", required=True, help="element or matrix JSON file")
    p.add_argument("--roots", default=None, help="roots (required for bare matrix files)")
    _add_common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("connect", help="build a certified connecting path")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--method", required=True,
                   choices=["exp-local", "exp-global", "polygonal", "poly", "selfadjoint"])
    p.add_argument("--roots", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dmax", type=int, default=3, help="max degree for --method poly")
    p.add_argument("--budget", type=int, default=32, help="restarts for --method poly")
    p.add_argument("--self-adjoint", action="store_true", help="Hermitian coefficients for --method poly")
    p.add_argument("--min-motion", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=_cmd_connect)

    p = sub.add_parser("verify", help="re-certify a serialized path")
    p.add_argument("--path", required=True, help="path JSON file (or a connect report)")
    p.add_argument("--roots", default=None, help="required for polynomial paths")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("line", help="complex-line direction through a non-central element")
    p.add_argument("--a", required=True)
    p.add_argument("--roots", default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_line)

    p = sub.add_parser("distance", help="randomized distance scan between two components")
    p.add_argument("--roots", required=True)
    p.add_argument("--sig", required=True)
    p.add_argument("--sig2", required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--self-adjoint", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--threads", type=int,
                   default=int(os.environ.get("ALGPATHS_THREADS", "1")))
    _add_common(p)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("mindeg", help="minimum-degree polynomial path search")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--roots", default=None)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--budget", type=int, default=32)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--self-adjoint", action="store_true")
    p.add_argument("--min-motion", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=_cmd_mindeg)

    p = sub.add_parser("suite", help="seeded battery over all experiment families")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=50, help="sample count per family")
    p.add_argument("--budget", type=int, default=400, help="restarts for the scan items")
    _add_common(p)
    p.set_defaults(func=_cmd_suite)

    return parser


def _apply_config_file(ns, argv):
    if not getattr(ns, "config", None):
        return ns
    stored = _load_json(ns.config)
    given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in stored.items():
        attr = key.replace("-", "_")
        if attr in vars(ns) and attr not in given:
            setattr(ns, attr, value)
    return ns


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    ns = parser.parse_args(argv)
    ns = _apply_config_file(ns, argv)
    try:
        return ns.func(ns)
    except PreconditionError as exc:
        print(f"algpaths: precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CertificationError as exc:
        print(f"algpaths: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION


if __name__ == "__main__":
    sys.exit(main())
