"""Command-line front end: ``padicrec <command> [options]``.

Sequences come from a ``key = value`` config file (``--seq``) or a built-in
fixture (``--builtin``).  Exit codes: 0 success, 1 bad input, 2 precision or
resource exhaustion.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from .conjecture import scan
from .diophantine import ValuationCap, factorial_bounds, solve_factorial
from .errors import (
    InputError,
    MissingKey,
    ParseError,
    RecurrenceError,
    ResourceError,
    ValidationError,
)
from .law import derive_law, verify_law
from .sequence import BUILTINS, RecurrenceSpec, period, term
from .tiz import DEFAULT_WINDOW, tiz_set

VERBOSE_ENV = "ARTIFACT_REPORT_VERBOSE"
INT_KEYS = ("a", "b", "c", "x0", "x1", "x2")
KNOWN_KEYS = set(INT_KEYS) | {"name", "tiz", "window"}


@dataclass(frozen=True)
class SequenceConfig:
    spec: RecurrenceSpec
    tiz: tuple[int, ...] | None = None
    window: tuple[int, int] | None = None


def _int_list(text: str, line: int) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}", line) from None


def parse_config(text: str) -> SequenceConfig:
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate key {key!r}", lineno)
        values[key], lines[key] = value, lineno

    missing = [k for k in INT_KEYS if k not in values]
    if missing:
        raise MissingKey(f"missing keys: {', '.join(missing)}")
    ints = {}
    for k in INT_KEYS:
        try:
            ints[k] = int(values[k])
        except ValueError:
            raise ParseError(f"{k} must be an integer, got {values[k]!r}", lines[k]) from None
    spec = RecurrenceSpec(**ints, name=values.get("name") or None)

    tiz = None
    if "tiz" in values:
        tiz = tuple(_int_list(values["tiz"], lines["tiz"]))
    window = None
    if "window" in values:
        w = _int_list(values["window"], lines["window"])
        if len(w) != 2 or w[0] > w[1]:
            raise ValidationError(f"line {lines['window']}: window needs two ordered integers")
        window = (w[0], w[1])
    return SequenceConfig(spec, tiz, window)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _window(text: str) -> tuple[int, int]:
    parts = [int(t) for t in text.split(",")]
    if len(parts) != 2 or parts[0] > parts[1]:
        raise argparse.ArgumentTypeError("window must be 'lo,hi' with lo <= hi")
    return parts[0], parts[1]


def _tiz(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--seq", metavar="FILE", help="sequence config file")
    src.add_argument("--builtin", choices=sorted(BUILTINS), help="built-in sequence")
    common.add_argument("--json", action="store_true", help="print the full JSON report")

    parser = _Parser(prog="padicrec", description="p-adic valuations of third-order recurrences")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("term", parents=[common], help="exact term x_n")
    p.add_argument("-n", type=int, required=True)

    p = sub.add_parser("period", parents=[common], help="period N_{p^k}")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--level", type=int, default=1)

    p = sub.add_parser("scan", parents=[common], help="per-prime conjecture verdicts")
    p.add_argument("--pmin", type=int, required=True)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--tiz", type=_tiz, help="override the TIZ set, e.g. '-1,0'")
    p.add_argument("--window", type=_window)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("tiz", parents=[common], help="certify the twisted integral zeros")
    p.add_argument("--window", type=_window)
    p.add_argument("--split-prime", type=int)

    p = sub.add_parser("law", parents=[common], help="derive and verify the valuation law")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--precision", type=int, default=8)
    p.add_argument("--window", type=_window)
    p.add_argument("--verify-up-to", type=int, default=0)

    p = sub.add_parser("factorial", parents=[common], help="solve x_n = m!")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--precision", type=int, default=8)
    p.add_argument("--kappa", type=int, help="valuation cap constant (default: from the law)")
    p.add_argument("--mu", type=int)
    p.add_argument("--offset", type=int)
    return parser


def _load(args) -> SequenceConfig:
    if args.builtin:
        return SequenceConfig(BUILTINS[args.builtin])
    if not args.seq:
        raise InputError("one of --seq or --builtin is required")
    try:
        with open(args.seq, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.seq}: {exc.strerror}") from None
    return parse_config(text)


def _spec_dict(spec: RecurrenceSpec) -> dict:
    return {"name": spec.name, "a": spec.a, "b": spec.b, "c": spec.c,
            "x0": spec.x0, "x1": spec.x1, "x2": spec.x2}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _cmd_term(cfg, args, out):
    value = term(cfg.spec, args.n, integral=cfg.spec.unimodular)
    if not isinstance(value, int):
        value = str(value)
    return {"n": args.n, "value": value}, str(value)


def _cmd_period(cfg, args, out):
    N = period(cfg.spec, args.p, args.level)
    return {"p": args.p, "level": args.level, "N": N}, str(N)


def _resolve_tiz(cfg, args):
    if args.tiz is not None:
        return args.tiz, "override"
    if cfg.tiz is not None:
        return cfg.tiz, "config"
    report = tiz_set(cfg.spec, args.window or cfg.window or DEFAULT_WINDOW)
    if not report.certified:
        raise InputError(f"TIZ set not certified ({report.failed_hypothesis}); pass --tiz to override")
    return report.zero_set, "certified"


def _cmd_scan(cfg, args, out):
    tiz, source = _resolve_tiz(cfg, args)
    verdicts = scan(cfg.spec, (args.pmin, args.pmax), tiz, threads=max(1, args.threads))
    for v in verdicts:
        out.write(_dump(v.to_dict()) + "\n")
    counts: dict[str, int] = {}
    for v in verdicts:
        counts[v.status] = counts.get(v.status, 0) + 1
    return {"tiz": list(tiz), "tiz_source": source, "counts": counts}, None


def _cmd_tiz(cfg, args, out):
    report = tiz_set(cfg.spec, args.window or cfg.window or DEFAULT_WINDOW,
                     split_prime=args.split_prime)
    text = f"{report.status}: {sorted(report.zero_set)}"
    return report.to_dict(), text


def _cmd_law(cfg, args, out):
    law = derive_law(cfg.spec, args.p, K=args.precision,
                     window=args.window or cfg.window or DEFAULT_WINDOW)
    mismatches = verify_law(cfg.spec, args.p, law, args.verify_up_to) if args.verify_up_to else []
    results = {
        "law": law.to_dict(),
        "notes": {str(ell): why for ell, why in law.notes},
        "verified_up_to": args.verify_up_to,
        "mismatches": [[m.n, m.predicted, m.actual] for m in mismatches],
    }
    lines = [f"p={law.p} Q={law.Q}"]
    for ell, cls in results["law"]["classes"].items():
        lines.append(f"  {ell}: {cls}")
    lines.append(f"mismatches up to {args.verify_up_to}: {len(mismatches)}")
    return results, "\n".join(lines)


def _cmd_factorial(cfg, args, out):
    given = [args.kappa, args.mu, args.offset]
    if any(v is not None for v in given):
        if args.kappa is None or args.mu is None:
            raise InputError("--kappa and --mu must be given together")
        cap = ValuationCap(args.kappa, args.mu, args.offset or 0)
    else:
        cap = ValuationCap.from_law(derive_law(cfg.spec, args.p, K=args.precision))
    cert = factorial_bounds(cfg.spec, args.p, cap)
    solutions = sorted(solve_factorial(cfg.spec, cert))
    results = {"bounds": cert.to_dict(), "solutions": [list(s) for s in solutions]}
    text = f"m_max={cert.m_max} n_max={cert.n_max} solutions={solutions}"
    return results, text


COMMANDS = {
    "term": _cmd_term,
    "period": _cmd_period,
    "scan": _cmd_scan,
    "tiz": _cmd_tiz,
    "law": _cmd_law,
    "factorial": _cmd_factorial,
}


def _inputs(args) -> dict:
    skip = {"json", "command"}
    return {k: (list(v) if isinstance(v, tuple) else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    command = None
    want_json = False
    try:
        args = parser.parse_args(argv)
        command, want_json = args.command, args.json
        cfg = _load(args)
        started = time.perf_counter()
        results, text = COMMANDS[command](cfg, args, out)
        report = {
            "command": command,
            "inputs": {**_inputs(args), "sequence": _spec_dict(cfg.spec)},
            "results": results,
            "version": __version__,
        }
        if os.environ.get(VERBOSE_ENV):
            report["timing_s"] = round(time.perf_counter() - started, 6)
        if want_json:
            out.write(_dump(report) + "\n")
        elif text is not None:
            out.write(text + "\n")
        return 0
    except RecurrenceError as exc:
        code = 2 if isinstance(exc, ResourceError) else 1
        error = {"type": type(exc).__name__, "message": str(exc)}
        if want_json:
            out.write(_dump({"command": command, "error": error, "exit_code": code,
                             "version": __version__}) + "\n")
        print(f"error: {error['type']}: {exc}", file=sys.stderr)
        return code


def main(argv=None) -> None:
    sys.exit(run(argv))
