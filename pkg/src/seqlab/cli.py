"""Command-line front end: ``seqlab <command> [flags]``.

Exit codes: 0 success, 2 usage error (bad flag or expression), 3 evaluation
error.  JSON is written with sorted keys so identical invocations produce
identical bytes.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from . import __version__
from .catalog import CATALOG_NAMES, catalog_lookup
from .continuity import DEFAULT_SEED, adversarial_witness, classify_continuity
from .errors import InvalidLacunarySchedule, MalformedMethod, SeqlabError
from .exprlang import ParseError, parse_function, parse_sequence
from .intervals import Interval
from .modes import LacunarySchedule, ToleranceSchedule, hierarchy_report
from .sequences import RealSequence, get_budget
from .summability import apply_method, cesaro_method, delta_p_method, identity_method, method_from_spec

EXIT_OK, EXIT_USAGE, EXIT_EVAL = 0, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> List[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out or any(v < 1 for v in out):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text!r}")
    return out


def _float_list(text: str) -> List[float]:
    try:
        out = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def _domain(text: str) -> Interval:
    try:
        return Interval.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized probes")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--epsilons", type=_float_list, help="tolerances, decreasing")
    common.add_argument("--scales", type=_int_list, help="prefix lengths, increasing")
    common.add_argument("--margin", type=_positive_float, help="relative trend margin")

    parser = _Parser(prog="seqlab", description="Probe convergence modes of real sequences and functions.")
    parser.add_argument("--version", action="version", version=f"seqlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="hierarchy report for a sequence")
    p.add_argument("--seq", required=True, help="catalog name or expression in n")
    p.add_argument("--p", type=_int_list, default=[1, 2], help="gaps, e.g. 1,2,3")
    p.add_argument("--theta", default="pow2", help="lacunary schedule: pow2, powQ or linear")

    p = sub.add_parser("probe-fn", parents=[common], help="continuity report for a function")
    p.add_argument("--fn", required=True, help="expression in x")
    p.add_argument("--domain", type=_domain, required=True, help="lo,hi[,flags] with flags in c/o")
    p.add_argument("--p", type=_int_list, default=[1, 2])

    p = sub.add_parser("witness", parents=[common], help="adversarial p-quasi-Cauchy witness")
    p.add_argument("--fn", required=True)
    p.add_argument("--domain", type=_domain, required=True)
    p.add_argument("--p", type=_positive_int, required=True)
    p.add_argument("--eps0", type=_positive_float, required=True)
    p.add_argument("--rows", type=_positive_int, default=1000, help="CSV rows to emit")

    p = sub.add_parser("summability", parents=[common], help="apply a row-finite method")
    p.add_argument("--method", required=True, help="delta:p, cesaro, identity or a JSON file")
    p.add_argument("--seq", required=True)
    p.add_argument("--rows", type=_positive_int, required=True)
    return parser


def _schedule(args) -> ToleranceSchedule:
    base = ToleranceSchedule()
    try:
        return ToleranceSchedule(
            tuple(args.epsilons or base.epsilons),
            tuple(args.scales or base.scales),
            args.margin if args.margin is not None else base.decision_margin,
        )
    except ValueError as exc:
        raise UsageError(f"schedule: {exc}")


def _sequence(text: str) -> RealSequence:
    if text in CATALOG_NAMES:
        return catalog_lookup(text)
    try:
        return parse_sequence(text)
    except ParseError as exc:
        raise UsageError(f"argument --seq: {exc}")


def _function(text: str, domain: Interval):
    try:
        return parse_function(text, domain)
    except ParseError as exc:
        raise UsageError(f"argument --fn: {exc}")


def _method(text: str):
    if text == "cesaro":
        return cesaro_method()
    if text == "identity":
        return identity_method()
    if text.startswith("delta:"):
        try:
            return delta_p_method(int(text[6:]))
        except ValueError:
            raise UsageError(f"argument --method: bad gap in {text!r}")
    path = Path(text)
    if not path.is_file():
        raise UsageError(f"argument --method: {text!r} is not delta:p, cesaro, identity or a file")
    try:
        return method_from_spec(path)
    except (MalformedMethod, json.JSONDecodeError) as exc:
        raise UsageError(f"argument --method: {exc}")


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _csv(rows: Sequence[Sequence], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _cmd_classify(args, sched) -> str:
    s = _sequence(args.seq)
    try:
        theta = LacunarySchedule.from_name(args.theta)
        theta.validate()
    except (ValueError, InvalidLacunarySchedule) as exc:
        raise UsageError(f"argument --theta: {exc}")
    report = hierarchy_report(s, args.p, sched, theta)
    fmt = args.format or "json"
    if fmt == "json":
        return _dump_json(report.to_json())
    if fmt == "csv":
        rows = [(v.label, S, stat) for v in report for S, stat in v.trend]
        return _csv(rows, ("mode", "scale", "statistic"))
    lines = [f"{report.subject}"]
    lines += [f"  {v.label:<18} {v.outcome.value}" for v in report]
    lines.append("  violations: " + ("; ".join(report.violations) or "none"))
    return "\n".join(lines) + "\n"


def _cmd_probe_fn(args, sched) -> str:
    f = _function(args.fn, args.domain)
    report = classify_continuity(f, args.p, sched, seed=args.seed)
    fmt = args.format or "json"
    if fmt == "json":
        return _dump_json(report.to_json())
    if fmt == "csv":
        return _csv(report.uniformity.samples, ("delta", "omega"))
    lines = [f"{report.subject} on {report.domain}"]
    lines += [f"  {report.label(k, p):<12} {v.outcome.value}" for (k, p), v in report.verdicts.items()]
    lines.append(f"  uniform      {report.uniformity.outcome.value}")
    lines.append("  inconsistencies: " + ("; ".join(report.inconsistencies) or "none"))
    return "\n".join(lines) + "\n"


def _cmd_witness(args, sched) -> str:
    f = _function(args.fn, args.domain)
    found = adversarial_witness(f, args.p, args.eps0, seed=args.seed, sched=sched)
    fmt = args.format or "csv"
    if found is None:
        if fmt == "json":
            return _dump_json({"version": "v1", "found": False, "subject": f.name})
        return "none found\n"
    w, verdict = found
    if fmt == "json":
        return _dump_json(
            {
                "version": "v1",
                "found": True,
                "subject": f.name,
                "sequence": w.name,
                "p": w.p,
                "eps0": w.eps0,
                "pair_positions": list(w.pair_positions),
                "input_verdict": w.input_verdict.to_json(),
                "image_verdict": verdict.to_json(),
            }
        )
    if fmt == "text":
        return (
            f"{w.name}: input {w.input_verdict.outcome.value}, image {verdict.outcome.value}, "
            f"pairs at {', '.join(map(str, w.pair_positions))}\n"
        )
    return w.to_csv(args.rows)


def _cmd_summability(args, sched) -> str:
    m = _method(args.method)
    s = _sequence(args.seq)
    out = apply_method(m, s, args.rows, sched)
    fmt = args.format or "json"
    if fmt == "json":
        return _dump_json(out.to_json())
    if fmt == "csv":
        rows = [(k + 1, float(v)) for k, v in enumerate(out.transformed_prefix)]
        return _csv(rows, ("row", "value"))
    head = ", ".join(f"{v:.6g}" for v in out.transformed_prefix[:10])
    return f"{out.method}({out.subject}) rows={args.rows}: {head}\n  limit: {out.limit_verdict.outcome.value}\n"


_COMMANDS = {
    "classify": _cmd_classify,
    "probe-fn": _cmd_probe_fn,
    "witness": _cmd_witness,
    "summability": _cmd_summability,
}


def run(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Run one command; the report goes to ``stdout``, errors to ``stderr``."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout):  # --help / --version text
            args = parser.parse_args(argv)
        get_budget()
        sched = _schedule(args)
        text = _COMMANDS[args.command](args, sched)
    except UsageError as exc:
        stderr.write(f"seqlab: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (SeqlabError, ValueError, FloatingPointError, MemoryError) as exc:
        stderr.write(f"seqlab: evaluation error: {exc}\n")
        return EXIT_EVAL
    stdout.write(text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)
