"""Command line entry point ``testideals``.

Either a job document::

    testideals run job.txt --json

or inline arguments, one comma-separated generator list per ideal::

    testideals tau-along --p 7 --vars x,y "x^3+y^5"
    testideals tau --p 5 --vars x,y --factor "x^2,y^3:1/2"
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

from .errors import ParseError
from .jobs import COMMANDS, EXIT_INVALID, emit_error, emit_result, exit_code, parse_job, run_job


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=int, help="characteristic (prime)")
    p.add_argument("--vars", help="comma-separated variable names")
    p.add_argument("--order", choices=("grevlex", "lex"))
    p.add_argument("--e", type=int, help="Frobenius level for bracket/root/fedder/claim2")
    p.add_argument("--emax", type=int, help="largest Frobenius level of a chain")
    p.add_argument("--gamma", help="test element override (polynomial or poly name)")
    p.add_argument("--bigN", type=int, help="exponent N of the test element")
    p.add_argument("--seed", type=int, help="seed for randomized commands")
    p.add_argument("--degree-limit", type=int, dest="degree_limit")
    p.add_argument("--json", action="store_true", help="JSON output")
    p.add_argument("--output", "-o", help="write the result to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="testideals", description="Test ideals along ideals over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a job document ('-' for stdin)")
    run.add_argument("job")
    _common(run)
    batch = sub.add_parser("batch", help="run several job documents")
    batch.add_argument("jobs_files", nargs="+", metavar="JOB")
    batch.add_argument("--jobs", type=int, default=1, help="worker processes")
    batch.add_argument("--json", action="store_true")
    for name in COMMANDS:
        sp = sub.add_parser(name, help=f"{name} on inline ideals or named ideals of --job")
        sp.add_argument("ideals", nargs="*", help="generator lists, or ideal names with --job")
        sp.add_argument("--job", help="job document supplying the ring and named objects")
        sp.add_argument(
            "--factor",
            action="append",
            default=[],
            metavar="GENS[:T]",
            help="factor a^t of the formal combination, e.g. 'x,y:3/2'",
        )
        _common(sp)
    return parser


def _overrides(ns) -> dict:
    return {
        "p": ns.p,
        "vars": ns.vars,
        "order": ns.order,
        "e": ns.e,
        "emax": ns.emax,
        "gamma": ns.gamma,
        "N": ns.bigN,
        "seed": ns.seed,
        "degree-limit": ns.degree_limit,
        "format": "json" if ns.json else None,
    }


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def inline_document(command: str, ideals: Sequence[str], factors: Sequence[str]) -> Tuple[str, List[str]]:
    """Job text for inline generator lists; returns the text and the argument names."""
    lines, names = [], []
    for i, gens in enumerate(ideals, 1):
        lines.append(f"ideal I{i} = {gens}")
        names.append(f"I{i}")
    for i, spec in enumerate(factors, 1):
        gens, _, t = spec.rpartition(":") if ":" in spec else (spec, "", "")
        lines.append(f"ideal A{i} = {gens}")
        lines.append(f"factor A{i}" + (f" t={t}" if t else ""))
    lines.append(f"cmd {command} " + " ".join(names))
    return "\n".join(lines) + "\n", names


def _execute(text: str, overrides: dict) -> Tuple[str, int]:
    fmt = overrides.get("format") or "canonical"
    try:
        job = parse_job(text, overrides)
        fmt = job.format
        result = run_job(job)
    except Exception as exc:  # every failure becomes a structured error
        return emit_error(exc, fmt), exit_code(exc)
    return emit_result(result, fmt), 0


def _batch_one(args: Tuple[str, bool]) -> Tuple[str, str, int]:
    path, as_json = args
    try:
        text = _read(path)
    except OSError as exc:
        return path, emit_error(exc, "json" if as_json else "canonical"), EXIT_INVALID
    out, code = _execute(text, {"format": "json" if as_json else None})
    return path, out, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "batch":
        work = [(path, ns.json) for path in ns.jobs_files]
        if ns.jobs > 1:
            with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
                results = list(pool.map(_batch_one, work))
        else:
            results = [_batch_one(w) for w in work]
        worst = 0
        for path, out, code in results:
            if not ns.json:
                sys.stdout.write(f"== {path}\n")
            sys.stdout.write(out)
            worst = max(worst, code)
        return worst

    overrides = _overrides(ns)
    fmt = "json" if ns.json else "canonical"
    try:
        if ns.command == "run":
            text = _read(ns.job)
        elif ns.job:
            text = _read(ns.job)
            overrides.update(cmd=ns.command, args=list(ns.ideals))
            if ns.factor:
                raise ParseError("--factor is only for inline ideals; use factor lines in the job", None, "--factor")
        else:
            if ns.p is None or ns.vars is None:
                raise ParseError("inline use needs --p and --vars", None, None)
            text, _ = inline_document(ns.command, ns.ideals, ns.factor)
    except (OSError, ParseError) as exc:
        (sys.stdout if ns.json else sys.stderr).write(emit_error(exc, fmt))
        return EXIT_INVALID
    out, code = _execute(text, overrides)
    if code and not ns.json:
        sys.stderr.write(out)
        return code
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
