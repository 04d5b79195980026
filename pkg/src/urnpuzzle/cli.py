"""``urnpuzzle`` command-line front end.

Exit codes: 0 success, 2 crosscheck DISAGREE, 3 parse error, 4 validation
error, 5 conditioning error, 6 domain error, 7 saturation error, 64 bad
command line. Errors go to stderr as one JSON object per line.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import bayesnet, urn
from .errors import UrnError
from .exact import format_decimal, format_rational
from .scenario import ScenarioDocument, emit_scenario, parse_scenario
from .simulate import DEFAULT_CHUNK_SIZE, SimConfig, confidence_interval, simulate_predictive
from .urn import Color

EXIT_OK = 0
EXIT_DISAGREE = 2
EXIT_USAGE = 64
EXIT_CODES = {"parse": 3, "validation": 4, "conditioning": 5, "domain": 6, "saturation": 7}

HALF = Fraction(1, 2)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def verdict(p_red: Fraction) -> str:
    if p_red > HALF:
        return "more likely red"
    if p_red < HALF:
        return "more likely green"
    return "equally likely"


class Report:
    """Collects result records and renders them as text or JSON lines."""

    def __init__(self, fmt: str, out):
        self.fmt = fmt
        self.out = out

    def emit(self, record: dict | None, text: str) -> None:
        """``record=None`` marks text-only decoration."""
        if self.fmt == "json-lines":
            if record is not None:
                self.out.write(json.dumps(record) + "\n")
        else:
            self.out.write(text + "\n")


def _describe(doc: ScenarioDocument) -> str:
    prior = doc.prior.type
    if doc.prior.r is not None:
        prior += f"(r={doc.prior.r})"
    if doc.prior.p is not None:
        prior += f"(p={format_rational(doc.prior.p)})"
    ev = ", ".join(c.value for c in doc.evidence)
    return f"balls={doc.balls} prior={prior} evidence=[{ev}]"


def _rational_fields(value: Fraction) -> dict:
    return {"value": format_rational(value), "decimal": format_decimal(value)}


def _load(path: str | None, stdin) -> ScenarioDocument:
    if path is None:
        return ScenarioDocument()
    if path == "-":
        return parse_scenario(stdin.read())
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text)


def _posterior_lines(report: Report, command: str, dist: Sequence[Fraction]) -> None:
    for r, p in enumerate(dist):
        report.emit(
            {"command": command, "r": r, **_rational_fields(p)},
            f"  P(R={r}) = {format_rational(p)}  ({format_decimal(p)})",
        )


def cmd_exact(args, doc: ScenarioDocument, report: Report) -> int:
    scenario = doc.scenario()
    if doc.query.type == "posterior":
        return cmd_posterior(args, doc, report)
    color = doc.query.color
    p = urn.predictive_next(scenario, doc.evidence, color)
    p_red = p if color is Color.RED else 1 - p
    v = verdict(p_red)
    report.emit(
        {"command": "exact", "color": color.value, **_rational_fields(p), "verdict": v},
        f"scenario: {_describe(doc)}\n"
        f"P(next={color.value} | evidence) = {format_rational(p)}\n"
        f"decimal: {format_decimal(p)}\n"
        f"verdict: {v}",
    )
    return EXIT_OK


def cmd_posterior(args, doc: ScenarioDocument, report: Report) -> int:
    dist = urn.posterior(doc.scenario(), doc.evidence)
    report.emit(None, f"scenario: {_describe(doc)}\nposterior over R:")
    _posterior_lines(report, "posterior", dist)
    return EXIT_OK


def cmd_simulate(args, doc: ScenarioDocument, report: Report) -> int:
    color = doc.query.color or Color.RED
    config = SimConfig(
        trials=args.trials, seed=args.seed, chunk_size=args.chunk_size, threads=args.threads
    )
    res = simulate_predictive(doc.scenario(), doc.evidence, color, config)
    lo, hi = confidence_interval(res, 3.0)
    report.emit(
        {
            "command": "simulate",
            "color": color.value,
            "trials": config.trials,
            "seed": config.seed,
            "chunk_size": config.chunk_size,
            "accepted": res.accepted,
            "successes": res.successes,
            "attempts": res.attempts,
            "estimate": res.estimate,
            "std_error": res.std_error,
            "ci_z3": [lo, hi],
        },
        f"scenario: {_describe(doc)}\n"
        f"generator: Philox4x64 via SeedSequence(seed={config.seed}, spawn_key=(chunk,)), "
        f"chunk_size={config.chunk_size}\n"
        f"target: P(next={color.value} | evidence)\n"
        f"accepted: {res.accepted}\n"
        f"successes: {res.successes}\n"
        f"attempts: {res.attempts}\n"
        f"estimate: {res.estimate!r}\n"
        f"std_error: {res.std_error!r}\n"
        f"ci(z=3): [{lo!r}, {hi!r}]",
    )
    return EXIT_OK


def _puzzle_record(name: str, label: str, p: Fraction, report: Report) -> None:
    report.emit(
        {"command": "puzzle", "puzzle": name, "quantity": label, **_rational_fields(p)},
        f"{name}: {label} = {format_rational(p)}  ({format_decimal(p)})",
    )


def cmd_puzzle(args, doc, report: Report) -> int:
    if args.name == "monty-hall":
        dist = bayesnet.query(bayesnet.build_monty_hall(), "car", {"pick": 1, "host": 3})
        _puzzle_record("monty-hall", "P(win by switching)", dist[1], report)
        _puzzle_record("monty-hall", "P(win by staying)", dist[0], report)
    elif args.name == "bertrand-box":
        dist = bayesnet.query(bayesnet.build_bertrand_box(), "other_side", {"seen": "gold"})
        _puzzle_record("bertrand-box", "P(other side gold | seen gold)", dist[0], report)
    else:
        p = urn.litt_answer(args.balls)
        _puzzle_record("litt", f"P(second red | first red, balls={args.balls})", p, report)
        report.emit(None, f"verdict: {verdict(p)}")
    return EXIT_OK


def cmd_crosscheck(args, doc: ScenarioDocument, report: Report) -> int:
    scenario = doc.scenario()
    k = len(doc.evidence)
    posterior_query = doc.query.type == "posterior"
    needed = max(k, 1) if posterior_query else k + 1
    depth = args.depth if args.depth is not None else needed
    if depth < needed:
        raise UsageError(f"--depth {depth} is too shallow; this query needs {needed}")
    net = bayesnet.build_urn_network(doc.balls, depth, scenario.prior.masses)
    obs = {f"draw{i + 1}": c.value for i, c in enumerate(doc.evidence)}
    if posterior_query:
        engine = urn.posterior(scenario, doc.evidence)
        network = bayesnet.query(net, "R", obs)
        labels = [f"P(R={r})" for r in range(doc.balls + 1)]
    else:
        engine = [urn.predictive_next(scenario, doc.evidence, c) for c in Color]
        network = bayesnet.query(net, f"draw{k + 1}", obs)
        labels = [f"P(next={c.value})" for c in Color]
    agree = engine == network
    for label, a, b in zip(labels, engine, network):
        report.emit(
            {
                "command": "crosscheck",
                "quantity": label,
                "urn_model": format_rational(a),
                "bayesnet": format_rational(b),
                "agree": a == b,
            },
            f"{label}: urn-model {format_rational(a)} | bayesnet {format_rational(b)}"
            f"{'' if a == b else '  <-- differs'}",
        )
    flag = "AGREE" if agree else "DISAGREE"
    report.emit({"command": "crosscheck", "result": flag, "depth": depth}, f"crosscheck: {flag}")
    return EXIT_OK if agree else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json-lines"), default=argparse.SUPPRESS)
    common.add_argument("--emit-scenario", action="store_true", default=argparse.SUPPRESS)

    parser = _Parser(prog="urnpuzzle", parents=[common], description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("exact", parents=[common], help="exact answer to the scenario's query")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo estimate")
    p.add_argument("file", nargs="?")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("posterior", parents=[common], help="posterior over the red count")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("puzzle", parents=[common], help="classic 2/3 puzzles")
    p.add_argument("name", choices=("monty-hall", "bertrand-box", "litt"))
    p.add_argument("--balls", type=int, default=100)
    p.set_defaults(func=cmd_puzzle, file=None)

    p = sub.add_parser("crosscheck", parents=[common], help="urn model vs Bayes-net enumeration")
    p.add_argument("file", nargs="?")
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_crosscheck)
    return parser


def _fail(err, kind: str, message: str, code: int) -> int:
    err.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def run(argv: Sequence[str] | None = None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        fmt = getattr(args, "format", "text")
        doc = _load(args.file, stdin)
        if getattr(args, "emit_scenario", False):
            stdout.write(emit_scenario(doc))
            return EXIT_OK
        return args.func(args, doc, Report(fmt, stdout))
    except UsageError as exc:
        return _fail(stderr, "usage", str(exc), EXIT_USAGE)
    except UrnError as exc:
        return _fail(stderr, exc.kind, str(exc), EXIT_CODES.get(exc.kind, 1))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
