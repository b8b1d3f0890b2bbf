"""Command line interface.

Every subcommand returns a ``CommandResult``; the process exit code mirrors
its status (0 ok, 1 verification failed, 2 invalid input).  JSON output uses
sorted keys so identical invocations give identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebraic import phi
from .board import GameParams, TraceFormatError, load_trace, replay, trace_lines
from .bounds import bounds_report, max_row_1d, row1_cap, scan_gap, upper_bound_row, achieved_row
from .oracle import MAX_COUNT_AT, MAX_ROW, SearchConfig, bfs_optimum, default_depth
from .pagoda import WeightSpec, background_energy, board_energy, row_unreachable
from .sequences import S, cumulative_a, knacci, lucas
from .strategies import (
    Infeasible,
    column_fill_plan,
    projection_plan,
    row1_amass_plan,
    single_square_plan,
    verify_plan,
)

OK = "ok"
VERIFICATION_FAILED = "verification_failed"
INVALID_INPUT = "invalid_input"
EXIT_CODES = {OK: 0, VERIFICATION_FAILED: 1, INVALID_INPUT: 2}


@dataclass
class CommandResult:
    status: str
    payload: dict
    text: Optional[str] = None  # raw output (trace, CSV) printed instead of the payload

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def render(self) -> str:
        if self.text is not None:
            return self.text
        return json.dumps(self.payload, sort_keys=True, indent=2) + "\n"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _params_args(p: argparse.ArgumentParser, d_default: int = 1) -> None:
    p.add_argument("--m", type=int, required=True, help="checkers per cell")
    p.add_argument("--k", type=int, default=2, help="jump length")
    p.add_argument("--d", type=int, default=d_default, help="dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conway-mk", description="Generalized Conway checkers on Z^d")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bounds", help="lower, upper and achieved rows")
    _params_args(p)

    p = sub.add_parser("construct", help="emit a trace reaching a row")
    _params_args(p)
    p.add_argument("--n", type=int, help="target row (defaults to the achieved row)")
    p.add_argument("--out", help="write the trace here instead of stdout")

    p = sub.add_parser("amass", help="emit a trace amassing checkers on one cell")
    _params_args(p)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="replay a trace and check its claim")
    p.add_argument("--trace", required=True)
    p.add_argument("--energy-check", action="store_true")

    p = sub.add_parser("scan", help="CSV of m where the construction misses the bound")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--m-from", type=int, required=True)
    p.add_argument("--m-to", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--all", action="store_true", help="list every m, not only the misses")
    p.add_argument("--out")

    p = sub.add_parser("energy", help="exact pagoda energy for a target row")
    _params_args(p)
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--trace", help="energy of this trace's final board instead")
    p.add_argument("--digits", type=int, default=12)

    p = sub.add_parser("oracle", help="exhaustive search on a truncated board")
    _params_args(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--top", type=int)
    p.add_argument("--radius", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--objective", choices=[MAX_ROW, MAX_COUNT_AT], default=MAX_ROW)
    p.add_argument("--at", type=int, nargs="+", help="cell for max_count_at")
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--witness", help="write the witness trace here")

    p = sub.add_parser("sequence", help="k-nacci numbers and related sums")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--terms", type=int, default=20)
    p.add_argument("--n", type=int, help="also list S_i(n) for i < k")

    p = sub.add_parser("constant", help="certified decimal expansion of phi_k")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--digits", type=int, default=30)
    return parser


def _write(text: str, out: Optional[str]) -> Optional[str]:
    if out is None:
        return text
    with open(out, "w", newline="\n") as fh:
        fh.write(text)
    return None


def _trace_text(trace) -> str:
    return "".join(line + "\n" for line in trace_lines(trace))


def _load(path: str):
    with open(path) as fh:
        return load_trace(fh)


def _cmd_bounds(a) -> CommandResult:
    return CommandResult(OK, bounds_report(GameParams(a.m, a.k, a.d)).to_json())


def _cmd_construct(a) -> CommandResult:
    params = GameParams(a.m, a.k, a.d)
    n = achieved_row(params) if a.n is None else a.n
    if n < 1:
        raise ValueError("target row must be >= 1")
    if a.d == 1 and a.m > 1:
        plan = column_fill_plan(a.m, a.k, n)
        if isinstance(plan, Infeasible):
            payload = {
                "feasible": False,
                "row": n,
                "certificate": plan.certificate.to_json(),
                "reason": "requirements never die out: m <= phi^(n-1) (phi-1)",
            }
            return CommandResult(VERIFICATION_FAILED, payload)
        trace = plan.schedule
    else:
        if n > achieved_row(params):
            payload = {"feasible": False, "row": n, "achieved": achieved_row(params)}
            return CommandResult(VERIFICATION_FAILED, payload)
        trace = projection_plan(params, n).flatten()
    text = _write(_trace_text(trace), a.out)
    return CommandResult(OK, {"moves": len(trace), "row": n, "out": a.out}, text)


def _cmd_amass(a) -> CommandResult:
    params = GameParams(a.m, a.k, a.d)
    if a.d == 1:
        trace = row1_amass_plan(a.m, a.k).schedule
    else:
        trace = single_square_plan(params).flatten()
    text = _write(_trace_text(trace), a.out)
    return CommandResult(OK, {"moves": len(trace), "claim": trace.claim, "out": a.out}, text)


def _cmd_verify(a) -> CommandResult:
    trace = _load(a.trace)
    report = verify_plan(trace, energy_check=a.energy_check)
    return CommandResult(OK if report.ok else VERIFICATION_FAILED, report.to_json())


def _cmd_scan(a) -> CommandResult:
    if a.m_from < 1 or a.m_to < a.m_from:
        raise ValueError("need 1 <= m-from <= m-to")
    ms = range(a.m_from, a.m_to + 1)
    if a.all:
        rows = [(m, upper_bound_row(GameParams(m, a.k, a.d))[0], achieved_row(GameParams(m, a.k, a.d))) for m in ms]
    else:
        rows = scan_gap(a.k, a.d, ms, workers=a.workers)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "upper", "achieved"])
    w.writerows(rows)
    text = _write(buf.getvalue(), a.out)
    return CommandResult(OK, {"rows": len(rows), "out": a.out}, text)


def _cmd_energy(a) -> CommandResult:
    params = GameParams(a.m, a.k, a.d)
    spec = WeightSpec.at_row(params, a.row)
    payload = {"m": a.m, "k": a.k, "d": a.d, "row": a.row, "target": list(spec.target)}
    if a.trace:
        trace = _load(a.trace)
        if trace.params != params:
            raise ValueError("trace parameters differ from --m/--k/--d")
        payload["energy"] = board_energy(replay(trace), spec).to_json(a.digits)
    else:
        payload["energy"] = background_energy(params, a.row, spec).to_json(a.digits)
        verdict = row_unreachable(params, a.row)
        payload["verdict"] = verdict.kind.value
        payload["reason"] = verdict.reason
    return CommandResult(OK, payload)


def _cmd_oracle(a) -> CommandResult:
    params = GameParams(a.m, a.k, a.d)
    at = tuple(a.at) if a.at else ((0,) * (a.d - 1) + (1,) if a.objective == MAX_COUNT_AT else None)
    depth = a.depth if a.depth is not None else default_depth(params, a.objective)
    config = SearchConfig(params, depth, a.top, a.radius, a.budget, a.objective, at, not a.no_prune)
    result = bfs_optimum(config)
    payload = result.to_json()
    payload.update({"m": a.m, "k": a.k, "d": a.d, "depth": depth, "objective": a.objective})
    if a.d == 1:
        payload["formula"] = max_row_1d(a.m, a.k) if a.objective == MAX_ROW else row1_cap(a.m, a.k)
    if a.witness:
        _write(_trace_text(result.witness), a.witness)
    return CommandResult(OK, payload)


def _cmd_sequence(a) -> CommandResult:
    if a.terms < 0:
        raise ValueError("terms must be >= 0")
    payload = {
        "k": a.k,
        "knacci": [knacci(a.k, i) for i in range(a.terms)],
        "cumulative": [cumulative_a(a.k, i) for i in range(a.terms)],
    }
    if a.k == 2:
        payload["lucas"] = [lucas(i) for i in range(a.terms)]
    if a.n is not None:
        payload["S"] = {str(i): S(a.k, i, a.n) for i in range(a.k)}
    return CommandResult(OK, payload)


def _cmd_constant(a) -> CommandResult:
    if a.digits < 0:
        raise ValueError("digits must be >= 0")
    text, exact = phi(a.k).to_decimal(a.digits)
    return CommandResult(OK, {"k": a.k, "digits": a.digits, "phi": text, "exact": exact})


_COMMANDS = {
    "bounds": _cmd_bounds,
    "construct": _cmd_construct,
    "amass": _cmd_amass,
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "energy": _cmd_energy,
    "oracle": _cmd_oracle,
    "sequence": _cmd_sequence,
    "constant": _cmd_constant,
}


def run(argv: Sequence[str]) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
    except _UsageError as exc:
        return CommandResult(INVALID_INPUT, {"error": str(exc)})
    try:
        return _COMMANDS[args.command](args)
    except (TraceFormatError, ValueError, OSError) as exc:
        return CommandResult(INVALID_INPUT, {"error": str(exc)})


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if any(x in ("-h", "--help") for x in argv):
        build_parser().parse_args(list(argv))  # prints help and exits
    result = run(argv)
    stream = sys.stderr if result.status == INVALID_INPUT else sys.stdout
    stream.write(result.render())
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
