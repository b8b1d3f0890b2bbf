"""Constructive planners that emit concrete move traces.

All one-dimensional plans follow the same pattern: decide how many checkers
must finish on each of the top rows, push the shortfall down the column
(every checker added to row -j by a jump from row -(j+k) also costs one
checker from each of the k-1 rows in between) until k consecutive rows need
nothing, then schedule the jumps deepest row first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .algebraic import FieldElement, phi, phi_power
from .board import (
    BoardState,
    EMPTY,
    GameParams,
    Move,
    MoveTrace,
    Position,
    ReplayError,
    check_claim,
    iter_replay,
)
from .bounds import achieved_row, projected_m, row1_cap
from .pagoda import WeightSpec, weight
from .sequences import S, cumulative_a, knacci

__all__ = [
    "ConstructionPlan",
    "Infeasible",
    "ProjectionPlan",
    "ProjectionStep",
    "VerifyReport",
    "knacci_jump_moves",
    "knacci_jump_plan",
    "column_fill_requirement",
    "column_fill_plan",
    "amass_requirement",
    "row1_amass_plan",
    "projection_plan",
    "single_square_plan",
    "verify_plan",
]


class PlanConsistencyError(RuntimeError):
    """The integer cutoff test and the exact field criterion disagree."""


@dataclass
class ConstructionPlan:
    params: GameParams
    target_row: int
    requirements: list[tuple[int, int]]
    cutoff: int
    schedule: MoveTrace
    target_count: int = 1

    @property
    def feasible(self) -> bool:
        return True

    def touched_rows(self) -> tuple[int, int]:
        rows = [c[-1] for mv in self.schedule.moves for c in mv.cells(self.params.k)]
        return min(rows), max(rows)


@dataclass
class Infeasible:
    params: GameParams
    target_row: int
    # m - phi^(n-1) (phi - 1), certified negative
    certificate: FieldElement
    requirements: list[tuple[int, int]]

    @property
    def feasible(self) -> bool:
        return False


# ---------------------------------------------------------------------------
# k-nacci jumping


def knacci_jump_moves(k: int, n: int) -> list[Move]:
    """Moves that carry the stacked column S_{k-1-i}(n) on rows -i to row n.

    Each phase jumps every checker of the lowest stacked row over the k-1
    rows above it, leaving the same shape for n-1 one row higher.
    """
    if n < 1:
        raise ValueError("target row must be >= 1")
    counts = {-i: S(k, k - i - 1, n) for i in range(k)}
    moves = []
    for t in range(n):
        low = t - (k - 1)
        c = counts.get(low, 0)
        moves.extend([Move((low,), 0, 1)] * c)
        for j in range(k):
            counts[low + j] = counts.get(low + j, 0) - c
        counts[low + k] = counts.get(low + k, 0) + c
    return moves


def knacci_jump_plan(k: int, n: int) -> MoveTrace:
    params = GameParams(1, k, 1)
    moves = knacci_jump_moves(k, n)
    initial = BoardState(params, {(-i,): S(k, k - i - 1, n) for i in range(k)}, EMPTY)
    return MoveTrace(params, tuple(moves), {"row": n}, initial)


# ---------------------------------------------------------------------------
# one-dimensional fills


def column_fill_requirement(m: int, k: int, n: int, i: int) -> int:
    """Checkers to add to row -i: F_k(n+i+k-1) - a_i m."""
    return knacci(k, n + i + k - 1) - cumulative_a(k, i) * m


def amass_requirement(m: int, k: int, M: int, i: int) -> int:
    """Checkers to add to row -i to put M on row 1: F_k(k+i) M - a_i m."""
    return knacci(k, k + i) * M - cumulative_a(k, i) * m


def _integer_cutoff(req, m: int, k: int) -> tuple[Optional[int], list[tuple[int, int]]]:
    """First i with k consecutive r_i <= 0, or None once k consecutive r_i >= m.

    Both are permanent: r_{i+k} = r_i + ... + r_{i+k-1} - m.
    """
    table: list[tuple[int, int]] = []
    low_run = high_run = 0
    i = 0
    while True:
        r = req(i)
        table.append((i, r))
        low_run = low_run + 1 if r <= 0 else 0
        high_run = high_run + 1 if r >= m else 0
        if low_run == k:
            return i - k + 1, table
        if high_run == k:
            return None, table
        i += 1


def _top_up_moves(m: int, k: int, targets: Sequence[int], cutoff: int) -> list[Move]:
    """Jumps that leave at least targets[j] checkers on row -j, deepest first."""
    adds: list[int] = []
    j = 0
    zeros = 0
    limit = max(cutoff, len(targets)) + 64 * k
    while zeros < k:
        t = targets[j] if j < len(targets) else 0
        need = t - m + sum(adds[j - l] for l in range(1, k + 1) if j - l >= 0)
        adds.append(max(0, need))
        zeros = zeros + 1 if adds[-1] == 0 else 0
        j += 1
        if j > limit:
            raise PlanConsistencyError("top-up requirements do not die out")
    moves = []
    for j in range(len(adds) - 1, -1, -1):
        moves.extend([Move((-(j + k),), 0, 1)] * adds[j])
    return moves


def column_fill_plan(m: int, k: int, n: int):
    """Plan reaching row n from the fresh 1-D board, or a certified Infeasible."""
    if m <= 1:
        raise ValueError("column fill needs m > 1")
    if n < 1:
        raise ValueError("target row must be >= 1")
    p = phi(k)
    cert = m - phi_power(k, n - 1) * (p - 1)
    s = cert.sign()
    cutoff, table = _integer_cutoff(lambda i: column_fill_requirement(m, k, n, i), m, k)
    if s != 0 and (cutoff is not None) != (s > 0):
        raise PlanConsistencyError(
            f"integer cutoff {cutoff} contradicts field sign {s} for m={m}, k={k}, n={n}"
        )
    params = GameParams(m, k, 1)
    if cutoff is None:
        return Infeasible(params, n, cert, table)
    targets = [S(k, k - 1 - j, n) for j in range(k)]
    moves = _top_up_moves(m, k, targets, cutoff) + knacci_jump_moves(k, n)
    trace = MoveTrace(params, tuple(moves), {"row": n})
    return ConstructionPlan(params, n, table, cutoff, trace)


def row1_amass_plan(m: int, k: int) -> ConstructionPlan:
    """Plan adding floor(m / (phi_k - 1)) checkers to row 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    M = row1_cap(m, k)
    cutoff, table = _integer_cutoff(lambda i: amass_requirement(m, k, M, i), m, k)
    if cutoff is None:
        raise PlanConsistencyError(f"amass requirements diverge for m={m}, k={k}")
    moves = _top_up_moves(m, k, [M] * k, cutoff)
    moves += [Move((-(k - 1),), 0, 1)] * M
    params = GameParams(m, k, 1)
    trace = MoveTrace(params, tuple(moves), {"count": M, "at": [1]})
    return ConstructionPlan(params, 1, table, cutoff, trace, target_count=M)


# ---------------------------------------------------------------------------
# projection to lower dimensions


def _embed(mv: Move, d: int, axis: int, base: Position, flip: bool) -> Move:
    """Place a 1-D amass move on the fiber through ``base`` along ``axis``.

    1-D row r maps to base[axis] + (r - 1), or base[axis] + (1 - r) when
    flipped, so row 1 lands on ``base``.
    """
    r = mv.origin[0]
    p = list(base)
    p[axis] = base[axis] + (1 - r if flip else r - 1)
    return Move(tuple(p), axis, -mv.sign if flip else mv.sign)


@dataclass
class ProjectionStep:
    axis: int
    m_in: int
    amass: ConstructionPlan
    fibers: list[Position]

    def iter_moves(self, d: int) -> Iterator[Move]:
        for base in self.fibers:
            for flip in (False, True):
                for mv in self.amass.schedule.moves:
                    yield _embed(mv, d, self.axis, base, flip)


@dataclass
class ProjectionPlan:
    """Projection steps followed by a final one-dimensional plan.

    Moves are produced lazily; ``flatten`` materialises them.
    """

    params: GameParams
    steps: list[ProjectionStep]
    final: ConstructionPlan
    final_offset: Position
    claim: dict
    window: list[tuple[int, int]] = field(default_factory=list)

    def iter_moves(self) -> Iterator[Move]:
        d = self.params.d
        for step in self.steps:
            yield from step.iter_moves(d)
        for mv in self.final.schedule.moves:
            p = tuple(self.final_offset[:-1]) + (mv.origin[0] + self.final_offset[-1],)
            yield Move(p, d - 1, mv.sign)

    def flatten(self) -> MoveTrace:
        return MoveTrace(self.params, tuple(self.iter_moves()), self.claim)

    def move_count(self) -> int:
        n = len(self.final.schedule)
        for step in self.steps:
            n += 2 * len(step.fibers) * len(step.amass.schedule)
        return n


def _projection_steps(params: GameParams, final_rows: tuple[int, int]) -> tuple[list[ProjectionStep], list[tuple[int, int]]]:
    """Steps that raise every cell of the column rows ``final_rows`` (all <= 0)
    to the fully projected count."""
    d, k = params.d, params.k
    counts = projected_m(params)
    lo_row, hi_row = final_rows
    # per-coordinate half-widths, filled from the last step backwards
    amass = [row1_amass_plan(counts[s], k) for s in range(d - 1)]
    reach = [1 - a.touched_rows()[0] for a in amass]
    steps = []
    for s in range(d - 1):
        # cells that step s must serve: x_0..x_s = 0, later axes within their reach
        ranges = []
        for a in range(d - 1):
            if a <= s:
                ranges.append(range(0, 1))
            else:
                ranges.append(range(-reach[a], reach[a] + 1))
        ranges.append(range(lo_row, hi_row + 1))
        fibers = [tuple(p) for p in itertools.product(*ranges)]
        steps.append(ProjectionStep(s, counts[s], amass[s], fibers))
    window = [(-reach[a], reach[a]) for a in range(d - 1)]
    return steps, window


def projection_plan(params: GameParams, n: Optional[int] = None) -> ProjectionPlan:
    """Project to one dimension, then run the column fill to row n.

    ``n`` defaults to the achieved row.  For m = 1 in one dimension the
    column fill does not apply and a single jump reaches row 1.
    """
    k, d = params.k, params.d
    if n is None:
        n = achieved_row(params)
    final_m = projected_m(params)[-1]
    if final_m == 1:
        if n != 1:
            raise ValueError("with one checker per cell only row 1 is reachable")
        trace = MoveTrace(GameParams(1, k, 1), (Move((-(k - 1),), 0, 1),), {"row": 1})
        final = ConstructionPlan(GameParams(1, k, 1), 1, [], 0, trace)
    else:
        final = column_fill_plan(final_m, k, n)
        if not final.feasible:
            raise ValueError(f"row {n} is beyond the construction for {params}")
    lo, hi = final.touched_rows()
    steps, window = _projection_steps(params, (lo, 0))
    window.append((lo, hi))
    return ProjectionPlan(params, steps, final, (0,) * d, {"row": n}, window)


def single_square_plan(params: GameParams) -> ProjectionPlan:
    """Amass onto one deep cell of the projected column from above and below."""
    k, d = params.k, params.d
    final_m = projected_m(params)[-1]
    amass = row1_amass_plan(final_m, k)
    lo = amass.touched_rows()[0]
    target_row = lo - 1
    moves = []
    for flip in (False, True):
        for mv in amass.schedule.moves:
            moves.append(_embed(mv, 1, 0, (target_row,), flip))
    total = final_m + 2 * amass.target_count
    trace = MoveTrace(GameParams(final_m, k, 1), tuple(moves))
    final = ConstructionPlan(GameParams(final_m, k, 1), target_row, amass.requirements, amass.cutoff, trace, total)
    rows = [c[-1] for mv in moves for c in mv.cells(k)]
    steps, window = _projection_steps(params, (min(rows), 0))
    window.append((min(rows), 0))
    target = (0,) * (d - 1) + (target_row,)
    return ProjectionPlan(params, steps, final, (0,) * d, {"count": total, "at": list(target)}, window)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyReport:
    ok: bool
    moves: int
    claim_ok: bool
    energy_increases: Optional[int] = None
    energy_target: Optional[Position] = None
    error: Optional[str] = None
    failed_index: Optional[int] = None
    final: Optional[BoardState] = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "moves": self.moves,
            "claim_ok": self.claim_ok,
            "energy_increases": self.energy_increases,
            "energy_target": list(self.energy_target) if self.energy_target else None,
            "error": self.error,
            "failed_index": self.failed_index,
        }


def _claim_target(trace: MoveTrace) -> Optional[Position]:
    claim = trace.claim or {}
    d = trace.params.d
    if "row" in claim:
        return (0,) * (d - 1) + (claim["row"],)
    if "at" in claim:
        return tuple(claim["at"])
    return None


def verify_plan(plan, energy_check: bool = False) -> VerifyReport:
    """Replay a plan or trace, check its claim, optionally count energy rises."""
    if isinstance(plan, (ConstructionPlan,)):
        trace = plan.schedule
    elif isinstance(plan, ProjectionPlan):
        trace = plan.flatten()
    else:
        trace = plan
    spec = None
    increases = None
    target = _claim_target(trace)
    if energy_check:
        if target is None:
            raise ValueError("energy check needs a claim to fix the target cell")
        spec = WeightSpec(target, trace.params.k)
        increases = 0
    k = trace.params.k
    count = 0
    last_delta: dict = dict(trace.start().delta)
    try:
        for mv, delta in iter_replay(trace):
            count += 1
            last_delta = delta
            if spec is not None:
                cells = mv.cells(k)
                de = weight(cells[-1], spec)
                for c in cells[:-1]:
                    de = de - weight(c, spec)
                if not de.is_zero() and de.sign() > 0:
                    increases += 1
    except ReplayError as exc:
        return VerifyReport(False, count, False, increases, target, str(exc), exc.index)
    start = trace.start()
    final = BoardState(trace.params, last_delta, start.background)
    claim_ok = check_claim(final, trace.claim)
    ok = claim_ok and not increases
    err = None if claim_ok else f"claim {trace.claim} not met"
    if increases:
        err = f"{increases} moves increased the energy"
    return VerifyReport(ok, count, claim_ok, increases, target, err, None, final)
