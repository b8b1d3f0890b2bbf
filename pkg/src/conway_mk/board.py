"""Game state on Z^d and the (m,k) jump rule.

A board is a background (the filled half-space ``row <= 0`` with ``m``
checkers per cell, or empty) plus a finite sparse delta.  The last
coordinate of a position is its row.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence

__all__ = [
    "GameParams",
    "Position",
    "Move",
    "MoveTrace",
    "BoardState",
    "IllegalMove",
    "ReplayError",
    "TraceFormatError",
    "fresh_board",
    "count_at",
    "apply_move",
    "legal_moves",
    "replay",
    "iter_replay",
    "max_row_occupied",
    "added_at",
    "check_claim",
    "trace_lines",
    "dump_trace",
    "load_trace",
]

Position = tuple[int, ...]

HALFSPACE = "halfspace"
EMPTY = "empty"


@dataclass(frozen=True)
class GameParams:
    m: int = 1
    k: int = 2
    d: int = 1

    def __post_init__(self):
        for name, lo in (("m", 1), ("k", 2), ("d", 1)):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < lo:
                raise ValueError(f"{name} must be an integer >= {lo}, got {v!r}")


class IllegalMove(ValueError):
    """A jump whose origin or one of the jumped cells is empty."""

    def __init__(self, move: "Move", cell: Position):
        super().__init__(f"illegal move {move}: cell {list(cell)} is empty")
        self.move = move
        self.cell = cell


class ReplayError(ValueError):
    def __init__(self, index: int, cause: IllegalMove):
        super().__init__(f"move {index}: {cause}")
        self.index = index
        self.cause = cause


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    origin: Position
    axis: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign!r}")
        if not 0 <= self.axis < len(self.origin):
            raise ValueError(f"axis {self.axis} out of range for {len(self.origin)}-d position")

    def cells(self, k: int) -> list[Position]:
        """origin, the k-1 jumped cells, then the landing cell."""
        out = []
        for j in range(k + 1):
            p = list(self.origin)
            p[self.axis] += j * self.sign
            out.append(tuple(p))
        return out

    def translated(self, offset: Sequence[int]) -> "Move":
        return Move(tuple(a + b for a, b in zip(self.origin, offset)), self.axis, self.sign)


@dataclass(frozen=True)
class BoardState:
    params: GameParams
    delta: Mapping[Position, int] = field(default_factory=dict)
    background: str = HALFSPACE

    def __post_init__(self):
        if self.background not in (HALFSPACE, EMPTY):
            raise ValueError(f"unknown background {self.background!r}")
        clean = {}
        for p, v in self.delta.items():
            p = tuple(p)
            if len(p) != self.params.d:
                raise ValueError(f"position {p} does not have dimension {self.params.d}")
            if v:
                clean[p] = v
        object.__setattr__(self, "delta", MappingProxyType(clean))
        for p in clean:
            if self.count(p) < 0:
                raise ValueError(f"negative checker count at {list(p)}")

    def base(self, p: Position) -> int:
        if self.background == HALFSPACE and p[-1] <= 0:
            return self.params.m
        return 0

    def count(self, p: Position) -> int:
        return self.base(p) + self.delta.get(p, 0)

    def __hash__(self):
        return hash((self.params, self.background, frozenset(self.delta.items())))

    def __eq__(self, other):
        if not isinstance(other, BoardState):
            return NotImplemented
        return (
            self.params == other.params
            and self.background == other.background
            and dict(self.delta) == dict(other.delta)
        )


def fresh_board(params: GameParams) -> BoardState:
    return BoardState(params)


def _check_dim(board: BoardState, p: Sequence[int]) -> Position:
    p = tuple(p)
    if len(p) != board.params.d:
        raise ValueError(f"position {list(p)} does not have dimension {board.params.d}")
    return p


def count_at(board: BoardState, p: Sequence[int]) -> int:
    return board.count(_check_dim(board, p))


def _apply_in_place(
    counts: dict[Position, int], base, params: GameParams, mv: Move
) -> None:
    """Mutating jump on a delta dict; raises IllegalMove without mutating."""
    cells = mv.cells(params.k)
    for c in cells[:-1]:
        if base(c) + counts.get(c, 0) < 1:
            raise IllegalMove(mv, c)
    for c in cells[:-1]:
        v = counts.get(c, 0) - 1
        if v:
            counts[c] = v
        else:
            counts.pop(c, None)
    land = cells[-1]
    v = counts.get(land, 0) + 1
    if v:
        counts[land] = v
    else:
        counts.pop(land, None)


def apply_move(board: BoardState, mv: Move) -> BoardState:
    """Jump ``mv.origin`` over k-1 cells; each jumped cell loses one checker."""
    _check_dim(board, mv.origin)
    delta = dict(board.delta)
    _apply_in_place(delta, board.base, board.params, mv)
    return BoardState(board.params, delta, board.background)


def legal_moves(board: BoardState, window: Sequence[tuple[int, int]]) -> list[Move]:
    """All legal moves whose origin and landing cell lie in ``window``.

    ``window`` gives an inclusive (lo, hi) range per coordinate.
    """
    params = board.params
    if len(window) != params.d:
        raise ValueError("window dimension mismatch")
    if any(lo > hi for lo, hi in window):
        return []
    out = []
    ranges = [range(lo, hi + 1) for lo, hi in window]
    for origin in itertools.product(*ranges):
        if board.count(origin) < 1:
            continue
        for axis in range(params.d):
            lo, hi = window[axis]
            for sign in (1, -1):
                land = origin[axis] + sign * params.k
                if not lo <= land <= hi:
                    continue
                mv = Move(origin, axis, sign)
                if all(board.count(c) >= 1 for c in mv.cells(params.k)[1:-1]):
                    out.append(mv)
    return out


@dataclass(frozen=True)
class MoveTrace:
    """A replayable move list.

    ``initial`` overrides the fresh half-space board (used for k-nacci
    jumping from a stacked column).  ``claim`` is ``{"row": n}`` or
    ``{"count": c, "at": [..]}``.
    """

    params: GameParams
    moves: tuple[Move, ...] = ()
    claim: Optional[dict] = None
    initial: Optional[BoardState] = None

    def start(self) -> BoardState:
        return self.initial if self.initial is not None else fresh_board(self.params)

    def __len__(self):
        return len(self.moves)


def iter_replay(trace: MoveTrace) -> Iterator[tuple[Move, dict[Position, int]]]:
    """Yield each move with the (shared, mutating) delta after applying it."""
    start = trace.start()
    delta = dict(start.delta)
    for i, mv in enumerate(trace.moves):
        try:
            _apply_in_place(delta, start.base, trace.params, mv)
        except IllegalMove as exc:
            raise ReplayError(i, exc) from None
        yield mv, delta


def replay(trace: MoveTrace) -> BoardState:
    """Final board; raises ReplayError with the index of the first illegal move."""
    start = trace.start()
    delta = dict(start.delta)
    for i, mv in enumerate(trace.moves):
        try:
            _apply_in_place(delta, start.base, trace.params, mv)
        except IllegalMove as exc:
            raise ReplayError(i, exc) from None
    return BoardState(trace.params, delta, start.background)


def max_row_occupied(board: BoardState) -> int:
    """Highest row above 0 holding a checker; 0 when nothing is above row 0."""
    best = 0
    for p, v in board.delta.items():
        if p[-1] > best and board.count(p) > 0:
            best = p[-1]
    return best


def added_at(board: BoardState, p: Sequence[int]) -> int:
    return board.delta.get(_check_dim(board, p), 0)


def check_claim(board: BoardState, claim: Optional[dict]) -> bool:
    if not claim:
        return True
    if "row" in claim:
        n = claim["row"]
        return any(p[-1] == n and board.count(p) > 0 for p in board.delta)
    if "count" in claim:
        return count_at(board, claim["at"]) >= claim["count"]
    raise TraceFormatError(f"unknown claim {claim!r}")


# ---------------------------------------------------------------------------
# JSON-lines trace format


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def trace_lines(trace: MoveTrace) -> Iterator[str]:
    p = trace.params
    header = {"version": 1, "m": p.m, "k": p.k, "d": p.d}
    if trace.initial is None or trace.initial == fresh_board(p):
        header["background"] = HALFSPACE
    else:
        header["background"] = trace.initial.background
        header["initial"] = [[list(c), v] for c, v in sorted(trace.initial.delta.items())]
    yield _dumps(header)
    for mv in trace.moves:
        yield _dumps({"from": list(mv.origin), "axis": mv.axis, "sign": mv.sign})
    if trace.claim:
        yield _dumps({"claim": trace.claim})


def dump_trace(trace: MoveTrace, fh) -> None:
    for line in trace_lines(trace):
        fh.write(line + "\n")


def _int_list(v, d, what) -> Position:
    if not isinstance(v, list) or len(v) != d or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in v
    ):
        raise TraceFormatError(f"{what} must be a list of {d} integers, got {v!r}")
    return tuple(v)


def load_trace(lines: Iterable[str]) -> MoveTrace:
    """Parse the JSON-lines format; raises TraceFormatError on malformed input."""
    it = iter(lines)
    try:
        header = json.loads(next(it))
    except StopIteration:
        raise TraceFormatError("empty trace file") from None
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"header: {exc}") from None
    if not isinstance(header, dict) or header.get("version") != 1:
        raise TraceFormatError("header must be an object with version 1")
    try:
        params = GameParams(header["m"], header["k"], header["d"])
    except (KeyError, ValueError, TypeError) as exc:
        raise TraceFormatError(f"bad header parameters: {exc}") from None
    bg = header.get("background")
    if bg not in (HALFSPACE, EMPTY):
        raise TraceFormatError(f"unknown background {bg!r}")
    initial = None
    if "initial" in header or bg == EMPTY:
        cells = {}
        for entry in header.get("initial", []):
            if not isinstance(entry, list) or len(entry) != 2:
                raise TraceFormatError(f"bad initial entry {entry!r}")
            cells[_int_list(entry[0], params.d, "initial cell")] = entry[1]
        try:
            initial = BoardState(params, cells, bg)
        except ValueError as exc:
            raise TraceFormatError(str(exc)) from None

    moves, claim = [], None
    for lineno, line in enumerate(it, start=2):
        if not line.strip():
            continue
        if claim is not None:
            raise TraceFormatError(f"line {lineno}: content after the claim trailer")
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"line {lineno}: {exc}") from None
        if not isinstance(obj, dict):
            raise TraceFormatError(f"line {lineno}: expected an object")
        if "claim" in obj:
            claim = obj["claim"]
            if not isinstance(claim, dict) or not (
                ("row" in claim and isinstance(claim["row"], int))
                or ("count" in claim and "at" in claim)
            ):
                raise TraceFormatError(f"line {lineno}: malformed claim {claim!r}")
            if "at" in claim:
                _int_list(claim["at"], params.d, "claim position")
            continue
        if set(obj) != {"from", "axis", "sign"}:
            raise TraceFormatError(f"line {lineno}: unexpected keys {sorted(obj)}")
        origin = _int_list(obj["from"], params.d, "from")
        try:
            moves.append(Move(origin, obj["axis"], obj["sign"]))
        except (ValueError, TypeError) as exc:
            raise TraceFormatError(f"line {lineno}: {exc}") from None
    return MoveTrace(params, tuple(moves), claim, initial)
