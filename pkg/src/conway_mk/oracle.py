"""Exhaustive search over a truncated board.

Cells outside the window are frozen; inside it the search enumerates every
reachable state.  It shares nothing with the bound formulas or the
constructions, so agreement between them is meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from .board import GameParams, Move, MoveTrace, Position

__all__ = ["SearchConfig", "SearchResult", "bfs_optimum", "dominance_prune", "default_depth"]

MAX_ROW = "max_row"
MAX_COUNT_AT = "max_count_at"


@dataclass(frozen=True)
class SearchConfig:
    params: GameParams
    depth: int = 8
    top: Optional[int] = None  # highest row in the window; defaults to depth
    radius: int = 0  # off-axis half-width
    max_states: int = 10**7
    objective: str = MAX_ROW
    at: Optional[Position] = None
    prune: bool = True

    def __post_init__(self):
        if self.depth < 0 or self.radius < 0:
            raise ValueError("depth and radius must be non-negative")
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")
        if self.objective not in (MAX_ROW, MAX_COUNT_AT):
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.objective == MAX_COUNT_AT and (self.at is None or len(self.at) != self.params.d):
            raise ValueError("max_count_at needs a position of matching dimension")

    def window(self) -> list[tuple[int, int]]:
        top = self.depth if self.top is None else self.top
        return [(-self.radius, self.radius)] * (self.params.d - 1) + [(-self.depth, top)]


@dataclass
class SearchResult:
    value: int
    witness: MoveTrace
    exhausted: bool
    states: int
    pruned: int = 0

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "exhausted": self.exhausted,
            "states": self.states,
            "pruned": self.pruned,
            "witness_moves": len(self.witness),
        }


def dominance_prune(states: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Drop every state that is pointwise <= another one.

    Sound for monotone objectives: a move legal with fewer checkers stays
    legal with more, so the dominating state reaches at least as much.
    """
    uniq = sorted(set(states), key=sum, reverse=True)
    kept: list[tuple[int, ...]] = []
    for s in uniq:
        if not any(all(a <= b for a, b in zip(s, t)) for t in kept):
            kept.append(s)
    return kept


def default_depth(params: GameParams, objective: str = MAX_ROW) -> int:
    """Deepest row the matching construction touches, plus k."""
    from .bounds import max_row_1d
    from .strategies import column_fill_plan, row1_amass_plan

    if params.d != 1:
        raise ValueError("default depth is defined for one-dimensional windows")
    m, k = params.m, params.k
    if objective == MAX_COUNT_AT or m == 1:
        plan = row1_amass_plan(m, k)
    else:
        plan = column_fill_plan(m, k, max_row_1d(m, k))
    return -plan.touched_rows()[0] + k


def bfs_optimum(config: SearchConfig) -> SearchResult:
    """Best objective value over all states reachable inside the window.

    Besides exact deduplication, a new state is skipped when adding k-1
    checkers to it gives a state already generated; by monotonicity that
    state reaches everything this one can.
    """
    params = config.params
    k = params.k
    window = config.window()
    cells = list(itertools.product(*[range(lo, hi + 1) for lo, hi in window]))
    index = {c: i for i, c in enumerate(cells)}

    # every in-window jump as (cell indices origin..landing, Move)
    jumps = []
    for c in cells:
        for axis in range(params.d):
            for sign in (1, -1):
                mv = Move(c, axis, sign)
                path = mv.cells(k)
                if all(p in index for p in path):
                    jumps.append((tuple(index[p] for p in path), mv))

    start = tuple(params.m if c[-1] <= 0 else 0 for c in cells)

    if config.objective == MAX_ROW:
        row_of = [c[-1] for c in cells]
        positive = [i for i, c in enumerate(cells) if c[-1] > 0]

        def score(s):
            return max((row_of[i] for i in positive if s[i] > 0), default=0)
    else:
        target = index.get(tuple(config.at))
        if target is None:
            raise ValueError("objective cell lies outside the window")

        def score(s):
            return s[target]

    n_cells = len(cells)
    lifts = list(itertools.combinations_with_replacement(range(n_cells), k - 1))

    def dominated(t: tuple[int, ...]) -> bool:
        # some already generated state holds these checkers plus k-1 more
        for extra in lifts:
            u = list(t)
            for i in extra:
                u[i] += 1
            if tuple(u) in parent:
                return True
        return False

    parent: dict[tuple[int, ...], Optional[tuple[tuple[int, ...], int]]] = {start: None}
    best, best_state = score(start), start
    frontier = [start]
    exhausted = True
    pruned = 0
    while frontier:
        nxt = []
        for s in frontier:
            for ji, (path, _) in enumerate(jumps):
                if any(s[i] == 0 for i in path[:-1]):
                    continue
                t = list(s)
                for i in path[:-1]:
                    t[i] -= 1
                t[path[-1]] += 1
                t = tuple(t)
                if t in parent:
                    continue
                parent[t] = (s, ji)
                v = score(t)
                if v > best:
                    best, best_state = v, t
                if config.prune and dominated(t):
                    pruned += 1
                    continue
                nxt.append(t)
            if len(parent) > config.max_states:
                exhausted = False
                break
        if not exhausted:
            break
        frontier = nxt

    moves = []
    s = best_state
    while parent[s] is not None:
        s, ji = parent[s]
        moves.append(jumps[ji][1])
    moves.reverse()
    claim = {"row": best} if config.objective == MAX_ROW else {"count": best, "at": list(config.at)}
    if config.objective == MAX_ROW and best == 0:
        claim = None
    witness = MoveTrace(params, tuple(moves), claim)
    return SearchResult(best, witness, exhausted, len(parent), pruned)
