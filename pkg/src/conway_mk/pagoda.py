"""Pagoda weights alpha^dist(x, T) with alpha = 1/phi_k, and exact energies.

With alpha a root of 1 - alpha - ... - alpha^k, a jump straight toward the
target that stays on one side of it leaves the energy unchanged and every
other jump lowers it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .algebraic import FieldElement, alpha, one, phi_power
from .board import EMPTY, BoardState, GameParams, IllegalMove, Move, Position

__all__ = [
    "WeightSpec",
    "Verdict",
    "VerdictKind",
    "distance",
    "weight",
    "background_energy",
    "board_energy",
    "move_delta_energy",
    "MoveTemplate",
    "move_templates",
    "verify_pagoda",
    "unreachability_check",
    "row_unreachable",
]


@dataclass(frozen=True)
class WeightSpec:
    target: Position
    k: int

    @property
    def alpha(self) -> FieldElement:
        return alpha(self.k)

    @classmethod
    def at_row(cls, params: GameParams, n: int) -> "WeightSpec":
        """Target on the column through the origin, at height n."""
        return cls((0,) * (params.d - 1) + (n,), params.k)


def distance(p: Sequence[int], q: Sequence[int]) -> int:
    if len(p) != len(q):
        raise ValueError("dimension mismatch")
    return sum(abs(a - b) for a, b in zip(p, q))


def weight(p: Sequence[int], spec: WeightSpec) -> FieldElement:
    return phi_power(spec.k, -distance(p, spec.target))


def background_energy(params: GameParams, target_row: int, spec: WeightSpec | None = None) -> FieldElement:
    """Energy of the fresh half-space board for a target at height ``target_row``.

    Off-axis translation does not change the sum, so only the row matters.
    """
    k = params.k
    a = alpha(k)
    row_sum = 1 / (1 - a)  # sum_{j>=0} alpha^j
    if target_row >= 0:
        column = phi_power(k, -target_row) * row_sum
    else:
        # rows between the target and row 0 plus everything at or below it
        column = row_sum + a * (1 - phi_power(k, target_row)) * row_sum
    line = (1 + a) * row_sum  # sum over Z of alpha^|x|
    return params.m * column * line ** (params.d - 1)


def board_energy(board: BoardState, spec: WeightSpec) -> FieldElement:
    if board.background == EMPTY:
        total = FieldElement(spec.k, [0])
    else:
        total = background_energy(board.params, spec.target[-1], spec)
    for p, v in board.delta.items():
        total = total + v * weight(p, spec)
    return total


def move_delta_energy(board: BoardState, mv: Move, spec: WeightSpec) -> FieldElement:
    """Energy change of a legal move, from the k+1 cells it touches."""
    cells = mv.cells(board.params.k)
    for c in cells[:-1]:
        if board.count(c) < 1:
            raise IllegalMove(mv, c)
    return _cells_delta(cells, spec)


def _cells_delta(cells: list[Position], spec: WeightSpec) -> FieldElement:
    out = weight(cells[-1], spec)
    for c in cells[:-1]:
        out = out - weight(c, spec)
    return out


@dataclass(frozen=True)
class MoveTemplate:
    k: int
    axis: int
    sign: int
    offset: int  # origin coordinate along the move relative to T, in the move's direction
    off_axis: int  # taxicab distance to T over the other coordinates
    delta: FieldElement

    @property
    def direct_toward(self) -> bool:
        """Straight toward T, landing on T or short of it."""
        return self.offset <= -self.k


def move_templates(k: int, d: int) -> list[MoveTemplate]:
    """One representative move per geometric class, per axis and direction.

    Along the move axis the k+1 cell distances are |u + j| for the origin
    offset u; for u >= 0 and for u <= -k they are affine in u, so each of
    those two classes scales by alpha per unit shift and u = 0, 1 and
    u = -k, -k-1 represent them.  The k-1 crossing offsets are finitely
    many.  Off-axis distance only multiplies by alpha^D.
    """
    target = (0,) * d
    spec = WeightSpec(target, k)
    out = []
    for axis in range(d):
        for sign in (1, -1):
            for off in ((0, 1) if d > 1 else (0,)):
                for u in range(-k - 1, 2):
                    origin = [0] * d
                    origin[axis] = sign * u
                    if off:
                        origin[(axis + 1) % d] = off
                    mv = Move(tuple(origin), axis, sign)
                    delta = _cells_delta(mv.cells(k), spec)
                    out.append(MoveTemplate(k, axis, sign, u, off, delta))
    return out


def verify_pagoda(k: int, d: int) -> bool:
    """Certify that no move raises the energy, with equality exactly on
    straight toward-target jumps that do not pass the target."""
    templates = move_templates(k, d)
    a = alpha(k)
    by_key = {(t.axis, t.sign, t.offset, t.off_axis): t.delta for t in templates}
    for t in templates:
        s = t.delta.sign()
        if s > 0:
            return False
        if (s == 0) != t.direct_toward:
            return False
    for (axis, sign, u, off), delta in by_key.items():
        # the scaling identities that extend the representatives to all offsets
        if u == 1 and by_key[(axis, sign, 0, off)] * a != delta:
            return False
        if u == -k - 1 and by_key[(axis, sign, -k, off)] * a != delta:
            return False
        if off == 1 and by_key[(axis, sign, u, 0)] * a != delta:
            return False
    return True


class VerdictKind(enum.Enum):
    UNREACHABLE_ENERGY = "unreachable_energy"
    UNREACHABLE_INFINITE = "unreachable_infinite"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    initial_energy: FieldElement
    target_energy: FieldElement
    reason: str

    @property
    def unreachable(self) -> bool:
        return self.kind is not VerdictKind.INCONCLUSIVE


def unreachability_check(initial: BoardState, target: BoardState, spec: WeightSpec) -> Verdict:
    if initial.params != target.params:
        raise ValueError("boards have different game parameters")
    e0 = board_energy(initial, spec)
    e1 = board_energy(target, spec)
    diff = (e1 - e0).sign()
    if diff > 0:
        return Verdict(VerdictKind.UNREACHABLE_ENERGY, e0, e1, "target energy exceeds the initial energy")
    if initial.background != target.background:
        reason = "infinitely many background checkers would have to move"
        if diff == 0:
            reason = (
                "target energy equals the initial energy, so every other checker "
                "must be gone; " + reason
            )
        return Verdict(VerdictKind.UNREACHABLE_INFINITE, e0, e1, reason)
    return Verdict(VerdictKind.INCONCLUSIVE, e0, e1, "energy and background do not rule it out")


def row_unreachable(params: GameParams, n: int) -> Verdict:
    """Whether any finite play can put a checker on row n.

    A state with a checker at T has energy >= 1, with equality only for the
    lone checker at T, which leaves the background behind.
    """
    spec = WeightSpec.at_row(params, n)
    e0 = background_energy(params, n, spec)
    lone = BoardState(params, {spec.target: 1}, EMPTY)
    s = (e0 - 1).sign()
    if s < 0:
        return Verdict(VerdictKind.UNREACHABLE_ENERGY, e0, one(params.k), "initial energy is below 1")
    if s == 0:
        return unreachability_check(BoardState(params), lone, spec)
    return Verdict(VerdictKind.INCONCLUSIVE, e0, one(params.k), "initial energy exceeds 1")
