"""Generalized Conway (m,k)-checkers on Z^d: exact bounds, constructions,
pagoda certificates and a brute-force oracle."""

from .algebraic import FieldElement, floor_log_phi, knacci_constant, phi
from .board import BoardState, GameParams, Move, MoveTrace, apply_move, fresh_board, replay
from .bounds import achieved_row, bounds_report, max_row_1d, row1_cap, upper_bound_row
from .pagoda import WeightSpec, background_energy, board_energy, verify_pagoda
from .strategies import column_fill_plan, projection_plan, row1_amass_plan, verify_plan

__version__ = "0.1.0"

__all__ = [
    "FieldElement",
    "floor_log_phi",
    "knacci_constant",
    "phi",
    "BoardState",
    "GameParams",
    "Move",
    "MoveTrace",
    "apply_move",
    "fresh_board",
    "replay",
    "achieved_row",
    "bounds_report",
    "max_row_1d",
    "row1_cap",
    "upper_bound_row",
    "WeightSpec",
    "background_energy",
    "board_energy",
    "verify_pagoda",
    "column_fill_plan",
    "projection_plan",
    "row1_amass_plan",
    "verify_plan",
]
