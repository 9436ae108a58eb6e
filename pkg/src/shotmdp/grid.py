"""Pitch geometry: the zone partition, zone indexing, and named region masks.

The state space has one zone (index 0) covering the whole defensive half
plus a ``columns x rows`` grid tiling the offensive half. Attacking
direction is +x with the goal line at ``x = pitch_length``. Offensive
cells are indexed ``1 + row * columns + column`` with column 0 at the
halfway line and row 0 at ``y = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

# Terminal (absorbing) state labels. These never appear as zone indices;
# field states are plain non-negative ints.
GOAL = "goal"
NO_GOAL = "no_goal"
LOSS = "loss"
TERMINALS = (GOAL, NO_GOAL, LOSS)

# Statutory penalty box, metres.
PENALTY_BOX_DEPTH = 16.5
PENALTY_BOX_WIDTH = 40.32

DEFAULT_LONG_DISTANCE_MAX_M = 30.0
DEFAULT_FLANK_BAND_M = (68.0 - PENALTY_BOX_WIDTH) / 2  # 13.84


class CoordinateError(ValueError):
    """Point outside the pitch rectangle."""


@dataclass(frozen=True)
class GridSpec:
    pitch_length: float = 105.0
    pitch_width: float = 68.0
    columns: int = 22
    rows: int = 17

    def __post_init__(self) -> None:
        if self.columns < 1 or self.rows < 1:
            raise ValueError("grid needs at least 1 column and 1 row")
        if self.pitch_length <= 0 or self.pitch_width <= 0:
            raise ValueError("pitch dimensions must be strictly positive")

    @property
    def n_states(self) -> int:
        """Field-state count, defensive zone included (375 for defaults)."""
        return self.columns * self.rows + 1

    @property
    def cell_length(self) -> float:
        return self.pitch_length / 2 / self.columns

    @property
    def cell_width(self) -> float:
        return self.pitch_width / self.rows

    def is_field_state(self, zone: int) -> bool:
        return 0 <= zone < self.n_states


@dataclass(frozen=True)
class RegionMask:
    """Named, immutable set of offensive zone indices."""

    name: str
    members: frozenset[int]

    def __contains__(self, zone: int) -> bool:
        return zone in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[int]:
        return sorted(self.members)


def zone_of(point: tuple[float, float], spec: GridSpec) -> int:
    """Map a pitch coordinate in metres to its zone index.

    Points in the defensive half (x < pitch_length / 2) map to zone 0.
    Cells are half-open; points exactly on the far pitch boundaries are
    clamped into the last cell so the mapping is total on the rectangle.
    """
    x, y = point
    if not (0.0 <= x <= spec.pitch_length and 0.0 <= y <= spec.pitch_width):
        raise CoordinateError(f"point ({x}, {y}) outside {spec.pitch_length} x {spec.pitch_width} pitch")
    half = spec.pitch_length / 2
    if x < half:
        return 0
    column = min(int((x - half) / spec.cell_length), spec.columns - 1)
    row = min(int(y / spec.cell_width), spec.rows - 1)
    return 1 + row * spec.columns + column


def cell_bounds(zone: int, spec: GridSpec) -> tuple[float, float, float, float]:
    """Rectangle (x0, y0, x1, y1) of an offensive cell, half-open convention.

    Zone 0 (the defensive half) has no cell rectangle and is rejected.
    """
    if zone < 1 or zone >= spec.n_states:
        raise ValueError(f"zone {zone} has no cell rectangle")
    column = (zone - 1) % spec.columns
    row = (zone - 1) // spec.columns
    x0 = spec.pitch_length / 2 + column * spec.cell_length
    y0 = row * spec.cell_width
    return (x0, y0, x0 + spec.cell_length, y0 + spec.cell_width)


def zone_center(zone: int, spec: GridSpec) -> tuple[float, float]:
    """Representative coordinate of a zone; cell midpoint for offensive
    cells, the defensive-half midpoint for zone 0."""
    if zone == 0:
        return (spec.pitch_length / 4, spec.pitch_width / 2)
    x0, y0, x1, y1 = cell_bounds(zone, spec)
    return ((x0 + x1) / 2, (y0 + y1) / 2)


def _penalty_box(spec: GridSpec) -> tuple[float, float, float, float]:
    y_lo = (spec.pitch_width - PENALTY_BOX_WIDTH) / 2
    return (spec.pitch_length - PENALTY_BOX_DEPTH, y_lo, spec.pitch_length, y_lo + PENALTY_BOX_WIDTH)


def default_masks(
    spec: GridSpec,
    *,
    long_distance_max_m: float = DEFAULT_LONG_DISTANCE_MAX_M,
    flank_band_m: float = DEFAULT_FLANK_BAND_M,
) -> dict[str, RegionMask]:
    """Build the three named region masks for a grid.

    penalty_box: cells lying fully inside the statutory 16.5 x 40.32 m box.
    long_distance: cells whose center is within ``long_distance_max_m`` of
    the goal line and inside the box's width band but outside the box.
    flank: cells whose center is in the attacking third and within
    ``flank_band_m`` of either touchline. Masks can be empty on coarse
    grids.
    """
    bx0, by0, bx1, by1 = _penalty_box(spec)
    box_cells = []
    long_cells = []
    flank_cells = []
    attacking_third_x = spec.pitch_length * 2 / 3
    for zone in range(1, spec.n_states):
        x0, y0, x1, y1 = cell_bounds(zone, spec)
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        if x0 >= bx0 and x1 <= bx1 and y0 >= by0 and y1 <= by1:
            box_cells.append(zone)
        inside_box = bx0 < cx and by0 < cy < by1
        if (
            cx >= spec.pitch_length - long_distance_max_m
            and by0 < cy < by1
            and not inside_box
        ):
            long_cells.append(zone)
        if cx >= attacking_third_x and (cy < flank_band_m or cy > spec.pitch_width - flank_band_m):
            flank_cells.append(zone)
    return {
        "penalty_box": RegionMask("penalty_box", frozenset(box_cells)),
        "long_distance": RegionMask("long_distance", frozenset(long_cells)),
        "flank": RegionMask("flank", frozenset(flank_cells)),
    }


def all_offensive_mask(spec: GridSpec) -> RegionMask:
    """Every offensive cell (zones 1..columns*rows)."""
    return RegionMask("all_offensive", frozenset(range(1, spec.n_states)))
