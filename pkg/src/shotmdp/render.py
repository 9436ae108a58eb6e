"""Artifact rendering: CSV/JSON grid exports and self-contained SVG heatmaps.

All numeric output is formatted to nine significant digits so re-runs
are byte-identical and diffs stay readable.
"""

from __future__ import annotations

import json

import numpy as np

from .grid import GridSpec, cell_bounds
from .scenarios import ScenarioResult
from .whatif import SeasonReport


def round9(x: float) -> float:
    """Snap to 9 significant digits (the artifact float format)."""
    return float(f"{float(x):.9g}")


def fmt9(x: float) -> str:
    return f"{float(x):.9g}"


def zone_values_csv(values, zones=None) -> str:
    """Two-column ``zone_index,value`` table for a value vector."""
    arr = np.asarray(values, dtype=float)
    zones = range(arr.size) if zones is None else zones
    lines = ["zone_index,value"]
    lines += [f"{z},{fmt9(arr[z])}" for z in zones]
    return "\n".join(lines) + "\n"


def heatmap_csv(results: list[ScenarioResult]) -> str:
    lines = ["zone_index,probability,direct_xg,delta,flags"]
    for r in results:
        lines.append(f"{r.zone},{fmt9(r.probability)},{fmt9(r.direct_xg)},{fmt9(r.delta)},{'|'.join(r.flags)}")
    return "\n".join(lines) + "\n"


def grid_meta(spec: GridSpec) -> dict:
    return {
        "pitch_length": spec.pitch_length,
        "pitch_width": spec.pitch_width,
        "columns": spec.columns,
        "rows": spec.rows,
    }


def heatmap_payload(
    spec: GridSpec,
    results: list[ScenarioResult],
    *,
    team_id: str,
    analysis: str,
    k: int | None = None,
) -> dict:
    """Grid-shaped JSON for the heatmap renderer and the HTTP API."""
    return {
        "team_id": team_id,
        "analysis": analysis,
        "k": k,
        "grid": grid_meta(spec),
        "cells": [
            {
                "zone": r.zone,
                "probability": round9(r.probability),
                "direct_xg": round9(r.direct_xg),
                "delta": round9(r.delta),
                "flags": list(r.flags),
            }
            for r in results
        ],
    }


def value_grid_payload(spec: GridSpec, values) -> dict:
    """Value vector as a grid payload (defensive zone carried separately)."""
    arr = np.asarray(values, dtype=float)
    cells = arr[1:].reshape(spec.rows, spec.columns)
    return {
        "grid": grid_meta(spec),
        "zone0": round9(arr[0]),
        "cells": [[round9(v) for v in row] for row in cells],
    }


def season_report_payload(report: SeasonReport) -> dict:
    """SeasonReport as the JSON shape shared by CLI artifacts and the API."""
    shot_delta = report.counterfactual_shots - report.baseline_shots
    interesting = sorted(
        set(report.zones)
        | set(int(z) for z in np.flatnonzero(np.abs(shot_delta) > 1e-12))
    )
    return {
        "team_id": report.team_id,
        "x": round9(report.x),
        "zones": list(report.zones),
        "quality_adjust": report.quality_adjust,
        "baseline_goals": round9(report.baseline_goals),
        "counterfactual_goals": round9(report.counterfactual_goals),
        "delta_goals": round9(report.delta_goals),
        "skipped_zones": list(report.skipped_zones),
        "per_zone": [
            {
                "zone": z,
                "baseline_shots": round9(report.baseline_shots[z]),
                "counterfactual_shots": round9(report.counterfactual_shots[z]),
                "shot_delta": round9(shot_delta[z]),
                "effective_xg": round9(report.effective_xg[z]),
            }
            for z in interesting
        ],
    }


def sweep_csv(reports: list[SeasonReport]) -> str:
    """Season-goal deltas as a team-by-x table (one row per team)."""
    xs: list[float] = []
    for r in reports:
        if r.x not in xs:
            xs.append(r.x)
    by_team: dict[str, dict[float, float]] = {}
    for r in reports:
        by_team.setdefault(r.team_id, {})[r.x] = r.delta_goals
    lines = ["team_id," + ",".join(f"x={fmt9(x)}" for x in xs)]
    for team in sorted(by_team):
        cells = (fmt9(by_team[team][x]) if x in by_team[team] else "" for x in xs)
        lines.append(f"{team}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# SVG pitch heatmaps. Minimal emitter: rects plus a two- or three-stop
# linear color ramp; no plotting dependency.

_DIVERGING_NEG = (178, 24, 43)    # red: shooting better (negative delta)
_DIVERGING_POS = (33, 102, 172)   # blue: moving better
_SEQ_HIGH = (8, 81, 156)
_WHITE = (255, 255, 255)


def _mix(lo: tuple, hi: tuple, t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    r, g, b = (round(a + (b_ - a) * t) for a, b_ in zip(lo, hi))
    return f"rgb({r},{g},{b})"


def _color(value: float, mode: str, scale: float) -> str:
    if scale <= 0:
        return _mix(_WHITE, _WHITE, 0.0)
    if mode == "diverging":
        if value < 0:
            return _mix(_WHITE, _DIVERGING_NEG, -value / scale)
        return _mix(_WHITE, _DIVERGING_POS, value / scale)
    return _mix(_WHITE, _SEQ_HIGH, value / scale)


def heatmap_svg(
    spec: GridSpec,
    values: dict[int, float],
    *,
    mode: str = "diverging",
    title: str = "",
    px_per_m: float = 7.0,
) -> str:
    """Offensive-half heatmap; diverging scales center at zero."""
    if mode not in ("diverging", "sequential"):
        raise ValueError(f"unknown color mode {mode!r}")
    finite = [abs(v) for v in values.values()] or [0.0]
    scale = max(finite)
    width = spec.pitch_length / 2 * px_per_m
    height = spec.pitch_width * px_per_m
    header_h = 24 if title else 0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height + header_h:.0f}" '
        f'viewBox="0 0 {width:.2f} {height + header_h:.2f}">',
    ]
    if title:
        parts.append(f'<text x="4" y="16" font-family="sans-serif" font-size="13">{title}</text>')
    parts.append(f'<g transform="translate(0 {header_h})">')
    parts.append(f'<rect x="0" y="0" width="{width:.2f}" height="{height:.2f}" fill="#f4f7f4" stroke="#333"/>')
    half = spec.pitch_length / 2
    for zone, value in sorted(values.items()):
        if zone == 0:
            continue
        x0, y0, x1, y1 = cell_bounds(zone, spec)
        parts.append(
            f'<rect x="{(x0 - half) * px_per_m:.2f}" y="{(spec.pitch_width - y1) * px_per_m:.2f}" '
            f'width="{(x1 - x0) * px_per_m:.2f}" height="{(y1 - y0) * px_per_m:.2f}" '
            f'fill="{_color(value, mode, scale)}" stroke="#999" stroke-width="0.4">'
            f'<title>zone {zone}: {fmt9(value)}</title></rect>'
        )
    parts.append("</g></svg>")
    return "\n".join(parts) + "\n"
