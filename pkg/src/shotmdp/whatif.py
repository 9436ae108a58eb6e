"""Counterfactual shooting policies and season-level what-if reports.

A policy adjustment scales the shoot probability of a zone set by a
signed relative factor and redistributes the slack across that zone's
move actions in proportion to their original shares, leaving transition
probabilities untouched. Season impact is evaluated through the
fundamental matrix of the adjusted chain, with an optional
quantity-quality correction: extra shots from an increase are valued
below the zone average, and the shots kept after a decrease are valued
above it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .chain import expected_shots, expected_goals, fundamental_matrix, induced_chain
from .events import Possession
from .grid import GOAL, RegionMask, default_masks
from .model import TeamModel, shot_quality_stats
from .scenarios import eval_k_moves_then_shoot


@dataclass(frozen=True)
class PolicyAdjustment:
    """Signed relative change to the shoot probability of a zone set."""

    zones: frozenset[int]
    x: float

    def __post_init__(self) -> None:
        if self.x <= -1.0:
            raise ValueError("relative change must be greater than -1")

    @classmethod
    def of(cls, zones, x: float) -> "PolicyAdjustment":
        members = zones.members if isinstance(zones, RegionMask) else zones
        return cls(frozenset(int(z) for z in members), float(x))


@dataclass(frozen=True)
class SeasonReport:
    team_id: str
    x: float
    zones: tuple[int, ...]
    quality_adjust: bool
    baseline_goals: float
    counterfactual_goals: float
    baseline_shots: np.ndarray
    counterfactual_shots: np.ndarray
    effective_xg: np.ndarray
    skipped_zones: tuple[int, ...] = ()

    @property
    def delta_goals(self) -> float:
        return self.counterfactual_goals - self.baseline_goals


def adjust_policy(model: TeamModel, adjustment: PolicyAdjustment) -> TeamModel:
    """Apply the relative shoot-probability change to the selected zones.

    New shoot probability is ``(1 + x) * pi(shoot)`` clamped into [0, 1];
    each move action in the row is rescaled by ``(1 - pi'(shoot)) /
    (1 - pi(shoot))`` so the row stays a probability vector with move
    shares preserved. Zones where the change cannot apply (shoot
    probability already 0, or 1 with x > 0) are left untouched with a
    warning.
    """
    shoot = model.shoot_policy.copy()
    moves = model.move_policy.copy()
    for zone in sorted(adjustment.zones):
        if not model.spec.is_field_state(zone):
            raise ValueError(f"zone {zone} is not a field state")
        p = shoot[zone]
        if adjustment.x == 0.0:
            continue
        if p == 0.0:
            warnings.warn(f"zone {zone}: shoot probability is 0, adjustment skipped")
            continue
        if p == 1.0:
            # no move actions to absorb the change in either direction
            warnings.warn(f"zone {zone}: shoot probability is 1, adjustment skipped")
            continue
        p_new = min(max((1.0 + adjustment.x) * p, 0.0), 1.0)
        moves[zone, :] *= (1.0 - p_new) / (1.0 - p)
        shoot[zone] = p_new
    return model.with_policy(shoot, moves)


def _skipped_zones(model: TeamModel, adjustment: PolicyAdjustment) -> tuple[int, ...]:
    if adjustment.x == 0.0:
        return ()
    skipped = [
        z for z in sorted(adjustment.zones)
        if model.shoot_policy[z] == 0.0 or model.shoot_policy[z] == 1.0
    ]
    return tuple(skipped)


def adjusted_xg(
    model: TeamModel,
    adjustment: PolicyAdjustment,
    baseline_shots: np.ndarray,
    counterfactual_shots: np.ndarray,
) -> np.ndarray:
    """Effective per-zone goal probabilities under the quantity-quality trade-off.

    Increase: the baseline shot volume keeps the location xG and the
    additional shots are valued at ``xG - (mu - mu_low)``; the zone gets
    the volume-weighted blend. Decrease: every remaining shot is valued
    at ``xG + (mu_high - mu)`` with ``mu_high`` computed by dropping the
    ``|x|`` fraction of lowest-quality samples. Zones outside the
    adjustment keep their location xG, as do zones without enough
    samples (the stats fall back to zero adjustment).
    """
    effective = model.shot_goal.astype(float).copy()
    if adjustment.x == 0.0:
        return effective
    for zone in sorted(adjustment.zones):
        gp = float(model.shot_goal[zone])
        if adjustment.x > 0:
            quality = shot_quality_stats(model, zone)
            penalty = quality.mu - quality.mu_low
            extra = counterfactual_shots[zone] - baseline_shots[zone]
            if penalty <= 0 or extra <= 0 or counterfactual_shots[zone] <= 0:
                continue
            extra_value = min(max(gp - penalty, 0.0), 1.0)
            effective[zone] = (
                baseline_shots[zone] * gp + extra * extra_value
            ) / counterfactual_shots[zone]
        else:
            quality = shot_quality_stats(model, zone, -adjustment.x)
            bonus = quality.mu_high - quality.mu
            if bonus <= 0:
                continue
            effective[zone] = min(max(gp + bonus, 0.0), 1.0)
    return effective


def season_whatif(
    model: TeamModel,
    adjustment: PolicyAdjustment,
    *,
    start_counts: np.ndarray | None = None,
    quality_adjust: bool = True,
) -> SeasonReport:
    """Expected season goals under the adjusted policy vs the observed one."""
    starts = model.start_counts if start_counts is None else np.asarray(start_counts, dtype=float)
    base_chain = induced_chain(model)
    base_shots = expected_shots(base_chain, fundamental_matrix(base_chain), starts)
    baseline_goals = expected_goals(base_shots, base_chain.goal_prob)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        adjusted = adjust_policy(model, adjustment)
    cf_chain = induced_chain(adjusted)
    cf_shots = expected_shots(cf_chain, fundamental_matrix(cf_chain), starts)
    if quality_adjust:
        xg = adjusted_xg(model, adjustment, base_shots, cf_shots)
    else:
        xg = model.shot_goal.copy()
    counterfactual_goals = expected_goals(cf_shots, xg)

    return SeasonReport(
        team_id=model.team_id,
        x=adjustment.x,
        zones=tuple(sorted(adjustment.zones)),
        quality_adjust=quality_adjust,
        baseline_goals=baseline_goals,
        counterfactual_goals=counterfactual_goals,
        baseline_shots=base_shots,
        counterfactual_shots=cf_shots,
        effective_xg=xg,
        skipped_zones=_skipped_zones(model, adjustment),
    )


def sweep_whatif(
    model: TeamModel,
    zones,
    xs,
    *,
    quality_adjust: bool = True,
) -> list[SeasonReport]:
    """One season report per relative change in ``xs`` over a fixed zone set."""
    return [
        season_whatif(model, PolicyAdjustment.of(zones, x), quality_adjust=quality_adjust)
        for x in xs
    ]


def targeted_zone_selection(
    model: TeamModel,
    *,
    k: int = 1,
    region: RegionMask | None = None,
) -> RegionMask:
    """Zones of the long-distance region where direct shooting beats moving.

    Selection compares the direct-shot xG against the k-move scenario
    probability (scenario delta < 0).
    """
    if region is None:
        region = default_masks(model.spec)["long_distance"]
    selected = [
        z for z in region.sorted()
        if eval_k_moves_then_shoot(model, z, k).delta < 0
    ]
    return RegionMask("targeted", frozenset(selected))


@dataclass(frozen=True)
class BaselineValidation:
    team_id: str
    expected_goals: float
    actual_goals: int
    relative_error: float | None  # None when the team scored no goals

    @property
    def defined(self) -> bool:
        return self.relative_error is not None


def validate_baseline(model: TeamModel, possessions: list[Possession]) -> BaselineValidation:
    """Relative error of the season goal estimate vs the observed total."""
    chain = induced_chain(model)
    shots = expected_shots(chain, fundamental_matrix(chain), model.start_counts)
    estimate = expected_goals(shots, chain.goal_prob)
    actual = sum(1 for p in possessions if p.terminal == GOAL)
    if actual == 0:
        warnings.warn(f"team {model.team_id}: no goals scored, relative error undefined")
        return BaselineValidation(model.team_id, estimate, 0, None)
    return BaselineValidation(model.team_id, estimate, actual, abs(estimate - actual) / actual)


def league_relative_error(validations: list[BaselineValidation]) -> float:
    """Average per-team relative error, skipping undefined teams."""
    defined = [v.relative_error for v in validations if v.relative_error is not None]
    if not defined:
        return float("nan")
    return float(np.mean(defined))
