"""Per-team MDP estimation: policy, transitions, and shot-quality samples.

Probabilities follow the count ratios: the policy is how often an action
is selected among all actions starting in a zone, move success is the
fraction of attempts (intent-attributed for failures) that reached their
target, and shot success is the per-zone goal rate. Additive smoothing
pulls sparse cells toward the league pool without inventing actions the
pool never produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .events import SHOT, Possession
from .grid import GridSpec, zone_of
from .intent import BLENDED, build_destination_histogram, resolve_intent


@dataclass(frozen=True, eq=False)
class TeamModel:
    """Immutable fitted model for one team.

    Arrays are indexed by zone; ``move_policy[s, j]`` is the probability
    of choosing to move from s to j, ``move_success[s, j]`` the chance
    such an attempt succeeds, ``shot_goal[s]`` the location xG. Inert
    zones (no observed actions) have all-zero policy rows and act as
    immediate losses.
    """

    team_id: str
    spec: GridSpec
    shoot_policy: np.ndarray        # (n,)
    move_policy: np.ndarray         # (n, n)
    move_success: np.ndarray        # (n, n)
    shot_goal: np.ndarray           # (n,)
    shot_samples: dict[int, tuple[float, ...]]
    start_counts: np.ndarray        # (n,)
    action_counts: np.ndarray       # (n,) total actions observed per zone
    inert: np.ndarray               # (n,) bool

    def __post_init__(self) -> None:
        for name in ("shoot_policy", "move_policy", "move_success",
                     "shot_goal", "start_counts", "action_counts", "inert"):
            getattr(self, name).setflags(write=False)

    @property
    def n_states(self) -> int:
        return self.spec.n_states

    def with_policy(self, shoot_policy: np.ndarray, move_policy: np.ndarray) -> "TeamModel":
        """Copy of the model with a replaced policy (transitions untouched)."""
        return TeamModel(
            team_id=self.team_id, spec=self.spec,
            shoot_policy=shoot_policy, move_policy=move_policy,
            move_success=self.move_success, shot_goal=self.shot_goal,
            shot_samples=self.shot_samples, start_counts=self.start_counts,
            action_counts=self.action_counts, inert=self.inert,
        )


@dataclass
class RawCounts:
    """Accumulated (possibly fractional) action counts for a set of possessions."""

    spec: GridSpec
    move_attempts: np.ndarray       # (n, n) intent-attributed c_{s,s'}
    move_successes: np.ndarray      # (n, n)
    shots: np.ndarray               # (n,)
    goals: np.ndarray               # (n,)
    actions: np.ndarray             # (n,) integer action totals c_s
    starts: np.ndarray              # (n,) possession start counts
    shot_xg: dict[int, list[float | None]] = field(default_factory=dict)
    intent_fallbacks: int = 0

    @classmethod
    def empty(cls, spec: GridSpec) -> "RawCounts":
        n = spec.n_states
        return cls(
            spec=spec,
            move_attempts=np.zeros((n, n)),
            move_successes=np.zeros((n, n)),
            shots=np.zeros(n),
            goals=np.zeros(n),
            actions=np.zeros(n),
            starts=np.zeros(n),
        )


def collect_counts(
    possessions: list[Possession],
    spec: GridSpec,
    *,
    intent_mode: str = BLENDED,
    intent_lambda: float = 0.5,
) -> RawCounts:
    """Tabulate action counts for one team's possessions.

    The destination prior for failed moves is built from these
    possessions' own successful moves.
    """
    counts = RawCounts.empty(spec)
    all_events = [e for p in possessions for e in p.events]
    histogram = build_destination_histogram(all_events, spec)
    for possession in possessions:
        counts.starts[zone_of(possession.events[0].start, spec)] += 1
        for event in possession.events:
            s = zone_of(event.start, spec)
            counts.actions[s] += 1
            if event.kind == SHOT:
                counts.shots[s] += 1
                counts.goals[s] += event.success
                counts.shot_xg.setdefault(s, []).append(event.shot_xg)
            elif event.success:
                j = zone_of(event.end, spec)
                counts.move_attempts[s, j] += 1
                counts.move_successes[s, j] += 1
            else:
                attribution = resolve_intent(event, histogram, spec, intent_mode, intent_lambda)
                counts.intent_fallbacks += attribution.fallback
                for j, w in attribution.weights.items():
                    counts.move_attempts[s, j] += w
    return counts


def combine_counts(counts: list[RawCounts]) -> RawCounts:
    """Pool several teams' counts (the league pool used for smoothing)."""
    if not counts:
        raise ValueError("nothing to combine")
    pooled = RawCounts.empty(counts[0].spec)
    for c in counts:
        if c.spec != pooled.spec:
            raise ValueError("cannot pool counts over different grids")
        pooled.move_attempts += c.move_attempts
        pooled.move_successes += c.move_successes
        pooled.shots += c.shots
        pooled.goals += c.goals
        pooled.actions += c.actions
        pooled.starts += c.starts
        pooled.intent_fallbacks += c.intent_fallbacks
        for zone, samples in c.shot_xg.items():
            pooled.shot_xg.setdefault(zone, []).extend(samples)
    return pooled


def fit_from_counts(
    team_id: str,
    counts: RawCounts,
    *,
    alpha: float = 0.5,
    league: RawCounts | None = None,
) -> TeamModel:
    """Turn tabulated counts into a TeamModel.

    ``league`` is the pooled counts used for smoothing; it must contain
    this team's own counts (pass None to pool the team with itself).
    Smoothing adds ``alpha`` to the selection count of every action the
    pool has seen from a zone, and shrinks success rates toward the
    pooled rate for the same (start, target) pair.
    """
    spec = counts.spec
    n = spec.n_states
    if league is None:
        league = counts
    if counts.actions.sum() == 0:
        raise ValueError(f"team {team_id!r} has no events to fit")

    move_support = (league.move_attempts > 0) | (counts.move_attempts > 0)
    shot_support = (league.shots > 0) | (counts.shots > 0)

    sel_move = counts.move_attempts + alpha * move_support
    sel_shoot = counts.shots + alpha * shot_support
    denom = sel_move.sum(axis=1) + sel_shoot
    inert = counts.actions == 0
    safe = np.where(denom > 0, denom, 1.0)
    move_policy = sel_move / safe[:, None]
    shoot_policy = sel_shoot / safe
    move_policy[inert] = 0.0
    shoot_policy[inert] = 0.0

    league_move_rate = np.divide(
        league.move_successes, league.move_attempts,
        out=np.zeros_like(league.move_attempts), where=league.move_attempts > 0,
    )
    league_goal_rate = np.divide(
        league.goals, league.shots,
        out=np.zeros_like(league.shots), where=league.shots > 0,
    )

    move_success = np.divide(
        counts.move_successes + alpha * move_support * league_move_rate, sel_move,
        out=np.zeros_like(sel_move), where=move_support & (sel_move > 0),
    )
    shot_goal = np.divide(
        counts.goals + alpha * shot_support * league_goal_rate, sel_shoot,
        out=np.zeros_like(sel_shoot), where=shot_support & (sel_shoot > 0),
    )

    shot_samples: dict[int, tuple[float, ...]] = {}
    for zone, raw in counts.shot_xg.items():
        shot_samples[zone] = tuple(
            float(shot_goal[zone]) if v is None else float(v) for v in raw
        )

    return TeamModel(
        team_id=team_id,
        spec=spec,
        shoot_policy=shoot_policy,
        move_policy=move_policy,
        move_success=move_success,
        shot_goal=shot_goal,
        shot_samples=shot_samples,
        start_counts=counts.starts.copy(),
        action_counts=counts.actions.copy(),
        inert=inert.copy(),
    )


def fit_team_model(
    possessions: list[Possession],
    spec: GridSpec,
    *,
    intent_mode: str = BLENDED,
    intent_lambda: float = 0.5,
    alpha: float = 0.5,
    league: RawCounts | None = None,
) -> TeamModel:
    """Fit one team's model from its possessions."""
    if not possessions:
        raise ValueError("at least one possession required")
    team_id = possessions[0].team_id
    counts = collect_counts(possessions, spec, intent_mode=intent_mode, intent_lambda=intent_lambda)
    return fit_from_counts(team_id, counts, alpha=alpha, league=league)


@dataclass
class ValidationReport:
    team_id: str
    violations: list[str]
    n_states: int
    inert_fraction: float
    support: np.ndarray  # per-zone action counts

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_model(model: TeamModel, *, tol: float = 1e-9) -> ValidationReport:
    """Check simplex and range invariants; violations are reported, not raised."""
    violations: list[str] = []
    active = ~model.inert
    row_sum = model.shoot_policy + model.move_policy.sum(axis=1)
    bad = np.flatnonzero(active & (np.abs(row_sum - 1.0) > tol))
    for zone in bad:
        violations.append(f"zone {zone}: policy row sums to {row_sum[zone]:.12f}")
    if np.any(model.shoot_policy < -tol) or np.any(model.move_policy < -tol):
        violations.append("negative policy mass")
    if np.any((model.move_success < -tol) | (model.move_success > 1 + tol)):
        violations.append("move success probability outside [0, 1]")
    if np.any((model.shot_goal < -tol) | (model.shot_goal > 1 + tol)):
        violations.append("shot goal probability outside [0, 1]")
    if np.any(model.move_policy[model.inert].sum(axis=1) > 0) or np.any(model.shoot_policy[model.inert] > 0):
        violations.append("inert zone carries policy mass")
    return ValidationReport(
        team_id=model.team_id,
        violations=violations,
        n_states=model.n_states,
        inert_fraction=float(model.inert.mean()),
        support=model.action_counts.copy(),
    )


class ShotQuality(NamedTuple):
    mu: float
    mu_low: float
    mu_high: float
    fallback: bool = False


def shot_quality_stats(model: TeamModel, zone: int, x: float = 0.0) -> ShotQuality:
    """Per-zone shot-quality summary from the provider xG samples.

    ``mu`` is the sample mean, ``mu_low`` the mean of the strictly
    below-average samples, and ``mu_high`` the mean after dropping the
    ``floor(x * n)`` lowest samples. Zones with fewer than two samples
    fall back to the location xG (zero adjustment), flagged.
    """
    if not (0.0 <= x < 1.0):
        raise ValueError(f"drop fraction {x} outside [0, 1)")
    samples = model.shot_samples.get(zone, ())
    if len(samples) < 2:
        g = float(model.shot_goal[zone])
        return ShotQuality(g, g, g, fallback=True)
    values = np.asarray(samples, dtype=float)
    mu = float(values.mean())
    below = values[values < mu]
    mu_low = float(below.mean()) if below.size else mu
    drop = int(np.floor(x * values.size))
    kept = np.sort(values, kind="stable")[drop:]
    mu_high = float(kept.mean())
    return ShotQuality(mu, mu_low, mu_high)


MODEL_FORMAT_VERSION = 1


def model_to_json(model: TeamModel) -> str:
    """Serialize a model to its versioned JSON artifact (bit-stable)."""
    def rows(matrix: np.ndarray) -> dict[str, dict[str, float]]:
        out: dict[str, dict[str, float]] = {}
        for i in np.flatnonzero(matrix.any(axis=1)):
            row = matrix[i]
            out[str(int(i))] = {str(int(j)): float(row[j]) for j in np.flatnonzero(row)}
        return out

    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "team_id": model.team_id,
        "grid": {
            "pitch_length": model.spec.pitch_length,
            "pitch_width": model.spec.pitch_width,
            "columns": model.spec.columns,
            "rows": model.spec.rows,
        },
        "shoot_policy": [float(v) for v in model.shoot_policy],
        "shot_goal": [float(v) for v in model.shot_goal],
        "move_policy": rows(model.move_policy),
        "move_success": rows(model.move_success),
        "shot_samples": {str(z): list(s) for z, s in sorted(model.shot_samples.items())},
        "start_counts": [float(v) for v in model.start_counts],
        "action_counts": [float(v) for v in model.action_counts],
        "inert": [int(z) for z in np.flatnonzero(model.inert)],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def model_from_json(text: str) -> TeamModel:
    payload = json.loads(text)
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {version!r}")
    g = payload["grid"]
    spec = GridSpec(g["pitch_length"], g["pitch_width"], g["columns"], g["rows"])
    n = spec.n_states

    def matrix(obj: dict[str, dict[str, float]]) -> np.ndarray:
        m = np.zeros((n, n))
        for i, row in obj.items():
            for j, v in row.items():
                m[int(i), int(j)] = v
        return m

    inert = np.zeros(n, dtype=bool)
    inert[payload["inert"]] = True
    return TeamModel(
        team_id=payload["team_id"],
        spec=spec,
        shoot_policy=np.asarray(payload["shoot_policy"], dtype=float),
        move_policy=matrix(payload["move_policy"]),
        move_success=matrix(payload["move_success"]),
        shot_goal=np.asarray(payload["shot_goal"], dtype=float),
        shot_samples={int(z): tuple(s) for z, s in payload["shot_samples"].items()},
        start_counts=np.asarray(payload["start_counts"], dtype=float),
        action_counts=np.asarray(payload["action_counts"], dtype=float),
        inert=inert,
    )


def models_equal(a: TeamModel, b: TeamModel) -> bool:
    return (
        a.team_id == b.team_id
        and a.spec == b.spec
        and np.array_equal(a.shoot_policy, b.shoot_policy)
        and np.array_equal(a.move_policy, b.move_policy)
        and np.array_equal(a.move_success, b.move_success)
        and np.array_equal(a.shot_goal, b.shot_goal)
        and a.shot_samples == b.shot_samples
        and np.array_equal(a.start_counts, b.start_counts)
        and np.array_equal(a.action_counts, b.action_counts)
        and np.array_equal(a.inert, b.inert)
    )
