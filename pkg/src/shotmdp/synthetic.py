"""Ground-truth models and Monte Carlo possession simulation.

Everything analytic in this package has a sampling counterpart here:
corpora drawn from a known model (for estimator recovery tests), and
vectorized rollout estimates of goal frequencies and season totals (for
validating the linear-algebra paths). All randomness flows through
NumPy's default PCG64 generator; a seed fully determines a corpus, and
rollouts draw from a fresh stream seeded by (seed, chunk_index), so a
run is reproducible regardless of how chunks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .events import MOVE, SHOT, Event, Possession
from .grid import GOAL, LOSS, NO_GOAL, GridSpec, zone_center
from .model import TeamModel

MAX_POSSESSION_STEPS = 10**4


class SimulationEstimate(NamedTuple):
    mean: float
    stderr: float


@dataclass
class TerminalSummary:
    """Outcome tallies for a batch of simulated possessions."""

    n: int
    goals: int
    no_goals: int
    losses: int
    shot_zone_counts: np.ndarray  # (n_states,) shots taken per zone

    @property
    def goal_frequency(self) -> float:
        return self.goals / self.n


def manual_model(
    spec: GridSpec,
    policy: dict[int, dict],
    move_success: dict[int, dict[int, float]],
    goal_prob: dict[int, float],
    *,
    team_id: str = "synthetic",
    start_counts: dict[int, float] | None = None,
    shot_samples: dict[int, tuple[float, ...]] | None = None,
    tol: float = 1e-9,
) -> TeamModel:
    """Build a TeamModel directly from per-zone dicts.

    ``policy[s]`` is ``{"shoot": p, "moves": {dest: p, ...}}``; zones
    absent from ``policy`` are inert. Rows must sum to 1.
    """
    n = spec.n_states
    shoot = np.zeros(n)
    moves = np.zeros((n, n))
    success = np.zeros((n, n))
    gp = np.zeros(n)
    actions = np.zeros(n)
    for zone, row in policy.items():
        shoot[zone] = row.get("shoot", 0.0)
        for dest, p in row.get("moves", {}).items():
            moves[zone, dest] = p
        total = shoot[zone] + moves[zone].sum()
        if abs(total - 1.0) > tol:
            raise ValueError(f"policy row for zone {zone} sums to {total}")
        actions[zone] = 1.0
    for zone, row in move_success.items():
        for dest, p in row.items():
            success[zone, dest] = p
    for zone, p in goal_prob.items():
        gp[zone] = p
    starts = np.zeros(n)
    for zone, c in (start_counts or {}).items():
        starts[zone] = c
    return TeamModel(
        team_id=team_id,
        spec=spec,
        shoot_policy=shoot,
        move_policy=moves,
        move_success=success,
        shot_goal=gp,
        shot_samples=dict(shot_samples or {}),
        start_counts=starts,
        action_counts=actions,
        inert=actions == 0,
    )


def toy_model() -> TeamModel:
    """Two offensive zones with hand-solvable analytics.

    Zone 1 shoots 20% (xG 0.1) or moves to zone 2 (75% success); zone 2
    shoots 50% (xG 0.3) or moves back (80% success). Scoring value from
    zone 1 is 0.11 / 0.76.
    """
    spec = GridSpec(columns=2, rows=1)
    return manual_model(
        spec,
        policy={
            1: {"shoot": 0.2, "moves": {2: 0.8}},
            2: {"shoot": 0.5, "moves": {1: 0.5}},
        },
        move_success={1: {2: 0.75}, 2: {1: 0.8}},
        goal_prob={1: 0.1, 2: 0.3},
        start_counts={1: 1},
        team_id="toy",
    )


def random_model(n_zones: int, seed: int, *, team_id: str | None = None) -> TeamModel:
    """A valid random model on a 1-row grid with ``n_zones`` field states.

    Every zone shoots with probability at least 0.05, so per-step
    absorption is bounded away from zero and the chain always solves.
    """
    if n_zones < 2:
        raise ValueError("need at least 2 zones")
    rng = np.random.default_rng(seed)
    spec = GridSpec(columns=n_zones - 1, rows=1)
    policy: dict[int, dict] = {}
    success: dict[int, dict[int, float]] = {}
    gp: dict[int, float] = {}
    for zone in range(n_zones):
        shoot = float(rng.uniform(0.05, 0.6))
        n_targets = int(rng.integers(1, min(4, n_zones - 1) + 1))
        targets = rng.choice([z for z in range(n_zones) if z != zone], size=n_targets, replace=False)
        weights = rng.dirichlet(np.ones(n_targets)) * (1.0 - shoot)
        policy[zone] = {"shoot": shoot, "moves": {int(t): float(w) for t, w in zip(targets, weights)}}
        success[zone] = {int(t): float(rng.uniform(0.3, 0.95)) for t in targets}
        gp[zone] = float(rng.uniform(0.02, 0.5))
    starts = {int(z): 1.0 for z in range(n_zones)}
    return manual_model(
        spec, policy, success, gp,
        team_id=team_id or f"random-{seed}", start_counts=starts,
    )


def random_ground_truth(spec: GridSpec, seed: int, *, team_id: str | None = None) -> TeamModel:
    """A plausible full-grid ground truth: local moves, shot rates and
    quality rising toward the goal, possessions mostly starting deep."""
    rng = np.random.default_rng(seed)
    n = spec.n_states
    goal = np.array([spec.pitch_length, spec.pitch_width / 2])
    shoot = np.zeros(n)
    moves = np.zeros((n, n))
    success = np.zeros((n, n))
    gp = np.zeros(n)

    def neighbors(zone: int) -> tuple[list[int], list[float]]:
        col = (zone - 1) % spec.columns
        row = (zone - 1) // spec.columns
        out, bias = [], []
        for dc in range(-2, 4):
            for dr in range(-2, 3):
                c, r = col + dc, row + dr
                if 0 <= c < spec.columns and 0 <= r < spec.rows and (dc, dr) != (0, 0):
                    out.append(1 + r * spec.columns + c)
                    bias.append(1.0 + 0.8 * max(dc, 0))  # teams play forward
        if col <= 2:
            out.append(0)
            bias.append(0.5)
        return out, bias

    for zone in range(n):
        if zone == 0:
            shoot[zone] = 0.0
            candidates = [0] + [
                1 + r * spec.columns + c
                for r in range(spec.rows)
                for c in range(min(spec.columns, 6))
            ]
            targets = list(rng.choice(candidates, size=min(12, len(candidates)), replace=False))
            bias = [1.0] * len(targets)
        else:
            center = np.array(zone_center(zone, spec))
            d = float(np.linalg.norm(goal - center))
            shoot[zone] = min(0.02 + 0.45 * np.exp(-d / 10.0), 0.9)
            gp[zone] = min(max(0.02 + 0.55 * np.exp(-d / 11.0), 0.01), 0.65)
            targets, bias = neighbors(zone)
        weights = rng.dirichlet(np.asarray(bias)) * (1.0 - shoot[zone])
        for t, w in zip(targets, weights):
            moves[zone, int(t)] = w
            success[zone, int(t)] = rng.uniform(0.6, 0.92)

    starts = np.zeros(n)
    starts[0] = 0.6
    offensive = rng.choice(np.arange(1, n), size=min(40, n - 1), replace=False)
    starts[offensive] = rng.dirichlet(np.ones(len(offensive))) * 0.4
    actions = np.ones(n)
    return TeamModel(
        team_id=team_id or f"ground-truth-{seed}",
        spec=spec,
        shoot_policy=shoot,
        move_policy=moves,
        move_success=success,
        shot_goal=gp,
        shot_samples={},
        start_counts=starts,
        action_counts=actions,
        inert=actions == 0,
    )


def _draw_categorical(rng: np.random.Generator, weights: np.ndarray) -> int:
    cumulative = np.cumsum(weights)
    return int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))


def sample_possessions(
    model: TeamModel,
    n: int,
    seed: int,
    *,
    match_id: str = "synthetic",
    xg_sampler: Callable[[int, np.random.Generator], float] | None = None,
) -> list[Possession]:
    """Draw possessions from the model, emitted as neutral-schema events.

    Coordinates are exact zone centers; a failed move's observed end is
    its intended target, so intent attribution is exactly recoverable.
    Shots carry ``shot_xg`` equal to the zone's goal probability unless a
    sampler is given.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    start_weights = model.start_counts.astype(float)
    if start_weights.sum() <= 0:
        raise ValueError("model has no start-state mass to sample from")
    if np.any(model.inert & (start_weights > 0)):
        raise ValueError("start mass on an inert zone; cannot emit events there")
    centers = {z: zone_center(z, model.spec) for z in range(model.n_states)}
    possessions: list[Possession] = []
    seq = 0
    for _ in range(n):
        zone = _draw_categorical(rng, start_weights)
        events: list[Event] = []
        terminal: str | None = None
        for _ in range(MAX_POSSESSION_STEPS):
            if rng.random() < model.shoot_policy[zone]:
                scored = bool(rng.random() < model.shot_goal[zone])
                xg = xg_sampler(zone, rng) if xg_sampler else float(model.shot_goal[zone])
                events.append(Event(match_id, model.team_id, seq, SHOT,
                                    centers[zone], None, scored, xg))
                seq += 1
                terminal = GOAL if scored else NO_GOAL
                break
            row = model.move_policy[zone]
            dest = _draw_categorical(rng, row)
            ok = bool(rng.random() < model.move_success[zone, dest])
            events.append(Event(match_id, model.team_id, seq, MOVE,
                                centers[zone], centers[dest], ok))
            seq += 1
            if not ok:
                terminal = LOSS
                break
            if model.inert[dest]:
                raise ValueError(f"ground truth moves into inert zone {dest}")
            zone = dest
        if terminal is None:
            raise RuntimeError(f"no absorption within {MAX_POSSESSION_STEPS} steps; invalid ground truth")
        possessions.append(Possession(model.team_id, tuple(events), terminal))
    return possessions


def _simulate_wave(
    model: TeamModel,
    start_zones: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Simulate many possessions at once; returns (terminal codes, shot zones).

    Codes: 1 goal, 2 no-goal, 3 loss. ``shot_zones`` is -1 where the
    possession ended without a shot.
    """
    shoot = model.shoot_policy
    gp = model.shot_goal
    move_total = model.move_policy.sum(axis=1)
    conditional = np.divide(
        model.move_policy, move_total[:, None],
        out=np.zeros_like(model.move_policy), where=move_total[:, None] > 0,
    )
    cumulative = np.cumsum(conditional, axis=1)
    dead = (shoot <= 0) & (move_total <= 0)

    zones = np.asarray(start_zones, dtype=np.int64).copy()
    m = zones.size
    terminal = np.zeros(m, dtype=np.uint8)
    shot_zone = np.full(m, -1, dtype=np.int64)
    terminal[dead[zones]] = 3
    active = np.flatnonzero(terminal == 0)
    for _ in range(MAX_POSSESSION_STEPS):
        if active.size == 0:
            return terminal, shot_zone
        s = zones[active]
        shoots = rng.random(active.size) < shoot[s]

        shooters = active[shoots]
        if shooters.size:
            sz = zones[shooters]
            shot_zone[shooters] = sz
            scored = rng.random(shooters.size) < gp[sz]
            terminal[shooters] = np.where(scored, 1, 2)

        movers = active[~shoots]
        if movers.size:
            ms = zones[movers]
            u = rng.random(movers.size)
            dest = (u[:, None] >= cumulative[ms]).sum(axis=1)
            ok = rng.random(movers.size) < model.move_success[ms, dest]
            lost = movers[~ok]
            terminal[lost] = 3
            moved = movers[ok]
            zones[moved] = dest[ok]
            landed_dead = moved[dead[dest[ok]]]
            terminal[landed_dead] = 3
        active = np.flatnonzero(terminal == 0)
    raise RuntimeError(f"no absorption within {MAX_POSSESSION_STEPS} steps; invalid ground truth")


def simulate_terminals(
    model: TeamModel,
    start_zone: int,
    n: int,
    seed: int,
    *,
    chunk: int = 1 << 15,
) -> TerminalSummary:
    """Rollout tallies for ``n`` possessions starting in one zone."""
    goals = no_goals = losses = 0
    shot_counts = np.zeros(model.n_states, dtype=np.int64)
    done = 0
    index = 0
    while done < n:
        size = min(chunk, n - done)
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        terminal, shot_zone = _simulate_wave(model, np.full(size, start_zone), rng)
        goals += int((terminal == 1).sum())
        no_goals += int((terminal == 2).sum())
        losses += int((terminal == 3).sum())
        taken = shot_zone[shot_zone >= 0]
        shot_counts += np.bincount(taken, minlength=model.n_states)
        done += size
        index += 1
    return TerminalSummary(n=n, goals=goals, no_goals=no_goals, losses=losses,
                           shot_zone_counts=shot_counts)


def simulate_expected_goals(
    model: TeamModel,
    start_counts: np.ndarray,
    n_rollouts: int,
    seed: int,
    *,
    chunk_possessions: int = 1 << 15,
) -> SimulationEstimate:
    """Monte Carlo season goal total: mean and standard error over
    ``n_rollouts`` replays of the start distribution."""
    counts = np.asarray(start_counts)
    season = np.repeat(np.arange(counts.size), np.rint(counts).astype(np.int64))
    if season.size == 0:
        return SimulationEstimate(0.0, 0.0)
    rollouts_per_chunk = max(1, chunk_possessions // season.size)
    totals = np.empty(n_rollouts)
    done = 0
    index = 0
    while done < n_rollouts:
        size = min(rollouts_per_chunk, n_rollouts - done)
        rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
        starts = np.tile(season, size)
        terminal, _ = _simulate_wave(model, starts, rng)
        goals = (terminal == 1).reshape(size, season.size).sum(axis=1)
        totals[done:done + size] = goals
        done += size
        index += 1
    stderr = float(totals.std(ddof=1) / np.sqrt(n_rollouts)) if n_rollouts > 1 else 0.0
    return SimulationEstimate(float(totals.mean()), stderr)
