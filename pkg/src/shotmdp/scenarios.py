"""Exact probabilities for constrained action-sequence scenarios.

Answers "shoot now or move first?" questions directly on the model: the
probability of scoring after exactly k forced moves (optionally with the
first move restricted to a region), and the probability that a
possession ever produces a shot with a higher location xG than the
current zone's. The policy is renormalized over the admissible actions
at each constrained step, which is the behavior conditioned on the team
following the scenario.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSolveError, fundamental_matrix, induced_chain
from .grid import RegionMask
from .model import TeamModel

DIRECT_SHOT = "direct_shot"
K_MOVES_THEN_SHOOT = "k_moves_then_shoot"
FLANK_FIRST_THEN_SHOOT = "flank_first_then_shoot"
BETTER_SHOT_EVER = "better_shot_ever"
SCENARIO_KINDS = (DIRECT_SHOT, K_MOVES_THEN_SHOOT, FLANK_FIRST_THEN_SHOOT, BETTER_SHOT_EVER)

NO_ADMISSIBLE_ACTION = "no_admissible_action"


@dataclass(frozen=True)
class ScenarioResult:
    zone: int
    probability: float
    direct_xg: float
    delta: float
    flags: tuple[str, ...] = ()


def _conditional_move_matrix(model: TeamModel, mask: RegionMask | None = None) -> np.ndarray:
    """One forced-move step: policy renormalized over admissible moves,
    weighted by move success. Rows with no admissible move are zero."""
    policy = model.move_policy
    if mask is not None:
        allowed = np.zeros(model.n_states, dtype=bool)
        allowed[list(mask.members)] = True
        policy = policy * allowed[None, :]
    totals = policy.sum(axis=1)
    scaled = np.divide(policy, totals[:, None], out=np.zeros_like(policy), where=totals[:, None] > 0)
    return scaled * model.move_success


def eval_k_moves_then_shoot(
    model: TeamModel,
    start: int,
    k: int,
    first_move_mask: RegionMask | None = None,
) -> ScenarioResult:
    """Score probability for: exactly k moves, then a forced shot.

    A lost possession along the way contributes zero. When the start zone
    has no admissible first move the result is 0, flagged rather than
    raised.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    probs, flagged = _k_moves_probabilities(model, k, first_move_mask)
    direct = float(model.shot_goal[start])
    flags = (NO_ADMISSIBLE_ACTION,) if flagged[start] else ()
    p = float(probs[start])
    return ScenarioResult(start, p, direct, p - direct, flags)


def _k_moves_probabilities(
    model: TeamModel, k: int, first_move_mask: RegionMask | None
) -> tuple[np.ndarray, np.ndarray]:
    """Vector of scenario scoring probabilities for every start zone."""
    if k < 1:
        raise ValueError("k must be at least 1")
    step = _conditional_move_matrix(model)
    first = step if first_move_mask is None else _conditional_move_matrix(model, first_move_mask)
    p = model.shot_goal.copy()
    for _ in range(k - 1):
        p = step @ p
    p = first @ p
    flagged = first.sum(axis=1) == 0
    return p, flagged


def eval_better_shot_ever(model: TeamModel, start: int, threshold: float | None = None) -> ScenarioResult:
    """Probability that the possession's shot comes from a zone whose
    location xG strictly exceeds ``threshold`` (default: the start zone's
    own xG), under the unmodified policy."""
    chain = induced_chain(model)
    direct = float(model.shot_goal[start])
    t = direct if threshold is None else float(threshold)
    b = chain.shoot_prob * (chain.goal_prob > t)
    try:
        x = np.linalg.solve(np.eye(chain.n) - chain.q, b)
    except np.linalg.LinAlgError:
        dead = [int(z) for z in np.flatnonzero(chain.absorption_mass() <= 1e-12)]
        raise ChainSolveError(
            f"singular reachability system; zones with zero absorption mass: {dead}", zones=dead
        ) from None
    p = float(x[start])
    return ScenarioResult(start, p, direct, p - direct)


def eval_direct_shot(model: TeamModel, start: int) -> ScenarioResult:
    direct = float(model.shot_goal[start])
    return ScenarioResult(start, direct, direct, 0.0)


def batch_heatmap(
    model: TeamModel,
    kind: str,
    region: RegionMask,
    *,
    k: int | None = None,
    first_move_mask: RegionMask | None = None,
) -> list[ScenarioResult]:
    """Evaluate one scenario from every zone of a region (ascending zone order).

    ``better_shot_ever`` uses each zone's own xG as its threshold, so the
    whole batch is one fundamental-matrix solve.
    """
    zones = region.sorted()
    gp = model.shot_goal
    if kind == DIRECT_SHOT:
        return [ScenarioResult(z, float(gp[z]), float(gp[z]), 0.0) for z in zones]
    if kind in (K_MOVES_THEN_SHOOT, FLANK_FIRST_THEN_SHOOT):
        if kind == FLANK_FIRST_THEN_SHOOT and first_move_mask is None:
            raise ValueError("flank_first_then_shoot needs a first-move mask")
        depth = k if k is not None else (2 if kind == FLANK_FIRST_THEN_SHOOT else 1)
        probs, flagged = _k_moves_probabilities(model, depth, first_move_mask)
        return [
            ScenarioResult(
                z, float(probs[z]), float(gp[z]), float(probs[z] - gp[z]),
                (NO_ADMISSIBLE_ACTION,) if flagged[z] else (),
            )
            for z in zones
        ]
    if kind == BETTER_SHOT_EVER:
        chain = induced_chain(model)
        n_matrix = fundamental_matrix(chain)
        # Column z of B is the absorption vector for threshold gp[z].
        b = chain.shoot_prob[:, None] * (chain.goal_prob[:, None] > gp[None, :])
        x = n_matrix @ b
        return [
            ScenarioResult(z, float(x[z, z]), float(gp[z]), float(x[z, z] - gp[z]))
            for z in zones
        ]
    raise ValueError(f"unknown scenario kind {kind!r}")
