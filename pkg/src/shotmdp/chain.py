"""Absorbing-chain analytics on the policy-induced transition matrix.

Fixing a policy turns the MDP into an absorbing Markov chain over field
states whose move matrix is ``Q[i, j] = pi(move_to(j) | i) * P(i,
move_to(j), j)``. Everything here is dense linear algebra at a few
hundred states: the fundamental matrix ``N = (I - Q)^-1`` for expected
visits, expected shots and goals for a season's start distribution, and
per-zone scoring values by direct solve or value iteration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .events import Possession
from .grid import GOAL, GridSpec, zone_of
from .model import TeamModel

DEFAULT_RESIDUAL_TOL = 1e-8
DEFAULT_VALUE_EPSILON = 1e-10
DEFAULT_VALUE_MAX_ITERATIONS = 10**6
DEFAULT_MIN_SUPPORT = 100


class ChainSolveError(RuntimeError):
    """The absorbing system is singular or too ill-conditioned to solve."""

    def __init__(self, message: str, zones: list[int] | None = None):
        super().__init__(message)
        self.zones = zones or []


@dataclass(frozen=True, eq=False)
class InducedChain:
    """Field-state chain induced by a fixed policy."""

    q: np.ndarray           # (n, n) move mass
    shoot_prob: np.ndarray  # (n,)
    goal_prob: np.ndarray   # (n,)

    def __post_init__(self) -> None:
        self.q.setflags(write=False)
        self.shoot_prob.setflags(write=False)
        self.goal_prob.setflags(write=False)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def absorption_mass(self) -> np.ndarray:
        """Per-step probability of leaving the field states, per zone."""
        return 1.0 - self.q.sum(axis=1)


def induced_chain(model: TeamModel) -> InducedChain:
    return InducedChain(
        q=model.move_policy * model.move_success,
        shoot_prob=model.shoot_policy.copy(),
        goal_prob=model.shot_goal.copy(),
    )


def fundamental_matrix(chain: InducedChain, *, residual_tol: float = DEFAULT_RESIDUAL_TOL) -> np.ndarray:
    """Expected-visit matrix N with ``N[i, j]`` = visits to j starting from i.

    Solved by dense LU; one round of iterative refinement if the
    infinity-norm residual of ``N (I - Q) - I`` exceeds ``residual_tol``.
    """
    n = chain.n
    identity = np.eye(n)
    a = identity - chain.q

    def residual(candidate: np.ndarray) -> float:
        return float(np.abs(candidate @ a - identity).sum(axis=1).max())

    try:
        # Solve N (I - Q) = I via the transposed system.
        result = np.linalg.solve(a.T, identity).T
    except np.linalg.LinAlgError:
        result = None
    if result is None or not np.isfinite(result).all() or residual(result) > residual_tol:
        if result is not None and np.isfinite(result).all():
            correction = np.linalg.solve(a.T, (identity - result @ a).T).T
            result = result + correction
        if result is None or not np.isfinite(result).all() or residual(result) > residual_tol:
            dead = [int(z) for z in np.flatnonzero(chain.absorption_mass() <= 1e-12)]
            raise ChainSolveError(
                f"absorbing system is singular or ill-conditioned; zones with zero absorption mass: {dead}",
                zones=dead,
            )
    return result


def expected_visits(n_matrix: np.ndarray, start_counts: np.ndarray) -> np.ndarray:
    """Season visit totals per zone for a possession start distribution."""
    return np.asarray(start_counts, dtype=float) @ n_matrix


def expected_shots(chain: InducedChain, n_matrix: np.ndarray, start_counts: np.ndarray) -> np.ndarray:
    """Expected shot count per zone over a season."""
    return chain.shoot_prob * expected_visits(n_matrix, start_counts)


def expected_goals(shots: np.ndarray, goal_probs: np.ndarray) -> float:
    """Season goal total: per-zone shots weighted by their goal probability."""
    return float(np.dot(shots, goal_probs))


def scoring_value(
    chain: InducedChain,
    method: str = "linear_solve",
    *,
    epsilon: float = DEFAULT_VALUE_EPSILON,
    max_iterations: int = DEFAULT_VALUE_MAX_ITERATIONS,
) -> np.ndarray:
    """Probability of scoring before the possession ends, per start zone.

    Solves ``v = b + Q v`` with ``b(s) = pi(shoot | s) * P(s, shoot,
    goal)``. ``value_iteration`` starts from all zeros and stops when the
    largest update falls below ``epsilon``; it agrees with the direct
    solve to well under 1e-8.
    """
    b = chain.shoot_prob * chain.goal_prob
    if method == "linear_solve":
        identity = np.eye(chain.n)
        try:
            return np.linalg.solve(identity - chain.q, b)
        except np.linalg.LinAlgError:
            dead = [int(z) for z in np.flatnonzero(chain.absorption_mass() <= 1e-12)]
            raise ChainSolveError(
                f"singular value system; zones with zero absorption mass: {dead}", zones=dead
            ) from None
    if method == "value_iteration":
        v = np.zeros(chain.n)
        for _ in range(max_iterations):
            nxt = b + chain.q @ v
            delta = float(np.abs(nxt - v).max())
            v = nxt
            if delta < epsilon:
                return v
        raise ChainSolveError(f"value iteration did not converge in {max_iterations} iterations")
    raise ValueError(f"unknown method {method!r}")


@dataclass
class EmpiricalValues:
    """Observed per-zone scoring frequencies and their visit support."""

    values: np.ndarray
    visits: np.ndarray

    def mae_against(self, predicted: np.ndarray, *, min_support: int = DEFAULT_MIN_SUPPORT) -> float:
        """Mean absolute error vs a model value vector over supported zones."""
        mask = self.visits >= min_support
        if not mask.any():
            return float("nan")
        return float(np.abs(self.values[mask] - predicted[mask]).mean())


def empirical_values(
    possessions: list[Possession],
    spec: GridSpec,
    *,
    per_possession: bool = False,
) -> EmpiricalValues:
    """Scoring frequency per zone, straight from the data.

    Default is per visit: every action taken from a zone counts once,
    and counts as a success when its possession ends in a goal.
    ``per_possession`` counts each possession at most once per zone.
    """
    visits = np.zeros(spec.n_states)
    wins = np.zeros(spec.n_states)
    for possession in possessions:
        scored = possession.terminal == GOAL
        zones = [zone_of(e.start, spec) for e in possession.events]
        if per_possession:
            zones = list(set(zones))
        for z in zones:
            visits[z] += 1
            wins[z] += scored
    values = np.divide(wins, visits, out=np.zeros_like(wins), where=visits > 0)
    return EmpiricalValues(values=values, visits=visits)
