import numpy as np
import pytest

from shotmdp import (
    ChainSolveError,
    GridSpec,
    InducedChain,
    empirical_values,
    expected_goals,
    expected_shots,
    fundamental_matrix,
    induced_chain,
    manual_model,
    random_model,
    sample_possessions,
    scoring_value,
    simulate_terminals,
    toy_model,
)
from oracles import neumann_series, value_iteration_reference


def chain_from(q, shoot=None, goal=None) -> InducedChain:
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    return InducedChain(
        q=q,
        shoot_prob=np.zeros(n) if shoot is None else np.asarray(shoot, dtype=float),
        goal_prob=np.zeros(n) if goal is None else np.asarray(goal, dtype=float),
    )


def test_fundamental_matrix_two_state_hand_inverse():
    n_matrix = fundamental_matrix(chain_from([[0.0, 0.6], [0.4, 0.0]]))
    expected = np.array([[1.0, 0.6], [0.4, 1.0]]) / 0.76
    assert np.allclose(n_matrix, expected, atol=1e-12)


def test_fundamental_matrix_of_zero_q_is_identity():
    assert np.array_equal(fundamental_matrix(chain_from(np.zeros((4, 4)))), np.eye(4))


def test_fundamental_matrix_matches_neumann_series():
    rng = np.random.default_rng(17)
    q = rng.uniform(0, 1, (10, 10))
    q *= rng.uniform(0.3, 0.9) / q.sum(axis=1, keepdims=True)
    chain = chain_from(q)
    assert np.abs(fundamental_matrix(chain) - neumann_series(q)).max() < 1e-8


def test_fundamental_matrix_residual_bound():
    chain = induced_chain(toy_model())
    n_matrix = fundamental_matrix(chain)
    residual = np.abs(n_matrix @ (np.eye(chain.n) - chain.q) - np.eye(chain.n))
    assert residual.sum(axis=1).max() <= 1e-8


def test_singular_chain_names_dead_zones():
    # two zones that only pass to each other, perfectly, and never shoot
    with pytest.raises(ChainSolveError) as err:
        fundamental_matrix(chain_from([[0.0, 1.0], [1.0, 0.0]]))
    assert err.value.zones == [0, 1]


def test_row_sums_are_expected_possession_lengths():
    chain = induced_chain(toy_model())
    row_sums = fundamental_matrix(chain).sum(axis=1)
    assert np.all(np.isfinite(row_sums)) and np.all(row_sums >= 1.0)


def test_expected_shots_on_the_toy_chain(toy):
    chain = induced_chain(toy)
    n_matrix = fundamental_matrix(chain)
    shots = expected_shots(chain, n_matrix, toy.start_counts)
    assert shots[1] == pytest.approx(0.2 * 1.31579, abs=5e-6)
    assert shots[2] == pytest.approx(0.5 * 0.78947, abs=5e-6)


def test_expected_shots_zero_starts_and_linearity(toy):
    chain = induced_chain(toy)
    n_matrix = fundamental_matrix(chain)
    assert np.all(expected_shots(chain, n_matrix, np.zeros(3)) == 0.0)
    single = expected_shots(chain, n_matrix, toy.start_counts)
    double = expected_shots(chain, n_matrix, 2 * toy.start_counts)
    assert np.allclose(double, 2 * single, atol=1e-14)


def test_expected_goals_toy_value_and_bounds(toy):
    chain = induced_chain(toy)
    shots = expected_shots(chain, fundamental_matrix(chain), toy.start_counts)
    goals = expected_goals(shots, chain.goal_prob)
    assert goals == pytest.approx(0.14474, abs=5e-6)
    assert expected_goals(np.zeros(3), chain.goal_prob) == 0.0
    assert expected_goals(shots, np.clip(chain.goal_prob, 0, 1)) <= shots.sum()


def test_scoring_value_toy_both_methods(toy):
    chain = induced_chain(toy)
    direct = scoring_value(chain)
    iterated = scoring_value(chain, "value_iteration")
    assert direct[1] == pytest.approx(0.11 / 0.76, abs=1e-12)
    assert direct[2] == pytest.approx(0.207895, abs=5e-7)
    assert np.abs(direct - iterated).max() <= 1e-8


def test_scoring_value_equals_goal_prob_when_always_shooting():
    spec = GridSpec(columns=2, rows=1)
    model = manual_model(
        spec,
        policy={1: {"shoot": 1.0}, 2: {"shoot": 1.0}},
        move_success={},
        goal_prob={1: 0.25, 2: 0.4},
    )
    values = scoring_value(induced_chain(model))
    assert values[1] == 0.25 and values[2] == 0.4


def test_scoring_value_iteration_cap():
    chain = induced_chain(toy_model())
    with pytest.raises(ChainSolveError):
        scoring_value(chain, "value_iteration", epsilon=0.0, max_iterations=5)


def test_scoring_value_unknown_method():
    with pytest.raises(ValueError):
        scoring_value(induced_chain(toy_model()), "dynamic")


def test_scoring_value_dominates_the_immediate_shot_term():
    # v(s) >= pi(shoot|s) * goal_prob(s): scoring now is one way to score
    for seed in range(6):
        chain = induced_chain(random_model(7, seed))
        values = scoring_value(chain)
        assert np.all(values >= chain.shoot_prob * chain.goal_prob - 1e-12)
        assert np.all((values >= 0) & (values <= 1))


def test_value_iterates_are_nondecreasing_on_random_chains():
    for seed in range(5):
        chain = induced_chain(random_model(6, seed))
        b = chain.shoot_prob * chain.goal_prob
        iterates = value_iteration_reference(chain.q, b, sweeps=60)
        stacked = np.stack(iterates)
        assert np.all(np.diff(stacked, axis=0) >= -1e-15)
        assert np.abs(iterates[-1] - scoring_value(chain)).max() < 1e-6


def test_goals_from_point_start_equal_scoring_value():
    for seed in range(8):
        model = random_model(7, seed)
        chain = induced_chain(model)
        n_matrix = fundamental_matrix(chain)
        values = scoring_value(chain)
        for zone in range(chain.n):
            start = np.zeros(chain.n)
            start[zone] = 1.0
            shots = expected_shots(chain, n_matrix, start)
            assert expected_goals(shots, chain.goal_prob) == pytest.approx(values[zone], abs=1e-8)


def test_monte_carlo_confirms_scoring_value(toy):
    values = scoring_value(induced_chain(toy))
    n = 200_000
    summary = simulate_terminals(toy, 1, n, seed=33)
    p = values[1]
    sigma = np.sqrt(p * (1 - p) / n)
    assert abs(summary.goal_frequency - p) <= 3 * sigma


def test_empirical_values_single_zone_example():
    # three single-shot possessions from the same zone, exactly one scoring
    from shotmdp import Possession
    from shotmdp.events import Event, SHOT
    from shotmdp.grid import GOAL, NO_GOAL, zone_center

    spec = GridSpec(columns=2, rows=1)

    def poss(ok):
        e = Event("m", "t", 0, SHOT, zone_center(1, spec), None, ok)
        return Possession("t", (e,), GOAL if ok else NO_GOAL)

    possessions = [poss(True), poss(False), poss(False)]
    empirical = empirical_values(possessions, spec)
    assert empirical.values[1] == pytest.approx(1 / 3)
    assert empirical.visits[1] == 3


def test_empirical_values_self_consistency_on_simulated_data(toy):
    possessions = sample_possessions(toy, 50_000, seed=8)
    empirical = empirical_values(possessions, toy.spec)
    values = scoring_value(induced_chain(toy))
    assert empirical.mae_against(values, min_support=100) <= 0.02


def test_empirical_values_zero_support_zones_are_excluded(toy):
    possessions = sample_possessions(toy, 500, seed=4)
    empirical = empirical_values(possessions, toy.spec)
    assert empirical.visits[0] == 0
    mae_all = empirical.mae_against(scoring_value(induced_chain(toy)), min_support=1)
    assert np.isfinite(mae_all)
    assert np.isnan(empirical.mae_against(np.zeros(3), min_support=10**9))


def test_empirical_values_per_possession_variant(toy):
    possessions = sample_possessions(toy, 2000, seed=4)
    per_visit = empirical_values(possessions, toy.spec)
    per_poss = empirical_values(possessions, toy.spec, per_possession=True)
    assert per_poss.visits[1] <= per_visit.visits[1]
