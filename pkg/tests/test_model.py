import numpy as np
import pytest
from hypothesis import given, strategies as st

from shotmdp import (
    GridSpec,
    Possession,
    collect_counts,
    fit_team_model,
    manual_model,
    model_from_json,
    model_to_json,
    models_equal,
    sample_possessions,
    shot_quality_stats,
    toy_model,
    validate_model,
)
from shotmdp.events import Event, MOVE, SHOT
from shotmdp.grid import GOAL, LOSS, NO_GOAL, zone_center

SPEC = GridSpec()
S = 150
Z = 160


def one_event_possession(event: Event, terminal: str) -> Possession:
    return Possession(event.team_id, (event,), terminal)


def move_event(seq, ok, start_zone=S, end_zone=Z):
    return Event("m", "a", seq, MOVE, zone_center(start_zone, SPEC), zone_center(end_zone, SPEC), ok)


def shot_event(seq, ok, zone=S, xg=None):
    return Event("m", "a", seq, SHOT, zone_center(zone, SPEC), None, ok, xg)


def ten_action_zone_possessions():
    """Zone S: 2 shots (1 goal), 8 moves to Z (6 successful)."""
    possessions = [
        one_event_possession(shot_event(0, True), GOAL),
        one_event_possession(shot_event(1, False), NO_GOAL),
    ]
    seq = 2
    for ok in [True] * 6 + [False] * 2:
        possessions.append(one_event_possession(move_event(seq, ok), LOSS))
        seq += 1
    return possessions


def test_fit_reproduces_count_ratios_without_smoothing():
    model = fit_team_model(ten_action_zone_possessions(), SPEC, alpha=0.0, intent_mode="observed_end")
    assert model.shoot_policy[S] == pytest.approx(0.2)
    assert model.move_policy[S, Z] == pytest.approx(0.8)
    assert model.move_success[S, Z] == pytest.approx(0.75)
    assert model.shot_goal[S] == pytest.approx(0.5)
    assert model.action_counts[S] == 10


def test_all_failure_zone_sends_full_mass_to_loss():
    possessions = [
        one_event_possession(move_event(i, False), LOSS) for i in range(4)
    ]
    model = fit_team_model(possessions, SPEC, alpha=0.0, intent_mode="observed_end")
    assert model.move_policy[S, Z] == pytest.approx(1.0)
    assert model.move_success[S, Z] == 0.0  # P(s, move_to(Z), LOSS) = 1


def test_fit_requires_possessions():
    with pytest.raises(ValueError):
        fit_team_model([], SPEC)


def test_count_conservation_with_observed_end():
    counts = collect_counts(ten_action_zone_possessions(), SPEC, intent_mode="observed_end")
    total = counts.move_attempts[S].sum() + counts.shots[S]
    assert total == counts.actions[S]


def test_observed_end_counts_equal_direct_end_tabulation():
    # with observed_end attribution, c_{s,s'} is just a tally of end zones
    from collections import Counter
    from shotmdp.grid import zone_of

    possessions = [
        one_event_possession(move_event(0, True, end_zone=Z), LOSS),
        one_event_possession(move_event(1, False, end_zone=Z), LOSS),
        one_event_possession(move_event(2, False, end_zone=Z + 1), LOSS),
        one_event_possession(move_event(3, True, end_zone=Z + 1), LOSS),
    ]
    counts = collect_counts(possessions, SPEC, intent_mode="observed_end")
    direct = Counter(
        zone_of(e.end, SPEC) for p in possessions for e in p.events if e.kind == MOVE
    )
    for dest, n in direct.items():
        assert counts.move_attempts[S, dest] == n


def test_count_conservation_holds_for_blended_intent_too():
    possessions = ten_action_zone_possessions()
    counts = collect_counts(possessions, SPEC, intent_mode="blended", intent_lambda=0.3)
    total = counts.move_attempts[S].sum() + counts.shots[S]
    assert total == pytest.approx(counts.actions[S], abs=1e-9)


def test_smoothing_only_adds_mass_to_league_observed_actions():
    model = fit_team_model(ten_action_zone_possessions(), SPEC, alpha=0.5, intent_mode="observed_end")
    # only two actions were ever observed from S: shoot and move-to-Z
    assert np.flatnonzero(model.move_policy[S]).tolist() == [Z]
    assert model.shoot_policy[S] + model.move_policy[S].sum() == pytest.approx(1.0)
    # alpha pulls the selection ratio toward uniform over the support
    assert model.shoot_policy[S] == pytest.approx(2.5 / 11.0)


def test_inert_zones_have_no_policy_mass():
    # every action starts in zone S, so S is the only active zone
    model = fit_team_model(ten_action_zone_possessions(), SPEC)
    assert model.inert.sum() == SPEC.n_states - 1
    assert model.move_policy[model.inert].sum() == 0.0
    assert model.shoot_policy[model.inert].sum() == 0.0


def test_validate_model_passes_a_valid_toy():
    report = validate_model(toy_model())
    assert report.ok
    assert report.inert_fraction == pytest.approx(1 / 3)


def test_validate_model_flags_broken_policy_row():
    toy = toy_model()
    bad_shoot = toy.shoot_policy.copy()
    bad_shoot[1] = 0.1  # row now sums to 0.9
    report = validate_model(toy.with_policy(bad_shoot, toy.move_policy.copy()))
    assert not report.ok
    assert any("zone 1" in v for v in report.violations)


def test_validate_model_on_fitted_synthetic_corpus():
    possessions = sample_possessions(toy_model(), 2000, seed=9)
    model = fit_team_model(possessions, toy_model().spec)
    report = validate_model(model)
    assert report.ok
    assert 0.0 <= report.inert_fraction < 1.0


def sample_model(samples):
    spec = GridSpec(columns=2, rows=1)
    return manual_model(
        spec,
        policy={1: {"shoot": 1.0}},
        move_success={},
        goal_prob={1: 0.06},
        shot_samples={1: tuple(samples)},
    )


def test_shot_quality_means():
    quality = shot_quality_stats(sample_model([0.02, 0.04, 0.06, 0.08, 0.30]), 1)
    assert quality.mu == pytest.approx(0.10)
    assert quality.mu_low == pytest.approx(0.05)
    assert quality.mu_high == pytest.approx(0.10)
    assert not quality.fallback


def test_shot_quality_drops_lowest_fraction():
    quality = shot_quality_stats(sample_model([0.02, 0.04, 0.06, 0.08, 0.30]), 1, x=0.2)
    assert quality.mu_high == pytest.approx(0.12)


def test_shot_quality_single_sample_falls_back_to_location_xg():
    quality = shot_quality_stats(sample_model([0.4]), 1)
    assert quality == (0.06, 0.06, 0.06, True)


def test_shot_quality_rejects_bad_fraction():
    with pytest.raises(ValueError):
        shot_quality_stats(sample_model([0.1, 0.2]), 1, x=1.0)


@given(st.lists(st.floats(0.0, 1.0, width=32), min_size=2, max_size=30), st.floats(0.0, 0.95))
def test_shot_quality_ordering(samples, x):
    quality = shot_quality_stats(sample_model(samples), 1, x=x)
    assert quality.mu_low <= quality.mu + 1e-12
    assert quality.mu_high >= quality.mu - 1e-12


def test_missing_xg_replaced_by_location_value():
    possessions = [
        one_event_possession(shot_event(0, True, xg=0.5), GOAL),
        one_event_possession(shot_event(1, False, xg=None), NO_GOAL),
    ]
    model = fit_team_model(possessions, SPEC, alpha=0.0)
    assert model.shot_samples[S] == (0.5, model.shot_goal[S])


def test_fitting_is_deterministic():
    possessions = sample_possessions(toy_model(), 500, seed=21)
    a = model_to_json(fit_team_model(possessions, toy_model().spec))
    b = model_to_json(fit_team_model(possessions, toy_model().spec))
    assert a == b


def test_model_json_round_trip():
    possessions = sample_possessions(toy_model(), 300, seed=2)
    model = fit_team_model(possessions, toy_model().spec)
    restored = model_from_json(model_to_json(model))
    assert models_equal(model, restored)


def test_model_json_rejects_unknown_version():
    text = model_to_json(toy_model()).replace('"format_version": 1', '"format_version": 99')
    with pytest.raises(ValueError):
        model_from_json(text)
