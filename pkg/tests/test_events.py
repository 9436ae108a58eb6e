import json

import pytest
from hypothesis import given, strategies as st

from shotmdp import (
    Event,
    GridSpec,
    ParseError,
    events_to_neutral_csv,
    events_to_neutral_json,
    parse_events,
    sample_possessions,
    segment_possessions,
    start_state_counts,
)
from shotmdp.events import MOVE, SHOT, flatten
from shotmdp.grid import GOAL, LOSS, NO_GOAL

CSV_HEADER = "match_id,team_id,seq,kind,start_x,start_y,end_x,end_y,success,shot_xg"


def move(team, seq, ok, start=(60.0, 30.0), end=(70.0, 30.0), match="m1"):
    return Event(match, team, seq, MOVE, start, end, ok)


def shot(team, seq, ok, start=(95.0, 34.0), xg=None, match="m1"):
    return Event(match, team, seq, SHOT, start, None, ok, xg)


def test_event_invariants():
    with pytest.raises(ValueError):
        Event("m", "a", 0, MOVE, (1.0, 1.0), None, True)
    with pytest.raises(ValueError):
        Event("m", "a", 0, SHOT, (1.0, 1.0), None, True, shot_xg=1.5)
    with pytest.raises(ValueError):
        Event("m", "a", 0, "throw_in", (1.0, 1.0), None, True)


def test_parse_neutral_csv_row():
    text = CSV_HEADER + "\nm1,team_a,3,shot,95.0,34.0,,,1,0.25\n"
    result = parse_events(text, "neutral_csv")
    [event] = result.events
    assert event.kind == SHOT and event.success is True
    assert event.shot_xg == 0.25 and event.end is None
    assert event.seq == 3


def test_parse_neutral_csv_unknown_kind_skipped():
    text = CSV_HEADER + "\nm1,a,1,throw_in,5,5,6,6,1,\nm1,a,2,move_attempt,5,5,6,6,1,\n"
    result = parse_events(text, "neutral_csv")
    assert len(result.events) == 1
    assert result.skipped == {"throw_in": 1}
    assert result.n_skipped == 1


def test_parse_neutral_csv_truncated_record_errors_with_index():
    text = CSV_HEADER + "\nm1,a,1,move_attempt,5,5,6,6,1,\nm1,a,2,move_attempt,5,5\n"
    with pytest.raises(ParseError) as err:
        parse_events(text, "neutral_csv")
    assert err.value.index == 2


def test_parse_rejects_out_of_bounds_coordinates():
    text = CSV_HEADER + "\nm1,a,1,move_attempt,5,5,200,5,1,\n"
    with pytest.raises(ParseError):
        parse_events(text, "neutral_csv")


def test_parse_neutral_csv_bad_header():
    with pytest.raises(ParseError):
        parse_events("a,b,c\n1,2,3\n", "neutral_csv")


def test_statsbomb_coordinates_rescale_to_metres():
    records = [
        {"index": 1, "type": {"name": "Pass"}, "team": {"id": 7},
         "location": [120, 80], "pass": {"end_location": [60, 40]}},
    ]
    result = parse_events(json.dumps(records), "statsbomb_open", match_id="42")
    [event] = result.events
    assert event.start == (105.0, 68.0)
    assert event.end == (52.5, 34.0)
    assert event.match_id == "42" and event.team_id == "7"
    assert event.success is True


def test_statsbomb_event_mapping():
    records = [
        {"index": 1, "type": {"name": "Pass"}, "team": {"id": 1},
         "location": [60, 40], "pass": {"end_location": [80, 40], "outcome": {"name": "Incomplete"}}},
        {"index": 2, "type": {"name": "Carry"}, "team": {"id": 1},
         "location": [80, 40], "carry": {"end_location": [90, 40]}},
        {"index": 3, "type": {"name": "Dribble"}, "team": {"id": 1},
         "location": [90, 40], "dribble": {"outcome": {"name": "Complete"}}},
        {"index": 4, "type": {"name": "Shot"}, "team": {"id": 1},
         "location": [110, 40], "shot": {"statsbomb_xg": 0.31, "outcome": {"name": "Goal"}}},
        {"index": 5, "type": {"name": "Pressure"}, "team": {"id": 2}, "location": [50, 40]},
        {"index": 6, "type": {"name": "Shot"}, "team": {"id": 1},
         "location": [108, 40],
         "shot": {"statsbomb_xg": 0.76, "outcome": {"name": "Saved"}, "type": {"name": "Penalty"}}},
    ]
    result = parse_events(json.dumps(records), "statsbomb_open")
    kinds = [(e.kind, e.success) for e in result.events]
    assert kinds == [(MOVE, False), (MOVE, True), (MOVE, True), (SHOT, True)]
    assert result.events[3].shot_xg == 0.31
    assert result.skipped == {"Pressure": 1, "penalty_shot": 1}


def test_statsbomb_rejects_non_array_documents():
    with pytest.raises(ParseError):
        parse_events('{"events": []}', "statsbomb_open")
    with pytest.raises(ParseError):
        parse_events("[1, 2]", "statsbomb_open")


def test_statsbomb_can_keep_penalties():
    records = [
        {"index": 1, "type": {"name": "Shot"}, "team": {"id": 1},
         "location": [108, 40], "shot": {"outcome": {"name": "Saved"}, "type": {"name": "Penalty"}}},
    ]
    result = parse_events(json.dumps(records), "statsbomb_open", exclude_penalties=False)
    assert len(result.events) == 1


def test_segment_single_possession_ending_in_goal():
    events = [move("a", 1, True), move("a", 2, True), shot("a", 3, True)]
    [p] = segment_possessions(events)
    assert p.terminal == GOAL and len(p.events) == 3


def test_segment_rebound_recovery_starts_new_possession():
    events = [move("a", 1, True), shot("a", 2, False), move("a", 3, True)]
    first, second = segment_possessions(events)
    assert first.terminal == NO_GOAL and len(first.events) == 2
    assert second.terminal == LOSS and len(second.events) == 1


def test_segment_failed_move_then_other_team():
    events = [move("a", 1, False), move("b", 2, True)]
    first, second = segment_possessions(events)
    assert (first.team_id, first.terminal) == ("a", LOSS)
    assert (second.team_id, second.terminal) == ("b", LOSS)


def test_segment_splits_on_match_change():
    events = [move("a", 9, True, match="m1"), move("a", 1, True, match="m2")]
    parts = segment_possessions(events)
    assert len(parts) == 2 and all(p.terminal == LOSS for p in parts)


def test_segment_empty_input():
    assert segment_possessions([]) == []


def test_event_count_conservation():
    events = [move("a", 1, True), shot("a", 2, False), move("b", 3, False), move("a", 4, True)]
    possessions = segment_possessions(events)
    assert sum(len(p.events) for p in possessions) == len(events)


@given(st.lists(st.tuples(st.sampled_from(["a", "b"]), st.sampled_from([MOVE, SHOT]), st.booleans()), max_size=40))
def test_terminal_is_a_function_of_the_last_event(rows):
    events = []
    for i, (team, kind, ok) in enumerate(rows):
        events.append(move(team, i, ok) if kind == MOVE else shot(team, i, ok))
    for possession in segment_possessions(events):
        last = possession.events[-1]
        if last.kind == SHOT:
            assert possession.terminal == (GOAL if last.success else NO_GOAL)
        else:
            assert possession.terminal == LOSS


def test_start_state_counts():
    spec = GridSpec()
    events = [move("a", 1, False, start=(40.0, 30.0)), move("a", 2, False, start=(40.0, 30.0))]
    possessions = segment_possessions(events)
    assert start_state_counts(possessions, spec) == {0: 2}
    assert sum(start_state_counts(possessions, spec).values()) == len(possessions)


def test_start_frequencies_recovered_at_20k_possessions():
    from shotmdp import manual_model

    spec = GridSpec(columns=2, rows=1)
    model = manual_model(
        spec,
        policy={1: {"shoot": 0.2, "moves": {2: 0.8}}, 2: {"shoot": 0.5, "moves": {1: 0.5}}},
        move_success={1: {2: 0.75}, 2: {1: 0.8}},
        goal_prob={1: 0.1, 2: 0.3},
        start_counts={1: 0.7, 2: 0.3},
    )
    possessions = sample_possessions(model, 20_000, seed=5)
    counts = start_state_counts(possessions, model.spec)
    assert abs(counts[1] / 20_000 - 0.7) <= 0.02
    assert abs(counts[2] / 20_000 - 0.3) <= 0.02


def test_neutral_json_round_trip():
    events = [move("a", 1, True), shot("a", 2, True, xg=0.123456789), move("b", 3, False)]
    text = events_to_neutral_json(events)
    parsed = parse_events(text, "neutral_json")
    assert parsed.events == events


def test_neutral_csv_round_trip():
    events = [move("a", 1, True, start=(52.5, 1.0 / 3.0)), shot("a", 2, False, xg=0.05)]
    text = events_to_neutral_csv(events)
    parsed = parse_events(text, "neutral_csv")
    assert parsed.events == events


def test_flatten_preserves_order():
    events = [move("a", 1, True), shot("a", 2, True)]
    possessions = segment_possessions(events)
    assert flatten(possessions) == events
