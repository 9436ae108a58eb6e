import pytest

from shotmdp import GridSpec, manual_model, toy_model


@pytest.fixture
def toy():
    return toy_model()


@pytest.fixture
def three_action_model():
    """One zone with the three-action policy row {shoot .2, A .3, B .5}."""
    spec = GridSpec(columns=3, rows=1)
    return manual_model(
        spec,
        policy={
            1: {"shoot": 0.2, "moves": {2: 0.3, 3: 0.5}},
            2: {"shoot": 1.0},
            3: {"shoot": 1.0},
        },
        move_success={1: {2: 0.7, 3: 0.6}},
        goal_prob={1: 0.1, 2: 0.2, 3: 0.15},
        start_counts={1: 1},
        team_id="three-action",
    )
