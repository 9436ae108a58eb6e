"""Absorbing Markov decision models of soccer possessions.

Learn one model per team from event-stream data, then answer exact
decision questions on it: shoot-vs-move scenario probabilities,
better-shot reachability, and counterfactual season goal totals under
modified shooting policies.
"""

from .grid import (
    GOAL,
    LOSS,
    NO_GOAL,
    CoordinateError,
    GridSpec,
    RegionMask,
    all_offensive_mask,
    cell_bounds,
    default_masks,
    zone_center,
    zone_of,
)
from .events import (
    Event,
    ParseError,
    ParseResult,
    Possession,
    events_to_neutral_csv,
    events_to_neutral_json,
    parse_events,
    segment_possessions,
    start_state_counts,
)
from .intent import IntentAttribution, build_destination_histogram, resolve_intent
from .model import (
    RawCounts,
    ShotQuality,
    TeamModel,
    ValidationReport,
    collect_counts,
    combine_counts,
    fit_from_counts,
    fit_team_model,
    model_from_json,
    model_to_json,
    models_equal,
    shot_quality_stats,
    validate_model,
)
from .chain import (
    ChainSolveError,
    EmpiricalValues,
    InducedChain,
    empirical_values,
    expected_goals,
    expected_shots,
    expected_visits,
    fundamental_matrix,
    induced_chain,
    scoring_value,
)
from .scenarios import (
    BETTER_SHOT_EVER,
    DIRECT_SHOT,
    FLANK_FIRST_THEN_SHOOT,
    K_MOVES_THEN_SHOOT,
    ScenarioResult,
    batch_heatmap,
    eval_better_shot_ever,
    eval_direct_shot,
    eval_k_moves_then_shoot,
)
from .whatif import (
    BaselineValidation,
    PolicyAdjustment,
    SeasonReport,
    adjust_policy,
    adjusted_xg,
    league_relative_error,
    season_whatif,
    sweep_whatif,
    targeted_zone_selection,
    validate_baseline,
)
from .synthetic import (
    SimulationEstimate,
    TerminalSummary,
    manual_model,
    random_ground_truth,
    random_model,
    sample_possessions,
    simulate_expected_goals,
    simulate_terminals,
    toy_model,
)

__version__ = "0.1.0"
