"""Intended-destination attribution for failed move actions.

Event data records where a failed move ended up (interception point,
out-of-bounds spot), not where it was aimed. Transition estimation needs
the intended destination, so each failed move is resolved to a
probability vector over zones. Three modes: trust the observed end
location, use the start zone's successful-destination frequencies as a
prior, or blend the two.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .events import MOVE, Event
from .grid import GridSpec, zone_of

OBSERVED_END = "observed_end"
DESTINATION_PRIOR = "destination_prior"
BLENDED = "blended"
MODES = (OBSERVED_END, DESTINATION_PRIOR, BLENDED)


@dataclass(frozen=True)
class IntentAttribution:
    """Probability mass over intended destination zones for one event."""

    weights: dict[int, float]
    fallback: bool = False


def build_destination_histogram(events: list[Event], spec: GridSpec) -> dict[int, Counter]:
    """Per start-zone counts of successful-move destinations."""
    hist: dict[int, Counter] = defaultdict(Counter)
    for event in events:
        if event.kind == MOVE and event.success:
            hist[zone_of(event.start, spec)][zone_of(event.end, spec)] += 1
    return dict(hist)


def resolve_intent(
    event: Event,
    context: dict[int, Counter],
    spec: GridSpec,
    mode: str = BLENDED,
    lam: float = 0.5,
) -> IntentAttribution:
    """Attribute an intended destination to a failed move.

    ``observed_end`` puts all mass on the recorded end zone;
    ``destination_prior`` distributes it like the start zone's successful
    moves; ``blended`` mixes the two with weight ``lam`` on the observed
    end. A prior with no successful moves from the start zone falls back
    to the observed end and flags the event.
    """
    if event.kind != MOVE or event.success:
        raise ValueError("intent resolution applies to failed move attempts only")
    if mode not in MODES:
        raise ValueError(f"unknown intent mode {mode!r}")
    observed = {zone_of(event.end, spec): 1.0}
    if mode == OBSERVED_END:
        return IntentAttribution(observed)

    prior_counts = context.get(zone_of(event.start, spec))
    if not prior_counts:
        return IntentAttribution(observed, fallback=True)
    total = sum(prior_counts.values())
    prior = {zone: count / total for zone, count in prior_counts.items()}
    if mode == DESTINATION_PRIOR:
        return IntentAttribution(prior)

    weights = {zone: (1.0 - lam) * mass for zone, mass in prior.items()}
    for zone, mass in observed.items():
        weights[zone] = weights.get(zone, 0.0) + lam * mass
    return IntentAttribution(weights)
