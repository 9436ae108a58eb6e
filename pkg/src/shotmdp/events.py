"""Event-stream ingestion: neutral schema, provider conversion, possession segmentation.

Three input formats are supported. ``neutral_csv`` and ``neutral_json``
carry the neutral schema directly (coordinates in metres on a 105 x 68
pitch, attacking +x). ``statsbomb_open`` reads the public open-data
per-match event file layout; only on-ball actions (Pass, Carry, Dribble,
Shot) are consumed and coordinates are rescaled from the provider's
120 x 80 frame.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .grid import GOAL, LOSS, NO_GOAL, GridSpec, zone_of

MOVE = "move_attempt"
SHOT = "shot"

PITCH_LENGTH_M = 105.0
PITCH_WIDTH_M = 68.0

NEUTRAL_CSV_HEADER = [
    "match_id", "team_id", "seq", "kind",
    "start_x", "start_y", "end_x", "end_y", "success", "shot_xg",
]

# StatsBomb open-data pitch frame.
_SB_LENGTH = 120.0
_SB_WIDTH = 80.0


class ParseError(ValueError):
    """Malformed input record, carrying the offending record index."""

    def __init__(self, message: str, index: int):
        super().__init__(f"record {index}: {message}")
        self.index = index


@dataclass(frozen=True)
class Event:
    """One on-ball action: a move attempt or a shot."""

    match_id: str
    team_id: str
    seq: int
    kind: str
    start: tuple[float, float]
    end: tuple[float, float] | None
    success: bool
    shot_xg: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in (MOVE, SHOT):
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind == MOVE and self.end is None:
            raise ValueError("move_attempt requires an observed end location")
        if self.shot_xg is not None and not (0.0 <= self.shot_xg <= 1.0):
            raise ValueError(f"shot_xg {self.shot_xg} outside [0, 1]")


@dataclass(frozen=True)
class Possession:
    """Contiguous same-team event run ending in a goal, a miss, or a loss."""

    team_id: str
    events: tuple[Event, ...]
    terminal: str

    def __post_init__(self) -> None:
        if not self.events:
            raise ValueError("possession needs at least one event")
        if any(e.team_id != self.team_id for e in self.events):
            raise ValueError("possession events must share one team_id")
        if self.terminal not in (GOAL, NO_GOAL, LOSS):
            raise ValueError(f"unknown terminal {self.terminal!r}")


@dataclass
class ParseResult:
    events: list[Event] = field(default_factory=list)
    skipped: Counter = field(default_factory=Counter)

    @property
    def n_skipped(self) -> int:
        return sum(self.skipped.values())


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _check_point(x: float, y: float, index: int) -> tuple[float, float]:
    if math.isnan(x) or math.isnan(y) or not (0.0 <= x <= PITCH_LENGTH_M and 0.0 <= y <= PITCH_WIDTH_M):
        raise ParseError(f"coordinate ({x}, {y}) outside the 105 x 68 pitch", index)
    return (x, y)


def _parse_bool(raw: str, index: int) -> bool:
    v = raw.strip().lower()
    if v in ("1", "true"):
        return True
    if v in ("0", "false"):
        return False
    raise ParseError(f"bad success value {raw!r}", index)


def parse_events(
    source,
    format: str,
    *,
    match_id: str | None = None,
    exclude_penalties: bool = True,
) -> ParseResult:
    """Parse a byte/str/file source in the declared format into neutral events.

    Unknown event kinds are skipped and counted in the result; malformed
    records raise :class:`ParseError` with the record index. For
    ``statsbomb_open`` the file does not name its match, so pass
    ``match_id`` (the CLI passes the file stem).
    """
    if format == "neutral_csv":
        return _parse_neutral_csv(_as_text(source))
    if format == "neutral_json":
        return _parse_neutral_json(_as_text(source))
    if format == "statsbomb_open":
        return _parse_statsbomb(_as_text(source), match_id or "statsbomb", exclude_penalties)
    raise ValueError(f"unknown input format {format!r}")


def _parse_neutral_csv(text: str) -> ParseResult:
    result = ParseResult()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input", 0) from None
    if [h.strip() for h in header] != NEUTRAL_CSV_HEADER:
        raise ParseError(f"bad header {header!r}", 0)
    for i, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(NEUTRAL_CSV_HEADER):
            raise ParseError(f"expected {len(NEUTRAL_CSV_HEADER)} fields, got {len(row)}", i)
        rec = dict(zip(NEUTRAL_CSV_HEADER, row))
        kind = rec["kind"].strip()
        if kind not in (MOVE, SHOT):
            result.skipped[kind] += 1
            continue
        try:
            start = _check_point(float(rec["start_x"]), float(rec["start_y"]), i)
            end = None
            if rec["end_x"].strip() or rec["end_y"].strip():
                end = _check_point(float(rec["end_x"]), float(rec["end_y"]), i)
            xg = float(rec["shot_xg"]) if rec["shot_xg"].strip() else None
            event = Event(
                match_id=rec["match_id"],
                team_id=rec["team_id"],
                seq=int(rec["seq"]),
                kind=kind,
                start=start,
                end=end,
                success=_parse_bool(rec["success"], i),
                shot_xg=xg,
            )
        except ParseError:
            raise
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), i) from None
        result.events.append(event)
    return result


def _parse_neutral_json(text: str) -> ParseResult:
    result = ParseResult()
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", 0) from None
    if not isinstance(records, list):
        raise ParseError("expected a JSON array of event objects", 0)
    for i, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise ParseError("expected an event object", i)
        kind = rec.get("kind")
        if kind not in (MOVE, SHOT):
            result.skipped[str(kind)] += 1
            continue
        try:
            start = _check_point(float(rec["start_x"]), float(rec["start_y"]), i)
            end = None
            if rec.get("end_x") is not None and rec.get("end_y") is not None:
                end = _check_point(float(rec["end_x"]), float(rec["end_y"]), i)
            xg = rec.get("shot_xg")
            event = Event(
                match_id=str(rec["match_id"]),
                team_id=str(rec["team_id"]),
                seq=int(rec["seq"]),
                kind=kind,
                start=start,
                end=end,
                success=bool(rec["success"]),
                shot_xg=float(xg) if xg is not None else None,
            )
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(repr(exc), i) from None
        result.events.append(event)
    return result


def _sb_point(loc, index: int) -> tuple[float, float]:
    if not isinstance(loc, (list, tuple)) or len(loc) < 2:
        raise ParseError(f"bad location {loc!r}", index)
    x = float(loc[0]) * PITCH_LENGTH_M / _SB_LENGTH
    y = float(loc[1]) * PITCH_WIDTH_M / _SB_WIDTH
    # Providers occasionally emit points a shade outside the frame.
    return (min(max(x, 0.0), PITCH_LENGTH_M), min(max(y, 0.0), PITCH_WIDTH_M))


def _parse_statsbomb(text: str, match_id: str, exclude_penalties: bool) -> ParseResult:
    result = ParseResult()
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", 0) from None
    if not isinstance(records, list):
        raise ParseError("expected a JSON array of event objects", 0)
    for i, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise ParseError("expected an event object", i)
        type_name = (rec.get("type") or {}).get("name")
        if type_name not in ("Pass", "Carry", "Dribble", "Shot"):
            result.skipped[str(type_name)] += 1
            continue
        loc = rec.get("location")
        if loc is None:
            result.skipped["missing_location"] += 1
            continue
        team_id = str((rec.get("team") or {}).get("id", "unknown"))
        seq = int(rec.get("index", i))
        start = _sb_point(loc, i)
        if type_name == "Shot":
            shot = rec.get("shot") or {}
            if exclude_penalties and (shot.get("type") or {}).get("name") == "Penalty":
                result.skipped["penalty_shot"] += 1
                continue
            outcome = (shot.get("outcome") or {}).get("name")
            xg = shot.get("statsbomb_xg")
            event = Event(
                match_id=match_id,
                team_id=team_id,
                seq=seq,
                kind=SHOT,
                start=start,
                end=None,
                success=outcome == "Goal",
                shot_xg=float(xg) if xg is not None else None,
            )
        elif type_name == "Pass":
            body = rec.get("pass") or {}
            end = _sb_point(body.get("end_location"), i)
            event = Event(
                match_id=match_id, team_id=team_id, seq=seq, kind=MOVE,
                start=start, end=end, success="outcome" not in body,
            )
        elif type_name == "Carry":
            body = rec.get("carry") or {}
            end = _sb_point(body.get("end_location"), i)
            event = Event(
                match_id=match_id, team_id=team_id, seq=seq, kind=MOVE,
                start=start, end=end, success=True,
            )
        else:  # Dribble: on-the-spot take-on, end at the start location
            outcome = ((rec.get("dribble") or {}).get("outcome") or {}).get("name")
            event = Event(
                match_id=match_id, team_id=team_id, seq=seq, kind=MOVE,
                start=start, end=start, success=outcome == "Complete",
            )
        result.events.append(event)
    return result


def segment_possessions(events: list[Event]) -> list[Possession]:
    """Split an ordered event stream into possessions.

    A possession is a maximal same-team, same-match run; any shot ends it
    (goal / no_goal from the shot outcome), a failed move ends it with a
    loss, and a team or match change closes the previous run as a loss.
    """
    possessions: list[Possession] = []
    run: list[Event] = []

    def flush(terminal: str) -> None:
        if run:
            possessions.append(Possession(run[0].team_id, tuple(run), terminal))
            run.clear()

    for event in events:
        if run and (event.team_id != run[0].team_id or event.match_id != run[0].match_id):
            flush(LOSS)
        run.append(event)
        if event.kind == SHOT:
            flush(GOAL if event.success else NO_GOAL)
        elif not event.success:
            flush(LOSS)
    flush(LOSS)
    return possessions


def start_state_counts(possessions: list[Possession], spec: GridSpec) -> dict[int, int]:
    """How many possessions begin in each zone."""
    counts: Counter = Counter()
    for possession in possessions:
        counts[zone_of(possession.events[0].start, spec)] += 1
    return dict(counts)


def _event_record(event: Event) -> dict:
    return {
        "match_id": event.match_id,
        "team_id": event.team_id,
        "seq": event.seq,
        "kind": event.kind,
        "start_x": event.start[0],
        "start_y": event.start[1],
        "end_x": None if event.end is None else event.end[0],
        "end_y": None if event.end is None else event.end[1],
        "success": event.success,
        "shot_xg": event.shot_xg,
    }


def events_to_neutral_json(events: list[Event]) -> str:
    return json.dumps([_event_record(e) for e in events], indent=2) + "\n"


def events_to_neutral_csv(events: list[Event]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(NEUTRAL_CSV_HEADER)
    for e in events:
        writer.writerow([
            e.match_id, e.team_id, e.seq, e.kind,
            repr(e.start[0]), repr(e.start[1]),
            "" if e.end is None else repr(e.end[0]),
            "" if e.end is None else repr(e.end[1]),
            "1" if e.success else "0",
            "" if e.shot_xg is None else repr(e.shot_xg),
        ])
    return out.getvalue()


def flatten(possessions: list[Possession]) -> list[Event]:
    """All events of a possession list, in order."""
    return [e for p in possessions for e in p.events]
