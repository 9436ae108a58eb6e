#!/usr/bin/env python3
"""Generate the bundled StatsBomb-open-data-layout sample competition.

Two synthetic teams play four matches; possessions are drawn from known
ground-truth models and written in the public open-data per-match event
file layout (competitions.json, matches/<comp>/<season>.json,
events/<match_id>.json). The sandbox has no network access, so this
stands in for downloading a real competition; the parser consumes the
identical layout either way.

Run from the repository root:  python3 scripts/make_statsbomb_sample.py
"""

from __future__ import annotations

import json
import sys
import uuid
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from shotmdp import GridSpec, random_ground_truth, sample_possessions  # noqa: E402
from shotmdp.events import MOVE, Possession  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "data" / "statsbomb_open_sample"

COMPETITION_ID = 999
SEASON_ID = 3000
TEAMS = {
    "201": "Harbor City",
    "202": "Northfield Rovers",
}
MATCH_IDS = [7001, 7002, 7003, 7004]
POSSESSIONS_PER_TEAM_PER_MATCH = 80

_SB_X = 120.0 / 105.0
_SB_Y = 80.0 / 68.0


def sb_location(point) -> list[float]:
    return [round(point[0] * _SB_X, 3), round(point[1] * _SB_Y, 3)]


def base_event(index: int, possession: int, team_id: str, minute: int) -> dict:
    return {
        "id": str(uuid.UUID(int=index + possession * 100_000)),
        "index": index,
        "period": 1 if minute < 45 else 2,
        "timestamp": f"00:{minute % 45:02d}:{(index * 7) % 60:02d}.000",
        "minute": minute,
        "second": (index * 7) % 60,
        "possession": possession,
        "possession_team": {"id": int(team_id), "name": TEAMS[team_id]},
        "play_pattern": {"id": 1, "name": "Regular Play"},
        "team": {"id": int(team_id), "name": TEAMS[team_id]},
        "player": {"id": 9000 + (index % 11), "name": f"Player {index % 11 + 1}"},
    }


def possession_to_sb_events(
    possession: Possession,
    index: int,
    possession_no: int,
    minute: int,
    rng: np.random.Generator,
) -> tuple[list[dict], int]:
    out = []
    for event in possession.events:
        record = base_event(index, possession_no, possession.team_id, minute)
        if event.kind == MOVE:
            moved_by_carry = event.success and rng.random() < 0.3
            if moved_by_carry:
                record["type"] = {"id": 43, "name": "Carry"}
                record["location"] = sb_location(event.start)
                record["carry"] = {"end_location": sb_location(event.end)}
            else:
                record["type"] = {"id": 30, "name": "Pass"}
                record["location"] = sb_location(event.start)
                body = {
                    "end_location": sb_location(event.end),
                    "length": round(float(np.hypot(event.end[0] - event.start[0],
                                                   event.end[1] - event.start[1])), 2),
                }
                if not event.success:
                    body["outcome"] = {"id": 9, "name": "Incomplete"}
                record["pass"] = body
        else:
            record["type"] = {"id": 16, "name": "Shot"}
            record["location"] = sb_location(event.start)
            record["shot"] = {
                "statsbomb_xg": round(float(event.shot_xg), 6),
                "outcome": {"id": 97, "name": "Goal"} if event.success
                else {"id": 100, "name": "Saved"},
                "type": {"id": 87, "name": "Open Play"},
            }
        out.append(record)
        index += 1
        if rng.random() < 0.25:
            noise = base_event(index, possession_no, possession.team_id, minute)
            kind = rng.choice(["Ball Receipt*", "Pressure", "Ball Recovery"])
            noise["type"] = {"id": 42, "name": str(kind)}
            noise["location"] = sb_location(event.start)
            out.append(noise)
            index += 1
    return out, index


def build_match(match_id: int, possessions_by_team: dict[str, list[Possession]], seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    events: list[dict] = []
    index = 1
    lineup = base_event(index, 1, "201", 0)
    lineup["type"] = {"id": 35, "name": "Starting XI"}
    lineup.pop("player")
    events.append(lineup)
    index += 1

    queues = {team: list(reversed(ps)) for team, ps in possessions_by_team.items()}
    possession_no = 1
    minute = 0
    while any(queues.values()):
        for team in TEAMS:
            if not queues[team]:
                continue
            possession = queues[team].pop()
            chunk, index = possession_to_sb_events(possession, index, possession_no, minute, rng)
            events.extend(chunk)
            possession_no += 1
            minute = min(minute + 1, 90)

    if match_id == MATCH_IDS[0]:
        penalty = base_event(index, possession_no, "201", 45)
        penalty["type"] = {"id": 16, "name": "Shot"}
        penalty["location"] = sb_location((94.0, 34.0))
        penalty["shot"] = {
            "statsbomb_xg": 0.76,
            "outcome": {"id": 100, "name": "Saved"},
            "type": {"id": 88, "name": "Penalty"},
        }
        events.append(penalty)
    return events


def main() -> None:
    spec = GridSpec()
    models = {team: random_ground_truth(spec, seed=int(team), team_id=team) for team in TEAMS}

    per_match_events = {}
    goals = {m: {t: 0 for t in TEAMS} for m in MATCH_IDS}
    for i, match_id in enumerate(MATCH_IDS):
        possessions_by_team = {}
        for j, team in enumerate(TEAMS):
            possessions = sample_possessions(
                models[team], POSSESSIONS_PER_TEAM_PER_MATCH,
                seed=1000 * (i + 1) + j, match_id=str(match_id),
            )
            possessions_by_team[team] = possessions
            goals[match_id][team] = sum(1 for p in possessions if p.terminal == "goal")
        per_match_events[match_id] = build_match(match_id, possessions_by_team, seed=match_id)

    events_dir = OUT / "events"
    events_dir.mkdir(parents=True, exist_ok=True)
    for match_id, events in per_match_events.items():
        (events_dir / f"{match_id}.json").write_text(
            json.dumps(events, indent=2) + "\n", encoding="utf-8"
        )

    competitions = [{
        "competition_id": COMPETITION_ID,
        "season_id": SEASON_ID,
        "country_name": "Synthetica",
        "competition_name": "Sample League",
        "competition_gender": "male",
        "season_name": "2025/2026",
        "match_updated": "2026-06-01T00:00:00.000",
        "match_available": "2026-06-01T00:00:00.000",
    }]
    (OUT / "competitions.json").write_text(json.dumps(competitions, indent=2) + "\n", encoding="utf-8")

    matches_dir = OUT / "matches" / str(COMPETITION_ID)
    matches_dir.mkdir(parents=True, exist_ok=True)
    team_ids = list(TEAMS)
    matches = [
        {
            "match_id": match_id,
            "match_date": f"2026-0{1 + i // 2}-1{i % 2}",
            "kick_off": "15:00:00.000",
            "competition": {
                "competition_id": COMPETITION_ID,
                "country_name": "Synthetica",
                "competition_name": "Sample League",
            },
            "season": {"season_id": SEASON_ID, "season_name": "2025/2026"},
            "home_team": {"home_team_id": int(team_ids[i % 2]), "home_team_name": TEAMS[team_ids[i % 2]]},
            "away_team": {"away_team_id": int(team_ids[(i + 1) % 2]), "away_team_name": TEAMS[team_ids[(i + 1) % 2]]},
            "home_score": goals[match_id][team_ids[i % 2]],
            "away_score": goals[match_id][team_ids[(i + 1) % 2]],
            "match_status": "available",
        }
        for i, match_id in enumerate(MATCH_IDS)
    ]
    (matches_dir / f"{SEASON_ID}.json").write_text(json.dumps(matches, indent=2) + "\n", encoding="utf-8")

    total = sum(len(v) for v in per_match_events.values())
    print(f"wrote {len(MATCH_IDS)} matches, {total} events under {OUT}")


if __name__ == "__main__":
    main()
