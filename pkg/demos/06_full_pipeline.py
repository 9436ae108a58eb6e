"""The whole pipeline on the bundled open-data-layout sample.

Runs ingest -> build -> analyze -> whatif -> validate through the CLI
against data/statsbomb_open_sample (four matches, two teams, written in
the public per-match event file layout), then shows how to serve the
results.
"""

import json
from pathlib import Path

from shotmdp.cli import main

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data" / "statsbomb_open_sample" / "events"
OUT = Path(__file__).parent / "output" / "pipeline"

steps = [
    ["ingest", "--input", str(DATA), "--input-format", "statsbomb_open", "--out", str(OUT)],
    ["build", "--out", str(OUT)],
    ["analyze", "--out", str(OUT)],
    ["whatif", "--out", str(OUT), "--mode", "uniform"],
    ["whatif", "--out", str(OUT), "--mode", "targeted"],
    ["validate", "--out", str(OUT)],
]
for argv in steps:
    code = main(argv)
    assert code == 0, f"step {argv[0]} failed"

stats = json.loads((OUT / "ingest_stats.json").read_text())
print(f"\ningested {stats['events']} events / {stats['possessions']} possessions "
      f"for teams {stats['teams']}")

validate = json.loads((OUT / "validate_report.json").read_text())
for team, entry in validate["teams"].items():
    print(f"team {team}: expected goals {entry['expected_goals']} vs actual {entry['actual_goals']}, "
          f"inert fraction {entry['inert_fraction']:.2f}")

uniform = json.loads((OUT / "whatif" / "uniform_sweep.json").read_text())
print("\nuniform long-distance sweep (delta goals per season):")
for report in uniform["reports"]:
    print(f"  team {report['team_id']} x={report['x']:+.2f}: {report['delta_goals']:+.4f}")

print(f"""
artifacts under {OUT}/
serve them interactively with:
    shotmdp serve --models {OUT}/models --static frontend/dist
then open http://127.0.0.1:8008/ui/ for the what-if explorer.
""")
