"""How likely is a better shot later in the possession?

For each zone we ask: under the team's observed behavior, what is the
probability that the possession's eventual shot comes from a zone with a
strictly higher location xG than here? Low numbers mean "take the shot".
"""

from pathlib import Path

import numpy as np

from shotmdp import (
    GridSpec,
    all_offensive_mask,
    batch_heatmap,
    eval_better_shot_ever,
    random_ground_truth,
    simulate_terminals,
    toy_model,
)
from shotmdp.render import heatmap_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

toy = toy_model()
result = eval_better_shot_ever(toy, 1)
print(f"toy zone 1 (xG 0.1): P(better shot ever) = {result.probability:.6f}")
print("hand check: the only better zone is 2, so x = 0.3/0.76 =", round(0.3 / 0.76, 6))

# Monte Carlo agrees: simulate a million possessions and count where the
# shot was actually taken.
n = 10**6
summary = simulate_terminals(toy, 1, n, seed=17)
print(f"simulated {n:,} possessions: better-shot frequency {summary.shot_zone_counts[2] / n:.6f}\n")

team = random_ground_truth(GridSpec(), seed=202, team_id="demo")
results = batch_heatmap(team, "better_shot_ever", all_offensive_mask(team.spec))
probs = np.array([r.probability for r in results])
print("full-pitch synthetic team:")
print(f"  median P(better shot) {np.median(probs):.3f}, "
      f"max {probs.max():.3f}, zones below 5%: {(probs < 0.05).sum()}")

svg = OUT / "better_shot.svg"
svg.write_text(heatmap_svg(team.spec, {r.zone: r.probability for r in results},
                           mode="sequential", title="P(better shot later in the possession)"))
print(f"  wrote {svg}")
