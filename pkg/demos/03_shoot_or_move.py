"""Shoot now or move first? Exact scenario probabilities on a small chain.

The two-zone toy chain is solvable by hand, so every number here can be
checked on paper: zone 1 shoots 20% of the time for an xG of 0.1 or
moves to zone 2 (75% success), which shoots half the time for 0.3.
"""

from pathlib import Path

from shotmdp import (
    GridSpec,
    all_offensive_mask,
    batch_heatmap,
    eval_k_moves_then_shoot,
    random_ground_truth,
    toy_model,
)
from shotmdp.grid import default_masks
from shotmdp.render import heatmap_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

toy = toy_model()
for k in (1, 2):
    result = eval_k_moves_then_shoot(toy, 1, k)
    verdict = "moving first is better" if result.delta > 0 else "shooting now is better"
    print(f"zone 1, exactly {k} move(s) then shoot: p = {result.probability:.4f} "
          f"vs direct {result.direct_xg:.4f} -> delta {result.delta:+.4f} ({verdict})")

# One forced move from zone 1 can only go to zone 2: 0.75 * 0.3 = 0.225.
# Two moves bounce back: 0.75 * 0.8 * 0.1 = 0.06, worse than shooting.

print("\nsame question across a full-pitch synthetic team:")
team = random_ground_truth(GridSpec(), seed=201, team_id="demo")
region = default_masks(team.spec)["long_distance"]
results = batch_heatmap(team, "k_moves_then_shoot", region, k=1)
shoot_better = [r.zone for r in results if r.delta < 0]
move_better = [r.zone for r in results if r.delta > 0]
print(f"  long-distance zones where shooting wins: {len(shoot_better)}")
print(f"  long-distance zones where moving wins:   {len(move_better)}")

full = batch_heatmap(team, "k_moves_then_shoot", all_offensive_mask(team.spec), k=1)
svg = OUT / "shoot_vs_move_k1.svg"
svg.write_text(heatmap_svg(team.spec, {r.zone: r.delta for r in full},
                           mode="diverging", title="move-then-shoot minus direct (red = shoot)"))
print(f"  wrote {svg}")

# Constraining the first move to the flanks lowers the payoff of moving.
flank = default_masks(team.spec)["flank"]
flanked = batch_heatmap(team, "flank_first_then_shoot", region, k=2, first_move_mask=flank)
plain = batch_heatmap(team, "k_moves_then_shoot", region, k=2)
worse = sum(1 for a, b in zip(flanked, plain) if a.probability < b.probability)
print(f"  zones where the flank-first constraint hurts: {worse}/{len(plain)}")
