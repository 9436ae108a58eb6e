"""Pitch partition walk-through: zones, indexing, and the named regions.

The state space is one zone for the whole defensive half plus a 22 x 17
grid over the offensive half: 375 field states. Three named masks pick
out the penalty box, the long-distance shooting band in front of it, and
the wide flank channels.
"""

from pathlib import Path

from shotmdp import GridSpec, cell_bounds, default_masks, zone_center, zone_of
from shotmdp.render import heatmap_svg

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

spec = GridSpec()
print(f"grid: {spec.columns} x {spec.rows} offensive cells + defensive zone "
      f"= {spec.n_states} field states")
print(f"cell size: {spec.cell_length:.2f} m x {spec.cell_width:.2f} m\n")

# Zone lookup is just geometry: defensive half collapses to zone 0,
# offensive points index into their cell.
for point in [(30.0, 34.0), (52.5, 0.0), (80.0, 34.0), (104.0, 34.0), (105.0, 68.0)]:
    zone = zone_of(point, spec)
    where = "defensive half" if zone == 0 else f"cell bounds {cell_bounds(zone, spec)}"
    print(f"  point {point} -> zone {zone:3d}  ({where})")

masks = default_masks(spec)
print("\nnamed regions (cell counts):")
for name, mask in masks.items():
    print(f"  {name:13s} {len(mask):3d} cells")

print("\npenalty box and long distance never overlap:",
      masks["penalty_box"].members.isdisjoint(masks["long_distance"].members))

# Render the three regions as one heatmap: 1 = box, 2 = long distance, 3 = flank.
values = {z: 1.0 for z in masks["penalty_box"].members}
values |= {z: 2.0 for z in masks["long_distance"].members}
values |= {z: 3.0 for z in masks["flank"].members}
svg_path = OUT / "regions.svg"
svg_path.write_text(heatmap_svg(spec, values, mode="sequential", title="named regions"))
print(f"\nwrote {svg_path}")

# Sample long-distance centers, to eyeball the band in front of the box.
some = sorted(masks["long_distance"].members)[:5]
print("first long-distance cell centers:", [tuple(round(c, 1) for c in zone_center(z, spec)) for z in some])
