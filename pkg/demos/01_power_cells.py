"""Power cells of a handful of sensors with unequal radii.

A big disk pushes the boundary with a small neighbour towards the small one,
and a small disk sitting deep inside a large one has no cell at all.  Writes
``power_cells.svg`` next to the script.
"""

from pathlib import Path

import numpy as np

from sarasim.coverage import classify
from sarasim.geometry import Circle, Rect, diagram_from_arrays
from sarasim.harness.output import render_svg

aoi = Rect(0, 0, 30, 30)
pos = np.array([[8.0, 8.0], [20.0, 9.0], [15.0, 20.0], [25.0, 24.0],
                [9.0, 9.5]])  # the last is small and sits deep inside the first
radii = np.array([7.0, 6.0, 7.0, 4.0, 1.0])

dia = diagram_from_arrays(pos, radii, aoi)
for i, (p, r) in enumerate(zip(pos, radii)):
    if dia.is_null(i):
        print(f"sensor {i} r={r:.0f}: null cell")
        continue
    cell = dia.cells[i].shape
    cls = classify(Circle.at(*p, r), cell)
    print(f"sensor {i} r={r:.0f}: {len(cell.arrays()[0])} vertices, area {cell.area:6.1f} m2, "
          f"{cls.value.replace('_', ' ')}")

out = Path(__file__).with_name("power_cells.svg")
render_svg(pos, radii, np.ones(len(pos), bool), aoi, out, scale=16)
print(f"wrote {out}")
