"""Five-punctured sphere from the bundled catalog: two stages, occupation covers, sections.

    python3 demos/s05_hierarchy.py [outdir]
"""

import random
import sys
from pathlib import Path

from hiermodel.hierarchy import build_hierarchy
from hiermodel.ledger import default_ledger
from hiermodel.model import (assemble, default_specs, query_bricks, section_diameter, sectional_decomposition,
                             thin_filter)
from hiermodel.render import render_svg
from hiermodel.surfaces import CatalogSystem
from hiermodel.verify import cover_problems, random_queries, single_brick_occupation

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

S = CatalogSystem.bundled()
lab = S.label
H = build_hierarchy([0, 1], [4, 5], S)
for st in H.stages:
    print(f"stage {st.index}: {len(st.bricks)} bricks, {len(st.connectable)} split")
    for B, g in zip(st.connectable, st.geodesics):
        path = " -> ".join("{" + ",".join(lab(c) for c in e) + "}" for e in g.entries)
        print(f"  {B.base} x {B.interval}: {path}")
print(len(H.final_bricks), "final bricks")

L = default_ledger(S.surface)
rng = random.Random(0)
sizes = []
for Q in random_queries(H, 30, rng):
    occ = single_brick_occupation(H, Q)
    assert not cover_problems(occ, S)
    sizes.append(occ.size)
print(f"occupation: 30 queries, largest cover {max(sizes)}, bound n0 = {L.n0}")

M = assemble(H, default_specs(H))
view, _ = thin_filter(M, 100)
for Q in query_bricks(view):
    if Q.base.xi >= 1:
        sd = sectional_decomposition(Q, 1, view)
        diams = [section_diameter(view, D) for D in sd.subbricks]
        print(f"sections of {Q}: indices {sd.indices}, diameters {[str(d) for d in diams]} < {L.delta2}")

(out / "s05_bricks.svg").write_text(render_svg(H))
print("wrote", out / "s05_bricks.svg")
