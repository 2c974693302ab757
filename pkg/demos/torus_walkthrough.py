"""Once-punctured torus, markings 0/1 and 2/5: hierarchy, model, thin parts, SVG.

    python3 demos/torus_walkthrough.py [outdir]
"""

import sys
from pathlib import Path

from hiermodel.hierarchy import build_hierarchy
from hiermodel.io import dumps, model_to_json, save_hierarchy
from hiermodel.model import assemble, default_specs, thin_filter
from hiermodel.render import render_svg
from hiermodel.surfaces import FareyTorus, Slope
from hiermodel.verify import check_non_parallel, check_structure_sigma

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

T = FareyTorus()
H = build_hierarchy([Slope(0, 1)], [Slope(2, 5)], T)
g0 = H.stages[0].geodesics[0]
print("top geodesic:", " -> ".join(str(e[0]) for e in g0.entries))
for a in H.annuli:
    print(f"  annulus over {a.base} on {a.interval}")
print("final bricks:")
for B in H.final_bricks:
    print(f"  {B.base} x {B.interval}")
print("checks:", check_non_parallel(H).status, check_structure_sigma(H).status)

M = assemble(H, default_specs(H))
for t in M.tubes:
    print(f"  tube {t.curve} {t.interval} {t.klass:22s} omega = {t.omega.to_json()}")
view, thin = thin_filter(M, 5)
print("k = 5 keeps", [str(M.tubes[i].curve) for i in view.kept])
for i, p in view.metrics.items():
    print(f"  tube {M.tubes[i].curve}: core length {p.core_length:.6f}, radius {p.radius:.6f}")

save_hierarchy(H, out / "torus_hierarchy.json")
(out / "torus_model.json").write_text(dumps(model_to_json(M, view)))
(out / "torus_bricks.svg").write_text(render_svg(H))
print("wrote", ", ".join(sorted(p.name for p in out.iterdir())))
