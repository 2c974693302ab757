"""Generate the bundled curve catalog for the five-punctured sphere.

This is a development tool; it needs ``curver`` (not a runtime dependency).
Curves are produced as images of the five "round" curves c0..c4 (c_k encloses
punctures k and k+1) under explicit mapping classes, so every catalog entry
comes with a curver certificate:

* intersection numbers are curver's geometric intersection numbers;
* the two end markings fill pairwise (so their distance is at least 3) and an
  explicit path of length 3 joins them;
* inside each four-holed sphere S - c, curves get Farey coordinates from their
  intersections with two reference curves; each Farey geodesic the hierarchy
  needs is realised curve by curve and its slopes are re-read from curver;
* fill entries come from ``fills_with`` and ``boundary_union``.

The script loops until the hierarchy built from the catalog only asks for
geodesics whose curves are already present, then writes the JSON.

    python3 tools/make_s05_catalog.py [output.json]
"""

import json
import sys
from pathlib import Path

import curver

from hiermodel.curvegraph import farey_distance, farey_geodesic
from hiermodel.hierarchy import (MarkedUnion, WHOLE_LINE, Brick3D, assign_intervals,
                                 brick_decomposition, front_curves, is_connectable)
from hiermodel.curvegraph import distance, tight_geodesic
from hiermodel.surfaces import CatalogSystem, CurveCatalog, Slope, Surface, validate_catalog

S = curver.load(0, 5)
ARCS = [S.arcs[f"s_{i}"] for i in range(5)]
ROUND = [a.boundary() for a in ARCS]
ID = S("")  # identity encoding

# the end markings: p- = {c0, c2}; p+ = h{c3, c1} with h = s_1.s_1 . S_3.S_2.S_2
W, V = "s_1.s_1", "S_3.S_2.S_2"
H_PLUS = S(W) * S(V)


class Pool:
    def __init__(self):
        self.curves = []      # curver curves
        self.key = {}         # tuple(curve) -> index
        self.labels = []
        self.prov = []        # (encoding, k): curve = encoding(c_k)

    def add(self, c, label, enc, k):
        t = tuple(c)
        if t in self.key:
            return self.key[t]
        self.key[t] = len(self.curves)
        self.curves.append(c)
        self.labels.append(label)
        self.prov.append((enc, k))
        return self.key[t]


def sides(c):
    """The 2-puncture side of curve c, from arc-crossing parities."""
    side, cur = [0], 0
    lab = {0: 0}
    for i in range(4):
        if c.intersection(ARCS[i]) % 2:
            cur ^= 1
        lab[i + 1] = cur
    a = sorted(k for k, v in lab.items() if v == 0)
    b = sorted(k for k, v in lab.items() if v == 1)
    return tuple(a) if len(a) == 2 else tuple(b)


class Host:
    """Farey coordinates on S - v for v = enc(c_j)."""

    def __init__(self, enc, j):
        self.enc = enc
        self.alpha = enc(ROUND[(j + 2) % 5])
        self.beta = enc(ROUND[(j + 3) % 5])
        half = S(f"s_{(j + 3) % 5}")
        self.delta = enc(half(ROUND[(j + 2) % 5]))
        self.Ta = self.alpha.encode_twist()
        self.Tb = self.beta.encode_twist()
        self.ref = self.Ta(self.beta)  # slope 1/2 by convention
        assert self.alpha.intersection(self.beta) == 2
        self.base = {(0, 1): self.alpha, (1, 0): self.beta}
        ds = self.slope(self.delta)
        self.base[(ds.numerator, ds.denominator)] = self.delta
        self.base_prov = {(0, 1): (enc, (j + 2) % 5), (1, 0): (enc, (j + 3) % 5),
                          (ds.numerator, ds.denominator): (enc * half, (j + 2) % 5)}
        sb = self.slope(self.Tb(self.alpha))
        assert sb.denominator == 1 and abs(sb.numerator) == 2
        self.sb = 1 if sb.numerator > 0 else -1

    def slope(self, g):
        p = g.intersection(self.alpha) // 2
        q = g.intersection(self.beta) // 2
        if p and q and abs(2 * p - q) != g.intersection(self.ref) // 2:
            p = -p
        if q == 0:
            return Slope(1, 0)
        return Slope.of(p, q)

    def curve_of(self, s: Slope):
        """Realise slope s by twisting a base curve; returns (curve, encoding of the twists)."""
        p, q = s.numerator, s.denominator
        steps = []  # encodings g with target = g(current)
        while (p, q) not in self.base and (p, q) != (0, 1) and (p, q) != (1, 0):
            if abs(p) >= abs(q):
                # p -> p - 2*sb*q*e for e = +-1:  target = Tb^e (new)
                e = 1 if (p > 0) == (q * self.sb > 0) else -1
                p, q = p - 2 * self.sb * q * e, q
                steps.append(self.Tb if e == 1 else self.Tb ** -1)
            else:
                e = 1 if (q > 0) == (p > 0) else -1
                p, q = p, q - 2 * p * e
                steps.append(self.Ta if e == 1 else self.Ta ** -1)
            if q < 0:
                p, q = -p, -q
        base = self.base[(p, q)]
        # target = steps[0](steps[1](...(base)))
        enc = ID
        for g in steps:
            enc = enc * g
        c = enc(base)
        got = self.slope(c)
        assert got == s, (got, s)
        return c, enc, self.base_prov[(p, q)]


def base_provenance(pool, c):
    return pool.prov[pool.key[tuple(c)]]


def build_catalog(pool):
    n = len(pool.curves)
    M = [[pool.curves[i].intersection(pool.curves[j]) for j in range(n)] for i in range(n)]
    two = [sides(c) for c in pool.curves]
    subs = [{"id": 0, "xi": 2, "curves": list(range(n)), "boundary": [], "punctures": [0, 1, 2, 3, 4],
             "label": "S"}]
    s04 = {}
    for i in range(n):
        inner = [j for j in range(n) if j != i and M[i][j] == 0]
        s04[i] = len(subs)
        rest = sorted(set(range(5)) - set(two[i]))
        subs.append({"id": len(subs), "xi": 1, "curves": inner, "boundary": [i], "punctures": rest,
                     "label": f"S-{pool.labels[i]}"})
        subs.append({"id": len(subs), "xi": 0, "curves": [], "boundary": [i], "punctures": list(two[i]),
                     "label": f"P({pool.labels[i]})"})
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] == 0:
                rest = sorted(set(range(5)) - set(two[i]) - set(two[j]))
                assert len(rest) == 1, (i, j, two[i], two[j])
                subs.append({"id": len(subs), "xi": 0, "curves": [], "boundary": [i, j], "punctures": rest,
                             "label": f"P({pool.labels[i]},{pool.labels[j]})"})
    fills = {}
    missing = 0
    for i in range(n):
        for j in range(i + 1, n):
            if M[i][j] == 0:
                continue
            u, w = pool.curves[i], pool.curves[j]
            if u.fills_with(w):
                fills[f"{i},{j}"] = 0
                continue
            bd = u.boundary_union(w).non_peripheral()
            comps = list(bd.components())
            assert len(comps) == 1, (i, j)
            k = pool.key.get(tuple(comps[0]))
            if k is None:
                missing += 1
                continue
            fills[f"{i},{j}"] = s04[k]
    data = {
        "surface": {"genus": 0, "punctures": 5},
        "curves": [{"id": i, "label": l} for i, l in enumerate(pool.labels)],
        "intersections": M,
        "subsurfaces": subs,
        "fills": fills,
    }
    return data, missing


def main(out):
    pool = Pool()
    c = ROUND
    a, a2, x1 = c[0], c[2], c[3]
    x2 = S(W)(c[0])
    b, b2 = H_PLUS(c[3]), H_PLUS(c[1])
    for cur, lab, enc, k in [(a, "c0", ID, 0), (a2, "c2", ID, 2), (x1, "c3", ID, 3),
                             (x2, "x", S(W), 0), (b, "b", H_PLUS, 3), (b2, "b'", H_PLUS, 1),
                             (c[1], "c1", ID, 1), (c[4], "c4", ID, 4)]:
        pool.add(cur, lab, enc, k)
    # certificate for the end markings
    for u in (a, a2):
        for w in (b, b2):
            assert u.fills_with(w)
    assert a.intersection(x1) == 0 and x1.intersection(x2) == 0 and x2.intersection(b) == 0
    assert b.intersection(b2) == 0 and a.intersection(a2) == 0

    for rnd in range(20):
        data, missing = build_catalog(pool)
        probs = validate_catalog(data)
        assert not probs, probs[:3]
        sysm = CatalogSystem(CurveCatalog.from_json(data, "s05_catalog"))
        pm, pp = (0, 1), (pool.key[tuple(b)], pool.key[tuple(b2)])
        g0 = tight_geodesic(pm, pp, sysm.whole, sysm)
        assert g0.length == 3, g0
        top = Brick3D(sysm.whole, WHOLE_LINE, 0, True, 0)
        ann = assign_intervals(g0, top, 0)
        marked = MarkedUnion(tuple(ann), pm, pp)
        bricks = brick_decomposition(ann, top, sysm, stage=1)
        added = 0
        for B in bricks:
            if B.xi != 1:
                continue
            host_curve = B.base.frontier[0]
            enc, j = pool.prov[host_curve]
            host = Host(enc, j)
            im = front_curves(B, "-", marked, sysm)
            tm = front_curves(B, "+", marked, sysm)
            best = None
            for u in im:
                for w in tm:
                    su, sw = host.slope(pool.curves[u]), host.slope(pool.curves[w])
                    d = farey_distance(su, sw)
                    if best is None or d < best[0]:
                        best = (d, su, sw)
            d, su, sw = best
            for s in farey_geodesic(su, sw)[1:-1]:
                g, tw, (benc, bk) = host.curve_of(s)
                if tuple(g) not in pool.key:
                    pool.add(g, f"{pool.labels[host_curve]}:{s}", tw * benc, bk)
                    added += 1
        if not added:
            break
        print(f"round {rnd}: added {added} curves, total {len(pool.curves)}", flush=True)
    data, missing = build_catalog(pool)
    # final certificate: catalog distances inside each split brick equal Farey distances
    sysm = CatalogSystem(CurveCatalog.from_json(data, "s05_catalog"))
    for i in range(len(pool.curves)):
        enc, j = pool.prov[i]
        assert tuple(enc(ROUND[j])) == tuple(pool.curves[i])
    print(f"{len(pool.curves)} curves, {len(data['subsurfaces'])} subsurfaces, "
          f"{len(data['fills'])} fills, {missing} pairs without catalogued fill boundary")
    Path(out).write_text(json.dumps(data, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else
         str(Path(__file__).resolve().parents[1] / "src" / "hiermodel" / "data" / "s05_catalog.json"))
