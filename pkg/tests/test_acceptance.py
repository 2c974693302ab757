"""The nine acceptance criteria, each at its stated tolerance and time budget.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import random
import subprocess
import sys
import time
from dataclasses import replace
from fractions import Fraction as F

import pytest

from hiermodel import curvegraph
from hiermodel.curvegraph import farey_distance, is_tight, tight_geodesic
from hiermodel.extreal import Interval
from hiermodel.hierarchy import Brick3D, VertAnnulus, assign_intervals, buffer_gaps, build_hierarchy
from hiermodel.ledger import buffer_width, default_ledger, occupation_bound
from hiermodel.model import (MeridianCoeff, assemble, default_specs, query_bricks, section_diameter,
                             sectional_decomposition, thin_filter, tube_metric)
from hiermodel.curvegraph import TightGeodesic
from hiermodel.surfaces import CatalogSystem, FareySphere, FareyTorus, Slope, Surface
from hiermodel.verify import (check_non_parallel, check_structure_sigma, cover_problems, random_queries,
                              single_brick_occupation)

from conftest import random_farey_hierarchies, record
from oracles import FareyOracle, euler_cover_problems, partition_problems, tube_boundary_torus


@pytest.fixture(scope="module")
def oracle50():
    return FareyOracle(50)


@pytest.fixture(scope="module")
def farey100():
    return random_farey_hierarchies(100, seed=2024)


@pytest.fixture(scope="module")
def s05_runs():
    sysm = CatalogSystem.bundled()
    return [build_hierarchy([0, 1], [4, 5], sysm, seed=s) for s in range(5)]


def _slope(v):
    return Slope(*v)


def test_criterion_1_farey_oracle(oracle50):
    t0 = time.perf_counter()
    curvegraph._DESCENT.clear()
    vs = oracle50.vertices
    mism = []
    for u in vs:
        du = oracle50.distances_from(u)
        su = _slope(u)
        for j, v in enumerate(vs):
            if farey_distance(su, _slope(v)) != du[j]:
                mism.append((u, v))
    dt = time.perf_counter() - t0
    ok = not mism and dt < 60
    record(1, ok, f"{len(vs)} slopes, {len(vs) ** 2} pairs, {len(mism)} mismatches, {dt:.1f}s (limit 60s)")
    assert not mism, mism[:5]
    assert dt < 60


def test_criterion_2_tightness(oracle50):
    t0 = time.perf_counter()
    rng = random.Random(77)
    vs = oracle50.vertices
    bad = []
    for n in range(1000):
        sysm = FareyTorus() if n % 2 == 0 else FareySphere()
        u, v = rng.choice(vs), rng.choice(vs)
        g = tight_geodesic([_slope(u)], [_slope(v)], None, sysm, seed=rng.getrandbits(64))
        if not is_tight(g.entries, sysm) or g.length != oracle50.distance(u, v):
            bad.append((sysm.name, u, v))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 30
    record(2, ok, f"1000 tight geodesics on torus/sphere, {len(bad)} failures, {dt:.1f}s (limit 30s)")
    assert not bad, bad[:5]
    assert dt < 30


def test_criterion_3_structure_checkers(farey100, s05_runs):
    t0 = time.perf_counter()
    fails = []
    for H in farey100 + s05_runs[:1]:
        for rep in (check_non_parallel(H), check_structure_sigma(H)):
            if not rep.ok:
                fails.append(rep.violations)
    # localisation: an injected parallel pair and an injected duplicate are both reported
    H = s05_runs[0]
    c = H.annuli[0].base
    extra = VertAnnulus(c, Interval.of(100, 101), 9)
    rep = check_non_parallel(list(H.annuli) + [extra])
    loc1 = not rep.ok and rep.violations[0]["curve"] == H.system.format_curve(c)
    st = H.stages[1]
    dup = replace(st, connectable=st.connectable + st.connectable[:1])
    rep2 = check_structure_sigma(replace(H, stages=(H.stages[0], dup)))
    loc2 = not rep2.ok and rep2.violations[0]["first"]["brick"] == rep2.violations[0]["second"]["brick"]
    dt = time.perf_counter() - t0
    ok = not fails and loc1 and loc2 and dt < 60
    record(3, ok, f"{len(farey100)} random + bundled hierarchies, {len(fails)} failures, "
                  f"defects localised: {loc1 and loc2}, {dt:.1f}s (limit 60s)")
    assert not fails and loc1 and loc2 and dt < 60


def test_criterion_4_occupation(farey100, s05_runs):
    t0 = time.perf_counter()
    assert occupation_bound(Surface(2, 0)) == 36
    rng = random.Random(4)
    probs = []
    worst = 0
    hs = farey100[:20] + s05_runs
    for H in hs:
        n0 = default_ledger(H.system.surface).n0
        for Q in random_queries(H, 50, rng):
            occ = single_brick_occupation(H, Q)
            worst = max(worst, occ.size)
            p = cover_problems(occ, H.system) + euler_cover_problems(Q, occ.cover, H.system)
            if occ.size > n0:
                p.append("bound")
            if p:
                probs.append((str(Q), p))
    dt = time.perf_counter() - t0
    ok = not probs and dt < 60
    record(4, ok, f"{len(hs)} hierarchies x 50 queries, {len(probs)} bad covers, max |cover| {worst} "
                  f"(n0 = 9 on S_0,5; 36 for closed genus 2), {dt:.1f}s (limit 60s)")
    assert not probs, probs[:3]
    assert dt < 60


def test_criterion_5_meridian(farey100, s05_runs):
    bad = 0
    count = 0
    for H in farey100 + s05_runs[:1]:
        M = assemble(H, default_specs(H))
        for T in M.tubes:
            if T.omega.infinite:
                continue
            count += 1
            x = T.omega.im * M.epsilon1
            if not (x.denominator == 1 and x >= 1):
                bad += 1
    torus = FareyTorus()
    H = build_hierarchy([Slope(0, 1)], [Slope(2, 5)], torus)
    M = assemble(H, default_specs(H))
    half = Slope(1, 2)
    T = next(t for t in M.tubes if t.curve == half)
    # hand count: two caps plus one vertical annulus per appearance of 1/2 in an adjacent brick's frontier
    hand = 2 + sum(B.base.frontier.count(half) for B in H.final_bricks if T.interval.contains(B.interval))
    ok = bad == 0 and T.omega == MeridianCoeff(F(0), F(hand)) and hand == 4
    record(5, ok, f"{count} finite tubes, {bad} non-integral; omega(1/2) = {T.omega.im}i, hand count {hand}")
    assert ok


def test_criterion_6_intervals(farey100, s05_runs):
    probs = []
    n = 0
    for H in farey100 + s05_runs:
        for st in H.stages:
            for B, grp in zip(st.connectable, st.annuli):
                n += 1
                pieces = sorted({(a.lo, a.hi) for a in grp}) + [(g.lo, g.hi) for g in buffer_gaps(grp, B)]
                p = partition_problems((B.lo, B.hi), pieces)
                if p:
                    probs.append((str(B), p))
    torus = FareyTorus()
    B = Brick3D(torus.whole, Interval.of(0, 7), 1)
    ents = tuple((Slope.parse(s),) for s in ("0/1", "1/1", "1/2", "1/3"))
    got = [(a.lo, a.hi) for a in assign_intervals(TightGeodesic(torus.whole, ents, ents[0], ents[-1]), B)]
    tau = buffer_width(0, 7, 3)
    ok = not probs and tau == 1 and got == [(0, 1), (2, 3), (4, 5), (6, 7)]
    record(6, ok, f"{n} processed bricks partitioned exactly, {len(probs)} failures; tau on [0,7], m=3 is {tau}")
    assert ok, probs[:3]


def test_criterion_7_tube_metric():
    t0 = time.perf_counter()
    rng = random.Random(8)
    worst = 0.0
    for n in range(100):
        im = F(1 + n) if n < 50 else F(rng.randint(100, 10000), 100)
        re = F(rng.randint(-500, 500), 100)
        w = complex(float(re), float(im))
        p = tube_metric(MeridianCoeff(re, im))
        L, ratio = tube_boundary_torus(p.core_length, p.radius, p.twist)
        worst = max(worst, abs(L - 1), abs(ratio.real - w.real), abs(ratio.imag - w.imag))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-9 and dt < 10
    record(7, ok, f"100 omegas with 1 <= Im <= 100, worst residual {worst:.2e} (tol 1e-9), {dt:.1f}s (limit 10s)")
    assert ok


def test_criterion_8_sections(s05_runs):
    torus = FareyTorus()
    hs = [build_hierarchy([Slope(0, 1)], [Slope(2, 5)], torus), s05_runs[0]]
    bad, worst, ndec = [], {}, 0
    for H in hs:
        M = assemble(H, default_specs(H))
        d2 = default_ledger(H.system.surface).delta2
        for k in list(range(1, 11)) + [100]:
            view, _ = thin_filter(M, k)
            for Q in query_bricks(view):
                if Q.base.xi < 1:
                    continue
                sd = sectional_decomposition(Q, 1, view)
                ndec += 1
                if any(not (1 <= g < 2) for g in sd.gaps):
                    bad.append(("gap", str(Q), sd.gaps))
                for D in sd.subbricks:
                    d = section_diameter(view, D)
                    worst[H.system.name] = max(worst.get(H.system.name, 0), d)
                    if not d < d2:
                        bad.append(("diam", str(D), d, d2))
    detail = ", ".join(f"{k}: max diam {v}" for k, v in sorted(worst.items()))
    record(8, not bad, f"{ndec} decompositions, d0 = 1; {detail} (delta2 = 18 torus, 82 S_0,5); "
                       f"{len(bad)} violations")
    assert not bad, bad[:3]


def test_criterion_9_determinism(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        p = tmp_path / name
        r = subprocess.run([sys.executable, "-m", "hiermodel.cli", "build", "--backend", "s05", "--minus", "0,1",
                            "--plus", "4,5", "--seed", "123", "-o", str(p)], capture_output=True)
        assert r.returncode == 0, r.stderr
        outs.append(p.read_bytes())
    t = []
    for name in ("c.json", "d.json"):
        p = tmp_path / name
        subprocess.run([sys.executable, "-m", "hiermodel.cli", "build", "--backend", "torus", "--minus", "3/7",
                        "--plus=-11/19", "--seed", "5", "-o", str(p)], check=True)
        t.append(p.read_bytes())
    ok = outs[0] == outs[1] and t[0] == t[1]
    record(9, ok, f"hier build twice: byte-identical = {ok}")
    assert ok
