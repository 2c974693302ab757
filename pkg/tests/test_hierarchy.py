from fractions import Fraction as F

import pytest

from hiermodel.curvegraph import TightGeodesic
from hiermodel.errors import GeometryError, PreconditionViolated
from hiermodel.extreal import NEG_INF, POS_INF, Interval
from hiermodel.hierarchy import (WHOLE_LINE, Brick3D, MarkedUnion, VertAnnulus, annulus_components,
                                 assign_intervals, brick_decomposition, buffer_gaps, build_hierarchy,
                                 critical_levels, direct_subordinates, expanding_connectable, front_curves,
                                 horizontal_surfaces, is_connectable)
from hiermodel.surfaces import Slope

from conftest import random_farey_hierarchies
from oracles import partition_problems


def iv(a, b):
    return Interval.of(a, b)


def geo(sys, X, *curves):
    ents = tuple((c,) for c in curves)
    return TightGeodesic(X, ents, ents[0], ents[-1])


def spans(annuli):
    return [(a.lo, a.hi) for a in annuli]


def test_buffered_rule_on_finite_interval(torus):
    B = Brick3D(torus.whole, iv(0, 7), 1)
    g = geo(torus, torus.whole, *[Slope.parse(s) for s in ("0/1", "1/1", "1/2", "1/3")])
    got = spans(assign_intervals(g, B))
    assert got == [(0, 1), (2, 3), (4, 5), (6, 7)]
    gaps = [(x.lo, x.hi) for x in buffer_gaps(assign_intervals(g, B), B)]
    assert gaps == [(1, 2), (3, 4), (5, 6)]


def test_buffered_rule_half_infinite(torus):
    B = Brick3D(torus.whole, iv(3, POS_INF), 1)
    g = geo(torus, torus.whole, *[Slope.parse(s) for s in ("0/1", "1/1", "1/2")])
    assert spans(assign_intervals(g, B)) == [(3, 4), (5, 6), (7, POS_INF)]
    B = Brick3D(torus.whole, WHOLE_LINE, 0)
    assert spans(assign_intervals(g, B)) == [(NEG_INF, 1), (2, 3), (4, POS_INF)]


def test_abutting_rule(s05):
    top = Brick3D(s05.whole, WHOLE_LINE, 0)
    g = geo(s05, s05.whole, 0, 2, 3)
    assert spans(assign_intervals(g, top)) == [(NEG_INF, 1), (1, 2), (2, POS_INF)]
    X = Brick3D(s05.whole, iv(0, 3), 1)
    assert spans(assign_intervals(g, X)) == [(0, 1), (1, 2), (2, 3)]
    X = Brick3D(s05.whole, iv(NEG_INF, 5), 1)
    assert spans(assign_intervals(g, X)) == [(NEG_INF, 3), (3, 4), (4, 5)]


def test_length_zero_geodesic_spans_brick(torus):
    B = Brick3D(torus.whole, iv(F(1, 3), 2), 1)
    g = geo(torus, torus.whole, Slope(0, 1))
    assert spans(assign_intervals(g, B)) == [(F(1, 3), 2)]


def test_decomposition_torus_example(torus):
    ann = [VertAnnulus(Slope(0, 1), iv(NEG_INF, 1)), VertAnnulus(Slope(1, 2), iv(2, 3)),
           VertAnnulus(Slope(2, 5), iv(4, POS_INF))]
    top = Brick3D(torus.whole, WHOLE_LINE, 0)
    bricks = brick_decomposition(ann, top, torus)
    assert len(bricks) == 5
    whole = [b for b in bricks if b.base.key == "S"]
    assert sorted((b.lo, b.hi) for b in whole) == [(1, 2), (3, 4)]
    assert sorted(b.base.xi for b in bricks) == [0, 0, 0, 1, 1]


def test_decomposition_single_annulus(sphere):
    l = Slope(1, 2)
    top = Brick3D(sphere.whole, WHOLE_LINE, 0)
    bricks = brick_decomposition([VertAnnulus(l, iv(0, 1))], top, sphere)
    regions = sorted((str(b.base), b.lo, b.hi) for b in bricks)
    assert len(bricks) == 4  # l separates the four-holed sphere into two pairs of pants
    assert [(b.lo, b.hi) for b in bricks if b.base.key == "S"] == [(NEG_INF, 0), (1, POS_INF)]
    assert all(b.interval == iv(0, 1) for b in bricks if b.base.key != "S")
    assert regions


def test_decomposition_single_annulus_torus(torus):
    l = Slope(1, 2)
    top = Brick3D(torus.whole, WHOLE_LINE, 0)
    bricks = brick_decomposition([VertAnnulus(l, iv(0, 1))], top, torus)
    got = sorted((str(b.base), b.lo, b.hi) for b in bricks)
    assert got == sorted([("S-1/2", 0, 1), ("S_1,1", NEG_INF, 0), ("S_1,1", 1, POS_INF)])


def test_decomposition_empty_and_overlap(torus):
    top = Brick3D(torus.whole, WHOLE_LINE, 0)
    assert brick_decomposition([], top, torus) == [top]
    bad = [VertAnnulus(Slope(0, 1), iv(0, 2)), VertAnnulus(Slope(1, 0), iv(1, 3))]
    with pytest.raises(GeometryError):
        brick_decomposition(bad, top, torus)


def test_decomposition_is_maximal_and_covering(s05_h):
    """Exhaustive check on the final decomposition: fronts change exactly where the cut changes."""
    sys = s05_h.system
    H = s05_h
    levels = critical_levels(H.annuli)
    samples = [levels[0] - 1] + [(a + b) / 2 for a, b in zip(levels, levels[1:])] + [levels[-1] + 1]
    for t in samples:
        here = [B for B in H.final_bricks if B.lo < t < B.hi]
        want = sorted(X.key for X in horizontal_surfaces(H.annuli, t, sys))
        assert sorted(B.base.key for B in here) == want
    # maximality: a brick is never followed by another brick with the same base
    for A in H.final_bricks:
        for B in H.final_bricks:
            assert not (A.base.key == B.base.key and A.hi == B.lo)


def test_connectable_examples(torus, s05):
    ann = (VertAnnulus(Slope(0, 1), iv(NEG_INF, 1)), VertAnnulus(Slope(1, 2), iv(2, 3)),
           VertAnnulus(Slope(2, 5), iv(4, POS_INF)))
    m = MarkedUnion(ann, (Slope(0, 1),), (Slope(2, 5),))
    assert is_connectable(Brick3D(torus.whole, iv(1, 2)), m, torus)
    assert is_connectable(Brick3D(torus.whole, WHOLE_LINE), m, torus)
    bare = MarkedUnion((VertAnnulus(2, iv(0, 1)),), (), ())
    assert not is_connectable(Brick3D(s05.whole, iv(NEG_INF, 0)), bare, s05)
    assert front_curves(Brick3D(s05.whole, iv(NEG_INF, 0)), "+", bare, s05) == (2,)


def test_torus_hierarchy(torus_h):
    H = torus_h
    assert len(H.stages) == 1 and H.stages[0].final
    assert [e[0] for e in H.stages[0].geodesics[0].entries] == [Slope(0, 1), Slope(1, 2), Slope(2, 5)]
    assert sorted(spans(H.annuli)) == [(NEG_INF, 1), (2, 3), (4, POS_INF)]
    assert len(H.final_bricks) == 5


def test_length_zero_hierarchy(torus, s05):
    H = build_hierarchy([Slope(0, 1)], [Slope(0, 1)], torus)
    assert len(H.annuli) == 1 and H.annuli[0].interval == WHOLE_LINE
    H = build_hierarchy([0, 1], [0, 1], s05)
    assert all(a.interval == WHOLE_LINE for a in H.stages[0].annuli[0])


def test_s05_two_stages(s05_h):
    H = s05_h
    assert len(H.stages) == 2
    assert H.stages[0].geodesics[0].length == 3
    assert all(B.xi == 1 for B in H.stages[1].connectable)
    assert H.stages[1].final


def test_expanding_connectable(torus_h, s05_h):
    for H in (torus_h, s05_h):
        for st in H.stages:
            for B in st.connectable:
                assert expanding_connectable(B, H) == B
    buf = next(b for b in torus_h.final_bricks if b.base.key == "S")
    assert expanding_connectable(buf, torus_h) == torus_h.top
    for st in s05_h.stages:
        for B in st.bricks:
            C = expanding_connectable(B, s05_h)
            assert C.base.key == B.base.key and C.interval.contains(B.interval)


def test_direct_subordinates(s05_h):
    H = s05_h
    for B in H.stages[1].connectable:
        f, b = direct_subordinates(B, H)
        assert f == H.top and b == H.top
        # terminal data of the geodesic in B is what the front of B meets at the lower stage
        g = H.geodesic_of(B)
        assert g.terminal_marking == front_curves(B, "+", H.marked(0), H.system)
        assert g.initial_marking == front_curves(B, "-", H.marked(0), H.system)
    with pytest.raises(PreconditionViolated):
        direct_subordinates(H.top, H)


def test_interval_cover_for_every_processed_brick(s05_h, torus_h):
    for H in [s05_h, torus_h] + random_farey_hierarchies(10, seed=3):
        for st in H.stages:
            for B, grp in zip(st.connectable, st.annuli):
                pieces = sorted({(a.lo, a.hi) for a in grp}) + [(x.lo, x.hi) for x in buffer_gaps(grp, B)]
                assert partition_problems((B.lo, B.hi), pieces) == []


def test_stage_monotonicity(s05_h):
    H = s05_h
    sys = H.system
    for i in range(len(H.stages) - 1):
        lower, upper = H.annuli_upto(i), H.annuli_upto(i + 1)
        for t in critical_levels(lower):
            # the section at a critical level of stage i is cut further, never un-cut
            cut_lo = {a.base for a in lower if a.interval.contains_point(t)}
            cut_hi = {a.base for a in upper if a.interval.contains_point(t)}
            assert cut_lo <= cut_hi
            assert horizontal_surfaces(upper, t, sys)
        assert set(lower) <= set(upper)


def test_brick_complexities(s05_h):
    H = s05_h
    for st in H.stages:
        for B in st.bricks:
            assert 0 <= B.xi <= H.system.surface.xi
    assert all(B.xi <= 1 for B in H.final_bricks)


def test_build_determinism(s05, torus):
    assert build_hierarchy([0, 1], [4, 5], s05, seed=11) == build_hierarchy([0, 1], [4, 5], s05, seed=11)
    a = build_hierarchy([Slope(3, 7)], [Slope(-2, 9)], torus, seed=5)
    assert a == build_hierarchy([Slope(3, 7)], [Slope(-2, 9)], torus, seed=5)


def test_components_single_per_curve(s05_h):
    comps = annulus_components(s05_h.annuli)
    curves = [c for c, _ in comps]
    assert len(curves) == len(set(curves))
