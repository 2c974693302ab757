import random

import pytest

from hiermodel.curvegraph import (all_geodesics, distance, farey_distance, farey_geodesic, farey_geodesics,
                                  is_tight, tight_geodesic)
from hiermodel.errors import NotFoundInCatalog, Unreachable
from hiermodel.surfaces import Slope

from oracles import FareyOracle


@pytest.fixture(scope="module")
def oracle():
    return FareyOracle(12)


def S(x):
    return Slope.parse(x)


def test_distance_examples(torus):
    assert distance("1/3", "1/3", torus) == 0
    assert distance("0/1", "1/2", torus) == 1
    assert distance("0/1", "2/5", torus) == 2


def test_oracle_stable_under_larger_vertex_set(oracle):
    # enlarging the bounded vertex set must not shorten any distance
    big = FareyOracle(20)
    vs = oracle.vertices[::3]
    for u in vs:
        for v in vs:
            assert oracle.distance(u, v) == big.distance(u, v)


def test_distance_matches_bfs_small(oracle):
    vs = oracle.vertices
    for u in vs:
        for v in vs:
            assert farey_distance(Slope(*u), Slope(*v)) == oracle.distance(u, v), (u, v)


def test_geodesic_enumeration_matches(oracle):
    rng = random.Random(5)
    vs = oracle.vertices
    for _ in range(150):
        u, v = rng.choice(vs), rng.choice(vs)
        got = [[(s.numerator, s.denominator) for s in p] for p in farey_geodesics(Slope(*u), Slope(*v))]
        assert sorted(got) == sorted(oracle.geodesics(u, v))
        least = farey_geodesic(Slope(*u), Slope(*v))
        assert [(s.numerator, s.denominator) for s in least] == oracle.geodesics(u, v)[0]


def test_is_tight_examples(torus):
    assert is_tight([S("0/1"), S("1/2"), S("2/5")], torus)
    assert not is_tight([S("0/1"), S("1/2"), S("1/0")], torus)
    assert is_tight([S("3/7")], torus)


def test_tight_geodesic_examples(torus):
    g = tight_geodesic([S("0/1")], [S("0/1")], None, torus)
    assert g.length == 0 and g.vertices() == [S("0/1")]
    g = tight_geodesic([S("0/1")], [S("2/5")], None, torus)
    assert g.vertices() == [S("0/1"), S("1/2"), S("2/5")]


def test_tight_geodesic_catalog(s05):
    g = tight_geodesic([0], [2], None, s05)
    assert g.length == 1
    g0 = tight_geodesic([0, 1], [4, 5], None, s05)
    assert g0.length == 3
    assert is_tight(g0.entries, s05)
    assert distance(0, 4, s05) == 3


def test_tight_entries_are_fill_boundaries(s05):
    g0 = tight_geodesic([0, 1], [4, 5], None, s05)
    for i in range(1, len(g0.entries) - 1):
        prev, nxt = g0.entries[i - 1][0], g0.entries[i + 1][0]
        assert tuple(g0.entries[i]) == s05.fill_boundary(prev, nxt)


def test_transverse_curve_meets_a_neighbour(s05):
    # any curve crossing an interior entry crosses one of its neighbours
    g0 = tight_geodesic([0, 1], [4, 5], None, s05)
    ents = g0.entries
    for i in range(1, len(ents) - 1):
        for c in range(s05.catalog.n):
            if any(s05.intersection(c, v) for v in ents[i]):
                assert any(s05.intersection(c, v) for v in ents[i - 1] + ents[i + 1])


def test_determinism(torus, s05):
    for seed in (0, 1, 99):
        a = tight_geodesic([0, 1], [4, 5], None, s05, seed)
        b = tight_geodesic([0, 1], [4, 5], None, s05, seed)
        assert a == b
    assert tight_geodesic([S("0/1")], [S("5/13")], None, torus, 4) == \
        tight_geodesic([S("0/1")], [S("5/13")], None, torus, 4)


def test_catalog_geodesics_layered(s05):
    paths = all_geodesics(0, 4, s05)
    assert paths and all(len(p) == 4 for p in paths)


def test_unreachable_and_missing(s05):
    X = s05.components(s05.whole, [0])
    big = max(X, key=lambda Y: Y.xi)
    inside = s05.curves_in(big)
    assert inside
    with pytest.raises(Exception):
        distance(0, inside[0], s05, big)  # 0 is peripheral in S - c0
    from hiermodel.surfaces import CatalogSystem, CurveCatalog

    d = s05.catalog.to_json()
    # drop every fill entry: no tightening possible for the distance-3 pair
    d["fills"] = {}
    bare = CatalogSystem(CurveCatalog.from_json(d))
    with pytest.raises(NotFoundInCatalog):
        tight_geodesic([0, 1], [4, 5], None, bare)
    assert Unreachable.__mro__[1].__name__ == "HierError"
