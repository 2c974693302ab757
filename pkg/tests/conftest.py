import random

import pytest

from hiermodel.hierarchy import build_hierarchy
from hiermodel.surfaces import CatalogSystem, FareySphere, FareyTorus, Slope


@pytest.fixture(scope="session")
def torus():
    return FareyTorus()


@pytest.fixture(scope="session")
def sphere():
    return FareySphere()


@pytest.fixture(scope="session")
def s05():
    return CatalogSystem.bundled()


@pytest.fixture(scope="session")
def torus_h(torus):
    return build_hierarchy([Slope(0, 1)], [Slope(2, 5)], torus)


@pytest.fixture(scope="session")
def s05_h(s05):
    return build_hierarchy([0, 1], [4, 5], s05)


def random_slope(rng, qmax=30):
    from math import gcd

    while True:
        q = rng.randint(0, qmax)
        p = rng.randint(-qmax, qmax)
        if q == 0:
            return Slope(1, 0)
        if gcd(p, q) == 1:
            return Slope(p, q)


def random_farey_hierarchies(n, seed=0, qmax=30):
    """``n`` hierarchies over random slope markings on both ξ = 1 backends."""
    rng = random.Random(seed)
    systems = [FareyTorus(), FareySphere()]
    out = []
    for i in range(n):
        sysm = systems[i % 2]
        u, v = random_slope(rng, qmax), random_slope(rng, qmax)
        out.append(build_hierarchy([u], [v], sysm, seed=rng.getrandbits(64)))
    return out


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion at the end of the run

import time

ACCEPTANCE = {}
_START = [time.perf_counter()]


def pytest_sessionstart(session):
    _START[0] = time.perf_counter()


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    total = time.perf_counter() - _START[0]
    tr = terminalreporter
    tr.write_sep("=", "acceptance criteria")
    for n in range(1, 10):
        if n not in ACCEPTANCE:
            tr.write_line(f"criterion {n}: NOT RUN")
            continue
        ok, detail = ACCEPTANCE[n]
        if n == 9:
            ok = ok and total < 300
            detail = f"{detail}; suite wall time {total:.1f}s (limit 300s)"
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
