"""Independent reference computations used by the tests.

Nothing here imports the algorithms under test; the oracles work from first
principles (explicit graphs, brute-force enumeration, direct numerical
geometry) so agreement is evidence rather than tautology.
"""

from collections import deque
from fractions import Fraction
from itertools import combinations
from math import gcd

import mpmath


# ---------------------------------------------------------------------------
# Farey graph by brute force


def bounded_slopes(qmax: int):
    """Slopes p/q with 1 <= q <= qmax, |p| <= q, plus 1/0, as (p, q) pairs.

    Geodesics between two such slopes only use vertices of the triangles
    crossed by the hyperbolic geodesic joining them, and those all lie in this
    set, so BFS restricted to it gives true Farey distances.
    """
    out = [(1, 0)]
    for q in range(1, qmax + 1):
        for p in range(-q, q + 1):
            if gcd(p, q) == 1:
                out.append((p, q))
    return out


class FareyOracle:
    def __init__(self, qmax: int):
        self.vertices = bounded_slopes(qmax)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        self.adj = [[] for _ in range(n)]
        for i in range(n):
            p, q = self.vertices[i]
            for j in range(i + 1, n):
                r, s = self.vertices[j]
                if abs(p * s - q * r) == 1:
                    self.adj[i].append(j)
                    self.adj[j].append(i)
        self._dist = {}

    def distances_from(self, u):
        i = self.index[u]
        if i not in self._dist:
            d = [-1] * len(self.vertices)
            d[i] = 0
            dq = deque([i])
            while dq:
                a = dq.popleft()
                for b in self.adj[a]:
                    if d[b] < 0:
                        d[b] = d[a] + 1
                        dq.append(b)
            self._dist[i] = d
        return self._dist[i]

    def distance(self, u, v) -> int:
        return self.distances_from(u)[self.index[v]]

    def geodesics(self, u, v) -> list:
        """Every shortest vertex path from u to v."""
        du, dv = self.distances_from(u), self.distances_from(v)
        n = du[self.index[v]]
        out = []

        def rec(path):
            a = self.index[path[-1]]
            if len(path) == n + 1:
                out.append(list(path))
                return
            k = len(path)
            for b in self.adj[a]:
                if du[b] == k and dv[b] == n - k:
                    path.append(self.vertices[b])
                    rec(path)
                    path.pop()

        rec([u])
        return sorted(out, key=lambda p: [(q, s) for s, q in p])


# ---------------------------------------------------------------------------
# spacings


def all_spacings(lo: int, hi: int, d0: int) -> list:
    """All index sequences from lo to hi whose gaps lie in [d0, 2 d0)."""
    out = []

    def rec(seq):
        if seq[-1] == hi:
            out.append(list(seq))
            return
        for g in range(d0, 2 * d0):
            if seq[-1] + g <= hi:
                seq.append(seq[-1] + g)
                rec(seq)
                seq.pop()

    rec([lo])
    return out


def max_spacing_length(lo: int, hi: int, d0: int) -> int:
    return max(len(s) for s in all_spacings(lo, hi, d0))


# ---------------------------------------------------------------------------
# covers


def euler_cover_problems(query, cover, sys) -> list:
    """Check a cover by Euler characteristic conservation at generic levels.

    Pieces with disjoint interiors that decompose ``query^S x {t}`` have Euler
    characteristics summing to chi(query^S); this is checked at one interior
    point of every elementary interval of the cover's endpoints.
    """
    Q = query
    pts = sorted({x for B in cover for x in (B.interval.lo, B.interval.hi)} | {Q.interval.lo, Q.interval.hi})
    pts = [x for x in pts if Q.interval.lo <= x <= Q.interval.hi]
    probs = []
    for a, b in zip(pts, pts[1:]):
        if a == float("-inf") and b == float("inf"):
            t = Fraction(0)
        elif a == float("-inf"):
            t = Fraction(b) - 1
        elif b == float("inf"):
            t = Fraction(a) + 1
        else:
            t = (Fraction(a) + Fraction(b)) / 2
        here = [B for B in cover if B.interval.lo < t < B.interval.hi]
        s = sum(B.base.chi for B in here)
        if s != Q.base.chi:
            probs.append((t, s))
    for B in cover:
        if not (Q.interval.lo <= B.interval.lo and B.interval.hi <= Q.interval.hi):
            probs.append(("outside", str(B)))
    return probs


# ---------------------------------------------------------------------------
# interval partitions


def partition_problems(target, pieces) -> list:
    """Exact check that closed intervals ``pieces`` tile ``target`` (lo, hi pairs)."""
    ps = sorted(pieces)
    probs = []
    if not ps:
        return ["empty"]
    if ps[0][0] != target[0]:
        probs.append(("start", ps[0][0]))
    if ps[-1][1] != target[1]:
        probs.append(("end", ps[-1][1]))
    for (a, b), (c, d) in zip(ps, ps[1:]):
        if b != c:
            probs.append(("seam", b, c))
    for a, b in ps:
        if not a < b:
            probs.append(("degenerate", a, b))
    return probs


# ---------------------------------------------------------------------------
# hyperbolic tubes


def tube_boundary_torus(core_length, radius, twist, dps: int = 40):
    """``(|longitude|, meridian/longitude)`` of the boundary of a hyperbolic tube.

    Upper half-space model with the core on the vertical axis.  The torus of
    points at distance ``radius`` from the axis is parametrised by (s, phi);
    its metric tensor is obtained by numerically differentiating the embedding
    and pulling back |dx|^2/t^2.  The longitude is the translation by the
    loxodromic z -> exp(core_length + i twist) z, the meridian is phi -> phi + 2 pi.
    """
    mpmath.mp.dps = dps
    r = mpmath.mpf(radius)

    def emb(s, phi):
        h = mpmath.exp(s)
        rho = h * mpmath.tanh(r)
        return [rho * mpmath.cos(phi), rho * mpmath.sin(phi), h / mpmath.cosh(r)]

    s0, p0 = mpmath.mpf("0.3"), mpmath.mpf("0.7")
    X0 = emb(s0, p0)
    ds = [mpmath.diff(lambda s: emb(s, p0)[k], s0) for k in range(3)]
    dp = [mpmath.diff(lambda p: emb(s0, p)[k], p0) for k in range(3)]
    t2 = X0[2] ** 2
    g11 = sum(a * a for a in ds) / t2
    g12 = sum(a * b for a, b in zip(ds, dp)) / t2
    g22 = sum(b * b for b in dp) / t2

    def inner(u, v):
        return g11 * u[0] * v[0] + g12 * (u[0] * v[1] + u[1] * v[0]) + g22 * u[1] * v[1]

    lon = (mpmath.mpf(core_length), mpmath.mpf(twist))
    mer = (mpmath.mpf(0), 2 * mpmath.pi)
    L = mpmath.sqrt(inner(lon, lon))
    Mlen = mpmath.sqrt(inner(mer, mer))
    # oriented angle from longitude to meridian in the (s, phi) frame
    det = mpmath.sqrt(g11 * g22 - g12 * g12) * (lon[0] * mer[1] - lon[1] * mer[0])
    ang = mpmath.atan2(det, inner(lon, mer))
    w = (Mlen / L) * mpmath.expj(ang)
    return float(L), complex(w)


# ---------------------------------------------------------------------------
# small enumerations


def pairs(xs):
    return list(combinations(xs, 2))
