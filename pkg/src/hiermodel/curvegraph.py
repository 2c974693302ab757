"""Distances, geodesics and tight geodesics in curve graphs.

On the complexity-one surfaces the curve graph is the Farey graph and we work
with slopes directly: a distance is computed by moving one slope to infinity
with an element of SL(2, Z) and descending through the continued-fraction
expansion of the other.  Catalog backends use breadth-first search.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import CatalogError, NotFoundInCatalog, PreconditionViolated, Unreachable
from .surfaces import CurveSystem, Slope, Subsurface, _FareyBase


# ---------------------------------------------------------------------------
# Farey graph


def _egcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def to_infinity(u: Slope):
    """An integer matrix ``(a, b, c, d)`` of determinant 1 sending ``u`` to 1/0."""
    p, q = u.numerator, u.denominator
    # want s*p - r*q = 1
    g, s, t = _egcd(p, q)  # s*p + t*q = g = 1
    r = -t
    return (s, -r, -q, p)


def apply(m, v: Slope) -> Slope:
    a, b, c, d = m
    x, y = v.numerator, v.denominator
    return Slope.of(a * x + b * y, c * x + d * y)


_DESCENT: dict = {}


def _dist_from_infinity(p: int, q: int) -> int:
    """Farey distance from 1/0 to the reduced fraction p/q (q >= 0)."""
    if q == 0:
        return 0
    if q == 1:
        return 1
    root = (p % q, q)
    if root in _DESCENT:
        return _DESCENT[root]
    stack = [root]
    while stack:
        a, b = stack[-1]
        if (a, b) in _DESCENT:
            stack.pop()
            continue
        # x = a/b with 0 < a < b; r = a.  Children: -b/a and b/(b-a)
        kids = [((-b) % a, a), (b % (b - a), b - a)]
        pending = False
        vals = []
        for ka, kb in kids:
            if kb == 1:
                vals.append(1)
            elif (ka, kb) in _DESCENT:
                vals.append(_DESCENT[(ka, kb)])
            else:
                stack.append((ka, kb))
                pending = True
        if pending:
            continue
        _DESCENT[(a, b)] = 1 + min(vals)
        stack.pop()
    return _DESCENT[root]


def farey_distance(u, v) -> int:
    u, v = Slope.parse(u), Slope.parse(v)
    x = apply(to_infinity(u), v)
    return _dist_from_infinity(x.numerator, x.denominator)


def farey_neighbors_toward(u: Slope, v: Slope) -> list:
    """Farey neighbours of ``u`` lying on some geodesic from ``u`` to ``v``."""
    if u == v:
        return []
    m = to_infinity(u)
    x = apply(m, v)
    if x.denominator == 1:
        return [v]
    fl = x.numerator // x.denominator
    a, b, c, d = m
    inv = (d, -b, -c, a)
    return [apply(inv, Slope(n, 1)) for n in (fl, fl + 1)]


def farey_geodesic(u, v) -> list:
    """The lexicographically least geodesic from ``u`` to ``v`` (key: denominator, numerator)."""
    u, v = Slope.parse(u), Slope.parse(v)
    path = [u]
    d = farey_distance(u, v)
    cur = u
    while d > 0:
        cands = [w for w in farey_neighbors_toward(cur, v) if farey_distance(w, v) == d - 1]
        cur = min(cands, key=lambda s: s.sort_key)
        path.append(cur)
        d -= 1
    return path


def farey_geodesics(u, v, limit: int = 10000) -> list:
    """Every geodesic from ``u`` to ``v`` (at most ``limit`` of them), in lexicographic order."""
    u, v = Slope.parse(u), Slope.parse(v)
    d = farey_distance(u, v)
    out = []

    def rec(path, left):
        if len(out) >= limit:
            return
        if left == 0:
            out.append(list(path))
            return
        cands = [w for w in farey_neighbors_toward(path[-1], v) if farey_distance(w, v) == left - 1]
        for w in sorted(cands, key=lambda s: s.sort_key):
            path.append(w)
            rec(path, left - 1)
            path.pop()

    rec([u], d)
    return out


# ---------------------------------------------------------------------------
# generic distance


def _check_in(sys: CurveSystem, X: Subsurface, c):
    if not sys.contains(X, c):
        raise PreconditionViolated(f"curve {sys.format_curve(c)} is not an essential curve of {X}")


def _bfs(sys: CurveSystem, X: Subsurface, src):
    pool = sys.curves_in(X)
    dist = {src: 0}
    q = deque([src])
    while q:
        a = q.popleft()
        for b in pool:
            if b not in dist and sys.adjacent(X, a, b):
                dist[b] = dist[a] + 1
                q.append(b)
    return dist


def distance(u, v, sys: CurveSystem, domain: Optional[Subsurface] = None) -> int:
    """Curve-graph distance between ``u`` and ``v`` in ``domain`` (default: whole surface)."""
    X = domain if domain is not None else sys.whole
    u, v = sys.curve(u), sys.curve(v)
    _check_in(sys, X, u)
    _check_in(sys, X, v)
    if u == v:
        return 0
    if isinstance(sys, _FareyBase):
        return farey_distance(u, v)
    dist = _bfs(sys, X, u)
    if v not in dist:
        raise Unreachable(f"{sys.format_curve(v)} is not reachable from {sys.format_curve(u)} in {X}")
    return dist[v]


def all_geodesics(u, v, sys: CurveSystem, domain: Optional[Subsurface] = None, limit: int = 5000) -> list:
    """All geodesic vertex paths from ``u`` to ``v`` known to the backend, lexicographically sorted."""
    X = domain if domain is not None else sys.whole
    u, v = sys.curve(u), sys.curve(v)
    if isinstance(sys, _FareyBase):
        return farey_geodesics(u, v, limit)
    _check_in(sys, X, u)
    _check_in(sys, X, v)
    du = _bfs(sys, X, u)
    if v not in du:
        raise Unreachable(f"{v} is not reachable from {u} in {X}")
    dv = _bfs(sys, X, v)
    n = du[v]
    layers = [sorted((c for c in du if du[c] == k and dv.get(c) == n - k), key=sys.sort_key)
              for k in range(n + 1)]
    out = []

    def rec(path):
        if len(out) >= limit:
            return
        k = len(path)
        if k == n + 1:
            out.append(list(path))
            return
        for w in layers[k]:
            if sys.adjacent(X, path[-1], w):
                path.append(w)
                rec(path)
                path.pop()

    rec([u])
    return out


# ---------------------------------------------------------------------------
# tightness


@dataclass(frozen=True)
class TightGeodesic:
    """A tight geodesic in ``domain`` with its initial and terminal markings."""

    domain: Subsurface
    entries: tuple  # tuple of simplices (tuples of curves)
    initial_marking: tuple
    terminal_marking: tuple

    @property
    def length(self) -> int:
        return len(self.entries) - 1

    def vertices(self) -> list:
        """The entries as single curves; only valid when every entry is one curve."""
        if any(len(e) != 1 for e in self.entries):
            raise PreconditionViolated("geodesic has multi-curve entries")
        return [e[0] for e in self.entries]

    def __iter__(self):
        return iter(self.entries)


def _as_simplex(e) -> tuple:
    if isinstance(e, (tuple, list, frozenset, set)):
        return tuple(e)
    return (e,)


def is_tight(seq: Sequence, sys: CurveSystem, domain: Optional[Subsurface] = None) -> bool:
    """Tightness test; entries may be curves or simplices (tuples of curves)."""
    X = domain if domain is not None else sys.whole
    entries = [tuple(sys.curve(c) for c in _as_simplex(e)) for e in seq]
    if not entries or any(not e for e in entries):
        return False
    for e in entries:
        for c in e:
            if not sys.contains(X, c):
                return False
        if len(e) > 1:
            if X.xi == 1:
                return False
            if any(sys.intersection(a, b) for a in e for b in e if a != b):
                return False
    if len(entries) == 1:
        return True
    n = len(entries)
    # geodesic condition on every pair of vertices
    for i in range(n):
        for j in range(i, n):
            for a in entries[i]:
                for b in entries[j]:
                    try:
                        if distance(a, b, sys, X) != j - i:
                            return False
                    except Unreachable:
                        return False
    if X.xi == 1:
        return True
    for i in range(1, n - 1):
        prev, nxt = entries[i - 1], entries[i + 1]
        if len(prev) != 1 or len(nxt) != 1:
            raise CatalogError("fill data is only available for pairs of single curves")
        bd = [c for c in sys.fill_boundary(prev[0], nxt[0]) if sys.contains(X, c)]
        if tuple(sorted(bd, key=sys.sort_key)) != tuple(sorted(entries[i], key=sys.sort_key)):
            return False
    return True


def _rotation(n: int, seed) -> int:
    if not seed or n <= 1:
        return 0
    h = hashlib.sha256(str(seed).encode()).digest()
    return int.from_bytes(h[:8], "big") % n


def tighten(path: Sequence, sys: CurveSystem, X: Subsurface) -> Optional[tuple]:
    """Replace each interior vertex by the fill boundary of its neighbours; None if that fails."""
    entries = [(c,) for c in path]
    if X.xi == 1:
        return tuple(entries)
    for i in range(1, len(entries) - 1):
        prev, nxt = entries[i - 1], entries[i + 1]
        if len(prev) != 1 or len(nxt) != 1:
            return None
        bd = tuple(sorted((c for c in sys.fill_boundary(prev[0], nxt[0]) if sys.contains(X, c)),
                          key=sys.sort_key))
        if not bd:
            return None
        entries[i] = bd
    return tuple(entries)


def endpoint_pairs(i_marking, t_marking, sys: CurveSystem, X: Subsurface) -> list:
    """Pairs of marking components at minimal distance, in tie-break order."""
    best, pairs = None, []
    for u in sorted(set(i_marking), key=sys.sort_key):
        for v in sorted(set(t_marking), key=sys.sort_key):
            try:
                d = distance(u, v, sys, X)
            except Unreachable:
                continue
            if best is None or d < best:
                best, pairs = d, [(u, v)]
            elif d == best:
                pairs.append((u, v))
    if best is None:
        raise NotFoundInCatalog("no pair of marking curves is connected in the catalog")
    return pairs


def tight_geodesic(i_marking, t_marking, domain: Optional[Subsurface], sys: CurveSystem,
                   seed=0) -> TightGeodesic:
    """A tight geodesic from a component of ``i_marking`` to a component of ``t_marking``.

    Endpoints are the closest pair of marking components; ties are broken by
    curve order, rotated by ``seed``.  Paths are chosen lexicographically.
    """
    X = domain if domain is not None else sys.whole
    im = tuple(sys.curve(c) for c in _as_simplex(i_marking))
    tm = tuple(sys.curve(c) for c in _as_simplex(t_marking))
    if not im or not tm:
        raise PreconditionViolated("markings must be non-empty")
    for c in im + tm:
        _check_in(sys, X, c)
    pairs = endpoint_pairs(im, tm, sys, X)
    k = _rotation(len(pairs), seed)
    pairs = pairs[k:] + pairs[:k]
    im_s, tm_s = sys.sorted_curves(im), sys.sorted_curves(tm)
    for u, v in pairs:
        if isinstance(sys, _FareyBase):
            path = farey_geodesic(u, v)
            return TightGeodesic(X, tuple((c,) for c in path), im_s, tm_s)
        found = []
        for path in all_geodesics(u, v, sys, X):
            try:
                ent = tighten(path, sys, X)
            except CatalogError:
                continue
            if ent is not None and is_tight(ent, sys, X):
                found.append(ent)
        if found:
            key = lambda ent: [tuple(sys.sort_key(c) for c in e) for e in ent]
            return TightGeodesic(X, min(found, key=key), im_s, tm_s)
    raise NotFoundInCatalog(f"catalog contains no tight geodesic between the markings in {X}")
