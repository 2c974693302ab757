"""Checkers for the structural properties of hierarchies.

Each checker returns a :class:`Report`; nothing here raises on a failed check,
since a violation is an answer, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import PreconditionViolated
from .extreal import Interval, elementary_intervals, merge_touching
from .hierarchy import (Brick3D, Hierarchy, annulus_components, brick_decomposition,
                        expanding_connectable)
from .ledger import occupation_bound


@dataclass
class Report:
    lemma: str
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        out = {"lemma": self.lemma, "status": self.status, "violations": self.violations}
        out.update(self.details)
        return out


def _fmt_iv(iv: Interval):
    return iv.to_json()


def check_non_parallel(H) -> Report:
    """Distinct components of the full annulus union lie over distinct curves.

    Accepts a hierarchy or a plain list of annuli.
    """
    annuli = list(H.annuli) if isinstance(H, Hierarchy) else list(H)
    fmt = H.system.format_curve if isinstance(H, Hierarchy) else str
    rep = Report("nonparallel")
    by = {}
    for a in annuli:
        by.setdefault(a.base, []).append(a.interval)
    for c in sorted(by, key=repr):
        ivs = sorted(by[c])
        for i in range(len(ivs)):
            for j in range(i + 1, len(ivs)):
                if ivs[i].interior_meets(ivs[j]):
                    rep.violations.append({"kind": "overlap", "curve": fmt(c),
                                           "intervals": [_fmt_iv(ivs[i]), _fmt_iv(ivs[j])]})
        comps = merge_touching(ivs)
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                rep.violations.append({"kind": "parallel", "curve": fmt(c),
                                       "intervals": [_fmt_iv(comps[i]), _fmt_iv(comps[j])]})
    rep.details["components"] = len(annulus_components(annuli))
    return rep


def check_structure_sigma(H: Hierarchy) -> Report:
    """Connectable bricks with the same base coincide (and appear only once)."""
    rep = Report("sigma")
    entries = [(st.index, pos, B) for st in H.stages for pos, B in enumerate(st.connectable)]
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            (si, pi, B), (sj, pj, C) = entries[i], entries[j]
            if B.base.key != C.base.key:
                continue
            kind = "duplicate" if B.same_region(C) else "distinct"
            rep.violations.append({
                "kind": kind,
                "first": {"stage": si, "index": pi, "brick": str(B)},
                "second": {"stage": sj, "index": pj, "brick": str(C)},
            })
    rep.details["bricks"] = len(entries)
    return rep


# ---------------------------------------------------------------------------
# single brick occupation


@dataclass
class OccupationCover:
    query: Brick3D
    cover: list
    distinguished: Optional[tuple] = None  # (index into cover, witness brick)
    n0: int = 0
    sharper_bound: int = 0
    extra_witnesses: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.cover)


def frontier_covered(H: Hierarchy, Q: Brick3D) -> bool:
    comps = annulus_components(H.annuli)
    for c in set(Q.base.frontier):
        if not any(cc == c and iv.contains(Q.interval) for cc, iv in comps):
            return False
    return True


def _global_bricks(H: Hierarchy, s: int) -> tuple:
    """Bricks of the decomposition by the annuli of stages <= s."""
    if s + 1 <= H.K:
        return H.stages[s + 1].bricks
    return H.final_bricks


def _in_connectable(H: Hierarchy, B: Brick3D) -> bool:
    return any(C.same_region(B) for C in H.connectable_set())


def single_brick_occupation(H: Hierarchy, Q: Brick3D) -> OccupationCover:
    """Cover ``Q`` by bricks cut out of the hierarchy, following the stages downward."""
    sys = H.system
    if Q.base.xi < 1:
        raise PreconditionViolated("query brick must have complexity at least one")
    if not frontier_covered(H, Q):
        raise PreconditionViolated(f"vertical boundary of {Q} is not contained in the annulus union")
    n0 = occupation_bound(sys.surface)
    sharp = (-3 * Q.base.chi) ** (sys.surface.xi - Q.base.xi)
    for C in H.connectable_set():
        if C.base.key == Q.base.key and C.interval.contains(Q.interval):
            return OccupationCover(Q, [Q], (0, C), n0, sharp)

    zero, one = [], []

    def explore(region: Brick3D, s: int):
        parts = brick_decomposition(H.annuli_upto(s), region, sys, stage=region.stage)
        glob = _global_bricks(H, s)
        for P in parts:
            if P.base.key != Q.base.key:
                zero.append(P)
                continue
            # the global bricks around P may break at levels decided outside Q
            hosts = [D for D in glob if D.interval.interior_meets(P.interval)
                     and sys.contains_subsurface(D.base, P.base)]
            for D in sorted(hosts, key=lambda D: D.lo):
                piece = Brick3D(P.base, P.interval.intersection(D.interval), P.stage)
                C = expanding_connectable(D, H)
                member = _in_connectable(H, C)
                if C.base.key == Q.base.key and member:
                    one.append((piece, C))
                elif s >= H.K:
                    zero.append(piece)
                else:
                    nxt = max(C.stage if member else s + 1, s + 1)
                    explore(piece, min(nxt, H.K))

    explore(Q, 0)
    cover = list(zero)
    witnesses = []
    for _, C in one:
        if not any(C.same_region(W) for W in witnesses):
            witnesses.append(C)
    dist = None
    extra = []
    for idx, C in enumerate(witnesses):
        piece = Brick3D(Q.base, Q.interval.intersection(C.interval), Q.stage)
        cover.append(piece)
        if idx == 0:
            dist = (len(cover) - 1, C)
        else:
            extra.append((len(cover) - 1, C))
    return OccupationCover(Q, cover, dist, n0, sharp, extra)


def cover_problems(occ: OccupationCover, sys) -> list:
    """Exact check that the closures of the cover contain the query brick."""
    Q = occ.query
    probs = []
    for B in occ.cover:
        if not Q.interval.contains(B.interval) or not sys.contains_subsurface(Q.base, B.base):
            probs.append(f"{B} is not inside {Q}")
    for E in elementary_intervals([B.interval for B in occ.cover], Q.interval):
        here = [B for B in occ.cover if B.interval.contains(E)]
        if any(B.base.key == Q.base.key for B in here):
            continue
        cut = {c for B in here for c in B.base.frontier if sys.contains(Q.base, c)}
        want = sorted(repr(Y.key) for Y in sys.components(Q.base, cut))
        got = sorted({repr(B.base.key) for B in here})
        if not set(want) <= set(got):
            probs.append(f"{Q.base} x {E} not covered: have {got}, need {want}")
    if occ.size > occ.n0:
        probs.append(f"cover of size {occ.size} exceeds the bound {occ.n0}")
    for idx, B in enumerate(occ.cover):
        if occ.distinguished and idx == occ.distinguished[0]:
            continue
        if B.base.key == Q.base.key:
            probs.append(f"non-distinguished member {B} has no vertical boundary inside {Q}")
    if occ.extra_witnesses:
        probs.append(f"{len(occ.extra_witnesses)} additional distinguished members")
    return probs


def valid_query_bases(H: Hierarchy) -> list:
    """Pairs (subsurface, interval) whose frontier lies in the annulus union, for sampling queries."""
    sys = H.system
    comps = annulus_components(H.annuli)
    cands = [sys.whole]
    if hasattr(sys, "_subs"):
        cands = [X for X in sys._subs if X.xi >= 1]
    else:
        # slope backends: the only subsurface of positive complexity is the whole surface
        cands = [sys.whole]
    out = []
    for X in cands:
        front = set(X.frontier)
        if not front:
            out.append((X, Interval(-float("inf"), float("inf"))))
            continue
        ivs = None
        ok = True
        for c in front:
            mine = [iv for cc, iv in comps if cc == c]
            if not mine:
                ok = False
                break
            ivs = mine if ivs is None else [a.intersection(b) for a in ivs for b in mine if a.interior_meets(b)]
        if ok and ivs:
            for iv in ivs:
                out.append((X, iv))
    return out


def random_queries(H: Hierarchy, n: int, rng) -> list:
    """``n`` random query bricks with vertical boundary in the annulus union."""
    from fractions import Fraction
    from .extreal import is_finite

    pool = valid_query_bases(H)
    pts = sorted({x for a in H.annuli for x in (a.lo, a.hi) if is_finite(x)}) or [Fraction(0)]
    out = []
    for _ in range(n):
        X, iv = pool[rng.randrange(len(pool))]
        inner = [p for p in pts if iv.lo <= p <= iv.hi]
        lo_c = [iv.lo] + inner + [p + Fraction(rng.randrange(1, 4), 7) for p in inner if p + 1 <= iv.hi or
                                 iv.hi == float("inf")]
        lo_c = sorted({x for x in lo_c if iv.lo <= x < iv.hi})
        lo = lo_c[rng.randrange(len(lo_c))]
        hi_c = sorted({x for x in [iv.hi] + inner + [p - Fraction(rng.randrange(1, 4), 7) for p in inner]
                       if lo < x <= iv.hi})
        hi = hi_c[rng.randrange(len(hi_c))]
        out.append(Brick3D(X, Interval(lo, hi), 0))
    return out
