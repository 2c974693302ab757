"""Staged hierarchies realised as unions of vertical annuli in S x [-inf, inf].

Stage 0 is the single brick S x [-inf, inf] carrying the top geodesic between
the two end markings.  Each later stage decomposes the current annulus union
into bricks, picks the connectable ones and runs a tight geodesic through each
of them.  The loop stops once only complexity-one bricks remain; those get the
buffered interval rule and the resulting union is the full hierarchy union.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .curvegraph import TightGeodesic, tight_geodesic
from .errors import GeometryError, PreconditionViolated, StageBoundExceeded
from .extreal import NEG_INF, POS_INF, Interval, elementary_intervals, is_finite, merge_touching
from .surfaces import CurveSystem, Subsurface

WHOLE_LINE = Interval(NEG_INF, POS_INF)


@dataclass(frozen=True)
class VertAnnulus:
    """``base x interval``; ``parent`` names the brick whose geodesic produced it."""

    base: object
    interval: Interval
    stage: int = 0
    parent: str = ""

    @property
    def lo(self):
        return self.interval.lo

    @property
    def hi(self):
        return self.interval.hi


@dataclass(frozen=True)
class Brick3D:
    base: Subsurface
    interval: Interval
    stage: int = 0
    connectable: bool = False
    level: Optional[int] = None

    @property
    def lo(self):
        return self.interval.lo

    @property
    def hi(self):
        return self.interval.hi

    @property
    def region(self):
        """What the brick is as a subset of S x R-hat, forgetting bookkeeping."""
        return (self.base.key, self.interval.lo, self.interval.hi)

    @property
    def xi(self) -> int:
        return self.base.xi

    def same_region(self, other: "Brick3D") -> bool:
        return self.region == other.region

    def __str__(self):
        return f"{self.base}x{self.interval}"


def brick_order(b: Brick3D):
    return (b.interval.lo, b.interval.hi, repr(b.base.key))


@dataclass(frozen=True)
class SubordinacyEdge:
    source: Brick3D  # the subordinate brick B
    target: Brick3D  # the larger brick it continues into
    direction: str   # "forward" or "backward"


@dataclass(frozen=True)
class MarkedUnion:
    """An annulus union together with the end markings placed at -inf and +inf."""

    annuli: tuple
    p_minus: tuple = ()
    p_plus: tuple = ()


@dataclass(frozen=True)
class Stage:
    index: int
    bricks: tuple        # the brick set of this stage
    connectable: tuple   # the bricks split at this stage
    geodesics: tuple     # aligned with ``connectable``
    annuli: tuple        # aligned with ``connectable``; tuple of VertAnnulus tuples
    final: bool = False

    def all_annuli(self) -> list:
        return [a for group in self.annuli for a in group]


@dataclass(frozen=True)
class Hierarchy:
    system: CurveSystem = field(compare=False, repr=False)
    p_minus: tuple
    p_plus: tuple
    seed: int
    stages: tuple
    annuli: tuple
    final_bricks: tuple
    subordinacy: tuple = ()

    @property
    def top(self) -> Brick3D:
        return self.stages[0].connectable[0]

    @property
    def K(self) -> int:
        """Index of the last stage (the one with the buffered rule)."""
        return len(self.stages) - 1

    def marked(self, upto: Optional[int] = None) -> MarkedUnion:
        return MarkedUnion(tuple(self.annuli_upto(upto)), self.p_minus, self.p_plus)

    def annuli_upto(self, stage: Optional[int] = None) -> list:
        if stage is None:
            return list(self.annuli)
        return [a for a in self.annuli if a.stage <= stage]

    def connectable_set(self) -> list:
        return [b for st in self.stages for b in st.connectable]

    def geodesic_of(self, B: Brick3D) -> Optional[TightGeodesic]:
        for st in self.stages:
            for C, g in zip(st.connectable, st.geodesics):
                if C.same_region(B):
                    return g
        return None

    def annuli_of(self, B: Brick3D) -> list:
        for st in self.stages:
            for C, grp in zip(st.connectable, st.annuli):
                if C.same_region(B):
                    return list(grp)
        return []

    def components(self) -> list:
        return annulus_components(self.annuli)


# ---------------------------------------------------------------------------
# interval assignment


def _ext_frac(x):
    return Fraction(x) if is_finite(x) else x


def assign_intervals(g: TightGeodesic, B: Brick3D, stage: Optional[int] = None,
                     parent: str = "") -> list:
    """Realise ``g`` as vertical annuli inside ``B``.

    Bricks of complexity above one get abutting intervals of equal width
    (unit width from a finite end when the other end is ideal).  Complexity-one
    bricks get the buffered rule, leaving a gap between consecutive entries.
    """
    st = B.stage if stage is None else stage
    entries = list(g.entries)
    n = len(entries) - 1
    a, b = _ext_frac(B.lo), _ext_frac(B.hi)
    buffered = B.base.xi == 1
    if n < 0:
        raise GeometryError("empty geodesic")
    if n == 0:
        spans = [(a, b)]
    elif buffered:
        spans = _buffered(a, b, n)
    else:
        spans = _abutting(a, b, n)
    out = []
    for e, (lo, hi) in zip(entries, spans):
        iv = Interval(lo, hi)  # raises GeometryError when degenerate
        for c in e:
            out.append(VertAnnulus(c, iv, st, parent))
    return out


def _abutting(a, b, n):
    if is_finite(a) and is_finite(b):
        w = (b - a) / (n + 1)
        return [(a + i * w, a + (i + 1) * w) for i in range(n + 1)]
    if not is_finite(a) and not is_finite(b):
        return [(NEG_INF, Fraction(1))] + [(Fraction(i), Fraction(i + 1)) for i in range(1, n)] + \
            [(Fraction(n), POS_INF)]
    if is_finite(a):
        return [(a + i, a + i + 1) for i in range(n)] + [(a + n, POS_INF)]
    # a = -inf, b finite: mirror image
    spans = [None] * (n + 1)
    for i in range(n):
        spans[n - i] = (b - i - 1, b - i)
    spans[0] = (NEG_INF, b - n)
    return spans


def _buffered(a, b, m):
    if is_finite(a) and is_finite(b):
        tau = (b - a) / (2 * m + 1)
        return [(a + 2 * i * tau, a + (2 * i + 1) * tau) for i in range(m + 1)]
    if not is_finite(a) and not is_finite(b):
        return [(NEG_INF, Fraction(1))] + [(Fraction(2 * i), Fraction(2 * i + 1)) for i in range(1, m)] + \
            [(Fraction(2 * m), POS_INF)]
    if is_finite(a):
        return [(a + 2 * i, a + 2 * i + 1) for i in range(m)] + [(a + 2 * m, POS_INF)]
    spans = [None] * (m + 1)
    for i in range(m):
        spans[m - i] = (b - 2 * i - 1, b - 2 * i)
    spans[0] = (NEG_INF, b - 2 * m)
    return spans


def buffer_gaps(annuli: Sequence[VertAnnulus], B: Brick3D) -> list:
    """The intervals of ``B^R`` left uncovered by ``annuli`` (the buffer bricks)."""
    ivs = merge_touching(a.interval for a in annuli)
    gaps = []
    cur = B.lo
    for iv in ivs:
        if iv.lo > cur:
            gaps.append(Interval(cur, iv.lo))
        cur = max(cur, iv.hi)
    if cur < B.hi:
        gaps.append(Interval(cur, B.hi))
    return gaps


# ---------------------------------------------------------------------------
# brick decomposition


def check_disjoint(annuli: Iterable[VertAnnulus], sys: CurveSystem):
    """Raise GeometryError if two annuli over intersecting curves overlap."""
    al = sorted(annuli, key=lambda a: (a.lo, a.hi))
    for i, A in enumerate(al):
        for Bn in al[i + 1:]:
            if Bn.lo >= A.hi:
                break
            if A.interval.interior_meets(Bn.interval) and A.base != Bn.base and \
                    sys.intersection(A.base, Bn.base) > 0:
                raise GeometryError(
                    f"annuli over {sys.format_curve(A.base)}x{A.interval} and "
                    f"{sys.format_curve(Bn.base)}x{Bn.interval} intersect"
                )


def active_curves(annuli: Iterable[VertAnnulus], E: Interval) -> set:
    return {a.base for a in annuli if a.interval.contains(E)}


def brick_decomposition(annuli: Iterable[VertAnnulus], ambient: Brick3D, sys: CurveSystem,
                        stage: Optional[int] = None) -> list:
    """Maximal bricks of ``ambient`` cut out by ``annuli``, sorted by (interval, base)."""
    X, J = ambient.base, ambient.interval
    rel = [a for a in annuli if sys.contains(X, a.base) and a.interval.interior_meets(J)]
    check_disjoint(rel, sys)
    st = ambient.stage if stage is None else stage
    pieces = elementary_intervals([a.interval for a in rel], J)
    runs = {}   # component key -> (component, start)
    out = []
    prev = []
    for E in pieces:
        comps = sys.components(X, active_curves(rel, E))
        keys = {Y.key for Y in comps}
        for Y, start in [runs[k] for k in list(runs)]:
            if Y.key not in keys:
                out.append(Brick3D(Y, Interval(start, E.lo), st))
                del runs[Y.key]
        for Y in comps:
            if Y.key not in runs:
                runs[Y.key] = (Y, E.lo)
    for Y, start in runs.values():
        out.append(Brick3D(Y, Interval(start, J.hi), st))
    return sorted(out, key=brick_order)


# ---------------------------------------------------------------------------
# fronts and connectability


def front_curves(B: Brick3D, side: str, marked: MarkedUnion, sys: CurveSystem) -> tuple:
    """Curves of the marked union met by the front ``side`` ('-' or '+') of ``B``."""
    t = B.lo if side == "-" else B.hi
    cs = {a.base for a in marked.annuli if a.interval.contains_point(t) and sys.contains(B.base, a.base)}
    if t == NEG_INF:
        cs |= {c for c in marked.p_minus if sys.contains(B.base, c)}
    elif t == POS_INF:
        cs |= {c for c in marked.p_plus if sys.contains(B.base, c)}
    return sys.sorted_curves(cs)


def is_connectable(B: Brick3D, marked: MarkedUnion, sys: CurveSystem) -> bool:
    """Both fronts of ``B`` meet the marked union."""
    return bool(front_curves(B, "-", marked, sys)) and bool(front_curves(B, "+", marked, sys))


# ---------------------------------------------------------------------------
# construction


def _brick_seed(seed, stage: int, B: Brick3D) -> int:
    if not seed:
        return 0
    h = hashlib.sha256(f"{seed}|{stage}|{B.region!r}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def build_hierarchy(p_minus, p_plus, sys: CurveSystem, seed: int = 0) -> Hierarchy:
    """Build the staged hierarchy between the curve markings ``p_minus`` and ``p_plus``."""
    pm, pp = sys.multicurve(p_minus), sys.multicurve(p_plus)
    if not pm or not pp:
        raise PreconditionViolated("markings must be non-empty")
    S = sys.whole
    top = Brick3D(S, WHOLE_LINE, 0, True, 0)
    g0 = tight_geodesic(pm, pp, S, sys, seed)
    a0 = tuple(assign_intervals(g0, top, 0, "0:0"))
    stages = [Stage(0, (top,), (top,), (g0,), (a0,), final=S.xi == 1)]
    annuli = list(a0)
    j = 0
    while not stages[-1].final:
        j += 1
        if j > S.xi - 1:
            raise StageBoundExceeded(f"stage {j} exceeds the bound {S.xi - 1} for {sys.surface}")
        marked = MarkedUnion(tuple(annuli), pm, pp)
        raw = brick_decomposition(annuli, top, sys, stage=j)
        bricks = [replace(b, connectable=is_connectable(b, marked, sys)) for b in raw]
        ximax = max(b.xi for b in bricks)
        final = ximax <= 1
        if final:
            chosen = [b for b in bricks if b.xi == 1]
            bad = [str(b) for b in chosen if not b.connectable]
            if bad:
                raise GeometryError(f"complexity-one bricks at the last stage are not connectable: {bad}")
        else:
            chosen = [b for b in bricks if b.xi > 1 and b.connectable]
            if not chosen:
                raise StageBoundExceeded(f"stage {j}: no connectable brick of complexity > 1 to split")
        chosen = [replace(b, level=j) for b in chosen]
        bricks = [next((c for c in chosen if c.same_region(b)), b) for b in bricks]
        geos, groups = [], []
        for idx, B in enumerate(chosen):
            im = front_curves(B, "-", marked, sys)
            tm = front_curves(B, "+", marked, sys)
            g = tight_geodesic(im, tm, B.base, sys, _brick_seed(seed, j, B))
            geos.append(g)
            groups.append(tuple(assign_intervals(g, B, j, f"{j}:{idx}")))
        for grp in groups:
            annuli.extend(grp)
        stages.append(Stage(j, tuple(bricks), tuple(chosen), tuple(geos), tuple(groups), final))
    final_bricks = brick_decomposition(annuli, top, sys, stage=len(stages))
    fm = MarkedUnion(tuple(annuli), pm, pp)
    final_bricks = tuple(replace(b, connectable=is_connectable(b, fm, sys)) for b in final_bricks)
    H = Hierarchy(sys, pm, pp, int(seed), tuple(stages), tuple(annuli), final_bricks)
    return replace(H, subordinacy=tuple(subordinacy_edges(H)))


# ---------------------------------------------------------------------------
# structure queries


def annulus_components(annuli: Iterable[VertAnnulus]) -> list:
    """Merge annuli over the same curve whose intervals touch; returns (curve, Interval) pairs."""
    by = {}
    for a in annuli:
        by.setdefault(a.base, []).append(a.interval)
    out = []
    for c, ivs in by.items():
        for iv in merge_touching(ivs):
            out.append((c, iv))
    return sorted(out, key=lambda ci: (ci[1].lo, ci[1].hi, repr(ci[0])))


def subbricks(P: Brick3D, H: Hierarchy) -> list:
    """Decomposition of ``P`` by the annuli of its own geodesic."""
    return brick_decomposition(H.annuli_of(P), P, H.system, stage=P.stage)


def _contains(big: Brick3D, small: Brick3D) -> bool:
    return big.base.key == small.base.key and big.interval.contains(small.interval)


def expanding_connectable(B: Brick3D, H: Hierarchy) -> Brick3D:
    """The connectable brick with the same base that contains ``B``; ``B`` itself if none."""
    for st in H.stages:
        for C in st.connectable:
            if C.same_region(B):
                return C
    cands = [C for C in H.connectable_set() if _contains(C, B)]
    if not cands:
        return B
    later = [C for C in cands if C.stage >= B.stage]
    if later:
        return min(later, key=lambda C: C.stage)
    return max(cands, key=lambda C: C.stage)


def _find_stage(B: Brick3D, H: Hierarchy) -> Optional[int]:
    for st in H.stages:
        for C in st.connectable:
            if C.same_region(B):
                return st.index
    return None


def direct_subordinates(B: Brick3D, H: Hierarchy):
    """``(forward, backward)``: the lower-stage connectable bricks whose subbricks share a front with ``B``."""
    j = _find_stage(B, H)
    if j is None:
        raise PreconditionViolated(f"{B} is not a connectable brick of the hierarchy")
    if j == 0:
        raise PreconditionViolated("the stage-0 brick has no subordinates")
    fwd = bwd = None
    for i in range(j - 1, -1, -1):
        for P in H.stages[i].connectable:
            subs = [C for C in subbricks(P, H) if C.base.key == B.base.key]
            if fwd is None and any(C.hi == B.hi for C in subs):
                fwd = P
            if bwd is None and any(C.lo == B.lo for C in subs):
                bwd = P
        if fwd is not None and bwd is not None:
            break
    return fwd, bwd


def subordinacy_edges(H: Hierarchy) -> list:
    out = []
    for st in H.stages[1:]:
        for B in st.connectable:
            f, b = direct_subordinates(B, H)
            if f is not None:
                out.append(SubordinacyEdge(B, f, "forward"))
            if b is not None:
                out.append(SubordinacyEdge(B, b, "backward"))
    return out


def horizontal_surfaces(annuli: Iterable[VertAnnulus], t, sys: CurveSystem) -> list:
    """Components of the horizontal section ``S x {t}`` cut by the annuli meeting it."""
    cs = {a.base for a in annuli if a.interval.contains_point(t)}
    return sys.components(sys.whole, cs)


def critical_levels(annuli: Iterable[VertAnnulus]) -> list:
    return sorted({x for a in annuli for x in (a.lo, a.hi) if is_finite(x)})
