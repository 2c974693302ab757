"""Model complex: metric pieces, tubes, meridian coefficients and thin parts.

Every brick of the final hierarchy decomposition becomes one standard piece
(B03, B04 or B11 according to its base).  The annulus components thicken to
tubes; each tube's flat boundary torus is recorded by its meridian
coefficient, whose imaginary part counts the annuli the pieces induce on it.
"""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (GeometryError, NoConvergence, PreconditionViolated, SpecError,
                     Unreachable)
from .extreal import NEG_INF, POS_INF, Interval, is_finite
from .hierarchy import (Brick3D, Hierarchy, WHOLE_LINE, annulus_components, brick_decomposition,
                        critical_levels)
from .ledger import occupation_bound

INFINITY_OMEGA = "i-infinity"


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class MeridianCoeff:
    """``re + i*im``; ``im is None`` encodes the parabolic value i*infinity."""

    re: Fraction = Fraction(0)
    im: Optional[Fraction] = None

    @property
    def infinite(self) -> bool:
        return self.im is None

    def abs_at_least(self, k) -> bool:
        """Exact test of ``|omega| >= k``."""
        if self.infinite:
            return True
        return self.re * self.re + self.im * self.im >= Fraction(k) ** 2

    def __abs__(self):
        if self.infinite:
            return math.inf
        return math.hypot(self.re, self.im)

    def to_complex(self) -> complex:
        if self.infinite:
            raise PreconditionViolated("parabolic coefficient has no finite value")
        return complex(float(self.re), float(self.im))

    def to_json(self):
        if self.infinite:
            return INFINITY_OMEGA
        return {"re": str(self.re), "im": str(self.im)}

    @classmethod
    def from_json(cls, data) -> "MeridianCoeff":
        if data == INFINITY_OMEGA:
            return cls(Fraction(0), None)
        return cls(Fraction(data["re"]), Fraction(data["im"]))


@dataclass(frozen=True)
class BoundaryAnnulus:
    kind: str          # "horizontal" or "vertical"
    width: Fraction
    shear: Fraction = Fraction(0)
    source: str = ""   # which piece or tile induced it


@dataclass(frozen=True)
class Tube:
    index: int
    curve: object               # curve reference, or ("puncture", i)
    interval: Interval
    klass: str                  # interior | geometrically-finite | parabolic
    boundary: tuple = ()        # cyclic list of BoundaryAnnulus
    omega: MeridianCoeff = MeridianCoeff()

    @property
    def is_puncture(self) -> bool:
        return isinstance(self.curve, tuple) and len(self.curve) == 2 and self.curve[0] == "puncture"


@dataclass(frozen=True)
class BoundaryBrickSpec:
    """Combinatorial data of a boundary brick at the end ``side`` ('-' or '+')."""

    side: str
    pants: tuple = ()
    heights: dict = field(default_factory=dict)   # curve -> positive int
    shears: dict = field(default_factory=dict)    # curve -> rational
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.side not in ("-", "+"):
            raise SpecError(f"boundary spec side must be '-' or '+', got {self.side!r}")
        for c, h in self.heights.items():
            if int(h) != h or h < 1:
                raise SpecError(f"cylinder height for {c} must be a positive integer, got {h}")

    def __hash__(self):
        return hash((self.side, self.pants))


@dataclass(frozen=True)
class Piece:
    index: int
    kind: str                   # B03, B04, B11 or BoundaryTile
    base: object                # Subsurface
    interval: Optional[Interval] = None
    side: str = ""              # for tiles


@dataclass(frozen=True)
class Gluing:
    level: object              # extended rational
    surface: object            # Subsurface of the horizontal section
    lower: int                 # piece index below
    upper: int                 # piece index above
    loops: tuple = ()          # boundary curves, matched identically


@dataclass
class ModelComplex:
    hierarchy: Hierarchy = field(repr=False, compare=False)
    pieces: list
    gluings: list
    tubes: list
    epsilon1: Fraction
    q_minus: tuple = ()
    q_plus: tuple = ()
    specs: tuple = ()
    skeleton: dict = field(default_factory=dict, repr=False, compare=False)
    metadata: dict = field(default_factory=dict)

    @property
    def system(self):
        return self.hierarchy.system

    def piece_of_brick(self, B: Brick3D) -> Piece:
        for P in self.pieces:
            if P.kind != "BoundaryTile" and P.base.key == B.base.key and P.interval == B.interval:
                return P
        raise KeyError(str(B))


# ---------------------------------------------------------------------------
# assembly


def piece_kind(X) -> str:
    if X.xi == 0:
        return "B03"
    if X.xi == 1:
        return "B11" if X.genus == 1 else "B04"
    raise GeometryError(f"brick base {X} has complexity {X.xi} > 1 in the final decomposition")


def classify(curve, iv: Interval, q_minus, q_plus) -> str:
    if (curve in q_minus and iv.lo == NEG_INF) or (curve in q_plus and iv.hi == POS_INF):
        return "parabolic"
    if iv.lo == NEG_INF or iv.hi == POS_INF:
        return "geometrically-finite"
    return "interior"


def default_specs(H: Hierarchy, q_minus=(), q_plus=()) -> list:
    """Unit-height boundary data at both ends, using the end markings as pants curves."""
    sys = H.system
    out = []
    for side, mark, q in (("-", H.p_minus, q_minus), ("+", H.p_plus, q_plus)):
        heights = {}
        for c, iv in annulus_components(H.annuli):
            reaches = iv.lo == NEG_INF if side == "-" else iv.hi == POS_INF
            if reaches and c not in q:
                heights[c] = 1
        out.append(BoundaryBrickSpec(side, tuple(mark), heights))
    return out


def _side_index(sys, c, X) -> int:
    halves = sys.components(sys.whole, [c])
    if len(halves) < 2:
        return -1
    for i, Y in enumerate(halves):
        if Y.key == X.key or sys.contains_subsurface(Y, X):
            return i
    return 0


def assemble(H: Hierarchy, specs: Optional[Sequence[BoundaryBrickSpec]] = None, epsilon1=1,
             q_minus=(), q_plus=(), verify: bool = True) -> ModelComplex:
    """Assemble the model complex of ``H``.

    ``specs`` must provide a boundary spec (with cylinder heights) for every end
    reached by a geometrically finite tube.
    """
    from .verify import check_non_parallel, check_structure_sigma

    sys = H.system
    eps1 = Fraction(epsilon1)
    if eps1 <= 0:
        raise PreconditionViolated("epsilon1 must be positive")
    qm = tuple(sys.curve(c) for c in q_minus)
    qp = tuple(sys.curve(c) for c in q_plus)
    if verify:
        for rep in (check_non_parallel(H), check_structure_sigma(H)):
            if not rep.ok:
                raise PreconditionViolated(f"hierarchy fails the {rep.lemma} check: {rep.violations[:2]}")
    specs = tuple(specs or ())
    by_side = {}
    for sp in specs:
        if sp.side in by_side:
            raise SpecError(f"two boundary specs for end {sp.side}")
        by_side[sp.side] = sp

    pieces = []
    for B in H.final_bricks:
        pieces.append(Piece(len(pieces), piece_kind(B.base), B.base, B.interval))
    brick_pieces = list(pieces)
    for side, q in (("-", qm), ("+", qp)):
        for X in sys.components(sys.whole, q):
            pieces.append(Piece(len(pieces), "BoundaryTile", X, None, side))

    # gluings along horizontal sections
    gluings = []
    levels = sorted({x for P in brick_pieces for x in (P.interval.lo, P.interval.hi) if is_finite(x)})
    for t in levels:
        cs = {a.base for a in H.annuli if a.interval.contains_point(t)}
        for F in sys.components(sys.whole, cs):
            below = [P for P in brick_pieces if P.interval.hi == t and sys.contains_subsurface(P.base, F)]
            above = [P for P in brick_pieces if P.interval.lo == t and sys.contains_subsurface(P.base, F)]
            if not below and not above:
                continue
            if len(below) != 1 or len(above) != 1:
                raise GeometryError(f"horizontal piece {F} at level {t} is not shared by exactly two pieces")
            gluings.append(Gluing(t, F, below[0].index, above[0].index, tuple(sys.sorted_curves(F.frontier))))
    for tile in pieces[len(brick_pieces):]:
        t = NEG_INF if tile.side == "-" else POS_INF
        for P in brick_pieces:
            end = P.interval.lo if tile.side == "-" else P.interval.hi
            if end == t and sys.contains_subsurface(tile.base, P.base):
                lo, hi = (tile.index, P.index) if tile.side == "-" else (P.index, tile.index)
                gluings.append(Gluing(t, P.base, lo, hi, tuple(sys.sorted_curves(P.base.frontier))))

    # tubes
    tubes = []
    for c, iv in annulus_components(H.annuli):
        klass = classify(c, iv, qm, qp)
        tubes.append(Tube(len(tubes), c, iv, klass))
    for i in range(sys.surface.punctures):
        tubes.append(Tube(len(tubes), ("puncture", i), WHOLE_LINE, "parabolic"))
    need = set()
    for T in tubes:
        if T.klass == "geometrically-finite":
            if T.interval.lo == NEG_INF:
                need.add("-")
            if T.interval.hi == POS_INF:
                need.add("+")
    missing = sorted(need - set(by_side))
    if missing:
        raise SpecError(f"no boundary spec for end(s) {missing}")
    M = ModelComplex(H, pieces, gluings, [], eps1, qm, qp, specs)
    M.tubes = [_with_boundary(T, M, by_side) for T in tubes]
    M.skeleton = build_skeleton(M)
    M.metadata = {"horizontal_cap_width": "1"}
    return M


def _with_boundary(T: Tube, M: ModelComplex, by_side: dict) -> Tube:
    if T.klass == "parabolic":
        return Tube(T.index, T.curve, T.interval, T.klass, (), MeridianCoeff(Fraction(0), None))
    sys = M.system
    sides = ([], [])
    for P in M.pieces:
        if P.kind == "BoundaryTile" or not T.interval.contains(P.interval):
            continue
        mult = list(P.base.frontier).count(T.curve)
        if not mult:
            continue
        si = _side_index(sys, T.curve, P.base)
        for m in range(mult):
            k = si if si >= 0 else m % 2
            sides[k].append(BoundaryAnnulus("vertical", Fraction(1), Fraction(0), f"piece:{P.index}"))
    shear = Fraction(0)
    for side, reaches in (("-", T.interval.lo == NEG_INF), ("+", T.interval.hi == POS_INF)):
        if not reaches:
            continue
        sp = by_side[side]
        if T.curve not in sp.heights:
            raise SpecError(f"boundary spec {side} lacks a cylinder height for {sys.format_curve(T.curve)}")
        for _ in range(int(sp.heights[T.curve])):
            sides[0].append(BoundaryAnnulus("vertical", Fraction(1), Fraction(0), f"tile:{side}"))
        shear += Fraction(sp.shears.get(T.curve, 0))
    bd = [BoundaryAnnulus("horizontal", Fraction(1), Fraction(0), "cap:-")] + sides[0] + \
        [BoundaryAnnulus("horizontal", Fraction(1), Fraction(0), "cap:+")] + sides[1]
    if bd and shear:
        bd[0] = BoundaryAnnulus("horizontal", Fraction(1), shear, "cap:-")
    T2 = Tube(T.index, T.curve, T.interval, T.klass, tuple(bd))
    return Tube(T.index, T.curve, T.interval, T.klass, tuple(bd), meridian_coefficient(T2, M))


def meridian_coefficient(t: Tube, M: ModelComplex) -> MeridianCoeff:
    """Flat-torus modulus of the tube boundary; i*infinity for parabolic tubes."""
    if t.klass == "parabolic":
        return MeridianCoeff(Fraction(0), None)
    length = sum((a.width for a in t.boundary), Fraction(0))
    shear = sum((a.shear for a in t.boundary), Fraction(0))
    return MeridianCoeff(shear, length / M.epsilon1)


def classify_tubes(M: ModelComplex, q_minus=None, q_plus=None) -> dict:
    """Partition of tube indices by class (optionally re-evaluated for new end data)."""
    qm = M.q_minus if q_minus is None else tuple(M.system.curve(c) for c in q_minus)
    qp = M.q_plus if q_plus is None else tuple(M.system.curve(c) for c in q_plus)
    out = {"interior": [], "geometrically-finite": [], "parabolic": []}
    for T in M.tubes:
        k = "parabolic" if T.is_puncture else classify(T.curve, T.interval, qm, qp)
        out[k].append(T.index)
    return out


# ---------------------------------------------------------------------------
# thin parts and tube metrics


@dataclass(frozen=True)
class TubeParams:
    core_length: float
    radius: float
    twist: float


def tube_metric(omega: MeridianCoeff, epsilon1=1, tol: float = 1e-9) -> TubeParams:
    """Hyperbolic tube whose boundary torus is C / eps1 (Z + omega Z), longitude to longitude.

    The meridian of a tube of radius r has length 2 pi sinh r; the longitude is
    ``lam cosh r`` along the core plus ``theta sinh r`` around it.  Matching the
    two lattices gives the parameters in closed form; the reconstruction
    residual is then checked against ``tol``.
    """
    if isinstance(omega, MeridianCoeff):
        if omega.infinite:
            raise PreconditionViolated("parabolic tubes have no tube metric")
        w = omega.to_complex()
    else:
        w = complex(omega)
    if not w.imag > 0:
        raise PreconditionViolated("meridian coefficient must have positive imaginary part")
    e1 = float(epsilon1)
    mod = abs(w)
    r = math.asinh(e1 * mod / (2 * math.pi))
    lam = e1 * w.imag / (mod * math.cosh(r))
    theta = 2 * math.pi * w.real / (mod * mod)
    p = TubeParams(lam, r, theta)
    L, ratio = reconstruct_torus(p)
    res = max(abs(L - e1) / max(e1, 1.0), abs(ratio - w) / max(mod, 1.0))
    if not res <= tol:
        raise NoConvergence(f"tube metric residual {res:.3e} exceeds {tol:.1e}", residual=res)
    return p


def reconstruct_torus(p: TubeParams):
    """``(|longitude|, meridian / longitude)`` of the boundary torus of a tube."""
    L = complex(p.core_length * math.cosh(p.radius), p.twist * math.sinh(p.radius))
    Mer = complex(0.0, 2 * math.pi * math.sinh(p.radius))
    # rotate so the longitude is real and positive
    return abs(L), Mer / L


@dataclass
class ThinView:
    model: ModelComplex = field(repr=False)
    k: int
    thin: list           # U_k: tube indices
    kept: list           # tubes left in M_k
    metrics: dict        # tube index -> TubeParams for kept tubes
    skeleton: dict = field(repr=False, default_factory=dict)


def thin_filter(M: ModelComplex, k: int):
    """``(M_k, U_k)``: U_k holds the tubes with |omega| >= k and every parabolic tube."""
    if int(k) != k or k < 1:
        raise PreconditionViolated("k must be a positive integer")
    thin = [T.index for T in M.tubes if T.omega.abs_at_least(k)]
    kept = [T.index for T in M.tubes if T.index not in set(thin)]
    metrics = {i: tube_metric(M.tubes[i].omega, M.epsilon1) for i in kept}
    view = ThinView(M, int(k), thin, kept, metrics)
    view.skeleton = build_skeleton(M, drop_tubes=set(thin))
    return view, [M.tubes[i] for i in thin]


# ---------------------------------------------------------------------------
# skeleton graph


HALF = Fraction(1, 2)


def build_skeleton(M: ModelComplex, drop_tubes=None) -> dict:
    """Weighted graph over piece, face and tube nodes (adjacency dict)."""
    g = {}

    def edge(a, b, w):
        g.setdefault(a, {})
        g.setdefault(b, {})
        if b not in g[a] or w < g[a][b]:
            g[a][b] = w
            g[b][a] = w

    for P in M.pieces:
        g.setdefault(f"piece:{P.index}", {})
    for i, gl in enumerate(M.gluings):
        f = f"face:{i}"
        edge(f"piece:{gl.lower}", f, HALF)
        edge(f"piece:{gl.upper}", f, HALF)
    drop = set() if drop_tubes is None else set(drop_tubes)
    for T in M.tubes:
        if T.klass == "parabolic" or T.index in drop:
            continue
        node = f"tube:{T.index}"
        w = (T.omega.im * M.epsilon1 + abs(T.omega.re)) / 2
        g.setdefault(node, {})
        for P in M.pieces:
            if P.kind != "BoundaryTile" and T.curve in P.base.frontier and T.interval.contains(P.interval):
                edge(node, f"piece:{P.index}", w)
    return g


def _graph(view):
    return view.skeleton if isinstance(view, ThinView) else view.skeleton


def skeleton_distance(view, x: str, y: str) -> Fraction:
    """Shortest-path length between two skeleton nodes."""
    g = _graph(view)
    if x not in g or y not in g:
        raise PreconditionViolated(f"unknown skeleton node {x if x not in g else y}")
    dist = skeleton_distances_from(g, x)
    if y not in dist:
        raise Unreachable(f"{y} is not connected to {x} in the skeleton")
    return dist[y]


def skeleton_distances_from(g: dict, x: str) -> dict:
    dist = {x: Fraction(0)}
    heap = [(Fraction(0), x)]
    while heap:
        d, a = heapq.heappop(heap)
        if d > dist[a]:
            continue
        for b, w in g[a].items():
            nd = d + w
            if b not in dist or nd < dist[b]:
                dist[b] = nd
                heapq.heappush(heap, (nd, b))
    return dist


def skeleton_diameter(view, nodes) -> Fraction:
    g = _graph(view)
    nodes = list(nodes)
    best = Fraction(0)
    for a in nodes:
        dist = skeleton_distances_from(g, a)
        for b in nodes:
            if b not in dist:
                raise Unreachable(f"{b} is not connected to {a}")
            best = max(best, dist[b])
    return best


# ---------------------------------------------------------------------------
# sectional decomposition


@dataclass
class SectionalDecomposition:
    query: Brick3D
    indices: list            # spaced subsequence of geodesic indices
    levels: list             # section levels, including the two ends of Q
    surfaces: list           # (level, base) pairs
    subbricks: list          # D_j
    points: list             # (tube index, level) sectional points
    witness: Optional[Brick3D] = None

    @property
    def gaps(self) -> list:
        return [b - a for a, b in zip(self.indices, self.indices[1:])]


def query_bricks(view) -> list:
    """Bricks of the full manifold cut along the cores of the thin tubes."""
    M = view.model if isinstance(view, ThinView) else view
    thin = set(view.thin) if isinstance(view, ThinView) else {T.index for T in M.tubes}
    from .hierarchy import VertAnnulus

    annuli = [VertAnnulus(T.curve, T.interval, 0) for T in M.tubes
              if T.index in thin and not T.is_puncture]
    top = Brick3D(M.system.whole, WHOLE_LINE, 0)
    return brick_decomposition(annuli, top, M.system, stage=0)


def spaced_indices(lo: int, hi: int, d0: int) -> list:
    """Longest sequence from ``lo`` to ``hi`` with every gap in ``[d0, 2 d0)``."""
    N = hi - lo
    n = N // d0
    if n == 0:
        return [lo, hi] if N else [lo]
    r = N - n * d0
    gaps = [d0 + r // n + (1 if j < r % n else 0) for j in range(n)]
    out = [lo]
    for gp in gaps:
        out.append(out[-1] + gp)
    return out


def sectional_decomposition(Q: Brick3D, d0: int, view) -> SectionalDecomposition:
    """Cut ``Q`` by horizontal sections spaced ``d0`` apart along its geodesic."""
    from .verify import single_brick_occupation

    M = view.model if isinstance(view, ThinView) else view
    H = M.hierarchy
    if int(d0) != d0 or d0 < 1:
        raise PreconditionViolated("d0 must be a positive integer")
    d0 = int(d0)
    single = SectionalDecomposition(Q, [], [Q.lo, Q.hi], [(Q.lo, Q.base), (Q.hi, Q.base)], [Q], [], None)
    if Q.base.xi < 1:
        return single
    occ = single_brick_occupation(H, Q)
    if occ.distinguished is None:
        return single
    C = occ.distinguished[1]
    g = H.geodesic_of(C)
    grp = H.annuli_of(C)
    if g is None:
        return single
    spans = {}
    for a in grp:
        spans.setdefault(a.interval, a)
    ivs = sorted(spans)
    I = [i for i, iv in enumerate(ivs) if iv.interior_meets(Q.interval)]
    single.witness = C
    if len(I) <= 2 * d0:
        single.indices = I
        return single
    idx = spaced_indices(I[0], I[-1], d0)
    levels = [Q.lo]
    for i in idx[1:-1]:
        iv = ivs[i]
        levels.append(iv.interior_point())
    levels.append(Q.hi)
    subs = [Brick3D(Q.base, Interval(a, b), Q.stage) for a, b in zip(levels, levels[1:])]
    thin = set(view.thin) if isinstance(view, ThinView) else set()
    pts = []
    for T in M.tubes:
        if T.index in thin and not T.is_puncture and T.curve in Q.base.frontier:
            for t in levels:
                if T.interval.contains_point(t):
                    pts.append((T.index, t))
    return SectionalDecomposition(Q, idx, levels, [(t, Q.base) for t in levels], subs, pts, C)


def pieces_meeting(M: ModelComplex, D: Brick3D) -> list:
    sys = M.system
    return [P for P in M.pieces if P.kind != "BoundaryTile" and P.interval.interior_meets(D.interval)
            and sys.contains_subsurface(D.base, P.base)]


def section_diameter(view, D: Brick3D) -> Fraction:
    M = view.model if isinstance(view, ThinView) else view
    nodes = [f"piece:{P.index}" for P in pieces_meeting(M, D)]
    return skeleton_diameter(view, nodes) if nodes else Fraction(0)


def euler_problems(M: ModelComplex) -> list:
    """Levels where the bases of the pieces crossing a generic section fail to add up to chi(S)."""
    sys = M.system
    chi = sys.surface.chi
    cuts = critical_levels(M.hierarchy.annuli)
    pts = cuts or [Fraction(0)]
    samples = [pts[0] - 1] + [(a + b) / 2 for a, b in zip(pts, pts[1:])] + [pts[-1] + 1]
    out = []
    for t in samples:
        s = sum(P.base.chi for P in M.pieces if P.kind != "BoundaryTile" and P.interval.lo < t < P.interval.hi)
        if s != chi:
            out.append((t, s))
    return out
