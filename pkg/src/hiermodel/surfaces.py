"""Surfaces, curves and the two concrete curve backends.

A :class:`CurveSystem` bundles a surface with everything the rest of the
package needs to know about its curves: intersection numbers, which curves
live in which subsurface, how a subsurface is cut by a multicurve, and the
fill data used to tighten geodesics.

Two backends are provided.  :class:`FareyTorus` and :class:`FareySphere`
handle the complexity-one surfaces exactly, with curves given by slopes.
:class:`CatalogSystem` wraps a finite :class:`CurveCatalog` loaded from JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Iterable, Optional, Sequence

from .errors import CatalogError, FormatError, PreconditionViolated


# ---------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True)
class Surface:
    """Connected orientable surface; ``punctures`` counts punctures and boundary alike."""

    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise PreconditionViolated("genus and punctures must be non-negative")
        if self.xi < 1:
            raise PreconditionViolated(
                f"S_{self.genus},{self.punctures} has complexity {self.xi} < 1 and no curve graph"
            )

    @property
    def xi(self) -> int:
        return complexity_of(self.genus, self.punctures)

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    def __str__(self):
        return f"S_{self.genus},{self.punctures}"


def complexity_of(genus: int, punctures: int) -> int:
    return 3 * genus + punctures - 3


def complexity(s: Surface) -> int:
    """``3g + p - 3``."""
    return complexity_of(s.genus, s.punctures)


@dataclass(frozen=True)
class Subsurface:
    """An essential subsurface, identified inside its curve system by ``key``.

    ``frontier`` is the multiset (sorted tuple) of curves of the cutting
    multicurve that bound the piece; a non-separating curve appears twice.
    """

    key: Hashable
    genus: int
    punctures: int  # punctures plus boundary components, as for Surface
    frontier: tuple = ()
    label: str = ""

    @property
    def xi(self) -> int:
        return complexity_of(self.genus, self.punctures)

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    def __str__(self):
        return self.label or str(self.key)


# ---------------------------------------------------------------------------
# slopes


@dataclass(frozen=True)
class Slope:
    """Reduced slope ``numerator/denominator`` with ``denominator >= 0``; infinity is 1/0."""

    numerator: int
    denominator: int

    def __post_init__(self):
        p, q = self.numerator, self.denominator
        if q < 0:
            raise FormatError("slope denominator must be non-negative")
        if q == 0 and p != 1:
            raise FormatError("the slope at infinity is written 1/0")
        if math.gcd(p, q) != 1:
            raise FormatError(f"slope {p}/{q} is not reduced")

    @classmethod
    def of(cls, p: int, q: int) -> "Slope":
        """Reduce and canonicalize an arbitrary pair (not both zero)."""
        if p == 0 and q == 0:
            raise FormatError("0/0 is not a slope")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def parse(cls, text) -> "Slope":
        if isinstance(text, Slope):
            return text
        if isinstance(text, Fraction):
            return cls.of(text.numerator, text.denominator)
        if isinstance(text, int) and not isinstance(text, bool):
            return cls(text, 1)
        if not isinstance(text, str):
            raise FormatError(f"not a slope: {text!r}")
        s = text.strip()
        if s in ("inf", "oo", "∞", "1/0", "-1/0"):
            return cls(1, 0)
        try:
            if "/" in s:
                a, b = s.split("/")
                return cls.of(int(a), int(b))
            return cls(int(s), 1)
        except ValueError as exc:
            raise FormatError(f"bad slope {text!r}") from exc

    @property
    def sort_key(self):
        return (self.denominator, self.numerator)

    def __lt__(self, other: "Slope"):
        return self.sort_key < other.sort_key

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self):
        return f"Slope({self})"


# ---------------------------------------------------------------------------
# abstract backend


class CurveSystem:
    """Interface shared by the slope backends and the catalog backend."""

    surface: Surface
    name: str = "abstract"

    # -- curves
    def curve(self, ref):
        """Validate and normalise a curve reference."""
        raise NotImplementedError

    def sort_key(self, c):
        raise NotImplementedError

    def format_curve(self, c) -> str:
        raise NotImplementedError

    def intersection(self, u, v) -> int:
        raise NotImplementedError

    # -- subsurfaces
    @property
    def whole(self) -> Subsurface:
        raise NotImplementedError

    def contains(self, X: Subsurface, c) -> bool:
        """True iff ``c`` is an essential non-peripheral curve of ``X``."""
        raise NotImplementedError

    def curves_in(self, X: Subsurface) -> Optional[list]:
        """All curves of ``X`` when finitely many are known, else None."""
        return None

    def components(self, X: Subsurface, multicurve: Iterable) -> list:
        """Components of ``X`` cut along the curves of ``multicurve`` lying in ``X``."""
        raise NotImplementedError

    def subsurface(self, key) -> Subsurface:
        raise NotImplementedError

    def fill_boundary(self, u, w) -> tuple:
        """Non-peripheral boundary of the subsurface filled by ``u`` and ``w``."""
        raise NotImplementedError

    def fill_subsurface(self, u, w) -> Optional[Subsurface]:
        return None

    def contains_subsurface(self, X: Subsurface, Y: Subsurface) -> bool:
        raise NotImplementedError

    # -- helpers built on the primitives
    def sorted_curves(self, cs: Iterable) -> tuple:
        return tuple(sorted(set(cs), key=self.sort_key))

    def multicurve(self, refs: Iterable) -> tuple:
        """Normalise a simplex; rejects intersecting or repeated curves."""
        cs = [self.curve(r) for r in refs]
        if len(set(cs)) != len(cs):
            raise PreconditionViolated("repeated curve in multicurve")
        for i, u in enumerate(cs):
            for v in cs[i + 1:]:
                if self.intersection(u, v) != 0:
                    raise PreconditionViolated(
                        f"curves {self.format_curve(u)} and {self.format_curve(v)} intersect"
                    )
        return self.sorted_curves(cs)

    def adjacent(self, X: Subsurface, u, v) -> bool:
        """Edge relation of the curve graph of ``X``."""
        if u == v:
            return False
        i = self.intersection(u, v)
        if X.xi > 1:
            return i == 0
        return i == (1 if X.genus == 1 else 2)

    def subsurface_key_to_json(self, X: Subsurface):
        return X.key

    def subsurface_from_json(self, data) -> Subsurface:
        return self.subsurface(data)

    def descriptor(self) -> dict:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# slope backends


class _FareyBase(CurveSystem):
    """Common code for the two complexity-one surfaces."""

    factor = 1

    def curve(self, ref) -> Slope:
        return Slope.parse(ref)

    def sort_key(self, c: Slope):
        return c.sort_key

    def format_curve(self, c: Slope) -> str:
        return str(c)

    def intersection(self, u, v) -> int:
        u, v = self.curve(u), self.curve(v)
        return self.factor * abs(u.numerator * v.denominator - u.denominator * v.numerator)

    @property
    def whole(self) -> Subsurface:
        return Subsurface("S", self.surface.genus, self.surface.punctures, (), str(self.surface))

    def contains(self, X, c) -> bool:
        return X.key == "S"

    def fill_boundary(self, u, w) -> tuple:
        if self.intersection(u, w) == 0:
            raise PreconditionViolated("disjoint curves fill nothing new")
        return ()

    def fill_subsurface(self, u, w):
        return self.whole

    def contains_subsurface(self, X, Y) -> bool:
        if X.key == "S":
            return True
        return X == Y

    def _cut(self, X, multicurve) -> list:
        raise NotImplementedError

    def components(self, X, multicurve) -> list:
        cs = [self.curve(c) for c in multicurve]
        if X.key != "S":
            return [X]
        cs = sorted(set(cs), key=self.sort_key)
        if not cs:
            return [X]
        if len(cs) > 1:
            raise PreconditionViolated("a complexity-one surface carries no 2-curve multicurve")
        return self._cut(X, cs[0])

    def descriptor(self) -> dict:
        return {"backend": self.name}


class FareyTorus(_FareyBase):
    """The once-punctured torus; ``i(p/q, r/s) = |ps - qr|``."""

    name = "torus"
    factor = 1

    def __init__(self):
        self.surface = Surface(1, 1)

    def _cut(self, X, v):
        return [Subsurface(("cut", str(v)), 0, 3, (v, v), f"S-{v}")]

    def subsurface(self, key) -> Subsurface:
        if key == "S":
            return self.whole
        if isinstance(key, (list, tuple)) and len(key) == 2 and key[0] == "cut":
            return self._cut(self.whole, Slope.parse(key[1]))[0]
        raise FormatError(f"unknown subsurface key {key!r}")


def sphere_pairing(c: Slope) -> tuple:
    """Puncture pairs cut off by slope ``c`` on the four-punctured sphere.

    Punctures are labelled by the parity classes 00, 01, 10, 11 of the pillowcase
    model; slope p/q separates {00, (q mod 2)(p mod 2)} from the other two.
    """
    partner = f"{c.denominator % 2}{c.numerator % 2}"
    first = ("00", partner)
    second = tuple(sorted({"01", "10", "11"} - {partner}))
    return first, second


class FareySphere(_FareyBase):
    """The four-punctured sphere; ``i(p/q, r/s) = 2|ps - qr|``."""

    name = "sphere"
    factor = 2

    def __init__(self):
        self.surface = Surface(0, 4)

    def _cut(self, X, v):
        out = []
        for pair in sphere_pairing(v):
            out.append(Subsurface(("cut", str(v), "".join(pair)), 0, 3, (v,), f"P{{{','.join(pair)}}}"))
        return out

    def subsurface(self, key) -> Subsurface:
        if key == "S":
            return self.whole
        if isinstance(key, (list, tuple)) and len(key) == 3 and key[0] == "cut":
            for X in self._cut(self.whole, Slope.parse(key[1])):
                if X.key[2] == key[2]:
                    return X
        raise FormatError(f"unknown subsurface key {key!r}")


# ---------------------------------------------------------------------------
# catalog backend


@dataclass(frozen=True)
class CatalogSubsurface:
    id: int
    xi: int
    curves: tuple
    boundary: tuple
    genus: int = 0
    punctures: tuple = ()
    label: str = ""


@dataclass
class CurveCatalog:
    """Finite curve data for a surface of higher complexity."""

    surface: Surface
    labels: list
    intersections: list
    subsurfaces: list
    fills: dict = field(default_factory=dict)  # (i, j) with i < j -> subsurface id
    name: str = "catalog"

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_json(cls, data, name="catalog") -> "CurveCatalog":
        try:
            surf = Surface(int(data["surface"]["genus"]), int(data["surface"]["punctures"]))
            curves = sorted(data["curves"], key=lambda r: r["id"])
            if [r["id"] for r in curves] != list(range(len(curves))):
                raise FormatError("curve ids must be dense integers 0..n-1")
            labels = [str(r.get("label", r["id"])) for r in curves]
            inter = [[int(x) for x in row] for row in data["intersections"]]
            subs = []
            for r in sorted(data["subsurfaces"], key=lambda r: r["id"]):
                subs.append(CatalogSubsurface(
                    id=int(r["id"]), xi=int(r["xi"]),
                    curves=tuple(sorted(int(c) for c in r["curves"])),
                    boundary=tuple(sorted(int(c) for c in r["boundary"])),
                    genus=int(r.get("genus", 0)),
                    punctures=tuple(sorted(r.get("punctures", ()))),
                    label=str(r.get("label", "")),
                ))
            if [s.id for s in subs] != list(range(len(subs))):
                raise FormatError("subsurface ids must be dense integers 0..m-1")
            fills = {}
            for k, v in data.get("fills", {}).items():
                a, b = (int(x) for x in k.split(","))
                fills[(min(a, b), max(a, b))] = int(v)
        except FormatError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise FormatError(f"malformed catalog: {exc}") from exc
        return cls(surf, labels, inter, subs, fills, name)

    def to_json(self) -> dict:
        subs = []
        for s in self.subsurfaces:
            rec = {"id": s.id, "xi": s.xi, "curves": list(s.curves), "boundary": list(s.boundary)}
            if s.genus:
                rec["genus"] = s.genus
            if s.punctures:
                rec["punctures"] = list(s.punctures)
            if s.label:
                rec["label"] = s.label
            subs.append(rec)
        return {
            "surface": {"genus": self.surface.genus, "punctures": self.surface.punctures},
            "curves": [{"id": i, "label": l} for i, l in enumerate(self.labels)],
            "intersections": self.intersections,
            "subsurfaces": subs,
            "fills": {f"{a},{b}": v for (a, b), v in sorted(self.fills.items())},
        }


def load_catalog(path) -> CurveCatalog:
    p = Path(path)
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read catalog {p}: {exc}") from exc
    return CurveCatalog.from_json(data, name=p.stem)


def bundled_catalog_path(name: str = "s05_catalog") -> Path:
    return Path(__file__).with_name("data") / f"{name}.json"


def validate_catalog(c) -> list:
    """List every violated catalog invariant; an empty list means well formed.

    Accepts a :class:`CurveCatalog`, a parsed JSON dict, or a path.
    """
    if isinstance(c, (str, Path)):
        c = load_catalog(c)
    elif isinstance(c, dict):
        c = CurveCatalog.from_json(c)
    report = []
    n = c.n
    M = c.intersections
    if len(M) != n or any(len(row) != n for row in M):
        return [f"intersection matrix is not {n}x{n}"]
    for i in range(n):
        if M[i][i] != 0:
            report.append(f"self-intersection of curve {i} is {M[i][i]}")
        for j in range(i + 1, n):
            if M[i][j] != M[j][i]:
                report.append(f"asymmetric intersection at ({i},{j}): {M[i][j]} != {M[j][i]}")
            if M[i][j] < 0 or M[j][i] < 0:
                report.append(f"negative intersection at ({i},{j})")
    for s in c.subsurfaces:
        for x in s.curves + s.boundary:
            if not 0 <= x < n:
                report.append(f"subsurface {s.id} references unknown curve {x}")
        for b in s.boundary:
            for x in s.curves:
                if 0 <= b < n and 0 <= x < n and M[b][x] != 0:
                    report.append(f"subsurface {s.id}: boundary curve {b} meets contained curve {x}")
    for (u, w), sid in sorted(c.fills.items()):
        if not (0 <= u < n and 0 <= w < n):
            report.append(f"fill entry ({u},{w}) references an unknown curve")
            continue
        if not 0 <= sid < len(c.subsurfaces):
            report.append(f"fill entry ({u},{w}) references unknown subsurface {sid}")
            continue
        F = c.subsurfaces[sid]
        for x in (u, w):
            if x not in F.curves:
                report.append(f"fill entry ({u},{w}): curve {x} is not contained in subsurface {sid}")
        for b in F.boundary:
            if 0 <= b < n and (M[b][u] != 0 or M[b][w] != 0):
                report.append(f"fill entry ({u},{w}): boundary curve {b} of subsurface {sid} meets the pair")
    return report


class CatalogSystem(CurveSystem):
    """Curve system backed by a finite catalog; curves are integer ids."""

    def __init__(self, catalog: CurveCatalog, check: bool = True):
        if check:
            problems = validate_catalog(catalog)
            if problems:
                raise CatalogError("invalid catalog: " + "; ".join(problems[:5]))
        self.catalog = catalog
        self.surface = catalog.surface
        self.name = catalog.name
        self._subs = []
        wholes = [s for s in catalog.subsurfaces if not s.boundary]
        if len(wholes) != 1:
            raise CatalogError("catalog needs exactly one subsurface record without boundary (the whole surface)")
        for s in catalog.subsurfaces:
            if s is wholes[0]:
                p = catalog.surface.punctures
            elif s.punctures:
                p = len(s.punctures) + len(s.boundary)
            else:
                p = s.xi + 3 - 3 * s.genus
            X = Subsurface(s.id, s.genus, p, s.boundary, s.label or f"F{s.id}")
            if X.xi != s.xi:
                raise CatalogError(f"subsurface {s.id}: declared xi {s.xi} but topology gives {X.xi}")
            self._subs.append(X)
        whole = self._subs[wholes[0].id]
        self._whole = whole
        self._curveset = [frozenset(s.curves) for s in catalog.subsurfaces]
        self._punct = [frozenset(s.punctures) for s in catalog.subsurfaces]
        self._all_punctures = self._punct[whole.key] or frozenset(range(catalog.surface.punctures))

    @classmethod
    def from_path(cls, path) -> "CatalogSystem":
        return cls(load_catalog(path))

    @classmethod
    def bundled(cls, name: str = "s05_catalog") -> "CatalogSystem":
        return cls(load_catalog(bundled_catalog_path(name)))

    def curve(self, ref) -> int:
        if isinstance(ref, bool):
            raise CatalogError(f"unknown curve {ref!r}")
        if isinstance(ref, str):
            s = ref.strip()
            if s.lstrip("-").isdigit():
                ref = int(s)
            elif s in self.catalog.labels:
                ref = self.catalog.labels.index(s)
            else:
                raise CatalogError(f"unknown curve {ref!r}")
        if not isinstance(ref, int) or not 0 <= ref < self.catalog.n:
            raise CatalogError(f"unknown curve id {ref!r}")
        return ref

    def sort_key(self, c):
        return c

    def format_curve(self, c) -> str:
        return str(c)

    def label(self, c) -> str:
        return self.catalog.labels[c]

    def intersection(self, u, v) -> int:
        return self.catalog.intersections[self.curve(u)][self.curve(v)]

    @property
    def whole(self) -> Subsurface:
        return self._whole

    def subsurface(self, key) -> Subsurface:
        if isinstance(key, int) and 0 <= key < len(self._subs):
            return self._subs[key]
        raise FormatError(f"unknown subsurface id {key!r}")

    def record(self, X: Subsurface) -> CatalogSubsurface:
        return self.catalog.subsurfaces[X.key]

    def contains(self, X, c) -> bool:
        return c in self._curveset[X.key]

    def curves_in(self, X):
        return sorted(self._curveset[X.key])

    def contains_subsurface(self, X, Y) -> bool:
        if X.key == self._whole.key:
            return True
        ry, rx = self.record(Y), self.record(X)
        if not self._curveset[Y.key] <= self._curveset[X.key]:
            return False
        if not set(ry.boundary) <= (self._curveset[X.key] | set(rx.boundary)):
            return False
        return self._punct[Y.key] <= self._punct[X.key]

    def components(self, X, multicurve) -> list:
        m = {self.curve(c) for c in multicurve}
        inner = {c for c in m if self.contains(X, c)}
        if not inner:
            return [X]
        rx = self.record(X)
        allowed = inner | set(rx.boundary)
        out = []
        for Y in self._subs:
            if Y.key == X.key:
                continue
            ry = self.record(Y)
            if not ry.boundary or not set(ry.boundary) <= allowed:
                continue
            if self._curveset[Y.key] & inner:
                continue
            if not set(ry.boundary) & inner:
                continue
            if self.contains_subsurface(X, Y):
                out.append(Y)
        # a piece bounded only by cut curves may be listed under several ids; dedupe
        seen, uniq = set(), []
        for Y in out:
            sig = (self.record(Y).boundary, self._punct[Y.key], self._curveset[Y.key])
            if sig not in seen:
                seen.add(sig)
                uniq.append(Y)
        if sum(Y.chi for Y in uniq) != X.chi:
            raise CatalogError(
                f"catalog cannot cut {X} along {sorted(inner)}: pieces {[str(Y) for Y in uniq]}"
            )
        return sorted(uniq, key=lambda Y: Y.key)

    def fill_subsurface(self, u, w) -> Subsurface:
        u, w = self.curve(u), self.curve(w)
        if self.intersection(u, w) == 0:
            raise PreconditionViolated("disjoint curves fill nothing new")
        sid = self.catalog.fills.get((min(u, w), max(u, w)))
        if sid is None:
            raise CatalogError(f"catalog has no fill entry for ({u},{w})")
        return self._subs[sid]

    def fill_boundary(self, u, w) -> tuple:
        F = self.fill_subsurface(u, w)
        return tuple(sorted(self.record(F).boundary))

    def descriptor(self) -> dict:
        return {"backend": "catalog", "catalog": self.catalog.to_json()}


def system_from_name(name: str) -> CurveSystem:
    """Builtin backends: ``torus``, ``sphere``, ``s05`` (the bundled catalog)."""
    if name == "torus":
        return FareyTorus()
    if name == "sphere":
        return FareySphere()
    if name in ("s05", "s05_catalog"):
        return CatalogSystem.bundled()
    raise FormatError(f"unknown backend {name!r}")


def system_from_descriptor(d: dict) -> CurveSystem:
    if d.get("backend") == "catalog":
        return CatalogSystem(CurveCatalog.from_json(d["catalog"], name=d.get("name", "catalog")))
    return system_from_name(d.get("backend", ""))
