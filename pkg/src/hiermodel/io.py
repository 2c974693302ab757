"""Canonical JSON for hierarchies and model complexes.

Rationals are strings, infinities are "-inf"/"+inf", keys are sorted and the
file ends with a single LF.  The bundled catalog is referenced by name; any
other catalog travels inside the file.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .curvegraph import TightGeodesic
from .errors import FormatError, HierError, PreconditionViolated, SpecError
from .extreal import Interval, format_ext, parse_ext
from .hierarchy import Brick3D, Hierarchy, Stage, SubordinacyEdge, VertAnnulus
from .model import (BoundaryAnnulus, BoundaryBrickSpec, Gluing, MeridianCoeff, ModelComplex, Piece,
                    Tube, build_skeleton)
from .surfaces import CatalogSystem, system_from_descriptor

HIERARCHY_FORMAT = "hiermodel.hierarchy/1"
MODEL_FORMAT = "hiermodel.model/1"


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_json(data, path) -> None:
    Path(path).write_bytes(dumps(data).encode("utf-8"))


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# systems and small values


_BUNDLED = None


def _is_bundled(sys) -> bool:
    global _BUNDLED
    if not isinstance(sys, CatalogSystem):
        return False
    if _BUNDLED is None:
        _BUNDLED = CatalogSystem.bundled().catalog.to_json()
    return sys.catalog.to_json() == _BUNDLED


def system_to_json(sys) -> dict:
    if _is_bundled(sys):
        return {"backend": "s05"}
    d = dict(sys.descriptor())
    if d.get("backend") == "catalog":
        d["name"] = sys.catalog.name
    return d


def _key_json(key):
    if isinstance(key, tuple):
        return [_key_json(k) for k in key]
    return key


def _curve_json(sys, c):
    return c if isinstance(c, int) else sys.format_curve(c)


def _curves_json(sys, cs):
    return [_curve_json(sys, c) for c in cs]


def _curves(sys, data):
    return tuple(sys.curve(c) for c in data)


def brick_to_json(B: Brick3D) -> dict:
    return {"base": _key_json(B.base.key), "interval": B.interval.to_json(), "stage": B.stage,
            "connectable": B.connectable, "level": B.level}


def brick_from_json(sys, d) -> Brick3D:
    return Brick3D(sys.subsurface(d["base"]), Interval.from_json(d["interval"]), int(d["stage"]),
                   bool(d.get("connectable", False)), d.get("level"))


def annulus_to_json(sys, a: VertAnnulus) -> dict:
    return {"curve": _curve_json(sys, a.base), "interval": a.interval.to_json(), "stage": a.stage,
            "parent": a.parent}


def annulus_from_json(sys, d) -> VertAnnulus:
    return VertAnnulus(sys.curve(d["curve"]), Interval.from_json(d["interval"]), int(d["stage"]),
                       str(d.get("parent", "")))


def geodesic_to_json(sys, g: TightGeodesic) -> dict:
    return {"domain": _key_json(g.domain.key),
            "entries": [_curves_json(sys, e) for e in g.entries],
            "initial": _curves_json(sys, g.initial_marking),
            "terminal": _curves_json(sys, g.terminal_marking)}


def geodesic_from_json(sys, d) -> TightGeodesic:
    return TightGeodesic(sys.subsurface(d["domain"]), tuple(_curves(sys, e) for e in d["entries"]),
                         _curves(sys, d["initial"]), _curves(sys, d["terminal"]))


# ---------------------------------------------------------------------------
# hierarchy


def hierarchy_to_json(H: Hierarchy) -> dict:
    sys = H.system
    stages = []
    for st in H.stages:
        stages.append({
            "index": st.index,
            "final": st.final,
            "bricks": [brick_to_json(B) for B in st.bricks],
            "connectable": [
                {"brick": brick_to_json(B), "geodesic": geodesic_to_json(sys, g),
                 "annuli": [annulus_to_json(sys, a) for a in grp]}
                for B, g, grp in zip(st.connectable, st.geodesics, st.annuli)
            ],
        })
    return {
        "format": HIERARCHY_FORMAT,
        "system": system_to_json(sys),
        "p_minus": _curves_json(sys, H.p_minus),
        "p_plus": _curves_json(sys, H.p_plus),
        "seed": H.seed,
        "stages": stages,
        "annuli": [annulus_to_json(sys, a) for a in H.annuli],
        "final_bricks": [brick_to_json(B) for B in H.final_bricks],
        "subordinacy": [{"source": brick_to_json(e.source), "target": brick_to_json(e.target),
                         "direction": e.direction} for e in H.subordinacy],
    }


def hierarchy_from_json(data, sys=None) -> Hierarchy:
    """Inverse of :func:`hierarchy_to_json`; malformed input raises FormatError."""
    try:
        if data.get("format") != HIERARCHY_FORMAT:
            raise FormatError(f"not a hierarchy file (format {data.get('format')!r})")
        if sys is None:
            sys = system_from_descriptor(data["system"])
        stages = []
        for s in data["stages"]:
            conn = s["connectable"]
            stages.append(Stage(
                int(s["index"]),
                tuple(brick_from_json(sys, b) for b in s["bricks"]),
                tuple(brick_from_json(sys, c["brick"]) for c in conn),
                tuple(geodesic_from_json(sys, c["geodesic"]) for c in conn),
                tuple(tuple(annulus_from_json(sys, a) for a in c["annuli"]) for c in conn),
                bool(s.get("final", False)),
            ))
        return Hierarchy(
            sys, _curves(sys, data["p_minus"]), _curves(sys, data["p_plus"]), int(data["seed"]),
            tuple(stages),
            tuple(annulus_from_json(sys, a) for a in data["annuli"]),
            tuple(brick_from_json(sys, b) for b in data["final_bricks"]),
            tuple(SubordinacyEdge(brick_from_json(sys, e["source"]), brick_from_json(sys, e["target"]),
                                  e["direction"]) for e in data.get("subordinacy", [])),
        )
    except FormatError:
        raise
    except HierError as exc:
        raise FormatError(f"invalid hierarchy data: {exc}") from exc
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed hierarchy data: {exc!r}") from exc


def save_hierarchy(H: Hierarchy, path) -> None:
    write_json(hierarchy_to_json(H), path)


def load_hierarchy(path) -> Hierarchy:
    return hierarchy_from_json(read_json(path))


# ---------------------------------------------------------------------------
# model


def _tube_curve_json(sys, T: Tube):
    if T.is_puncture:
        return {"puncture": T.curve[1]}
    return _curve_json(sys, T.curve)


def _tube_curve(sys, d):
    if isinstance(d, dict):
        return ("puncture", int(d["puncture"]))
    return sys.curve(d)


def spec_to_json(sys, sp: BoundaryBrickSpec) -> dict:
    return {
        "side": sp.side,
        "pants": _curves_json(sys, sp.pants),
        "heights": {sys.format_curve(c): int(h) for c, h in sp.heights.items()},
        "shears": {sys.format_curve(c): str(Fraction(v)) for c, v in sp.shears.items()},
        "metadata": sp.metadata,
    }


def spec_from_json(sys, d) -> BoundaryBrickSpec:
    heights = {}
    for c, h in d.get("heights", {}).items():
        if isinstance(h, bool) or not isinstance(h, (int, str)):
            raise SpecError(f"cylinder height for {c} must be an integer, got {h!r}")
        heights[sys.curve(c)] = Fraction(h)
    heights = {c: int(h) if h.denominator == 1 else h for c, h in heights.items()}
    return BoundaryBrickSpec(
        d["side"], _curves(sys, d.get("pants", [])), heights,
        {sys.curve(c): Fraction(v) for c, v in d.get("shears", {}).items()},
        dict(d.get("metadata", {})),
    )


def load_specs(path, sys) -> list:
    data = read_json(path)
    if isinstance(data, dict):
        data = data.get("specs", [])
    return [spec_from_json(sys, d) for d in data]


def model_to_json(M: ModelComplex, view=None) -> dict:
    """Model JSON; ``view`` (from ``thin_filter``) adds the k-filtration."""
    sys = M.system
    out = {
        "format": MODEL_FORMAT,
        "hierarchy": hierarchy_to_json(M.hierarchy),
        "epsilon1": str(M.epsilon1),
        "q_minus": _curves_json(sys, M.q_minus),
        "q_plus": _curves_json(sys, M.q_plus),
        "specs": [spec_to_json(sys, sp) for sp in M.specs],
        "metadata": M.metadata,
        "pieces": [{"index": P.index, "kind": P.kind, "base": _key_json(P.base.key),
                    "interval": P.interval.to_json() if P.interval else None, "side": P.side}
                   for P in M.pieces],
        "gluings": [{"level": format_ext(g.level), "surface": _key_json(g.surface.key), "lower": g.lower, "upper": g.upper,
                     "loops": _curves_json(sys, g.loops)} for g in M.gluings],
        "tubes": [{"index": T.index, "curve": _tube_curve_json(sys, T), "interval": T.interval.to_json(),
                   "class": T.klass, "omega": T.omega.to_json(),
                   "boundary": [{"kind": a.kind, "width": str(a.width), "shear": str(a.shear),
                                 "source": a.source} for a in T.boundary]}
                  for T in M.tubes],
    }
    if view is not None:
        if view.model is not M:
            raise PreconditionViolated("the filtration view belongs to a different model")
        out["filtration"] = {
            "k": view.k,
            "thin": view.thin,
            "retained": view.kept,
            "retained_curves": [_tube_curve_json(sys, M.tubes[i]) for i in view.kept],
            "metrics": {str(i): {"core_length": repr(p.core_length), "radius": repr(p.radius),
                                 "twist": repr(p.twist)} for i, p in sorted(view.metrics.items())},
        }
    return out


def model_from_json(data) -> ModelComplex:
    try:
        if data.get("format") != MODEL_FORMAT:
            raise FormatError(f"not a model file (format {data.get('format')!r})")
        H = hierarchy_from_json(data["hierarchy"])
        sys = H.system
        pieces = [Piece(int(p["index"]), p["kind"], sys.subsurface(p["base"]),
                        Interval.from_json(p["interval"]) if p["interval"] is not None else None,
                        p.get("side", "")) for p in data["pieces"]]
        gluings = [Gluing(parse_ext(g["level"]), sys.subsurface(g["surface"]), int(g["lower"]),
                          int(g["upper"]), _curves(sys, g["loops"])) for g in data["gluings"]]
        tubes = [Tube(int(t["index"]), _tube_curve(sys, t["curve"]), Interval.from_json(t["interval"]),
                      t["class"],
                      tuple(BoundaryAnnulus(a["kind"], Fraction(a["width"]), Fraction(a["shear"]),
                                            a.get("source", "")) for a in t["boundary"]),
                      MeridianCoeff.from_json(t["omega"])) for t in data["tubes"]]
        M = ModelComplex(H, pieces, gluings, tubes, Fraction(data["epsilon1"]),
                         _curves(sys, data["q_minus"]), _curves(sys, data["q_plus"]),
                         tuple(spec_from_json(sys, s) for s in data["specs"]), {},
                         dict(data.get("metadata", {})))
        M.skeleton = build_skeleton(M)
        return M
    except FormatError:
        raise
    except HierError as exc:
        raise FormatError(f"invalid model data: {exc}") from exc
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise FormatError(f"malformed model data: {exc!r}") from exc
