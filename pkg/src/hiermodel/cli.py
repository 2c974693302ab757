"""``hier``: build, check, model and render hierarchies from the command line.

Exit codes: 0 success / check passed, 1 check failed, 2 construction or spec
error, 3 catalog or file-format error.  Diagnostics go to stderr as JSON lines.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .errors import CatalogError, FormatError, HierError, SpecError
from .surfaces import CatalogSystem, Surface, load_catalog, system_from_name

EXIT_OK, EXIT_FAIL, EXIT_BUILD, EXIT_FORMAT = 0, 1, 2, 3


def _diag(level: str, message: str, **extra) -> None:
    rec = {"level": level, "message": message}
    rec.update(extra)
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")


def _error(exc: BaseException) -> None:
    _diag("error", str(exc), error=type(exc).__name__)


def _emit(text: str, path=None) -> None:
    if path and path != "-":
        with open(path, "wb") as fh:
            fh.write(text.encode("utf-8"))
    else:
        sys.stdout.write(text)


def _split(refs) -> list:
    out = []
    for r in refs or []:
        out.extend(x for x in r.split(",") if x)
    return out


def _system(args):
    if getattr(args, "catalog", None):
        return CatalogSystem(load_catalog(args.catalog))
    return system_from_name(args.backend)


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args) -> int:
    from .hierarchy import build_hierarchy
    from .io import dumps, hierarchy_to_json

    try:
        sysm = _system(args)
        H = build_hierarchy(_split(args.minus), _split(args.plus), sysm, seed=args.seed)
    except (CatalogError, FormatError) as exc:
        _error(exc)
        return EXIT_FORMAT
    except HierError as exc:
        _error(exc)
        return EXIT_BUILD
    _emit(dumps(hierarchy_to_json(H)), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    from .io import dumps, load_hierarchy
    from .verify import (Report, check_non_parallel, check_structure_sigma, cover_problems,
                         random_queries, single_brick_occupation)

    try:
        H = load_hierarchy(args.file)
    except HierError as exc:
        _error(exc)
        return EXIT_FORMAT
    reports = []
    lemmas = ["nonparallel", "sigma", "occupation"] if args.lemma == "all" else [args.lemma]
    for lemma in lemmas:
        if lemma == "nonparallel":
            reports.append(check_non_parallel(H))
        elif lemma == "sigma":
            reports.append(check_structure_sigma(H))
        else:
            rep = Report("occupation")
            rng = random.Random(args.seed)
            sizes = []
            try:
                for Q in random_queries(H, args.samples, rng):
                    occ = single_brick_occupation(H, Q)
                    sizes.append(occ.size)
                    for p in cover_problems(occ, H.system):
                        rep.violations.append({"query": str(Q), "problem": p})
            except HierError as exc:
                rep.violations.append({"error": type(exc).__name__, "problem": str(exc)})
            from .ledger import occupation_bound

            rep.details.update({"samples": len(sizes), "max_cover": max(sizes, default=0),
                                "n0": occupation_bound(H.system.surface)})
            reports.append(rep)
    out = reports[0].to_json() if len(reports) == 1 else {"reports": [r.to_json() for r in reports]}
    _emit(dumps(out), args.output)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_model(args) -> int:
    from .io import dumps, load_hierarchy, load_specs, model_to_json
    from .model import assemble, default_specs, thin_filter

    try:
        H = load_hierarchy(args.file)
    except HierError as exc:
        _error(exc)
        return EXIT_FORMAT
    try:
        qm = [H.system.curve(c) for c in _split(args.q_minus)]
        qp = [H.system.curve(c) for c in _split(args.q_plus)]
        if args.specs:
            specs = load_specs(args.specs, H.system)
        elif args.require_specs:
            raise SpecError("no boundary specs given (--specs) and defaults disabled")
        else:
            specs = default_specs(H, qm, qp)
            _diag("info", "using default unit-height boundary specs")
        M = assemble(H, specs, Fraction(args.epsilon1), qm, qp)
        view = None
        if args.k is not None:
            view, _ = thin_filter(M, args.k)
    except FormatError as exc:
        _error(exc)
        return EXIT_FORMAT
    except HierError as exc:
        _error(exc)
        return EXIT_BUILD
    _emit(dumps(model_to_json(M, view)), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    from .io import load_hierarchy
    from .render import render_svg

    try:
        H = load_hierarchy(args.file)
    except HierError as exc:
        _error(exc)
        return EXIT_FORMAT
    _emit(render_svg(H), args.output)
    return EXIT_OK


def cmd_farey(args) -> int:
    from .curvegraph import farey_distance, farey_geodesic
    from .surfaces import Slope

    try:
        u, v = Slope.parse(args.u), Slope.parse(args.v)
    except HierError as exc:
        _error(exc)
        return EXIT_FORMAT
    out = {"u": str(u), "v": str(v), "distance": farey_distance(u, v)}
    if args.query == "geodesic":
        out["geodesic"] = [str(s) for s in farey_geodesic(u, v)]
    _emit(json.dumps(out, sort_keys=True) + "\n", None)
    return EXIT_OK


def cmd_const(args) -> int:
    from .ledger import constants

    try:
        surface = None
        if args.surface:
            g, p = (int(x) for x in args.surface.split(","))
            surface = Surface(g, p)
        inputs = {}
        for name in ("epsilon", "epsilon1", "epsilon2", "K", "L", "d", "d0", "delta0", "delta1", "m0", "k"):
            val = getattr(args, name)
            if val is not None:
                inputs[name] = Fraction(val)
        interval = None
        if args.interval:
            a, b = args.interval.split(",")
            interval = (Fraction(a), Fraction(b))
        led = constants(surface, n0=args.n0, interval=interval, m=args.m, **inputs)
    except (HierError, ValueError, ZeroDivisionError) as exc:
        _error(exc)
        return EXIT_BUILD
    _emit(json.dumps(led.to_json(), sort_keys=True, indent=1) + "\n", None)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hier", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a hierarchy and write its JSON")
    b.add_argument("--backend", default="torus", choices=["torus", "sphere", "s05"])
    b.add_argument("--catalog", help="catalog JSON file (overrides --backend)")
    b.add_argument("--minus", action="append", required=True, help="curves of p-, comma separated")
    b.add_argument("--plus", action="append", required=True, help="curves of p+, comma separated")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run a structural checker on a hierarchy file")
    c.add_argument("file")
    c.add_argument("--lemma", default="all", choices=["nonparallel", "sigma", "occupation", "all"])
    c.add_argument("--samples", type=int, default=50)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("model", help="assemble the model complex of a hierarchy")
    m.add_argument("file")
    m.add_argument("--specs", help="boundary brick specs JSON")
    m.add_argument("--require-specs", action="store_true",
                   help="fail instead of using unit-height default specs")
    m.add_argument("-k", type=int)
    m.add_argument("--epsilon1", default="1")
    m.add_argument("--q-minus", action="append")
    m.add_argument("--q-plus", action="append")
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_model)

    r = sub.add_parser("render", help="draw the brick diagram as SVG")
    r.add_argument("file")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_render)

    f = sub.add_parser("farey", help="distance or geodesic between two slopes")
    f.add_argument("query", choices=["distance", "geodesic"])
    f.add_argument("u")
    f.add_argument("v")
    f.set_defaults(func=cmd_farey)

    k = sub.add_parser("const", help="evaluate the constants ledger")
    k.add_argument("--surface", help="genus,punctures")
    k.add_argument("--n0", type=int)
    k.add_argument("--interval", help="a,b for the buffer spacing")
    k.add_argument("--m", type=int)
    for name in ("epsilon", "epsilon1", "epsilon2", "K", "L", "d", "d0", "delta0", "delta1", "m0", "k"):
        k.add_argument(f"--{name}")
    k.set_defaults(func=cmd_const)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
