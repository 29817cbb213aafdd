"""Command line front end.

    fuzzysheaf vr build --points cloud.csv [--R 6] [--dim-cap 2]
    fuzzysheaf vr sections --points cloud.csv --at 4 [--format dot]
    fuzzysheaf vr compare --points X.csv --other Y.csv
    fuzzysheaf fuzzy colimit diagram.json
    fuzzysheaf sheaf roundtrip fuzzy.json

Exit codes: 0 ok, 1 input error, 2 check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fuzzy as fz
from . import io
from . import sheaf as sh
from . import simplicial as sx
from . import stalks as st
from .locale import BOTTOM, LocaleError, format_element, format_rational

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class _Result:
    def __init__(self, payload, code=EXIT_OK, text=None):
        self.payload, self.code, self.text = payload, code, text


def _locale_arg(value):
    if value is None:
        return None
    path = Path(value)
    data = io.load_json(path) if path.exists() else _inline_json(value)
    return io.locale_from_json(data)


def _inline_json(value):
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        raise io.InputError(f"--locale: {value!r} is neither a file nor inline JSON") from None


def _element_json(x):
    return list(x) if isinstance(x, tuple) else str(x)


def _sorted_elements(items):
    return [_element_json(x) for x in sorted(items)]


# -- vr ---------------------------------------------------------------------


def _build(args, points=None, R=None):
    cloud = io.load_cloud(points or args.points, args.precision)
    try:
        return sx.vr_build(
            cloud,
            R=R if R is not None else args.R,
            dim_cap=args.dim_cap,
            metric=args.metric,
            digits=args.precision,
        )
    except ValueError as exc:
        raise io.InputError(str(exc)) from None


def _parameter(args, allow_bottom=False):
    if args.at is None:
        raise io.InputError("--at is required")
    p = io.parse_point(args.at)
    if p is BOTTOM and not allow_bottom:
        raise io.InputError("--at bottom is only meaningful for stalks")
    return p


def _simplex_output(args, simplices, extra):
    if args.format == "dot":
        return _Result(None, text=io.skeleton_to_dot(simplices))
    payload = dict(extra)
    payload.update(io.simplices_to_json(simplices))
    payload["count"] = sum(len(v) for v in simplices.values())
    return _Result(payload)


def cmd_vr(args):
    if args.action == "build":
        V = _build(args)
        return _Result(io.vr_to_json(V))
    if args.action == "sections":
        V = _build(args)
        s = _parameter(args)
        return _simplex_output(args, _wrap(sx.vr_sections, V, s), {"at": args.at})
    if args.action == "stalk":
        V = _build(args)
        t = _parameter(args, allow_bottom=True)
        return _simplex_output(args, _wrap(sx.vr_stalk, V, t), {"at": args.at})
    if args.action == "pi0":
        V = _build(args)
        p = _parameter(args, allow_bottom=args.stalk)
        family = _wrap(sx.vr_stalk if args.stalk else sx.vr_sections, V, p)
        comps = sx.pi0(family)
        return _Result({"at": args.at, "stalk": args.stalk, "components": comps, "count": len(comps)})
    if args.action == "compare":
        if not args.other:
            raise io.InputError("--other is required for compare")
        big = _build(args, points=args.other)
        small = _build(args, R=big.R)
        try:
            report = sx.vr_compare(small, big)
        except ValueError as exc:
            raise io.InputError(str(exc)) from None
        payload = {
            "ok": report.ok,
            "R": format_rational(big.R),
            "discrete_scale": format_rational(report.discrete_scale),
            "pi0_sizes": list(report.pi0_sizes),
        }
        if not report.ok:
            payload["level"] = report.level
            payload.update(io.verdict_to_json(report.verdict))
            payload["witness"]["point_distance"] = _distance_text(big, report.verdict.witness.point)
            payload["failing_levels"] = [k for k, _ in report.failures]
        return _Result(payload, EXIT_OK if report.ok else EXIT_CHECK)
    raise io.InputError(f"unknown vr action {args.action!r}")


def _distance_text(V, point):
    if point is BOTTOM:
        return "bottom"
    return format_rational(sx.rational_sqrt(point, V.digits) if V.metric == "squared" else point)


def _wrap(fn, *a):
    try:
        return fn(*a)
    except ValueError as exc:
        raise io.InputError(str(exc)) from None


# -- fuzzy ------------------------------------------------------------------


def _cone_json(cone: fz.Cone):
    return {
        "apex": io.fuzzy_to_json(cone.apex),
        "legs": {
            n: {str(k): str(v) for k, v in sorted(m.mapping.items())} for n, m in cone.legs.items()
        },
    }


def cmd_fuzzy(args):
    L = _locale_arg(args.locale)
    if args.action in ("limit", "colimit"):
        D = io.diagram_from_json(io.load_json(args.inputs[0]), L)
        cone = fz.limit(D) if args.action == "limit" else fz.colimit(D)
        return _Result(_cone_json(cone))
    if args.action == "validate":
        m = io.morphism_from_json(io.load_json(args.inputs[0]), L)
        try:
            ok, bad = fz.validate_morphism(m)
        except ValueError as exc:
            raise io.InputError(str(exc)) from None
        return _Result({"ok": ok, "violations": bad}, EXIT_OK if ok else EXIT_CHECK)
    if args.action in ("union", "meet"):
        if len(args.inputs) != 3:
            raise io.InputError(f"{args.action} needs AMBIENT A B")
        ambient, a, b = (io.fuzzy_from_json(io.load_json(p), L) for p in args.inputs)
        op = fz.subobject_union if args.action == "union" else fz.subobject_meet
        return _Result(io.fuzzy_to_json(_wrap(op, a, b, ambient)))
    raise io.InputError(f"unknown fuzzy action {args.action!r}")


# -- sheaf ------------------------------------------------------------------


def _sections_equal(F, G, samples):
    return all(F.sections(a) == G.sections(a) for a in samples)


def cmd_sheaf(args):
    L = _locale_arg(args.locale)
    data = io.load_json(args.inputs[0])
    if args.action == "levelcut":
        return _Result(io.mono_to_json(sh.level_cut(io.fuzzy_from_json(data, L))))
    if args.action == "psi":
        F = io.sheaf_or_mono_from_json(data, L)
        try:
            return _Result(io.fuzzy_to_json(sh.psi_of(F)))
        except sh.NotASheafError as exc:
            raise io.InputError(f"{exc} (run `fuzzysheaf sheaf sheafify` first)") from None
    if args.action == "image":
        return _Result(io.mono_to_json(sh.image(io.step_from_json(data, L))))
    if args.action == "sheafify":
        return _Result(io.mono_to_json(sh.sheafify(io.sheaf_or_mono_from_json(data, L))))
    if args.action == "roundtrip":
        psi = io.fuzzy_from_json(data, L)
        F = sh.level_cut(psi)
        samples = sh.sample_points(psi.locale, psi.grades.values())
        back = sh.psi_of(F)
        again = sh.level_cut(sh.psi_of(F))
        checks = {
            "psi_T_identity": back.grades == psi.grades,
            "T_psi_sections": _sections_equal(again, F, samples),
        }
        ok = all(checks.values())
        return _Result({"ok": ok, **checks, "samples": len(samples)}, EXIT_OK if ok else EXIT_CHECK)
    if args.action == "stalk":
        F = io.sheaf_or_mono_from_json(data, L)
        p = _parameter(args, allow_bottom=True)
        return _Result({"at": format_element(p), "stalk": _sorted_elements(_wrap(st.stalk, F, p))})
    if args.action == "stalkwise":
        if len(args.inputs) != 2 or not args.map:
            raise io.InputError("stalkwise needs SOURCE TARGET --map MAP")
        E = io.sheaf_or_mono_from_json(data, L)
        F = io.sheaf_or_mono_from_json(io.load_json(args.inputs[1]), L)
        m = io.map_from_json(io.load_json(args.map))
        verdict = _wrap(st.stalkwise_check, m, E, F, args.mode)
        return _Result(io.verdict_to_json(verdict), EXIT_OK if verdict.ok else EXIT_CHECK)
    raise io.InputError(f"unknown sheaf action {args.action!r}")


# -- entry point ------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors, so they exit 1 rather than argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--locale", help="locale descriptor file or inline JSON")
    common.add_argument("--at", help="locale element / parameter, or 'bottom'")
    common.add_argument("--precision", type=int, default=12, help="decimal digits for real inputs")
    common.add_argument("--format", choices=["json", "dot"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    ap = _Parser(prog="fuzzysheaf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="group", required=True, parser_class=_Parser)

    vr = sub.add_parser("vr", parents=[common], help="Vietoris-Rips systems")
    vr.add_argument("action", choices=["build", "sections", "stalk", "pi0", "compare"])
    vr.add_argument("--points", required=True, help="CSV or JSON point cloud")
    vr.add_argument("--other", help="second cloud (superset) for compare")
    vr.add_argument("--R", help="scale bound, larger than every distance")
    vr.add_argument("--dim-cap", type=int, default=sx.DEFAULT_DIM_CAP)
    vr.add_argument("--metric", choices=["squared", "euclidean"], default="squared")
    vr.add_argument("--stalk", action="store_true", help="pi0 of the stalk instead of sections")
    vr.set_defaults(func=cmd_vr)

    fuzzy = sub.add_parser("fuzzy", parents=[common], help="fuzzy set constructions")
    fuzzy.add_argument("action", choices=["limit", "colimit", "validate", "union", "meet"])
    fuzzy.add_argument("inputs", nargs="+")
    fuzzy.set_defaults(func=cmd_fuzzy)

    sheaf = sub.add_parser("sheaf", parents=[common], help="sheaves of monomorphisms and stalks")
    sheaf.add_argument(
        "action",
        choices=["levelcut", "psi", "image", "sheafify", "roundtrip", "stalk", "stalkwise"],
    )
    sheaf.add_argument("inputs", nargs="+")
    sheaf.add_argument("--map", help="element map file for stalkwise")
    sheaf.add_argument("--mode", choices=["mono", "epi", "iso"], default="iso")
    sheaf.set_defaults(func=cmd_sheaf)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (io.InputError, LocaleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = result.text if result.text is not None else io.dump_json(result.payload)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return result.code


if __name__ == "__main__":
    raise SystemExit(main())
