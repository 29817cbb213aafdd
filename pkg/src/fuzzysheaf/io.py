"""Reading and writing the JSON, CSV and DOT artifacts.

Numbers are always exchanged as decimal or ``p/q`` strings (plain JSON
integers are accepted on input).  Every reader validates against a JSON
schema first and raises :class:`InputError` naming the offending field.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from jsonschema import Draft202012Validator

from .fuzzy import Arrow, Diagram, FuzzyMorphism, FuzzySet
from .locale import (
    IntervalLocale,
    LocaleError,
    format_element,
    format_rational,
    parse_element,
    to_rational,
)
from .sheaf import MonoPresheaf, StepPresheaf
from .simplicial import PointCloud, SimplicialFuzzySet, VRSystem
from .stalks import Verdict


class InputError(ValueError):
    pass


_NUMBER = {"anyOf": [{"type": "string"}, {"type": "integer"}]}

LOCALE_SCHEMA = {
    "type": "object",
    "required": ["lo", "hi"],
    "properties": {
        "lo": _NUMBER,
        "hi": _NUMBER,
        "orientation": {"enum": ["standard", "opposite"]},
    },
}

_ELEMENT = {
    "type": "object",
    "required": ["id", "grade"],
    "properties": {"id": {"type": "string"}, "grade": _NUMBER, "attained": {"type": "boolean"}},
}

FUZZY_SCHEMA = {
    "type": "object",
    "required": ["elements"],
    "properties": {
        "locale": LOCALE_SCHEMA,
        "elements": {"type": "array", "items": _ELEMENT},
    },
}

MONO_SCHEMA = {
    "type": "object",
    "required": ["elements"],
    "properties": {
        "locale": LOCALE_SCHEMA,
        "elements": {
            "type": "array",
            "items": {**_ELEMENT, "required": ["id", "grade", "attained"]},
        },
    },
}

STEP_SCHEMA = {
    "type": "object",
    "required": ["cuts", "levels", "restrictions"],
    "properties": {
        "locale": LOCALE_SCHEMA,
        "cuts": {"type": "array", "items": _NUMBER, "minItems": 1},
        "levels": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
        "restrictions": {
            "type": "array",
            "items": {"type": "object", "additionalProperties": {"type": "string"}},
        },
    },
}

DIAGRAM_SCHEMA = {
    "type": "object",
    "required": ["nodes"],
    "properties": {
        "locale": LOCALE_SCHEMA,
        "nodes": {"type": "object", "additionalProperties": FUZZY_SCHEMA},
        "arrows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "map"],
                "properties": {
                    "from": {"type": "string"},
                    "to": {"type": "string"},
                    "map": {"type": "object", "additionalProperties": {"type": "string"}},
                },
            },
        },
    },
}

MORPHISM_SCHEMA = {
    "type": "object",
    "required": ["source", "target", "map"],
    "properties": {
        "locale": LOCALE_SCHEMA,
        "source": FUZZY_SCHEMA,
        "target": FUZZY_SCHEMA,
        "map": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

MAP_SCHEMA = {"type": "object", "additionalProperties": {"type": "string"}}

CLOUD_SCHEMA = {
    "type": "array",
    "minItems": 1,
    "items": {"type": "array", "minItems": 1, "items": {"type": ["string", "number"]}},
}

VR_SCHEMA = {
    "type": "object",
    "required": ["locale", "dim_cap", "levels"],
    "properties": {
        "locale": LOCALE_SCHEMA,
        "dim_cap": {"type": "integer", "minimum": 0},
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "simplices"],
                "properties": {
                    "k": {"type": "integer"},
                    "simplices": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["vertices", "grade"],
                            "properties": {
                                "vertices": {"type": "array", "items": {"type": "integer"}},
                                "grade": _NUMBER,
                            },
                        },
                    },
                },
            },
        },
    },
}


def validate(data: Any, schema: dict, what: str) -> None:
    errors = sorted(Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        lines = []
        for e in errors[:20]:
            path = ".".join(str(p) for p in e.path) or "<root>"
            lines.append(f"{path}: {e.message}")
        raise InputError(f"invalid {what}:\n  " + "\n  ".join(lines))


def load_json(path) -> Any:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def _rational(value, field: str) -> Fraction:
    try:
        return to_rational(value)
    except LocaleError as exc:
        raise InputError(f"{field}: {exc}") from None


def locale_from_json(data, fallback=None) -> IntervalLocale:
    if data is None:
        if fallback is None:
            raise InputError("locale: missing (give it in the file or with --locale)")
        return fallback
    validate(data, LOCALE_SCHEMA, "locale")
    try:
        return IntervalLocale.from_dict(data)
    except LocaleError as exc:
        raise InputError(f"locale: {exc}") from None


def _elements(data, key="elements"):
    seen = set()
    for n, item in enumerate(data[key]):
        if item["id"] in seen:
            raise InputError(f"{key}.{n}.id: duplicate element id {item['id']!r}")
        seen.add(item["id"])
        yield n, item


def fuzzy_from_json(data, locale=None) -> FuzzySet:
    validate(data, FUZZY_SCHEMA, "fuzzy set")
    L = locale_from_json(data.get("locale"), locale)
    grades = {}
    for n, item in _elements(data):
        grades[item["id"]] = _rational(item["grade"], f"elements.{n}.grade")
    try:
        return FuzzySet(L, grades)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def fuzzy_to_json(fs: FuzzySet) -> dict:
    return {
        "locale": fs.locale.to_dict(),
        "elements": [{"id": str(x), "grade": format_rational(fs.grades[x])} for x in sorted(fs.grades)],
    }


def mono_from_json(data, locale=None) -> MonoPresheaf:
    validate(data, MONO_SCHEMA, "presheaf of monomorphisms")
    L = locale_from_json(data.get("locale"), locale)
    grades, attained = {}, {}
    for n, item in _elements(data):
        grades[item["id"]] = _rational(item["grade"], f"elements.{n}.grade")
        attained[item["id"]] = item["attained"]
    try:
        return MonoPresheaf(L, grades, attained)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def sheaf_or_mono_from_json(data, locale=None) -> MonoPresheaf:
    """Accept a presheaf file, or a plain fuzzy set file read as its level cut."""
    elements = data.get("elements") if isinstance(data, dict) else None
    if isinstance(elements, list) and elements and all(
        isinstance(e, dict) and "attained" in e for e in elements
    ):
        return mono_from_json(data, locale)
    fs = fuzzy_from_json(data, locale)
    return MonoPresheaf.sheaf(fs.locale, fs.grades)


def mono_to_json(F: MonoPresheaf) -> dict:
    return {
        "locale": F.locale.to_dict(),
        "elements": [
            {"id": str(x), "grade": format_rational(F.grades[x]), "attained": F.attained[x]}
            for x in sorted(F.grades)
        ],
    }


def step_from_json(data, locale=None) -> StepPresheaf:
    validate(data, STEP_SCHEMA, "step presheaf")
    L = locale_from_json(data.get("locale"), locale)
    cuts = [_rational(c, f"cuts.{n}") for n, c in enumerate(data["cuts"])]
    try:
        return StepPresheaf(L, cuts, data["levels"], data["restrictions"])
    except ValueError as exc:
        raise InputError(str(exc)) from None


def step_to_json(E: StepPresheaf) -> dict:
    return {
        "locale": E.locale.to_dict(),
        "cuts": [format_rational(c) for c in E.cuts],
        "levels": [sorted(level) for level in E.levels],
        "restrictions": [dict(sorted(r.items())) for r in E.restrictions],
    }


def diagram_from_json(data, locale=None) -> Diagram:
    validate(data, DIAGRAM_SCHEMA, "diagram")
    L = locale_from_json(data.get("locale"), locale)
    nodes = {}
    for name, node in data["nodes"].items():
        fs = fuzzy_from_json(node, L)
        if fs.locale != L:
            raise InputError(f"nodes.{name}.locale: mixed locales in one diagram")
        nodes[name] = fs
    arrows = [Arrow(a["from"], a["to"], a["map"]) for a in data.get("arrows", [])]
    try:
        return Diagram(L, nodes, arrows)
    except ValueError as exc:
        raise InputError(f"arrows: {exc}") from None


def diagram_to_json(D: Diagram) -> dict:
    return {
        "locale": D.locale.to_dict(),
        "nodes": {
            name: {"elements": fuzzy_to_json(fs)["elements"]} for name, fs in D.nodes.items()
        },
        "arrows": [
            {"from": a.source, "to": a.target, "map": dict(sorted(a.mapping.items()))}
            for a in D.arrows
        ],
    }


def morphism_from_json(data, locale=None) -> FuzzyMorphism:
    validate(data, MORPHISM_SCHEMA, "morphism")
    L = locale_from_json(data.get("locale"), locale)
    return FuzzyMorphism(
        fuzzy_from_json(data["source"], L), fuzzy_from_json(data["target"], L), data["map"]
    )


def morphism_to_json(m: FuzzyMorphism) -> dict:
    return {
        "locale": m.source.locale.to_dict(),
        "source": fuzzy_to_json(m.source),
        "target": fuzzy_to_json(m.target),
        "map": {str(k): str(v) for k, v in sorted(m.mapping.items())},
    }


def map_from_json(data) -> dict:
    validate(data, MAP_SCHEMA, "element map")
    return dict(data)


def cloud_from_text(text: str, digits: int = 12, fmt: str | None = None) -> PointCloud:
    """Parse a point cloud from CSV rows or a JSON array of arrays."""
    stripped = text.lstrip()
    if fmt == "json" or (fmt is None and stripped.startswith("[")):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"points: line {exc.lineno}: {exc.msg}") from None
        validate(data, CLOUD_SCHEMA, "point cloud")
        rows = [[c if isinstance(c, str) else repr(c) for c in row] for row in data]
        where = [f"points.{n}" for n in range(len(rows))]
    else:
        rows, where = [], []
        for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
            cells = [c.strip() for c in row]
            if not cells or not any(cells) or cells[0].startswith("#"):
                continue
            rows.append(cells)
            where.append(f"line {lineno}")
    parsed = []
    for loc, row in zip(where, rows):
        try:
            parsed.append(tuple(to_rational(c, digits) for c in row))
        except LocaleError as exc:
            raise InputError(f"{loc}: {exc}") from None
    try:
        return PointCloud(tuple(parsed))
    except ValueError as exc:
        raise InputError(f"points: {exc}") from None


def load_cloud(path, digits: int = 12) -> PointCloud:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    fmt = "json" if path.suffix == ".json" else ("csv" if path.suffix == ".csv" else None)
    return cloud_from_text(text, digits, fmt)


def cloud_to_csv(cloud: PointCloud) -> str:
    return "".join(",".join(format_rational(c) for c in p) + "\n" for p in cloud.points)


def cloud_to_json(cloud: PointCloud) -> list:
    return [[format_rational(c) for c in p] for p in cloud.points]


def vr_to_json(V: VRSystem) -> dict:
    levels = []
    for k, lv in enumerate(V.fuzzy.levels):
        levels.append(
            {
                "k": k,
                "simplices": [
                    {
                        "vertices": list(sigma),
                        "grade": format_rational(lv.grades[sigma]),
                        "diameter": format_rational(V.diameter(sigma)),
                    }
                    for sigma in sorted(lv.grades)
                ],
            }
        )
    return {
        "metric": V.metric,
        "R": format_rational(V.R),
        "locale": V.locale.to_dict(),
        "dim_cap": V.dim_cap,
        "meta": dict(V.meta),
        "levels": levels,
    }


def simplicial_from_json(data) -> SimplicialFuzzySet:
    """Read back the levels of a VR output file as a simplicial fuzzy set."""
    validate(data, VR_SCHEMA, "simplicial fuzzy set")
    L = locale_from_json(data["locale"])
    dim_cap = data["dim_cap"]
    levels = [dict() for _ in range(dim_cap + 1)]
    for n, level in enumerate(data["levels"]):
        k = level["k"]
        if not 0 <= k <= dim_cap:
            raise InputError(f"levels.{n}.k: outside 0..{dim_cap}")
        for m, simplex in enumerate(level["simplices"]):
            levels[k][tuple(simplex["vertices"])] = _rational(
                simplex["grade"], f"levels.{n}.simplices.{m}.grade"
            )
    try:
        return SimplicialFuzzySet(L, dim_cap, tuple(levels))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def simplices_to_json(simplices: dict) -> dict:
    return {
        "levels": [
            {"k": k, "simplices": [list(s) for s in sorted(simplices[k])]}
            for k in sorted(simplices)
        ]
    }


def skeleton_to_dot(simplices: dict, name: str = "vr") -> str:
    """Graphviz rendering of the 1-skeleton of a simplex family."""
    lines = [f"graph {name} {{"]
    for (v,) in sorted(simplices.get(0, ())):
        lines.append(f"  {v};")
    for a, b in sorted(simplices.get(1, ())):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def verdict_to_json(v: Verdict) -> dict:
    out = {"mode": v.mode, "ok": v.ok}
    if v.witness is not None:
        out["witness"] = {
            "point": format_element(v.witness.point),
            "element": _element_text(v.witness.element),
            "reason": v.witness.reason,
        }
    if v.sectionwise is not None:
        out["sectionwise"] = v.sectionwise
    return out


def _element_text(x) -> Any:
    return list(x) if isinstance(x, tuple) else str(x)


def parse_point(text: str):
    """Parse a ``--at`` argument: a rational or ``bottom``."""
    try:
        return parse_element(text)
    except LocaleError as exc:
        raise InputError(f"--at: {exc}") from None

