import json
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzysheaf import io
from fuzzysheaf.fuzzy import FuzzyMorphism, FuzzySet
from fuzzysheaf.locale import BOTTOM, IntervalLocale
from fuzzysheaf.sheaf import MonoPresheaf, StepPresheaf
from fuzzysheaf.simplicial import PointCloud, vr_build
from fuzzysheaf.stalks import stalkwise_check

from .generators import UNIT, random_cloud, random_diagram, random_fuzzy, random_locale, random_mono


def reread(tmp_path, payload, name="x.json"):
    path = tmp_path / name
    path.write_text(io.dump_json(payload))
    return io.load_json(path)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_fuzzy_and_mono_roundtrip(seed):
    rng = random.Random(seed)
    L = random_locale(rng)
    fs = random_fuzzy(rng, L, rng.randint(0, 5))
    assert io.fuzzy_from_json(json.loads(io.dump_json(io.fuzzy_to_json(fs)))) == fs
    F = random_mono(rng, L, rng.randint(0, 5))
    assert io.mono_from_json(json.loads(io.dump_json(io.mono_to_json(F)))) == F


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_diagram_roundtrip(seed):
    D = random_diagram(random.Random(seed))
    data = io.diagram_to_json(D)
    again = io.diagram_from_json(json.loads(io.dump_json(data)))
    assert again.nodes == D.nodes
    assert io.diagram_to_json(again) == data


def test_step_morphism_and_map_roundtrip(tmp_path):
    E = StepPresheaf(UNIT, [Q(1, 2), Q(1)], ["abc", "pq", "r"], [{"p": "a", "q": "a"}, {"r": "p"}])
    assert io.step_from_json(reread(tmp_path, io.step_to_json(E))) == E
    m = FuzzyMorphism(
        FuzzySet(UNIT, {"a": Q(1, 4)}), FuzzySet(UNIT, {"u": Q(1, 2), "v": Q(0)}), {"a": "u"}
    )
    back = io.morphism_from_json(reread(tmp_path, io.morphism_to_json(m)))
    assert (back.source, back.target, dict(back.mapping)) == (m.source, m.target, {"a": "u"})
    assert io.map_from_json({"a": "u"}) == {"a": "u"}


def test_locale_fallback_and_override(tmp_path):
    data = {"elements": [{"id": "a", "grade": "1/2"}]}
    with pytest.raises(io.InputError, match="locale: missing"):
        io.fuzzy_from_json(data)
    L = IntervalLocale(Q(0), Q(2))
    assert io.fuzzy_from_json(data, L).locale == L
    assert io.locale_from_json({"lo": 0, "hi": "9", "orientation": "opposite"}).is_opposite


def test_fuzzy_file_read_as_sheaf():
    data = {"locale": UNIT.to_dict(), "elements": [{"id": "a", "grade": "0.3"}]}
    assert io.sheaf_or_mono_from_json(data) == MonoPresheaf.sheaf(UNIT, {"a": Q(3, 10)})


@pytest.mark.parametrize(
    "reader, data, field",
    [
        (io.fuzzy_from_json, {"locale": {"lo": 0, "hi": 1}, "elements": [{"id": "a"}]}, "elements.0"),
        (io.fuzzy_from_json, {"locale": {"lo": 0, "hi": 1}, "elements": [{"id": "a", "grade": 2}]}, "grade"),
        (io.fuzzy_from_json, {"locale": {"lo": 0, "hi": 1}, "elements": [{"id": "a", "grade": "x"}]}, "elements.0.grade"),
        (
            io.fuzzy_from_json,
            {"locale": {"lo": 0, "hi": 1}, "elements": [{"id": "a", "grade": 0}, {"id": "a", "grade": 1}]},
            "elements.1.id",
        ),
        (io.mono_from_json, {"locale": {"lo": 0, "hi": 1}, "elements": [{"id": "a", "grade": 1}]}, "elements.0"),
        (io.locale_from_json, {"lo": 0, "hi": 1, "orientation": "sideways"}, "orientation"),
        (io.locale_from_json, {"lo": 0}, "<root>"),
        (io.diagram_from_json, {"locale": {"lo": 0, "hi": 1}, "nodes": {}, "arrows": [{"from": "A"}]}, "arrows.0"),
        (io.step_from_json, {"locale": {"lo": 0, "hi": 1}, "cuts": [], "levels": [], "restrictions": []}, "cuts"),
    ],
)
def test_schema_errors_name_the_field(reader, data, field):
    with pytest.raises(io.InputError) as info:
        reader(data)
    assert field in str(info.value)


def test_load_json_reports_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"elements": [\n  {"id": "a",}\n]}')
    with pytest.raises(io.InputError, match="line 2"):
        io.load_json(bad)
    with pytest.raises(io.InputError, match="cannot read"):
        io.load_json(tmp_path / "missing.json")


def test_clouds(tmp_path):
    csv_text = "# x,y\n0,0\n3,0.0\n\n0,4\n"
    cloud = io.cloud_from_text(csv_text)
    assert cloud == PointCloud.from_rows([(0, 0), (3, 0), (0, 4)])
    assert io.cloud_from_text(io.cloud_to_csv(cloud)) == cloud
    assert io.cloud_from_text(json.dumps(io.cloud_to_json(cloud))) == cloud
    assert io.cloud_from_text("[[0, 0.5], [1, \"1/3\"]]").points[1] == (Q(1), Q(1, 3))
    path = tmp_path / "c.json"
    path.write_text("[[0,0],[1,1]]")
    assert len(io.load_cloud(path)) == 2
    with pytest.raises(io.InputError, match="line 2"):
        io.cloud_from_text("0,0\n1,abc\n")
    with pytest.raises(io.InputError, match="points"):
        io.cloud_from_text("0,0\n1,2,3\n")
    with pytest.raises(io.InputError):
        io.cloud_from_text("[]")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_vr_roundtrip(seed):
    rng = random.Random(seed)
    V = vr_build(random_cloud(rng, rng.randint(3, 5)))
    data = json.loads(io.dump_json(io.vr_to_json(V)))
    assert io.simplicial_from_json(data) == V.fuzzy
    assert Q(data["R"]) == V.R


def test_dot_and_verdict():
    dot = io.skeleton_to_dot({0: {(0,), (1,), (2,)}, 1: {(0, 1)}})
    assert dot == "graph vr {\n  0;\n  1;\n  2;\n  0 -- 1;\n}\n"
    E, F = MonoPresheaf.sheaf(UNIT, {"a": Q(3, 10)}), MonoPresheaf.sheaf(UNIT, {"a": Q(1, 2)})
    out = io.verdict_to_json(stalkwise_check({"a": "a"}, E, F, "epi"))
    assert out == {"mode": "epi", "ok": False, "witness": {"point": "2/5", "element": "a", "reason": "not-surjective"}}
    assert io.parse_point("bottom") is BOTTOM
    assert io.parse_point("0.25") == Q(1, 4)
    with pytest.raises(io.InputError):
        io.parse_point("nope")
