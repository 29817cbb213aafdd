import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzysheaf.locale import BOTTOM, IntervalLocale, Orientation
from fuzzysheaf.simplicial import (
    PointCloud,
    SimplicialError,
    SimplicialFuzzySet,
    complex_hom,
    edge_complex,
    ls_construction,
    pi0,
    point_complex,
    rational_sqrt,
    simplicial_complex,
    simplicial_hom,
    simplicial_validate,
    vr_build,
    vr_compare,
    vr_sections,
    vr_stalk,
)

from . import oracles
from .generators import random_cloud

TRIANGLE = PointCloud.from_rows([(0, 0), (3, 0), (0, 4)])


def counts(simplices):
    return [len(simplices[k]) for k in sorted(simplices)]


@pytest.fixture(scope="module")
def V345():
    return vr_build(TRIANGLE)


def test_default_scale(V345):
    assert V345.R == Q(45, 8)
    assert V345.locale == IntervalLocale(Q(0), Q(2025, 64), Orientation.OPPOSITE)
    assert V345.fuzzy.grade((1, 2)) == 25
    assert V345.diameter((0, 1, 2)) == 5


@pytest.mark.parametrize("s, edges, triangles", [(3, 1, 0), (4, 2, 0), (5, 3, 1), (Q(5, 2), 0, 0)])
def test_sections_345(V345, s, edges, triangles):
    got = vr_sections(V345, s)
    assert counts(got) == [3, edges, triangles]
    assert got == oracles.vr_sections_oracle(TRIANGLE.points, Q(s), 2)


def test_sections_extremes(V345):
    assert counts(vr_sections(V345, 0)) == [3, 0, 0]
    assert counts(vr_sections(V345, V345.R)) == [3, 3, 1]
    with pytest.raises(SimplicialError):
        vr_sections(V345, 6)


def test_stalks_345(V345):
    assert vr_stalk(V345, 4) == {0: {(0,), (1,), (2,)}, 1: {(0, 1)}, 2: frozenset()}
    assert counts(vr_stalk(V345, Q(1, 2))) == [3, 0, 0]
    assert counts(vr_stalk(V345, V345.R)) == [3, 3, 1]
    assert counts(vr_stalk(V345, BOTTOM)) == [3, 3, 1]
    with pytest.raises(SimplicialError):
        vr_stalk(V345, 0)


def test_pi0_345(V345):
    assert pi0(vr_stalk(V345, Q(1, 2))) == [[0], [1], [2]]
    assert pi0(vr_sections(V345, 3)) == [[0, 1], [2]]
    assert pi0(vr_sections(V345, 4)) == [[0, 1, 2]]


def test_single_point():
    V = vr_build(PointCloud.from_rows([(1, 1)]), dim_cap=0)
    assert V.R == 1
    assert counts(vr_sections(V, 0)) == [1]
    assert pi0(vr_stalk(V, Q(1, 2))) == [[0]]
    with pytest.raises(SimplicialError):
        vr_build(PointCloud.from_rows([(1, 1)]))


def test_errors():
    with pytest.raises(SimplicialError):
        vr_build(TRIANGLE, R=5)
    with pytest.raises(SimplicialError):
        vr_build(TRIANGLE, dim_cap=3)
    with pytest.raises(SimplicialError):
        vr_build(TRIANGLE, metric="manhattan")
    assert vr_build(TRIANGLE, R=6).R == 6


def test_euclidean_metric_agrees_on_rational_distances():
    Ve = vr_build(TRIANGLE, R=6, metric="euclidean")
    Vs = vr_build(TRIANGLE, R=6)
    for s in (3, 4, 5, Q(9, 2)):
        assert vr_sections(Ve, s) == vr_sections(Vs, s)


def test_rational_sqrt():
    assert rational_sqrt(Q(2025, 64)) == Q(45, 8)
    assert abs(rational_sqrt(Q(2)) ** 2 - 2) < Q(1, 10**11)


def test_compare_strict_subset_fails_at_vertices():
    X = PointCloud.from_rows([(0, 0), (3, 0)])
    Vy = vr_build(TRIANGLE)
    Vx = vr_build(X, R=Vy.R, dim_cap=1)
    with pytest.raises(SimplicialError):
        vr_compare(Vx, Vy)
    Vy1 = vr_build(TRIANGLE, dim_cap=1)
    report = vr_compare(vr_build(X, R=Vy1.R, dim_cap=1), Vy1)
    assert not report.ok and report.level == 0
    w = report.verdict.witness
    assert w.element == (2,) and w.reason == "not-surjective"
    assert w.point == 9 and report.discrete_scale == 3
    assert report.pi0_sizes == (2, 3)


def test_compare_identical_passes(V345):
    report = vr_compare(vr_build(TRIANGLE), V345)
    assert report.ok and report.pi0_sizes == (3, 3)


def test_validate_and_mutation(V345):
    ok, problems = simplicial_validate(V345.fuzzy)
    assert ok and problems == []
    levels = [dict(lv.grades) for lv in V345.fuzzy.levels]
    levels[1][(0, 1)] = Q(30)
    ok, problems = simplicial_validate(SimplicialFuzzySet(V345.locale, 2, tuple(levels)))
    assert not ok
    assert any(sigma == (0, 1, 2) and "grade condition" in msg for sigma, msg in problems)
    levels = [dict(lv.grades) for lv in V345.fuzzy.levels]
    del levels[1][(0, 2)]
    ok, problems = simplicial_validate(SimplicialFuzzySet(V345.locale, 2, tuple(levels)))
    assert not ok and ((0, 1, 2), "face d1 missing") in problems


def test_ls_construction_examples(V345):
    L = V345.locale
    A = ls_construction(L, 16, edge_complex(), 2)
    assert A.sections(16) == {0: {(0,), (1,)}, 1: {(0, 1)}, 2: frozenset()}
    assert A.sections(25) == A.sections(16)
    assert A.sections(9) == {0: frozenset(), 1: frozenset(), 2: frozenset()}
    # maps out of L_16(edge) are edges of diameter at most 4
    maps = simplicial_hom(A, V345.sheaf)
    assert sorted(tuple(f.values()) for f in maps) == sorted(
        [(v, v) for v in range(3)] + [(0, 1), (0, 2)]
    )
    assert len(simplicial_hom(ls_construction(L, 0, point_complex(), 2), V345.sheaf)) == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_ls_adjunction(seed):
    rng = random.Random(seed)
    cloud = random_cloud(rng, rng.randint(3, 4), denominator=2, spread=4)
    V = vr_build(cloud)
    grades = sorted(V.sheaf.grade_values())
    s = rng.choice(grades + [V.locale.initial(), V.locale.top()])
    K = simplicial_complex(rng.choice([[(0,)], [(0, 1)], [(0, 1), (1, 2)], [(0, 1, 2)], [(0,), (1,)]]))
    A = ls_construction(V.locale, s, K, V.dim_cap)
    left = simplicial_hom(A, V.sheaf)
    right = complex_hom(K, V.sheaf.sections(s))
    key = lambda fs: sorted(tuple(sorted(f.items())) for f in fs)
    assert key(left) == key(right)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_vr_properties(seed):
    rng = random.Random(seed)
    cloud = random_cloud(rng, rng.randint(1, 6))
    cap = min(2, len(cloud) - 1)
    V = vr_build(cloud, dim_cap=cap)
    assert simplicial_validate(V.fuzzy)[0]
    dists = sorted({rational_sqrt(g) for g in V.sheaf.grade_values()})
    probes = sorted(set(dists) | {(a + b) / 2 for a, b in zip(dists, dists[1:])} | {V.R})
    previous = None
    for s in probes:
        got = vr_sections(V, s)
        assert got == oracles.vr_sections_oracle(cloud.points, s, cap)
        # face closure
        for k in range(1, cap + 1):
            for sigma in got[k]:
                assert all(sigma[:i] + sigma[i + 1 :] in got[k - 1] for i in range(k + 1))
        if previous is not None:
            assert all(previous[k] <= got[k] for k in got)
        previous = got
        if s > 0:
            stalk_ = vr_stalk(V, s)
            assert stalk_ == oracles.vr_stalk_oracle(cloud.points, s, cap)
            # stalk below sections at s, above sections at any smaller probe
            assert all(stalk_[k] <= got[k] for k in got)
            comps = pi0(stalk_)
            assert comps == oracles.components(range(len(cloud)), stalk_.get(1, ()))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_ordering_invariance(seed):
    rng = random.Random(seed)
    cloud = random_cloud(rng, rng.randint(2, 5))
    perm = list(range(len(cloud)))
    rng.shuffle(perm)
    shuffled = PointCloud(tuple(cloud.points[i] for i in perm))
    V, W = vr_build(cloud, dim_cap=1), vr_build(shuffled, dim_cap=1)
    assert V.R == W.R
    assert vr_compare(V, W).ok
    for s in sorted({rational_sqrt(g) for g in V.sheaf.grade_values()}):
        a, b = vr_sections(V, s), vr_sections(W, s)
        assert [len(a[k]) for k in a] == [len(b[k]) for k in b]
        assert sorted(map(len, pi0(a))) == sorted(map(len, pi0(b)))
