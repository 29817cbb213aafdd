"""Simplicial fuzzy sets and the Vietoris-Rips system of a finite point cloud.

Simplices are stored nondegenerate, as strictly increasing vertex tuples.  A
degenerate simplex (a non-decreasing tuple with repeats) has the grade of the
nondegenerate simplex on its distinct vertices.

The VR system lives over ``[0, R]^op``: a simplex is graded by its diameter,
so its sections over ``s`` form the VR complex ``V_s(X)``.  By default grades
are exact squared diameters (locale ``[0, R^2]^op``); parameters such as ``s``
and ``t`` are always given as distances and squared on the way in.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .fuzzy import FuzzySet
from .locale import BOTTOM, IntervalLocale, Orientation, to_rational
from .sheaf import MonoPresheaf, sample_points
from .stalks import Verdict, stalk, stalk_points, stalkwise_check
from .unionfind import UnionFind

DEFAULT_DIM_CAP = 2
DEFAULT_R_FACTOR = Fraction(9, 8)


class SimplicialError(ValueError):
    pass


def rational_sqrt(q: Fraction, digits: int = 12) -> Fraction:
    """Square root, exact for rational squares, else rounded to ``digits`` places."""
    if q < 0:
        raise SimplicialError("square root of a negative number")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    with localcontext() as ctx:
        ctx.prec = digits + 30
        root = (Decimal(n) / Decimal(d)).sqrt()
    return Fraction(round(root, digits))


@dataclass(frozen=True)
class PointCloud:
    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(to_rational(c) for c in p) for p in self.points)
        if not pts:
            raise SimplicialError("a point cloud needs at least one point")
        if len({len(p) for p in pts}) != 1:
            raise SimplicialError("all points must have the same dimension")
        if len(set(pts)) != len(pts):
            raise SimplicialError("points must be distinct")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], digits: int = 12) -> "PointCloud":
        return cls(tuple(tuple(to_rational(c, digits) for c in row) for row in rows))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def squared_distance(self, i: int, j: int) -> Fraction:
        return sum(((a - b) ** 2 for a, b in zip(self.points[i], self.points[j])), Fraction(0))

    def index_of(self, point) -> Optional[int]:
        try:
            return self.points.index(tuple(point))
        except ValueError:
            return None


def dedup(simplex: Sequence[int]) -> tuple:
    return tuple(sorted(set(simplex)))


def face(simplex: tuple, i: int) -> tuple:
    return simplex[:i] + simplex[i + 1 :]


def degeneracy(simplex: tuple, j: int) -> tuple:
    return simplex[: j + 1] + simplex[j:]


def ordinal_maps(m: int, k: int):
    """Monotone maps ``[m] -> [k]`` as tuples of images."""
    return itertools.combinations_with_replacement(range(k + 1), m + 1)


def pull_back(simplex: Sequence[int], theta: Sequence[int]) -> tuple:
    return tuple(simplex[t] for t in theta)


@dataclass(frozen=True)
class SimplicialMonoPresheaf:
    """Levelwise presheaves of monomorphisms with vertex-tuple carriers."""

    locale: IntervalLocale
    levels: tuple

    def sections(self, a) -> dict:
        return {k: F.sections(a) for k, F in enumerate(self.levels)}

    def stalk(self, p) -> dict:
        return {k: stalk(F, p) for k, F in enumerate(self.levels)}

    def grade_values(self) -> set:
        out = set()
        for F in self.levels:
            out |= F.grade_values()
        return out

    def vertices(self) -> list:
        return sorted(v for (v,) in self.levels[0].grades) if self.levels else []


@dataclass(frozen=True)
class SimplicialFuzzySet:
    """Levels ``0..dim_cap`` of nondegenerate simplices with their grades."""

    locale: IntervalLocale
    dim_cap: int
    levels: tuple

    def __post_init__(self):
        levels = tuple(FuzzySet(self.locale, lv) for lv in self.levels)
        if len(levels) != self.dim_cap + 1:
            raise SimplicialError("need one level per dimension up to dim_cap")
        object.__setattr__(self, "levels", levels)

    def grade(self, simplex: Sequence[int]) -> Fraction:
        base = dedup(simplex)
        return self.levels[len(base) - 1].grades[base]

    def level_cut(self) -> SimplicialMonoPresheaf:
        return SimplicialMonoPresheaf(
            self.locale, tuple(MonoPresheaf.sheaf(self.locale, lv.grades) for lv in self.levels)
        )


def simplicial_validate(Z: SimplicialFuzzySet) -> tuple[bool, list]:
    """Check the encoding, simplicial identities and the grade condition for
    every monotone ordinal map into each stored simplex."""
    L = Z.locale
    problems = []
    for k, lv in enumerate(Z.levels):
        for sigma in sorted(lv.grades):
            if len(sigma) != k + 1 or any(a >= b for a, b in zip(sigma, sigma[1:])):
                problems.append((sigma, "not a strictly increasing vertex tuple"))
                continue
            missing = [i for i in range(k + 1) if k and face(sigma, i) not in Z.levels[k - 1].grades]
            if missing:
                problems.extend((sigma, f"face d{i} missing") for i in missing)
                continue
            problems.extend((sigma, msg) for msg in _identity_failures(sigma))
            g = lv.grades[sigma]
            for m in range(Z.dim_cap + 1):
                for theta in ordinal_maps(m, k):
                    h = Z.grade(pull_back(sigma, theta))
                    surjective = len(set(theta)) == k + 1
                    if not L.leq(g, h):
                        problems.append((sigma, f"grade condition fails for theta={theta}"))
                    elif surjective and h != g:
                        problems.append((sigma, f"degeneracy theta={theta} changes the grade"))
    return not problems, problems


def _identity_failures(sigma: tuple) -> list:
    k = len(sigma) - 1
    out = []
    for j in range(k + 1):
        for i in range(j):
            if face(face(sigma, j), i) != face(face(sigma, i), j - 1):
                out.append(f"d{i}d{j} != d{j - 1}d{i}")
        for i in range(j + 1):
            if degeneracy(degeneracy(sigma, j), i) != degeneracy(degeneracy(sigma, i), j + 1):
                out.append(f"s{i}s{j} != s{j + 1}s{i}")
        for i in range(k + 2):
            lhs = face(degeneracy(sigma, j), i)
            if i < j:
                rhs = degeneracy(face(sigma, i), j - 1)
            elif i in (j, j + 1):
                rhs = sigma
            else:
                rhs = degeneracy(face(sigma, i - 1), j)
            if lhs != rhs:
                out.append(f"d{i}s{j} identity fails")
    return out


@dataclass(frozen=True)
class VRSystem:
    cloud: PointCloud
    R: Fraction
    dim_cap: int
    metric: str
    fuzzy: SimplicialFuzzySet
    digits: int = 12
    meta: dict = field(default_factory=dict)

    @property
    def locale(self) -> IntervalLocale:
        return self.fuzzy.locale

    @cached_property
    def sheaf(self) -> SimplicialMonoPresheaf:
        return self.fuzzy.level_cut()

    def param(self, s) -> Fraction:
        """Locale element for a distance ``s``."""
        s = to_rational(s, self.digits)
        if s < 0:
            raise SimplicialError("distances are nonnegative")
        return s * s if self.metric == "squared" else s

    def diameter(self, simplex) -> Fraction:
        g = self.fuzzy.grade(simplex)
        return rational_sqrt(g, self.digits) if self.metric == "squared" else g


def vr_build(
    cloud: PointCloud,
    R=None,
    dim_cap: int = DEFAULT_DIM_CAP,
    metric: str = "squared",
    digits: int = 12,
) -> VRSystem:
    """Grade every simplex of the full simplex on ``cloud`` by its diameter."""
    if metric not in ("squared", "euclidean"):
        raise SimplicialError(f"unknown metric {metric!r}")
    n = len(cloud)
    if dim_cap < 0:
        raise SimplicialError("dim_cap must be nonnegative")
    if dim_cap > n - 1:
        raise SimplicialError(f"dim_cap {dim_cap} exceeds the {n - 1}-simplex on the cloud")
    sq = {
        (i, j): cloud.squared_distance(i, j) for i, j in itertools.combinations(range(n), 2)
    }
    if metric == "squared":
        pair = sq
    else:
        pair = {ij: rational_sqrt(v, digits) for ij, v in sq.items()}
    largest = max(pair.values(), default=Fraction(0))
    meta = {}
    if R is None:
        # R itself stays rational so a second cloud can share the same locale
        base = rational_sqrt(largest, digits) if metric == "squared" else largest
        R = base * DEFAULT_R_FACTOR if largest else Fraction(1)
        hi = R * R if metric == "squared" else R
        meta["R_default"] = f"{DEFAULT_R_FACTOR} x max distance"
    else:
        R = to_rational(R, digits)
        hi = R * R if metric == "squared" else R
        if not hi > largest:
            raise SimplicialError("R must exceed every pairwise distance")
    locale = IntervalLocale(Fraction(0), hi, Orientation.OPPOSITE)
    levels = []
    for k in range(dim_cap + 1):
        level = {}
        for sigma in itertools.combinations(range(n), k + 1):
            level[sigma] = max(
                (pair[ij] for ij in itertools.combinations(sigma, 2)), default=Fraction(0)
            )
        levels.append(level)
    fuzzy = SimplicialFuzzySet(locale, dim_cap, tuple(levels))
    return VRSystem(cloud, R, dim_cap, metric, fuzzy, digits, meta)


def vr_sections(V: VRSystem, s) -> dict:
    """Simplices of diameter at most ``s``, per level."""
    a = V.param(s)
    if not V.locale.contains(a):
        raise SimplicialError(f"parameter {s} lies outside [0, R]")
    return V.sheaf.sections(a)


def vr_stalk(V: VRSystem, t) -> dict:
    """Simplices of diameter strictly below ``t``; BOTTOM gives the full skeleton."""
    if t is BOTTOM:
        return V.sheaf.stalk(BOTTOM)
    a = V.param(t)
    if a == 0:
        raise SimplicialError("t = 0 is the top of [0,R]^op and has no stalk")
    if not V.locale.contains(a):
        raise SimplicialError(f"parameter {t} lies outside (0, R]")
    return V.sheaf.stalk(a)


def pi0(simplices: Mapping[int, Iterable[tuple]]) -> list:
    """Connected components of the 1-skeleton, each a sorted vertex list."""
    uf = UnionFind(v for (v,) in simplices.get(0, ()))
    for edge in simplices.get(1, ()):
        for v in edge:
            uf.add(v)
        uf.union(edge[0], edge[1])
    return list(uf.classes().values())


@dataclass(frozen=True)
class CompareReport:
    ok: bool
    level: Optional[int] = None
    verdict: Optional[Verdict] = None
    failures: tuple = ()
    discrete_scale: Optional[Fraction] = None
    pi0_sizes: tuple = ()


def inclusion_map(X: PointCloud, Y: PointCloud) -> dict:
    idx = {}
    for i, p in enumerate(X.points):
        j = Y.index_of(p)
        if j is None:
            raise SimplicialError(f"point {i} of the first cloud is not in the second")
        idx[i] = j
    return idx


def vr_compare(Vx: VRSystem, Vy: VRSystem) -> CompareReport:
    """Stalkwise isomorphism check for the map ``V(X) -> V(Y)`` of an inclusion."""
    if Vx.locale != Vy.locale or Vx.metric != Vy.metric:
        raise SimplicialError("both systems need the same R and metric")
    if Vx.dim_cap != Vy.dim_cap:
        raise SimplicialError("both systems need the same dim_cap")
    idx = inclusion_map(Vx.cloud, Vy.cloud)
    Ex, Ey = Vx.sheaf, Vy.sheaf
    points = [BOTTOM] + Vx.locale.sorted(
        p for E, F in zip(Ex.levels, Ey.levels) for p in stalk_points(E, F)[1:]
    )
    failures = []
    for k, (E, F) in enumerate(zip(Ex.levels, Ey.levels)):
        m = {sigma: tuple(sorted(idx[v] for v in sigma)) for sigma in E.grades}
        verdict = stalkwise_check(m, E, F, "iso", points=points)
        if not verdict.ok:
            failures.append((k, verdict))

    # below the least positive distance of Y every stalk is the discrete vertex set
    positive = [g for g in Vy.fuzzy.levels[1].grades.values()] if Vy.dim_cap >= 1 else []
    small = min(positive) if positive else Vy.locale.initial()
    small_t = rational_sqrt(small, Vy.digits) if Vy.metric == "squared" else small
    sizes = (len(pi0(Ex.stalk(small))), len(pi0(Ey.stalk(small))))
    if not failures:
        return CompareReport(True, discrete_scale=small_t, pi0_sizes=sizes)
    level, verdict = failures[0]
    if level == 0:
        m0 = {s: (idx[s[0]],) for s in Ex.levels[0].grades}
        at_small = stalkwise_check(m0, Ex.levels[0], Ey.levels[0], "iso", points=[small])
        if not at_small.ok:
            verdict = at_small
    return CompareReport(False, level, verdict, tuple(failures), small_t, sizes)


def simplicial_complex(simplices: Iterable[Sequence[int]]) -> frozenset:
    """Close a family of vertex sets under faces; tuples come out sorted."""
    out = set()
    for s in simplices:
        base = dedup(s)
        for r in range(1, len(base) + 1):
            out.update(itertools.combinations(base, r))
    return frozenset(out)


def ls_construction(locale: IntervalLocale, s, K: Iterable, dim_cap: int) -> SimplicialMonoPresheaf:
    """Product of the representable at ``s`` with the constant presheaf on ``K``."""
    s = locale.check_value(s)
    K = simplicial_complex(K)
    levels = []
    for k in range(dim_cap + 1):
        levels.append(MonoPresheaf.sheaf(locale, {sig: s for sig in K if len(sig) == k + 1}))
    return SimplicialMonoPresheaf(locale, tuple(levels))


def _vertex_maps(sources: list, targets: list):
    for choice in itertools.product(targets, repeat=len(sources)):
        yield dict(zip(sources, choice))


def _image(f: Mapping, sigma: tuple) -> Optional[tuple]:
    tau = tuple(f[v] for v in sigma)
    if any(a > b for a, b in zip(tau, tau[1:])):
        return None
    return dedup(tau)


def simplicial_hom(A: SimplicialMonoPresheaf, B: SimplicialMonoPresheaf) -> list:
    """Maps of simplicial presheaves ``A -> B`` as vertex maps (exhaustive)."""
    if A.locale != B.locale:
        raise SimplicialError("presheaves live over different locales")
    samples = sample_points(A.locale, A.grade_values() | B.grade_values(), include_bottom=False)
    src_sections = [A.sections(a) for a in samples]
    tgt_sections = [B.sections(a) for a in samples]
    out = []
    for f in _vertex_maps(A.vertices(), B.vertices()):
        ok = True
        for k, F in enumerate(A.levels):
            for sigma in F.grades:
                base = _image(f, sigma)
                if base is None or len(base) > len(B.levels) or base not in B.levels[len(base) - 1].grades:
                    ok = False
                    break
                for src, tgt in zip(src_sections, tgt_sections):
                    if sigma in src[k] and base not in tgt[len(base) - 1]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(f)
    return out


def complex_hom(K: Iterable, target: Mapping[int, frozenset]) -> list:
    """Simplicial maps from the complex ``K`` into a levelwise simplex family."""
    K = simplicial_complex(K)
    vertices = sorted(v for (v,) in (s for s in K if len(s) == 1))
    target_vertices = sorted(v for (v,) in target.get(0, ()))
    out = []
    for f in _vertex_maps(vertices, target_vertices):
        good = True
        for sigma in K:
            base = _image(f, sigma)
            if base is None or base not in target.get(len(base) - 1, ()):
                good = False
                break
        if good:
            out.append(f)
    return out


def point_complex() -> frozenset:
    return simplicial_complex([(0,)])


def edge_complex() -> frozenset:
    return simplicial_complex([(0, 1)])

