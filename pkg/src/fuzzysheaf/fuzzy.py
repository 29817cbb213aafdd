"""The category of fuzzy sets over an interval locale.

A fuzzy set is a finite carrier with a grade map into ``L``.  A morphism is a
function ``f`` between carriers with ``grade(x) <= grade(f(x))`` everywhere.
Limits take meets of grades over compatible families; colimits take joins
over whole equivalence classes of the underlying set-colimit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

from .locale import BOTTOM, IntervalLocale, LocaleError
from .unionfind import UnionFind


class FuzzyError(ValueError):
    pass


@dataclass(frozen=True)
class FuzzySet:
    locale: IntervalLocale
    grades: Mapping[Hashable, Fraction]

    def __post_init__(self):
        grades = {}
        for x, g in dict(self.grades).items():
            if g is BOTTOM:
                raise FuzzyError(f"grade of {x!r} must lie in L, not the adjoined bottom")
            try:
                grades[x] = self.locale.check_value(g)
            except LocaleError as exc:
                raise FuzzyError(f"grade of {x!r}: {exc}") from None
        object.__setattr__(self, "grades", grades)

    @property
    def carrier(self) -> frozenset:
        return frozenset(self.grades)

    def __getitem__(self, x) -> Fraction:
        return self.grades[x]

    def __len__(self) -> int:
        return len(self.grades)

    def __iter__(self):
        return iter(sorted(self.grades))

    def restrict(self, subset) -> "FuzzySet":
        return FuzzySet(self.locale, {x: self.grades[x] for x in subset})


@dataclass(frozen=True)
class FuzzyMorphism:
    source: FuzzySet
    target: FuzzySet
    mapping: Mapping[Hashable, Hashable]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))

    def __call__(self, x):
        return self.mapping[x]


def identity(fs: FuzzySet) -> FuzzyMorphism:
    return FuzzyMorphism(fs, fs, {x: x for x in fs.grades})


def validate_morphism(m: FuzzyMorphism) -> tuple[bool, list]:
    """Check the homotopy condition; returns ``(ok, violating elements)``.

    Raises :class:`FuzzyError` when the locales differ or the map is not a
    total function into the target carrier.
    """
    if m.source.locale != m.target.locale:
        raise FuzzyError("source and target live over different locales")
    missing = m.source.carrier - set(m.mapping)
    if missing:
        raise FuzzyError(f"map is not total, missing {sorted(missing)}")
    stray = [x for x in m.source.grades if m.mapping[x] not in m.target.grades]
    if stray:
        raise FuzzyError(f"map leaves the target carrier at {sorted(stray)}")
    L = m.source.locale
    bad = sorted(
        x for x, g in m.source.grades.items() if not L.leq(g, m.target.grades[m.mapping[x]])
    )
    return not bad, bad


def compose(g: FuzzyMorphism, f: FuzzyMorphism) -> FuzzyMorphism:
    """``g o f``."""
    if f.target != g.source:
        raise FuzzyError("morphisms are not composable")
    return FuzzyMorphism(f.source, g.target, {x: g.mapping[y] for x, y in f.mapping.items()})


def morphisms(source: FuzzySet, target: FuzzySet):
    """Yield every fuzzy morphism ``source -> target`` (exhaustive)."""
    L = source.locale
    xs = sorted(source.grades)
    options = [
        [u for u in sorted(target.grades) if L.leq(source.grades[x], target.grades[u])]
        for x in xs
    ]
    for choice in itertools.product(*options):
        yield FuzzyMorphism(source, target, dict(zip(xs, choice)))


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    mapping: Mapping[Hashable, Hashable]

    def __post_init__(self):
        object.__setattr__(self, "mapping", dict(self.mapping))


@dataclass(frozen=True)
class Diagram:
    """A finite diagram of fuzzy sets; node order is significant for naming."""

    locale: IntervalLocale
    nodes: Mapping[str, FuzzySet]
    arrows: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", dict(self.nodes))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        for name, fs in self.nodes.items():
            if fs.locale != self.locale:
                raise FuzzyError(f"node {name!r} lives over a different locale")
        for arrow in self.arrows:
            for end in (arrow.source, arrow.target):
                if end not in self.nodes:
                    raise FuzzyError(f"arrow refers to unknown node {end!r}")
            ok, bad = validate_morphism(self.morphism(arrow))
            if not ok:
                raise FuzzyError(
                    f"arrow {arrow.source}->{arrow.target} breaks the grade condition at {bad}"
                )

    def morphism(self, arrow: Arrow) -> FuzzyMorphism:
        return FuzzyMorphism(self.nodes[arrow.source], self.nodes[arrow.target], arrow.mapping)


@dataclass(frozen=True)
class Cone:
    """Apex plus one leg per diagram node (projections or injections)."""

    apex: FuzzySet
    legs: dict = field(default_factory=dict)


def family_id(parts) -> str:
    return "(" + ",".join(str(p) for p in parts) + ")"


def compatible_families(diagram: Diagram):
    """Enumerate the set-limit of the underlying carriers as node->element dicts."""
    names = list(diagram.nodes)
    position = {n: i for i, n in enumerate(names)}
    # arrows are checked as soon as both endpoints are assigned
    checks = [[] for _ in names]
    for arrow in diagram.arrows:
        last = max(position[arrow.source], position[arrow.target])
        checks[last].append(arrow)
    carriers = [sorted(diagram.nodes[n].grades) for n in names]

    def extend(i, chosen):
        if i == len(names):
            yield dict(chosen)
            return
        for x in carriers[i]:
            chosen[names[i]] = x
            if all(a.mapping[chosen[a.source]] == chosen[a.target] for a in checks[i]):
                yield from extend(i + 1, chosen)
            del chosen[names[i]]

    yield from extend(0, {})


def limit(diagram: Diagram) -> Cone:
    """Limit: compatible families graded by the meet of their components.

    The empty diagram gives the terminal fuzzy set ``{* : top}``.
    """
    L = diagram.locale
    if not diagram.nodes:
        return Cone(FuzzySet(L, {"*": L.top()}), {})
    names = list(diagram.nodes)
    grades, members = {}, {}
    for fam in compatible_families(diagram):
        key = family_id(fam[n] for n in names)
        grades[key] = L.meet(diagram.nodes[n].grades[fam[n]] for n in names)
        members[key] = fam
    apex = FuzzySet(L, grades)
    legs = {
        n: FuzzyMorphism(apex, diagram.nodes[n], {k: fam[n] for k, fam in members.items()})
        for n in names
    }
    return Cone(apex, legs)


def set_colimit(diagram: Diagram) -> dict:
    """Quotient of the disjoint union; maps each ``(node, x)`` to its class rep."""
    uf = UnionFind((n, x) for n, fs in diagram.nodes.items() for x in fs.grades)
    for arrow in diagram.arrows:
        for x, y in arrow.mapping.items():
            uf.union((arrow.source, x), (arrow.target, y))
    return {item: uf.find(item) for item in uf.parent}


def colimit(diagram: Diagram) -> Cone:
    """Colimit: set-colimit classes graded by the join over every representative.

    Classes are named by the element id of their least ``(node, id)`` member,
    qualified as ``node:id`` when two classes would otherwise share a name.
    """
    L = diagram.locale
    rep_of = set_colimit(diagram)
    reps = sorted(set(rep_of.values()))
    counts = {}
    for _, x in reps:
        counts[x] = counts.get(x, 0) + 1
    name = {
        rep: (rep[1] if counts[rep[1]] == 1 else f"{rep[0]}:{rep[1]}") for rep in reps
    }
    contributions = {rep: [] for rep in reps}
    for (node, x), rep in rep_of.items():
        contributions[rep].append(diagram.nodes[node].grades[x])
    apex = FuzzySet(L, {name[rep]: L.join(gs) for rep, gs in contributions.items()})
    legs = {
        n: FuzzyMorphism(fs, apex, {x: name[rep_of[(n, x)]] for x in fs.grades})
        for n, fs in diagram.nodes.items()
    }
    return Cone(apex, legs)


def is_subobject(sub: FuzzySet, ambient: FuzzySet) -> bool:
    if sub.locale != ambient.locale or not sub.carrier <= ambient.carrier:
        return False
    L = ambient.locale
    return all(L.leq(g, ambient.grades[x]) for x, g in sub.grades.items())


def _check_subobjects(ambient, *subs):
    for s in subs:
        if not is_subobject(s, ambient):
            raise FuzzyError("argument is not a subobject of the ambient fuzzy set")


def subobject_union(a: FuzzySet, b: FuzzySet, ambient: FuzzySet) -> FuzzySet:
    _check_subobjects(ambient, a, b)
    L = ambient.locale
    grades = {}
    for x in a.carrier | b.carrier:
        grades[x] = L.join(s.grades[x] for s in (a, b) if x in s.grades)
    return FuzzySet(L, grades)


def subobject_meet(a: FuzzySet, b: FuzzySet, ambient: FuzzySet) -> FuzzySet:
    _check_subobjects(ambient, a, b)
    L = ambient.locale
    return FuzzySet(L, {x: L.meet([a.grades[x], b.grades[x]]) for x in a.carrier & b.carrier})
