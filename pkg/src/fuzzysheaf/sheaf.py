"""Presheaves of monomorphisms on ``L_+`` for an interval locale ``L``.

A presheaf of monomorphisms with finite generic fibre is stored as a grade
and an attainment flag per element: ``x`` has sections over ``a`` iff
``a < grade(x)``, or ``a == grade(x)`` and the supremum is attained.  The
sheaves are exactly the presheaves with every flag set.

Sections over the adjoined bottom are always the one-point set ``{"*"}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .fuzzy import FuzzySet
from .locale import BOTTOM, IntervalLocale

POINT = "*"
POINT_SET = frozenset({POINT})


class SheafError(ValueError):
    pass


class NotASheafError(SheafError):
    def __init__(self, elements):
        self.elements = sorted(elements)
        super().__init__(
            f"presheaf is not a sheaf (supremum not attained at {self.elements}); "
            "apply sheafify first"
        )


@dataclass(frozen=True)
class MonoPresheaf:
    locale: IntervalLocale
    grades: Mapping[Hashable, Fraction]
    attained: Mapping[Hashable, bool]

    def __post_init__(self):
        L = self.locale
        grades = {x: L.check_value(g) for x, g in dict(self.grades).items()}
        attained = {x: bool(v) for x, v in dict(self.attained).items()}
        if set(attained) != set(grades):
            raise SheafError("every element needs exactly one grade and one attainment flag")
        init = L.initial()
        for x, g in grades.items():
            if g == init and not attained[x]:
                # would be a section over i that lies over no a in L
                raise SheafError(f"element {x!r} at the initial grade must be attained")
        object.__setattr__(self, "grades", grades)
        object.__setattr__(self, "attained", attained)
        # order keys of the grades, so section and stalk queries skip re-validation
        object.__setattr__(self, "_keys", {x: L.key(g) for x, g in grades.items()})

    @classmethod
    def sheaf(cls, locale: IntervalLocale, grades: Mapping) -> "MonoPresheaf":
        return cls(locale, grades, {x: True for x in grades})

    @property
    def carrier(self) -> frozenset:
        return frozenset(self.grades)

    def generic_fibre(self) -> frozenset:
        return self.carrier

    def to_generic(self, x):
        return x

    def contains(self, x, a) -> bool:
        if a is BOTTOM:
            return False
        key_a, key_g = self.locale.key(a), self._keys[x]
        return key_a < key_g or (key_a == key_g and self.attained[x])

    def sections(self, a) -> frozenset:
        a = self.locale.check(a)
        if a is BOTTOM:
            return POINT_SET
        ka = self.locale.key(a)
        return frozenset(
            x for x, kg in self._keys.items() if ka < kg or (ka == kg and self.attained[x])
        )

    def grade_values(self) -> set:
        return set(self.grades.values())


@dataclass(frozen=True)
class StepPresheaf:
    """A general presheaf on ``L_+`` that is piecewise constant.

    ``cuts`` are ``a_1 < ... < a_n = top`` in locale order with ``a_1`` above
    the initial element.  ``levels[k]`` is the set of sections over every
    ``s`` with ``a_k <= s < a_{k+1}`` (``levels[0]`` is the generic fibre and
    ``levels[n]`` lives over the top alone).  ``restrictions[k-1]`` is the
    map ``levels[k] -> levels[k-1]``.
    """

    locale: IntervalLocale
    cuts: Sequence[Fraction]
    levels: Sequence[frozenset]
    restrictions: Sequence[Mapping]

    def __post_init__(self):
        L = self.locale
        cuts = tuple(L.check_value(c) for c in self.cuts)
        levels = tuple(frozenset(s) for s in self.levels)
        restrictions = tuple(dict(r) for r in self.restrictions)
        if not cuts or cuts[-1] != L.top():
            raise SheafError("the last cut must be the top element")
        if not L.lt(L.initial(), cuts[0]):
            raise SheafError("the first cut must lie strictly above the initial element")
        if any(not L.lt(a, b) for a, b in zip(cuts, cuts[1:])):
            raise SheafError("cuts must be strictly ascending in locale order")
        if len(levels) != len(cuts) + 1 or len(restrictions) != len(cuts):
            raise SheafError("need n+1 levels and n restriction maps for n cuts")
        for k, rho in enumerate(restrictions, start=1):
            if set(rho) != set(levels[k]):
                raise SheafError(f"restriction {k} is not total on level {k}")
            if not set(rho.values()) <= levels[k - 1]:
                raise SheafError(f"restriction {k} leaves level {k - 1}")
        object.__setattr__(self, "cuts", cuts)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "restrictions", restrictions)

    def level_index(self, a) -> int:
        """Largest ``k`` with ``a_k <= a`` (0 when there is none)."""
        L = self.locale
        k = 0
        for i, c in enumerate(self.cuts, start=1):
            if L.leq(c, a):
                k = i
        return k

    def sections(self, a) -> frozenset:
        a = self.locale.check(a)
        if a is BOTTOM:
            return POINT_SET
        return self.levels[self.level_index(a)]

    def restrict(self, x, k_from: int, k_to: int):
        for k in range(k_from, k_to, -1):
            x = self.restrictions[k - 1][x]
        return x

    def to_generic_at(self, x, k: int):
        return self.restrict(x, k, 0)

    def generic_fibre(self) -> frozenset:
        return self.levels[0]

    def image_in_generic(self, a) -> frozenset:
        a = self.locale.check(a)
        if a is BOTTOM:
            return POINT_SET
        k = self.level_index(a)
        return frozenset(self.to_generic_at(x, k) for x in self.levels[k])

    def grade_values(self) -> set:
        return set(self.cuts)


def level_cut(fs: FuzzySet) -> MonoPresheaf:
    """Sheaf ``a -> {x : grade(x) >= a}`` of a fuzzy set."""
    return MonoPresheaf.sheaf(fs.locale, fs.grades)


def is_sheaf(F: MonoPresheaf) -> bool:
    return all(F.attained.values())


def psi_of(F: MonoPresheaf) -> FuzzySet:
    """The fuzzy set ``x -> sup{b : x in F(b)}`` of a sheaf of monomorphisms."""
    missing = [x for x, v in F.attained.items() if not v]
    if missing:
        raise NotASheafError(missing)
    return FuzzySet(F.locale, F.grades)


def sheafify(F: MonoPresheaf) -> MonoPresheaf:
    """Associated sheaf: sections over ``a`` become the limit over ``b < a``."""
    return MonoPresheaf.sheaf(F.locale, F.grades)


def image(E: StepPresheaf) -> MonoPresheaf:
    """Replace each section set by its image in the generic fibre."""
    L = E.locale
    n = len(E.cuts)
    reach = {x: 0 for x in E.levels[0]}
    for k in range(1, n + 1):
        for x in E.levels[k]:
            reach[E.to_generic_at(x, k)] = k
    grades, attained = {}, {}
    for x, k in reach.items():
        if k == n:
            grades[x], attained[x] = L.top(), True
        else:
            grades[x], attained[x] = E.cuts[k], False
    return MonoPresheaf(L, grades, attained)


def representable(locale: IntervalLocale, s) -> MonoPresheaf:
    """``hom(-, s)``: a point with sections over exactly the ``t <= s``."""
    if s is BOTTOM:
        raise SheafError("representable at the adjoined bottom is excluded")
    return MonoPresheaf.sheaf(locale, {POINT: locale.check_value(s)})


def terminal(locale: IntervalLocale) -> MonoPresheaf:
    return representable(locale, locale.top())


def sample_points(locale: IntervalLocale, grades: Iterable, include_bottom: bool = True) -> list:
    """Finite sample on which piecewise-constant section functions show every value.

    Every grade, the initial and top elements, and the midpoint of each
    consecutive pair, in ascending locale order.
    """
    values = locale.sorted(set(grades) | {locale.initial(), locale.top()})
    mids = [locale.between(a, b) for a, b in zip(values, values[1:])]
    points = locale.sorted(values + mids)
    return ([BOTTOM] if include_bottom else []) + points


def hom(E, F: MonoPresheaf, samples=None) -> list[dict]:
    """All presheaf maps ``E -> F`` as generic-fibre functions.

    ``E`` may be a :class:`MonoPresheaf` or a :class:`StepPresheaf`.  Because
    ``F`` has injective restrictions, a map is fixed by its generic fibre
    component; a candidate is kept when it carries the image of every section
    set of ``E`` into the matching section set of ``F``.
    """
    if E.locale != F.locale:
        raise SheafError("presheaves live over different locales")
    if samples is None:
        samples = sample_points(E.locale, E.grade_values() | F.grade_values(), include_bottom=False)
    if isinstance(E, StepPresheaf):
        images = [(E.image_in_generic(a), F.sections(a)) for a in samples]
    else:
        images = [(E.sections(a), F.sections(a)) for a in samples]
    xs = sorted(E.generic_fibre())
    targets = sorted(F.carrier)
    # each x must land in F's sections over every sample where x has a section
    options = []
    for x in xs:
        allowed = [u for u in targets if all(u in tgt for src, tgt in images if x in src)]
        options.append(allowed)
    return [dict(zip(xs, choice)) for choice in itertools.product(*options)]


mono_hom = hom
