"""Stalks of presheaves of monomorphisms on an interval and stalkwise verdicts.

For ``x`` in ``L - {top}`` the stalk is the colimit of ``F(s)`` over
``s > x``.  For a presheaf of monomorphisms this is the strict cut
``{y : grade(y) > x}``; attainment flags never matter.  At the adjoined
bottom the stalk is the generic fibre.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Hashable, Mapping, Optional

from .locale import BOTTOM, IntervalLocale, LocaleError, ProductLocale
from .sheaf import MonoPresheaf, is_sheaf, sample_points, sheafify


class StalkError(ValueError):
    pass


def _check_point(L: IntervalLocale, p):
    p = L.check(p)
    if p is not BOTTOM and p == L.top():
        raise StalkError("stalks are indexed by L - {top}; the top element has none")
    return p


def stalk(F: MonoPresheaf, p) -> frozenset:
    L = F.locale
    p = _check_point(L, p)
    if p is BOTTOM:
        return F.carrier
    kp = L.key(p)
    return frozenset(y for y, kg in F._keys.items() if kp < kg)


def stalk_points(E: MonoPresheaf, F: Optional[MonoPresheaf] = None) -> list:
    """Bottom, the initial element, each grade below top, and consecutive midpoints."""
    L = E.locale
    if F is not None and F.locale != L:
        raise StalkError("presheaves live over different locales")
    top = L.top()
    grades = set(E.grades.values())
    if F is not None:
        grades |= set(F.grades.values())
    below = L.sorted(g for g in grades if g != top)
    mids = [L.between(a, b) for a, b in zip(below, below[1:])]
    return [BOTTOM] + L.sorted(below + mids + [L.initial()])


@dataclass(frozen=True)
class Witness:
    point: object
    element: Hashable
    reason: str


@dataclass(frozen=True)
class Verdict:
    mode: str
    ok: bool
    witness: Optional[Witness] = None
    # sheaf-level conclusion re-checked on the section sample (None if not applicable)
    sectionwise: Optional[bool] = None


class _Sweep:
    """Elements sorted so that every stalk and section set is a prefix."""

    def __init__(self, F: MonoPresheaf):
        L = F.locale
        self.locale = L
        ranked = sorted(F.grades, key=lambda y: (F._keys[y], F.attained[y]))
        self.keys = [(F._keys[y], F.attained[y]) for y in ranked]
        # descending: stalk and section sets are prefixes of this list
        self.order = ranked[::-1]

    def count(self, p, strict: bool) -> int:
        if p is BOTTOM:
            return len(self.order)
        threshold = (self.locale.key(p), strict)
        return len(self.keys) - bisect.bisect_right(self.keys, threshold)


class _MapProfile:
    """Prefix statistics of ``m: E -> F`` for fast injective/surjective tests."""

    def __init__(self, m: Mapping, E: MonoPresheaf, F: MonoPresheaf):
        self.src, self.tgt = _Sweep(E), _Sweep(F)
        seen = set()
        self.first_collision = len(self.src.order) + 1
        for i, y in enumerate(self.src.order):
            if m[y] in seen:
                self.first_collision = i + 1
                break
            seen.add(m[y])
        minpos = {}
        for i, y in enumerate(self.src.order):
            minpos.setdefault(m[y], i)
        inf = len(self.src.order) + 1
        self.prefix_max = []
        running = -1
        for u in self.tgt.order:
            running = max(running, minpos.get(u, inf))
            self.prefix_max.append(running)

    def injective(self, p, strict: bool) -> bool:
        return self.src.count(p, strict) < self.first_collision

    def surjective(self, p, strict: bool) -> bool:
        n_tgt = self.tgt.count(p, strict)
        if n_tgt == 0:
            return True
        return self.prefix_max[n_tgt - 1] < self.src.count(p, strict)


def validate_sheaf_map(m: Mapping, E: MonoPresheaf, F: MonoPresheaf) -> list:
    """Elements of ``E`` whose sections are not carried into ``F``'s."""
    if E.locale != F.locale:
        raise StalkError("presheaves live over different locales")
    L = E.locale
    bad = []
    for x, g in E.grades.items():
        if x not in m or m[x] not in F.grades:
            raise StalkError(f"map is not a total function into the target at {x!r}")
        h = F.grades[m[x]]
        if L.lt(h, g) or (h == g and E.attained[x] and not F.attained[m[x]]):
            bad.append(x)
    return sorted(bad)


def _failure_at(m, E, F, p, mode):
    src, tgt = stalk(E, p), stalk(F, p)
    if mode in ("mono", "iso"):
        hit = {}
        for y in sorted(src):
            if m[y] in hit:
                return Witness(p, y, "not-injective")
            hit[m[y]] = y
    if mode in ("epi", "iso"):
        missing = tgt - {m[y] for y in src}
        if missing:
            return Witness(p, min(missing), "not-surjective")
    return None


def stalkwise_check(
    m: Mapping, E: MonoPresheaf, F: MonoPresheaf, mode: str = "iso", points=None
) -> Verdict:
    """Test whether ``m`` induces injections/surjections/bijections on stalks.

    The witness is taken from the first failing constancy interval of the
    stalk functions; when that interval starts at a grade value and has a
    midpoint in ``points``, the interior midpoint is reported.
    """
    if mode not in ("mono", "epi", "iso"):
        raise StalkError(f"unknown mode {mode!r}")
    bad = validate_sheaf_map(m, E, F)
    if bad:
        raise StalkError(f"not a sheaf map: sections of {bad} are not preserved")
    if points is None:
        points = stalk_points(E, F)
    profile = _MapProfile(m, E, F)
    want_inj = mode in ("mono", "iso")
    want_surj = mode in ("epi", "iso")

    def fails(p):
        return (want_inj and not profile.injective(p, True)) or (
            want_surj and not profile.surjective(p, True)
        )

    grades = set(E.grades.values()) | set(F.grades.values())
    for i, p in enumerate(points):
        if not fails(p):
            continue
        if p is not BOTTOM and p in grades and i + 1 < len(points):
            q = points[i + 1]
            if q not in grades and fails(q):
                p = q
        return Verdict(mode, False, _failure_at(m, E, F, p, mode))

    return Verdict(mode, True, None, _sectionwise(profile, E, F, mode))


def _sectionwise(profile: _MapProfile, E: MonoPresheaf, F: MonoPresheaf, mode: str):
    samples = sample_points(E.locale, E.grade_values() | F.grade_values(), include_bottom=False)
    if mode == "mono":
        return all(profile.injective(a, False) for a in samples)
    if mode == "iso":
        return all(
            profile.injective(a, False) and profile.surjective(a, False) for a in samples
        )
    if is_sheaf(E) and is_sheaf(F):
        # generic fibre surjectivity; sections at other a need only be locally hit
        return profile.surjective(E.locale.initial(), False)
    return None


def eta_stalk_invariance(F: MonoPresheaf) -> bool:
    G = sheafify(F)
    return all(stalk(F, p) == stalk(G, p) for p in stalk_points(F, G))


def axis_restriction(product: ProductLocale, grades: Mapping) -> MonoPresheaf:
    """Restrict the level-cut sheaf of a product-graded set along ``s -> (s, i, ..., i)``."""
    if not isinstance(product, ProductLocale):
        raise StalkError("axis restriction needs a product locale")
    try:
        checked = {y: product.check(g) for y, g in grades.items()}
    except LocaleError as exc:
        raise StalkError(str(exc)) from None
    return MonoPresheaf.sheaf(product.factors[0], {y: g[0] for y, g in checked.items()})


def product_stalk(product: ProductLocale, grades: Mapping, x) -> frozenset:
    """Stalk at a point of the first factor of a sheaf on a product of intervals."""
    return stalk(axis_restriction(product, grades), x)
