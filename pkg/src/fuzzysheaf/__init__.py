"""Fuzzy sets over interval locales as sheaves of monomorphisms."""

from .fuzzy import (
    Arrow,
    Cone,
    Diagram,
    FuzzyError,
    FuzzyMorphism,
    FuzzySet,
    colimit,
    compose,
    identity,
    limit,
    subobject_meet,
    subobject_union,
    validate_morphism,
)
from .locale import BOTTOM, IntervalLocale, LocaleError, Orientation, ProductLocale, to_rational
from .sheaf import (
    MonoPresheaf,
    NotASheafError,
    SheafError,
    StepPresheaf,
    image,
    is_sheaf,
    level_cut,
    psi_of,
    representable,
    sheafify,
)
from .simplicial import PointCloud, VRSystem, pi0, vr_build, vr_compare, vr_sections, vr_stalk
from .stalks import stalk, stalk_points, stalkwise_check

__all__ = [
    "Arrow",
    "Cone",
    "Diagram",
    "FuzzyError",
    "FuzzyMorphism",
    "FuzzySet",
    "colimit",
    "compose",
    "identity",
    "limit",
    "subobject_meet",
    "subobject_union",
    "validate_morphism",
    "BOTTOM",
    "IntervalLocale",
    "LocaleError",
    "Orientation",
    "ProductLocale",
    "to_rational",
    "MonoPresheaf",
    "NotASheafError",
    "SheafError",
    "StepPresheaf",
    "image",
    "is_sheaf",
    "level_cut",
    "psi_of",
    "representable",
    "sheafify",
    "PointCloud",
    "VRSystem",
    "pi0",
    "vr_build",
    "vr_compare",
    "vr_sections",
    "vr_stalk",
    "stalk",
    "stalk_points",
    "stalkwise_check",
]

__version__ = "0.1.0"
