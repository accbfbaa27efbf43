"""Certified Seshadri constants of polarized abelian varieties from numerical data."""

from .engine import InvalidInstance, SeshadriResult, Status, evaluate, explain
from .model import (
    AVSpec,
    CompletenessAttestation,
    CurveCert,
    PPAVType,
    ProductDecomposition,
    StructureTags,
    SubvarietyDatum,
    validate,
)
from .radicals import Ordering, Radical, rad_cmp, rad_new, rad_scale, rad_to_decimal

__all__ = [
    "AVSpec",
    "CompletenessAttestation",
    "CurveCert",
    "InvalidInstance",
    "Ordering",
    "PPAVType",
    "ProductDecomposition",
    "Radical",
    "SeshadriResult",
    "Status",
    "StructureTags",
    "SubvarietyDatum",
    "evaluate",
    "explain",
    "rad_cmp",
    "rad_new",
    "rad_scale",
    "rad_to_decimal",
    "validate",
]
