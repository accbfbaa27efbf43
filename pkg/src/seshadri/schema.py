"""JSON instance files and result documents.

Instance layout (all list fields optional)::

    {"id": "A", "dim": 3, "degree": 18,
     "subvarieties": [{"spec": {...}, "is_divisor": true}],
     "curves": [{"l_degree": 4, "mult": 3, "generates_dim": 2, "contained_in": "S"}],
     "tags": {"product": {"factor_id": "S", "elliptic_degree": 10},
              "ppav_type": "jacobian_genus2" | "product_elliptic" | {"known_epsilon": "12/7"}},
     "attestations": [{"dim_k": 1, "bound": {"coeff": "1", "radicand": 4, "index": 1}}]}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .engine import SeshadriResult, Status
from .model import (
    AVSpec,
    CompletenessAttestation,
    CurveCert,
    PPAVType,
    ProductDecomposition,
    StructureTags,
    SubvarietyDatum,
)
from .radicals import Radical, rad_to_decimal
from .rules import ProofTree

DECIMAL_DIGITS = 12


class SchemaError(ValueError):
    """The document parsed as JSON but does not describe an instance."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path or '<root>'}: {message}")


def _get(obj: Any, key: str, path: str, kind: type | tuple, required: bool = True, default: Any = None) -> Any:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        if required:
            raise SchemaError(path, f"missing field {key!r}")
        return default
    value = obj[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise SchemaError(f"{path}.{key}", f"expected {names}, got {type(value).__name__}")
    return value


def _fraction(text: Any, path: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise SchemaError(path, "expected a rational such as \"4/3\"")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"bad rational {text!r}") from exc


def radical_from_dict(obj: Any, path: str = "bound") -> Radical:
    coeff = _fraction(_get(obj, "coeff", path, (str, int)), f"{path}.coeff")
    radicand = _get(obj, "radicand", path, int, required=False, default=1)
    index = _get(obj, "index", path, int, required=False, default=1)
    try:
        return Radical(coeff, radicand, index)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def radical_to_dict(r: Radical, decimal: bool = False) -> dict:
    out: dict[str, Any] = {"coeff": str(r.coeff), "radicand": r.radicand, "index": r.index}
    if decimal:
        out["decimal"] = rad_to_decimal(r, DECIMAL_DIGITS)
        out["approximate"] = True
    return out


def _ppav_from(obj: Any, path: str) -> PPAVType:
    if obj in ("jacobian_genus2", "product_elliptic"):
        return PPAVType(obj)
    if isinstance(obj, dict) and set(obj) == {"known_epsilon"}:
        return PPAVType.known_epsilon(_fraction(obj["known_epsilon"], f"{path}.known_epsilon"))
    raise SchemaError(path, "expected \"jacobian_genus2\", \"product_elliptic\" or {\"known_epsilon\": \"p/q\"}")


def spec_from_dict(obj: Any, path: str = "") -> AVSpec:
    sid = _get(obj, "id", path, str)
    here = path or sid
    dim = _get(obj, "dim", here, int)
    degree = _get(obj, "degree", here, int)

    subs = []
    for i, s in enumerate(_get(obj, "subvarieties", here, list, required=False, default=[])):
        p = f"{here}.subvarieties[{i}]"
        sub = spec_from_dict(_get(s, "spec", p, dict), f"{p}.spec")
        subs.append(SubvarietyDatum(sub, _get(s, "is_divisor", p, bool, required=False, default=sub.dim == dim - 1)))

    curves = []
    for i, c in enumerate(_get(obj, "curves", here, list, required=False, default=[])):
        p = f"{here}.curves[{i}]"
        curves.append(
            CurveCert(
                l_degree=_get(c, "l_degree", p, int),
                mult=_get(c, "mult", p, int),
                generates_dim=_get(c, "generates_dim", p, int, required=False),
                contained_in=_get(c, "contained_in", p, str, required=False),
            )
        )

    tags_obj = _get(obj, "tags", here, dict, required=False, default={})
    product = None
    if "product" in tags_obj:
        p = f"{here}.tags.product"
        prod = _get(tags_obj, "product", f"{here}.tags", dict)
        product = ProductDecomposition(_get(prod, "factor_id", p, str), _get(prod, "elliptic_degree", p, int))
    ppav = _ppav_from(tags_obj["ppav_type"], f"{here}.tags.ppav_type") if "ppav_type" in tags_obj else None

    attestations = []
    for i, a in enumerate(_get(obj, "attestations", here, list, required=False, default=[])):
        p = f"{here}.attestations[{i}]"
        attestations.append(
            CompletenessAttestation(_get(a, "dim_k", p, int), radical_from_dict(_get(a, "bound", p, dict), f"{p}.bound"))
        )

    return AVSpec(
        id=sid,
        dim=dim,
        degree=degree,
        subvarieties=tuple(subs),
        curves=tuple(curves),
        tags=StructureTags(product=product, ppav_type=ppav),
        attestations=tuple(attestations),
    )


def spec_to_dict(spec: AVSpec) -> dict:
    out: dict[str, Any] = {"id": spec.id, "dim": spec.dim, "degree": spec.degree}
    out["subvarieties"] = [{"spec": spec_to_dict(s.spec), "is_divisor": s.is_divisor} for s in spec.subvarieties]
    curves = []
    for c in spec.curves:
        d: dict[str, Any] = {"l_degree": c.l_degree, "mult": c.mult}
        if c.generates_dim is not None:
            d["generates_dim"] = c.generates_dim
        if c.contained_in is not None:
            d["contained_in"] = c.contained_in
        curves.append(d)
    out["curves"] = curves
    tags: dict[str, Any] = {}
    if spec.tags.product is not None:
        tags["product"] = {
            "factor_id": spec.tags.product.factor_id,
            "elliptic_degree": spec.tags.product.elliptic_degree,
        }
    p = spec.tags.ppav_type
    if p is not None:
        tags["ppav_type"] = p.kind if p.kind != "known_epsilon" else {"known_epsilon": str(p.value)}
    out["tags"] = tags
    out["attestations"] = [{"dim_k": a.dim_k, "bound": radical_to_dict(a.bound)} for a in spec.attestations]
    return out


def loads_instance(text: str) -> AVSpec:
    """Parse an instance document; ``json.JSONDecodeError`` carries line/column."""
    return spec_from_dict(json.loads(text))


def load_instance(path: str | Path) -> AVSpec:
    return loads_instance(Path(path).read_text(encoding="utf-8"))


def dumps_instance(spec: AVSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2, ensure_ascii=False)


def proof_to_dict(tree: ProofTree) -> dict:
    node = tree.node
    return {
        "rule": node.rule_name,
        "citation": node.citation,
        "premises": list(node.premises),
        "effect": node.effect,
        "children": [proof_to_dict(c) for c in tree.children],
    }


def result_to_dict(result: SeshadriResult) -> dict:
    out: dict[str, Any] = {"id": result.spec_id, "status": result.status.value}
    if result.status is Status.EXACT:
        out["value"] = str(result.value)
        out["value_decimal"] = {"decimal": rad_to_decimal(result.lo, DECIMAL_DIGITS), "approximate": True}
    elif result.status is Status.BOUNDS:
        out["lo"] = radical_to_dict(result.lo, decimal=True)
        out["hi"] = radical_to_dict(result.hi, decimal=True)
    out["candidate_set"] = sorted(str(c) for c in result.candidates) if result.candidates is not None else None
    out["below_threshold"] = result.below_threshold
    out["blocked"] = list(result.blocked)
    out["facts"] = list(result.facts)
    out["notes"] = list(result.notes)
    out["diagnostics"] = list(result.diagnostics)
    out["proof"] = proof_to_dict(result.proof)
    return out


def dumps_result(result: SeshadriResult) -> str:
    return json.dumps(result_to_dict(result), indent=2, ensure_ascii=False)
