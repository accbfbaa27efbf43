"""Numerical model of a polarized abelian variety and its input checks.

An :class:`AVSpec` carries only intersection numbers: the dimension ``n``,
the degree ``L^n``, a catalog of abelian subvarieties (each a nested
``AVSpec`` for the restricted polarization), curve certificates and a few
structural tags. :func:`validate` reports every arithmetic constraint the
data breaks; it never raises.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .radicals import Ordering, Radical, rad_cmp, root_of

__all__ = [
    "AVSpec",
    "CompletenessAttestation",
    "CurveCert",
    "Diagnostic",
    "EllipticMin",
    "PPAVType",
    "ProductDecomposition",
    "StructureTags",
    "SubvarietyDatum",
    "PPAV3_VALUES",
    "epsilon_upper_from_curves",
    "find_subvariety",
    "min_elliptic_degree",
    "validate",
]

# Possible Seshadri constants of a principally polarized abelian threefold.
PPAV3_VALUES = frozenset({Fraction(1), Fraction(3, 2), Fraction(12, 7)})

CITE_NAKAMAYE = "th:nakamaye"
CITE_NAKAMAYE_LEMMA = "lm:nakamaye"
CITE_RIEMANN_ROCH = "Riemann-Roch (n! | L^n)"


@dataclass(frozen=True)
class CurveCert:
    """A curve through the origin with ``L.C = l_degree`` and ``mult_0 C = mult``."""

    l_degree: int
    mult: int = 1
    generates_dim: Optional[int] = None
    contained_in: Optional[str] = None

    @property
    def epsilon(self) -> Fraction:
        return Fraction(self.l_degree, self.mult)

    @property
    def is_elliptic(self) -> bool:
        return self.generates_dim == 1


@dataclass(frozen=True)
class CompletenessAttestation:
    """Every abelian subvariety of dimension ``dim_k`` with degree below ``bound`` is catalogued."""

    dim_k: int
    bound: Radical

    def covers(self, dim_k: int, threshold: Radical) -> bool:
        return self.dim_k == dim_k and rad_cmp(self.bound, threshold) is not Ordering.LESS


@dataclass(frozen=True)
class PPAVType:
    kind: str  # "jacobian_genus2" | "product_elliptic" | "known_epsilon"
    value: Optional[Fraction] = None

    KINDS = ("jacobian_genus2", "product_elliptic", "known_epsilon")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown ppav type {self.kind!r}")
        if (self.kind == "known_epsilon") != (self.value is not None):
            raise ValueError("known_epsilon requires a value, other kinds take none")

    @classmethod
    def jacobian_genus2(cls) -> PPAVType:
        return cls("jacobian_genus2")

    @classmethod
    def product_elliptic(cls) -> PPAVType:
        return cls("product_elliptic")

    @classmethod
    def known_epsilon(cls, value: Fraction | int | str) -> PPAVType:
        return cls("known_epsilon", Fraction(value))

    def epsilon(self) -> Fraction:
        if self.kind == "jacobian_genus2":
            return Fraction(4, 3)
        if self.kind == "product_elliptic":
            return Fraction(1)
        assert self.value is not None
        return self.value


@dataclass(frozen=True)
class ProductDecomposition:
    """``(A, L) = (B x E, p*L_B + q*M_k)`` with ``B`` a catalogued factor."""

    factor_id: str
    elliptic_degree: int


@dataclass(frozen=True)
class StructureTags:
    product: Optional[ProductDecomposition] = None
    ppav_type: Optional[PPAVType] = None


@dataclass(frozen=True)
class SubvarietyDatum:
    spec: AVSpec
    is_divisor: bool = False


@dataclass(frozen=True)
class AVSpec:
    id: str
    dim: int
    degree: int
    subvarieties: tuple[SubvarietyDatum, ...] = ()
    curves: tuple[CurveCert, ...] = ()
    tags: StructureTags = field(default_factory=StructureTags)
    attestations: tuple[CompletenessAttestation, ...] = ()

    def __post_init__(self) -> None:
        # accept lists for convenience; stored as tuples so specs hash
        for name in ("subvarieties", "curves", "attestations"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))

    @property
    def divisors(self) -> tuple[SubvarietyDatum, ...]:
        return tuple(s for s in self.subvarieties if s.is_divisor)

    def subvarieties_of_dim(self, k: int) -> tuple[AVSpec, ...]:
        return tuple(s.spec for s in self.subvarieties if s.spec.dim == k)

    @property
    def root_degree(self) -> Radical:
        """``(L^n)^(1/n)``, the general upper bound."""
        return root_of(self.degree, self.dim)

    @property
    def nakamaye_threshold(self) -> Radical:
        """``(L^n)^(1/n) / n``."""
        return self.root_degree / self.dim

    @property
    def is_principal(self) -> bool:
        return self.degree == math.factorial(self.dim)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    citation: str = ""
    path: str = ""

    def __str__(self) -> str:
        where = f"[{self.path}] " if self.path else ""
        cite = f" ({self.citation})" if self.citation else ""
        return f"{where}{self.message}{cite}"


def find_subvariety(spec: AVSpec, sub_id: str) -> Optional[AVSpec]:
    for s in spec.subvarieties:
        if s.spec.id == sub_id:
            return s.spec
    return None


def validate(spec: AVSpec) -> list[Diagnostic]:
    """Every violated input constraint, recursively; empty iff valid."""
    out: list[Diagnostic] = []
    _validate(spec, spec.id, out)
    return out


def _validate(spec: AVSpec, path: str, out: list[Diagnostic]) -> None:
    def report(code: str, message: str, citation: str = "") -> None:
        out.append(Diagnostic(code, message, citation, path))

    n = spec.dim
    if n < 1:
        report("dim", f"dimension must be positive, got {n}")
        return
    if spec.degree < 1:
        report("degree", f"degree must be positive, got {spec.degree}")
        return
    if spec.degree % math.factorial(n):
        report("divisibility", f"{n}! does not divide {spec.degree}", CITE_RIEMANN_ROCH)

    ids = [s.spec.id for s in spec.subvarieties]
    for dup in sorted({i for i in ids if ids.count(i) > 1}):
        report("duplicate_id", f"subvariety id {dup!r} appears more than once")
    for s in spec.subvarieties:
        sub = s.spec
        if sub.dim >= n:
            report("subvariety_dim", f"subvariety {sub.id!r} has dim {sub.dim}, not below {n}")
            continue
        if s.is_divisor != (sub.dim == n - 1):
            report(
                "divisor_flag",
                f"subvariety {sub.id!r}: is_divisor={s.is_divisor} but dim {sub.dim} in a dim-{n} variety",
            )
        _validate(sub, f"{path}/{sub.id}", out)

    if n == 1 and spec.subvarieties:
        report("subvariety_dim", "an elliptic curve has no proper abelian subvarieties")

    threshold = spec.nakamaye_threshold
    for i, c in enumerate(spec.curves):
        tag = f"curve #{i} (L.C={c.l_degree}, mult={c.mult})"
        if c.l_degree < 1 or c.mult < 1:
            report("curve_data", f"{tag}: degree and multiplicity must be positive")
            continue
        eps = c.epsilon
        if eps < 1:
            report("curve_below_one", f"{tag}: ε_C = {eps} < 1 contradicts lower bound ε(A,L) ≥ 1", CITE_NAKAMAYE)
        if n == 1 and eps < spec.degree:
            report("curve_below_degree", f"{tag}: ε_C = {eps} below the degree {spec.degree} of an elliptic curve")
        if c.generates_dim is not None:
            if not 1 <= c.generates_dim <= n:
                report("curve_generates", f"{tag}: generates_dim {c.generates_dim} outside 1..{n}")
            elif c.generates_dim == 1 and c.mult != 1:
                report("elliptic_mult", f"{tag}: an elliptic curve is smooth, multiplicity must be 1")
            elif c.generates_dim == n and n > 1 and rad_cmp(Radical(eps), threshold) is Ordering.LESS:
                report(
                    "curve_generates_below",
                    f"{tag}: generates A but ε_C = {eps} < (L^n)^(1/n)/n = {threshold}",
                    CITE_NAKAMAYE_LEMMA,
                )
        if c.contained_in is not None:
            host = find_subvariety(spec, c.contained_in)
            if host is None:
                report("dangling_contained_in", f"{tag}: contained_in {c.contained_in!r} is not a catalogued subvariety")
            elif c.generates_dim is not None and c.generates_dim > host.dim:
                report(
                    "curve_generates",
                    f"{tag}: generates a dim-{c.generates_dim} subvariety inside dim-{host.dim} {host.id!r}",
                )

    for a in spec.attestations:
        if not 1 <= a.dim_k < n:
            report("attestation_dim", f"attestation dim_k={a.dim_k} must lie in 1..{n - 1}")
    # an elliptic certificate below an attested bound must be in the catalog
    elliptic_degrees = {sub.degree for sub in spec.subvarieties_of_dim(1)}
    for i, c in enumerate(spec.curves):
        if c.is_elliptic and c.mult == 1 and c.l_degree not in elliptic_degrees:
            for a in spec.attestations:
                if a.dim_k == 1 and rad_cmp(Radical(c.l_degree), a.bound) is Ordering.LESS:
                    report(
                        "attestation_incomplete",
                        f"curve #{i} is an elliptic curve of degree {c.l_degree} below the attested "
                        f"bound {a.bound} but no dim-1 subvariety of that degree is catalogued",
                    )
                    break

    tags = spec.tags
    if tags.product is not None:
        factor = find_subvariety(spec, tags.product.factor_id)
        k = tags.product.elliptic_degree
        if factor is None:
            report("dangling_product", f"product factor {tags.product.factor_id!r} is not a catalogued subvariety")
        elif k < 1:
            report("product_degree", f"elliptic factor degree must be positive, got {k}")
        elif factor.dim != n - 1:
            report("product_dim", f"product factor {factor.id!r} must have dim {n - 1}")
        elif spec.degree != n * k * factor.degree:
            report(
                "product_degree",
                f"product (B x E, k={k}) needs L^n = n·k·(L_B)^(n-1) = {n * k * factor.degree}, got {spec.degree}",
                "rm:product",
            )
    if tags.ppav_type is not None:
        p = tags.ppav_type
        if not spec.is_principal:
            report("ppav_degree", f"ppav_type set but degree {spec.degree} != {n}! (not principal)")
        if p.kind in ("jacobian_genus2", "product_elliptic") and n != 2:
            report("ppav_dim", f"ppav_type {p.kind} describes a surface, got dim {n}")
        if p.kind == "known_epsilon":
            if n == 3 and p.value not in PPAV3_VALUES:
                report("ppav_value", f"known ε = {p.value} is not one of 1, 3/2, 12/7", "pr:ppav4")
            if p.value is not None and p.value < 1:
                report("ppav_value", f"known ε = {p.value} < 1", CITE_NAKAMAYE)


def epsilon_upper_from_curves(spec: AVSpec) -> Optional[Radical]:
    if not spec.curves:
        return None
    return Radical(min(c.epsilon for c in spec.curves))


class EllipticMin(NamedTuple):
    """Minimal catalogued elliptic degree and whether an attestation makes it the true minimum."""

    value: int
    attested_complete: bool


def min_elliptic_degree(spec: AVSpec) -> Optional[EllipticMin]:
    degrees = [s.degree for s in spec.subvarieties_of_dim(1)]
    if not degrees:
        return None
    e0 = min(degrees)
    attested = any(a.dim_k == 1 and rad_cmp(Radical(e0), a.bound) is Ordering.LESS for a in spec.attestations)
    return EllipticMin(e0, attested)


def elliptic_lower_bound(spec: AVSpec) -> Optional[Radical]:
    """A certified lower bound for the minimal elliptic degree ``ε₀``, if attestations give one.

    With an attestation ``(1, r)`` every elliptic curve of degree below ``r``
    is catalogued, so ``ε₀ >= min(r, smallest catalogued degree)``.
    """
    bounds = [a.bound for a in spec.attestations if a.dim_k == 1]
    if not bounds:
        return None
    r = max(bounds)
    found = min_elliptic_degree(spec)
    if found is not None and Radical(found.value) < r:
        return Radical(found.value)
    return r
