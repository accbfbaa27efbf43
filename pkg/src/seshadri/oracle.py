"""Independent cross-checks for the exact engine.

Nothing in here is imported by the decision path. The checks are

* :func:`float_check`: radical comparison against mpmath at high precision,
* :func:`permuted_evaluate`: the engine replayed under a shuffled rule table,
* :func:`exhaustive_min_check`: the subvariety descent recomputed by brute
  force with plain integer arithmetic,

plus seeded generators of valid instances to feed them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .engine import SeshadriResult, evaluate, evaluate_with_order, explain
from .model import (
    PPAV3_VALUES,
    AVSpec,
    CompletenessAttestation,
    CurveCert,
    PPAVType,
    ProductDecomposition,
    StructureTags,
    SubvarietyDatum,
    validate,
)
from .radicals import Ordering, Radical, iroot, rad_cmp

__all__ = [
    "DescentCheck",
    "FloatCheck",
    "OracleFailure",
    "SyntheticInstance",
    "attested_instance",
    "exhaustive_min_check",
    "float_check",
    "permuted_evaluate",
    "random_instance",
    "random_radical",
    "random_radical_pair",
]


class OracleFailure(AssertionError):
    """An oracle disagreed with the engine."""


# ------------------------------------------------------------ float check


@dataclass(frozen=True)
class FloatCheck:
    exact: Ordering
    numeric: Optional[Ordering]  # None when the gap is inside the tolerance
    left: str
    right: str

    @property
    def tie(self) -> bool:
        return self.numeric is None

    @property
    def agree(self) -> bool:
        return self.tie or self.numeric is self.exact

    def __str__(self) -> str:
        if self.tie:
            return f"tie within tolerance ({self.left} vs {self.right}), exact path authoritative: {self.exact.name}"
        verdict = "agree" if self.agree else "DISAGREE"
        return f"{verdict}: {self.left} {self.numeric.symbol} {self.right} (exact {self.exact.symbol})"


def _mp_value(a: Radical) -> mpmath.mpf:
    coeff = mpmath.mpf(a.coeff.numerator) / a.coeff.denominator
    return coeff * mpmath.root(a.radicand, a.index)


def float_check(a: Radical, b: Radical, digits: int = 50) -> FloatCheck:
    """Compare ``a`` and ``b`` numerically with ``digits`` significant digits."""
    if digits < 30:
        raise ValueError("float_check needs at least 30 digits")
    with mpmath.workdps(digits + 10):
        x, y = _mp_value(a), _mp_value(b)
        gap = x - y
        scale = max(abs(x), abs(y), mpmath.mpf(1))
        tol = mpmath.mpf(10) ** (6 - digits) * scale
        numeric = None if abs(gap) < tol else (Ordering.LESS if gap < 0 else Ordering.GREATER)
        shown = (mpmath.nstr(x, 12), mpmath.nstr(y, 12))
    return FloatCheck(rad_cmp(a, b), numeric, *shown)


def random_radical(rng: random.Random) -> Radical:
    index = rng.choice((1, 2, 2, 3, 3, 4, 5, 6))
    coeff = Fraction(rng.randint(1, 60), rng.randint(1, 30))
    radicand = rng.randint(1, 5000)
    if rng.random() < 0.2:
        # plant perfect powers so normalization has work to do
        radicand *= rng.randint(2, 12) ** index
    return Radical(coeff, radicand, index)


def random_radical_pair(rng: random.Random) -> tuple[Radical, Radical]:
    """Two radicals; some pairs are equal in disguise or differ below any float precision."""
    a = random_radical(rng)
    roll = rng.random()
    if roll < 0.1:
        t = rng.randint(2, 9)
        return a, Radical(a.coeff / t, a.radicand * t**a.index, a.index)
    if roll < 0.15:
        return a, a * (1 + Fraction(1, 10 ** rng.randint(45, 80)))
    return a, random_radical(rng)


# ----------------------------------------------------------- confluence


def permuted_evaluate(spec: AVSpec, seed: int) -> SeshadriResult:
    """Evaluate under a seed-shuffled rule order; raise if it differs from :func:`evaluate`."""
    reference = evaluate(spec)
    shuffled = evaluate_with_order(spec, seed)
    if shuffled.outcome() != reference.outcome():
        raise OracleFailure(
            f"rule order seed {seed} changed the result for {spec.id!r}: "
            f"{reference.summary()} vs {shuffled.summary()}\n"
            f"--- default order ---\n{explain(reference)}\n"
            f"--- shuffled order ---\n{explain(shuffled)}"
        )
    return shuffled


# ------------------------------------------------------- descent oracle


@dataclass(frozen=True)
class DescentCheck:
    passed: bool
    expected: str
    got: str
    detail: str = ""

    def __str__(self) -> str:
        head = "pass" if self.passed else "FAIL"
        return f"{head}: expected {self.expected}, engine {self.got}" + (f" ({self.detail})" if self.detail else "")


def _power(a: Radical, p: int) -> Fraction:
    # a**p for p a multiple of a.index, by hand
    return a.coeff**p * Fraction(a.radicand) ** (p // a.index)


def _below(a: Radical, b: Radical) -> bool:
    p = a.index * b.index
    return _power(a, p) < _power(b, p)


def _below_threshold(x: Radical, n: int, degree: int) -> bool:
    """``x < degree**(1/n) / n``, i.e. ``x**n * n**n < degree``, raised to ``x.index``."""
    m = x.index
    return _power(x, n * m) * Fraction(n) ** (n * m) < Fraction(degree) ** m


def _in_descent_set(sub_degree: int, i: int, n: int, degree: int) -> bool:
    """``d < r_i = (i (L^n)^(1/n) / n)**i`` as ``d^n n^(in) < i^(in) (L^n)^i``."""
    return sub_degree**n * n ** (i * n) < i ** (i * n) * degree**i


def _attested(spec: AVSpec, i: int) -> bool:
    # bound >= r_i with bound = c * R**(1/m): c^(nm) R^n >= (i^(in) L^i / n^(in))^m
    n, L = spec.dim, spec.degree
    for a in spec.attestations:
        if a.dim_k != i:
            continue
        m = a.bound.index
        lhs = a.bound.coeff ** (n * m) * Fraction(a.bound.radicand) ** n
        rhs = Fraction(i ** (i * n) * L**i, n ** (i * n)) ** m
        if lhs >= rhs:
            return True
    return False


def _rmin(a: Optional[Radical], b: Radical) -> Radical:
    return b if a is None or _below(b, a) else a


def exhaustive_min_check(spec: AVSpec, result: Optional[SeshadriResult] = None) -> DescentCheck:
    """Recompute the descent minimum a_1 by brute force and compare with the engine.

    Applies only when the engine certifies ``ε < (L^n)^(1/n)/n`` and every
    dimension is attested; otherwise the check passes vacuously.
    """
    result = result or evaluate(spec)
    n, L = spec.dim, spec.degree
    got = result.summary()
    if n < 2:
        return DescentCheck(True, "n/a", got, "descent does not apply")
    if not all(_attested(spec, i) for i in range(1, n)):
        return DescentCheck(True, "n/a", got, "catalog not fully attested")
    if not result.is_inconsistent and not _below_threshold(result.hi, n, L):
        return DescentCheck(True, "n/a", got, "ε not certified below the threshold")

    # a_n is the threshold itself; walk i = n-1 .. 1 taking minima of E_i.
    lo: Optional[Radical] = None
    hi: Optional[Radical] = None
    for i in range(n - 1, 0, -1):
        for datum in spec.subvarieties:
            sub = datum.spec
            if sub.dim != i or not _in_descent_set(sub.degree, i, n, L):
                continue
            child = evaluate(sub)
            if child.is_inconsistent:
                return _verdict(result.is_inconsistent, "inconsistent", got, f"subvariety {sub.id} inconsistent")
            lo, hi = _rmin(lo, child.lo), _rmin(hi, child.hi)

    if lo is None:
        return _verdict(result.is_inconsistent, "inconsistent", got, "no catalogued subvariety below the thresholds")
    if not _below_threshold(lo, n, L):
        # every candidate is at least the threshold, so a_1 is the threshold
        return _verdict(result.is_inconsistent, "inconsistent", got, "a_1 equals the threshold")
    expected = f"ε ∈ [{lo}, {hi}]" if lo != hi else f"ε = {lo}"
    if result.is_inconsistent:
        return DescentCheck(False, expected, got, "engine inconsistent on a consistent descent")
    ok = not _below(result.lo, lo) and not _below(hi, result.hi)
    return DescentCheck(ok, expected, got, "" if ok else f"minima differ: oracle [{lo}, {hi}]")


def _verdict(engine_inconsistent: bool, expected: str, got: str, detail: str) -> DescentCheck:
    return DescentCheck(engine_inconsistent, expected, got, detail)


# ------------------------------------------------------------ generators


@dataclass(frozen=True)
class SyntheticInstance:
    seed: int
    spec: AVSpec
    planted: bool = False


MAX_DEGREE = 10**4


def _random_degree(rng: random.Random, n: int, cap: int = MAX_DEGREE) -> int:
    f = math.factorial(n)
    return f * rng.randint(1, max(1, cap // f))


def _random_curves(rng: random.Random, n: int, degree: int, count: int) -> list[CurveCert]:
    curves = []
    for _ in range(count):
        if n == 1:
            curves.append(CurveCert(degree * rng.randint(1, 3), 1))
            continue
        mult = rng.randint(1, 4)
        l_degree = mult * rng.randint(1, 12) + rng.randint(0, mult - 1)
        gen = rng.choice((None, None, 1, n))
        if gen == 1:
            mult, l_degree = 1, rng.randint(1, 30)
        curves.append(CurveCert(l_degree, mult, gen))
    return curves


def _random_spec(rng: random.Random, n: int, sid: str, depth: int) -> AVSpec:
    degree = _random_degree(rng, n, MAX_DEGREE if depth == 0 else 600)
    tags = StructureTags()
    subs: list[SubvarietyDatum] = []
    if n == 2 and rng.random() < 0.15:
        degree = 2
        tags = StructureTags(ppav_type=rng.choice((PPAVType.jacobian_genus2(), PPAVType.product_elliptic())))
    elif n == 3 and rng.random() < 0.08:
        degree = 6
        tags = StructureTags(ppav_type=PPAVType.known_epsilon(rng.choice(sorted(PPAV3_VALUES))))
    elif n > 1:
        budget = rng.randint(0, 6 if depth == 0 else 2)
        for j in range(budget):
            d = rng.randint(1, n - 1)
            subs.append(SubvarietyDatum(_random_spec(rng, d, f"{sid}.{j}", depth + 1), d == n - 1))
        divisors = [s.spec for s in subs if s.is_divisor]
        if divisors and rng.random() < 0.2:
            factor = rng.choice(divisors)
            k = rng.randint(1, 12)
            degree = n * k * factor.degree
            tags = StructureTags(product=ProductDecomposition(factor.id, k))

    curves = _random_curves(rng, n, degree, rng.randint(0, 3))
    for i, c in enumerate(curves):
        if subs and rng.random() < 0.2:
            host = rng.choice(subs).spec
            gen = c.generates_dim if c.generates_dim is None or c.generates_dim <= host.dim else None
            curves[i] = CurveCert(c.l_degree, c.mult, gen, host.id)

    attestations = []
    for i in range(1, n):
        if rng.random() < 0.3:
            r = Radical(Fraction(i, n) ** i, degree**i, n)
            attestations.append(CompletenessAttestation(i, r * rng.choice((Fraction(1, 2), 1, 2))))
    return AVSpec(sid, n, degree, tuple(subs), tuple(curves), tags, tuple(attestations))


def _planted(rng: random.Random, sid: str) -> AVSpec:
    if rng.random() < 0.5:
        # two elliptic curves below sqrt(L^2)/2 on a surface
        degree = 2 * rng.randint(9, 5000)
        subs = (
            SubvarietyDatum(AVSpec(f"{sid}.e1", 1, 1), True),
            SubvarietyDatum(AVSpec(f"{sid}.e2", 1, 2), True),
        )
        return AVSpec(sid, 2, degree, subs)
    # Jacobian divisor forces 4/3 while an elliptic curve of degree 1 forces 1
    degree = 6 * rng.randint(3, 29)
    jac = AVSpec(f"{sid}.J", 2, 2, tags=StructureTags(ppav_type=PPAVType.jacobian_genus2()))
    return AVSpec(sid, 3, degree, (SubvarietyDatum(jac, True),), (CurveCert(1, 1, 1),))


def random_instance(seed: int) -> SyntheticInstance:
    """A valid instance of dimension 1 to 4; about one in ten is planted inconsistent."""
    rng = random.Random(seed)
    sid = f"syn{seed}"
    if rng.random() < 0.1:
        spec = _planted(rng, sid)
        assert not validate(spec)
        return SyntheticInstance(seed, spec, planted=True)
    for _ in range(100):
        spec = _random_spec(rng, rng.randint(1, 4), sid, 0)
        if not validate(spec):
            return SyntheticInstance(seed, spec)
    raise RuntimeError(f"generator could not produce a valid instance for seed {seed}")


def attested_instance(seed: int) -> SyntheticInstance:
    """A consistent instance with every dimension attested, built around one elliptic curve.

    All catalogued subvarieties contain the elliptic curve ``E0`` of degree
    ``e``, so every Seshadri constant in sight is ``e``; other elliptic
    curves are too large for a nef-threshold argument to force E0 into
    them. Usually ``L^n > (n e)^n`` so the
    descent hypothesis holds.
    """
    rng = random.Random(seed)
    n = rng.choice((2, 3, 3, 4))
    e = rng.choice((1, 1, 2, 3))
    f = math.factorial(n)
    if rng.random() < 0.85:
        floor_degree = (n * e) ** n + 1
    else:
        floor_degree = n**n  # hypothesis may fail; the check is then vacuous
    degree = f * (-(-floor_degree // f) + rng.randint(0, 40))
    root = iroot(degree, n) + 1  # strictly above (L^n)^(1/n)

    def elliptic(j: int, d: int) -> SubvarietyDatum:
        return SubvarietyDatum(AVSpec(f"E{j}", 1, d), n == 2)

    e0 = AVSpec("E0", 1, e)
    subs = [SubvarietyDatum(e0, n == 2)]
    # On a surface an elliptic divisor of degree d <= L^2/(2e) has nef
    # threshold >= e and would have to contain E0, so stay above that.
    floor_extra = max(root, degree // (2 * e) + 1) if n == 2 else root
    for j in range(rng.randint(0, 2)):
        subs.append(elliptic(j + 1, floor_extra + rng.randint(0, 5)))

    def surface(j: int) -> AVSpec:
        d_s = 2 * (2 * e * e + 1 + rng.randint(0, 30))
        inner = [SubvarietyDatum(e0, True)]
        if rng.random() < 0.3:
            inner.append(SubvarietyDatum(AVSpec("Eb", 1, d_s + rng.randint(0, 10)), True))
        return AVSpec(f"S{j}", 2, d_s, tuple(inner))

    if n >= 3:
        for j in range(rng.randint(1, 3)):
            subs.append(SubvarietyDatum(surface(j), n == 3))
    if n == 4:
        for j in range(rng.randint(1, 2)):
            s = surface(10 + j)
            k = root + rng.randint(0, 4)
            tags = StructureTags(product=ProductDecomposition(s.id, k))
            t = AVSpec(f"T{j}", 3, 3 * k * s.degree, (SubvarietyDatum(s, True), SubvarietyDatum(e0, False)), tags=tags)
            subs.append(SubvarietyDatum(t, True))

    curves = (CurveCert(e, 1, 1),) if rng.random() < 0.7 else ()
    attestations = tuple(
        CompletenessAttestation(i, Radical(Fraction(i, n) ** i, degree**i, n)) for i in range(1, n)
    )
    spec = AVSpec(f"att{seed}", n, degree, tuple(subs), curves, attestations=attestations)
    problems = validate(spec)
    assert not problems, problems
    return SyntheticInstance(seed, spec)
