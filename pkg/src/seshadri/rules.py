"""One function per theorem: each inspects an instance and the current
knowledge about its Seshadri constant and proposes a refinement.

A rule never mutates anything. It returns ``None`` when its hypothesis does
not hold, otherwise a :class:`Refinement` carrying the tightened bounds (or a
reduction to a subvariety, a candidate set, an inconsistency) together with a
:class:`RuleApplication` that records the exact comparisons it relied on.

Rules that need the Seshadri constant of a subvariety ask the evaluator they
are given (``ctx``); by default that is :func:`seshadri.engine.evaluate`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .model import AVSpec, SubvarietyDatum, elliptic_lower_bound, find_subvariety, min_elliptic_degree
from .radicals import (
    Ordering,
    Radical,
    Witness,
    cmp_witness,
    compare_roots,
    floor_scaled,
)

# Citations are theorem labels plus the statement used, written as formulas.
CITE = {
    "elliptic": "elliptic curve: ε(E, L) = deg L",
    "lower_one": "th:nakamaye: ε(A,L) ≥ 1",
    "rigidity": "th:nakamaye: ε(A,L) = 1 iff (A,L) ≅ (E,L_1) × (B,L_2) with deg L_1 = 1",
    "upper_root": "eq:upper: ε(A,L) ≤ (L^n)^(1/n)",
    "curves": "definition: ε(A,L) = inf over curves C ∋ 0 of L·C / mult_0 C",
    "subvariety": "definition: a curve in B ⊂ A is a curve in A, so ε(A,L) ≤ ε(B,L|_B)",
    "product": "rm:product: ε(B×E, p*L ⊗ q*M_k) = min{ε(B,L), k}",
    "ppav_jacobian": "pr:ppav3: ε(J(C), Θ) = 4/3 for a genus-two Jacobian",
    "ppav_product": "th:nakamaye: ε(E_1×E_2, L_1⊠L_2) = 1 for degree-one factors",
    "ppav_known": "pr:ppav4: ε of a principally polarized threefold is 1, 3/2 or 12/7",
    "nef_threshold": "lm:ampleness: σ(L,D)·(L|_D)^(n-1) = L^n / n",
    "reduction": "cr:reduction: (L^n)^(1/n) > (n (L|_D)^(n-1))^(1/(n-1)) ⇒ ε(A,L) = ε(D,L|_D)",
    "reduction_a": "th:main2: (L^n)^(1/n) ≥ (a (L|_D)^(n-1))^(1/(n-1)) and ε(A,L) < a (L^n)^(1/n)/n ⇒ ε(A,L) = ε(D,L|_D)",
    "containment": "pr:main2: (L^n)^(1/n) > (≥) (a (L|_D)^(n-1))^(1/(n-1)) ⇒ every C with ε_C ≤ (<) a (L^n)^(1/n)/n lies in D",
    "descent": "th:low_seshadri: ε(A,L) < (L^n)^(1/n)/n ⇒ ε(A,L) = ε(B,L|_B) for a proper abelian subvariety B",
    "surface_pin": "pr:submaximal2: ε(S,L) < (L²)^(1/2)/2 ⇒ exactly one submaximal curve, elliptic, and it is the Seshadri curve",
    "bauer": "lm:surface: ε(S,L) ≥ min{ε₀, (14 L²)^(1/2)/4}",
    "dichotomy": "th:main1: ε(A,L) < (L³)^(1/3)/3 ⇒ ε(A,L) = ε(S,L|_S) for S with (L³)^(1/3) > 3(14 (L|_S)²)^(1/2)/4, else ε(A,L) is an elliptic degree",
    "classifier": "cr:main3: L³ ≤ 174 and ε(A,L) < (L³)^(1/3)/3 ⇒ ε(A,L) ∈ {1, 4/3}; L³ ≤ 60 ⇒ ε(A,L) = 1; ε = 4/3 ⇒ L³ > 64",
    "ppav_divisor": "pr:ppav3 / pr:ppav4: a principally polarized abelian divisor D with L³ ≥ 18 (resp. L⁴ ≥ 72) gives ε(A,L) = ε(D,L|_D)",
    "two_divisors": "pr:sumaximal3: two abelian divisors in D_a ⇒ at most one curve in C_a, elliptic; a = 3 ⇒ exactly one, the Seshadri curve",
}

SHARP_DENOMINATOR = 10**6


@dataclass(frozen=True)
class RuleApplication:
    rule_name: str
    citation: str
    premises: tuple[str, ...] = ()
    effect: str = ""


@dataclass(frozen=True)
class ProofTree:
    node: RuleApplication
    children: tuple[ProofTree, ...] = ()

    def walk(self) -> Iterable[ProofTree]:
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass(frozen=True)
class Knowledge:
    """What is currently certified about ``ε(A, L)``.

    ``candidates``, when set, is a finite set known to contain the value;
    ``integral`` records that the value is the degree of an elliptic curve.
    """

    lo: Radical
    hi: Radical
    candidates: Optional[frozenset[Fraction]] = None
    integral: bool = False
    reduced: frozenset[str] = frozenset()
    facts: tuple[str, ...] = ()
    blocked: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    inconsistency: Optional[str] = None

    @classmethod
    def initial(cls, spec: AVSpec) -> Knowledge:
        # Before any rule fires the only thing known is positivity; the
        # interval below is a placeholder that the base rules overwrite.
        return cls(lo=Radical(Fraction(1, 10**9)), hi=Radical(spec.degree))

    @property
    def pinned(self) -> Optional[Fraction]:
        if self.lo == self.hi and self.lo.is_rational:
            return self.lo.as_fraction()
        return None

    @property
    def consistent(self) -> bool:
        return self.inconsistency is None

    def merge(self, ref: Refinement) -> Knowledge:
        if ref.inconsistency is not None:
            return replace(self, inconsistency=f"{ref.application.rule_name}: {ref.inconsistency}")
        lo = max(self.lo, ref.lo) if ref.lo is not None else self.lo
        hi = min(self.hi, ref.hi) if ref.hi is not None else self.hi
        cands = self.candidates
        if ref.candidates is not None:
            cands = ref.candidates if cands is None else cands & ref.candidates
        k = Knowledge(
            lo=lo,
            hi=hi,
            candidates=cands,
            integral=self.integral or ref.integral,
            reduced=self.reduced | ref.reduced,
            facts=_extend(self.facts, ref.facts),
            blocked=_extend(self.blocked, ref.blocked),
            notes=_extend(self.notes, ref.notes),
        )
        return k._settle(ref.application.rule_name)

    def _settle(self, rule_name: str) -> Knowledge:
        lo, hi, cands = self.lo, self.hi, self.candidates
        if lo > hi:
            return replace(self, inconsistency=f"{rule_name}: lower bound {lo} exceeds upper bound {hi}")
        if self.integral:
            first = max(floor_scaled(lo, 1), 1)
            if Radical(first) < lo:
                first += 1
            ints = frozenset(Fraction(i) for i in range(first, floor_scaled(hi, 1) + 1))
            cands = ints if cands is None else cands & ints
        if cands is not None:
            cands = frozenset(c for c in cands if lo <= Radical(c) <= hi)
            if not cands:
                return replace(
                    self,
                    candidates=cands,
                    inconsistency=f"{rule_name}: no admissible value left in [{lo}, {hi}]",
                )
            lo, hi = max(lo, Radical(min(cands))), min(hi, Radical(max(cands)))
        return replace(self, lo=lo, hi=hi, candidates=cands)


def _extend(old: tuple[str, ...], new: tuple[str, ...]) -> tuple[str, ...]:
    out = list(old)
    for item in new:
        if item not in out:
            out.append(item)
    return tuple(out)


@dataclass(frozen=True)
class Refinement:
    application: RuleApplication
    lo: Optional[Radical] = None
    hi: Optional[Radical] = None
    candidates: Optional[frozenset[Fraction]] = None
    integral: bool = False
    reduced: frozenset[str] = frozenset()
    facts: tuple[str, ...] = ()
    blocked: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    inconsistency: Optional[str] = None
    children: tuple[ProofTree, ...] = ()

    @property
    def pinned(self) -> Optional[Fraction]:
        if self.lo is not None and self.lo == self.hi and self.lo.is_rational:
            return self.lo.as_fraction()
        return None


def _evaluator(ctx: Optional[Callable]) -> Callable:
    if ctx is not None:
        return ctx
    from .engine import evaluate

    return evaluate


def _pin(value: Fraction | int) -> tuple[Radical, Radical]:
    r = Radical(Fraction(value))
    return r, r


def _app(name: str, premises: Iterable[str], effect: str, cite: Optional[str] = None) -> RuleApplication:
    return RuleApplication(name, CITE[cite or name], tuple(premises), effect)


def _describe(spec: AVSpec) -> str:
    return f"{spec.id}: n = {spec.dim}, L^{spec.dim} = {spec.degree}"


def _child_summary(result) -> str:
    return f"{result.spec_id} evaluates to {result.summary()}"


# ---------------------------------------------------------------- base bounds


def rule_lower_one(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    if spec.dim == 1:
        lo, hi = _pin(spec.degree)
        app = _app("elliptic", [_describe(spec)], f"ε = {spec.degree}")
        return Refinement(app, lo=lo, hi=hi)
    if k.lo >= 1:
        return None
    return Refinement(_app("lower_one", [_describe(spec)], "lo ← 1"), lo=Radical(1))


def rule_upper_root(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    bound = spec.root_degree
    if bound >= k.hi:
        return None
    return Refinement(_app("upper_root", [_describe(spec)], f"hi ← {bound}"), hi=bound)


def rule_curve_certificates(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    if not spec.curves:
        return None
    best = min(spec.curves, key=lambda c: c.epsilon)
    bound = Radical(best.epsilon)
    if bound >= k.hi:
        return None
    premise = f"curve with L·C = {best.l_degree}, mult_0 C = {best.mult}: ε_C = {best.epsilon}"
    return Refinement(_app("curves", [premise], f"hi ← {best.epsilon}"), hi=bound)


def rule_subvariety_upper(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    """``ε(A) ≤ ε(B)`` for every catalogued ``B``; also surfaces bad sub-data."""
    if not spec.subvarieties:
        return None
    evaluate = _evaluator(ctx)
    best = None
    for s in spec.subvarieties:
        r = evaluate(s.spec)
        if r.is_inconsistent:
            app = _app("subvariety", [_child_summary(r)], "inconsistent subvariety data")
            return Refinement(app, inconsistency=f"subvariety {s.spec.id!r} is inconsistent", children=(r.proof,))
        if best is None or r.hi < best.hi:
            best = r
    if best.hi >= k.hi:
        return None
    app = _app("subvariety", [_child_summary(best)], f"hi ← {best.hi}")
    return Refinement(app, hi=best.hi, children=(best.proof,))


# ------------------------------------------------------------ structural pins


def rule_ppav_tag(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    p = spec.tags.ppav_type
    if p is None:
        return None
    value = p.epsilon()
    cite = {"jacobian_genus2": "ppav_jacobian", "product_elliptic": "ppav_product"}.get(p.kind, "ppav_known")
    lo, hi = _pin(value)
    app = _app("ppav_tag", [f"{spec.id} is principally polarized of type {p.kind}"], f"ε = {value}", cite)
    return Refinement(app, lo=lo, hi=hi)


def rule_product(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    prod = spec.tags.product
    if prod is None:
        return None
    factor = find_subvariety(spec, prod.factor_id)
    if factor is None:
        raise ValueError(f"product factor {prod.factor_id!r} is not catalogued in {spec.id!r}")
    r = _evaluator(ctx)(factor)
    deg = Radical(prod.elliptic_degree)
    premises = [f"(A,L) ≅ ({factor.id}) × (E, M_{prod.elliptic_degree})", _child_summary(r)]
    if r.is_inconsistent:
        app = _app("product", premises, "inconsistent factor")
        return Refinement(app, inconsistency=f"factor {factor.id!r} is inconsistent", children=(r.proof,))
    if deg <= r.lo:
        lo, hi = _pin(prod.elliptic_degree)
        effect = f"ε = k = {prod.elliptic_degree}"
        cands = None
    else:
        lo, hi = min(r.lo, deg), min(r.hi, deg)
        cands = None
        if r.candidates is not None:
            cands = frozenset(min(c, Fraction(prod.elliptic_degree)) for c in r.candidates)
        effect = f"ε = {lo}" if lo == hi else f"ε ∈ [{lo}, {hi}]"
    if lo == k.lo and hi == k.hi and cands is None:
        return None
    return Refinement(_app("product", premises, effect), lo=lo, hi=hi, candidates=cands, children=(r.proof,))


def rule_nef_threshold(parent_degree: int, n: int, divisor_degree: int) -> Fraction:
    """``σ(L, D) = L^n / (n (L|_D)^(n-1))`` for an abelian divisor ``D``."""
    if divisor_degree <= 0 or parent_degree <= 0 or n <= 0:
        raise ValueError("degrees and dimension must be positive")
    return Fraction(parent_degree, n * divisor_degree)


# ------------------------------------------------------------- reductions


def _reduce_through(
    name: str,
    spec: AVSpec,
    k: Knowledge,
    ctx,
    chosen: list[tuple[SubvarietyDatum, list[str]]],
    extra_candidates: Optional[frozenset[Fraction]] = None,
) -> Optional[Refinement]:
    """Replace ε(A) by ε(D) for every chosen divisor and intersect the answers."""
    chosen = [(d, w) for d, w in chosen if d.spec.id not in k.reduced]
    if not chosen:
        return None
    evaluate = _evaluator(ctx)
    lo = hi = cands = None
    premises: list[str] = []
    children: list[ProofTree] = []
    exact: dict[str, Fraction] = {}
    for d, witnesses in chosen:
        r = evaluate(d.spec)
        premises.extend(witnesses)
        premises.append(_child_summary(r))
        children.append(r.proof)
        if r.is_inconsistent:
            app = _app(name, premises, f"reduce to {d.spec.id}")
            return Refinement(app, inconsistency=f"divisor {d.spec.id!r} is inconsistent", children=tuple(children))
        if r.value is not None:
            exact[d.spec.id] = r.value
        lo = r.lo if lo is None else max(lo, r.lo)
        hi = r.hi if hi is None else min(hi, r.hi)
        if r.candidates is not None:
            cands = r.candidates if cands is None else cands & r.candidates
    ids = ", ".join(d.spec.id for d, _ in chosen)
    app = _app(name, premises, f"ε(A,L) = ε({ids})")
    if len(set(exact.values())) > 1:
        detail = ", ".join(f"ε({i}) = {v}" for i, v in sorted(exact.items()))
        return Refinement(app, inconsistency=f"reductions disagree: {detail}", children=tuple(children))
    if extra_candidates is not None:
        cands = extra_candidates if cands is None else cands & extra_candidates
    return Refinement(
        app,
        lo=lo,
        hi=hi,
        candidates=cands,
        reduced=frozenset(d.spec.id for d, _ in chosen),
        children=tuple(children),
    )


def _divisor_witness(spec: AVSpec, d: AVSpec, a: Fraction) -> Witness:
    n = spec.dim
    return compare_roots(spec.degree, n, a * d.degree, n - 1)


def rule_divisor_reduction_unconditional(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    if spec.dim < 2:
        return None
    chosen = []
    for d in spec.divisors:
        w = _divisor_witness(spec, d.spec, Fraction(spec.dim))
        if w.ordering is Ordering.GREATER:
            chosen.append((d, [f"{d.spec.id}: {w}"]))
    return _reduce_through("reduction", spec, k, ctx, chosen)


def rule_divisor_reduction_conditional(spec: AVSpec, k: Knowledge, a: Fraction | int, ctx=None) -> Optional[Refinement]:
    a = Fraction(a)
    if a <= 0:
        raise ValueError(f"parameter a must be positive, got {a}")
    if spec.dim < 2:
        return None
    target = spec.root_degree * a / spec.dim
    upper = cmp_witness(k.hi, target)
    if upper.ordering is not Ordering.LESS:
        return None
    chosen = []
    for d in spec.divisors:
        w = _divisor_witness(spec, d.spec, a)
        if w.ordering is not Ordering.LESS:
            chosen.append((d, [f"a = {a}", f"{d.spec.id}: {w}", f"hi = {k.hi} < a (L^n)^(1/n)/n: {upper}"]))
    return _reduce_through("reduction_a", spec, k, ctx, chosen)


def sharp_parameter(spec: AVSpec, hi: Radical) -> Fraction:
    """Smallest ``a`` on the ``1/10**6`` grid with ``hi < a (L^n)^(1/n) / n``."""
    exact = hi * spec.dim / spec.root_degree
    return Fraction(floor_scaled(exact, SHARP_DENOMINATOR) + 1, SHARP_DENOMINATOR)


def rule_divisor_reduction_sharp(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    if spec.dim < 2 or not spec.divisors:
        return None
    return rule_divisor_reduction_conditional(spec, k, sharp_parameter(spec, k.hi), ctx)


def rule_containment(spec: AVSpec, k: Knowledge, a: Fraction | int, strict: bool = True) -> Optional[Refinement]:
    """Curves forced into abelian divisors.

    ``strict`` selects the variant with a strict root inequality and the
    non-strict curve bound; ``strict=False`` the other one.
    """
    a = Fraction(a)
    if a <= 0:
        raise ValueError(f"parameter a must be positive, got {a}")
    n = spec.dim
    if n < 2 or not spec.curves:
        return None
    threshold = spec.root_degree * a / n
    facts: list[str] = []
    premises: list[str] = [f"a = {a}", f"curve bound a (L^n)^(1/n)/n = {threshold}"]
    problems: list[str] = []
    for d in spec.divisors:
        w = _divisor_witness(spec, d.spec, a)
        if w.ordering is Ordering.LESS or (strict and w.ordering is Ordering.EQUAL):
            continue
        premises.append(f"{d.spec.id}: {w}")
        for i, c in enumerate(spec.curves):
            o = cmp_witness(Radical(c.epsilon), threshold).ordering
            if o is Ordering.GREATER or (not strict and o is Ordering.EQUAL):
                continue
            facts.append(f"curve #{i} (ε_C = {c.epsilon}) ⊂ {d.spec.id}")
            if c.generates_dim == n:
                problems.append(f"curve #{i} generates A but is forced into {d.spec.id}")
            host = find_subvariety(spec, c.contained_in) if c.contained_in else None
            if host is not None and host.id != d.spec.id and c.generates_dim == host.dim:
                if host.dim == n - 1 and host.degree != d.spec.degree:
                    problems.append(f"curve #{i} generates divisor {host.id} but is forced into divisor {d.spec.id}")
            if d.spec.dim == 1 and (c.l_degree, c.mult) != (d.spec.degree, 1):
                problems.append(
                    f"curve #{i} is forced into elliptic curve {d.spec.id} of degree {d.spec.degree} "
                    f"but has L·C = {c.l_degree}, mult = {c.mult}"
                )
    if not facts:
        return None
    variant = "strict" if strict else "non-strict"
    app = _app("containment", premises, f"{variant}: " + "; ".join(facts))
    if problems:
        return Refinement(app, inconsistency="; ".join(problems))
    return Refinement(app, facts=tuple(facts))


def descent_thresholds(spec: AVSpec) -> list[tuple[int, Radical]]:
    """``r_i = (i (L^n)^(1/n) / n)^i`` for ``i = 1 .. n-1``."""
    n = spec.dim
    return [(i, Radical(Fraction(i, n) ** i, spec.degree**i, n)) for i in range(1, n)]


def rule_subvariety_descent(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    n = spec.dim
    if n < 2:
        return None
    gate = cmp_witness(k.hi, spec.nakamaye_threshold)
    if gate.ordering is not Ordering.LESS:
        return None
    thresholds = descent_thresholds(spec)
    missing = [
        (i, r) for i, r in thresholds if not any(a.covers(i, r) for a in spec.attestations)
    ]
    if missing:
        notes = tuple(f"descent blocked: catalog incomplete for dimension {i} (needs bound ≥ {r})" for i, r in missing)
        if all(b in k.blocked for b in notes):
            return None
        return Refinement(_app("descent", [f"hi = {k.hi}: {gate}"], "blocked"), blocked=notes)
    members = []
    for i, r in thresholds:
        for sub in spec.subvarieties_of_dim(i):
            if Radical(sub.degree) < r:
                members.append((sub, f"{sub.id}: (L|_B)^{i} = {sub.degree} < r_{i} = {r}"))
    premises = [f"hi = {k.hi} < (L^n)^(1/n)/n: {gate}"]
    if not members:
        app = _app("descent", premises, "no subvariety below the thresholds")
        return Refinement(
            app, inconsistency="descent yields no subvariety below threshold although ε(A,L) < (L^n)^(1/n)/n"
        )
    key = frozenset(f"descent:{sub.id}" for sub, _ in members)
    if key <= k.reduced:
        return None
    evaluate = _evaluator(ctx)
    lo = hi = None
    children = []
    for sub, why in members:
        r = evaluate(sub)
        premises.append(why)
        premises.append(_child_summary(r))
        children.append(r.proof)
        if r.is_inconsistent:
            app = _app("descent", premises, "inconsistent subvariety")
            return Refinement(app, inconsistency=f"subvariety {sub.id!r} is inconsistent", children=tuple(children))
        lo = r.lo if lo is None else min(lo, r.lo)
        hi = r.hi if hi is None else min(hi, r.hi)
    effect = f"ε = {lo}" if lo == hi else f"ε ∈ [{lo}, {hi}]"
    return Refinement(_app("descent", premises, effect), lo=lo, hi=hi, reduced=key, children=tuple(children))


# ------------------------------------------------------------- surfaces


def _elliptic_degrees(spec: AVSpec) -> list[tuple[int, str]]:
    out = [(c.l_degree, f"elliptic certificate #{i}") for i, c in enumerate(spec.curves) if c.is_elliptic]
    out += [(s.degree, f"elliptic subvariety {s.id}") for s in spec.subvarieties_of_dim(1)]
    return out


def rule_surface_pin(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    if spec.dim != 2:
        return None
    threshold = spec.nakamaye_threshold
    hits: dict[int, list[str]] = {}
    for e, label in _elliptic_degrees(spec):
        w = cmp_witness(Radical(e), threshold)
        if w.ordering is Ordering.LESS:
            hits.setdefault(e, []).append(f"{label}: {e} < (L²)^(1/2)/2 since {w}")
    if not hits:
        return None
    premises = [p for e in sorted(hits) for p in hits[e]]
    if len(hits) > 1:
        app = _app("surface_pin", premises, "uniqueness violated")
        return Refinement(app, inconsistency=f"elliptic degrees {sorted(hits)} all lie below (L²)^(1/2)/2")
    (e,) = hits
    root = spec.root_degree
    for i, c in enumerate(spec.curves):
        if Radical(c.epsilon) < root and (c.l_degree, c.mult) != (e, 1):
            app = _app("surface_pin", premises, "second submaximal curve")
            return Refinement(
                app,
                inconsistency=f"curve #{i} (ε_C = {c.epsilon}) is submaximal but the elliptic curve of degree {e} is the only one",
            )
    lo, hi = _pin(e)
    if k.pinned == e:
        return None
    return Refinement(_app("surface_pin", premises, f"ε = {e}"), lo=lo, hi=hi)


def rule_surface_bauer(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    if spec.dim != 2:
        return None
    bauer = Radical(Fraction(1, 4), 14 * spec.degree, 2)
    e0 = elliptic_lower_bound(spec)
    if e0 is None:
        note = f"conditional: ε ≥ min{{ε₀, {bauer}}} but ε₀ is not attested"
        if note in k.notes:
            return None
        return Refinement(_app("bauer", [_describe(spec)], "diagnostic only"), notes=(note,))
    bound = min(e0, bauer)
    if bound <= k.lo:
        return None
    found = min_elliptic_degree(spec)
    e0_text = f"ε₀ = {e0}" if found is not None and Radical(found.value) == e0 else f"ε₀ ≥ {e0} (attested)"
    return Refinement(_app("bauer", [e0_text, f"(14 L²)^(1/2)/4 = {bauer}"], f"lo ← {bound}"), lo=bound)


# ------------------------------------------------------------- threefolds


def dichotomy_bound(spec: AVSpec) -> Radical:
    """Degree below which a surface satisfies ``(L³)^(1/3) > 3 (14 d)^(1/2) / 4``.

    Solving for ``d`` gives ``d < (8/63) (L³)^(2/3)``.
    """
    return Radical(Fraction(8, 63), spec.degree**2, 3)


def rule_threefold_dichotomy(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    if spec.dim != 3:
        return None
    gate = cmp_witness(k.hi, spec.nakamaye_threshold)
    if gate.ordering is not Ordering.LESS:
        return None
    gate_text = f"hi = {k.hi} < (L³)^(1/3)/3: {gate}"
    chosen = []
    for d in spec.divisors:
        w = compare_roots(spec.degree, 3, Fraction(9 * 14 * d.spec.degree, 16), 2)
        if w.ordering is Ordering.GREATER:
            chosen.append((d, [gate_text, f"{d.spec.id}: (L³)^(1/3) > 3 (14·{d.spec.degree})^(1/2)/4 since {w}"]))
    if chosen:
        return _reduce_through("dichotomy", spec, k, ctx, chosen)
    bound = dichotomy_bound(spec)
    if not any(a.covers(2, bound) for a in spec.attestations):
        note = f"elliptic dichotomy blocked: catalog incomplete for dimension 2 (needs bound ≥ {bound})"
        if note in k.blocked:
            return None
        return Refinement(_app("dichotomy", [gate_text], "blocked"), blocked=(note,))
    fact = "ε(A,L) is the degree of an elliptic curve"
    premises = [gate_text, f"no catalogued surface below {bound}, catalog attested"]
    lo = hi = None
    found = min_elliptic_degree(spec)
    e0 = elliptic_lower_bound(spec)
    effect = fact
    if found is not None and found.attested_complete:
        lo, hi = _pin(found.value)
        premises.append(f"ε₀ = {found.value} (attested)")
        effect = f"ε = ε₀ = {found.value}"
    elif e0 is not None:
        lo = e0
        premises.append(f"ε₀ ≥ {e0} (attested)")
    ref = Refinement(_app("dichotomy", premises, effect), lo=lo, hi=hi, integral=True, facts=(fact,))
    if fact in k.facts and (lo is None or lo <= k.lo) and (hi is None or hi >= k.hi):
        return None
    return ref


def rule_threefold_classifier(spec: AVSpec, k: Knowledge) -> Optional[Refinement]:
    if spec.dim != 3 or spec.degree > 174:
        return None
    gate = cmp_witness(k.hi, spec.nakamaye_threshold)
    if gate.ordering is not Ordering.LESS:
        return None
    cands = {Fraction(1), Fraction(4, 3)}
    premises = [f"L³ = {spec.degree} ≤ 174", f"hi = {k.hi} < (L³)^(1/3)/3: {gate}"]
    if spec.degree <= 60:
        cands = {Fraction(1)}
        premises.append(f"L³ = {spec.degree} ≤ 60")
    elif spec.degree <= 64:
        cands = {Fraction(1)}
        premises.append(f"L³ = {spec.degree} ≤ 64 rules out 4/3")
    cands_f = frozenset(cands)
    if k.candidates is not None and k.candidates <= cands_f:
        return None
    effect = "ε = 1" if len(cands) == 1 else "ε ∈ {1, 4/3}"
    return Refinement(_app("classifier", premises, effect), candidates=cands_f)


def rule_ppav_divisor(spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
    n = spec.dim
    if n == 3 and spec.degree >= 18:
        cands = frozenset({Fraction(1), Fraction(4, 3)})
    elif n == 4 and spec.degree >= 72:
        cands = frozenset({Fraction(1), Fraction(3, 2), Fraction(12, 7)})
    else:
        return None
    chosen = []
    for d in spec.divisors:
        if not d.spec.is_principal:
            continue
        w = compare_roots(spec.degree, n, n * d.spec.degree, n - 1)
        assert w.ordering is Ordering.GREATER
        chosen.append((d, [f"L^{n} = {spec.degree} ≥ {18 if n == 3 else 72}", f"{d.spec.id} principally polarized: {w}"]))
    return _reduce_through("ppav_divisor", spec, k, ctx, chosen, extra_candidates=cands)


def rule_threefold_two_divisors(spec: AVSpec, k: Knowledge, a: Fraction | int) -> Optional[Refinement]:
    a = Fraction(a)
    if a <= 0:
        raise ValueError(f"parameter a must be positive, got {a}")
    if spec.dim != 3:
        return None
    in_da = []
    for d in spec.divisors:
        w = _divisor_witness(spec, d.spec, a)
        if w.ordering is Ordering.GREATER:
            in_da.append(f"{d.spec.id} ∈ D_{a}: {w}")
    if len(in_da) < 2:
        return None
    bound = spec.root_degree * a / 3
    # curves of C_a keyed by their numerical data
    members: dict[tuple[int, int], list[str]] = {}
    for i, c in enumerate(spec.curves):
        if Radical(c.epsilon) <= bound:
            members.setdefault((c.l_degree, c.mult), []).append(f"curve #{i}")
    for s in spec.subvarieties_of_dim(1):
        if Radical(s.degree) <= bound:
            members.setdefault((s.degree, 1), []).append(f"elliptic subvariety {s.id}")
    premises = in_da + [f"C_{a}: ε_C ≤ {bound}"]
    if len(members) > 1:
        app = _app("two_divisors", premises, "more than one curve in C_a")
        listing = "; ".join(f"{'/'.join(v)} (ε_C = {Fraction(*key)})" for key, v in sorted(members.items()))
        return Refinement(app, inconsistency=f"at most one curve may satisfy ε_C ≤ {bound}: {listing}")
    fact = f"at most one curve in C_{a}, and it is elliptic"
    for key in members:
        if key[1] != 1:
            app = _app("two_divisors", premises, "curve in C_a is singular")
            return Refinement(app, inconsistency=f"the curve in C_{a} must be elliptic but has mult {key[1]}")
    for i, c in enumerate(spec.curves):
        if (c.l_degree, c.mult) in members and c.generates_dim not in (None, 1):
            app = _app("two_divisors", premises, "curve in C_a not elliptic")
            return Refinement(app, inconsistency=f"curve #{i} lies in C_{a} but generates dimension {c.generates_dim}")
    if a != 3:
        if fact in k.facts:
            return None
        return Refinement(_app("two_divisors", premises, fact), facts=(fact,))
    facts = (fact, "exactly one curve in C_3; it is the Seshadri curve")
    lo = hi = None
    effect = "ε is an elliptic degree ≤ (L³)^(1/3)"
    if members:
        ((deg, _),) = members
        lo, hi = _pin(deg)
        effect = f"ε = {deg}"
    else:
        hi = spec.root_degree
    if all(f in k.facts for f in facts) and (lo is None or k.pinned is not None):
        return None
    return Refinement(_app("two_divisors", premises, effect), lo=lo, hi=hi, integral=True, facts=facts)


def rigidity_report(spec: AVSpec) -> RuleApplication:
    return _app(
        "rigidity",
        [f"{spec.id}: ε = 1"],
        "structural report: (A,L) splits off an elliptic curve with a degree-one polarization",
    )


@dataclass(frozen=True)
class Rule:
    """A named entry of the engine's rule table."""

    name: str
    apply: Callable[..., Optional[Refinement]]
    recursive: bool = False
    params: dict = field(default_factory=dict)

    def __call__(self, spec: AVSpec, k: Knowledge, ctx=None) -> Optional[Refinement]:
        if self.recursive:
            return self.apply(spec, k, ctx=ctx, **self.params)
        return self.apply(spec, k, **self.params)


def default_rules(dim: Optional[int] = None) -> tuple[Rule, ...]:
    """The rule table in priority order."""
    rules = (
        Rule("lower_one", rule_lower_one),
        Rule("upper_root", rule_upper_root),
        Rule("curves", rule_curve_certificates),
        Rule("ppav_tag", rule_ppav_tag),
        Rule("product", rule_product, recursive=True),
        Rule("ppav_divisor", rule_ppav_divisor, recursive=True),
        Rule("surface_pin", rule_surface_pin),
        Rule("reduction", rule_divisor_reduction_unconditional, recursive=True),
        Rule("reduction_a=n", rule_divisor_reduction_conditional, recursive=True, params={"a": None}),
        Rule("reduction_sharp", rule_divisor_reduction_sharp, recursive=True),
        Rule("containment", rule_containment, params={"a": None, "strict": True}),
        Rule("containment_nonstrict", rule_containment, params={"a": None, "strict": False}),
        Rule("subvariety", rule_subvariety_upper, recursive=True),
        Rule("descent", rule_subvariety_descent, recursive=True),
        Rule("bauer", rule_surface_bauer),
        Rule("dichotomy", rule_threefold_dichotomy, recursive=True),
        Rule("classifier", rule_threefold_classifier),
        Rule("two_divisors", rule_threefold_two_divisors, params={"a": 3}),
    )
    if dim is None:
        return rules
    # a = n for the parametrized rules
    return tuple(
        replace(r, params={**r.params, "a": Fraction(dim)}) if r.params.get("a", 0) is None else r for r in rules
    )
