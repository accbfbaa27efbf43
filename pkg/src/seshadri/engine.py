"""Fixpoint driver: applies the rule table until nothing changes, recursing
into catalogued subvarieties, and packages the outcome with its proof."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .model import AVSpec, validate
from .radicals import Radical, rad_to_decimal
from .rules import (
    Knowledge,
    ProofTree,
    Rule,
    RuleApplication,
    default_rules,
    rigidity_report,
)

__all__ = ["InvalidInstance", "SeshadriResult", "Status", "evaluate", "explain", "Evaluator"]


class Status(str, enum.Enum):
    EXACT = "exact"
    BOUNDS = "bounds"
    INCONSISTENT = "inconsistent"


class InvalidInstance(ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class SeshadriResult:
    spec_id: str
    status: Status
    lo: Optional[Radical]
    hi: Optional[Radical]
    proof: ProofTree
    candidates: Optional[frozenset[Fraction]] = None
    blocked: tuple[str, ...] = ()
    facts: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    diagnostics: tuple[str, ...] = ()
    firings: int = 0
    threshold: Optional[Radical] = None

    @property
    def below_threshold(self) -> Optional[bool]:
        """Whether ε < (L^n)^(1/n)/n, or ``None`` when the bounds do not decide it."""
        if self.threshold is None or self.status is Status.INCONSISTENT:
            return None
        if self.hi < self.threshold:
            return True
        if self.lo >= self.threshold:
            return False
        return None

    @property
    def value(self) -> Optional[Fraction]:
        if self.status is Status.EXACT:
            assert self.lo is not None
            return self.lo.as_fraction()
        return None

    @property
    def is_inconsistent(self) -> bool:
        return self.status is Status.INCONSISTENT

    def summary(self) -> str:
        if self.status is Status.EXACT:
            return f"exact {self.value}"
        if self.status is Status.BOUNDS:
            text = f"bounds [{self.lo}, {self.hi}]"
            if self.candidates:
                text += " ∩ {" + ", ".join(str(c) for c in sorted(self.candidates)) + "}"
            return text
        return "inconsistent"

    def outcome(self) -> tuple:
        """The part of the result that must not depend on rule order."""
        cands = tuple(sorted(self.candidates)) if self.candidates is not None and self.status is Status.BOUNDS else None
        if self.status is Status.INCONSISTENT:
            return (self.status,)
        return (self.status, self.lo, self.hi, cands)


class Evaluator:
    """Evaluates instances with a fixed rule order, memoizing subinstances.

    ``order`` permutes the rule table; it exists so the confluence oracle can
    replay an instance under a different priority.
    """

    def __init__(self, order: Optional[Callable[[Sequence[Rule]], Sequence[Rule]]] = None):
        self._order = order
        self._cache: dict[AVSpec, SeshadriResult] = {}

    def __call__(self, spec: AVSpec) -> SeshadriResult:
        found = self._cache.get(spec)
        if found is None:
            found = self._run(spec)
            self._cache[spec] = found
        return found

    def rules_for(self, spec: AVSpec) -> Sequence[Rule]:
        rules = default_rules(spec.dim)
        return self._order(rules) if self._order else rules

    def _run(self, spec: AVSpec) -> SeshadriResult:
        rules = self.rules_for(spec)
        k = Knowledge.initial(spec)
        steps: list[ProofTree] = []
        firings = 0
        changed = True
        while changed and k.consistent:
            changed = False
            for rule in rules:
                ref = rule(spec, k, ctx=self)
                if ref is None:
                    continue
                new = k.merge(ref)
                if new == k:
                    continue
                k = new
                firings += 1
                steps.append(ProofTree(ref.application, ref.children))
                changed = True
                break
        return _finish(spec, k, steps, firings)


def _finish(spec: AVSpec, k: Knowledge, steps: list[ProofTree], firings: int) -> SeshadriResult:
    if not k.consistent:
        status = Status.INCONSISTENT
    elif k.pinned is not None:
        status = Status.EXACT
    else:
        status = Status.BOUNDS
    if status is Status.EXACT and k.pinned == 1 and spec.dim > 1:
        steps.append(ProofTree(rigidity_report(spec)))
    root = RuleApplication(
        "evaluate",
        "",
        (f"{spec.id}: n = {spec.dim}, L^{spec.dim} = {spec.degree}",),
        _status_text(status, k),
    )
    diagnostics = (k.inconsistency,) if k.inconsistency else ()
    return SeshadriResult(
        spec_id=spec.id,
        status=status,
        lo=None if status is Status.INCONSISTENT else k.lo,
        hi=None if status is Status.INCONSISTENT else k.hi,
        proof=ProofTree(root, tuple(steps)),
        candidates=k.candidates if status is not Status.INCONSISTENT else None,
        blocked=k.blocked,
        facts=k.facts,
        notes=k.notes,
        diagnostics=diagnostics,
        firings=firings,
        threshold=spec.nakamaye_threshold,
    )


def _status_text(status: Status, k: Knowledge) -> str:
    if status is Status.EXACT:
        return f"ε = {k.pinned}"
    if status is Status.BOUNDS:
        return f"ε ∈ [{k.lo}, {k.hi}]"
    return f"inconsistent: {k.inconsistency}"


def evaluate(spec: AVSpec, *, check: bool = True) -> SeshadriResult:
    """Seshadri constant of ``spec`` as an exact value or certified bounds.

    Raises :class:`InvalidInstance` when ``spec`` fails :func:`validate`.
    """
    if check:
        problems = validate(spec)
        if problems:
            raise InvalidInstance(problems)
    return Evaluator()(spec)


def evaluate_with_order(spec: AVSpec, seed: int) -> SeshadriResult:
    """Evaluate with the rule table shuffled by ``seed`` (at every depth)."""

    def shuffle(rules: Sequence[Rule]) -> Sequence[Rule]:
        out = list(rules)
        random.Random(seed).shuffle(out)
        return out

    return Evaluator(order=shuffle)(spec)


def _render(tree: ProofTree, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    node = tree.node
    head = f"{pad}- {node.rule_name}"
    if node.citation:
        head += f" [{node.citation}]"
    lines.append(head)
    for p in node.premises:
        lines.append(f"{pad}    · {p}")
    if node.effect:
        lines.append(f"{pad}    ⇒ {node.effect}")
    for child in tree.children:
        _render(child, depth + 1, lines)


def explain(result: SeshadriResult) -> str:
    """Human-readable report of ``result`` and the proof behind it."""
    lines = [f"instance {result.spec_id}: {result.summary()}"]
    if result.status is Status.BOUNDS:
        lines.append(
            f"  lo ≈ {rad_to_decimal(result.lo, 12, mark=True)}, hi ≈ {rad_to_decimal(result.hi, 12, mark=True)}"
        )
    if result.candidates and result.status is Status.BOUNDS:
        lines.append("candidate values: " + ", ".join(str(c) for c in sorted(result.candidates)))
    for d in result.diagnostics:
        lines.append(f"inconsistency: {d}")
    if result.blocked:
        lines.append("blocked descents:")
        lines.extend(f"  - {b}" for b in result.blocked)
    if result.facts:
        lines.append("facts:")
        lines.extend(f"  - {f}" for f in result.facts)
    if result.notes:
        lines.append("notes:")
        lines.extend(f"  - {n}" for n in result.notes)
    lines.append("proof:")
    _render(result.proof, 1, lines)
    return "\n".join(lines)
