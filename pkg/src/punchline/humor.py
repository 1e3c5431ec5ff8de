"""Surprise, revelation and incongruity of statements for one listener.

A listener is a knowledge base plus an ordering method; a statement is a
pair (context, punchline).  Revision results are model sets, so the
surprise test is the disjointness of the preferred models of the context
and of context-and-punchline.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from .defaults import KnowledgeBase
from .errors import EquivalentPunchlines, ReasoningError, UndefinedLevel
from .logic import And, Formula, ModelSet, Not, conjoin, equivalent, entails, render, truth_table
from .orders import OrderMethod, build_order, nm_entails


@dataclass(frozen=True)
class Statement:
    context: Formula
    punchline: Formula

    def __str__(self) -> str:
        return f"({render(self.context)}, {render(self.punchline)})"


class NormKind(enum.Enum):
    STRICT = "strict"
    DEFAULT = "default"


@dataclass(frozen=True, order=True)
class NormRef:
    kind: NormKind
    index: int

    def __str__(self) -> str:
        return f"{self.kind.value}:{self.index}"


def norm_refs(kb: KnowledgeBase) -> list[NormRef]:
    refs = [NormRef(NormKind.STRICT, i) for i, r in enumerate(kb.strict) if r.is_norm]
    refs += [NormRef(NormKind.DEFAULT, i) for i, d in enumerate(kb.defaults) if d.is_norm]
    return refs


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer plus the model sets it was read from.

    ``applicable`` is false when the notion does not apply at all, e.g. a
    surprise test on a context that contradicts the strict rules.
    """

    holds: bool
    witnesses: Mapping[str, ModelSet] = field(default_factory=dict)
    applicable: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "witnesses", MappingProxyType(dict(self.witnesses)))

    def __bool__(self) -> bool:
        return self.holds


def is_surprising(
    kb: KnowledgeBase, st: Statement, method: OrderMethod | str = OrderMethod.LEX
) -> Verdict:
    order = build_order(kb, method)
    context = order.min_models(st.context)
    joint = order.min_models(And(st.context, st.punchline))
    if not context:
        return Verdict(False, {"context": context, "joint": joint}, applicable=False)
    return Verdict(context.isdisjoint(joint), {"context": context, "joint": joint})


def is_revealing(
    kb: KnowledgeBase, st: Statement, method: OrderMethod | str = OrderMethod.LEX
) -> Verdict:
    preferred = build_order(kb, method).min_models(st.punchline)
    holds = nm_entails(kb, st.punchline, st.context, method)
    return Verdict(holds, {"punchline": preferred}, applicable=bool(preferred))


def is_potentially_funny(
    kb: KnowledgeBase, st: Statement, method: OrderMethod | str = OrderMethod.LEX
) -> bool:
    return bool(is_surprising(kb, st, method)) and bool(is_revealing(kb, st, method))


def more_efficient(
    kb: KnowledgeBase,
    alpha: Formula,
    beta: Formula,
    beta_prime: Formula,
    method: OrderMethod | str = OrderMethod.LEX,
) -> bool:
    """Whether (α, β) is a more efficient telling than (α, β′): K∘β ⊨ β′.

    ``alpha`` does not enter the test; it is kept so the call names the two
    statements being compared.
    """
    if equivalent(beta, beta_prime, kb.universe):
        raise EquivalentPunchlines(f"{render(beta)} and {render(beta_prime)} are equivalent")
    return nm_entails(kb, beta, beta_prime, method)


# ---------------------------------------------------------------------------
# Gradual levels
# ---------------------------------------------------------------------------


class Conditioning(enum.Enum):
    """How π_Σ is conditioned on the punchline for the revealing level.

    MIN_BASED: qualitative min-based conditioning on β (best β-models raised to 1).
    UNNORMALIZED: keep π on β-models, 0 elsewhere.
    REVISED: min-based conditioning on the preferred models of β only;
    the level then collapses to 0 or 1.
    """

    MIN_BASED = "min"
    UNNORMALIZED = "unnormalized"
    REVISED = "revised"


@dataclass(frozen=True)
class GradualLevels:
    surprise_level: Fraction
    revealing_level: Fraction | None  # None when the punchline is impossible


def surprise_level(kb: KnowledgeBase, st: Statement) -> Fraction:
    dist = kb.distribution
    joint = And(st.context, st.punchline)
    if dist.necessity(st.context) == dist.necessity(joint):
        return Fraction(0)
    return 1 - dist.possibility(joint)


def conditional_degrees(
    kb: KnowledgeBase,
    condition: np.ndarray,
    conditioning: Conditioning = Conditioning.MIN_BASED,
) -> list[Fraction]:
    """π_Σ(· | condition) as exact degrees, one per interpretation."""
    dist = kb.distribution
    levels = dist.levels
    if not (condition & (levels > 0)).any():
        raise UndefinedLevel("conditioning on an event of possibility 0")
    best = int(levels[condition].max())
    out = []
    for i in range(kb.universe.size):
        if not condition[i]:
            out.append(Fraction(0))
        elif conditioning is not Conditioning.UNNORMALIZED and levels[i] == best:
            out.append(Fraction(1))
        else:
            out.append(Fraction(int(levels[i]), dist.top))
    return out


def revealing_level(
    kb: KnowledgeBase,
    st: Statement,
    conditioning: Conditioning = Conditioning.MIN_BASED,
    method: OrderMethod | str = OrderMethod.LEX,
) -> Fraction:
    """N(α | β) = 1 − max{π(ω | β) : ω ⊭ α}.

    Raises :class:`UndefinedLevel` when Π(β) = 0.
    """
    universe = kb.universe
    beta = truth_table(st.punchline, universe)
    if not (beta & (kb.distribution.levels > 0)).any():
        raise UndefinedLevel(f"punchline {render(st.punchline)} has possibility 0")
    if conditioning is Conditioning.REVISED:
        condition = build_order(kb, method).min_models(st.punchline).mask
        conditioning = Conditioning.MIN_BASED
    else:
        condition = beta
    degrees = conditional_degrees(kb, condition, conditioning)
    alpha = truth_table(st.context, universe)
    worst = max((degrees[i] for i in np.flatnonzero(~alpha)), default=Fraction(0))
    return 1 - worst


# ---------------------------------------------------------------------------
# Incongruity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormCheck:
    norm: NormRef
    violation: bool
    revelation: bool
    violation_models: ModelSet  # preferred models of α∧β once the norm is dropped
    revelation_models: ModelSet  # preferred models of β once the norm is dropped

    @property
    def incongruous(self) -> bool:
        return self.violation and self.revelation


@dataclass(frozen=True)
class IncongruityResult:
    incongruous: tuple[NormRef, ...]
    non_violable: tuple[NormRef, ...]
    checks: tuple[NormCheck, ...]
    errors: Mapping[NormRef, str] = field(default_factory=dict)

    def check(self, norm: NormRef) -> NormCheck | None:
        return next((c for c in self.checks if c.norm == norm), None)


def _drop_norm(kb: KnowledgeBase, norm: NormRef) -> tuple[KnowledgeBase, Formula]:
    if norm.kind is NormKind.STRICT:
        return kb.without_strict(norm.index), Not(kb.strict[norm.index].formula)
    return kb.without_default(norm.index), kb.defaults[norm.index].violation


def incongruity(
    kb: KnowledgeBase,
    st: Statement,
    method: OrderMethod | str = OrderMethod.LEX,
    norms: Sequence[NormRef] | None = None,
) -> IncongruityResult:
    """Test every norm (or the given ones) for violation and revelation in disregard.

    Strict norms entailed by the remaining strict rules cannot be violated;
    they are reported as non-violable and not tested further.
    """
    norms = norm_refs(kb) if norms is None else list(norms)
    joint = And(st.context, st.punchline)
    incongruous, non_violable, checks = [], [], []
    errors: dict[NormRef, str] = {}
    for norm in norms:
        if norm.kind is NormKind.STRICT:
            rest = [r.formula for i, r in enumerate(kb.strict) if i != norm.index]
            if entails(rest, kb.strict[norm.index].formula, kb.universe):
                non_violable.append(norm)
                continue
        try:
            reduced, negation = _drop_norm(kb, norm)
        except ReasoningError as exc:
            errors[norm] = str(exc)
            continue
        order = build_order(reduced, method)
        check = NormCheck(
            norm,
            violation=nm_entails(reduced, joint, negation, method),
            revelation=nm_entails(reduced, st.punchline, st.context, method),
            violation_models=order.min_models(joint),
            revelation_models=order.min_models(st.punchline),
        )
        checks.append(check)
        if check.incongruous:
            incongruous.append(norm)
    return IncongruityResult(
        tuple(incongruous), tuple(non_violable), tuple(checks), MappingProxyType(errors)
    )


# ---------------------------------------------------------------------------
# Aggregate analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JokeAnalysis:
    statement: Statement
    method: OrderMethod
    surprising: bool
    surprise_applicable: bool
    revealing: bool
    potentially_funny: bool
    incongruous_norms: tuple[NormRef, ...]
    non_violable_norms: tuple[NormRef, ...]
    levels: GradualLevels
    witnesses: Mapping[str, ModelSet | None]
    disregard: Mapping[NormRef, ModelSet]  # preferred α∧β models per incongruous norm
    notes: tuple[str, ...] = ()


def analyze(
    kb: KnowledgeBase,
    st: Statement,
    method: OrderMethod | str = OrderMethod.LEX,
    conditioning: Conditioning = Conditioning.MIN_BASED,
) -> JokeAnalysis:
    method = OrderMethod.parse(method)
    notes: list[str] = []
    surprise = is_surprising(kb, st, method)
    if not surprise.applicable:
        notes.append("surprise not applicable: the context contradicts the strict rules")
    reveal = is_revealing(kb, st, method)
    if not reveal.applicable:
        notes.append("punchline contradicts the strict rules; it cannot be revealing")
    try:
        reveal_level: Fraction | None = revealing_level(kb, st, conditioning, method)
    except UndefinedLevel as exc:
        reveal_level = None
        notes.append(f"revealing level undefined: {exc}")
    inc = incongruity(kb, st, method)
    for norm, message in inc.errors.items():
        notes.append(f"norm {norm} skipped: {message}")
    disregard = {c.norm: c.violation_models for c in inc.checks if c.incongruous}
    return JokeAnalysis(
        statement=st,
        method=method,
        surprising=surprise.holds,
        surprise_applicable=surprise.applicable,
        revealing=reveal.holds,
        potentially_funny=surprise.holds and reveal.holds,
        incongruous_norms=inc.incongruous,
        non_violable_norms=inc.non_violable,
        levels=GradualLevels(surprise_level(kb, st), reveal_level),
        witnesses=MappingProxyType(
            {
                "context": surprise.witnesses["context"] if surprise.applicable else None,
                "joint": surprise.witnesses["joint"],
                "punchline": reveal.witnesses["punchline"],
            }
        ),
        disregard=MappingProxyType(disregard),
        notes=tuple(notes),
    )


def analyze_cascade(
    kb: KnowledgeBase,
    parts: Sequence[Formula],
    method: OrderMethod | str = OrderMethod.LEX,
    conditioning: Conditioning = Conditioning.MIN_BASED,
) -> list[JokeAnalysis]:
    """Step k analyses (part 1 ∧ … ∧ part k, part k+1)."""
    if len(parts) < 2:
        raise ValueError("a cascade needs at least two parts")
    return [
        analyze(kb, Statement(conjoin(parts[: k + 1]), parts[k + 1]), method, conditioning)
        for k in range(len(parts) - 1)
    ]

