"""Knowledge bases of strict and default rules, System Z, and π_Σ.

A knowledge base pairs integrity constraints ``P`` (strict rules, never
violated) with defaults ``α ~> β``.  Defaults are ranked by System Z: rank 0
holds every default tolerated by all not-yet-ranked defaults, then those are
removed and the next rank is computed.  Higher rank means more specific and
higher priority; ``P`` sits above every default rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InconsistentDefaults, InconsistentStrict
from .logic import (
    And,
    AtomUniverse,
    Formula,
    Interpretation,
    ModelSet,
    Not,
    Or,
    models_of_all,
    render,
    truth_table,
)


@dataclass(frozen=True)
class StrictRule:
    formula: Formula
    is_norm: bool = False

    def __str__(self) -> str:
        return render(self.formula)


@dataclass(frozen=True)
class DefaultRule:
    antecedent: Formula
    consequent: Formula
    is_norm: bool = False

    @property
    def material(self) -> Formula:
        """The classical counterpart ``¬α ∨ β``."""
        return Or(Not(self.antecedent), self.consequent)

    @property
    def verification(self) -> Formula:
        return And(self.antecedent, self.consequent)

    @property
    def violation(self) -> Formula:
        """``α ∧ ¬β``: what it means to break the rule."""
        return And(self.antecedent, Not(self.consequent))

    def __str__(self) -> str:
        return f"{render(self.antecedent)} ~> {render(self.consequent)}"


def tolerates(
    delta: Iterable[DefaultRule],
    d: DefaultRule,
    strict: Iterable[StrictRule | Formula],
    universe: AtomUniverse,
) -> bool:
    """Whether ``delta`` (under ``strict``) tolerates ``d``: some model of P
    verifies ``d`` while satisfying the material counterpart of every rule in
    ``delta``."""
    premises = [_strict_formula(r) for r in strict]
    premises += [r.material for r in delta]
    premises.append(d.verification)
    return bool(models_of_all(premises, universe))


def _strict_formula(rule: StrictRule | Formula) -> Formula:
    return rule.formula if isinstance(rule, StrictRule) else rule


@dataclass(frozen=True)
class Stratification:
    """Z-ranks of the defaults of one knowledge base.

    ``ranks[i]`` is the Z-rank of default ``i`` (0 = most general).  The
    priority of a rank is ``rank + 1``; the strict stratum has priority
    ``strict_priority``, strictly above every default.
    """

    ranks: tuple[int, ...]

    @property
    def count(self) -> int:
        """Number of default strata."""
        return max(self.ranks) + 1 if self.ranks else 0

    @property
    def strata(self) -> tuple[tuple[int, ...], ...]:
        """Default indices grouped by Z-rank, rank 0 first."""
        return tuple(
            tuple(i for i, r in enumerate(self.ranks) if r == rank) for rank in range(self.count)
        )

    @property
    def strict_priority(self) -> int:
        return self.count + 1

    def priority(self, index: int) -> int:
        return self.ranks[index] + 1

    def by_priority(self) -> tuple[tuple[int, ...], ...]:
        """Default strata from highest priority (most specific) to lowest."""
        return tuple(reversed(self.strata))


def _stratify(
    universe: AtomUniverse, strict: Sequence[StrictRule], defaults: Sequence[DefaultRule]
) -> Stratification:
    p_mask = models_of_all((r.formula for r in strict), universe).mask
    materials = [truth_table(d.material, universe) for d in defaults]
    verifications = [truth_table(d.verification, universe) for d in defaults]
    ranks: list[int | None] = [None] * len(defaults)
    remaining = list(range(len(defaults)))
    rank = 0
    while remaining:
        allowed = p_mask.copy()
        for i in remaining:
            allowed &= materials[i]
        tolerated = [i for i in remaining if (allowed & verifications[i]).any()]
        if not tolerated:
            listed = ", ".join(str(defaults[i]) for i in remaining)
            raise InconsistentDefaults(
                f"no default tolerated at rank {rank}; stuck on: {listed}", tuple(remaining)
            )
        for i in tolerated:
            ranks[i] = rank
        remaining = [i for i in remaining if ranks[i] is None]
        rank += 1
    return Stratification(tuple(ranks))  # type: ignore[arg-type]


@dataclass(frozen=True)
class KnowledgeBase:
    """Σ = (P, Δ) over a fixed atom universe.

    Construction checks that P is consistent and that Δ can be stratified,
    raising :class:`InconsistentStrict` / :class:`InconsistentDefaults`.
    """

    universe: AtomUniverse
    strict: tuple[StrictRule, ...] = ()
    defaults: tuple[DefaultRule, ...] = ()

    def __post_init__(self) -> None:
        strict = tuple(r if isinstance(r, StrictRule) else StrictRule(r) for r in self.strict)
        object.__setattr__(self, "strict", strict)
        object.__setattr__(self, "defaults", tuple(self.defaults))
        for phi in self.formulas():
            for name in phi.atoms():
                self.universe.position(name)
        if not self.strict_models():
            raise InconsistentStrict("the strict rules have no common model")
        self.stratification  # noqa: B018 - validates Δ eagerly

    @classmethod
    def build(
        cls,
        strict: Iterable[StrictRule | Formula] = (),
        defaults: Iterable[DefaultRule | tuple[Formula, Formula]] = (),
        atoms: Sequence[str] | None = None,
    ) -> KnowledgeBase:
        """Convenience constructor inferring the universe from first mention.

        Extra ``atoms`` come first, in the given order.
        """
        strict_rules = tuple(r if isinstance(r, StrictRule) else StrictRule(r) for r in strict)
        default_rules = tuple(d if isinstance(d, DefaultRule) else DefaultRule(*d) for d in defaults)
        names: list[str] = list(atoms or ())
        for r in strict_rules:
            names += r.formula.atoms()
        for d in default_rules:
            names += d.antecedent.atoms() + d.consequent.atoms()
        return cls(AtomUniverse(tuple(dict.fromkeys(names))), strict_rules, default_rules)

    def formulas(self) -> Iterable[Formula]:
        for r in self.strict:
            yield r.formula
        for d in self.defaults:
            yield d.antecedent
            yield d.consequent

    def strict_models(self) -> ModelSet:
        return models_of_all((r.formula for r in self.strict), self.universe)

    @cached_property
    def stratification(self) -> Stratification:
        return _stratify(self.universe, self.strict, self.defaults)

    @cached_property
    def distribution(self) -> RankedDistribution:
        return build_distribution(self)

    def over(self, universe: AtomUniverse) -> KnowledgeBase:
        return KnowledgeBase(universe, self.strict, self.defaults)

    def without_strict(self, index: int) -> KnowledgeBase:
        return KnowledgeBase(
            self.universe, self.strict[:index] + self.strict[index + 1 :], self.defaults
        )

    def without_default(self, index: int) -> KnowledgeBase:
        return KnowledgeBase(
            self.universe, self.strict, self.defaults[:index] + self.defaults[index + 1 :]
        )

    def with_defaults(self, *extra: DefaultRule) -> KnowledgeBase:
        return KnowledgeBase(self.universe, self.strict, self.defaults + tuple(extra))


def z_stratify(kb: KnowledgeBase) -> Stratification:
    return kb.stratification


@dataclass(frozen=True, eq=False)
class RankedDistribution:
    """Possibility distribution π_Σ as integer levels ``0..top``.

    Level ``top`` is fully possible, level 0 impossible; the numeric degree
    of an interpretation is ``level / top``.
    """

    universe: AtomUniverse
    levels: np.ndarray
    top: int

    def level(self, omega: Interpretation | int) -> int:
        index = omega.index if isinstance(omega, Interpretation) else omega
        return int(self.levels[index])

    def degree(self, omega: Interpretation | int) -> Fraction:
        return Fraction(self.level(omega), self.top)

    def layer(self, level: int) -> ModelSet:
        return ModelSet(self.universe, self.levels == level)

    def layers(self) -> list[ModelSet]:
        """Positive layers, most plausible first (levels ``top`` .. 1)."""
        return [self.layer(lv) for lv in range(self.top, 0, -1)]

    def impossible(self) -> ModelSet:
        return self.layer(0)

    def possibility(self, phi: Formula) -> Fraction:
        return self._max_degree(truth_table(phi, self.universe))

    def necessity(self, phi: Formula) -> Fraction:
        return 1 - self._max_degree(~truth_table(phi, self.universe))

    def _max_degree(self, mask: np.ndarray) -> Fraction:
        if not mask.any():
            return Fraction(0)
        return Fraction(int(self.levels[mask].max()), self.top)


def build_distribution(kb: KnowledgeBase) -> RankedDistribution:
    """Least restrictive π_Σ: an interpretation's level drops with the
    priority of the highest-priority default it violates (best-out)."""
    universe = kb.universe
    strat = kb.stratification
    top = strat.count + 1
    # Z-rank of each interpretation: 0 if no default is violated, else 1 + highest violated rank
    z = np.zeros(universe.size, dtype=np.int64)
    for d, rank in zip(kb.defaults, strat.ranks):
        violated = truth_table(d.violation, universe)
        z = np.where(violated, np.maximum(z, rank + 1), z)
    levels = np.where(kb.strict_models().mask, top - z, 0)
    levels.flags.writeable = False
    return RankedDistribution(universe, levels, top)


def possibility(dist: RankedDistribution, phi: Formula) -> Fraction:
    return dist.possibility(phi)


def necessity(dist: RankedDistribution, phi: Formula) -> Fraction:
    return dist.necessity(phi)
