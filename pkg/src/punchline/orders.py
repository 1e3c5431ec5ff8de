"""Plausibility pre-orders induced by a knowledge base, and revision.

Both orders only rank models of P; interpretations falsifying a strict rule
are excluded from every minimisation.  Keys are stored column-wise as an
integer matrix (one row per comparison position) so that ``min_models`` is a
handful of vectorised filters.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .defaults import KnowledgeBase
from .errors import EmptyRevision
from .logic import (
    Formula,
    Interpretation,
    ModelSet,
    Not,
    render,
    truth_table,
)


class OrderMethod(enum.Enum):
    BEST_OUT = "bo"
    LEX = "lex"

    @classmethod
    def parse(cls, value: "OrderMethod | str") -> OrderMethod:
        if isinstance(value, OrderMethod):
            return value
        aliases = {"bo": cls.BEST_OUT, "best_out": cls.BEST_OUT, "best-out": cls.BEST_OUT, "lex": cls.LEX}
        try:
            return aliases[value.lower()]
        except KeyError:
            raise ValueError(f"unknown order method {value!r}; use 'bo' or 'lex'") from None


LexLabel = tuple  # per-stratum violation counts, highest priority first


@dataclass(frozen=True, eq=False)
class PlausibilityOrder:
    """Total pre-order on Mod(P); smaller key = more plausible."""

    kb: KnowledgeBase
    method: OrderMethod
    keys: np.ndarray  # shape (positions, 2**n)
    admissible: np.ndarray  # Mod(P) as a mask
    rank: np.ndarray  # dense lexicographic rank of each key column; 0 = most plausible

    def key(self, omega: Interpretation | int) -> tuple[int, ...] | None:
        """Comparison key, or ``None`` for interpretations excluded by P."""
        index = omega.index if isinstance(omega, Interpretation) else omega
        if not self.admissible[index]:
            return None
        return tuple(int(v) for v in self.keys[:, index])

    def strictly_better(self, a: Interpretation | int, b: Interpretation | int) -> bool:
        ka, kb_ = self.key(a), self.key(b)
        if ka is None:
            return False
        return kb_ is None or ka < kb_

    def equivalent(self, a: Interpretation | int, b: Interpretation | int) -> bool:
        ka = self.key(a)
        return ka is not None and ka == self.key(b)

    def classes(self) -> list[ModelSet]:
        """Equivalence classes of Mod(P), most plausible first."""
        universe = self.kb.universe
        ranks = np.unique(self.rank[self.admissible])
        return [ModelSet._owned(universe, self.admissible & (self.rank == r)) for r in ranks]

    def top(self) -> ModelSet:
        """Most plausible models of P; equals the P-models violating no default."""
        return self.min_models_mask(self.admissible)

    def min_models_mask(self, mask: np.ndarray) -> ModelSet:
        candidates = mask & self.admissible
        if candidates.any():
            candidates &= self.rank == self.rank[candidates].min()
        return ModelSet._owned(self.kb.universe, candidates)

    def min_models(self, phi: Formula) -> ModelSet:
        return self.min_models_mask(truth_table(phi, self.kb.universe))


def build_order(kb: KnowledgeBase, method: OrderMethod | str = OrderMethod.LEX) -> PlausibilityOrder:
    return _build_order(kb, OrderMethod.parse(method))


@lru_cache(maxsize=256)
def _build_order(kb: KnowledgeBase, method: OrderMethod) -> PlausibilityOrder:
    universe = kb.universe
    admissible = kb.strict_models().mask
    if method is OrderMethod.BEST_OUT:
        dist = kb.distribution
        keys = (dist.top - dist.levels)[None, :]
    else:
        strat = kb.stratification
        rows = [
            sum((~truth_table(r.formula, universe)).astype(np.int64) for r in kb.strict)
            if kb.strict
            else np.zeros(universe.size, dtype=np.int64)
        ]
        for stratum in strat.by_priority():
            count = np.zeros(universe.size, dtype=np.int64)
            for i in stratum:
                count += ~truth_table(kb.defaults[i].material, universe)
            rows.append(count)
        keys = np.vstack(rows)
    keys = np.ascontiguousarray(keys, dtype=np.int64)
    keys.flags.writeable = False
    _, rank = np.unique(keys.T, axis=0, return_inverse=True)
    rank = rank.reshape(-1)
    rank.flags.writeable = False
    return PlausibilityOrder(kb, method, keys, admissible, rank)


def lex_label(kb: KnowledgeBase, omega: Interpretation | int) -> LexLabel:
    """Violation counts per stratum, P stratum first, including P-violators."""
    order = build_order(kb, OrderMethod.LEX)
    index = omega.index if isinstance(omega, Interpretation) else omega
    return tuple(int(v) for v in order.keys[:, index])


def min_models(order: PlausibilityOrder, phi: Formula) -> ModelSet:
    return order.min_models(phi)


def revise(kb: KnowledgeBase, phi: Formula, method: OrderMethod | str = OrderMethod.LEX) -> ModelSet:
    """Mod(K ∘ φ) under the integrity constraints P.

    Raises :class:`EmptyRevision` when P ∪ {φ} is unsatisfiable.
    """
    result = build_order(kb, method).min_models(phi)
    if not result:
        raise EmptyRevision(f"{render(phi)} is inconsistent with the strict rules")
    return result


def nm_entails(
    kb: KnowledgeBase, phi: Formula, psi: Formula, method: OrderMethod | str = OrderMethod.LEX
) -> bool:
    """φ |~ ψ: P ∪ {φ} is consistent and every preferred model of φ satisfies ψ."""
    preferred = build_order(kb, method).min_models(phi)
    if not preferred:
        return False
    return not bool((preferred.mask & ~truth_table(psi, kb.universe)).any())


# ---------------------------------------------------------------------------
# KM postulate conformance
# ---------------------------------------------------------------------------

KM_POSTULATES = ("KM1", "KM2", "KM3", "KM4", "KM5", "KM6")
KM_MAX_ATOMS = 6


@dataclass(frozen=True)
class KmViolation:
    postulate: str
    phi: str
    psi: str | None
    detail: str


@dataclass
class KmReport:
    method: OrderMethod
    trials: int
    seed: int
    checked: dict[str, int] = field(default_factory=lambda: dict.fromkeys(KM_POSTULATES, 0))
    violations: list[KmViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def counts(self) -> dict[str, int]:
        out = dict.fromkeys(KM_POSTULATES, 0)
        for v in self.violations:
            out[v.postulate] += 1
        return out

    def summary(self) -> str:
        counts = self.counts()
        lines = [f"KM check: method={self.method.value} trials={self.trials} seed={self.seed}"]
        for name in KM_POSTULATES:
            status = "ok" if counts[name] == 0 else f"{counts[name]} violation(s)"
            lines.append(f"  {name}: {self.checked[name]} applicable checks, {status}")
        for v in self.violations[:10]:
            lines.append(f"  witness {v.postulate}: phi={v.phi} psi={v.psi} ({v.detail})")
        return "\n".join(lines)


def _random_subset(rng: random.Random, pool: list[int]) -> list[int]:
    size = rng.randint(0, len(pool))
    return rng.sample(pool, size)


def check_km_postulates(
    kb: KnowledgeBase, method: OrderMethod | str = OrderMethod.LEX, trials: int = 200, seed: int = 0
) -> KmReport:
    """Randomised test of (KM1)-(KM6) for the revision operator of ``kb``.

    Each trial draws φ and ψ as random subsets of Mod(P).  φ is lifted to its
    canonical DNF and revised through the formula path; ψ only ever enters
    through its model set, and is rendered as a formula for witnesses.  K is
    the conjunction of the material counterparts of the defaults, restricted
    to Mod(P).  (KM4) compares φ against an equivalent negated-complement
    rewriting, and the knowledge base against a copy with its defaults listed
    in reverse order.
    """
    method = OrderMethod.parse(method)
    universe = kb.universe
    if len(universe) > KM_MAX_ATOMS:
        raise ValueError(f"KM checking is limited to {KM_MAX_ATOMS} atoms, got {len(universe)}")
    order = build_order(kb, method)
    mirror = build_order(KnowledgeBase(universe, kb.strict, kb.defaults[::-1]), method)
    p_models = kb.strict_models()
    k_models = p_models
    for d in kb.defaults:
        k_models = k_models & ModelSet(universe, truth_table(d.material, universe))
    pool = list(p_models.indices)
    rng = random.Random(seed)
    report = KmReport(method, trials, seed)

    def fail(name: str, phi: Formula, psi: ModelSet | None, detail: str) -> None:
        psi_text = render(psi.to_formula()) if psi is not None else None
        report.violations.append(KmViolation(name, render(phi), psi_text, detail))

    for _ in range(trials):
        phi_set = ModelSet.from_indices(universe, _random_subset(rng, pool))
        psi_set = ModelSet.from_indices(universe, _random_subset(rng, pool))
        phi = phi_set.to_formula()
        revised = order.min_models(phi)

        report.checked["KM1"] += 1
        if not revised <= phi_set:
            fail("KM1", phi, None, f"result {revised!r} leaves Mod(phi)")

        expansion = k_models & phi_set
        if expansion:
            report.checked["KM2"] += 1
            if revised != expansion:
                fail("KM2", phi, None, f"got {revised!r}, expected K∧phi = {expansion!r}")

        if p_models & phi_set:
            report.checked["KM3"] += 1
            if not revised:
                fail("KM3", phi, None, "satisfiable input revised to nothing")

        report.checked["KM4"] += 1
        rewritten = Not(phi_set.complement().to_formula())
        if order.min_models(rewritten) != revised:
            fail("KM4", phi, None, "equivalent input rewritten gave a different result")
        if mirror.min_models_mask(phi_set.mask) != revised:
            fail("KM4", phi, None, "reordering the defaults changed the result")

        joint = order.min_models_mask(phi_set.mask & psi_set.mask)
        restricted = revised & psi_set
        report.checked["KM5"] += 1
        if not restricted <= joint:
            fail("KM5", phi, psi_set, f"{restricted!r} not within {joint!r}")
        if restricted:
            report.checked["KM6"] += 1
            if not joint <= restricted:
                fail("KM6", phi, psi_set, f"{joint!r} not within {restricted!r}")
    return report
