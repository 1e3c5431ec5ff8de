"""Independent reference implementations.

Everything here works on plain Python dicts and sets, walking the formula
AST directly.  Nothing calls the vectorised evaluator, the stratifier or the
order builder of the package, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from punchline.logic import And, Atom, Const, Iff, Implies, Not, Or


def holds(phi, world: dict[str, bool]) -> bool:
    if isinstance(phi, Atom):
        return world[phi.name]
    if isinstance(phi, Const):
        return phi.value
    if isinstance(phi, Not):
        return not holds(phi.operand, world)
    left, right = holds(phi.left, world), holds(phi.right, world)
    if isinstance(phi, And):
        return left and right
    if isinstance(phi, Or):
        return left or right
    if isinstance(phi, Implies):
        return (not left) or right
    if isinstance(phi, Iff):
        return left == right
    raise TypeError(phi)


def worlds(names) -> list[dict[str, bool]]:
    """All assignments, position i encoding atom k in bit k of i."""
    names = list(names)
    out = []
    for i in range(2 ** len(names)):
        out.append({name: bool(i >> k & 1) for k, name in enumerate(names)})
    return out


def models(phi, names) -> set[int]:
    return {i for i, w in enumerate(worlds(names)) if holds(phi, w)}


def p_models(kb) -> set[int]:
    names = kb.universe.atoms
    return {
        i for i, w in enumerate(worlds(names)) if all(holds(r.formula, w) for r in kb.strict)
    }


def _sets(kb):
    names = kb.universe.atoms
    ws = worlds(names)
    verif = [{i for i, w in enumerate(ws) if holds(d.antecedent, w) and holds(d.consequent, w)} for d in kb.defaults]
    viol = [{i for i, w in enumerate(ws) if holds(d.antecedent, w) and not holds(d.consequent, w)} for d in kb.defaults]
    return verif, viol


def tolerated(kb, delta: list[int], d: int) -> bool:
    verif, viol = _sets(kb)
    allowed = p_models(kb)
    for j in delta:
        allowed -= viol[j]
    return bool(allowed & verif[d])


def z_ranks(kb) -> list[int]:
    remaining = list(range(len(kb.defaults)))
    ranks = [None] * len(kb.defaults)
    rank = 0
    while remaining:
        step = [d for d in remaining if tolerated(kb, remaining, d)]
        if not step:
            raise ValueError("inconsistent")
        for d in step:
            ranks[d] = rank
        remaining = [d for d in remaining if d not in step]
        rank += 1
    return ranks


def least_specific_layers(kb) -> list[set[int]]:
    """Layers of the least restrictive distribution satisfying Π(αβ) > Π(α¬β).

    Builds the layers top-down from the constraints themselves: the best
    remaining worlds are those on the violation side of no pending
    constraint; a constraint is discharged once one of its verifying worlds
    has been placed.  Impossible worlds (falsifying P) are not included.
    """
    verif, viol = _sets(kb)
    pending = list(range(len(kb.defaults)))
    remaining = set(p_models(kb))
    layers = []
    while remaining:
        blocked = set().union(*(viol[d] for d in pending)) if pending else set()
        layer = remaining - blocked
        if not layer:
            raise ValueError("no consistent layer")
        layers.append(layer)
        remaining -= layer
        pending = [d for d in pending if not (verif[d] & layer)]
    return layers


def constraint_ok(kb, level: dict[int, int]) -> bool:
    """Every default satisfies Π(α∧β) > Π(α∧¬β) under integer levels."""
    verif, viol = _sets(kb)
    for d in range(len(kb.defaults)):
        best_v = max((level[i] for i in verif[d]), default=0)
        best_x = max((level[i] for i in viol[d]), default=0)
        if not best_v > best_x:
            return False
    return True


def lex_key(kb, ranks, i: int):
    w = worlds(kb.universe.atoms)[i]
    strata = max(ranks) + 1 if ranks else 0
    key = [sum(not holds(r.formula, w) for r in kb.strict)]
    for rank in reversed(range(strata)):
        key.append(
            sum(
                1
                for d, r in zip(kb.defaults, ranks)
                if r == rank and holds(d.antecedent, w) and not holds(d.consequent, w)
            )
        )
    return tuple(key)


def bo_key(kb, ranks, i: int) -> int:
    w = worlds(kb.universe.atoms)[i]
    violated = [r for d, r in zip(kb.defaults, ranks) if holds(d.antecedent, w) and not holds(d.consequent, w)]
    return -1 if not violated else max(violated)


def preferred(kb, phi, method: str) -> set[int]:
    ranks = z_ranks(kb)
    candidates = models(phi, kb.universe.atoms) & p_models(kb)
    if not candidates:
        return set()
    key = (lambda i: lex_key(kb, ranks, i)) if method == "lex" else (lambda i: bo_key(kb, ranks, i))
    best = min(key(i) for i in candidates)
    return {i for i in candidates if key(i) == best}


def nm_entails(kb, phi, psi, method: str) -> bool:
    best = preferred(kb, phi, method)
    return bool(best) and best <= models(psi, kb.universe.atoms)


def surprising(kb, alpha, beta, method: str) -> bool:
    ctx = preferred(kb, alpha, method)
    return bool(ctx) and not (ctx & preferred(kb, And(alpha, beta), method))


def funny(kb, alpha, beta, method: str) -> bool:
    return surprising(kb, alpha, beta, method) and nm_entails(kb, beta, alpha, method)


def degrees(kb) -> dict[int, Fraction]:
    """π as level / L from the constraint-built layers, padded to the Z scale."""
    ranks = z_ranks(kb)
    top = (max(ranks) + 1 if ranks else 0) + 1
    out = {i: Fraction(0) for i in range(2 ** len(kb.universe.atoms))}
    for i in p_models(kb):
        out[i] = Fraction(top - (bo_key(kb, ranks, i) + 1), top)
    return out


def possibility(kb, phi) -> Fraction:
    pi = degrees(kb)
    return max((pi[i] for i in models(phi, kb.universe.atoms)), default=Fraction(0))


def necessity(kb, phi) -> Fraction:
    return 1 - possibility(kb, Not(phi))


def revealing_level(kb, alpha, beta) -> Fraction:
    """N(α | β) with min-based conditioning, computed world by world."""
    pi = degrees(kb)
    beta_models = models(beta, kb.universe.atoms)
    alpha_models = models(alpha, kb.universe.atoms)
    best = max(pi[i] for i in beta_models)
    if best == 0:
        raise ValueError("undefined")
    cond = {}
    for i in pi:
        if i not in beta_models:
            cond[i] = Fraction(0)
        elif pi[i] == best:
            cond[i] = Fraction(1)
        else:
            cond[i] = pi[i]
    return 1 - max((cond[i] for i in pi if i not in alpha_models), default=Fraction(0))


def all_subsets(items):
    items = list(items)
    return itertools.chain.from_iterable(itertools.combinations(items, k) for k in range(len(items) + 1))
