"""Propositional syntax, parsing and brute-force semantics.

Interpretations over a universe of ``n`` atoms are identified with the
integers ``0 .. 2**n - 1``: bit ``k`` of the index is the truth value of the
``k``-th declared atom.  Formulas are evaluated on all interpretations at
once as numpy boolean vectors, so every semantic query is exhaustive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Union

import numpy as np

from .errors import EmptyUniverse, FormulaSyntaxError, UniverseTooLarge, UnknownAtom

MAX_ATOMS = 24

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = frozenset({"true", "false"})


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------


class Formula:
    """Base class of the formula AST.

    The Python operators ``~ & | >>`` build negations, conjunctions,
    disjunctions and implications, which keeps test fixtures readable.
    """

    __slots__ = ()
    precedence = 0

    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def iff(self, other: Formula) -> Formula:
        return Iff(self, other)

    def atoms(self) -> tuple[str, ...]:
        """Atom names in order of first occurrence (left to right)."""
        seen: dict[str, None] = {}
        _collect_atoms(self, seen)
        return tuple(seen)

    def __str__(self) -> str:
        return render(self)

    def _hash(self) -> int:
        # trees are immutable, so the structural hash is computed once per node
        try:
            return self.__dict__["_hash_value"]
        except KeyError:
            value = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
            object.__setattr__(self, "_hash_value", value)
            return value


@dataclass(frozen=True, eq=True, repr=False)
class Atom(Formula):
    name: str
    precedence = 6
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Const(Formula):
    value: bool
    precedence = 6
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return "TOP" if self.value else "BOTTOM"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    operand: Formula
    precedence = 5
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return f"Not({self.operand!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula
    precedence = 4
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula
    precedence = 3
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula
    precedence = 2
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return f"Implies({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula
    precedence = 1
    __hash__ = Formula._hash

    def __repr__(self) -> str:
        return f"Iff({self.left!r}, {self.right!r})"


TOP = Const(True)
BOTTOM = Const(False)


def atoms(*names: str) -> tuple[Atom, ...]:
    return tuple(Atom(n) for n in names)


def conjoin(formulas: Iterable[Formula]) -> Formula:
    items = list(formulas)
    if not items:
        return TOP
    return reduce(And, items)


def disjoin(formulas: Iterable[Formula]) -> Formula:
    items = list(formulas)
    if not items:
        return BOTTOM
    return reduce(Or, items)


def _collect_atoms(phi: Formula, seen: dict[str, None]) -> None:
    if isinstance(phi, Atom):
        seen.setdefault(phi.name, None)
    elif isinstance(phi, Not):
        _collect_atoms(phi.operand, seen)
    elif isinstance(phi, (And, Or, Implies, Iff)):
        _collect_atoms(phi.left, seen)
        _collect_atoms(phi.right, seen)


_SYMBOLS = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
# minimum child precedence (left, right) that needs no parentheses
_CHILD_PREC = {And: (4, 5), Or: (3, 4), Implies: (3, 2), Iff: (2, 2)}


def render(phi: Formula) -> str:
    """Render in the input grammar with minimal parentheses.

    ``parse_formula(render(phi))`` rebuilds ``phi`` exactly.
    """
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Const):
        return "true" if phi.value else "false"
    if isinstance(phi, Not):
        return "!" + _wrap(phi.operand, 5)
    left_min, right_min = _CHILD_PREC[type(phi)]
    return f"{_wrap(phi.left, left_min)} {_SYMBOLS[type(phi)]} {_wrap(phi.right, right_min)}"


def _wrap(phi: Formula, minimum: int) -> str:
    text = render(phi)
    return text if phi.precedence >= minimum else f"({text})"


# ---------------------------------------------------------------------------
# Universes, interpretations, model sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomUniverse:
    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.atoms:
            raise EmptyUniverse("an atom universe needs at least one atom")
        if len(self.atoms) > MAX_ATOMS:
            raise UniverseTooLarge(f"{len(self.atoms)} atoms exceeds the cap of {MAX_ATOMS}")
        for name in self.atoms:
            if not isinstance(name, str) or not _NAME_RE.match(name) or name in _RESERVED:
                raise ValueError(f"invalid atom name {name!r}")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValueError(f"duplicate atom names in {self.atoms}")

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms)

    def __contains__(self, name: object) -> bool:
        return name in self.atoms

    @property
    def size(self) -> int:
        """Number of interpretations, ``2**n``."""
        return 1 << len(self.atoms)

    def position(self, name: str) -> int:
        try:
            return self.atoms.index(name)
        except ValueError:
            raise UnknownAtom(name) from None

    def extend(self, names: Iterable[str]) -> AtomUniverse:
        extra = [n for n in dict.fromkeys(names) if n not in self.atoms]
        return AtomUniverse(self.atoms + tuple(extra)) if extra else self

    def column(self, name: str) -> np.ndarray:
        n, k = len(self.atoms), self.position(name)
        if n <= _CACHE_MAX_ATOMS:
            return _bit_columns(n)[k]
        return _frozen(((np.arange(1 << n, dtype=np.uint32) >> k) & 1).astype(bool))

    def interpretation(self, index: int) -> Interpretation:
        if not 0 <= index < self.size:
            raise IndexError(f"interpretation index {index} out of range")
        return Interpretation(self, index)

    def interpretations(self) -> Iterator[Interpretation]:
        return (Interpretation(self, i) for i in range(self.size))

    def from_literals(self, text: str) -> Interpretation:
        """Parse a complete literal list such as ``"k t ¬c r"`` or ``"k t !c r"``."""
        values: dict[str, bool] = {}
        for token in text.replace(",", " ").split():
            negative = token[0] in "¬!~-"
            name = token[1:] if negative else token
            self.position(name)
            if name in values:
                raise ValueError(f"atom {name!r} assigned twice in {text!r}")
            values[name] = not negative
        missing = [a for a in self.atoms if a not in values]
        if missing:
            raise ValueError(f"literal list {text!r} misses atoms {missing}")
        index = sum(1 << k for k, a in enumerate(self.atoms) if values[a])
        return Interpretation(self, index)

    def all_models(self) -> ModelSet:
        return ModelSet._owned(self, np.ones(self.size, dtype=bool))

    def no_models(self) -> ModelSet:
        return ModelSet._owned(self, np.zeros(self.size, dtype=bool))


@lru_cache(maxsize=None)
def _bit_columns(n: int) -> np.ndarray:
    indices = np.arange(1 << n, dtype=np.uint32)
    cols = ((indices[None, :] >> np.arange(n, dtype=np.uint32)[:, None]) & 1).astype(bool)
    cols.flags.writeable = False
    return cols


@dataclass(frozen=True, order=False)
class Interpretation:
    universe: AtomUniverse
    index: int

    def value(self, name: str) -> bool:
        return bool((self.index >> self.universe.position(name)) & 1)

    def literals(self) -> tuple[str, ...]:
        return tuple(
            name if (self.index >> k) & 1 else "¬" + name
            for k, name in enumerate(self.universe.atoms)
        )

    def satisfies(self, phi: Formula) -> bool:
        return bool(truth_table(phi, self.universe)[self.index])

    def to_formula(self) -> Formula:
        return _minterm(self.universe, self.index)

    def __lt__(self, other: Interpretation) -> bool:
        return self.index < other.index

    def __str__(self) -> str:
        return " ".join(self.literals())


@lru_cache(maxsize=4096)
def _minterm(universe: AtomUniverse, index: int) -> Formula:
    return conjoin(
        Atom(name) if (index >> k) & 1 else Not(Atom(name))
        for k, name in enumerate(universe.atoms)
    )


class ModelSet:
    """Immutable set of interpretations, backed by a boolean mask over Ω."""

    __slots__ = ("universe", "_mask")

    def __init__(self, universe: AtomUniverse, mask: np.ndarray):
        mask = np.array(mask, dtype=bool, copy=True)
        if mask.shape != (universe.size,):
            raise ValueError(f"mask of shape {mask.shape} does not fit a universe of {universe.size}")
        mask.flags.writeable = False
        self.universe = universe
        self._mask = mask

    @classmethod
    def _owned(cls, universe: AtomUniverse, mask: np.ndarray) -> ModelSet:
        """Wrap a freshly computed bool mask without copying it."""
        out = cls.__new__(cls)
        mask.flags.writeable = False
        out.universe = universe
        out._mask = mask
        return out

    @classmethod
    def from_indices(cls, universe: AtomUniverse, indices: Iterable[int]) -> ModelSet:
        mask = np.zeros(universe.size, dtype=bool)
        mask[list(indices)] = True
        return cls._owned(universe, mask)

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self._mask))

    def __iter__(self) -> Iterator[Interpretation]:
        return (Interpretation(self.universe, i) for i in self.indices)

    def __len__(self) -> int:
        return int(self._mask.sum())

    def __bool__(self) -> bool:
        return bool(self._mask.any())

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Interpretation):
            return item.universe == self.universe and bool(self._mask[item.index])
        if isinstance(item, (int, np.integer)):
            return 0 <= item < self.universe.size and bool(self._mask[item])
        return False

    def _check(self, other: ModelSet) -> None:
        if not isinstance(other, ModelSet):
            raise TypeError(f"expected a ModelSet, got {type(other).__name__}")
        if other.universe is not self.universe and other.universe != self.universe:
            raise ValueError("model sets over different universes")

    def __and__(self, other: ModelSet) -> ModelSet:
        self._check(other)
        return ModelSet._owned(self.universe, self._mask & other._mask)

    def __or__(self, other: ModelSet) -> ModelSet:
        self._check(other)
        return ModelSet._owned(self.universe, self._mask | other._mask)

    def __sub__(self, other: ModelSet) -> ModelSet:
        self._check(other)
        return ModelSet._owned(self.universe, self._mask & ~other._mask)

    def complement(self) -> ModelSet:
        return ModelSet._owned(self.universe, ~self._mask)

    def __le__(self, other: ModelSet) -> bool:
        self._check(other)
        return not bool((self._mask & ~other._mask).any())

    def isdisjoint(self, other: ModelSet) -> bool:
        self._check(other)
        return not bool((self._mask & other._mask).any())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModelSet):
            return NotImplemented
        return self.universe == other.universe and bool(np.array_equal(self._mask, other._mask))

    def __hash__(self) -> int:
        return hash((self.universe, np.packbits(self._mask).tobytes()))

    def to_formula(self) -> Formula:
        """Canonical DNF: one full minterm per member, in index order."""
        return disjoin(m.to_formula() for m in self)

    def render(self) -> list[str]:
        return [str(m) for m in self]

    def __repr__(self) -> str:
        return "{" + ", ".join(self.render()) + "}"


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


_CACHE_MAX_ATOMS = 12


def truth_table(phi: Formula, universe: AtomUniverse) -> np.ndarray:
    """Read-only boolean vector: entry ``i`` is the value of ``phi`` at interpretation ``i``."""
    if len(universe) <= _CACHE_MAX_ATOMS:
        return _cached_truth_table(phi, universe)
    return _frozen(_evaluate(phi, universe))


@lru_cache(maxsize=8192)
def _cached_truth_table(phi: Formula, universe: AtomUniverse) -> np.ndarray:
    return _frozen(_evaluate(phi, universe))


def _frozen(out: np.ndarray) -> np.ndarray:
    if out.base is not None or out.flags.writeable:
        out = out.copy()
    out.flags.writeable = False
    return out


def evaluate(phi: Formula, universe: AtomUniverse) -> np.ndarray:
    """Uncached truth table, for one-off formulas that would only churn the cache."""
    return _evaluate(phi, universe, evaluate)


def _evaluate(phi: Formula, universe: AtomUniverse, sub=truth_table) -> np.ndarray:
    if isinstance(phi, Atom):
        return universe.column(phi.name)
    if isinstance(phi, Const):
        return np.full(universe.size, phi.value, dtype=bool)
    if isinstance(phi, Not):
        return ~sub(phi.operand, universe)
    left = sub(phi.left, universe)
    right = sub(phi.right, universe)
    if isinstance(phi, And):
        return left & right
    if isinstance(phi, Or):
        return left | right
    if isinstance(phi, Implies):
        return ~left | right
    if isinstance(phi, Iff):
        return left == right
    raise TypeError(f"not a formula: {phi!r}")


def models_of(phi: Formula, universe: AtomUniverse) -> ModelSet:
    return ModelSet._owned(universe, truth_table(phi, universe))


def models_of_all(formulas: Iterable[Formula], universe: AtomUniverse) -> ModelSet:
    mask = np.ones(universe.size, dtype=bool)
    for phi in formulas:
        mask &= truth_table(phi, universe)
    return ModelSet._owned(universe, mask)


def is_consistent(premises: Iterable[Formula], universe: AtomUniverse) -> bool:
    return bool(models_of_all(premises, universe))


def entails(premises: Iterable[Formula], phi: Formula, universe: AtomUniverse) -> bool:
    """Classical consequence; an empty premise set checks validity."""
    return models_of_all(premises, universe) <= models_of(phi, universe)


def equivalent(phi: Formula, psi: Formula, universe: AtomUniverse) -> bool:
    return bool(np.array_equal(truth_table(phi, universe), truth_table(psi, universe)))


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(<->)|(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*))")

Universe = Union[AtomUniverse, str, None]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN_RE.match(text, pos)
            if not m:
                raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
            start = m.start(m.lastindex)
            self.tokens.append((m.group(m.lastindex), start))
            pos = m.end()
        self.tokens.append(("<end>", len(text)))
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def fail(self, message: str, expected: tuple[str, ...]):
        token, pos = self.tokens[self.i]
        found = "end of input" if token == "<end>" else repr(token)
        raise FormulaSyntaxError(f"{message}, found {found}", self.text, pos, expected)

    def advance(self) -> str:
        token = self.tokens[self.i][0]
        self.i += 1
        return token

    def parse(self) -> Formula:
        phi = self.iff()
        if self.peek() != "<end>":
            if self.peek() == "<->":
                self.fail("'<->' is non-associative; add parentheses", ("end of input",))
            self.fail("unexpected token", ("'&'", "'|'", "'->'", "'<->'", "end of input"))
        return phi

    def iff(self) -> Formula:
        left = self.implies()
        if self.peek() == "<->":
            self.advance()
            right = self.implies()
            return Iff(left, right)
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.advance()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self.peek() == "|":
            self.advance()
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.unary()
        while self.peek() == "&":
            self.advance()
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        if self.peek() == "!":
            self.advance()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        token = self.peek()
        if token == "(":
            self.advance()
            phi = self.iff()
            if self.peek() != ")":
                self.fail("unclosed parenthesis", ("')'",))
            self.advance()
            return phi
        if token == "true":
            self.advance()
            return TOP
        if token == "false":
            self.advance()
            return BOTTOM
        if token != "<end>" and _NAME_RE.match(token):
            self.advance()
            return Atom(token)
        self.fail("expected a formula", ("atom", "'true'", "'false'", "'!'", "'('"))


def parse_formula(text: str, universe: Universe = "infer") -> Formula:
    """Parse ``text``; precedence ``! > & > | > -> > <->``.

    With an :class:`AtomUniverse`, atoms outside it raise :class:`UnknownAtom`.
    With ``"infer"`` (or ``None``) any identifier is accepted as long as the
    formula mentions at most ``MAX_ATOMS`` distinct atoms.
    """
    phi = _Parser(text).parse()
    names = phi.atoms()
    if isinstance(universe, AtomUniverse):
        for name in names:
            if name not in universe:
                raise UnknownAtom(name)
    elif universe in ("infer", None):
        if len(names) > MAX_ATOMS:
            raise UniverseTooLarge(f"formula mentions {len(names)} atoms (cap {MAX_ATOMS})")
    else:
        raise TypeError(f"universe must be an AtomUniverse or 'infer', not {universe!r}")
    return phi
