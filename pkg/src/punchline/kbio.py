"""Knowledge-base text format and analysis report rendering.

File format, one entry per line (``#`` starts a comment)::

    atoms: k t c r            # optional, fixes the atom order
    let joint = t & r         # query alias, usable in later lines and CLI queries
    strict: !k -> !c
    default: t ~> c
    norm default: !k ~> !t    # a default that counts as a norm
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping

from .defaults import DefaultRule, KnowledgeBase, StrictRule
from .errors import FormulaSyntaxError, KbSyntaxError, UniverseTooLarge, UnknownAtom
from .logic import (
    MAX_ATOMS,
    And,
    Atom,
    AtomUniverse,
    Formula,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    parse_formula,
    render,
)
from .humor import JokeAnalysis

_RULE_RE = re.compile(r"\s*(?:(norm)\s+)?(strict|default)\s*:")
_ATOMS_RE = re.compile(r"\s*atoms\s*:")
_LET_RE = re.compile(r"\s*let\s+([A-Za-z_][A-Za-z0-9_]*)\s*=")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def substitute(phi: Formula, aliases: Mapping[str, Formula]) -> Formula:
    """Replace every atom named like an alias by the aliased formula."""
    if not aliases:
        return phi
    if isinstance(phi, Atom):
        return aliases.get(phi.name, phi)
    if isinstance(phi, Not):
        return Not(substitute(phi.operand, aliases))
    if isinstance(phi, (And, Or, Implies, Iff)):
        return type(phi)(substitute(phi.left, aliases), substitute(phi.right, aliases))
    return phi


@dataclass(frozen=True)
class KbDocument:
    kb: KnowledgeBase
    aliases: Mapping[str, Formula] = field(default_factory=dict)
    source: str | None = None

    def query(self, text: str) -> Formula:
        """Parse a query formula over this kb, expanding aliases (strict atoms)."""
        phi = substitute(parse_formula(text, "infer"), self.aliases)
        for name in phi.atoms():
            if name not in self.kb.universe:
                raise UnknownAtom(name)
        return phi

    def with_atoms(self, names) -> KbDocument:
        """Same document over a universe extended by ``names`` (fresh atoms appended)."""
        universe = self.kb.universe.extend(n for n in names if n not in self.aliases)
        if universe is self.kb.universe:
            return self
        return KbDocument(self.kb.over(universe), self.aliases, self.source)

    def resolve(self, *texts: str) -> tuple[KbDocument, list[Formula]]:
        """Parse queries, extending the universe with atoms the kb never mentions."""
        parsed = [substitute(parse_formula(t, "infer"), self.aliases) for t in texts]
        doc = self.with_atoms(n for phi in parsed for n in phi.atoms())
        return doc, parsed


def _formula_at(text: str, line_no: int, offset: int) -> Formula:
    try:
        return parse_formula(text, "infer")
    except FormulaSyntaxError as exc:
        raise KbSyntaxError(str(exc), line_no, offset + exc.position + 1) from exc


def parse_kb(text: str, source: str | None = None) -> KbDocument:
    declared: list[str] | None = None
    aliases: dict[str, Formula] = {}
    mentions: dict[str, tuple[int, int]] = {}
    strict: list[StrictRule] = []
    defaults: list[DefaultRule] = []

    def note(phi: Formula, line_no: int, column: int) -> Formula:
        for name in phi.atoms():
            if name not in aliases:
                mentions.setdefault(name, (line_no, column))
        return substitute(phi, aliases)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if m := _ATOMS_RE.match(line):
            if declared is not None:
                raise KbSyntaxError("duplicate 'atoms:' line", line_no, m.start() + 1)
            names = line[m.end() :].replace(",", " ").split()
            for name in names:
                if not _NAME_RE.match(name) or name in ("true", "false"):
                    col = line.index(name, m.end()) + 1
                    raise KbSyntaxError(f"invalid atom name {name!r}", line_no, col)
            if len(set(names)) != len(names):
                raise KbSyntaxError("duplicate atom in 'atoms:' line", line_no, m.end() + 1)
            declared = names
        elif m := _LET_RE.match(line):
            name = m.group(1)
            if name in mentions or (declared and name in declared):
                raise KbSyntaxError(f"alias {name!r} shadows an atom", line_no, m.start(1) + 1)
            body = line[m.end() :]
            aliases[name] = note(_formula_at(body, line_no, m.end()), line_no, m.end() + 1)
        elif m := _RULE_RE.match(line):
            is_norm = m.group(1) is not None
            body = line[m.end() :]
            if m.group(2) == "strict":
                if "~>" in body:
                    col = m.end() + body.index("~>") + 1
                    raise KbSyntaxError("'~>' in a strict rule", line_no, col)
                phi = note(_formula_at(body, line_no, m.end()), line_no, m.end() + 1)
                strict.append(StrictRule(phi, is_norm))
            else:
                parts = body.split("~>")
                if len(parts) != 2:
                    raise KbSyntaxError(
                        "a default needs exactly one '~>'", line_no, m.end() + 1
                    )
                split = m.end() + len(parts[0]) + 2
                antecedent = note(_formula_at(parts[0], line_no, m.end()), line_no, m.end() + 1)
                consequent = note(_formula_at(parts[1], line_no, split), line_no, split + 1)
                defaults.append(DefaultRule(antecedent, consequent, is_norm))
        else:
            col = len(line) - len(line.lstrip()) + 1
            raise KbSyntaxError(
                "expected 'atoms:', 'let', 'strict:', 'default:' or 'norm ...'", line_no, col
            )

    if declared is not None:
        for name, (line_no, col) in mentions.items():
            if name not in declared:
                raise KbSyntaxError(f"atom {name!r} missing from 'atoms:' line", line_no, col)
        names = declared
    else:
        names = list(mentions)
    if len(names) > MAX_ATOMS:
        raise UniverseTooLarge(f"{len(names)} atoms exceeds the cap of {MAX_ATOMS}")
    kb = KnowledgeBase(AtomUniverse(tuple(names)), tuple(strict), tuple(defaults))
    return KbDocument(kb, MappingProxyType(aliases), source)


def load_kb(path) -> KbDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read(), source=str(path))


def render_kb(kb: KnowledgeBase, aliases: Mapping[str, Formula] | None = None) -> str:
    lines = ["atoms: " + " ".join(kb.universe.atoms)]
    for name, phi in (aliases or {}).items():
        lines.append(f"let {name} = {render(phi)}")
    for r in kb.strict:
        lines.append(("norm " if r.is_norm else "") + f"strict: {render(r.formula)}")
    for d in kb.defaults:
        lines.append(("norm " if d.is_norm else "") + f"default: {d}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def fraction_text(value: Fraction | None) -> str | None:
    if value is None:
        return None
    return f"{value.numerator}/{value.denominator}"


def _models(ms: ModelSet | None) -> list[str] | None:
    return None if ms is None else ms.render()


def report_dict(analysis: JokeAnalysis) -> dict:
    def norm(ref):
        return {"kind": ref.kind.value, "index": ref.index}

    witnesses = {name: _models(ms) for name, ms in analysis.witnesses.items()}
    witnesses["disregard"] = {str(ref): ms.render() for ref, ms in analysis.disregard.items()}
    return {
        "surprising": analysis.surprising,
        "revealing": analysis.revealing,
        "potentially_funny": analysis.potentially_funny,
        "surprise_level": fraction_text(analysis.levels.surprise_level),
        "revealing_level": fraction_text(analysis.levels.revealing_level),
        "incongruous_norms": [norm(r) for r in analysis.incongruous_norms],
        "non_violable_norms": [norm(r) for r in analysis.non_violable_norms],
        "witnesses": witnesses,
    }


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def report_text(analysis: JokeAnalysis, kb: KnowledgeBase | None = None) -> str:
    def describe(ref) -> str:
        if kb is None:
            return str(ref)
        rules = kb.strict if ref.kind.value == "strict" else kb.defaults
        return f"{ref} ({rules[ref.index]})"

    st = analysis.statement
    surprising = _yes(analysis.surprising) if analysis.surprise_applicable else "not applicable"
    lines = [
        f"statement: context = {render(st.context)}; punchline = {render(st.punchline)}",
        f"order: {analysis.method.value}",
        f"surprising: {surprising}",
        f"revealing: {_yes(analysis.revealing)}",
        f"potentially funny: {_yes(analysis.potentially_funny)}",
        f"surprise level: {fraction_text(analysis.levels.surprise_level)}",
        f"revealing level: {fraction_text(analysis.levels.revealing_level) or 'undefined'}",
        "incongruous norms: "
        + (", ".join(describe(r) for r in analysis.incongruous_norms) or "none"),
        "non-violable norms: "
        + (", ".join(describe(r) for r in analysis.non_violable_norms) or "none"),
    ]
    for name, label in (("context", "K∘α"), ("joint", "K∘(α∧β)"), ("punchline", "K∘β")):
        ms = analysis.witnesses.get(name)
        shown = "n/a" if ms is None else (", ".join(ms.render()) or "∅")
        lines.append(f"{label}: {shown}")
    for ref, ms in analysis.disregard.items():
        lines.append(f"disregard {ref}: {', '.join(ms.render())}")
    lines += [f"note: {n}" for n in analysis.notes]
    return "\n".join(lines)


def render_report(analysis: JokeAnalysis, format: str = "json", kb: KnowledgeBase | None = None) -> str:
    if format == "json":
        return json.dumps(report_dict(analysis), indent=2, ensure_ascii=False)
    if format == "text":
        return report_text(analysis, kb)
    raise ValueError(f"unknown report format {format!r}")
