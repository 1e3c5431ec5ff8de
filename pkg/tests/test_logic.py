import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from punchline.errors import EmptyUniverse, FormulaSyntaxError, UniverseTooLarge, UnknownAtom
from punchline.logic import (
    BOTTOM,
    TOP,
    And,
    Atom,
    AtomUniverse,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    entails,
    equivalent,
    is_consistent,
    models_of,
    models_of_all,
    parse_formula,
    render,
    truth_table,
)

from . import oracles
from .corpus import omegas, rendered

a, b, c = Atom("a"), Atom("b"), Atom("c")
KTCR = AtomUniverse(("k", "t", "c", "r"))


# --- parsing -----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [
        ("!k -> !c", Implies(Not(Atom("k")), Not(Atom("c")))),
        ("a & b | c", Or(And(a, b), c)),
        ("a -> b -> c", Implies(a, Implies(b, c))),
        ("a | b & c", Or(a, And(b, c))),
        ("!a & b", And(Not(a), b)),
        ("!(a & b)", Not(And(a, b))),
        ("a <-> b -> c", Iff(a, Implies(b, c))),
        ("a & b & c", And(And(a, b), c)),
        ("true | false", Or(TOP, BOTTOM)),
        ("  ( a )  ", a),
        ("!!a", Not(Not(a))),
    ],
)
def test_parse_precedence(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize(
    "text, position",
    [("a &", 3), ("(a | b", 6), ("a b", 2), ("a <-> b <-> c", 8), ("a $ b", 2), ("", 0), ("->", 0)],
)
def test_syntax_errors_carry_position(text, position):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.position == position
    assert info.value.expected or "unexpected character" in str(info.value)


def test_chained_iff_needs_parentheses():
    with pytest.raises(FormulaSyntaxError, match="non-associative"):
        parse_formula("a <-> b <-> c")
    assert parse_formula("(a <-> b) <-> c") == Iff(Iff(a, b), c)


def test_strict_mode_rejects_unknown_atoms():
    with pytest.raises(UnknownAtom) as info:
        parse_formula("k & z", KTCR)
    assert info.value.name == "z"
    assert parse_formula("k & t", KTCR) == And(Atom("k"), Atom("t"))


def test_inference_cap():
    wide = " & ".join(f"x{i}" for i in range(25))
    with pytest.raises(UniverseTooLarge):
        parse_formula(wide)
    parse_formula(" & ".join(f"x{i}" for i in range(24)))


def test_universe_bounds():
    with pytest.raises(EmptyUniverse):
        AtomUniverse(())
    with pytest.raises(UniverseTooLarge):
        AtomUniverse(tuple(f"x{i}" for i in range(25)))
    with pytest.raises(ValueError):
        AtomUniverse(("a", "a"))
    with pytest.raises(ValueError):
        AtomUniverse(("true",))


def test_operator_sugar_and_atoms_order():
    phi = ~a & b | c >> a
    assert phi == Or(And(Not(a), b), Implies(c, a))
    assert phi.atoms() == ("a", "b", "c")
    assert a.iff(b) == Iff(a, b)


# --- interpretations and model sets -------------------------------------------


def test_canonical_index_and_literals():
    w = KTCR.interpretation(0b1011)  # k, t, r true; c false
    assert str(w) == "k t ¬c r"
    assert KTCR.from_literals("k t ¬c r") == w
    assert KTCR.from_literals("k t !c r") == w
    assert w.value("c") is False


def test_models_examples():
    assert len(models_of(TOP, AtomUniverse(("a", "b")))) == 4
    assert not models_of(BOTTOM, KTCR)
    assert rendered(models_of(parse_formula("t & r"), KTCR)) == omegas(1, 3, 9, 11)


def test_modelset_algebra_and_rendering():
    u = AtomUniverse(("a", "b"))
    s = ModelSet.from_indices(u, [3, 1])
    assert s.indices == (1, 3)
    assert s.render() == ["a ¬b", "a b"]
    assert s.complement() == ModelSet.from_indices(u, [0, 2])
    assert models_of(s.to_formula(), u) == s
    assert s & s.complement() == u.no_models()
    assert u.interpretation(1) in s and 2 not in s


def test_entailment_examples():
    p, q = Atom("p"), Atom("b")
    u = AtomUniverse(("p", "b"))
    assert entails([Implies(p, q), p], q, u)
    assert not entails([], p, u)
    assert not is_consistent([p, Not(p)], u)
    assert is_consistent([TOP], u)


def test_elephant_classical_facts():
    u = AtomUniverse(("i", "e", "tt", "h"))
    f = lambda s: parse_formula(s, u)  # noqa: E731
    p = [f("h -> !i"), f("e -> h"), f("h -> !tt"), f("tt -> i")]
    assert not is_consistent(p + [f("i & e")], u)
    rest = [p[0], p[2], p[3]]
    assert entails(rest + [f("tt & e")], f("i & e"), u)


def test_truth_tables_are_read_only():
    table = truth_table(a & b, AtomUniverse(("a", "b")))
    with pytest.raises(ValueError):
        table[0] = True


def test_large_universe_enumeration():
    u = AtomUniverse(tuple(f"x{i}" for i in range(16)))
    assert len(models_of(parse_formula("x0 & x15"), u)) == 2**14


# --- properties -----------------------------------------------------------------

NAMES = ("a", "b", "c")
UNIVERSE = AtomUniverse(NAMES)

formulas = st.recursive(
    st.one_of(st.sampled_from([Atom(n) for n in NAMES]), st.sampled_from([TOP, BOTTOM])),
    lambda inner: st.one_of(
        inner.map(Not),
        st.tuples(inner, inner).map(lambda p: And(*p)),
        st.tuples(inner, inner).map(lambda p: Or(*p)),
        st.tuples(inner, inner).map(lambda p: Implies(*p)),
        st.tuples(inner, inner).map(lambda p: Iff(*p)),
    ),
    max_leaves=12,
)


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_render_parse_round_trip(phi):
    assert parse_formula(render(phi)) == phi


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_models_match_reference_evaluator(phi):
    assert set(models_of(phi, UNIVERSE).indices) == oracles.models(phi, NAMES)


@settings(max_examples=100, deadline=None)
@given(formulas, formulas)
def test_boolean_homomorphism(phi, psi):
    m, n = models_of(phi, UNIVERSE), models_of(psi, UNIVERSE)
    assert models_of(Not(phi), UNIVERSE) == m.complement()
    assert models_of(And(phi, psi), UNIVERSE) == m & n
    assert models_of(Or(phi, psi), UNIVERSE) == m | n
    assert models_of_all([phi, psi], UNIVERSE) == m & n


@settings(max_examples=100, deadline=None)
@given(st.lists(formulas, max_size=3), formulas)
def test_entailment_is_refutation(premises, phi):
    assert entails(premises, phi, UNIVERSE) == (not is_consistent(premises + [Not(phi)], UNIVERSE))


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_dnf_is_equivalent(phi):
    assert equivalent(models_of(phi, UNIVERSE).to_formula(), phi, UNIVERSE)
