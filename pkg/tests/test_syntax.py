import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalbhk.syntax import (BOT, TOP, And, Box, Imp, K, Language, Or, ParseError, Var, dia, ident, iff, in_language,
                             language_of, neg, parse, random_formula, show, skeleton, substitute, substitute_all,
                             variables)

x, y, a, b = Var("x"), Var("y"), Var("a"), Var("b")


def test_parse_basic_shapes():
    assert parse("x -> []x") == Imp(x, Box(x))
    assert parse("x == ~~x") == Box(And(Imp(x, neg(neg(x))), Imp(neg(neg(x)), x)))
    assert parse("<>_|_") == Imp(Box(Imp(BOT, BOT)), BOT)
    assert parse("T") == TOP


def test_implication_is_right_associative_and_binds_loosest_among_binary():
    assert parse("x -> y -> x") == Imp(x, Imp(y, x))
    assert parse("x & y | x -> y") == Imp(Or(And(x, y), x), y)


def test_k_word_versus_identifier():
    assert parse("K x") == K(x)
    assert parse("Kx") == Var("Kx")
    assert parse("K(x)") == K(x)
    assert show(K(Var("Kx"))) == "K Kx"


def test_equivalence_is_not_associative():
    with pytest.raises(ParseError):
        parse("x <-> y <-> x")
    with pytest.raises(ParseError):
        parse("x == y == x")


def test_parse_error_reports_offset():
    with pytest.raises(ParseError) as e:
        parse("x -> ")
    assert e.value.offset == 5
    assert "identifier" in e.value.expected


def test_unicode_aliases():
    assert parse("□x → ◇x") == Imp(Box(x), dia(x))
    assert parse("¬x ∧ ⊥") == And(neg(x), BOT)


def test_printer_sugar():
    assert show(Imp(x, BOT)) == "~x"
    assert show(Box(And(Imp(x, y), Imp(y, x)))) == "x == y"
    assert show(x) == "x"
    assert show(dia(x)) == "<>x"
    assert show(iff(x, y)) == "x <-> y"


def test_substitution():
    assert substitute(Box(x), "x", BOT) == Box(BOT)
    phi = And(a, b)
    assert substitute(Box(iff(phi, x)), "x", phi) == Box(iff(phi, phi))
    f = parse("[](x -> K y) | x")
    assert substitute(f, "x", x) == f


def test_skeleton_examples():
    prop, bind = skeleton(Box(a))
    assert isinstance(prop, Var) and bind == {prop.name: Box(a)}
    prop, bind = skeleton(Imp(K(a), Imp(b, K(a))))
    p, q = prop.left, prop.right.left
    assert prop == Imp(p, Imp(q, p))
    assert bind == {p.name: K(a), q.name: b}
    prop, _ = skeleton(Imp(Box(a), Box(a)))
    assert prop.left == prop.right


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=10**9))
def test_skeleton_resubstitution_and_propositional(seed):
    f = random_formula(random.Random(seed), 5)
    prop, bind = skeleton(f)
    assert substitute_all(prop, bind) == f
    assert in_language(prop, Language.FM0)


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=10**9))
def test_print_parse_roundtrip(seed):
    f = random_formula(random.Random(seed), 8)
    assert parse(show(f)) == f


def test_roundtrip_seeded_thousand():
    rng = random.Random(99)
    for _ in range(1000):
        f = random_formula(rng, 8)
        assert parse(show(f)) == f


def test_languages():
    assert language_of(parse("x -> y")) is Language.FM0
    assert language_of(parse("[]x")) is Language.FM1
    assert language_of(parse("K x")) is Language.FME
    assert language_of(parse("[]K x")) is Language.FM
    assert in_language(parse("x"), Language.FM)
    assert not in_language(parse("K x"), Language.FM1)


def test_variables_first_occurrence_order():
    assert variables(parse("y -> x & y")) == ["y", "x"]


def test_identity_abbreviation():
    assert ident(x, y) == Box(iff(x, y))
