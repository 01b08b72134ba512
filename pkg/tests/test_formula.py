import random

import pytest
from hypothesis import given, settings, strategies as st

from qpal import library as L
from qpal.formula import (
    And,
    Announce,
    ArbBox,
    ArbDia,
    Atom,
    Bot,
    CoalBox,
    CoalDia,
    DiaAnnounce,
    GroupBox,
    GroupDia,
    Imp,
    K,
    Know,
    M,
    MaybeKnow,
    Not,
    Or,
    Top,
    expand,
    is_group_announcement,
    measures,
)
from qpal.generate import FormulaConfig, random_formula
from qpal.syntax import ParseError, parse, render, tokenize

p, q, x = Atom("p"), Atom("q"), Atom("x")


@pytest.mark.parametrize(
    "text, expected",
    [
        ("K a (p -> q)", Know("a", Imp(p, q))),
        ("M a K b p & M a M b ~p", L.example1_goal),
        ("p -> q -> p", Imp(p, Imp(q, p))),
        ("p | q & p", Or(p, And(q, p))),
        ("~p & q", And(Not(p), q)),
        ("[K a p]q", Announce(K("a", p), q)),
        ("<p>q", DiaAnnounce(p, q)),
        ("box dia p", ArbBox(ArbDia(p))),
        ("[{a,b}]p", GroupBox(frozenset("ab"), p)),
        ("<{b, a}>p", GroupDia(frozenset("ab"), p)),
        ("[<{a}>]p", CoalBox(frozenset("a"), p)),
        ("<[{a}]>p", CoalDia(frozenset("a"), p)),
        ("[{}]p", GroupBox(frozenset(), p)),
        ("true | false", Or(Top(), Bot())),
        ("p1'", Atom("p1'")),
    ],
)
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize(
    "text, message",
    [
        ("K a", "missing operand"),
        ("(p & q", "expected ')'"),
        ("p & q)", "unexpected"),
        ("p $ q", "unknown"),
        ("[{a,a}]p", "duplicate"),
        ("K ~ p", "expected identifier"),
        ("", "missing operand"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert message in str(info.value)
    assert 0 <= info.value.pos <= len(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("p & (q | )")
    assert info.value.pos == 9


def test_tokenizer_prefers_longest_punctuation():
    assert [t.value for t in tokenize("[<{a}>]p")][:3] == ["[<{", "a", "}>]"]


@pytest.mark.parametrize(
    "f, text",
    [
        (Know("a", p), "K a p"),
        (ArbDia(p), "dia p"),
        (Imp(Imp(p, q), p), "(p -> q) -> p"),
        (And(p, And(q, p)), "p & (q & p)"),
        (Not(And(p, q)), "~(p & q)"),
        (Announce(GroupDia(frozenset("a"), p), q), "[(<{a}>p)]q"),
        (DiaAnnounce(GroupBox(frozenset("a"), p), q), "<([{a}]p)>q"),
    ],
)
def test_render(f, text):
    assert render(f) == text
    assert parse(text) == f


def test_library_round_trips():
    for f in (L.root, L.stem, L.tier, L.fmp, L.fmp_gal(), L.fmp_cal(), L.refuting_announcement()):
        assert parse(render(f)) == f


@st.composite
def formulas(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    cfg = FormulaConfig(atoms=("p", "q", "x"), depth=draw(st.integers(0, 5)), max_quantifier_depth=2)
    return random_formula(random.Random(seed), cfg)


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_round_trip(f):
    assert parse(render(f)) == f


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_str_is_render(f):
    assert str(f) == render(f)


@pytest.mark.parametrize(
    "derived, primitive",
    [
        ("M a p", "~K a ~p"),
        ("<p>q", "~[p]~q"),
        ("dia p", "~box ~p"),
        ("<{a}>p", "~[{a}]~p"),
        ("<[{a}]>p", "~[<{a}>]~p"),
    ],
)
def test_dual_expansion(derived, primitive):
    assert expand(parse(derived)) == parse(primitive)


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_expand_leaves_no_duals(f):
    from qpal.formula import DUALS, subformulas

    assert not any(isinstance(g, DUALS) for g in subformulas(expand(f)))


def test_measures_examples():
    assert measures(p) == ({"p"}, 0, 0)
    assert measures(Announce(K("a", p), K("b", K("a", q)))) == ({"p", "q"}, 3, 0)
    assert measures(ArbBox(K("a", p))) == ({"p"}, 1, 1)
    assert measures(L.fmp).vars == {"x"}


def naive_measures(f):
    f = expand(f)
    if isinstance(f, Atom):
        return {f.name}, 0, 0
    if isinstance(f, (Top, Bot)):
        return set(), 0, 0
    if isinstance(f, Not):
        return naive_measures(f.body)
    if isinstance(f, (And, Or, Imp)):
        a, b = naive_measures(f.left), naive_measures(f.right)
        return a[0] | b[0], max(a[1], b[1]), max(a[2], b[2])
    if isinstance(f, Know):
        v, d, D = naive_measures(f.body)
        return v, d + 1, D
    if isinstance(f, Announce):
        a, b = naive_measures(f.announcement), naive_measures(f.body)
        return a[0] | b[0], a[1] + b[1], max(a[2], b[2])
    v, d, D = naive_measures(f.body)
    return v, d, D + 1


def test_measures_agree_with_naive_definition():
    rng = random.Random(11)
    cfg = FormulaConfig(atoms=("p", "q", "x"), depth=5, max_quantifier_depth=3)
    for _ in range(1000):
        f = random_formula(rng, cfg)
        assert tuple(measures(f)) == naive_measures(f)


@pytest.mark.parametrize(
    "text, g, expected",
    [
        ("K a p", "a", True),
        ("K a p & K b q", "a", False),
        ("K a box p", "a", False),
        ("K a [p]q", "a", False),
        ("K b q & K a p", "a,b", True),
        ("K a p & K a q", "a", False),
        ("K a p", "a,b", False),
        ("true", "", True),
        ("K a p", "", False),
    ],
)
def test_is_group_announcement(text, g, expected):
    assert is_group_announcement(parse(text), g) is expected


def nnf(f):
    """Push negations to atoms and modal operators, rewriting ~(A -> B) as A & ~B."""
    f = expand(f)
    if isinstance(f, Not):
        g = f.body
        if isinstance(g, Not):
            return nnf(g.body)
        if isinstance(g, Imp):
            return And(nnf(g.left), nnf(Not(g.right)))
        if isinstance(g, And):
            return Or(nnf(Not(g.left)), nnf(Not(g.right)))
        if isinstance(g, Or):
            return And(nnf(Not(g.left)), nnf(Not(g.right)))
        if isinstance(g, Know):
            return MaybeKnow(g.agent, nnf(Not(g.body)))
        if isinstance(g, ArbBox):
            return ArbDia(nnf(Not(g.body)))
        return f
    if isinstance(f, (And, Or, Imp)):
        return type(f)(nnf(f.left), nnf(f.right))
    if isinstance(f, Know):
        return Know(f.agent, nnf(f.body))
    if isinstance(f, ArbBox):
        return ArbBox(nnf(f.body))
    return f


def test_stem_is_the_negation_dual_of_root():
    assert nnf(Not(L.root)) == nnf(L.stem)


def test_group_field_is_normalized():
    assert GroupBox({"a"}, p) == GroupBox(frozenset("a"), p)
    assert GroupDia("a,b", p).group == frozenset("ab")
    assert hash(CoalDia(["a"], p)) == hash(CoalDia(frozenset("a"), p))


def test_operators():
    assert (p & q) == And(p, q)
    assert (p | q) == Or(p, q)
    assert ~p == Not(p)
    assert (p >> q) == Imp(p, q)
    assert M("a", p) == MaybeKnow("a", p)


def test_named_formulas():
    assert L.named("fmp") is L.fmp
    assert L.named("stem_witness 2") == M("a", M("b", Atom("p4")))
    assert L.named("fmp_gal") == L.to_gal(L.fmp)
    assert L.named("  stem ") is L.stem
    with pytest.raises(KeyError):
        L.named("nope")


def test_gal_substitution_leaves_no_arbitrary_quantifier():
    from qpal.formula import subformulas

    for f in (L.fmp_gal(), L.fmp_cal()):
        assert not any(isinstance(g, (ArbBox, ArbDia)) for g in subformulas(f))
    assert x in set(subformulas(L.fmp_gal()))
