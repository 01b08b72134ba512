import random

import pytest
from hypothesis import given, settings, strategies as st

from qpal import library as L
from qpal.bisimulation import disjoint_union
from qpal.formula import And, Announce, ArbDia, Atom, DiaAnnounce, Imp, Know, Not, Top
from qpal.generate import FormulaConfig, ModelConfig, random_formula, random_model
from qpal.model import ModelError, PointedModel, build, example1_model, restrict, to_json, truncation
from qpal.semantics import Evaluator, QuantifierError, extension, holds, update
from qpal.syntax import parse

EL = FormulaConfig(atoms=("x", "y", "z"), depth=4, announcements=True)


def random_instance(seed):
    rng = random.Random(seed)
    m = random_model(rng, ModelConfig(max_states=6))
    return rng, m


def test_example1_extensions():
    m = example1_model().model
    assert m.labels(extension(m, L.example1_psi)) == ["s0", "t0", "t1"]
    assert m.labels(extension(m, L.example1_psi_a)) == ["s0", "t0"]
    assert extension(m, Top()) == m.full


def test_example1_announcements():
    pm = example1_model()
    assert holds(pm, DiaAnnounce(L.example1_psi, L.example1_goal))
    assert holds(pm, DiaAnnounce(L.example1_psi_a, L.example1_goal_b))
    assert not holds(pm, L.example1_goal)


def test_update_examples():
    m = example1_model().model
    assert update(m, L.example1_psi).states == ("s0", "t0", "t1")
    assert to_json(update(m, Top())) == to_json(m)
    t2, _ = truncation(2)
    assert update(t2, L.stem_witness(1)).states == ("s1", "t1", "t2", "u1", "u2")
    with pytest.raises(ModelError):
        update(m, parse("p & ~p"))


def test_atoms_outside_the_vocabulary_are_false():
    m = example1_model().model
    assert extension(m, Atom("zzz")) == 0
    assert extension(m, Not(Atom("zzz"))) == m.full


def test_quantifiers_rejected():
    with pytest.raises(QuantifierError):
        extension(example1_model().model, ArbDia(Atom("p")))


def test_unknown_agent():
    with pytest.raises(ModelError, match="unknown agent"):
        extension(example1_model().model, Know("c", Atom("p")))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_boolean_algebra(seed):
    rng, m = random_instance(seed)
    f, g = random_formula(rng, EL), random_formula(rng, EL)
    ev = Evaluator(m)
    ef, eg = ev.extension(f), ev.extension(g)
    assert ev.extension(Not(f)) == m.full & ~ef
    assert ev.extension(And(f, g)) == ef & eg
    assert ev.extension(f | g) == ef | eg
    assert ev.extension(Imp(f, g)) == (m.full & ~ef) | eg


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_knowledge_is_a_union_of_classes(seed):
    rng, m = random_instance(seed)
    f = random_formula(rng, EL)
    for a in m.agents:
        e = extension(m, Know(a, f))
        assert m.relations[a].closed(e)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_announcement_is_restriction(seed):
    # [f]g at s  iff  f at s implies g at s in the model updated by f
    rng, m = random_instance(seed)
    f, g = random_formula(rng, EL), random_formula(rng, EL)
    ef = extension(m, f)
    box = extension(m, Announce(f, g))
    dia = extension(m, DiaAnnounce(f, g))
    if not ef:
        assert box == m.full and dia == 0
        return
    sub = restrict(m, ef)
    eg = extension(sub, g)
    for s in range(m.n):
        inside = bool(ef >> s & 1)
        later = inside and bool(eg >> sub.index(m.states[s]) & 1)
        assert bool(box >> s & 1) == (not inside or later)
        assert bool(dia >> s & 1) == later


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_relabeling_and_disjoint_union_invariance(seed):
    rng, m = random_instance(seed)
    f = random_formula(rng, EL)
    e = extension(m, f)
    perm = list(range(m.n))
    rng.shuffle(perm)
    shuffled = build(
        [f"r{perm[i]}" for i in range(m.n)],
        m.agents,
        {a: [[f"r{perm[i]}" for i in range(m.n) if b >> i & 1] for b in m.relations[a].blocks] for a in m.agents},
        {p: [f"r{perm[i]}" for i in range(m.n) if v >> i & 1] for p, v in m.valuation.items()},
    )
    e2 = extension(shuffled, f)
    assert all((e >> i & 1) == (e2 >> shuffled.index(f"r{perm[i]}") & 1) for i in range(m.n))
    other = random_model(rng, ModelConfig(max_states=4))
    union, _ = disjoint_union(m, other)
    assert extension(union, f) & m.full == e


def test_holds_matches_extension():
    pm = example1_model()
    for s in range(pm.model.n):
        assert holds(PointedModel(pm.model, s), Atom("p")) == bool(pm.model.val("p") >> s & 1)


def test_memo_is_shared_across_submodels():
    m, _ = truncation(2)
    ev = Evaluator(m)
    ev.extension(DiaAnnounce(L.stem_witness(1), L.tier))
    before = sum(len(t) for t in ev.memo)
    ev.extension(DiaAnnounce(L.stem_witness(1), L.tier))
    assert sum(len(t) for t in ev.memo) == before


def test_components():
    m, _ = truncation(1)
    ev = Evaluator(m)
    assert ev.components(m.full) == [m.full]
    keep = m.mask(["s0", "t0", "u1"])
    assert sorted(ev.components(keep)) == sorted([m.mask(["s0", "t0"]), m.mask(["u1"])])
