"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line and then
asserts.  The lines are repeated in the "acceptance criteria" section of the
pytest terminal summary.
"""

import random
import time

import pytest
from conftest import CRITERIA

from qpal import library as L
from qpal.bisimulation import bisimilar, characteristic_formula, closed_sets, quotient_blocks, quotient_model
from qpal.fmp import REFUTING_GOAL, STEM_GOAL, fmp_parts
from qpal.formula import ArbDia, CoalDia, DiaAnnounce, GroupDia
from qpal.generate import FormulaConfig, ModelConfig, formula_corpus, model_corpus, random_model, with_clones
from qpal.model import PointedModel, example1_model, truncation
from qpal.quantified import QuantifiedEvaluator, verify_announcement
from qpal.semantics import Evaluator


def report(n, label, ok, elapsed=None, bound=None):
    timing = ""
    if elapsed is not None:
        timing = f" ({elapsed:.2f}s"
        timing += f", bound {bound}s)" if bound is not None else ")"
        if bound is not None and elapsed >= bound:
            ok = False
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {label}{timing}"
    print(line)
    CRITERIA.append(line)
    assert ok


def test_criterion_1_example1_bundle():
    t0 = time.perf_counter()
    pm = example1_model()
    m, s0 = pm
    ev = QuantifiedEvaluator(m)
    got = [
        ev.holds(ArbDia(L.example1_goal), s0),
        ev.holds(GroupDia({"a"}, L.example1_goal), s0),
        ev.holds(GroupDia({"a"}, L.example1_goal_b), s0),
        ev.holds(CoalDia({"a"}, L.example1_goal_b), s0),
    ]
    elapsed = time.perf_counter() - t0
    report(1, f"example-1 bundle {got} == [True, False, True, False]", got == [True, False, True, False], elapsed, 1)


def test_criterion_2_fig2_refutation():
    t0 = time.perf_counter()
    m, s0 = truncation(2)
    ev = QuantifiedEvaluator(m)
    parts = fmp_parts("apal", tuple(m.agents))
    got = {k: ev.holds(f, s0) for k, f in parts.items()}
    want = {"conjunct1": True, "conjunct2": True, "conjunct3": False, "fmp": False}
    refute = L.refuting_announcement(4)
    kept = ev.extension(refute)
    refutes = ev.holds(DiaAnnounce(refute, REFUTING_GOAL), s0)
    # the same extension is also accepted as a plain announcement witness
    valid = verify_announcement(PointedModel(m, s0), REFUTING_GOAL, kept, evaluator=ev)
    elapsed = time.perf_counter() - t0
    ok = got == want and refutes and valid
    report(2, f"truncation(2) conjuncts {got}, K_a(~x -> K_b(x -> K_a ~p4)) refutes: {refutes and valid}", ok, elapsed, 60)


@pytest.mark.parametrize("i", [1, 2])
def test_criterion_3_stem_witness(i):
    t0 = time.perf_counter()
    m, _ = truncation(2)
    ev = QuantifiedEvaluator(m)
    ok = ev.holds(DiaAnnounce(L.stem_witness(i), STEM_GOAL), m.index(f"s{i}"))
    elapsed = time.perf_counter() - t0
    report(3, f"<M a M b p{2 * i}>(tier & K b stem) at s{i}", ok, elapsed, 10)


def test_criterion_4_root_and_stem():
    checks = []
    m, s0 = truncation(2)
    ev = QuantifiedEvaluator(m)
    checks.append(ev.holds(L.root, s0))
    checks.append(ev.holds(L.stem, m.index("s1")) and ev.holds(L.stem, m.index("s2")))
    models = [truncation(1).model, m] + model_corpus(4, 100, ModelConfig(max_states=6))
    complement = 0
    for model in models:
        e = QuantifiedEvaluator(model)
        if e.extension(L.stem) == model.full & ~e.extension(L.root):
            complement += 1
    checks.append(complement == len(models))
    report(4, f"root@s0, stem@s1,s2, stem = ~root on {complement}/{len(models)} models", all(checks))


def test_criterion_5_restricted_bisimilarity():
    t0 = time.perf_counter()
    pm = truncation(3)
    m = pm.model
    Q = ("x", "p1")
    got = [bisimilar(pm, PointedModel(m, m.index(f"s{i}")), Q) for i in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    report(5, f"truncation(3) s0 ~{{x,p1}} s1,s2,s3: {got}", got == [False, True, True], elapsed, 1)


def test_criterion_6_no_fmp_sweep():
    t0 = time.perf_counter()
    variants = [L.fmp, L.fmp_gal(), L.fmp_cal()]
    satisfying = 0
    for m in model_corpus(6, 200, ModelConfig(max_states=6, agents=("a", "b"), atoms=("x", "y", "z"))):
        ev = QuantifiedEvaluator(m)
        satisfying += sum(bin(ev.extension(f)).count("1") for f in variants)
    for N in (1, 2):
        m, _ = truncation(N)
        ev = QuantifiedEvaluator(m)
        s_states = m.mask(f"s{i}" for i in range(N + 1))
        satisfying += sum(bin(ev.extension(f) & s_states).count("1") for f in variants)
    elapsed = time.perf_counter() - t0
    report(6, f"{satisfying} satisfying instances of fmp/fmp_gal/fmp_cal", satisfying == 0, elapsed, 600)


def test_criterion_7_definability_round_trip():
    corpus = [example1_model().model, truncation(1).model] + model_corpus(7, 60)
    checked_sets = 0
    ok = True
    for m in corpus:
        if len(quotient_blocks(m)) > 6:
            continue
        ev = Evaluator(m)
        for x in [0, *closed_sets(m)]:
            checked_sets += 1
            ok &= ev.extension(characteristic_formula(m, x)) == x
    rng = random.Random(7)
    cfg = FormulaConfig(atoms=("x", "y", "z"), depth=4, announcements=False)
    closed_ok = 0
    for k in range(1000):
        m = random_model(rng)
        blocks = quotient_blocks(m)
        e = Evaluator(m).extension(formula_corpus(k, 1, cfg)[0])
        closed_ok += all(b & e in (0, b) for b in blocks)
    ok &= closed_ok == 1000
    report(7, f"{checked_sets} characteristic formulas exact, {closed_ok}/1000 extensions closed", ok)


def test_criterion_8_quotient_agreement():
    cfg = FormulaConfig(atoms=("x", "y", "z"), depth=4, max_quantifier_depth=2)
    formulas = formula_corpus(8, 200, cfg)
    rng = random.Random(8)
    # half plain random models, half with bisimilar clones so the quotient shrinks
    models = model_corpus(8, 10, ModelConfig(max_states=5))
    models += [with_clones(rng, m) for m in model_corpus(9, 10, ModelConfig(max_states=4))]
    agree = total = 0
    for m in models:
        q, index = quotient_model(m)
        ev, evq = QuantifiedEvaluator(m), QuantifiedEvaluator(q)
        for f in formulas:
            e, eq = ev.extension(f), evq.extension(f)
            total += 1
            agree += all((e >> s & 1) == (eq >> index[s] & 1) for s in range(m.n))
    report(8, f"model and quotient agree on {agree}/{total} (model, formula) pairs", agree == total)
