"""Search for n-bisimilar states that disagree on a quantified formula of modal depth <= n.

Random small models and random formulas ``dia f``; prints any hit.  The hand-
built pair used in the test suite is checked at the end for comparison.
"""

import argparse
import random

from qpal.bisimulation import refinement
from qpal.formula import ArbDia, measures
from qpal.generate import FormulaConfig, ModelConfig, random_formula, random_model
from qpal.model import PointedModel, build
from qpal.quantified import QuantifiedEvaluator, check
from qpal.syntax import parse


def search(trials, seed, max_states):
    rng = random.Random(seed)
    cfg = FormulaConfig(atoms=("x", "y", "z"), depth=3, announcements=False)
    hits = []
    for _ in range(trials):
        m = random_model(rng, ModelConfig(max_states=max_states))
        f = ArbDia(random_formula(rng, cfg))
        n = measures(f).d
        stages = refinement(m)
        if n >= len(stages) - 1:
            continue  # stage n is already full bisimilarity
        ids = stages[n]
        e = QuantifiedEvaluator(m).extension(f)
        for s in range(m.n):
            for t in range(s + 1, m.n):
                if ids[s] == ids[t] and (e >> s & 1) != (e >> t & 1):
                    hits.append((m, s, t, f))
    return hits


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-states", type=int, default=6)
    args = ap.parse_args()

    hits = search(args.trials, args.seed, args.max_states)
    print(f"random search: {len(hits)} hits in {args.trials} trials")
    for m, s, t, f in hits[:5]:
        print(f"  {m.states[s]} vs {m.states[t]} on {m.n} states: {f}")

    m = build(
        ["s", "s1", "s2", "r1", "r2", "c", "c1", "c2", "d"],
        ["a", "b"],
        {
            "a": [["s", "s1"], ["s2", "r2"], ["r1"], ["c", "c1"], ["c2", "d"]],
            "b": [["s", "s2"], ["s1", "r1"], ["r2"], ["c", "c2"], ["c1", "d"]],
        },
        {"y": ["s", "r1", "r2", "c", "d"], "z": ["s1", "s2", "c1", "c2"], "w": ["r1"]},
    )
    f = parse("dia (K a y & M b z)")
    ids = refinement(m)[1]
    s, c = m.index("s"), m.index("c")
    print(f"hand-built pair: 1-bisimilar={ids[s] == ids[c]}, "
          f"{f} at s={check(PointedModel(m, s), f)}, at c={check(PointedModel(m, c), f)}")


if __name__ == "__main__":
    main()
