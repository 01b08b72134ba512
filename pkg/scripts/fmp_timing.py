"""Time each fmp conjunct, per quantifier variant, on growing truncations.

Prints one CSV row per (N, variant, conjunct).  N = 3 takes a few minutes.
"""

import argparse
import csv
import sys
import time

from qpal.fmp import VARIANTS, fmp_parts
from qpal.model import truncation
from qpal.quantified import QuantifiedEvaluator


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--variants", default=",".join(VARIANTS))
    args = ap.parse_args()

    w = csv.writer(sys.stdout)
    w.writerow(["N", "states", "variant", "conjunct", "value", "seconds", "memo_entries"])
    for n in range(1, args.max_n + 1):
        m, s0 = truncation(n)
        for variant in args.variants.split(","):
            # fresh evaluator per variant so the timings do not share memo tables
            ev = QuantifiedEvaluator(m)
            for name, f in fmp_parts(variant, tuple(m.agents)).items():
                t0 = time.perf_counter()
                value = ev.holds(f, s0)
                w.writerow([n, m.n, variant, name, value, f"{time.perf_counter() - t0:.3f}", sum(map(len, ev.memo))])
                sys.stdout.flush()


if __name__ == "__main__":
    main()
