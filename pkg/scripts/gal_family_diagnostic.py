"""Compare the grand-coalition announcement family with all closed sets.

On the truncation models every closed set is definable, but not every closed
set is the extension of a joint announcement ``K_a f & K_b g``.  This prints
the two family sizes and a few closed sets the coalition cannot produce.
"""

import argparse

from qpal.bisimulation import closed_sets
from qpal.model import truncation
from qpal.quantified import group_extensions


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--show", type=int, default=5)
    args = ap.parse_args()

    for n in range(1, args.max_n + 1):
        m, _ = truncation(n)
        fam = group_extensions(m, m.agents)
        closed = set(closed_sets(m)) | {0}
        missing = sorted(closed - fam.sets, key=lambda x: (bin(x).count("1"), x))
        print(f"truncation({n}): {len(fam)} joint extensions, {len(closed)} closed sets, "
              f"subset={fam.sets <= closed}, equal={fam.sets == closed}")
        for x in missing[: args.show]:
            print("  not reachable:", "{" + ", ".join(m.labels(x)) + "}")


if __name__ == "__main__":
    main()
