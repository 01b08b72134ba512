"""Run every reproduction bundle and write the JSON reports to a directory.

    python scripts/run_repro.py --out results/ --truncation 3
"""

import argparse
import json
import pathlib

from qpal.repro import example1, fig2, random_sweep, truncation_bundle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--truncation", type=int, default=2, help="largest truncation to check")
    ap.add_argument("--sweep", type=int, default=200, help="number of random models")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reports = [example1(), fig2()]
    reports += [truncation_bundle(n) for n in range(1, args.truncation + 1)]
    reports.append(random_sweep(args.sweep, 6, args.seed))
    ok = True
    for r in reports:
        print(r.table(), end="\n\n")
        name = r.name.replace(" ", "-")
        (out / f"{name}.json").write_text(json.dumps(r.to_json(), indent=2))
        ok &= r.ok
    print("all bundles pass" if ok else "MISMATCH in at least one bundle")
    raise SystemExit(0 if ok else 1)


if __name__ == "__main__":
    main()
