"""``qpal`` command line: check, update, bisim, quotient, witness, repro.

Exit codes: 0 verdict computed (and, for repro, every claim passed);
1 a repro claim mismatched; 2 input error; 3 block cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import library
from .bisimulation import CapExceeded, refinement, stage_blocks
from .fmp import check_fmp_suite
from .formula import ArbBox, ArbDia, CoalBox, CoalDia, Formula, GroupBox, GroupDia, Not
from .model import Model, ModelError, PointedModel, from_json, restrict, to_json
from .quantified import QuantifiedEvaluator, default_cap, diamond_witness
from .repro import example1, fig2, random_sweep, truncation_bundle
from .syntax import ParseError, parse

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path: str):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None
    return from_json(data)


def _formula(args, m: Model) -> Formula:
    if args.formula is not None:
        try:
            return library.named(args.formula, m.agents)
        except KeyError:
            return parse(args.formula)
    if args.text is None:
        raise InputError("no formula given (positional text or --formula NAME)")
    return parse(args.text)


def _point(args, m: Model, default: Optional[int]) -> int:
    if args.state is not None:
        return m.index(args.state)
    if default is None:
        raise InputError("no state given and the model has no 'point'")
    return default


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=2) if args.json else text)


def _cap(args) -> int:
    return args.cap if args.cap is not None else default_cap()


def _vocab(args):
    return None if args.vocab is None else [p for p in args.vocab.split(",") if p]


def _diamond_parts(f: Formula):
    """``(mode, group, goal, negated)`` if ``f`` is a quantified diamond or box."""
    if isinstance(f, ArbDia):
        return "apal", (), f.body, False
    if isinstance(f, GroupDia):
        return "group", f.group, f.body, False
    if isinstance(f, CoalDia):
        return "coalition", f.group, f.body, False
    if isinstance(f, ArbBox):
        return "apal", (), Not(f.body), True
    if isinstance(f, GroupBox):
        return "group", f.group, Not(f.body), True
    if isinstance(f, CoalBox):
        return "coalition", f.group, Not(f.body), True
    return None


def cmd_check(args) -> int:
    m, point = _load(args.model)
    f = _formula(args, m)
    ev = QuantifiedEvaluator(m, _cap(args))
    ext = ev.extension(f)
    payload = {"formula": str(f) if len(str(f)) < 2000 else args.formula}
    lines = []
    if args.all_states:
        payload["extension"] = m.labels(ext)
        lines.append("{" + ", ".join(m.labels(ext)) + "}")
    if not args.all_states or args.state is not None or point is not None:
        s = _point(args, m, point)
        verdict = bool(ext >> s & 1)
        payload.update(state=m.states[s], value=verdict)
        lines.insert(0, "true" if verdict else "false")
        if args.formula in ("fmp", "fmp_gal", "fmp_cal"):
            report = check_fmp_suite(PointedModel(m, s), ev.cap)
            variant = {"fmp": "apal", "fmp_gal": "gal", "fmp_cal": "cal"}[args.formula]
            payload["fmp_suite"] = report.to_json()
            for key, value in report.truth[variant].items():
                lines.append(f"  {key}: {str(value).lower()}")
            for w in report.witnesses:
                lines.append(f"  {w.purpose} at {w.state}: kept {{{', '.join(w.kept)}}}")
        elif args.witness:
            parts = _diamond_parts(f)
            if parts is None:
                raise InputError("--witness needs a quantified formula at the top level")
            mode, group, goal, negated = parts
            cert = diamond_witness(PointedModel(m, s), goal, mode, group, evaluator=ev)
            if cert is not None:
                kind = "counter-certificate" if negated else "certificate"
                payload[kind] = {"kept": m.labels(cert.kept), "formula": str(cert.defining_formula)}
                lines.append(f"{kind}: kept {{{', '.join(m.labels(cert.kept))}}}")
                lines.append(f"  announcement: {cert.defining_formula}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_update(args) -> int:
    m, point = _load(args.model)
    f = _formula(args, m)
    kept = QuantifiedEvaluator(m, _cap(args)).extension(f)
    if not kept:
        raise ModelError("announcement is false everywhere; update is undefined")
    new = restrict(m, kept)
    new_point = None
    if point is not None and kept >> point & 1:
        new_point = new.index(m.states[point])
    print(json.dumps(to_json(new, new_point), indent=2))
    return EXIT_OK


def cmd_bisim(args) -> int:
    m, _ = _load(args.model)
    s, t = m.index(args.s), m.index(args.t)
    stages = refinement(m, _vocab(args))
    ids = stages[-1] if args.depth is None or args.depth >= len(stages) else stages[args.depth]
    verdict = ids[s] == ids[t]
    _emit(args, {"s": args.s, "t": args.t, "value": verdict}, "true" if verdict else "false")
    return EXIT_OK


def cmd_quotient(args) -> int:
    m, _ = _load(args.model)
    stages = refinement(m, _vocab(args))
    ids = stages[-1] if args.depth is None or args.depth >= len(stages) else stages[args.depth]
    blocks = [m.labels(b) for b in stage_blocks(ids)]
    text = "\n".join("{" + ", ".join(b) + "}" for b in blocks)
    _emit(args, {"blocks": blocks, "stages": len(stages) - 1}, text)
    return EXIT_OK


def cmd_witness(args) -> int:
    m, point = _load(args.model)
    f = _formula(args, m)
    s = _point(args, m, point)
    mode, group, goal = args.mode, args.group or (), f
    if mode is None:
        parts = _diamond_parts(f)
        if parts is not None and not parts[3]:
            mode, group, goal, _ = parts
        else:
            mode = "apal"
    cert = diamond_witness(PointedModel(m, s), goal, mode, group, _cap(args))
    if cert is None:
        _emit(args, {"state": m.states[s], "mode": mode, "certificate": None}, "none")
        return EXIT_OK
    payload = {
        "state": m.states[s],
        "mode": mode,
        "certificate": {"kept": m.labels(cert.kept), "formula": str(cert.defining_formula)},
    }
    text = f"kept {{{', '.join(m.labels(cert.kept))}}}\nannouncement: {cert.defining_formula}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_repro(args) -> int:
    cap = args.cap
    name, rest = args.bundle, args.params
    try:
        if name == "example1" and not rest:
            report = example1(cap)
        elif name == "fig2" and not rest:
            report = fig2(cap)
        elif name == "truncation" and len(rest) == 1:
            report = truncation_bundle(int(rest[0]), cap)
        elif name == "random-sweep" and len(rest) == 2:
            report = random_sweep(int(rest[0]), int(rest[1]), args.seed, cap)
        else:
            raise InputError(
                "usage: qpal repro example1 | fig2 | truncation N | random-sweep K N"
            )
    except ValueError as e:
        if isinstance(e, ModelError):
            raise
        raise InputError(f"bad repro parameter: {e}") from None
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.table())
    return EXIT_OK if report.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpal", description="Model checker for quantified public announcement logics")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formula=False):
        sp.add_argument("--cap", type=int, default=None, help="maximum bisimulation blocks to enumerate")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if formula:
            sp.add_argument("model", help="JSON model file")
            sp.add_argument("text", nargs="?", help="formula text")
            sp.add_argument("--formula", help="built-in formula name (fmp, root, stem, tier, fmp_gal, fmp_cal, stem_witness I) or formula text")
            sp.add_argument("--state", help="state label (defaults to the model's point)")

    sp = sub.add_parser("check", help="evaluate a formula")
    common(sp, formula=True)
    sp.add_argument("--witness", action="store_true", help="print a certificate for a top-level quantifier")
    sp.add_argument("--all-states", action="store_true", help="print the extension")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("update", help="announce a formula and print the updated model")
    common(sp, formula=True)
    sp.set_defaults(func=cmd_update)

    sp = sub.add_parser("witness", help="find an announcement achieving a goal")
    common(sp, formula=True)
    sp.add_argument("--mode", choices=["apal", "group", "coalition"])
    sp.add_argument("--group", help="comma-separated agents for group/coalition mode")
    sp.set_defaults(func=cmd_witness)

    for name, func, helptext in (("bisim", cmd_bisim, "bisimilarity of two states"),):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("model")
        sp.add_argument("s")
        sp.add_argument("t")
        sp.add_argument("--vocab", help="comma-separated atoms (default: vocabulary)")
        sp.add_argument("--depth", type=int, help="bounded bisimulation depth")
        sp.set_defaults(func=func)

    sp = sub.add_parser("quotient", help="bisimulation classes")
    common(sp)
    sp.add_argument("model")
    sp.add_argument("--vocab", help="comma-separated atoms (default: vocabulary)")
    sp.add_argument("--depth", type=int, help="refinement stage")
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("repro", help="reproduce the finite-model claims")
    common(sp)
    sp.add_argument("bundle", choices=["example1", "fig2", "truncation", "random-sweep"])
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_repro)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as e:
        print(f"qpal: {e}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, ParseError, ModelError) as e:
        print(f"qpal: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
