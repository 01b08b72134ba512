"""Claim bundles that re-derive the finite-model facts about the fmp formula.

Each bundle is a list of claims with an expected truth value; the report
records what the checker computed, an optional certificate and the time taken.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import library as L
from .bisimulation import bisimilar, closed_sets
from .fmp import REFUTING_GOAL, STEM_GOAL, fmp_parts
from .formula import DiaAnnounce, Formula
from .generate import ModelConfig, random_model
from .model import Model, PointedModel, example1_model, truncation
from .quantified import Certificate, QuantifiedEvaluator, diamond_witness, group_extensions


@dataclass
class Claim:
    id: str
    description: str
    expected: bool
    computed: bool
    certificate: Optional[dict] = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.passed,
            "certificate": self.certificate,
            "elapsed": round(self.elapsed, 4),
        }


@dataclass
class ReproReport:
    name: str
    claims: List[Claim] = field(default_factory=list)
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.claims)

    def claim(self, id: str, description: str, expected: bool, compute: Callable[[], object]) -> Claim:
        """Run ``compute`` (a bool, or a ``(bool, certificate)`` pair) and record it."""
        t0 = time.perf_counter()
        result = compute()
        elapsed = time.perf_counter() - t0
        cert = None
        if isinstance(result, tuple):
            result, cert = result
        c = Claim(id, description, expected, bool(result), cert, elapsed)
        self.claims.append(c)
        return c

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "claims": [c.to_json() for c in self.claims],
            "diagnostics": self.diagnostics,
        }

    def table(self) -> str:
        width = max([len(c.id) for c in self.claims] + [5])
        lines = [f"{'claim':<{width}}  expected  computed  status  seconds"]
        for c in self.claims:
            status = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{c.id:<{width}}  {str(c.expected):<8}  {str(c.computed):<8}  {status:<6}  {c.elapsed:7.3f}"
            )
            if c.certificate:
                lines.append(f"{'':<{width}}    kept: {{{', '.join(c.certificate['kept'])}}}")
        for key, value in self.diagnostics.items():
            lines.append(f"diagnostic {key}: {value}")
        verdict = "all claims pass" if self.ok else "MISMATCH"
        lines.append(f"{self.name}: {sum(c.passed for c in self.claims)}/{len(self.claims)} {verdict}")
        return "\n".join(lines)


def _cert_json(m: Model, cert: Optional[Certificate], render_formula: bool = True) -> Optional[dict]:
    if cert is None:
        return None
    out = {"kept": m.labels(cert.kept), "mode": cert.mode}
    if render_formula:
        out["formula"] = str(cert.defining_formula)
    return out


def _holds(ev: QuantifiedEvaluator, f: Formula, s: int) -> bool:
    return bool(ev.extension(f) >> s & 1)


def example1(cap: Optional[int] = None) -> ReproReport:
    pm = example1_model()
    m, s0 = pm
    ev = QuantifiedEvaluator(m, cap)
    r = ReproReport("example1")
    goal, goal_b = L.example1_goal, L.example1_goal_b

    def with_cert(f, mode, group=()):
        def run():
            cert = diamond_witness(pm, f, mode, group, evaluator=ev)
            return cert is not None, _cert_json(m, cert)
        return run

    r.claim("dia-goal", "dia (M a K b p & M a M b ~p) at s0", True, with_cert(goal, "apal"))
    r.claim("group-a-goal", "<{a}>(M a K b p & M a M b ~p) at s0", False, with_cert(goal, "group", "a"))
    r.claim("group-a-kbq", "<{a}>(K b q & ~K a q) at s0", True, with_cert(goal_b, "group", "a"))
    r.claim("coalition-a-kbq", "<[{a}]>(K b q & ~K a q) at s0", False, with_cert(goal_b, "coalition", "a"))
    return r


def truncation_bundle(N: int, cap: Optional[int] = None, name: Optional[str] = None) -> ReproReport:
    """Claims about the finite truncation with stem worlds ``s1..sN``."""
    pm = truncation(N)
    m, s0 = pm
    ev = QuantifiedEvaluator(m, cap)
    r = ReproReport(name or f"truncation {N}")
    agents = tuple(m.agents)
    s = [m.index(f"s{i}") for i in range(N + 1)]

    r.claim("root@s0", "root holds at s0", True, lambda: _holds(ev, L.root, s0))
    for i in range(1, N + 1):
        r.claim(f"stem@s{i}", f"stem holds at s{i}", True, lambda i=i: _holds(ev, L.stem, s[i]))
    r.claim(
        "stem=~root",
        "extension of stem is the complement of extension of root",
        True,
        lambda: ev.extension(L.stem) == m.full & ~ev.extension(L.root),
    )
    for variant in ("apal", "gal", "cal"):
        parts = fmp_parts(variant, agents)
        suffix = "" if variant == "apal" else f"[{variant}]"
        expected = {"conjunct1": True, "conjunct2": True, "conjunct3": False, "fmp": False}
        for key, f in parts.items():
            r.claim(f"{key}{suffix}@s0", f"{key} ({variant}) at s0", expected[key], lambda f=f: _holds(ev, f, s0))

    for i in range(1, N + 1):
        ann = L.stem_witness(i)

        def run(i=i, ann=ann):
            ok = _holds(ev, DiaAnnounce(ann, STEM_GOAL), s[i])
            kept = ev.extension(ann)
            return ok, {"kept": m.labels(kept), "formula": str(ann)}

        r.claim(f"stem-witness-{i}", f"<M a M b p{2 * i}>(tier & K b stem) at s{i}", True, run)

    refute = L.refuting_announcement(2 * N)

    def run_refute():
        ok = _holds(ev, DiaAnnounce(refute, REFUTING_GOAL), s0)
        return ok, {"kept": m.labels(ev.extension(refute)), "formula": str(refute)}

    r.claim("refuting-announcement", f"<{refute}>(tier & K b ~stem) at s0", True, run_refute)

    def run_counter():
        cert = diamond_witness(PointedModel(m, s0), REFUTING_GOAL, evaluator=ev)
        return cert is not None, _cert_json(m, cert, render_formula=False)

    r.claim("conjunct3-counter-certificate", "dia (tier & K b ~stem) at s0, smallest witness", True, run_counter)

    r.claim(
        "a-and-b-meet-in-identity",
        "intersection of the a- and b-relations is the identity",
        True,
        lambda: all(
            m.classes("a")[t] & m.classes("b")[t] == 1 << t for t in range(m.n)
        ),
    )
    if N >= 2:
        Q = ("x", "p1")
        r.claim("bisim-s0-s1", "s0 and s1 are {x,p1}-bisimilar", False, lambda: bisimilar(pm, PointedModel(m, s[1]), Q))
        for i in range(2, N + 1):
            r.claim(
                f"bisim-s0-s{i}",
                f"s0 and s{i} are {{x,p1}}-bisimilar",
                True,
                lambda i=i: bisimilar(pm, PointedModel(m, s[i]), Q),
            )

    fam = group_extensions(m, agents, cap)
    closed = set(closed_sets(m, cap=ev.cap)) | {0}
    r.diagnostics["grand_coalition_family_size"] = len(fam)
    r.diagnostics["closed_family_size"] = len(closed)
    r.diagnostics["grand_coalition_family_equals_closed_family"] = fam.sets == closed
    return r


def fig2(cap: Optional[int] = None) -> ReproReport:
    return truncation_bundle(2, cap, name="fig2")


def random_sweep(k: int, n: int, seed: int = 0, cap: Optional[int] = None) -> ReproReport:
    """fmp and its variants at every state of ``k`` random models with at most ``n`` states."""
    rng = random.Random(seed)
    cfg = ModelConfig(max_states=n, atoms=("x", "y", "z"))
    r = ReproReport(f"random-sweep {k} {n}")
    variants = {"fmp": L.fmp, "fmp_gal": L.fmp_gal(), "fmp_cal": L.fmp_cal()}
    for i in range(k):
        m = random_model(rng, cfg)

        def run(m=m):
            ev = QuantifiedEvaluator(m, cap)
            return any(ev.extension(f) for f in variants.values())

        r.claim(f"model-{i}", f"some state of random model {i} ({m.n} states) satisfies fmp/fmp_gal/fmp_cal", False, run)
    return r


BUNDLES = ("example1", "fig2", "truncation", "random-sweep")
