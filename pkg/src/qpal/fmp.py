"""Conjunct-by-conjunct evaluation of the fmp formula and its group/coalition variants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import library as L
from .formula import And, ArbBox, Formula, Imp, K, M, Not
from .model import PointedModel, bits
from .quantified import Certificate, QuantifiedEvaluator, diamond_witness

VARIANTS = ("apal", "gal", "cal")

# goals of the diamonds inside conjuncts 2 and 3
STEM_GOAL = And(L.tier, K("b", L.stem))
REFUTING_GOAL = And(L.tier, K("b", Not(L.stem)))


@dataclass
class Witness:
    """A certificate attached to one b-accessible state."""

    purpose: str
    state: str
    certificate: Optional[Certificate]
    kept: List[str] = field(default_factory=list)


@dataclass
class FmpReport:
    point: str
    truth: Dict[str, Dict[str, bool]]
    witnesses: List[Witness]
    root_states: List[str]
    stem_states: List[str]

    @property
    def fmp(self) -> bool:
        return self.truth["apal"]["fmp"]

    def to_json(self) -> dict:
        return {
            "point": self.point,
            "truth": self.truth,
            "root_states": self.root_states,
            "stem_states": self.stem_states,
            "witnesses": [
                {
                    "purpose": w.purpose,
                    "state": w.state,
                    "kept": w.kept,
                    "formula": str(w.certificate.defining_formula) if w.certificate else None,
                }
                for w in self.witnesses
            ],
        }


def fmp_parts(variant: str, agents: Tuple[str, ...]) -> Dict[str, Formula]:
    c1, c2, c3 = L.fmp_conjuncts(variant, agents)
    return {"conjunct1": c1, "conjunct2": c2, "conjunct3": c3, "fmp": And(And(c1, c2), c3)}


def check_fmp_suite(pm: PointedModel, cap: Optional[int] = None, certificates: bool = True) -> FmpReport:
    """Truth of each fmp conjunct (all three variants) at the point.

    With ``certificates``, every b-accessible stem state gets the announcement
    that satisfies conjunct 2 locally, and every b-accessible root state where
    conjunct 3 fails gets the announcement refuting it.
    """
    m, point = pm
    agents = tuple(m.agents)
    ev = QuantifiedEvaluator(m, cap)
    truth = {}
    for variant in VARIANTS:
        truth[variant] = {
            name: bool(ev.extension(f) >> point & 1) for name, f in fmp_parts(variant, agents).items()
        }
    root = ev.extension(L.root)
    stem = ev.extension(L.stem)
    witnesses = []
    if certificates and "b" in m.relations:
        never = ev.extension(ArbBox(Imp(L.tier, M("b", L.stem))))
        for s in bits(m.classes("b")[point]):
            if stem >> s & 1:
                purpose, goal = "conjunct2: stem world reaches tier & K b stem", STEM_GOAL
            elif root >> s & 1 and not never >> s & 1:
                purpose, goal = "conjunct3 refuted: root world reaches tier & K b ~stem", REFUTING_GOAL
            else:
                continue
            cert = diamond_witness(PointedModel(m, s), goal, evaluator=ev)
            witnesses.append(Witness(purpose, m.states[s], cert, m.labels(cert.kept) if cert else []))
    return FmpReport(m.states[point], truth, witnesses, m.labels(root), m.labels(stem))
