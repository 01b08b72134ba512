"""Named formulas: the root/stem/tier construction and its variants.

``fmp`` is satisfiable only in infinite models.  ``root`` holds where there is
a single a-reachable tier-1 world up to bisimulation, ``stem`` where there are
several.  Atom ``x`` labels the tiers; agents are ``a`` and ``b``.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Tuple

from .formula import (
    And,
    Announce,
    ArbBox,
    ArbDia,
    Atom,
    Bot,
    CoalBox,
    CoalDia,
    DiaAnnounce,
    Formula,
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
    group,
)

x = Atom("x")
nx = Not(x)

root = ArbBox(Imp(M("a", And(nx, K("b", nx))), K("a", Imp(nx, K("b", nx)))))
stem = ArbDia(And(M("a", And(nx, K("b", nx))), M("a", And(nx, M("b", x)))))
tier = K("b", And(And(x, M("a", nx)), K("a", Imp(nx, M("b", x)))))

conjunct1 = And(And(tier, M("b", root)), M("b", stem))
conjunct2 = K("b", Imp(stem, ArbDia(And(tier, K("b", stem)))))
conjunct3 = K("b", Imp(root, ArbBox(Imp(tier, M("b", stem)))))

fmp = And(And(conjunct1, conjunct2), conjunct3)

FMP_AGENTS = ("a", "b")


def p(i: int) -> Atom:
    return Atom(f"p{i}")


def stem_witness(i: int) -> Formula:
    """Announcement that isolates the stem world ``s_i`` of a truncation model."""
    return M("a", M("b", p(2 * i)))


def refuting_announcement(j: int = 4) -> Formula:
    """``K_a(~x -> K_b(x -> K_a ~p_j))``: keeps the root world, drops every stem world."""
    return K("a", Imp(nx, K("b", Imp(x, K("a", Not(p(j)))))))


def substitute_quantifiers(
    f: Formula,
    box: Callable[[Formula], Formula],
    dia: Callable[[Formula], Formula],
) -> Formula:
    """Replace every arbitrary box/diamond by ``box(body)`` / ``dia(body)``."""
    sub = lambda g: substitute_quantifiers(g, box, dia)  # noqa: E731
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(sub(f.body))
    if isinstance(f, (And, Or, Imp)):
        return type(f)(sub(f.left), sub(f.right))
    if isinstance(f, (Know, MaybeKnow)):
        return type(f)(f.agent, sub(f.body))
    if isinstance(f, (Announce, DiaAnnounce)):
        return type(f)(sub(f.announcement), sub(f.body))
    if isinstance(f, ArbBox):
        return box(sub(f.body))
    if isinstance(f, ArbDia):
        return dia(sub(f.body))
    return type(f)(f.group, sub(f.body))


def to_gal(f: Formula, agents: Iterable[str] = FMP_AGENTS) -> Formula:
    g = group(agents)
    return substitute_quantifiers(f, lambda b: GroupBox(g, b), lambda b: GroupDia(g, b))


def to_cal(f: Formula, agents: Iterable[str] = FMP_AGENTS) -> Formula:
    g = group(agents)
    return substitute_quantifiers(f, lambda b: CoalBox(g, b), lambda b: CoalDia(g, b))


def fmp_gal(agents: Iterable[str] = FMP_AGENTS) -> Formula:
    return to_gal(fmp, agents)


def fmp_cal(agents: Iterable[str] = FMP_AGENTS) -> Formula:
    return to_cal(fmp, agents)


def fmp_conjuncts(variant: str = "apal", agents: Iterable[str] = FMP_AGENTS) -> Tuple[Formula, ...]:
    parts = (conjunct1, conjunct2, conjunct3)
    if variant == "gal":
        return tuple(to_gal(c, agents) for c in parts)
    if variant == "cal":
        return tuple(to_cal(c, agents) for c in parts)
    if variant != "apal":
        raise ValueError(f"unknown variant {variant!r}")
    return parts


# Example with four worlds s0, s1, t0, t1.
example1_goal = And(M("a", K("b", Atom("p"))), M("a", M("b", Not(Atom("p")))))
example1_psi = Imp(Not(Atom("p")), Not(Atom("q")))
example1_psi_a = K("a", Atom("p"))
example1_goal_b = And(K("b", Atom("q")), Not(K("a", Atom("q"))))

NAMES = ("fmp", "root", "stem", "tier", "fmp_gal", "fmp_cal", "stem_witness <i>")

_STEM_WITNESS = re.compile(r"^stem_witness[\s_:(]*(\d+)\)?$")


def named(name: str, agents: Iterable[str] = FMP_AGENTS) -> Formula:
    """Look up a built-in formula by name.  Raises ``KeyError`` if unknown."""
    name = name.strip()
    table = {
        "fmp": fmp,
        "root": root,
        "stem": stem,
        "tier": tier,
        "conjunct1": conjunct1,
        "conjunct2": conjunct2,
        "conjunct3": conjunct3,
    }
    if name in table:
        return table[name]
    if name == "fmp_gal":
        return fmp_gal(agents)
    if name == "fmp_cal":
        return fmp_cal(agents)
    m = _STEM_WITNESS.match(name)
    if m:
        return stem_witness(int(m.group(1)))
    raise KeyError(name)
