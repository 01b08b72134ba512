"""Abstract syntax for quantified public announcement formulas.

Primitive constructors cover atoms, booleans, knowledge, public announcements
and the three announcement quantifiers (arbitrary, group, coalition).  The
dual forms are kept as their own node types so that parsing and printing are
faithful; :func:`expand` rewrites them into negations of the primitives.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, NamedTuple, Set, Union


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Imp(self, other)

    def __str__(self) -> str:
        from .syntax import render

        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class Announce(Formula):
    announcement: Formula
    body: Formula


@dataclass(frozen=True)
class ArbBox(Formula):
    body: Formula


@dataclass(frozen=True)
class GroupBox(Formula):
    group: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "group", group(self.group))


@dataclass(frozen=True)
class CoalBox(Formula):
    group: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "group", group(self.group))


# Derived (dual) constructors.


@dataclass(frozen=True)
class MaybeKnow(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class DiaAnnounce(Formula):
    announcement: Formula
    body: Formula


@dataclass(frozen=True)
class ArbDia(Formula):
    body: Formula


@dataclass(frozen=True)
class GroupDia(Formula):
    group: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "group", group(self.group))


@dataclass(frozen=True)
class CoalDia(Formula):
    group: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "group", group(self.group))


TRUE = Top()
FALSE = Bot()

QUANTIFIERS = (ArbBox, GroupBox, CoalBox, ArbDia, GroupDia, CoalDia)
DUALS = (MaybeKnow, DiaAnnounce, ArbDia, GroupDia, CoalDia)

GroupLike = Union[Iterable[str], str]


def group(agents: GroupLike) -> FrozenSet[str]:
    if isinstance(agents, str):
        agents = [a for a in agents.split(",") if a]
    return frozenset(agents)


def atom(name: str) -> Atom:
    return Atom(name)


def K(agent: str, body: Formula) -> Know:
    return Know(agent, body)


def M(agent: str, body: Formula) -> MaybeKnow:
    return MaybeKnow(agent, body)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    result = None
    for part in parts:
        result = part if result is None else And(result, part)
    return TRUE if result is None else result


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``false``."""
    result = None
    for part in parts:
        result = part if result is None else Or(result, part)
    return FALSE if result is None else result


def children(f: Formula) -> tuple:
    if isinstance(f, (Atom, Top, Bot)):
        return ()
    if isinstance(f, (And, Or, Imp)):
        return (f.left, f.right)
    if isinstance(f, (Announce, DiaAnnounce)):
        return (f.announcement, f.body)
    return (f.body,)


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(children(g))


def expand_dual(f: Formula) -> Formula:
    """Rewrite one derived node into its primitive definition (top level only)."""
    if isinstance(f, MaybeKnow):
        return Not(Know(f.agent, Not(f.body)))
    if isinstance(f, DiaAnnounce):
        return Not(Announce(f.announcement, Not(f.body)))
    if isinstance(f, ArbDia):
        return Not(ArbBox(Not(f.body)))
    if isinstance(f, GroupDia):
        return Not(GroupBox(f.group, Not(f.body)))
    if isinstance(f, CoalDia):
        return Not(CoalBox(f.group, Not(f.body)))
    return f


def expand(f: Formula) -> Formula:
    """Expand every derived constructor, recursively."""
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Not):
        return Not(expand(f.body))
    if isinstance(f, (And, Or, Imp)):
        return type(f)(expand(f.left), expand(f.right))
    if isinstance(f, (Know, MaybeKnow)):
        return expand_dual(type(f)(f.agent, expand(f.body)))
    if isinstance(f, (Announce, DiaAnnounce)):
        return expand_dual(type(f)(expand(f.announcement), expand(f.body)))
    if isinstance(f, (ArbBox, ArbDia)):
        return expand_dual(type(f)(expand(f.body)))
    if isinstance(f, (GroupBox, CoalBox, GroupDia, CoalDia)):
        return expand_dual(type(f)(f.group, expand(f.body)))
    raise TypeError(f"not a formula: {f!r}")


class Measures(NamedTuple):
    vars: FrozenSet[str]
    d: int
    D: int


def measures(f: Formula) -> Measures:
    """Atoms, modal depth and quantifier depth.

    Announcements add modal depth: ``d([a]b) = d(a) + d(b)``.
    Duals measure like their expansions, so they are handled in place.
    """
    if isinstance(f, Atom):
        return Measures(frozenset([f.name]), 0, 0)
    if isinstance(f, (Top, Bot)):
        return Measures(frozenset(), 0, 0)
    if isinstance(f, Not):
        return measures(f.body)
    if isinstance(f, (And, Or, Imp)):
        l, r = measures(f.left), measures(f.right)
        return Measures(l.vars | r.vars, max(l.d, r.d), max(l.D, r.D))
    if isinstance(f, (Know, MaybeKnow)):
        b = measures(f.body)
        return Measures(b.vars, b.d + 1, b.D)
    if isinstance(f, (Announce, DiaAnnounce)):
        l, r = measures(f.announcement), measures(f.body)
        return Measures(l.vars | r.vars, l.d + r.d, max(l.D, r.D))
    if isinstance(f, QUANTIFIERS):
        b = measures(f.body)
        return Measures(b.vars, b.d, b.D + 1)
    raise TypeError(f"not a formula: {f!r}")


def atoms(f: Formula) -> Set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def agents_of(f: Formula) -> Set[str]:
    out: Set[str] = set()
    for g in subformulas(f):
        if isinstance(g, (Know, MaybeKnow)):
            out.add(g.agent)
        elif isinstance(g, (GroupBox, CoalBox, GroupDia, CoalDia)):
            out |= g.group
    return out


def is_quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, QUANTIFIERS) for g in subformulas(f))


def is_epistemic(f: Formula) -> bool:
    """Membership in the announcement-free, quantifier-free fragment."""
    return not any(
        isinstance(g, QUANTIFIERS + (Announce, DiaAnnounce)) for g in subformulas(f)
    )


def _conjuncts(f: Formula) -> list:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def is_group_announcement(f: Formula, agents: GroupLike) -> bool:
    """True iff ``f`` has the shape ``K_i f_i & ... `` with one conjunct per agent.

    Every body must be epistemic.  For the empty group only ``true`` qualifies.
    """
    g = group(agents)
    if not g:
        return f == TRUE
    seen = set()
    for c in _conjuncts(f):
        if not isinstance(c, Know) or c.agent not in g or c.agent in seen:
            return False
        if not is_epistemic(c.body):
            return False
        seen.add(c.agent)
    return seen == g
