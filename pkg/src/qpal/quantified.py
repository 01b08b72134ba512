"""Exact model checking of the full language on finite models.

An epistemic announcement acts on a finite model only through its extension,
and the sets definable by epistemic formulas are exactly the unions of
bisimulation blocks.  So ``box f`` is decided by enumerating closed sets, and
the group/coalition quantifiers by enumerating intersections of per-agent
kernels of closed sets.  Undeclared atoms are false everywhere and define
nothing new, so blocks are computed over the declared vocabulary.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .bisimulation import DEFAULT_CAP, CapExceeded, characteristic_formula, gray_unions, quotient_blocks, refinement
from .formula import Formula, K, conj, group as as_group
from .model import Model, ModelError, PointedModel, popcount
from .semantics import BOX, CBOX, GBOX, Evaluator

MODES = ("apal", "group", "coalition")


def default_cap() -> int:
    """Block cap: ``QPAL_CAP`` from the environment, else 24."""
    raw = os.environ.get("QPAL_CAP")
    return int(raw) if raw else DEFAULT_CAP


class QuantifiedEvaluator(Evaluator):
    """Evaluator for the full language.

    Memo tables are keyed by submodel mask in the original indexing, so nested
    quantifiers over overlapping submodels share work.
    """

    def __init__(self, model: Model, cap: Optional[int] = None):
        super().__init__(model)
        self.cap = default_cap() if cap is None else cap
        self._quotients: Dict[int, Tuple[int, ...]] = {}
        self._kernels: Dict[Tuple[str, int], FrozenSet[int]] = {}
        self._families: Dict[Tuple[FrozenSet[str], int], FrozenSet[int]] = {}
        self._depth = 0

    def blocks(self, mask: int) -> Tuple[int, ...]:
        """Bisimulation blocks of the submodel ``mask``, checked against the cap."""
        out = self._quotients.get(mask)
        if out is None:
            out = quotient_blocks(self.model, None, mask)
            self._quotients[mask] = out
        if len(out) > self.cap:
            raise CapExceeded(len(out), self.cap, self._depth)
        return out

    def closed_sets(self, mask: int):
        return gray_unions(self.blocks(mask))

    def _check_group(self, g: FrozenSet[str]) -> None:
        unknown = g - set(self.model.agents)
        if unknown:
            raise ModelError(f"unknown agent(s) {sorted(unknown)} in group")

    def agent_kernels(self, agent: str, mask: int) -> FrozenSet[int]:
        """``{kernel_agent(X) | X closed in mask}``, including the empty set."""
        key = (agent, mask)
        out = self._kernels.get(key)
        if out is None:
            classes = [b & mask for b in self._block_lists[agent] if b & mask]
            ks = {0, mask}
            for x in self.closed_sets(mask):
                k = 0
                for c in classes:
                    if not c & ~x:
                        k |= c
                ks.add(k)
            out = frozenset(ks)
            self._kernels[key] = out
        return out

    def family(self, g: FrozenSet[str], mask: int) -> FrozenSet[int]:
        """Extensions of joint group announcements in the submodel ``mask``."""
        key = (g, mask)
        out = self._families.get(key)
        if out is None:
            fam = {mask}
            for a in sorted(g):
                ks = self.agent_kernels(a, mask)
                fam = {e & k for e in fam for k in ks}
            out = frozenset(fam)
            self._families[key] = out
        return out

    def _quantifier(self, nid: int, node: tuple, mask: int) -> int:
        # Truth at a state only depends on its connected component, so
        # quantifiers are evaluated (and memoized) per component.
        comps = self.components(mask)
        if len(comps) > 1:
            out = 0
            for c in comps:
                out |= self.ext(nid, c)
            return out
        self._depth += 1
        try:
            kind = node[0]
            if kind == BOX:
                return self._box(node[1], self.closed_sets(mask), mask)
            self._check_group(node[1])
            if kind == GBOX:
                return self._box(node[2], self.family(node[1], mask), mask)
            if kind == CBOX:
                return self._coalition_box(node[1], node[2], mask)
            raise AssertionError(node)
        finally:
            self._depth -= 1

    def _box(self, body: int, announcements: Iterable[int], mask: int) -> int:
        table = self.memo[body]
        out = mask
        for y in announcements:
            if not y:
                continue
            e = table.get(y)
            if e is None:
                e = self._eval(body, y)
                table[y] = e
            out &= ~(y & ~e)
        return out

    def _coalition_box(self, g: FrozenSet[str], body: int, mask: int) -> int:
        others = frozenset(self.model.agents) - g
        mine = self.family(g, mask)
        theirs = self.family(others, mask)
        out = mask
        for e in mine:
            if not e:
                continue
            good = 0
            for f in theirs:
                j = e & f
                if j and j & ~good:
                    good |= j & self.ext(body, j)
            out &= ~(e & ~good)
        return out

    def coalition_holds(self, g: FrozenSet[str], body: int, e: int, point: int) -> bool:
        """Whether every counter-announcement to ``e`` keeping ``point`` makes ``body`` true there."""
        others = frozenset(self.model.agents) - g
        for f in self.family(others, self.model.full):
            j = e & f
            if j >> point & 1 and not self.ext(body, j) >> point & 1:
                return False
        return True


def evaluate(m: Model, f: Formula, cap: Optional[int] = None) -> int:
    """Extension of any formula of the full language."""
    return QuantifiedEvaluator(m, cap).extension(f)


def check(pm: PointedModel, f: Formula, cap: Optional[int] = None) -> bool:
    return bool(evaluate(pm.model, f, cap) >> pm.point & 1)


@dataclass(frozen=True)
class GroupExtensionFamily:
    group: FrozenSet[str]
    sets: FrozenSet[int]
    # one witness per member: the closed set each agent's knowledge ranges over
    sources: Dict[int, Tuple[Tuple[str, int], ...]] = field(compare=False, default_factory=dict)

    def __contains__(self, mask: int) -> bool:
        return mask in self.sets

    def __len__(self) -> int:
        return len(self.sets)


def group_extensions(m: Model, g: Iterable[str], cap: Optional[int] = None) -> GroupExtensionFamily:
    """Every extension of a joint announcement ``K_i f_i & ...`` by the agents in ``g``.

    The empty group has only ``true``, whose extension is the whole model.
    """
    g = as_group(g)
    ev = QuantifiedEvaluator(m, cap)
    ev._check_group(g)
    closed = [0] + list(ev.closed_sets(m.full))
    sources: Dict[int, tuple] = {m.full: ()}
    for a in sorted(g):
        per_agent: Dict[int, int] = {}
        for x in closed:
            per_agent.setdefault(ev.kernel(a, x, m.full), x)
        nxt: Dict[int, tuple] = {}
        for e, src in sources.items():
            for k, x in per_agent.items():
                nxt.setdefault(e & k, src + ((a, x),))
        sources = nxt
    return GroupExtensionFamily(g, frozenset(sources), sources)


@dataclass(frozen=True)
class Certificate:
    """A successful announcement: the kept states and an epistemic formula defining them."""

    kept: int
    defining_formula: Formula
    mode: str = "apal"
    group: FrozenSet[str] = frozenset()

    def labels(self, m: Model) -> List[str]:
        return m.labels(self.kept)


def _group_formula(m: Model, parts: Sequence[Tuple[str, int]]) -> Formula:
    return conj(K(a, characteristic_formula(m, x)) for a, x in parts)


def _ordered(sets: Iterable[int], point: int) -> List[int]:
    # smallest announcement first, then by mask
    return sorted((s for s in sets if s >> point & 1), key=lambda s: (popcount(s), s))


def _resolve_mode(mode: str, g) -> Tuple[str, FrozenSet[str]]:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    g = as_group(g or ())
    if mode == "apal" and g:
        raise ValueError("apal mode takes no group")
    return mode, g


def diamond_witness(
    pm: PointedModel,
    psi: Formula,
    mode: str = "apal",
    group: Iterable[str] = (),
    cap: Optional[int] = None,
    evaluator: Optional[QuantifiedEvaluator] = None,
) -> Optional[Certificate]:
    """Find an announcement making ``psi`` true at the point, or ``None``.

    ``mode`` selects the diamond: ``apal`` (any announcement), ``group``
    (a joint announcement by ``group``) or ``coalition`` (a ``group``
    announcement that survives every counter-announcement of the others).
    The returned certificate is re-verified before it is handed out.
    """
    mode, g = _resolve_mode(mode, group)
    m, point = pm
    ev = evaluator or QuantifiedEvaluator(m, cap)
    body = ev.compile(psi)
    if mode == "apal":
        for x in _ordered(ev.closed_sets(m.full), point):
            if ev.ext(body, x) >> point & 1:
                cert = Certificate(x, characteristic_formula(m, x), mode)
                break
        else:
            return None
    else:
        ev._check_group(g)
        fam = group_extensions(m, g, ev.cap)
        for e in _ordered(fam.sets, point):
            ok = (
                ev.ext(body, e) >> point & 1
                if mode == "group"
                else ev.coalition_holds(g, body, e, point)
            )
            if ok:
                cert = Certificate(e, _group_formula(m, fam.sources[e]), mode, g)
                break
        else:
            return None
    if not verify_certificate(pm, psi, cert, evaluator=ev):
        raise AssertionError("certificate failed re-verification")
    return cert


def verify_announcement(
    pm: PointedModel,
    psi: Formula,
    kept: int,
    mode: str = "apal",
    group: Iterable[str] = (),
    cap: Optional[int] = None,
    evaluator: Optional[QuantifiedEvaluator] = None,
) -> bool:
    """Whether announcing a formula with extension ``kept`` is a valid witness for the diamond."""
    mode, g = _resolve_mode(mode, group)
    m, point = pm
    if not kept >> point & 1:
        return False
    ev = evaluator or QuantifiedEvaluator(m, cap)
    body = ev.compile(psi)
    if mode == "apal":
        if not all(b & kept in (0, b) for b in ev.blocks(m.full)):
            return False
        return bool(ev.ext(body, kept) >> point & 1)
    if kept not in ev.family(g, m.full):
        return False
    if mode == "group":
        return bool(ev.ext(body, kept) >> point & 1)
    return ev.coalition_holds(g, body, kept, point)


def verify_certificate(
    pm: PointedModel,
    psi: Formula,
    cert: Certificate,
    cap: Optional[int] = None,
    evaluator: Optional[QuantifiedEvaluator] = None,
) -> bool:
    ev = evaluator or QuantifiedEvaluator(pm.model, cap)
    if ev.extension(cert.defining_formula) != cert.kept:
        return False
    return verify_announcement(pm, psi, cert.kept, cert.mode, cert.group, evaluator=ev)


def find_bisimilar_disagreement(
    pointed: Sequence[Tuple[Model, int, int]],
    formulas: Sequence[Formula],
    n: Optional[int],
    Q: Optional[Iterable[str]] = None,
    cap: Optional[int] = None,
):
    """First ``(model, s, t, formula)`` with ``s``, ``t`` (``Q``-, ``n``-)bisimilar but disagreeing.

    ``pointed`` lists ``(model, s, t)`` pairs to try.  Returns ``None`` if no
    formula separates any bisimilar pair.
    """
    for m, s, t in pointed:
        stages = refinement(m, Q)
        ids = stages[-1] if n is None or n >= len(stages) else stages[n]
        if ids[s] != ids[t]:
            continue
        ev = QuantifiedEvaluator(m, cap)
        for f in formulas:
            e = ev.extension(f)
            if (e >> s & 1) != (e >> t & 1):
                return m, s, t, f
    return None
