"""Bisimulation quotients, bounded bisimilarity and characteristic formulas.

Refinement starts from the partition induced by the atoms in ``Q`` and splits
blocks by the set of blocks each agent's class reaches.  Stage ``k`` of the
refinement is exactly ``Q``-``k``-bisimilarity; the fixpoint is ``Q``-bisimilarity.
"""

from __future__ import annotations

from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .formula import Atom, Formula, Not, FALSE, TRUE, K, M, conj, disj
from .model import Model, ModelError, Partition, PointedModel, bits, mask_of

DEFAULT_CAP = 24


class CapExceeded(RuntimeError):
    """Too many quotient blocks to enumerate closed sets exhaustively."""

    def __init__(self, blocks: int, cap: int, depth: int = 0):
        self.blocks = blocks
        self.cap = cap
        self.depth = depth
        super().__init__(
            f"{blocks} bisimulation blocks exceed the cap of {cap} (quantifier nesting depth {depth})"
        )


def _vocab(m: Model, Q: Optional[Iterable[str]]) -> Tuple[str, ...]:
    return tuple(sorted(m.vocabulary if Q is None else set(Q)))


def refinement(m: Model, Q: Optional[Iterable[str]] = None, mask: Optional[int] = None) -> List[List[int]]:
    """Block ids per state for every refinement stage, ending at the fixpoint.

    Works inside the submodel ``mask`` (classes are cut down to it); entries for
    states outside the mask are ``-1``.  ``Q`` defaults to the vocabulary.
    """
    if mask is None:
        mask = m.full
    vals = [m.val(p) for p in _vocab(m, Q)]
    states = list(bits(mask))
    ids = [-1] * m.n
    keys: Dict[tuple, int] = {}
    for s in states:
        ids[s] = keys.setdefault(tuple(v >> s & 1 for v in vals), len(keys))
    stages = [ids]
    count = len(keys)
    class_lists = [
        [b & mask for b in m.relations[a].blocks if b & mask] for a in m.agents
    ]
    while True:
        sig: Dict[int, list] = {s: [ids[s]] for s in states}
        for blocks in class_lists:
            for b in blocks:
                reach = frozenset(ids[t] for t in bits(b))
                for s in bits(b):
                    sig[s].append(reach)
        keys = {}
        new = [-1] * m.n
        for s in states:
            new[s] = keys.setdefault(tuple(sig[s]), len(keys))
        if len(keys) == count:
            return stages
        stages.append(new)
        ids, count = new, len(keys)


def stage_blocks(ids: Sequence[int]) -> Tuple[int, ...]:
    groups: Dict[int, int] = {}
    for s, k in enumerate(ids):
        if k >= 0:
            groups[k] = groups.get(k, 0) | 1 << s
    return tuple(groups[k] for k in sorted(groups))


def quotient_blocks(m: Model, Q: Optional[Iterable[str]] = None, mask: Optional[int] = None) -> Tuple[int, ...]:
    """Blocks of the coarsest ``Q``-bisimulation of the submodel ``mask``."""
    return stage_blocks(refinement(m, Q, mask)[-1])


def quotient(m: Model, Q: Optional[Iterable[str]] = None) -> Partition:
    """Coarsest ``Q``-bisimulation partition of ``m``."""
    return Partition(quotient_blocks(m, Q), m.n)


def stage_partitions(m: Model, Q: Optional[Iterable[str]] = None) -> List[Partition]:
    """Partition for each refinement stage 0..fixpoint."""
    return [Partition(stage_blocks(ids), m.n) for ids in refinement(m, Q)]


def disjoint_union(m1: Model, m2: Model) -> Tuple[Model, int]:
    """Disjoint union; states of ``m2`` are shifted by the returned offset."""
    if set(m1.agents) != set(m2.agents):
        raise ModelError("bisimilarity needs models over the same agents")
    off = m1.n
    states = tuple(f"1:{s}" for s in m1.states) + tuple(f"2:{s}" for s in m2.states)
    n = len(states)
    rels = {
        a: Partition(m1.relations[a].blocks + tuple(b << off for b in m2.relations[a].blocks), n)
        for a in m1.agents
    }
    val = {p: m1.val(p) | m2.val(p) << off for p in set(m1.valuation) | set(m2.valuation)}
    return Model(states, m1.agents, rels, val, m1.vocabulary | m2.vocabulary), off


def bisimilar(
    pm1: PointedModel,
    pm2: PointedModel,
    Q: Optional[Iterable[str]] = None,
    n: Optional[int] = None,
) -> bool:
    """``Q``-bisimilarity (``n=None``) or ``Q``-``n``-bisimilarity of two pointed models.

    ``Q`` defaults to the union of both vocabularies.
    """
    if pm1.model is pm2.model:
        union, off = pm1.model, 0
    else:
        union, off = disjoint_union(pm1.model, pm2.model)
    stages = refinement(union, Q)
    ids = stages[-1] if n is None or n >= len(stages) else stages[n]
    return ids[pm1.point] == ids[pm2.point + off]


def closed_sets(m: Model, Q: Optional[Iterable[str]] = None, cap: int = DEFAULT_CAP) -> Iterator[int]:
    """Every nonempty union of quotient blocks, once each, in Gray-code order."""
    blocks = quotient_blocks(m, Q)
    if len(blocks) > cap:
        raise CapExceeded(len(blocks), cap)
    return gray_unions(blocks)


def gray_unions(blocks: Sequence[int]) -> Iterator[int]:
    cur = 0
    for i in range(1, 1 << len(blocks)):
        cur ^= blocks[(i & -i).bit_length() - 1]
        yield cur


def _literals(Q: Sequence[str], m: Model, s: int) -> Formula:
    return conj(Atom(p) if m.val(p) >> s & 1 else Not(Atom(p)) for p in Q)


def characteristic_formula(m: Model, x: int, Q: Optional[Iterable[str]] = None) -> Formula:
    """An epistemic formula over ``Q`` whose extension in ``m`` is exactly ``x``.

    ``x`` must be a union of ``Q``-bisimulation blocks.  The per-block formulas
    are refined once per refinement stage, so the modal depth equals the number
    of stages needed to stabilise.  Subformulas are shared, not copied.
    """
    Qs = _vocab(m, Q)
    stages = refinement(m, Qs)
    final = Partition(stage_blocks(stages[-1]), m.n)
    if not final.closed(x):
        raise ModelError("set is not closed under bisimulation")
    if x == m.full:
        return TRUE
    if x == 0:
        return FALSE
    reps = {}
    for s, k in enumerate(stages[0]):
        reps.setdefault(k, s)
    chi = {k: _literals(Qs, m, s) for k, s in reps.items()}
    for prev, ids in zip(stages, stages[1:]):
        nxt = {}
        for s, k in enumerate(ids):
            if k in nxt:
                continue
            parts = [chi[prev[s]]]
            for a in m.agents:
                reach = sorted({prev[t] for t in bits(m.classes(a)[s])})
                parts.extend(M(a, chi[j]) for j in reach)
                parts.append(K(a, disj(chi[j] for j in reach)))
            nxt[k] = conj(parts)
        chi = nxt
    ids = stages[-1]
    chosen = sorted({ids[s] for s in bits(x)})
    return disj(chi[k] for k in chosen)


def quotient_model(m: Model, Q: Optional[Iterable[str]] = None) -> Tuple[Model, List[int]]:
    """One state per bisimulation block, and the block index of each original state."""
    part = quotient(m, Q)
    k = len(part)
    index = list(part.block_index)
    labels = tuple("+".join(m.labels(b)) for b in part.blocks)
    rels = {}
    for a in m.agents:
        parent = list(range(k))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for cls in m.relations[a].blocks:
            touched = [index[s] for s in bits(cls)]
            for j in touched[1:]:
                parent[find(j)] = find(touched[0])
        groups: Dict[int, int] = {}
        for i in range(k):
            groups[find(i)] = groups.get(find(i), 0) | 1 << i
        rels[a] = Partition(tuple(groups.values()), k)
    reps = [next(bits(b)) for b in part.blocks]
    val = {}
    for p, v in m.valuation.items():
        val[p] = mask_of(i for i, s in enumerate(reps) if v >> s & 1)
    return Model(labels, m.agents, rels, val, m.vocabulary), index
