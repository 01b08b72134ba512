"""Finite epistemic models.

States are indexed ``0..n-1`` and sets of states are plain ``int`` bitmasks
(bit ``i`` set iff state ``i`` is a member).  Each agent's accessibility
relation is stored as a :class:`Partition`, so it is an equivalence relation
by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

StateSet = int


class ModelError(ValueError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


@dataclass(frozen=True)
class Partition:
    """Disjoint, covering, nonempty blocks over ``n`` states."""

    blocks: Tuple[int, ...]
    n: int

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b == 0:
                raise ModelError("empty block in partition")
            if b & seen:
                raise ModelError("partition blocks overlap")
            seen |= b
        if seen != (1 << self.n) - 1:
            raise ModelError("partition does not cover all states")

    @cached_property
    def block_index(self) -> Tuple[int, ...]:
        index = [0] * self.n
        for k, b in enumerate(self.blocks):
            for s in bits(b):
                index[s] = k
        return tuple(index)

    @cached_property
    def class_of(self) -> Tuple[int, ...]:
        """Mask of the block containing each state."""
        return tuple(self.blocks[k] for k in self.block_index)

    def __len__(self) -> int:
        return len(self.blocks)

    def same_block(self, s: int, t: int) -> bool:
        return self.block_index[s] == self.block_index[t]

    def refines(self, other: Partition) -> bool:
        return all(any(b & ~o == 0 for o in other.blocks) for b in self.blocks)

    def closed(self, mask: int) -> bool:
        """Whether ``mask`` is a union of blocks."""
        return all(b & mask in (0, b) for b in self.blocks)

    @classmethod
    def identity(cls, n: int) -> Partition:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def total(cls, n: int) -> Partition:
        return cls(((1 << n) - 1,), n)


@dataclass(frozen=True, eq=False)
class Model:
    states: Tuple[str, ...]
    agents: Tuple[str, ...]
    relations: Mapping[str, Partition]
    valuation: Mapping[str, int]
    vocabulary: FrozenSet[str] = field(default=frozenset())

    def __post_init__(self):
        if not self.states:
            raise ModelError("a model needs a non-empty set of states")
        if len(set(self.states)) != len(self.states):
            raise ModelError("duplicate state labels")
        if len(set(self.agents)) != len(self.agents):
            raise ModelError("duplicate agents")
        if set(self.relations) != set(self.agents):
            raise ModelError("relations must be given for exactly the declared agents")
        for a, part in self.relations.items():
            if part.n != self.n:
                raise ModelError(f"relation of {a} has the wrong size")
        if not set(self.valuation) <= self.vocabulary:
            raise ModelError("valuation mentions atoms outside the vocabulary")
        for p, v in self.valuation.items():
            if v >> self.n:
                raise ModelError(f"valuation of {p} mentions unknown states")

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.states)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ModelError(f"unknown state {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        return mask_of(self.index(label) for label in labels)

    def labels(self, mask: int) -> List[str]:
        return [self.states[i] for i in bits(mask)]

    def val(self, p: str) -> int:
        """States where ``p`` is true; undeclared atoms are false everywhere."""
        return self.valuation.get(p, 0)

    def classes(self, agent: str) -> Tuple[int, ...]:
        """Per state, the mask of its equivalence class for ``agent``."""
        try:
            return self.relations[agent].class_of
        except KeyError:
            raise ModelError(f"unknown agent {agent!r}") from None

    def atoms_at(self, s: int) -> List[str]:
        return sorted(p for p, v in self.valuation.items() if v >> s & 1)

    def __repr__(self) -> str:
        return f"Model(n={self.n}, agents={list(self.agents)}, vocabulary={sorted(self.vocabulary)})"


class PointedModel(NamedTuple):
    model: Model
    point: int

    @property
    def label(self) -> str:
        return self.model.states[self.point]


def _partition_from_blocks(blocks, idx, n, agent) -> Partition:
    masks = []
    for block in blocks:
        m = 0
        for label in block:
            if label not in idx:
                raise ModelError(f"relation of {agent} mentions unknown state {label!r}")
            if m >> idx[label] & 1:
                raise ModelError(f"relation of {agent} repeats state {label!r}")
            m |= 1 << idx[label]
        masks.append(m)
    try:
        return Partition(tuple(masks), n)
    except ModelError as e:
        raise ModelError(f"relation of {agent}: {e}") from None


def _partition_from_edges(edges, idx, n, agent) -> Partition:
    succ = [0] * n
    for s, t in edges:
        for label in (s, t):
            if label not in idx:
                raise ModelError(f"relation of {agent} mentions unknown state {label!r}")
        succ[idx[s]] |= 1 << idx[t]
    for i in range(n):
        if not succ[i] >> i & 1:
            raise ModelError(f"relation of {agent} is not reflexive")
        for j in bits(succ[i]):
            if not succ[j] >> i & 1:
                raise ModelError(f"relation of {agent} is not symmetric")
            if succ[j] & ~succ[i]:
                raise ModelError(f"relation of {agent} is not transitive")
    return Partition(tuple(sorted(set(succ), key=lambda b: b & -b)), n)


def build(
    states: Sequence[str],
    agents: Sequence[str],
    relations: Optional[Mapping[str, Sequence[Sequence[str]]]] = None,
    valuation: Optional[Mapping[str, Iterable[str]]] = None,
    *,
    edges: Optional[Mapping[str, Iterable[Tuple[str, str]]]] = None,
    vocabulary: Iterable[str] = (),
) -> Model:
    """Build a model from state labels.

    ``relations`` maps agents to partitions (lists of blocks of labels);
    ``edges`` maps agents to pair lists, which must already be equivalence
    relations.  Agents given neither get the identity relation.
    """
    states = tuple(states)
    if not states:
        raise ModelError("a model needs a non-empty set of states")
    if len(set(states)) != len(states):
        raise ModelError("duplicate state labels")
    idx = {label: i for i, label in enumerate(states)}
    n = len(states)
    relations = dict(relations or {})
    edges = dict(edges or {})
    unknown = (set(relations) | set(edges)) - set(agents)
    if unknown:
        raise ModelError(f"relations given for undeclared agents {sorted(unknown)}")
    rels = {}
    for a in agents:
        if a in relations and a in edges:
            raise ModelError(f"agent {a} given both a partition and an edge list")
        if a in relations:
            rels[a] = _partition_from_blocks(relations[a], idx, n, a)
        elif a in edges:
            rels[a] = _partition_from_edges(edges[a], idx, n, a)
        else:
            rels[a] = Partition.identity(n)
    val = {}
    for p, labels in (valuation or {}).items():
        m = 0
        for label in labels:
            if label not in idx:
                raise ModelError(f"valuation of {p} mentions unknown state {label!r}")
            m |= 1 << idx[label]
        val[p] = m
    vocab = frozenset(val) | frozenset(vocabulary)
    return Model(states, tuple(agents), rels, val, vocab)


def restrict(m: Model, keep: int) -> Model:
    """Submodel on ``keep``: states re-indexed in order, labels preserved."""
    keep &= m.full
    if not keep:
        raise ModelError("cannot restrict to the empty set")
    old = list(bits(keep))
    new_index = {s: i for i, s in enumerate(old)}

    def remap(mask: int) -> int:
        return mask_of(new_index[s] for s in bits(mask & keep))

    rels = {}
    for a, part in m.relations.items():
        blocks = tuple(remap(b) for b in part.blocks if b & keep)
        rels[a] = Partition(blocks, len(old))
    val = {p: remap(v) for p, v in m.valuation.items()}
    return Model(tuple(m.states[s] for s in old), m.agents, rels, val, m.vocabulary)


def example1_model() -> PointedModel:
    """Four worlds: ``a`` cannot tell s from t, ``b`` cannot tell 0 from 1."""
    m = build(
        ["s0", "s1", "t0", "t1"],
        ["a", "b"],
        {"a": [["s0", "t0"], ["s1", "t1"]], "b": [["s0", "s1"], ["t0", "t1"]]},
        {"p": ["s0", "t0"], "q": ["s0", "s1"]},
    )
    return PointedModel(m, m.index("s0"))


def truncation(N: int) -> PointedModel:
    """Finite prefix of the root-and-stem model with stem worlds ``s1..sN``.

    States ``s0..sN``, ``t0..t(2N)``, ``u0..u(2N)``; ``p_j`` holds at ``u_k``
    for ``0 < k <= j``, clipped at ``j = 2N``.  Pointed at ``s0``.
    """
    if N < 1:
        raise ModelError("truncation needs N >= 1")
    s = [f"s{i}" for i in range(N + 1)]
    t = [f"t{k}" for k in range(2 * N + 1)]
    u = [f"u{k}" for k in range(2 * N + 1)]
    a_blocks = [["s0", "t0"]] + [[s[i], t[2 * i - 1], t[2 * i]] for i in range(1, N + 1)]
    a_blocks += [[label] for label in u]
    b_blocks = [list(s)] + [[t[k], u[k]] for k in range(2 * N + 1)]
    valuation = {"x": s + u}
    for j in range(1, 2 * N + 1):
        valuation[f"p{j}"] = [u[k] for k in range(1, j + 1)]
    m = build(s + t + u, ["a", "b"], {"a": a_blocks, "b": b_blocks}, valuation)
    return PointedModel(m, 0)


# JSON interchange.


def to_json(m: Model, point: Optional[int] = None) -> dict:
    data = {
        "agents": list(m.agents),
        "states": list(m.states),
        "relations": {a: [m.labels(b) for b in m.relations[a].blocks] for a in m.agents},
        "valuation": {p: m.labels(v) for p, v in sorted(m.valuation.items())},
        "vocabulary": sorted(m.vocabulary),
    }
    if point is not None:
        data["point"] = m.states[point]
    return data


def from_json(data: Mapping) -> Tuple[Model, Optional[int]]:
    """Parse the JSON model format; returns the model and the point index, if any."""
    if not isinstance(data, Mapping):
        raise ModelError("model JSON must be an object")
    for key in ("agents", "states"):
        if key not in data:
            raise ModelError(f"model JSON lacks {key!r}")
    m = build(
        data["states"],
        data["agents"],
        data.get("relations", {}),
        data.get("valuation", {}),
        vocabulary=data.get("vocabulary", ()),
    )
    point = data.get("point")
    return m, (m.index(point) if point is not None else None)
