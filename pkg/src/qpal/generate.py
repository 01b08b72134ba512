"""Seeded random models and formulas for sweeps and property checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

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
    Know,
    MaybeKnow,
    Not,
    Or,
    Top,
)
from .model import Model, Partition, mask_of


@dataclass(frozen=True)
class ModelConfig:
    max_states: int = 6
    agents: Tuple[str, ...] = ("a", "b")
    atoms: Tuple[str, ...] = ("x", "y", "z")
    min_atoms: int = 1


@dataclass(frozen=True)
class FormulaConfig:
    atoms: Tuple[str, ...] = ("x", "y")
    agents: Tuple[str, ...] = ("a", "b")
    depth: int = 4
    max_quantifier_depth: int = 0
    announcements: bool = True


def random_partition(rng: random.Random, n: int) -> Partition:
    labels = [rng.randrange(n) for _ in range(n)]
    blocks = {}
    for s, k in enumerate(labels):
        blocks[k] = blocks.get(k, 0) | 1 << s
    return Partition(tuple(blocks[k] for k in sorted(blocks)), n)


def random_model(rng: random.Random, cfg: ModelConfig = ModelConfig()) -> Model:
    """Uniform-ish random model: ``1..max_states`` states, random partitions and valuation.

    The first ``k`` atoms of ``cfg.atoms`` are used, ``k`` drawn from
    ``min_atoms..len(atoms)``; ``x`` comes first so fmp sweeps see it.
    """
    n = rng.randint(1, cfg.max_states)
    k = rng.randint(cfg.min_atoms, len(cfg.atoms))
    atoms = cfg.atoms[:k]
    rels = {a: random_partition(rng, n) for a in cfg.agents}
    val = {p: mask_of(s for s in range(n) if rng.random() < 0.5) for p in atoms}
    states = tuple(f"w{i}" for i in range(n))
    return Model(states, tuple(cfg.agents), rels, val, frozenset(atoms))


def random_group(rng: random.Random, agents: Sequence[str]) -> frozenset:
    return frozenset(a for a in agents if rng.random() < 0.5)


def random_formula(rng: random.Random, cfg: FormulaConfig = FormulaConfig()) -> Formula:
    """Random formula of syntactic depth at most ``cfg.depth``.

    Quantifiers nest at most ``cfg.max_quantifier_depth`` deep; with
    ``announcements`` off the result is purely epistemic.
    """
    return _formula(rng, cfg, cfg.depth, cfg.max_quantifier_depth)


def _formula(rng: random.Random, cfg: FormulaConfig, depth: int, qdepth: int) -> Formula:
    if depth <= 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.08:
            return Top()
        if r < 0.12:
            return Bot()
        return Atom(rng.choice(cfg.atoms))
    kinds = ["not", "and", "or", "imp", "K", "M"]
    if cfg.announcements:
        kinds += ["ann", "dann"]
    if qdepth > 0:
        kinds += ["box", "dia", "gbox", "gdia", "cbox", "cdia"]
    kind = rng.choice(kinds)
    sub = lambda: _formula(rng, cfg, depth - 1, qdepth)  # noqa: E731
    if kind == "not":
        return Not(sub())
    if kind in ("and", "or", "imp"):
        return {"and": And, "or": Or, "imp": Imp}[kind](sub(), sub())
    if kind in ("K", "M"):
        return (Know if kind == "K" else MaybeKnow)(rng.choice(cfg.agents), sub())
    if kind in ("ann", "dann"):
        return (Announce if kind == "ann" else DiaAnnounce)(sub(), sub())
    body = _formula(rng, cfg, depth - 1, qdepth - 1)
    if kind == "box":
        return ArbBox(body)
    if kind == "dia":
        return ArbDia(body)
    g = random_group(rng, cfg.agents)
    return {"gbox": GroupBox, "gdia": GroupDia, "cbox": CoalBox, "cdia": CoalDia}[kind](g, body)


def formula_corpus(seed: int, size: int, cfg: FormulaConfig = FormulaConfig()) -> List[Formula]:
    rng = random.Random(seed)
    return [random_formula(rng, cfg) for _ in range(size)]


def model_corpus(seed: int, size: int, cfg: ModelConfig = ModelConfig()) -> List[Model]:
    rng = random.Random(seed)
    return [random_model(rng, cfg) for _ in range(size)]


def with_clones(rng: random.Random, m: Model, k: int = 2) -> Model:
    """``m`` plus ``k`` copies of random states, each put in its original's classes.

    A copy has its original's valuation and shares every class with it, so the
    two are bisimilar and the quotient of the result is strictly smaller.
    """
    n = m.n + k
    sources = [rng.randrange(m.n) for _ in range(k)]
    rels = {}
    for a in m.agents:
        blocks = list(m.relations[a].blocks)
        for j, s in enumerate(sources):
            i = m.relations[a].block_index[s]
            blocks[i] |= 1 << (m.n + j)
        rels[a] = Partition(tuple(blocks), n)
    val = {p: v | mask_of(m.n + j for j, s in enumerate(sources) if v >> s & 1) for p, v in m.valuation.items()}
    states = m.states + tuple(f"{m.states[s]}'{j}" for j, s in enumerate(sources))
    return Model(states, m.agents, rels, val, m.vocabulary)
