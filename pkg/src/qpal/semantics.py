"""Truth and extensions for the quantifier-free fragment, and model update.

The evaluator works on submodels of one fixed model, each identified by the
bitmask of its surviving states.  Restricting to a mask keeps the original
indexing, so announcements never rebuild models and results can be memoized
by ``(node, mask)``.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

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
from .model import Model, ModelError, PointedModel, bits as _bits, restrict


class QuantifierError(ValueError):
    """A quantifier reached an evaluator that only handles the epistemic/PAL fragment."""


# Node kinds of the compiled form.
ATOM, TOP, NOT, AND, OR, IMP, KNOW, ANN, BOX, GBOX, CBOX = range(11)


class Compiler:
    """Hash-conses formulas into integer nodes, expanding duals on the way.

    Nodes are tuples ``(kind, *args)``; children are node ids.  Structurally
    equal subformulas share one id, which makes them share memo entries.
    """

    def __init__(self):
        self.nodes: List[tuple] = []
        self._ids: Dict[tuple, int] = {}
        self._seen: Dict[int, Tuple[Formula, int]] = {}

    def _intern(self, node: tuple) -> int:
        nid = self._ids.get(node)
        if nid is None:
            nid = len(self.nodes)
            self.nodes.append(node)
            self._ids[node] = nid
        return nid

    def compile(self, f: Formula) -> int:
        # Keyed by object identity so DAG-shaped formulas compile in linear time.
        hit = self._seen.get(id(f))
        if hit is not None and hit[0] is f:
            return hit[1]
        nid = self._compile(f)
        self._seen[id(f)] = (f, nid)
        return nid

    def _compile(self, f: Formula) -> int:
        c, i = self.compile, self._intern
        if isinstance(f, Atom):
            return i((ATOM, f.name))
        if isinstance(f, Top):
            return i((TOP,))
        if isinstance(f, Bot):
            return i((NOT, i((TOP,))))
        if isinstance(f, Not):
            return i((NOT, c(f.body)))
        if isinstance(f, And):
            return i((AND, c(f.left), c(f.right)))
        if isinstance(f, Or):
            return i((OR, c(f.left), c(f.right)))
        if isinstance(f, Imp):
            return i((IMP, c(f.left), c(f.right)))
        if isinstance(f, Know):
            return i((KNOW, f.agent, c(f.body)))
        if isinstance(f, MaybeKnow):
            return i((NOT, i((KNOW, f.agent, i((NOT, c(f.body)))))))
        if isinstance(f, Announce):
            return i((ANN, c(f.announcement), c(f.body)))
        if isinstance(f, DiaAnnounce):
            return i((NOT, i((ANN, c(f.announcement), i((NOT, c(f.body)))))))
        if isinstance(f, ArbBox):
            return i((BOX, c(f.body)))
        if isinstance(f, ArbDia):
            return i((NOT, i((BOX, i((NOT, c(f.body)))))))
        if isinstance(f, GroupBox):
            return i((GBOX, f.group, c(f.body)))
        if isinstance(f, GroupDia):
            return i((NOT, i((GBOX, f.group, i((NOT, c(f.body)))))))
        if isinstance(f, CoalBox):
            return i((CBOX, f.group, c(f.body)))
        if isinstance(f, CoalDia):
            return i((NOT, i((CBOX, f.group, i((NOT, c(f.body)))))))
        raise TypeError(f"not a formula: {f!r}")


class Evaluator:
    """Extensions over submodels of ``model``; one memo table per instance."""

    def __init__(self, model: Model):
        self.model = model
        self.compiler = Compiler()
        self.nodes = self.compiler.nodes
        self.memo: List[Dict[int, int]] = []
        self._classes = {a: model.classes(a) for a in model.agents}
        self._block_lists = {a: model.relations[a].blocks for a in model.agents}

    def compile(self, f: Formula) -> int:
        nid = self.compiler.compile(f)
        while len(self.memo) < len(self.nodes):
            self.memo.append({})
        return nid

    def extension(self, f: Formula, mask: int = None) -> int:
        """States of the submodel ``mask`` (default: all) where ``f`` holds."""
        if mask is None:
            mask = self.model.full
        return self.ext(self.compile(f), mask)

    def holds(self, f: Formula, point: int, mask: int = None) -> bool:
        return bool(self.extension(f, mask) >> point & 1)

    def ext(self, nid: int, mask: int) -> int:
        table = self.memo[nid]
        out = table.get(mask)
        if out is None:
            out = self._eval(nid, mask)
            table[mask] = out
        return out

    def kernel(self, agent: str, inner: int, mask: int) -> int:
        """States of ``mask`` whose whole ``agent``-class (within ``mask``) lies in ``inner``."""
        out = 0
        for block in self._block_lists[agent]:
            b = block & mask
            if b and not b & ~inner:
                out |= b
        return out

    def _eval(self, nid: int, mask: int) -> int:
        node = self.nodes[nid]
        kind = node[0]
        if kind == ATOM:
            return self.model.val(node[1]) & mask
        if kind == TOP:
            return mask
        if kind == NOT:
            return mask & ~self.ext(node[1], mask)
        if kind == AND:
            left = self.ext(node[1], mask)
            return left & self.ext(node[2], mask) if left else 0
        if kind == OR:
            return self.ext(node[1], mask) | self.ext(node[2], mask)
        if kind == IMP:
            return (mask & ~self.ext(node[1], mask)) | self.ext(node[2], mask)
        if kind == KNOW:
            if node[1] not in self._classes:
                raise ModelError(f"unknown agent {node[1]!r}")
            return self.kernel(node[1], self.ext(node[2], mask), mask)
        if kind == ANN:
            kept = self.ext(node[1], mask)
            if not kept:
                return mask
            return (mask & ~kept) | self.ext(node[2], kept)
        return self._quantifier(nid, node, mask)

    def components(self, mask: int) -> List[int]:
        """Connected components of the submodel ``mask`` (union of all agents' classes)."""
        out = []
        classes = list(self._classes.values())
        while mask:
            comp = frontier = mask & -mask
            while frontier:
                grown = 0
                for s in _bits(frontier):
                    for cls in classes:
                        grown |= cls[s]
                grown &= mask & ~comp
                comp |= grown
                frontier = grown
            out.append(comp)
            mask &= ~comp
        return out

    def _quantifier(self, nid: int, node: tuple, mask: int) -> int:
        raise QuantifierError("quantified formula given to the epistemic evaluator; use qpal.quantified.check")


def extension(m: Model, f: Formula) -> int:
    """Bitmask of the states of ``m`` where quantifier-free ``f`` is true."""
    return Evaluator(m).extension(f)


def holds(pm: PointedModel, f: Formula) -> bool:
    return bool(extension(pm.model, f) >> pm.point & 1)


def update(m: Model, f: Formula) -> Model:
    """The model after publicly announcing quantifier-free ``f``."""
    kept = extension(m, f)
    if not kept:
        raise ModelError("announcement is false everywhere; update is undefined")
    return restrict(m, kept)
