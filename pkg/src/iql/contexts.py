"""Contexts of a finite orthomodular lattice and the spectral presheaf.

A context is given by an orthogonal decomposition of 1 into at least two
nonzero blocks; its projectors are all joins of block subsets, and its
spectrum has one point per block. The trivial context ``{0, 1}`` is never
produced.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .lattice import DomainError, LatticeError, PropertyLattice, bits


@dataclass(frozen=True)
class Context:
    id: int
    blocks: tuple[int, ...]
    projectors: int  # bitmask of P(V) inside the lattice

    def __contains__(self, element: int) -> bool:
        return bool(self.projectors >> element & 1)

    @property
    def is_minimal_form(self) -> bool:
        return len(self.blocks) == 2


@dataclass(frozen=True, order=True)
class SpectralPoint:
    """The point of a context's spectrum that is true exactly on its block."""

    context: int
    block: int


def orthogonal_decompositions(L: PropertyLattice) -> list[tuple[int, ...]]:
    """All sets of >= 2 pairwise-orthogonal nonzero elements joining to 1."""
    found = []

    def extend(chosen: list[int], acc: int, start: int) -> None:
        if acc == L.top:
            if len(chosen) >= 2:
                found.append(tuple(chosen))
            return
        room = L.ortho(acc)
        for x in range(start, L.n):
            if x != L.bottom and L.leq(x, room):
                chosen.append(x)
                extend(chosen, L.join(acc, x), x + 1)
                chosen.pop()

    extend([], L.bottom, 0)
    return sorted(found)


def _projector_mask(L: PropertyLattice, blocks: tuple[int, ...]) -> int:
    mask = 0
    for r in range(len(blocks) + 1):
        for combo in combinations(blocks, r):
            acc = L.bottom
            for b in combo:
                acc = L.join(acc, b)
            mask |= 1 << acc
    return mask


class SpectralPresheaf:
    """All contexts of ``L`` with subcontext relation and restriction maps."""

    def __init__(self, L: PropertyLattice):
        if not L.is_orthomodular:
            raise LatticeError("contexts are only enumerated for orthomodular lattices")
        self.lattice = L
        self.contexts = [
            Context(i, blocks, _projector_mask(L, blocks))
            for i, blocks in enumerate(orthogonal_decompositions(L))
        ]
        k = len(self.contexts)
        # below[v] lists every context w with w ⊆ v, v itself included
        self.below = [
            [w for w in range(k) if self.contexts[w].projectors & ~self.contexts[v].projectors == 0]
            for v in range(k)
        ]
        self._restrict = {}
        for v in range(k):
            for w in self.below[v]:
                self._restrict[v, w] = {
                    p: next(q for q in self.contexts[w].blocks if L.leq(p, q))
                    for p in self.contexts[v].blocks
                }
        # global numbering of spectral points, context by context
        self.points = [SpectralPoint(V.id, b) for V in self.contexts for b in V.blocks]
        self.point_index = {pt: i for i, pt in enumerate(self.points)}
        self.context_mask = [0] * k
        for i, pt in enumerate(self.points):
            self.context_mask[pt.context] |= 1 << i
        # shadow[i]: the point itself and all its restrictions to subcontexts
        self.shadow = [
            sum(
                1 << self.point_index[SpectralPoint(w, self._restrict[pt.context, w][pt.block])]
                for w in self.below[pt.context]
            )
            for pt in self.points
        ]

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self):
        return iter(self.contexts)

    def __getitem__(self, i: int) -> Context:
        return self.contexts[i]

    def is_subcontext(self, v2: int, v1: int) -> bool:
        """True iff ``V2 ⊆ V1``."""
        return v2 in self.below[v1]

    def proper_subcontexts(self, v: int) -> list[int]:
        return [w for w in self.below[v] if w != v]

    @cached_property
    def minimal(self) -> list[int]:
        """Contexts with no proper subcontext."""
        return [v for v in range(len(self)) if not self.proper_subcontexts(v)]

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (w, v) with w ⊂ v and no context strictly between."""
        out = []
        for v in range(len(self)):
            proper = self.proper_subcontexts(v)
            for w in proper:
                if not any(w != u and w in self.below[u] for u in proper):
                    out.append((w, v))
        return out

    def restrict_block(self, block: int, v1: int, v2: int) -> int:
        try:
            return self._restrict[v1, v2][block]
        except KeyError:
            if (v1, v2) not in self._restrict:
                raise DomainError(f"context {v2} is not a subcontext of context {v1}") from None
            raise DomainError(f"{block} is not a block of context {v1}") from None

    def describe(self, v: int) -> str:
        L = self.lattice
        return "{" + ", ".join(L.label(b) for b in self.contexts[v].blocks) + "}"


def enumerate_contexts(L: PropertyLattice) -> SpectralPresheaf:
    return SpectralPresheaf(L)


def projectors_of(L: PropertyLattice, V: Context) -> list[int]:
    """``P(V)``; raises if it is not a Boolean subalgebra of ``L``."""
    members = list(bits(V.projectors))
    mset = set(members)
    for a in members:
        if L.ortho(a) not in mset:
            raise LatticeError(f"P(V) not closed under ortho at {L.label(a)!r}")
        for b in members:
            if L.meet(a, b) not in mset or L.join(a, b) not in mset:
                raise LatticeError("P(V) not closed under meet/join")
            for c in members:
                if L.meet(a, L.join(b, c)) != L.join(L.meet(a, b), L.meet(a, c)):
                    raise LatticeError("P(V) is not distributive")
    return members


def spectrum(V: Context) -> list[SpectralPoint]:
    return [SpectralPoint(V.id, b) for b in V.blocks]


def restrict_point(presheaf: SpectralPresheaf, point: SpectralPoint, v2: int) -> SpectralPoint:
    return SpectralPoint(v2, presheaf.restrict_block(point.block, point.context, v2))


def alpha(L: PropertyLattice, V: Context, Q: int) -> frozenset[int]:
    """Blocks of ``V`` below ``Q``, i.e. the spectral points true at ``Q``."""
    if Q not in V:
        raise DomainError(f"{L.label(Q)!r} is not a projector of the context")
    return frozenset(b for b in V.blocks if L.leq(b, Q))


def alpha_points(L: PropertyLattice, V: Context, Q: int) -> set[SpectralPoint]:
    return {SpectralPoint(V.id, b) for b in alpha(L, V, Q)}
