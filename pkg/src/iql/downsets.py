"""The Heyting algebra D(L) of downsets of a property lattice.

For a finite lattice the MacNeille-style extension of the principal ideals by
their unions is exactly the set of all downsets, so D(L) is realised that way.
Downsets are membership bitmasks over element ids; meet and join are
intersection and union.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

from .contexts import Context, alpha
from .lattice import CapacityError, DomainError, PropertyLattice, bits
from .report import LawReport

DEFAULT_DOWNSET_CAP = 4096


class Downset:
    """A downward-closed subset of a lattice (always containing 0)."""

    __slots__ = ("lattice", "mask")

    def __init__(self, lattice: PropertyLattice, mask: int):
        self.lattice = lattice
        self.mask = mask

    @classmethod
    def generated(cls, L: PropertyLattice, generators: Iterable) -> Downset:
        """Downward closure of the given elements (ids or labels)."""
        mask = L.down[L.bottom]
        for g in generators:
            x = L.element(g) if isinstance(g, str) else L._own(g)
            mask |= L.down[x]
        return cls(L, mask)

    @classmethod
    def from_members(cls, L: PropertyLattice, members: Iterable[int]) -> Downset:
        mask = sum(1 << L._own(m) for m in set(members))
        if not is_downset(L, mask):
            raise ValueError("members are not downward closed or miss 0")
        return cls(L, mask)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Downset):
            return NotImplemented
        return self.mask == other.mask and self.lattice is other.lattice

    def __hash__(self) -> int:
        return hash(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def __le__(self, other: Downset) -> bool:
        _same(self, other)
        return not self.mask & ~other.mask

    def __lt__(self, other: Downset) -> bool:
        return self <= other and self != other

    def __and__(self, other: Downset) -> Downset:
        return d_meet(self, other)

    def __or__(self, other: Downset) -> Downset:
        return d_join(self, other)

    @property
    def members(self) -> list[int]:
        return list(bits(self.mask))

    def maximal(self) -> list[int]:
        """The antichain of maximal members."""
        L = self.lattice
        return [x for x in bits(self.mask) if not self.mask & L.up[x] & ~(1 << x)]

    def is_principal(self) -> bool:
        return len(self.maximal()) == 1

    def labels(self) -> list[str]:
        return [self.lattice.labels[x] for x in self.maximal()]

    def __repr__(self) -> str:
        return "Downset(" + ", ".join(self.labels()) + ")"

    def __str__(self) -> str:
        mx = self.labels()
        if len(mx) == 1:
            return "↓" + mx[0] if mx[0] != self.lattice.label(self.lattice.bottom) else "{0}"
        return "∪".join("↓" + m for m in mx)


def _same(s: Downset, t: Downset) -> None:
    if s.lattice is not t.lattice:
        raise DomainError("downsets belong to different lattices")


def is_downset(L: PropertyLattice, mask: int) -> bool:
    if not mask >> L.bottom & 1:
        return False
    return all(not L.down[x] & ~mask for x in bits(mask))


def principal(L: PropertyLattice, P: int) -> Downset:
    """``↓P``, the inner daseinisation of ``P`` read as a set."""
    return Downset(L, L.down[L._own(P)])


def bottom(L: PropertyLattice) -> Downset:
    return principal(L, L.bottom)


def top(L: PropertyLattice) -> Downset:
    return principal(L, L.top)


def d_meet(s: Downset, t: Downset) -> Downset:
    _same(s, t)
    return Downset(s.lattice, s.mask & t.mask)


def d_join(s: Downset, t: Downset) -> Downset:
    _same(s, t)
    return Downset(s.lattice, s.mask | t.mask)


def implies_mask(L: PropertyLattice, s: int, t: int) -> int:
    meet = L._meet
    members = list(bits(s))
    out = 0
    for r in range(L.n):
        row = meet[r]
        if all(t >> row[a] & 1 for a in members):
            out |= 1 << r
    return out


def d_implies(s: Downset, t: Downset) -> Downset:
    """``{r : a & r in T for every a in S}``."""
    _same(s, t)
    return Downset(s.lattice, implies_mask(s.lattice, s.mask, t.mask))


def d_neg(s: Downset) -> Downset:
    return d_implies(s, bottom(s.lattice))


def contextwise_value(s: Downset, V: Context) -> frozenset[int]:
    """Spectral points of ``V`` true at the join of ``S ∩ P(V)``."""
    L = s.lattice
    acc = L.bottom
    for q in bits(s.mask & V.projectors):
        acc = L.join(acc, q)
    return alpha(L, V, acc)


def lift_mask(L: PropertyLattice, a: int, s: int) -> int:
    row = L.sasaki_table[a]
    out = 0
    for x in bits(s):
        out |= L.down[row[x]]
    return out


def lift_sasaki(a: int, s: Downset) -> Downset:
    """Downward closure of the pointwise Sasaki projection ``{a &s x : x in S}``."""
    L = s.lattice
    return Downset(L, lift_mask(L, L._own(a), s.mask))


def enumerate_downset_masks(L: PropertyLattice, cap: int = DEFAULT_DOWNSET_CAP) -> list[int]:
    """All downsets as masks, sorted by (size, mask)."""
    seen = {L.down[L.bottom]}
    frontier = list(seen)
    while frontier:
        new = []
        for m in frontier:
            for x in range(L.n):
                if not m >> x & 1:
                    grown = m | L.down[x]
                    if grown not in seen:
                        seen.add(grown)
                        new.append(grown)
                        if len(seen) > cap:
                            raise CapacityError(f"D(L) has more than {cap} elements")
        frontier = new
    return sorted(seen, key=lambda m: (bin(m).count("1"), m))


def enumerate_downsets(L: PropertyLattice, cap: int = DEFAULT_DOWNSET_CAP) -> list[Downset]:
    return [Downset(L, m) for m in enumerate_downset_masks(L, cap)]


def heyting_law_suite(L: PropertyLattice, cap: int = DEFAULT_DOWNSET_CAP) -> LawReport:
    rep = LawReport("downset")
    masks = enumerate_downset_masks(L, cap)
    lab = L.labels
    n = len(masks)
    one, zero = L.down[L.top], L.down[L.bottom]
    show = lambda m: str(Downset(L, m))  # noqa: E731
    rep.observations["downsets"] = n
    rep.observations["principal"] = sum(1 for m in masks if len(Downset(L, m).maximal()) == 1)

    chk = rep.check("every enumerated set is a downset containing 0")
    for m in masks:
        chk.expect(is_downset(L, m), lambda: [show(m)])
    chk = rep.check("top is ↓1 = L and bottom is ↓0 = {0}")
    chk.expect(one == L.full and zero == 1 << L.bottom and masks[0] == zero and masks[-1] == one, [])

    c_comm = rep.check("meet and join commute")
    for s, t in product(masks, repeat=2):
        c_comm.expect(s & t == t & s and s | t == t | s, lambda: [show(s), show(t)])
    c_assoc = rep.check("meet and join associate")
    c_dist = rep.check("meet distributes over join")
    c_adj = rep.check("Heyting adjunction S & R <= T <=> R <= (S -> T)")
    c_down = rep.check("implication is downward closed")
    for s, t in product(masks, repeat=2):
        imp = implies_mask(L, s, t)
        c_down.expect(is_downset(L, imp), lambda: [show(s), show(t)])
        c_adj.domain_size += n
        c_assoc.domain_size += n
        c_dist.domain_size += n
        for r in masks:
            if (not s & r & ~t) != (not r & ~imp):
                c_adj.fail([show(s), show(r), show(t)])
            if (s & (t | r)) != ((s & t) | (s & r)):
                c_dist.fail([show(s), show(t), show(r)])
            if (s & (t & r)) != ((s & t) & r) or (s | (t | r)) != ((s | t) | r):
                c_assoc.fail([show(s), show(t), show(r)])

    c_meet = rep.check("↓ preserves meets: ↓P ∩ ↓Q = ↓(P & Q)")
    c_join = rep.check("↓P ∪ ↓Q <= ↓(P | Q)")
    c_inj = rep.check("↓ is an order-preserving injection")
    strict = []
    for p, q in product(range(L.n), repeat=2):
        c_meet.expect(L.down[p] & L.down[q] == L.down[L.meet(p, q)], [lab[p], lab[q]])
        u, j = L.down[p] | L.down[q], L.down[L.join(p, q)]
        c_join.expect(not u & ~j, [lab[p], lab[q]])
        if u != j:
            strict.append([lab[p], lab[q]])
        c_inj.expect(
            ((L.down[p] == L.down[q]) == (p == q)) and (L.leq(p, q) <= (not L.down[p] & ~L.down[q])),
            [lab[p], lab[q]],
        )
    chk = rep.check("join strictness witness exists: ↓P ∪ ↓Q != ↓(P | Q)")
    chk.expect(bool(strict), [])
    rep.observations["join_strictness_witnesses"] = len(strict)
    rep.observations["first_join_strictness_witness"] = strict[0] if strict else None

    chk = rep.check("non-principal downsets are unions of distinct principal ideals")
    principal_masks = set(L.down)
    for m in masks:
        mx = Downset(L, m).maximal()
        if len(mx) > 1:
            chk.expect(m not in principal_masks and m == _union(L, mx), lambda: [show(m)])
    return rep


def _union(L: PropertyLattice, elems: Iterable[int]) -> int:
    out = 0
    for x in elems:
        out |= L.down[x]
    return out
