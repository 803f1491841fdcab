"""Finite ortholattices with the Sasaki projection and hook.

Elements are dense integer ids. Meets and joins are found once, at
construction, by exhaustive bound search over the order relation; the tables
make every later query constant time. Order relations are kept as bitmasks
(``down[x]`` has bit ``y`` set iff ``y <= x``), which the downset and
presheaf modules reuse directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

from .report import LawReport


class LatticeError(ValueError):
    """The given structure is not a (bounded, ortho-) lattice."""


class DomainError(ValueError):
    """An element id does not belong to the lattice it was used with."""


class CapacityError(RuntimeError):
    """An exhaustive enumeration would exceed its configured cap."""


@dataclass(frozen=True)
class LatticeElement:
    id: int
    label: str


def bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class PropertyLattice:
    """A finite lattice with an orthocomplementation.

    Parameters
    ----------
    labels : sequence of str
        Display labels, unique; position is the element id.
    leq : n x n nested sequence of bool
        ``leq[i][j]`` is true iff element ``i`` lies below element ``j``.
        Must already be a partial order.
    ortho : sequence of int
        ``ortho[i]`` is the id of the complement of ``i``.
    subspaces : optional sequence of :class:`iql.hilbert.Subspace`
        Concrete realisation of each element, for subspace-backed lattices.
    validate_ortho : bool
        Reject maps that break any ortholattice axiom. Law suites can be run
        on unvalidated lattices to inspect such maps.
    """

    def __init__(
        self,
        labels: Sequence[str],
        leq: Sequence[Sequence[bool]],
        ortho: Sequence[int],
        subspaces=None,
        name: str | None = None,
        validate_ortho: bool = True,
    ):
        n = len(labels)
        if len(set(labels)) != n:
            dup = next(x for x in labels if list(labels).count(x) > 1)
            raise LatticeError(f"duplicate element label {dup!r}")
        if len(leq) != n or any(len(row) != n for row in leq):
            raise LatticeError("order relation must be an n x n table")
        if len(ortho) != n:
            raise LatticeError("ortho map must have one entry per element")
        self.name = name
        self.labels = list(labels)
        self.n = n
        self.subspaces = list(subspaces) if subspaces is not None else None
        self._index = {lab: i for i, lab in enumerate(self.labels)}

        up = [0] * n
        down = [0] * n
        for i in range(n):
            for j in range(n):
                if leq[i][j]:
                    up[i] |= 1 << j
                    down[j] |= 1 << i
        self.up = up
        self.down = down
        self._check_partial_order()
        self.full = (1 << n) - 1
        bottoms = [i for i in range(n) if up[i] == self.full]
        tops = [i for i in range(n) if down[i] == self.full]
        if not bottoms or not tops:
            raise LatticeError("lattice needs a least and a greatest element")
        self.bottom, self.top = bottoms[0], tops[0]
        if self.bottom == self.top:
            raise LatticeError("0 and 1 must be distinct")
        self._meet, self._join = self._bound_tables()
        for i, o in enumerate(ortho):
            if not isinstance(o, int) or not 0 <= o < n:
                raise LatticeError(f"ortho of {self.labels[i]!r} is not an element")
        self._ortho = list(ortho)
        if validate_ortho:
            problem = self._ortho_problem()
            if problem:
                raise LatticeError(problem)

    # -- construction helpers -------------------------------------------------

    def _check_partial_order(self) -> None:
        n = self.n
        for i in range(n):
            if not self.up[i] >> i & 1:
                raise LatticeError(f"order is not reflexive at {self.labels[i]!r}")
        for i in range(n):
            for j in bits(self.up[i]):
                if j != i and self.up[j] >> i & 1:
                    raise LatticeError(
                        f"order is not antisymmetric: {self.labels[i]!r} and {self.labels[j]!r}"
                    )
                if self.up[j] & ~self.up[i]:
                    k = next(bits(self.up[j] & ~self.up[i]))
                    raise LatticeError(
                        "order is not transitive: "
                        f"{self.labels[i]!r} <= {self.labels[j]!r} <= {self.labels[k]!r}"
                    )

    def _bound_tables(self):
        n = self.n
        by_down = {m: i for i, m in enumerate(self.down)}
        by_up = {m: i for i, m in enumerate(self.up)}
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m = by_down.get(self.down[i] & self.down[j])
                jn = by_up.get(self.up[i] & self.up[j])
                if m is None:
                    raise LatticeError(
                        f"no greatest lower bound for ({self.labels[i]!r}, {self.labels[j]!r})"
                    )
                if jn is None:
                    raise LatticeError(
                        f"no least upper bound for ({self.labels[i]!r}, {self.labels[j]!r})"
                    )
                meet[i][j] = meet[j][i] = m
                join[i][j] = join[j][i] = jn
        return meet, join

    def _ortho_problem(self) -> str | None:
        o = self._ortho
        for a in range(self.n):
            if o[o[a]] != a:
                return f"ortho map is not involutive at {self.labels[a]!r}"
            if self._meet[a][o[a]] != self.bottom:
                return f"a & ~a != 0 at {self.labels[a]!r}"
            if self._join[a][o[a]] != self.top:
                return f"a | ~a != 1 at {self.labels[a]!r}"
        for a in range(self.n):
            for b in bits(self.up[a]):
                if not self.leq(o[b], o[a]):
                    return (
                        f"ortho map is not order-reversing: {self.labels[a]!r} <= "
                        f"{self.labels[b]!r} but not ~{self.labels[b]!r} <= ~{self.labels[a]!r}"
                    )
        return None

    # -- element access -------------------------------------------------------

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(range(self.n))

    def __repr__(self) -> str:
        return f"PropertyLattice({self.name or '?'}, n={self.n})"

    @property
    def elements(self) -> list[LatticeElement]:
        return [LatticeElement(i, lab) for i, lab in enumerate(self.labels)]

    @property
    def provenance(self) -> str:
        return "subspace" if self.subspaces is not None else "table"

    @property
    def is_degenerate(self) -> bool:
        """True for the two-element chain, whose only context is excluded."""
        return self.n == 2

    def element(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise DomainError(f"unknown element label {label!r}") from None

    def label(self, x: int) -> str:
        return self.labels[self._own(x)]

    def _own(self, x) -> int:
        if isinstance(x, LatticeElement):
            if x.id < self.n and self.labels[x.id] == x.label:
                return x.id
            raise DomainError(f"element {x.label!r} is foreign to this lattice")
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.n:
            raise DomainError(f"{x!r} is not an element id of this lattice")
        return x

    # -- operations -----------------------------------------------------------

    def leq(self, x, y) -> bool:
        return bool(self.up[self._own(x)] >> self._own(y) & 1)

    def meet(self, x, y) -> int:
        return self._meet[self._own(x)][self._own(y)]

    def join(self, x, y) -> int:
        return self._join[self._own(x)][self._own(y)]

    def ortho(self, x) -> int:
        return self._ortho[self._own(x)]

    def sasaki_project(self, a, b) -> int:
        """``a & (~a | b)``: the projection of ``b`` onto ``a``."""
        a, b = self._own(a), self._own(b)
        return self._meet[a][self._join[self._ortho[a]][b]]

    def sasaki_hook(self, a, b) -> int:
        """``~a | (a & b)``, right adjoint of ``sasaki_project(a, -)``."""
        a, b = self._own(a), self._own(b)
        return self._join[self._ortho[a]][self._meet[a][b]]

    @cached_property
    def sasaki_table(self) -> list[list[int]]:
        return [[self.sasaki_project(a, b) for b in range(self.n)] for a in range(self.n)]

    def atoms(self) -> list[int]:
        return [x for x in range(self.n) if self.down[x] == (1 << x) | (1 << self.bottom) and x != self.bottom]

    def orthogonal(self, x, y) -> bool:
        return self.leq(x, self.ortho(y))

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs (x, y), x < y with nothing strictly between."""
        out = []
        for x in range(self.n):
            above = self.up[x] & ~(1 << x)
            for y in bits(above):
                between = above & self.down[y] & ~(1 << y)
                if not between:
                    out.append((x, y))
        return out

    @cached_property
    def is_orthomodular(self) -> bool:
        return orthomodular_witness(self) is None

    @cached_property
    def is_distributive(self) -> bool:
        m, j = self._meet, self._join
        return all(
            m[a][j[b][c]] == j[m[a][b]][m[a][c]]
            for a, b, c in product(range(self.n), repeat=3)
        )


def orthomodular_witness(L: PropertyLattice) -> tuple[int, int] | None:
    for a in range(L.n):
        for b in bits(L.up[a]):
            if L.join(a, L.meet(L.ortho(a), b)) != b:
                return (a, b)
    return None


def law_suite(L: PropertyLattice) -> LawReport:
    """Ortholattice, orthomodular, Sasaki adjunction and modus-ponens laws."""
    rep = LawReport("oml")
    lab = L.labels
    n = range(L.n)
    o = L.ortho

    chk = rep.check("ortho involution ~~a = a")
    for a in n:
        chk.expect(o(o(a)) == a, [lab[a]])
    chk = rep.check("ortho order-reversing a <= b <=> ~b <= ~a")
    for a, b in product(n, n):
        chk.expect(L.leq(a, b) == L.leq(o(b), o(a)), [lab[a], lab[b]])
    chk = rep.check("non-contradiction a & ~a = 0")
    for a in n:
        chk.expect(L.meet(a, o(a)) == L.bottom, [lab[a]])
    chk = rep.check("excluded middle a | ~a = 1")
    for a in n:
        chk.expect(L.join(a, o(a)) == L.top, [lab[a]])

    chk = rep.check("orthomodular law a <= b => a | (~a & b) = b")
    for a, b in product(n, n):
        if L.leq(a, b):
            got = L.join(a, L.meet(o(a), b))
            chk.expect(got == b, [lab[a], lab[b], lab[got]])

    chk = rep.check("sasaki projection below a: a &s b <= a")
    for a, b in product(n, n):
        chk.expect(L.leq(L.sasaki_project(a, b), a), [lab[a], lab[b]])
    chk = rep.check("sasaki adjunction a &s b <= c <=> b <= a ~>s c")
    for a, b, c in product(n, n, n):
        lhs = L.leq(L.sasaki_project(a, b), c)
        rhs = L.leq(b, L.sasaki_hook(a, c))
        chk.expect(lhs == rhs, [lab[a], lab[b], lab[c]])
    chk = rep.check("sasaki modus ponens a &s (a ~>s c) <= c")
    for a, c in product(n, n):
        chk.expect(L.leq(L.sasaki_project(a, L.sasaki_hook(a, c)), c), [lab[a], lab[c]])

    rep.observations["elements"] = L.n
    rep.observations["degenerate"] = L.is_degenerate
    rep.observations["distributive"] = L.is_distributive
    return rep


def subspace_cross_check(L: PropertyLattice) -> LawReport:
    """Table operations of a subspace-backed lattice agree with subspace arithmetic."""
    from .hilbert import subspace_join, subspace_leq, subspace_meet, subspace_ortho

    rep = LawReport("hilbert-cross-check")
    if L.subspaces is None:
        rep.skipped.append("lattice is table-backed")
        return rep
    sp, lab = L.subspaces, L.labels
    chk_leq = rep.check("leq agrees with subspace containment")
    chk_meet = rep.check("meet agrees with subspace intersection")
    chk_join = rep.check("join agrees with subspace span")
    for a, b in product(range(L.n), repeat=2):
        chk_leq.expect(L.leq(a, b) == subspace_leq(sp[a], sp[b]), [lab[a], lab[b]])
        chk_meet.expect(sp[L.meet(a, b)] == subspace_meet(sp[a], sp[b]), [lab[a], lab[b]])
        chk_join.expect(sp[L.join(a, b)] == subspace_join(sp[a], sp[b]), [lab[a], lab[b]])
    chk = rep.check("ortho agrees with orthogonal complement, dims sum to ambient")
    for a in range(L.n):
        comp = subspace_ortho(sp[a])
        chk.expect(sp[L.ortho(a)] == comp and comp.rank + sp[a].rank == sp[a].dim, [lab[a]])
    return rep
