"""Closed subspaces of small complex spaces, computed exactly.

Every :class:`Subspace` keeps its basis in reduced row-echelon form, which is
the unique canonical representative, so structural equality is subspace
equality. :func:`generate_lattice` closes a set of generator subspaces under
meet, join and orthocomplement and hands the result to
:class:`iql.lattice.PropertyLattice`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .gaussian import ONE, ZERO, GaussianRational
from .lattice import CapacityError

Row = tuple[GaussianRational, ...]

DEFAULT_MAX_ELEMENTS = 128


class SizeCapError(CapacityError):
    """Raised when a lattice closure grows past its element cap."""

    def __init__(self, message: str, frontier: Sequence[str] = ()):
        super().__init__(message)
        self.frontier = list(frontier)


def rref(rows: Iterable[Sequence], ncols: int) -> tuple[list[list[GaussianRational]], list[int]]:
    """Gauss-Jordan elimination; returns (nonzero rows, pivot columns)."""
    m = [[GaussianRational.parse(v) for v in r] for r in rows]
    for r in m:
        if len(r) != ncols:
            raise ValueError(f"row of length {len(r)} in a {ncols}-column matrix")
    pivots: list[int] = []
    prow = 0
    for col in range(ncols):
        sel = next((i for i in range(prow, len(m)) if not m[i][col].is_zero()), None)
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        inv = m[prow][col].inverse()
        m[prow] = [v * inv for v in m[prow]]
        for i in range(len(m)):
            if i != prow and not m[i][col].is_zero():
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[prow])]
        pivots.append(col)
        prow += 1
        if prow == len(m):
            break
    return m[:prow], pivots


def nullspace(rows: Sequence[Sequence[GaussianRational]], ncols: int) -> list[Row]:
    """Basis of {v : r.v = 0 for every row r} (bilinear, no conjugation)."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^dim given by its canonical (RREF) basis."""

    dim: int
    basis: tuple[Row, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return len(self.basis) == self.dim

    def to_json(self) -> list[list[list[str]]]:
        return [[x.to_json() for x in row] for row in self.basis]

    def __str__(self) -> str:
        if not self.basis:
            return "span{}"
        rows = ", ".join("(" + ",".join(str(x) for x in row) + ")" for row in self.basis)
        return "span{" + rows + "}"


def _check_dim(dim: int) -> None:
    if not isinstance(dim, int) or dim <= 0:
        raise ValueError(f"ambient dimension must be a positive integer, got {dim!r}")


def subspace_from_vectors(dim: int, vectors: Iterable[Sequence]) -> Subspace:
    _check_dim(dim)
    rows = []
    for v in vectors:
        v = [GaussianRational.parse(x) for x in v]
        if len(v) != dim:
            raise ValueError(f"vector of length {len(v)} in ambient dimension {dim}")
        rows.append(v)
    red, _ = rref(rows, dim)
    return Subspace(dim, tuple(tuple(r) for r in red))


def zero_subspace(dim: int) -> Subspace:
    _check_dim(dim)
    return Subspace(dim, ())


def full_subspace(dim: int) -> Subspace:
    return subspace_from_vectors(dim, [[ONE if i == j else ZERO for j in range(dim)] for i in range(dim)])


def _same_dim(x: Subspace, y: Subspace) -> None:
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")


def subspace_join(x: Subspace, y: Subspace) -> Subspace:
    _same_dim(x, y)
    return subspace_from_vectors(x.dim, list(x.basis) + list(y.basis))


def subspace_ortho(x: Subspace) -> Subspace:
    # v is orthogonal to x iff <b, v> = sum(conj(b_i) v_i) = 0 for each basis row b
    constraints = [[c.conjugate() for c in row] for row in x.basis]
    return subspace_from_vectors(x.dim, nullspace(constraints, x.dim))


def subspace_meet(x: Subspace, y: Subspace) -> Subspace:
    _same_dim(x, y)
    # x ∩ y is cut out by the stacked constraints defining x and y
    cx = [[c.conjugate() for c in row] for row in subspace_ortho(x).basis]
    cy = [[c.conjugate() for c in row] for row in subspace_ortho(y).basis]
    return subspace_from_vectors(x.dim, nullspace(cx + cy, x.dim))


def subspace_leq(x: Subspace, y: Subspace) -> bool:
    _same_dim(x, y)
    return subspace_join(x, y) == y


def inner(u: Sequence[GaussianRational], v: Sequence[GaussianRational]) -> GaussianRational:
    total = ZERO
    for a, b in zip(u, v):
        total = total + a.conjugate() * b
    return total


def generate_lattice(
    dim: int,
    generators: Mapping[str, Iterable[Sequence]],
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    name: str | None = None,
):
    """Close ``{0, 1} ∪ generators`` under meet, join and orthocomplement.

    Elements are numbered in discovery order: ``0``, ``1``, the generators in
    the given order, then one breadth-first round at a time (orthocomplements
    first, then meets and joins of index-ordered pairs). New elements are
    labelled ``~x``, ``(x&y)`` or ``(x|y)`` after the operation that produced
    them first.
    """
    from .lattice import PropertyLattice

    _check_dim(dim)
    if max_elements < 4:
        raise ValueError("max_elements must be at least 4")
    spaces: list[Subspace] = []
    labels: list[str] = []
    index: dict[Subspace, int] = {}

    def add(space: Subspace, label: str) -> bool:
        if space in index:
            return False
        if len(spaces) >= max_elements:
            frontier = labels[-min(8, len(labels)):] + [label]
            raise SizeCapError(
                f"lattice closure exceeded {max_elements} elements; last frontier: "
                + ", ".join(frontier),
                frontier,
            )
        index[space] = len(spaces)
        spaces.append(space)
        labels.append(label)
        return True

    add(zero_subspace(dim), "0")
    add(full_subspace(dim), "1")
    for gname, vectors in generators.items():
        if gname in labels:
            raise ValueError(f"duplicate generator label {gname!r}")
        add(subspace_from_vectors(dim, vectors), gname)

    done = 0
    while done < len(spaces):
        size = len(spaces)
        for i in range(size):
            add(subspace_ortho(spaces[i]), "~" + labels[i])
        size = len(spaces)
        for i in range(size):
            for j in range(i + 1, size):
                if j < done and i < done:
                    continue
                add(subspace_meet(spaces[i], spaces[j]), f"({labels[i]}&{labels[j]})")
                add(subspace_join(spaces[i], spaces[j]), f"({labels[i]}|{labels[j]})")
        done = size

    n = len(spaces)
    leq = [[subspace_leq(spaces[i], spaces[j]) for j in range(n)] for i in range(n)]
    ortho = [index[subspace_ortho(s)] for s in spaces]
    return PropertyLattice(labels, leq, ortho, subspaces=spaces, name=name)
