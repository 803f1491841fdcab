"""Isomorphisms of finite ortholattices (order and ortho preserving bijections)."""

from __future__ import annotations

from .lattice import PropertyLattice


def _signature(L: PropertyLattice, x: int) -> tuple[int, int]:
    return (bin(L.down[x]).count("1"), bin(L.up[x]).count("1"))


def find_isomorphism(L1: PropertyLattice, L2: PropertyLattice) -> list[int] | None:
    """A map ``f`` with ``x <= y iff f[x] <= f[y]`` and ``f[~x] = ~f[x]``, or None.

    Plain backtracking with a down/up-set size filter; fine for the few dozen
    elements the workbench handles.
    """
    if L1.n != L2.n:
        return None
    sig2 = [_signature(L2, y) for y in range(L2.n)]
    order = sorted(range(L1.n), key=lambda x: (_signature(L1, x), x))
    f = [-1] * L1.n
    used = [False] * L2.n

    def consistent(x: int, y: int) -> bool:
        for z in range(L1.n):
            w = f[z]
            if w < 0:
                continue
            if L1.leq(x, z) != L2.leq(y, w) or L1.leq(z, x) != L2.leq(w, y):
                return False
        ox = L1.ortho(x)
        if f[ox] >= 0 and f[ox] != L2.ortho(y):
            return False
        if ox == x and L2.ortho(y) != y:
            return False
        return True

    def place(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        if f[x] >= 0:
            return place(k + 1)
        for y in range(L2.n):
            if used[y] or sig2[y] != _signature(L1, x) or not consistent(x, y):
                continue
            oy, ox = L2.ortho(y), L1.ortho(x)
            if ox != x and (used[oy] or not consistent(ox, oy) or sig2[oy] != _signature(L1, ox)):
                continue
            f[x], used[y] = y, True
            f[ox], used[oy] = oy, True
            if place(k + 1):
                return True
            f[x], used[y] = -1, False
            f[ox], used[oy] = -1, False
        return False

    return list(f) if place(0) else None
