"""Inner and outer daseinisation of projectors, context by context."""

from __future__ import annotations

from dataclasses import dataclass

from .contexts import Context, SpectralPresheaf
from .lattice import PropertyLattice, bits
from .report import LawReport


def outer_das(L: PropertyLattice, P: int, V: Context) -> int:
    """Meet of the projectors of ``V`` lying above ``P``."""
    acc = L.top
    for q in bits(V.projectors & L.up[P]):
        acc = L.meet(acc, q)
    return acc


def inner_das(L: PropertyLattice, P: int, V: Context) -> int:
    """Join of the projectors of ``V`` lying below ``P``."""
    acc = L.bottom
    for q in bits(V.projectors & L.down[P]):
        acc = L.join(acc, q)
    return acc


@dataclass(frozen=True)
class DaseinTable:
    element: int
    outer: tuple[int, ...]  # indexed by context id
    inner: tuple[int, ...]

    def to_dict(self, presheaf: SpectralPresheaf) -> dict:
        L = presheaf.lattice
        return {
            "element": L.label(self.element),
            "contexts": [
                {
                    "context": presheaf.describe(v),
                    "outer": L.label(self.outer[v]),
                    "inner": L.label(self.inner[v]),
                }
                for v in range(len(presheaf))
            ],
        }


def dasein_table(presheaf: SpectralPresheaf, P: int) -> DaseinTable:
    L = presheaf.lattice
    return DaseinTable(
        P,
        tuple(outer_das(L, P, V) for V in presheaf),
        tuple(inner_das(L, P, V) for V in presheaf),
    )


def das_prop_suite(presheaf: SpectralPresheaf) -> LawReport:
    """Orthogonality, ordering and set-image properties of daseinisation.

    The set-image equalities are asserted away from the bounds. Every
    ``Q != 1`` above ``P != 0`` is attained in the context ``{Q, ~Q}``, but 1
    itself is attained only if some context has no other projector above
    ``P``; with the trivial context excluded that can fail. Elements where the
    unrestricted equality breaks are listed under ``observations``. The outer
    image of 0 is always ``{0}`` and the inner image of 1 always ``{1}``, so
    those two are covered by the boundary check instead.
    """
    L = presheaf.lattice
    lab = L.labels
    rep = LawReport("daseinisation")
    tables = [dasein_table(presheaf, p) for p in range(L.n)]
    ctx = presheaf.contexts

    c_range = rep.check("inner(P)_V <= P <= outer(P)_V, both in P(V)")
    c_orth = rep.check("inner(P)_V orthogonal to outer(~P)_V inside P(V)")
    c_order = rep.check("inner(P)_V <= outer(P)_V")
    for p, V in ((p, V) for p in range(L.n) for V in ctx):
        i, o = tables[p].inner[V.id], tables[p].outer[V.id]
        c_range.expect(L.leq(i, p) and L.leq(p, o) and i in V and o in V, [lab[p], presheaf.describe(V.id)])
        oc = tables[L.ortho(p)].outer[V.id]
        c_orth.expect(
            L.meet(i, oc) == L.bottom and L.join(i, oc) == L.top,
            [lab[p], presheaf.describe(V.id), lab[i], lab[oc]],
        )
        c_order.expect(L.leq(i, o), [lab[p], presheaf.describe(V.id)])

    c_up = rep.check("{outer(P)_V : V} = up-set of P, away from 1 (P != 0)")
    c_down = rep.check("{inner(P)_V : V} = down-set of P, away from 0 (P != 1)")
    top_missed, bottom_missed = [], []
    not_top, not_bottom = L.full & ~(1 << L.top), L.full & ~(1 << L.bottom)
    c_bound = rep.check("outer(0)_V = 0, outer(1)_V = 1, inner(0)_V = 0, inner(1)_V = 1")
    for p in range(L.n):
        outer_img = sum(1 << x for x in set(tables[p].outer))
        inner_img = sum(1 << x for x in set(tables[p].inner))
        if p != L.bottom:
            c_up.expect(
                outer_img & not_top == L.up[p] & not_top,
                lambda: [lab[p], sorted(lab[x] for x in bits(outer_img))],
            )
            if outer_img != L.up[p]:
                top_missed.append(lab[p])
        if p != L.top:
            c_down.expect(
                inner_img & not_bottom == L.down[p] & not_bottom,
                lambda: [lab[p], sorted(lab[x] for x in bits(inner_img))],
            )
            if inner_img != L.down[p]:
                bottom_missed.append(lab[p])
    for V in ctx:
        c_bound.expect(
            tables[L.bottom].outer[V.id] == L.bottom
            and tables[L.top].outer[V.id] == L.top
            and tables[L.bottom].inner[V.id] == L.bottom
            and tables[L.top].inner[V.id] == L.top,
            [presheaf.describe(V.id)],
        )

    c_mono = rep.check("coarsening V2 ⊆ V1 worsens both approximations")
    for v1 in range(len(presheaf)):
        for v2 in presheaf.proper_subcontexts(v1):
            for p in range(L.n):
                t = tables[p]
                c_mono.expect(
                    L.leq(t.outer[v1], t.outer[v2]) and L.leq(t.inner[v2], t.inner[v1]),
                    [lab[p], presheaf.describe(v1), presheaf.describe(v2)],
                )
    rep.observations["contexts"] = len(presheaf)
    rep.observations["outer_image_misses_top"] = top_missed
    rep.observations["inner_image_misses_bottom"] = bottom_missed
    return rep
