"""Consequence relations over D(L) and their static and dynamic revision.

A relation is fixed by an antecedent downset ``A``: ``α ⊢ β`` iff
``A ∧ α <= β``. Static revision meets the antecedent with a formula and stays
in the same epoch. Dynamic revision pushes the antecedent through the Sasaki
lift of a projector and moves to the next epoch; the lattice itself is shared.

The exhaustive suites quantify over up to four downsets at once. They work on
integer masks and use numpy broadcasting for the innermost two quantifiers,
which keeps D(L) of a hundred-odd elements within a few seconds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

import numpy as np

from .downsets import (
    DEFAULT_DOWNSET_CAP,
    Downset,
    enumerate_downset_masks,
    implies_mask,
    lift_mask,
)
from .lattice import DomainError, PropertyLattice
from .report import LawReport

STATIC = "static"
DYNAMIC = "dynamic"


@dataclass(frozen=True)
class RevisionStep:
    kind: str
    formula: Downset | None = None
    projector: int | None = None

    @classmethod
    def static(cls, formula: Downset) -> RevisionStep:
        return cls(STATIC, formula=formula)

    @classmethod
    def dynamic(cls, projector: int) -> RevisionStep:
        return cls(DYNAMIC, projector=projector)

    def describe(self, L: PropertyLattice) -> str:
        if self.kind == STATIC:
            return f"static {self.formula}"
        return f"dynamic {L.label(self.projector)}"

    def to_dict(self, L: PropertyLattice) -> dict:
        if self.kind == STATIC:
            return {"type": STATIC, "formula": self.formula.labels()}
        return {"type": DYNAMIC, "projector": L.label(self.projector)}


@dataclass(frozen=True)
class ConsequenceRelation:
    lattice: PropertyLattice
    antecedent: Downset
    epoch: int = 0
    trace: tuple = field(default=())

    def __post_init__(self):
        if self.antecedent.lattice is not self.lattice:
            raise DomainError("antecedent belongs to a different lattice")

    @classmethod
    def of(cls, L: PropertyLattice, generators: Iterable = ("1",)) -> ConsequenceRelation:
        return cls(L, Downset.generated(L, generators))

    @property
    def inconsistent(self) -> bool:
        return self.antecedent.mask == self.lattice.down[self.lattice.bottom]

    def to_dict(self) -> dict:
        return {
            "antecedent": str(self.antecedent),
            "epoch": self.epoch,
            "inconsistent": self.inconsistent,
        }


def _check(rel: ConsequenceRelation, *downsets: Downset) -> None:
    for d in downsets:
        if d.lattice is not rel.lattice:
            raise DomainError("formula belongs to a different lattice")


def entails(rel: ConsequenceRelation, alpha: Downset, beta: Downset) -> bool:
    _check(rel, alpha, beta)
    return not rel.antecedent.mask & alpha.mask & ~beta.mask


def consequents(rel: ConsequenceRelation, cap: int = DEFAULT_DOWNSET_CAP) -> list[Downset]:
    A = rel.antecedent.mask
    L = rel.lattice
    return [Downset(L, m) for m in enumerate_downset_masks(L, cap) if not A & ~m]


def static_revise(rel: ConsequenceRelation, alpha: Downset) -> ConsequenceRelation:
    _check(rel, alpha)
    return ConsequenceRelation(
        rel.lattice,
        rel.antecedent & alpha,
        rel.epoch,
        rel.trace + (RevisionStep.static(alpha),),
    )


def dynamic_revise(rel: ConsequenceRelation, a) -> ConsequenceRelation:
    L = rel.lattice
    a = L.element(a) if isinstance(a, str) else L._own(a)
    return ConsequenceRelation(
        L,
        Downset(L, lift_mask(L, a, rel.antecedent.mask)),
        rel.epoch + 1,
        rel.trace + (RevisionStep.dynamic(a),),
    )


def apply_step(rel: ConsequenceRelation, step: RevisionStep) -> ConsequenceRelation:
    if step.kind == STATIC:
        return static_revise(rel, step.formula)
    if step.kind == DYNAMIC:
        return dynamic_revise(rel, step.projector)
    raise ValueError(f"unknown revision step kind {step.kind!r}")


@dataclass
class Trace:
    initial: ConsequenceRelation
    states: list = field(default_factory=list)  # (step, relation) pairs

    @property
    def final(self) -> ConsequenceRelation:
        return self.states[-1][1] if self.states else self.initial

    def to_dict(self) -> dict:
        L = self.initial.lattice
        return {
            "initial": self.initial.to_dict(),
            "steps": [{"step": s.to_dict(L), **r.to_dict()} for s, r in self.states],
            "final": self.final.to_dict(),
        }


def run_script(rel0: ConsequenceRelation, steps: Iterable[RevisionStep]) -> Trace:
    trace = Trace(rel0)
    rel = rel0
    for step in steps:
        rel = apply_step(rel, step)
        trace.states.append((step, rel))
    return trace


def parse_script(L: PropertyLattice, data: dict) -> tuple[ConsequenceRelation, list[RevisionStep]]:
    """Turn a decoded script file into a starting relation and steps.

    Unknown labels raise :class:`DomainError`.
    """

    def gen(labels):
        if not isinstance(labels, list):
            raise DomainError(f"a downset is given as a list of labels, got {labels!r}")
        return Downset.generated(L, [_label(L, x) for x in labels])

    rel = ConsequenceRelation(L, gen(data.get("antecedent", [L.label(L.top)])))
    steps = []
    for raw in data["steps"]:
        kind = raw.get("type")
        if kind == STATIC:
            steps.append(RevisionStep.static(gen(raw.get("formula"))))
        elif kind == DYNAMIC:
            steps.append(RevisionStep.dynamic(_label(L, raw.get("projector"))))
        else:
            raise DomainError(f"unknown step type {kind!r}")
    return rel, steps


def _label(L: PropertyLattice, label) -> int:
    try:
        return L.element(str(label))
    except (KeyError, DomainError):
        raise DomainError(f"unknown element label {label!r}") from None


# -- order dependence ---------------------------------------------------------


@dataclass(frozen=True)
class OrderWitness:
    projector: int
    B: Downset
    C: Downset

    @property
    def D(self) -> Downset:
        """Lift of the meet: static first, then dynamic."""
        L = self.B.lattice
        return Downset(L, lift_mask(L, self.projector, self.B.mask & self.C.mask))

    @property
    def E(self) -> Downset:
        """Meet with the lift: dynamic first, then static."""
        L = self.B.lattice
        return Downset(L, self.B.mask & lift_mask(L, self.projector, self.C.mask))

    def to_dict(self) -> dict:
        L = self.B.lattice
        return {
            "a": L.label(self.projector),
            "B": str(self.B),
            "C": str(self.C),
            "D": str(self.D),
            "E": str(self.E),
        }


def is_order_witness(a: int, B: Downset, C: Downset) -> bool:
    return OrderWitness(a, B, C).D != OrderWitness(a, B, C).E


def find_order_witness(L: PropertyLattice, cap: int = DEFAULT_DOWNSET_CAP) -> OrderWitness | None:
    """First ``(a, B, C)`` where static and dynamic revision do not commute.

    Search order: ``a`` by element id, then ``B`` and ``C`` in enumeration
    order of D(L).
    """
    masks = enumerate_downset_masks(L, cap)
    for a in range(L.n):
        lifts = {c: lift_mask(L, a, c) for c in masks}
        for B, C in product(masks, repeat=2):
            if lift_mask(L, a, B & C) != B & lifts[C]:
                return OrderWitness(a, Downset(L, B), Downset(L, C))
    return None


def order_paths(rel: ConsequenceRelation, B: Downset, a) -> tuple[Trace, Trace]:
    """Both orders of (static B, dynamic a) from the same relation."""
    a = rel.lattice.element(a) if isinstance(a, str) else a
    first = run_script(rel, [RevisionStep.static(B), RevisionStep.dynamic(a)])
    second = run_script(rel, [RevisionStep.dynamic(a), RevisionStep.static(B)])
    return first, second


# -- exhaustive suites --------------------------------------------------------


def _fail_all(chk, bad: np.ndarray, witness) -> None:
    """Record every true entry of ``bad``; ``witness`` maps an index tuple."""
    chk.domain_size += bad.size
    count = int(bad.sum())
    if count:
        idx = np.argwhere(bad)
        for row in idx[: 5 - len(chk.witnesses)]:
            chk.witnesses.append(witness(*map(int, row)))
        chk.failures += count


def consequence_axiom_suite(L: PropertyLattice, cap: int = DEFAULT_DOWNSET_CAP) -> LawReport:
    rep = LawReport("consequence")
    masks = enumerate_downset_masks(L, cap)
    show = [str(Downset(L, m)) for m in masks]
    M = np.array(masks, dtype=object if L.n > 62 else np.int64)
    n = len(masks)
    imp = np.array(
        [[implies_mask(L, s, t) for t in masks] for s in masks],
        dtype=M.dtype,
    )
    rep.observations["downsets"] = n

    refl = rep.check("reflexivity: α ⊢ α")
    cut = rep.check("cut: α∧β ⊢ γ and α ⊢ β imply α ⊢ γ")
    mono = rep.check("restricted monotonicity: α ⊢ β and α ⊢ γ imply α∧β ⊢ γ")
    internal = rep.check("internalizing connective: α ⊢ β iff ⊢ (α → β)")
    beta, gamma = M[:, None], M[None, :]
    for A in masks:
        X = A & M  # A ∧ α for every α
        _fail_all(refl, (X & ~M) != 0, lambda i: [show[masks.index(A)], show[i]])
        for i, x in enumerate(X):
            ent_b = (x & ~M) == 0  # α ⊢ β, indexed by β
            lhs = ((x & beta) & ~gamma) == 0  # α∧β ⊢ γ
            ent_g = ((x & ~gamma) == 0)  # α ⊢ γ
            _fail_all(
                cut,
                lhs & ent_b[:, None] & ~ent_g,
                lambda b, g, i=i, A=A: [show[masks.index(A)], show[i], show[b], show[g]],
            )
            _fail_all(
                mono,
                ent_b[:, None] & ent_g & ~lhs,
                lambda b, g, i=i, A=A: [show[masks.index(A)], show[i], show[b], show[g]],
            )
            via = (A & ~imp[i]) == 0  # ⊢ (α → β), indexed by β
            _fail_all(internal, ent_b != via, lambda b, i=i, A=A: [show[masks.index(A)], show[i], show[b]])
    return rep


def crs_axiom_suite(L: PropertyLattice, kind: str = STATIC, cap: int = DEFAULT_DOWNSET_CAP) -> LawReport:
    if kind == STATIC:
        return _crs_static(L, cap)
    if kind == DYNAMIC:
        return _crs_dynamic(L, cap)
    raise ValueError(f"operator kind must be {STATIC!r} or {DYNAMIC!r}")


def _consistent(L, masks):
    zero = L.down[L.bottom]
    return [m for m in masks if m != zero]


def _crs_static(L: PropertyLattice, cap: int) -> LawReport:
    rep = LawReport("crs-static")
    masks = enumerate_downset_masks(L, cap)
    show = {m: str(Downset(L, m)) for m in masks}
    one, zero = L.down[L.top], L.down[L.bottom]
    rels = _consistent(L, masks)
    M = np.array(masks, dtype=object if L.n > 62 else np.int64)
    neg = {m: implies_mask(L, m, zero) for m in masks}
    rep.observations["relations"] = len(rels)
    rep.observations["formulas"] = len(masks)

    c1 = rep.check("F(⊤, ⊢) = ⊢")
    c2 = rep.check("F(α, ⊢) = 0 iff ⊢ ¬α")
    c3 = rep.check("F(β, F(α, ⊢)) = F(α, ⊢) iff α ⊢ β")
    for A in rels:
        c1.expect(A & one == A, lambda: [show[A]])
        for al in masks:
            c2.expect((A & al == zero) == (not A & ~neg[al]), lambda: [show[A], show[al]])
        X = A & M
        bad = (((X[:, None] & M[None, :]) == X[:, None]) != ((X[:, None] & ~M[None, :]) == 0))
        _fail_all(c3, bad, lambda i, j, A=A: [show[A], show[masks[i]], show[masks[j]]])
    return rep


def _crs_dynamic(L: PropertyLattice, cap: int) -> LawReport:
    rep = LawReport("crs-dynamic")
    masks = enumerate_downset_masks(L, cap)
    show = {m: str(Downset(L, m)) for m in masks}
    zero = L.down[L.bottom]
    rels = _consistent(L, masks)
    lab = L.labels
    rep.observations["relations"] = len(rels)
    rep.observations["projectors"] = L.n

    c1 = rep.check("F(⊤, ⊢) = ⊢")
    c2 = rep.check("F(a, ⊢) = 0 iff A <= ↓¬a")
    c3 = rep.check("F(b, F(a, ⊢)) = F(a, ⊢) iff F(a, ⊢) <= ↓b")
    for A in rels:
        c1.expect(lift_mask(L, L.top, A) == A, lambda: [show[A]])
        for a in range(L.n):
            X = lift_mask(L, a, A)
            c2.expect((X == zero) == (not A & ~L.down[L.ortho(a)]), lambda: [show[A], lab[a]])
            for b in range(L.n):
                c3.expect(
                    (lift_mask(L, b, X) == X) == (not X & ~L.down[b]),
                    lambda: [show[A], lab[a], lab[b]],
                )
    return rep


def revision_op_axiom_suite(L: PropertyLattice, kind: str = STATIC, cap: int = DEFAULT_DOWNSET_CAP) -> LawReport:
    """The five revision-operation axioms for ``*`` = ∧ on D(L) or Sasaki on L."""
    if kind == STATIC:
        masks = enumerate_downset_masks(L, cap)
        dom = masks
        one, zero = L.down[L.top], L.down[L.bottom]
        star = lambda x, y: x & y  # noqa: E731
        adj = lambda x, y: implies_mask(L, x, y)  # noqa: E731
        leq = lambda x, y: not x & ~y  # noqa: E731
        neg = lambda x: implies_mask(L, x, zero)  # noqa: E731
        show = lambda x: str(Downset(L, x))  # noqa: E731
        name = "revision-ops-static"
    elif kind == DYNAMIC:
        dom = list(range(L.n))
        one, zero = L.top, L.bottom
        star, adj, leq, neg = L.sasaki_project, L.sasaki_hook, L.leq, L.ortho
        show = L.label
        name = "revision-ops-dynamic"
    else:
        raise ValueError(f"operator kind must be {STATIC!r} or {DYNAMIC!r}")

    rep = LawReport(name)
    rep.observations["domain"] = len(dom)
    unit = rep.check("1*a = a*1 = a")
    for x in dom:
        unit.expect(star(one, x) == x and star(x, one) == x, lambda: [show(x)])
    below = rep.check("a*b <= a")
    orth = rep.check("a <= ¬b iff a*b = 0")
    fix = rep.check("b <= a iff a*b = b")
    tab = {}
    for x, y in product(dom, repeat=2):
        s = tab[x, y] = star(x, y)
        below.expect(leq(s, x), lambda: [show(x), show(y)])
        orth.expect(leq(x, neg(y)) == (s == zero), lambda: [show(x), show(y)])
        fix.expect(leq(y, x) == (s == y), lambda: [show(x), show(y)])
    chk = rep.check("adjunction a*b <= c iff b <= a⇝c")
    if kind == STATIC and L.n <= 62:
        M = np.array(dom, dtype=np.int64)
        for x in dom:
            S = x & M  # indexed by b
            H = np.array([adj(x, c) for c in dom], dtype=np.int64)  # indexed by c
            bad = ((S[:, None] & ~M[None, :]) == 0) != ((M[:, None] & ~H[None, :]) == 0)
            _fail_all(chk, bad, lambda i, j, x=x: [show(x), show(dom[i]), show(dom[j])])
    else:
        for x in dom:
            hooks = {c: adj(x, c) for c in dom}
            for y, c in product(dom, repeat=2):
                chk.expect(leq(tab[x, y], c) == leq(y, hooks[c]), lambda: [show(x), show(y), show(c)])
    return rep


def revision_suites(L: PropertyLattice, cap: int = DEFAULT_DOWNSET_CAP) -> list[LawReport]:
    return [
        consequence_axiom_suite(L, cap),
        crs_axiom_suite(L, STATIC, cap),
        crs_axiom_suite(L, DYNAMIC, cap),
        revision_op_axiom_suite(L, STATIC, cap),
        revision_op_axiom_suite(L, DYNAMIC, cap),
    ]


__all__ = [
    "ConsequenceRelation",
    "OrderWitness",
    "RevisionStep",
    "Trace",
    "apply_step",
    "consequence_axiom_suite",
    "consequents",
    "crs_axiom_suite",
    "dynamic_revise",
    "entails",
    "find_order_witness",
    "is_order_witness",
    "order_paths",
    "parse_script",
    "revision_op_axiom_suite",
    "revision_suites",
    "run_script",
    "static_revise",
]
