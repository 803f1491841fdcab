"""Clopen subobjects of the spectral presheaf and their bi-Heyting operations.

In the finite case every subset of a spectrum is clopen, so a subobject is a
choice of block set per context that is closed under restriction to coarser
contexts. A subobject is held as one bitmask over all spectral points, so
meets, joins and order tests are integer operations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .contexts import SpectralPoint, SpectralPresheaf, alpha
from .daseinisation import outer_das
from .lattice import CapacityError, bits
from .report import Check, LawReport

DEFAULT_SUBOBJECT_CAP = 1 << 16
EXHAUSTIVE_LIMIT = 128


class ClopenSubobject:
    """A subobject stored as a bitmask over the presheaf's global point index."""

    __slots__ = ("mask", "presheaf")

    def __init__(self, mask: int, presheaf: SpectralPresheaf):
        self.mask = mask
        self.presheaf = presheaf

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClopenSubobject):
            return NotImplemented
        return self.mask == other.mask and self.presheaf is other.presheaf

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return f"ClopenSubobject({self.key()!r})"

    @property
    def parts(self) -> tuple[frozenset, ...]:
        ps = self.presheaf
        out = [set() for _ in ps.contexts]
        for i in bits(self.mask):
            pt = ps.points[i]
            out[pt.context].add(pt.block)
        return tuple(frozenset(p) for p in out)

    def __getitem__(self, v: int) -> frozenset:
        return self.parts[v]

    def __le__(self, other: ClopenSubobject) -> bool:
        _same(self, other)
        return not self.mask & ~other.mask

    def __and__(self, other: ClopenSubobject) -> ClopenSubobject:
        return sub_meet(self, other)

    def __or__(self, other: ClopenSubobject) -> ClopenSubobject:
        return sub_join(self, other)

    def is_empty(self) -> bool:
        return not self.mask

    def describe(self) -> list[list[str]]:
        lab = self.presheaf.lattice.labels
        return [sorted(lab[b] for b in part) for part in self.parts]

    def key(self) -> str:
        return "|".join(",".join(p) for p in self.describe())


def _same(s: ClopenSubobject, t: ClopenSubobject) -> None:
    if s.presheaf is not t.presheaf:
        raise ValueError("subobjects belong to different presheaves")


def _mask_of(presheaf: SpectralPresheaf, parts: Sequence) -> int:
    if len(parts) != len(presheaf):
        raise ValueError("one component per context is required")
    mask = 0
    for v, part in enumerate(parts):
        for b in part:
            pt = SpectralPoint(v, b)
            if pt not in presheaf.point_index:
                raise ValueError(f"component {v} contains a non-point {b!r}")
            mask |= 1 << presheaf.point_index[pt]
    return mask


def _closed(presheaf: SpectralPresheaf, mask: int) -> bool:
    return all(not presheaf.shadow[i] & ~mask for i in bits(mask))


def is_subobject(presheaf: SpectralPresheaf, parts: Sequence) -> bool:
    """Whether per-context block sets are closed under restriction."""
    return _closed(presheaf, _mask_of(presheaf, parts))


def make_subobject(presheaf: SpectralPresheaf, parts: Sequence) -> ClopenSubobject:
    mask = _mask_of(presheaf, parts)
    if not _closed(presheaf, mask):
        raise ValueError("components are not closed under restriction")
    return ClopenSubobject(mask, presheaf)


def empty_sub(presheaf: SpectralPresheaf) -> ClopenSubobject:
    return ClopenSubobject(0, presheaf)


def full_sub(presheaf: SpectralPresheaf) -> ClopenSubobject:
    return ClopenSubobject((1 << len(presheaf.points)) - 1, presheaf)


def _saturate_mask(presheaf: SpectralPresheaf, mask: int) -> int:
    out = 0
    for i in bits(mask):
        out |= presheaf.shadow[i]
    return out


def saturate(presheaf: SpectralPresheaf, raw: Sequence) -> ClopenSubobject:
    """Least subobject containing the given per-context point sets."""
    # restriction composes, so each point's direct shadow is all that is needed
    return ClopenSubobject(_saturate_mask(presheaf, _mask_of(presheaf, raw)), presheaf)


def delta_o_sub(presheaf: SpectralPresheaf, P: int) -> ClopenSubobject:
    L = presheaf.lattice
    return make_subobject(presheaf, [alpha(L, V, outer_das(L, P, V)) for V in presheaf])


def sub_meet(s: ClopenSubobject, t: ClopenSubobject) -> ClopenSubobject:
    _same(s, t)
    return ClopenSubobject(s.mask & t.mask, s.presheaf)


def sub_join(s: ClopenSubobject, t: ClopenSubobject) -> ClopenSubobject:
    _same(s, t)
    return ClopenSubobject(s.mask | t.mask, s.presheaf)


def _implies_mask(presheaf: SpectralPresheaf, s: int, t: int) -> int:
    bad = s & ~t
    out = 0
    for i, sh in enumerate(presheaf.shadow):
        if not sh & bad:
            out |= 1 << i
    return out


def heyting_implies_sub(s: ClopenSubobject, t: ClopenSubobject) -> ClopenSubobject:
    """Points whose restriction to every V' ⊆ V lands in T whenever it lands in S."""
    _same(s, t)
    return ClopenSubobject(_implies_mask(s.presheaf, s.mask, t.mask), s.presheaf)


def heyting_neg_sub(s: ClopenSubobject) -> ClopenSubobject:
    return heyting_implies_sub(s, empty_sub(s.presheaf))


def coheyting_diff(t: ClopenSubobject, s: ClopenSubobject) -> ClopenSubobject:
    """``T <- S``: the least R with ``T <= R | S``."""
    _same(t, s)
    return ClopenSubobject(_saturate_mask(t.presheaf, t.mask & ~s.mask), t.presheaf)


def coheyting_neg_sub(s: ClopenSubobject) -> ClopenSubobject:
    return coheyting_diff(full_sub(s.presheaf), s)


def _subsets_containing(required: frozenset, blocks: tuple[int, ...]):
    optional = [b for b in blocks if b not in required]
    for r in range(len(optional) + 1):
        for extra in combinations(optional, r):
            yield required | frozenset(extra)


def enumerate_subobjects(presheaf: SpectralPresheaf, cap: int = DEFAULT_SUBOBJECT_CAP) -> list[ClopenSubobject]:
    """Every clopen subobject, finest contexts decided first."""
    order = sorted(range(len(presheaf)), key=lambda v: (-len(presheaf[v].blocks), v))
    parts: list[frozenset | None] = [None] * len(presheaf)
    out: list[ClopenSubobject] = []

    def fill(i: int) -> None:
        if i == len(order):
            if len(out) >= cap:
                raise CapacityError(f"more than {cap} clopen subobjects")
            out.append(make_subobject(presheaf, parts))
            return
        w = order[i]
        required = frozenset(
            presheaf.restrict_block(p, v, w)
            for v in order[:i]
            if w in presheaf.below[v] and v != w
            for p in parts[v]
        )
        for choice in _subsets_containing(required, presheaf[w].blocks):
            parts[w] = choice
            fill(i + 1)
        parts[w] = None

    fill(0)
    return sorted(out, key=lambda s: s.mask)


def image_subobjects(presheaf: SpectralPresheaf) -> list[ClopenSubobject]:
    """Outer daseinisation images closed under contextwise meet and join."""
    L = presheaf.lattice
    found: dict[ClopenSubobject, None] = {}
    for p in range(L.n):
        found.setdefault(delta_o_sub(presheaf, p))
    frontier = list(found)
    while frontier:
        current = list(found)
        new = []
        for s in frontier:
            for t in current:
                for r in (s & t, s | t):
                    if r not in found:
                        found[r] = None
                        new.append(r)
        frontier = new
    return sorted(found, key=lambda s: s.mask)


def subobject_domain(presheaf: SpectralPresheaf, source: str = "auto", limit: int = EXHAUSTIVE_LIMIT):
    """Subobjects to quantify over: ``exhaustive``, ``image`` or ``auto``.

    ``auto`` is exhaustive when at most ``limit`` subobjects exist.
    """
    if source == "image":
        return "image", image_subobjects(presheaf)
    if source == "exhaustive":
        return "exhaustive", enumerate_subobjects(presheaf)
    if source != "auto":
        raise ValueError(f"unknown subobject source {source!r}")
    try:
        subs = enumerate_subobjects(presheaf, cap=limit)
        return "exhaustive", subs
    except CapacityError:
        return "image", image_subobjects(presheaf)


def biheyting_suite(presheaf: SpectralPresheaf, source: str = "auto") -> LawReport:
    L = presheaf.lattice
    lab = L.labels
    rep = LawReport("presheaf")
    zero, top = empty_sub(presheaf), full_sub(presheaf)
    images = [delta_o_sub(presheaf, p) for p in range(L.n)]

    chk = rep.check("outer daseinisation images are subobjects")
    for p, s in enumerate(images):
        chk.expect(_closed(presheaf, s.mask), [lab[p]])
    chk = rep.check("outer image of 0 is empty, of 1 is the whole presheaf")
    chk.expect(images[L.bottom] == zero and images[L.top] == top, [])
    chk = rep.check("outer daseinisation preserves joins")
    meet_chk = rep.check("outer daseinisation of a meet lies below the meet of images")
    strict = []
    for p, q in product(range(L.n), repeat=2):
        chk.expect(images[L.join(p, q)] == images[p] | images[q], [lab[p], lab[q]])
        lhs, rhs = images[L.meet(p, q)], images[p] & images[q]
        meet_chk.expect(lhs <= rhs, [lab[p], lab[q]])
        if lhs != rhs:
            strict.append([lab[p], lab[q]])
    chk = rep.check("outer daseinisation is injective and order-preserving")
    for p, q in product(range(L.n), repeat=2):
        chk.expect(
            (images[p] == images[q]) == (p == q) and (L.leq(p, q) <= (images[p] <= images[q])),
            [lab[p], lab[q]],
        )
    rep.observations["meet_strictness_witnesses"] = len(strict)
    rep.observations["first_meet_strictness_witness"] = strict[0] if strict else None

    kind, domain = subobject_domain(presheaf, source)
    rep.observations["subobject_domain"] = kind
    rep.observations["subobject_domain_size"] = len(domain)
    masks = [x.mask for x in domain]
    n = len(masks)
    full = top.mask

    c_sub = rep.check("implication and co-Heyting difference are subobjects")
    c_h = rep.check("Heyting adjunction S & R <= T <=> R <= (S -> T)")
    c_c = rep.check("co-Heyting adjunction (T <- S) <= R <=> T <= R | S")
    for si, sm in enumerate(masks):
        for ti, tm in enumerate(masks):
            imp = _implies_mask(presheaf, sm, tm)
            dif = _saturate_mask(presheaf, tm & ~sm)
            c_sub.expect(
                _closed(presheaf, imp) and _closed(presheaf, dif),
                lambda: [domain[si].key(), domain[ti].key()],
            )
            c_h.domain_size += n
            c_c.domain_size += n
            for ri, rm in enumerate(masks):
                if (not sm & rm & ~tm) != (not rm & ~imp):
                    c_h.fail([domain[si].key(), domain[ri].key(), domain[ti].key()])
                if (not dif & ~rm) != (not tm & ~(rm | sm)):
                    c_c.fail([domain[ti].key(), domain[si].key(), domain[ri].key()])
    c_nc = rep.check("non-contradiction S & ¬S = 0")
    c_em = rep.check("excluded middle S | ∼S = Σ")
    c_neg = rep.check("negations are subobjects")
    for x, sm in zip(domain, masks):
        neg = _implies_mask(presheaf, sm, 0)
        coneg = _saturate_mask(presheaf, full & ~sm)
        c_nc.expect(not sm & neg, lambda: [x.key()])
        c_em.expect(sm | coneg == full, lambda: [x.key()])
        c_neg.expect(_closed(presheaf, neg) and _closed(presheaf, coneg), lambda: [x.key()])
    return rep


# -- the triviality classifier ------------------------------------------------

FULL, EQUALS_T, MINIMAL, EMPTY_LOCAL, COUNTEREXAMPLE = "F", "T", "m", "e", "x"
OUTCOME_NAMES = {
    FULL: "equals-full",
    EQUALS_T: "equals-T",
    MINIMAL: "other/minimal-context",
    EMPTY_LOCAL: "other/empty-local-antecedent",
    COUNTEREXAMPLE: "other/theorem-scope-counterexample",
}


def classify_component(s: ClopenSubobject, t: ClopenSubobject, imp: ClopenSubobject, v: int) -> str:
    """Outcome code of ``(S -> T)_V`` given the precomputed implication."""
    ps = s.presheaf
    cm = ps.context_mask
    value = imp.mask & cm[v]
    if value == cm[v]:
        return FULL
    if value == t.mask & cm[v]:
        return EQUALS_T
    if v in ps.minimal:
        return MINIMAL
    if not s.mask & cm[v] and any(s.mask & cm[w] for w in ps.proper_subcontexts(v)):
        return EMPTY_LOCAL
    return COUNTEREXAMPLE


@dataclass
class ClassificationReport:
    source: str
    subobjects: list[ClopenSubobject]
    outcomes: list[str]  # one string per (S, T) pair, one char per context
    persistence: Check
    case2_discrepancies: int

    def counts(self) -> dict[str, int]:
        c = Counter(ch for row in self.outcomes for ch in row)
        return {OUTCOME_NAMES[k]: c.get(k, 0) for k in OUTCOME_NAMES}

    def counterexamples(self, limit: int = 5) -> list:
        n = len(self.subobjects)
        out = []
        for idx, row in enumerate(self.outcomes):
            for v, ch in enumerate(row):
                if ch == COUNTEREXAMPLE and len(out) < limit:
                    s, t = self.subobjects[idx // n], self.subobjects[idx % n]
                    out.append({"S": s.describe(), "T": t.describe(), "context": s.presheaf.describe(v)})
        return out

    def golden(self) -> dict[str, str]:
        """Outcome rows keyed by ``S.key() + " -> " + T.key()``."""
        n = len(self.subobjects)
        return {
            f"{self.subobjects[i // n].key()} -> {self.subobjects[i % n].key()}": row
            for i, row in enumerate(self.outcomes)
        }

    def summary(self) -> dict:
        return {
            "source": self.source,
            "subobjects": len(self.subobjects),
            "pairs": len(self.outcomes),
            "outcomes": self.counts(),
            "theorem_scope_counterexamples": self.counts()[OUTCOME_NAMES[COUNTEREXAMPLE]],
            "first_counterexamples": self.counterexamples(),
            "persistence_of_full": self.persistence.to_dict(),
            "case2_discrepancies": self.case2_discrepancies,
        }


def triviality_report(presheaf: SpectralPresheaf, source: str = "auto") -> ClassificationReport:
    """Classify ``(S -> T)_V`` as T_V, the full spectrum, or a tagged other."""
    kind, domain = subobject_domain(presheaf, source)
    zero = empty_sub(presheaf)
    persistence = Check("full at V stays full at every V' ⊆ V")
    outcomes = []
    case2 = 0
    for s, t in product(domain, repeat=2):
        imp = heyting_implies_sub(s, t)
        row = "".join(classify_component(s, t, imp, v) for v in range(len(presheaf)))
        outcomes.append(row)
        for v, ch in enumerate(row):
            if ch == FULL:
                for w in presheaf.proper_subcontexts(v):
                    persistence.expect(
                        row[w] == FULL,
                        lambda: [s.key(), t.key(), presheaf.describe(v), presheaf.describe(w)],
                    )
        if t == zero and s != zero and imp != zero:
            case2 += 1
    return ClassificationReport(kind, domain, outcomes, persistence, case2)
