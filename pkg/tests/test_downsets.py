from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import _lattice
from iql.contexts import alpha
from iql.daseinisation import inner_das
from iql.downsets import (
    Downset,
    bottom,
    contextwise_value,
    d_implies,
    d_join,
    d_meet,
    d_neg,
    enumerate_downsets,
    heyting_law_suite,
    is_downset,
    lift_sasaki,
    principal,
    top,
)
from iql.lattice import CapacityError, DomainError


def members(L, S):
    return sorted(L.label(x) for x in S.members)


def test_principal(mo2):
    assert members(mo2, principal(mo2, mo2.bottom)) == ["0"]
    assert principal(mo2, mo2.top) == top(mo2)
    assert members(mo2, principal(mo2, mo2.element("a"))) == ["0", "a"]


def test_meet_join(mo2):
    a, na, b = (principal(mo2, mo2.element(x)) for x in ("a", "~a", "b"))
    assert d_meet(a, b) == bottom(mo2)
    u = d_join(a, na)
    assert members(mo2, u) == ["0", "a", "~a"] and u != top(mo2)
    assert d_meet(u, top(mo2)) == u
    assert str(u) == "↓a∪↓~a" and u.maximal() == [mo2.element("a"), mo2.element("~a")]


def test_implication_examples(mo2):
    a, b = principal(mo2, mo2.element("a")), principal(mo2, mo2.element("b"))
    assert members(mo2, d_implies(a, b)) == ["0", "b", "~a", "~b"]
    assert d_implies(a, a) == top(mo2)
    assert d_implies(bottom(mo2), b) == top(mo2)
    assert members(mo2, d_neg(a)) == ["0", "b", "~a", "~b"]
    assert d_neg(bottom(mo2)) == top(mo2)
    assert d_neg(top(mo2)) == bottom(mo2)


@pytest.mark.parametrize("name", ["mo2", "b22", "o6", "b23"])
def test_enumeration_and_implication_match_oracle(name, request):
    L = request.getfixturevalue(name)
    ours = enumerate_downsets(L)
    ref = oracles.downsets(L)
    assert {frozenset(d.members) for d in ours} == set(ref)
    for s, t in product(ours, repeat=2):
        want = oracles.d_implies(L, frozenset(s.members), frozenset(t.members))
        assert frozenset(d_implies(s, t).members) == want


def test_mo2_has_seventeen(mo2):
    assert len(enumerate_downsets(mo2)) == 17


def test_cap(c3):
    with pytest.raises(CapacityError):
        enumerate_downsets(c3, cap=50)


def test_contextwise_value(mo2, mo2_sheaf, c3, c3_sheaf):
    Va = mo2_sheaf[0]
    assert contextwise_value(principal(mo2, mo2.element("b")), Va) == frozenset()
    assert contextwise_value(bottom(mo2), Va) == frozenset()
    for L, ps in ((mo2, mo2_sheaf), (c3, c3_sheaf)):
        for p in range(L.n):
            for V in ps:
                assert contextwise_value(principal(L, p), V) == alpha(L, V, inner_das(L, p, V))


def test_lift_sasaki(mo2, c3):
    a = mo2.element("a")
    assert lift_sasaki(a, top(mo2)) == principal(mo2, a)
    assert lift_sasaki(a, bottom(mo2)) == bottom(mo2)
    assert lift_sasaki(c3.element("a"), principal(c3, c3.element("c"))) == principal(c3, c3.element("e1"))


@pytest.mark.parametrize("name", ["mo2", "c3"])
def test_lift_agrees_with_principal_and_oracle(name, request):
    L = request.getfixturevalue(name)
    ds = enumerate_downsets(L)
    for a in range(L.n):
        for b in range(L.n):
            assert lift_sasaki(a, principal(L, b)) == principal(L, L.sasaki_project(a, b))
        for s in ds:
            assert frozenset(lift_sasaki(a, s).members) == oracles.lift(L, a, frozenset(s.members))
        for s, t in product(ds[::5], repeat=2):
            if s <= t:
                assert lift_sasaki(a, s) <= lift_sasaki(a, t)


@pytest.mark.parametrize("name", ["mo2", "b22", "o6", "b23", "c2", "c3"])
def test_heyting_suite(name, request):
    rep = heyting_law_suite(request.getfixturevalue(name))
    assert rep.passed, [c.to_dict() for c in rep.failed()]


def test_mo2_suite_sizes(mo2):
    rep = heyting_law_suite(mo2)
    assert rep.observations["downsets"] == 17
    assert rep["Heyting adjunction S & R <= T <=> R <= (S -> T)"].domain_size == 17**3
    assert rep.observations["first_join_strictness_witness"] == ["a", "~a"]


def test_downset_validation(mo2, c3):
    with pytest.raises(ValueError):
        Downset.from_members(mo2, [mo2.element("a")])  # misses 0
    assert not is_downset(mo2, 1 << mo2.element("a"))
    with pytest.raises(DomainError):
        d_meet(top(mo2), top(c3))


@given(st.integers(0, (1 << 12) - 1), st.integers(0, (1 << 12) - 1), st.integers(0, 11))
def test_random_generated_downsets(s_gen, t_gen, a):
    if "L" not in _C3:
        _C3["L"] = _lattice("c3-demo")
    L = _C3["L"]
    S = Downset.generated(L, [x for x in range(12) if s_gen >> x & 1])
    T = Downset.generated(L, [x for x in range(12) if t_gen >> x & 1])
    assert is_downset(L, S.mask)
    imp = d_implies(S, T)
    assert d_meet(S, imp) <= T
    assert lift_sasaki(a, S) <= principal(L, a)


_C3 = {}
