from itertools import product

import pytest

import oracles
from iql.contexts import (
    SpectralPoint,
    SpectralPresheaf,
    alpha,
    enumerate_contexts,
    projectors_of,
    restrict_point,
    spectrum,
)
from iql.daseinisation import das_prop_suite, dasein_table, inner_das, outer_das
from iql.instances import fixture_path, load_instance
from iql.lattice import DomainError, LatticeError


def names(presheaf):
    return [presheaf.describe(v) for v in range(len(presheaf))]


@pytest.mark.parametrize("name", ["mo2", "b23", "c3"])
def test_contexts_match_decomposition_oracle(name, request):
    L = request.getfixturevalue(name)
    ps = SpectralPresheaf(L)
    assert [V.blocks for V in ps] == oracles.contexts(L)
    for v, w in product(range(len(ps)), repeat=2):
        assert ps.is_subcontext(w, v) == oracles.subcontext(L, ps[w].blocks, ps[v].blocks)


def test_mo2_contexts(mo2_sheaf):
    assert names(mo2_sheaf) == ["{a, ~a}", "{b, ~b}"]
    assert mo2_sheaf.covers() == []


def test_boolean_2_3_contexts(b23_sheaf):
    assert names(b23_sheaf) == ["{e1, e2, e3}", "{e1, ~e1}", "{e2, ~e2}", "{e3, ~e3}"]
    assert sorted(b23_sheaf.covers()) == [(1, 0), (2, 0), (3, 0)]


def test_c3_demo_contexts(c3_sheaf):
    assert names(c3_sheaf) == [
        "{e1, e2, e3}", "{e1, ~e1}", "{e2, c, ~b}", "{e2, ~e2}", "{e3, a}", "{c, ~c}", "{b, ~b}",
    ]
    assert c3_sheaf.minimal == [1, 3, 4, 5, 6]
    assert sorted(c3_sheaf.covers()) == sorted([(1, 0), (3, 0), (4, 0), (3, 2), (5, 2), (6, 2)])
    for v in c3_sheaf.minimal:
        assert c3_sheaf[v].is_minimal_form


def test_chain_has_no_contexts():
    L = load_instance(fixture_path("chain-2.json"))
    assert len(enumerate_contexts(L)) == 0


def test_non_orthomodular_refused(o6):
    with pytest.raises(LatticeError):
        SpectralPresheaf(o6)


def test_projectors_and_spectrum(mo2_sheaf, b23, b23_sheaf):
    L = mo2_sheaf.lattice
    assert sorted(L.label(x) for x in projectors_of(L, mo2_sheaf[0])) == ["0", "1", "a", "~a"]
    assert len(projectors_of(b23, b23_sheaf[0])) == 8
    assert sorted(b23.label(x) for x in projectors_of(b23, b23_sheaf[1])) == ["0", "1", "e1", "~e1"]
    assert len(spectrum(b23_sheaf[0])) == 3 and len(spectrum(b23_sheaf[1])) == 2


def test_restriction(b23, b23_sheaf):
    e = b23.element
    full, coarse = 0, 1  # {e1,e2,e3} and {e1, ~e1}
    assert restrict_point(b23_sheaf, SpectralPoint(full, e("e2")), coarse) == SpectralPoint(coarse, e("~e1"))
    assert restrict_point(b23_sheaf, SpectralPoint(full, e("e1")), coarse) == SpectralPoint(coarse, e("e1"))
    assert restrict_point(b23_sheaf, SpectralPoint(full, e("e3")), full) == SpectralPoint(full, e("e3"))
    with pytest.raises(DomainError):
        restrict_point(b23_sheaf, SpectralPoint(coarse, e("e1")), full)


def test_restriction_is_functorial(c3_sheaf):
    for v1 in range(len(c3_sheaf)):
        for v2 in c3_sheaf.below[v1]:
            for v3 in c3_sheaf.below[v2]:
                for b in c3_sheaf[v1].blocks:
                    via = c3_sheaf.restrict_block(c3_sheaf.restrict_block(b, v1, v2), v2, v3)
                    assert via == c3_sheaf.restrict_block(b, v1, v3)


def test_alpha(mo2, mo2_sheaf, b23, b23_sheaf):
    assert alpha(mo2, mo2_sheaf[0], mo2.element("a")) == {mo2.element("a")}
    assert alpha(b23, b23_sheaf[0], b23.element("~e3")) == {b23.element("e1"), b23.element("e2")}
    assert alpha(b23, b23_sheaf[2], b23.top) == set(b23_sheaf[2].blocks)
    with pytest.raises(DomainError):
        alpha(mo2, mo2_sheaf[0], mo2.element("b"))


def test_alpha_is_boolean_isomorphism(c3, c3_sheaf):
    for V in c3_sheaf:
        proj = projectors_of(c3, V)
        for q, r in product(proj, repeat=2):
            assert alpha(c3, V, c3.meet(q, r)) == alpha(c3, V, q) & alpha(c3, V, r)
            assert alpha(c3, V, c3.join(q, r)) == alpha(c3, V, q) | alpha(c3, V, r)
        for q in proj:
            assert alpha(c3, V, c3.ortho(q)) == set(V.blocks) - alpha(c3, V, q)


# -- daseinisation ------------------------------------------------------------


def test_daseinisation_examples(mo2, mo2_sheaf, c3, c3_sheaf):
    e = mo2.element
    Va = mo2_sheaf[0]
    assert outer_das(mo2, e("b"), Va) == e("1")
    assert inner_das(mo2, e("b"), Va) == e("0")
    assert outer_das(mo2, e("a"), Va) == inner_das(mo2, e("a"), Va) == e("a")
    # the ray (1,0,1) seen from the coordinate context is approximated by e1 ⊕ e3
    assert c3.label(outer_das(c3, c3.element("c"), c3_sheaf[0])) == "~e2"
    assert c3.label(inner_das(c3, c3.element("a"), c3_sheaf[1])) == "e1"


@pytest.mark.parametrize("name", ["mo2", "c3"])
def test_daseinisation_matches_oracle(name, request):
    L = request.getfixturevalue(name)
    ps = SpectralPresheaf(L)
    for p in range(L.n):
        t = dasein_table(ps, p)
        for V in ps:
            assert t.outer[V.id] == oracles.outer(L, p, V.blocks)
            assert t.inner[V.id] == oracles.inner(L, p, V.blocks)


@pytest.mark.parametrize("name", ["mo2", "c2", "b22", "b23", "c3"])
def test_daseinisation_suite(name, request):
    rep = das_prop_suite(SpectralPresheaf(request.getfixturevalue(name)))
    assert rep.passed, [c.to_dict() for c in rep.failed()]


def test_image_misses_top_when_every_context_bounds_it(c3_sheaf):
    obs = das_prop_suite(c3_sheaf).observations
    assert obs["outer_image_misses_top"] == ["e2"]
    assert obs["inner_image_misses_bottom"] == ["~e2"]
