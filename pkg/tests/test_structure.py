import pytest
from hypothesis import given, settings

from conftest import TRIANGLES, H, flag_structures

from hyperdual.core import canonical_form, count_summary, flags_from_arrows, labelled
from hyperdual.polynomial import GenusPolynomial, poly_subset_formula
from hyperdual.structure import (
    NotABouquet,
    NotPrimeConnected,
    alternating_quadruple,
    components_excluding_vertex,
    constant_poly_criterion,
    constant_term_criterion,
    decomposition_tree,
    hypertree_duality_check,
    intersection_graph,
    is_prime,
    join_decompose,
    rejoin,
    ribbon_expansion,
)


def test_expansion_single_stub():
    re = ribbon_expansion(H("a.1+"))
    assert (len(re.nodes), len(re.edges)) == (2, 1)


def test_expansion_interleaved():
    re = ribbon_expansion(H("a.1+ b.1+ a.2+ b.2+"))
    assert (len(re.nodes), len(re.edges)) == (3, 4)
    assert [e for e, _ in re.rings[0]] == ["a", "b", "a", "b"]


def test_expansion_genus_triangles():
    re = ribbon_expansion(H(TRIANGLES[8:]))
    s = count_summary(re.ribbon_graph)
    assert s.epsilon == 6
    assert (s.v, s.e, s.f) == (1 + 3, 9, 1)


@settings(max_examples=120, deadline=None)
@given(flag_structures())
def test_expansion_identities(fs):
    fs = labelled(fs)
    s = count_summary(fs)
    r = count_summary(ribbon_expansion(fs).ribbon_graph)
    assert (r.v, r.e, r.f, r.k, r.epsilon) == (s.v + s.e, s.d, s.f, s.k, s.epsilon)
    # every hyperedge of R(H) has exactly two common line segments
    assert r.d == 2 * s.d


def test_components_bouquet():
    re = ribbon_expansion(H("a.1+ b.1+ c.1- a.2+"))
    labels = components_excluding_vertex(re, 0)
    assert labels[0] == labels[3]
    assert len({labels[0], labels[1], labels[2]}) == 3


def test_components_path():
    # a -- v -- b with v the middle curve
    fs = H("a.1+", "a.2+ b.1+", "b.2+")
    re = ribbon_expansion(fs)
    mid = [i for i, ring in enumerate(re.rings) if len(ring) == 2][0]
    assert len(set(components_excluding_vertex(re, mid))) == 2


def test_components_theta():
    fs = H("a.1+ b.1+", "a.2+ b.2+")
    labels = components_excluding_vertex(ribbon_expansion(fs), 0)
    assert labels[0] == labels[1]


def test_components_unknown_vertex():
    with pytest.raises(KeyError):
        components_excluding_vertex(ribbon_expansion(H("a.1+")), 3)


def test_alternating_quadruple():
    fs = H("a.1+ b.1+ a.2+ b.2+")
    assert alternating_quadruple(fs, 0) == (("a", 1), ("b", 1), ("a", 2), ("b", 2))
    assert count_summary(fs).epsilon == 2
    assert alternating_quadruple(H("a.1+ a.2+ b.1+ b.2+"), 0) is None
    assert alternating_quadruple(H("a.1+"), 0) is None


def test_alternation_through_other_vertices():
    # a and c meet again at the second vertex, so they count as one component at v0
    fs = H("a.1+ b.1+ c.1+ b.2+", "a.2+ c.2+")
    w = alternating_quadruple(fs, 0)
    assert w is not None
    assert count_summary(fs).epsilon > 0


def test_intersection_graph_examples():
    ig = intersection_graph(H("a.1+ b.1+ a.2+ b.2+"))
    assert ig.edges == (("a", "b"),)
    assert intersection_graph(H("a.1+ a.2+ b.1+ b.2+")).edges == ()
    ig = intersection_graph(H("a.1+ b.1+ c.1+ a.2+ b.2+ c.2+"))
    assert set(ig.edges) == {("a", "b"), ("a", "c"), ("b", "c")}
    assert not ig.is_bipartite()


def test_intersection_graph_dot():
    dot = intersection_graph(H("b.1+ a.1+ b.2+ a.2+ c.1+")).to_dot()
    assert dot == "graph I {\n  a;\n  b;\n  c;\n  a -- b;\n}\n"


def test_intersection_graph_needs_bouquet():
    with pytest.raises(NotABouquet):
        intersection_graph(H("a.1+", "a.2+"))


@pytest.mark.parametrize(
    "curve, criterion, poly",
    [
        ("a.1+ b.1+ a.2+ b.2+", True, {0: 2, 2: 2}),
        ("a.1+ b.1+ c.1+ a.2+ b.2+ c.2+", False, {2: 8}),
        ("e.1+ e.2-", False, {1: 2}),
    ],
)
def test_constant_term_criterion(curve, criterion, poly):
    fs = H(curve)
    assert constant_term_criterion(fs) is criterion
    p = poly_subset_formula(fs)
    assert p == GenusPolynomial(poly)
    assert (p.coefficients.get(0, 0) != 0) is criterion


def test_join_decompose_blocks():
    factors = join_decompose(H("a.1+ a.2+ b.1+ b.2+"))
    assert sorted(canonical_form(f) for f in factors) == sorted(
        canonical_form(H(c)) for c in ("a.1+ a.2+", "b.1+ b.2+")
    )
    assert join_decompose(H("a.1+ b.1+ a.2+ b.2+"))[0] == H("a.1+ b.1+ a.2+ b.2+")
    assert is_prime(H("a.1+ b.1+ a.2+ b.2+"))
    assert is_prime(H("a.1+"))


def test_join_decompose_round_trip_and_product():
    fs = H("a.1+ a.2- b.1+ c.1+ b.2+ c.2+ d.1+", "d.2+ e.1+ e.2+", "e.3-")
    factors = join_decompose(fs)
    # a | b,c | d at the first vertex, then d | e at the second
    assert len(factors) == 4
    assert canonical_form(flags_from_arrows(rejoin(decomposition_tree(fs)))) == canonical_form(fs)
    product = GenusPolynomial({0: 1})
    for f in factors:
        assert is_prime(f)
        product = product * poly_subset_formula(f)
    assert product == poly_subset_formula(fs)


def test_join_decompose_disconnected():
    with pytest.raises(NotPrimeConnected):
        join_decompose(H("a.1+", "b.1+"))


def test_constant_poly_criterion():
    assert constant_poly_criterion(H("a.1+"))
    assert poly_subset_formula(H("a.1+")) == 2
    assert not constant_poly_criterion(H("e.1+ e.2-"))
    assert poly_subset_formula(H("e.1+ e.2-")).exponents == [1]
    assert not constant_poly_criterion(H("a.1+ b.1+ a.2+ b.2+"))
    with pytest.raises(NotPrimeConnected):
        constant_poly_criterion(H("a.1+ b.1+"))


def test_hypertree_duality_examples():
    assert hypertree_duality_check(H("a.1+ b.1+")) == (True, True)
    assert poly_subset_formula(H("a.1+ b.1+")) == 4
    assert hypertree_duality_check(H("e.1+ e.2-")) == (False, False)
    assert hypertree_duality_check(H("")) == (True, True)
    assert poly_subset_formula(H("")) == 1
