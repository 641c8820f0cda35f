import json
import random

import pytest
from hypothesis import given, settings

from conftest import TRIANGLES, H, flag_structures
from oracles import UnionFind, boundary_walk, orbit_count

from hyperdual.core import (
    ArrowPresentation,
    FlagStructure,
    HmapError,
    Occurrence,
    arrows_from_flags,
    canonical_form,
    classify,
    count_summary,
    derive_labels,
    edge_flags,
    flags_from_arrows,
    labelled,
    parse_arrow_presentation,
    parse_hmap,
    restrict,
    serialize_arrow_presentation,
)


# -- parsing ---------------------------------------------------------------


def test_parse_single_loop():
    ap = parse_arrow_presentation("vertex: e.1+ e.2+")
    assert len(ap.curves) == 1
    assert ap.degrees() == {"e": 2}


def test_parse_interleaved_round_trip():
    text = "vertex: a.1+ b.1+ a.2+ b.2+"
    ap = parse_arrow_presentation(text)
    census = {}
    for occ in ap.curves[0]:
        census[occ.arrow] = census.get(occ.arrow, 0) + 1
    assert census == {("a", 1): 1, ("b", 1): 1, ("a", 2): 1, ("b", 2): 1}
    assert serialize_arrow_presentation(ap) == text + "\n"
    assert parse_arrow_presentation(serialize_arrow_presentation(ap)) == ap


def test_parse_name_comments_blank_lines():
    ap = parse_arrow_presentation("# header\nname: theta\n\nvertex: a.1+  # first\nvertex: a.2-\nvertex:\n")
    assert ap.name == "theta"
    assert [len(c) for c in ap.curves] == [1, 1, 0]


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("vertex: e.1+ e.3+", "index gap"),
        ("vertex: e.1+ e.1-", "duplicate arrow"),
        ("vertex: e.1*", "unknown sign token"),
        ("vertex: e.1", "unknown sign token"),
        ("vertex: e.1−", "unicode minus"),
        ("vertex: e.0+", ">= 1"),
        ("vertex: 1e.1+", "malformed"),
        ("vertex: e1+", "malformed"),
        ("edge: e.1+", "unknown directive"),
        ("vertex e.1+", "expected"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(HmapError, match=fragment):
        parse_arrow_presentation(text)


def test_parse_error_reports_position():
    with pytest.raises(HmapError) as info:
        parse_arrow_presentation("vertex: a.1+\nvertex: a.2+ b.1?")
    assert info.value.line == 2
    assert info.value.column == 14


def test_normalized_ordering():
    ap = parse_arrow_presentation("vertex:\nvertex: c.1+ b.2+\nvertex: b.1- a.1+")
    assert serialize_arrow_presentation(ap) == "vertex: a.1+ b.1-\nvertex: b.2+ c.1+\nvertex:\n"


# -- flag model ------------------------------------------------------------


def test_single_stub_collapses_matchings():
    fs = H("e.1+")
    assert fs.alpha == fs.beta == fs.gamma == (1, 0)


def test_twisted_loop_matchings():
    fs = H("e.1+ e.2-")
    t1, h1, h2, t2 = 0, 1, 2, 3
    assert fs.labels == (("e", 1, "tail"), ("e", 1, "head"), ("e", 2, "head"), ("e", 2, "tail"))
    assert fs.alpha[h1] == h2 and fs.alpha[t2] == t1
    assert fs.beta[h1] == t2 and fs.beta[h2] == t1
    assert fs.gamma[t1] == h1 and fs.gamma[t2] == h2


def test_edge_across_two_vertices():
    s = count_summary(H("a.1+", "a.2+"))
    assert (s.v, s.e, s.d) == (2, 1, 2)


def test_arrows_from_flags():
    assert serialize_arrow_presentation(arrows_from_flags(H("e.1+"))) == "vertex: e.1+\n"
    fs = FlagStructure((), (), (), 2, ())
    assert serialize_arrow_presentation(arrows_from_flags(fs)) == "vertex:\nvertex:\n"
    fs = H("a.1+ b.1+ a.2+ b.2+")
    assert canonical_form(flags_from_arrows(arrows_from_flags(fs))) == canonical_form(fs)


def test_arrows_from_flags_needs_labels():
    with pytest.raises(ValueError, match="labels"):
        arrows_from_flags(FlagStructure((1, 0), (1, 0), (1, 0)))


def test_invalid_involution_rejected():
    with pytest.raises(ValueError):
        FlagStructure((0, 1), (1, 0), (1, 0))
    with pytest.raises(ValueError):
        FlagStructure((1, 0, 3, 2), (1, 0, 3, 2), (2, 3, 0, 1), labels=(("a", 1, "tail"),) * 4)


def test_json_export_round_trip():
    fs = H("e.1+ e.2-")
    data = json.loads(fs.dumps())
    assert data["flags"] == 4
    assert data["gamma"] == [[0, 1], [2, 3]]
    assert all(a < b for a, b in data["alpha"] + data["beta"] + data["gamma"])
    assert FlagStructure.from_json(data) == fs


# -- counts ----------------------------------------------------------------


@pytest.mark.parametrize(
    "curves, expected",
    [
        ([""], dict(v=1, e=0, f=1, d=0, k=1, chi=2, epsilon=0, orientable=True)),
        (["e.1+ e.2-"], dict(v=1, e=1, f=1, d=2, k=1, chi=1, epsilon=1, orientable=False)),
        ([TRIANGLES[8:]], dict(v=1, e=3, f=1, d=9, k=1, chi=-4, epsilon=6, orientable=True)),
        (["e.1+ e.2+"], dict(v=1, e=1, f=2, d=2, k=1, chi=2, epsilon=0, orientable=True)),
    ],
)
def test_count_summary_examples(curves, expected):
    s = count_summary(H(*curves))
    assert vars(s) == expected


def test_count_summary_against_boundary_walk(census8):
    for fs in census8:
        ap = arrows_from_flags(fs)
        curves = [[str(o) for o in c] for c in ap.curves]
        s = count_summary(fs)
        assert (s.v, s.e, s.f, s.d, s.k, s.epsilon) == boundary_walk(curves)


def test_classify_examples():
    c = classify(H("a.1+ b.1+"))
    assert c.is_plane and c.is_bouquet and c.is_hypertree and c.is_hyper_quasi_tree
    c = classify(H("e.1+ e.2+"))
    assert c.is_plane and c.is_bouquet and not c.is_hyper_quasi_tree
    assert count_summary(H("e.1+ e.2+")).f == 2
    c = classify(H(""))
    assert c.is_plane and c.is_bouquet and c.is_hypertree


# -- restriction -----------------------------------------------------------


def test_restrict_identity():
    fs = H(TRIANGLES[8:])
    assert restrict(fs, {"a", "b", "c"}) == fs


def test_restrict_skips_deleted_arrows():
    sub = restrict(H("a.1+ b.1+ a.2+ b.2+"), {"a"})
    assert serialize_arrow_presentation(arrows_from_flags(sub)) == "vertex: a.1+ a.2+\n"
    s = count_summary(sub)
    assert (s.epsilon, s.f) == (0, 2)


def test_restrict_empty_keeps_vertex():
    s = count_summary(restrict(H("e.1+ e.2-"), ()))
    assert (s.v, s.e, s.f, s.epsilon) == (1, 0, 1, 0)


def test_restrict_unknown_edge():
    with pytest.raises(KeyError):
        restrict(H("a.1+"), {"z"})


@settings(max_examples=150, deadline=None)
@given(flag_structures())
def test_restrict_preserves_vertices(fs):
    fs = labelled(fs)
    edges = list(edge_flags(fs))
    rng = random.Random(len(edges))
    A = {e for e in edges if rng.random() < 0.5}
    sub = restrict(fs, A)
    whole, s = count_summary(fs), count_summary(sub)
    assert s.v == whole.v
    assert s.e == len(A)
    assert s.d == sum(len(edge_flags(fs)[e]) // 2 for e in A)


# -- invariants on random structures -------------------------------------


@settings(max_examples=200, deadline=None)
@given(flag_structures())
def test_orbit_counts_match_union_find(fs):
    n = fs.flag_count
    s = count_summary(fs)
    assert s.v == orbit_count(n, fs.alpha, fs.gamma) + fs.isolated
    assert s.e == orbit_count(n, fs.beta, fs.gamma)
    assert s.f == orbit_count(n, fs.alpha, fs.beta) + fs.isolated
    assert s.k == orbit_count(n, *fs.perms) + fs.isolated
    assert s.chi == s.v + s.e + s.f - s.d
    assert s.epsilon >= 0
    if s.orientable:
        assert s.epsilon % 2 == 0


@settings(max_examples=200, deadline=None)
@given(flag_structures())
def test_hyperedge_orbits_alternate(fs):
    for e, fl in edge_flags(fs).items():
        assert len(fl) % 2 == 0
        for j in range(0, len(fl), 2):
            assert fs.gamma[fl[j]] == fl[j + 1]
            assert fs.beta[fl[j + 1]] == fl[(j + 2) % len(fl)]


@settings(max_examples=150, deadline=None)
@given(flag_structures())
def test_presentation_round_trip(fs):
    fs = labelled(fs)
    assert canonical_form(flags_from_arrows(arrows_from_flags(fs))) == canonical_form(fs)


@settings(max_examples=150, deadline=None)
@given(flag_structures(), flag_structures())
def test_canonical_form_relabelling(fs, other):
    n = fs.flag_count
    rng = random.Random(n * 7919 + fs.alpha[0])
    pi = list(range(n))
    rng.shuffle(pi)
    inv = [0] * n
    for x, y in enumerate(pi):
        inv[y] = x

    def conj(p):
        return [pi[p[inv[y]]] for y in range(n)]

    moved = FlagStructure(conj(fs.alpha), conj(fs.beta), conj(fs.gamma), fs.isolated)
    assert canonical_form(moved) == canonical_form(fs)
    if canonical_form(other) == canonical_form(fs):
        assert count_summary(other) == count_summary(fs)


def test_canonical_form_examples():
    assert canonical_form(H("a.1+ b.1+ a.2+ b.2+")) == canonical_form(H("b.1+ a.1+ b.2+ a.2+"))
    assert canonical_form(H("e.1+ e.2+")) != canonical_form(H("e.1+ e.2-"))
    # mirror image: reverse the curve and flip all signs
    assert canonical_form(H("a.1+ b.1- c.1+ a.2+")) == canonical_form(H("a.2- c.1- b.1+ a.1-"))


def test_canonical_form_multiset_of_components():
    one = parse_hmap("vertex: a.1+\nvertex: b.1+ b.2-")
    two = parse_hmap("vertex: x.1+ x.2-\nvertex: y.1+")
    assert canonical_form(one) == canonical_form(two)
    assert canonical_form(one) != canonical_form(parse_hmap("vertex: a.1+\nvertex: b.1+ b.2-\nvertex:"))


def test_derive_labels_names():
    fs = FlagStructure((1, 0, 3, 2), (1, 0, 3, 2), (1, 0, 3, 2))
    assert [lab[0] for lab in derive_labels(fs)] == ["a", "a", "b", "b"]


def test_occurrence_validation():
    with pytest.raises(HmapError):
        Occurrence("e", 0, "+")
    with pytest.raises(HmapError):
        ArrowPresentation(((Occurrence("e", 2, "+"),),))
