import dataclasses
import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings

from kampen.core import A, K, RELATOR_CONJUGATES, RELATORS, RelatorId, Word, format_word, free_reduce, parse_word, u_word
from kampen.diagram import (
    Builder, Diagram, LetterClass, NotReduced, annulus_fixtures, boundary_word, count_report, detect_annuli,
    diameter, empty_diagram, find_mirror_pairs, is_reduced, mirror_pair, reduce_diagram, single_cell,
    trace_bands, validate,
)
from kampen.fill import fill

from conftest import identity_words, trapezium


def w(text):
    return parse_word(text)


# -- validation and boundary ---------------------------------------------------------


def test_single_cell_valid_with_relator_boundary():
    d = single_cell(RelatorId.R_K1)
    assert validate(d).ok
    assert format_word(boundary_word(d)) == "TktAK"
    assert d.area == 1 and d.perimeter == 5
    assert format_word(boundary_word(single_cell(RelatorId.R_A1))) == "TatA"


def test_flipped_label_is_reported():
    d = single_cell(RelatorId.R_K1)
    h = d.cells[0].rotation
    label = list(d.label)
    label[h], label[d.twin[h]] = -label[h], -label[d.twin[h]]
    bad = dataclasses.replace(d, label=tuple(label))
    rep = validate(bad)
    assert not rep.ok
    assert any("face label not a relator conjugate" in v for v in rep.violations)


def test_broken_twin_is_reported():
    d = single_cell(RelatorId.R_A1)
    twin = list(d.twin)
    twin[0], twin[1] = twin[1], twin[0]
    rep = validate(dataclasses.replace(d, twin=tuple(twin)))
    assert not rep.ok


def test_empty_diagram():
    d = empty_diagram()
    assert validate(d).ok
    assert boundary_word(d) == Word()
    assert d.num_vertices == 1 and diameter(d) == 0


@pytest.mark.parametrize("n", [1, 2, 5])
def test_trapezium_validates_with_exact_boundary(n):
    d = trapezium(n)
    assert validate(d).ok
    assert boundary_word(d) == u_word(n)


def test_json_round_trip_and_normative_fields():
    d = trapezium(2)
    data = json.loads(d.dumps())
    assert set(data) >= {"vertices", "half_edges", "cells", "outer_face", "basepoint", "schema_version"}
    assert set(data["half_edges"][0]) == {"id", "twin", "next", "origin", "label"}
    assert set(data["cells"][0]) == {"face", "relator", "rotation"}
    assert data["half_edges"][0]["label"] in "tTuUaAkK"
    again = Diagram.loads(d.dumps())
    assert again == d
    assert validate(again).ok


# -- reduction ---------------------------------------------------------------------------


def test_cell_glued_to_mirror_along_one_edge_cancels():
    for rid in RelatorId:
        d = mirror_pair(rid, {0})
        assert validate(d).ok and d.area == 2
        assert find_mirror_pairs(d) == [(0, 1)]
        r = reduce_diagram(d)
        assert r.area == 0
        assert boundary_word(r) == boundary_word(d)


def test_trapezium_is_already_reduced():
    d = trapezium(4)
    assert is_reduced(d)
    assert reduce_diagram(d) is d


def _insert_bubble(d: Diagram, rng: random.Random) -> Diagram:
    b = d.thaw()
    inner = [h for h in b.twin if h in b.cell_of and b.twin[h] in b.cell_of]
    h = rng.choice(inner)
    lab = b.label[b.twin[h]]
    r = rng.choice([k for k in RELATOR_CONJUGATES if k[0] == lab])
    b.insert_bubble(h, r)
    return b.freeze()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_inserted_mirror_pair_is_cancelled(n):
    d = fill(u_word(n))
    bubbled = _insert_bubble(d, random.Random(n))
    assert validate(bubbled).ok and bubbled.area == d.area + 2 and not is_reduced(bubbled)
    r = reduce_diagram(bubbled)
    assert r.area == d.area
    assert boundary_word(r) == u_word(n)
    assert is_reduced(r) and validate(r).ok


@given(identity_words())
@settings(max_examples=60)
def test_reduction_preserves_boundary_and_never_grows(x):
    raw = fill(x, reduce=False)
    r = reduce_diagram(raw)
    assert validate(r).ok and is_reduced(r)
    assert boundary_word(r) == boundary_word(raw) == free_reduce(x)
    assert r.area <= raw.area and r.perimeter <= raw.perimeter
    assert r.area == raw.area or not is_reduced(raw)


# -- bands ---------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6])
def test_trapezium_theta_and_k_bands(n):
    d = trapezium(n)
    theta = trace_bands(d, LetterClass.THETA)
    assert sorted(len(b) for b in theta) == sorted([n * j for j in range(1, n + 1)] * 2)
    kb = trace_bands(d, LetterClass.K)
    assert len(kb) == n and all(len(b) == 2 * n for b in kb)


def test_single_cell_bands():
    d = single_cell(RelatorId.R_A1)
    (ab,) = trace_bands(d, LetterClass.A)
    assert len(ab) == 1 and not ab.closed
    assert trace_bands(d, LetterClass.K) == []
    d = single_cell(RelatorId.R_K2)
    assert len(trace_bands(d, LetterClass.THETA)) == 1 and len(trace_bands(d, LetterClass.K)) == 1
    assert trace_bands(d, LetterClass.A) == []


def _class_letters(cls):
    return {LetterClass.THETA: {1, 2}, LetterClass.K: {K}, LetterClass.A: {A}}[cls]


def check_band_structure(d):
    """Partition, adjacency, sides and end-edge properties of every band class."""
    outer = set(d.faces[d.outer_face])
    cof = d.cell_of_half_edge
    for cls in LetterClass:
        bands = trace_bands(d, cls)
        cells = [c for b in bands for c in b.cells]
        assert len(cells) == len(set(cells))
        assert set(cells) == {i for i, c in enumerate(d.cells) if cls.takes(c.relator)}
        xs = _class_letters(cls)
        for b in bands:
            for e_in, e_out, c in zip(b.entries, b.exits, b.cells):
                assert cof[e_in] == c and cof[e_out] == c
                assert abs(d.label[e_in]) in xs and abs(d.label[e_out]) in xs
            for e_out, c_next in zip(b.exits, b.cells[1:]):
                assert cof[d.twin[e_out]] == c_next
            # sides avoid the band's letters
            for h in b.side_top + b.side_bottom:
                assert abs(d.label[h]) not in xs
            if b.closed:
                continue
            # an open band ends on the boundary, or (a-bands) on a k-cell
            for e in (b.start_edge, b.end_edge):
                t = d.twin[e]
                if cls is LetterClass.A:
                    assert t in outer or d.cells[cof[t]].relator in (RelatorId.R_K1, RelatorId.R_K2)
                else:
                    assert t in outer
            # boundary of the band reads e^-1 p f q^-1
            assert d.target(b.start_edge) == (d.origin[b.side_top[0]] if b.side_top else d.origin[b.end_edge])
            assert d.origin[b.start_edge] == (d.origin[b.side_bottom[0]] if b.side_bottom else d.target(b.end_edge))


def test_band_structure_on_trapezia():
    for n in (1, 2, 3, 5):
        check_band_structure(trapezium(n))


@given(identity_words())
@settings(max_examples=80)
def test_band_properties_on_reduced_fillings(x):
    d = fill(x)
    check_band_structure(d)
    theta = trace_bands(d, LetterClass.THETA)
    others = trace_bands(d, LetterClass.K) + trace_bands(d, LetterClass.A)
    for t in theta:
        for o in others:
            assert len(set(t.cells) & set(o.cells)) <= 1
    assert not any(b.closed for b in theta + others)


def test_each_k_cell_has_one_a_edge():
    for rid in (RelatorId.R_K1, RelatorId.R_K2):
        assert sum(1 for c in RELATORS[rid].word if abs(c) == A) == 1


# -- annuli -----------------------------------------------------------------------------------


def test_planted_annuli_are_found():
    fx = annulus_fixtures()
    assert len(fx) >= 3
    for name, (d, kind) in fx.items():
        assert validate(d).ok, name
        kinds = [a.kind for a in detect_annuli(d)]
        assert kind in kinds, (name, kinds)
        r = reduce_diagram(d)
        assert detect_annuli(r) == [] and boundary_word(r) == boundary_word(d)


def test_theta_glued_mirror_pair_has_theta_annulus():
    d = mirror_pair(RelatorId.R_A1, {0, 1, 2})
    assert [a.kind for a in detect_annuli(d)] == ["theta"]


def test_no_annuli_without_two_shared_edges():
    for rid in RelatorId:
        for i in range(len(RELATORS[rid].word)):
            assert detect_annuli(mirror_pair(rid, {i})) == []


@pytest.mark.parametrize("n", [1, 3, 6])
def test_trapezium_has_no_annuli(n):
    assert detect_annuli(trapezium(n)) == []


@given(identity_words())
@settings(max_examples=80)
def test_reduced_fillings_have_no_annuli(x):
    assert detect_annuli(fill(x)) == []


# -- census and diameter -------------------------------------------------------------------------


def nx_diameter(d):
    g = nx.Graph()
    g.add_nodes_from(range(d.num_vertices))
    g.add_edges_from((d.origin[h], d.target(h)) for h in range(d.num_half_edges))
    return nx.diameter(g)


def test_diameter_examples():
    assert diameter(single_cell(RelatorId.R_K1)) == 2
    for m in range(1, 6):
        b = Builder()
        b.path((A,) * m)
        seg = b.freeze()
        assert format_word(boundary_word(seg)) == "a" * m + "A" * m
        assert diameter(seg) == m


@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_trapezium_diameter_matches_networkx(n):
    d = trapezium(n)
    assert diameter(d) == nx_diameter(d)
    assert diameter(d) <= 15 * n


@given(identity_words(max_len=30))
@settings(max_examples=60)
def test_diameter_matches_networkx_on_fillings(x):
    d = fill(x)
    if d.num_vertices > 1:
        assert diameter(d) == nx_diameter(d)


def test_count_report_trapezium():
    for n in (1, 2, 5, 8):
        cr = count_report(trapezium(n))
        assert cr.total_cells == n**3 + n**2 and cr.perimeter == 6 * n
        assert cr.k_cells == 2 * n * n and cr.a_cells_non_k == n**3 - n**2
        assert cr.max_theta_bands == 2 * n and cr.max_k_bands == n
        assert [c.name for c in cr.bound_checks] == [
            "k_cells <= n^2/4",
            "max_a_bands <= n^2/8 + n/2",
            "a_cells_non_k <= n^3/16 + n^2/4",
            "total_cells <= n^3/16 + n^2/2",
            "diameter <= 5n/2",
        ]
        p = 6 * n
        assert float(cr.bound_checks[3].bound) == p**3 / 16 + p**2 / 2
        assert cr.ok


def test_count_report_single_cell():
    cr = count_report(single_cell(RelatorId.R_A2))
    assert cr.total_cells == 1 and cr.ok


def test_count_report_refuses_unreduced():
    with pytest.raises(NotReduced):
        count_report(mirror_pair(RelatorId.R_K1, {0}))


@given(identity_words())
@settings(max_examples=100)
def test_count_report_bounds_on_random_fillings(x):
    cr = count_report(fill(x))
    assert cr.ok, cr.failures()
