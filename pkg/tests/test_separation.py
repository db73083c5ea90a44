import itertools

import numpy as np
import pytest
from hypothesis import given

import oracles
from cubecx import generators as gen
from cubecx.graph import structure
from cubecx.separation import (EQUAL, NESTED, TRANSVERSE, crossing_set, facing_triple, hyperplane_layers,
                               max_join, relation, separates, separation_scan, strongly_separated,
                               thinness_constant, well_separation_degree)
from helpers import grid_lines, path_hyperplanes
from strategies import median_graphs, trees

GRID = gen.grid(3, 3)
YCUT, XCUT = grid_lines(GRID, 3)


def test_relation_examples():
    q3 = gen.cube(3)
    for J, H in itertools.combinations(range(3), 2):
        assert relation(q3, J, H).kind == TRANSVERSE
    assert relation(q3, 1, 1).kind == EQUAL
    p5 = gen.path(5)
    j1, j2, j3, _ = path_hyperplanes(p5)
    rel = relation(p5, j1, j3)
    assert rel.kind == NESTED
    # the side of J1 holding J2 also holds J3
    assert rel.j_side_containing_h == relation(p5, j1, j2).j_side_containing_h
    assert relation(GRID, YCUT[0], XCUT[0]).kind == TRANSVERSE


def test_separates_examples():
    p5 = gen.path(5)
    j1, j2, j3, _ = path_hyperplanes(p5)
    assert separates(p5, j2, j1, j3)
    assert not separates(p5, j1, j2, j3)
    q3 = gen.cube(3)
    assert not any(separates(q3, *t) for t in itertools.permutations(range(3)))
    assert not separates(GRID, XCUT[0], YCUT[0], YCUT[1])
    with pytest.raises(ValueError):
        separates(p5, j1, j1, j2)
    with pytest.raises(KeyError):
        separates(p5, 0, 1, 9)


def test_facing_triple_examples():
    assert facing_triple(gen.star(3), 0, 1, 2)
    p5 = gen.path(5)
    assert not facing_triple(p5, *path_hyperplanes(p5)[:3])


@pytest.mark.parametrize("seed", range(4))
def test_facing_triples_on_random_trees_match_definition(seed):
    g = gen.random_tree(12, seed)
    hs = oracles.HyperplaneSets(g.n, g.edges)
    ids = _oracle_ids(g, hs)
    for a, b, c in itertools.combinations(range(structure(g).h), 3):
        assert facing_triple(g, a, b, c) == hs.facing(ids[a], ids[b], ids[c])


def _oracle_ids(g, hs):
    """Map library hyperplane ids to oracle class indices."""
    st = structure(g)
    out = {}
    for J in range(st.h):
        e = g.edges[st.class_edges[J][0]]
        out[J] = next(i for i, cls in enumerate(hs.classes) if e in cls)
    return out


def test_well_separation_examples():
    p5 = gen.path(5)
    j = path_hyperplanes(p5)
    rep = well_separation_degree(p5, j[0], j[3])
    assert rep.applicable and rep.crossing_set == () and rep.degree == 0 and rep.strongly_separated
    rep = well_separation_degree(GRID, YCUT[0], YCUT[1])
    assert set(rep.crossing_set) == set(XCUT)
    assert rep.degree_direct == rep.degree_projection == 2
    assert not rep.strongly_separated
    assert not well_separation_degree(GRID, YCUT[0], XCUT[0]).applicable


@pytest.mark.parametrize("g", [gen.product_of_paths([3, 2, 2, 2]), gen.product_of_paths([4, 2, 2]),
                               gen.grid(5, 4), gen.random_wallspace_dual(12, 7, 1)])
def test_degree_matches_brute_force_family(g):
    hs = oracles.HyperplaneSets(g.n, g.edges)
    ids = _oracle_ids(g, hs)
    for rep in separation_scan(g):
        if not rep.applicable:
            continue
        J, H = rep.pair
        cross = hs.crossing(ids[J], ids[H])
        assert sorted(ids[K] for K in rep.crossing_set) == sorted(cross)
        assert rep.degree == hs.max_facing_free(cross)


def test_product_degree_counts_crossing_factor_hyperplanes():
    # P3 x Q3: the two P3 hyperplanes are disjoint and crossed by the three cube ones
    g = gen.product_of_paths([3, 2, 2, 2])
    st = structure(g)
    pairs = [(J, H) for J, H in itertools.combinations(range(st.h), 2) if not st.transverse[J, H]]
    assert len(pairs) == 1
    rep = well_separation_degree(g, *pairs[0])
    assert len(rep.crossing_set) == 3 and rep.degree == 3


def test_strongly_separated_and_crossing_set():
    p5 = gen.path(5)
    j = path_hyperplanes(p5)
    assert strongly_separated(p5, j[0], j[1])
    assert crossing_set(p5, j[0], j[3]) == ()
    assert not strongly_separated(GRID, YCUT[0], YCUT[1])


# -- thin joins --------------------------------------------------------------


def test_thinness_examples():
    assert thinness_constant(gen.path(5), [0, 1, 2, 3, 4]) == 0
    assert thinness_constant(gen.cube(3), [0, 4, 6, 7]) == 1
    g = gen.grid(4, 4)
    staircase = [0, 1, 5, 6, 10, 11, 15]
    assert thinness_constant(g, staircase) == 3


@pytest.mark.parametrize("g", [gen.grid(4, 3), gen.cube(4), gen.product_of_paths([3, 3, 2]),
                               gen.random_wallspace_dual(12, 8, 2)])
def test_max_join_matches_subset_enumeration(g):
    st = structure(g)
    hs = oracles.HyperplaneSets(g.n, g.edges)
    ids = _oracle_ids(g, hs)
    far = int(np.argmax(st.D[0]))
    seps = np.nonzero(st.S[0] != st.S[far])[0]
    C, (A, B) = max_join(g, seps)
    assert C == hs.max_join([ids[int(J)] for J in seps])
    assert min(len(A), len(B)) == C
    assert all(st.transverse[a, b] for a in A for b in B)


# -- layers ------------------------------------------------------------------


def test_layer_examples():
    p5 = gen.path(5)
    j = path_hyperplanes(p5)
    assert hyperplane_layers(p5, 0, j) == [(j[0],), (j[1],), (j[2],), (j[3],)]
    assert hyperplane_layers(gen.cube(3), 0, range(3)) == [(0, 1, 2)]
    layers = hyperplane_layers(GRID, 0, range(4))
    assert [set(layer) for layer in layers] == [{YCUT[0], XCUT[0]}, {YCUT[1], XCUT[1]}]


# -- properties --------------------------------------------------------------


@given(median_graphs)
def test_degree_direct_equals_projection(g):
    for rep in separation_scan(g):
        if rep.applicable:
            assert rep.degree_direct == rep.degree_projection
            assert rep.strongly_separated == (rep.degree == 0)


@given(median_graphs)
def test_strong_separation_implies_empty_crossing(g):
    st = structure(g)
    for J, H in itertools.combinations(range(st.h), 2):
        if strongly_separated(g, J, H):
            assert crossing_set(g, J, H) == ()
            assert well_separation_degree(g, J, H).degree == 0


@given(trees())
def test_tree_hyperplanes_pairwise_strongly_separated(g):
    st = structure(g)
    for J, H in itertools.combinations(range(st.h), 2):
        assert strongly_separated(g, J, H)


@given(median_graphs)
def test_layers_along_separators_are_cliques(g):
    st = structure(g)
    y = int(np.argmax(st.D[0]))
    seps = np.nonzero(st.S[0] != st.S[y])[0]
    layers = hyperplane_layers(g, 0, seps)
    assert sum(len(layer) for layer in layers) == len(seps)
    for layer in layers:
        assert len(layer) <= max(st.dimension, 1)
        assert all(st.transverse[a, b] for a, b in itertools.combinations(layer, 2))
    if len(seps):
        assert len([layer for layer in layers if layer]) == st.linf[0, y]
