import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

import oracles
from cubecx import generators as gen
from cubecx.contact import (contact_graph, delta_chain, delta_matrix, four_point_delta, hagen_check,
                            qi_check)
from cubecx.errors import CapExceeded
from cubecx.graph import structure
from helpers import grid_lines, path_hyperplanes
from strategies import median_graphs
from test_separation import _oracle_ids


def test_contact_graph_examples():
    cg = contact_graph(gen.cube(3))
    assert cg.edges == ((0, 1), (0, 2), (1, 2))
    p5 = gen.path(5)
    j = path_hyperplanes(p5)
    cg = contact_graph(p5)
    assert {tuple(sorted(e)) for e in cg.edges} == {tuple(sorted(p)) for p in zip(j, j[1:])}
    assert cg.dist[j[0], j[2]] == 2
    cg = contact_graph(gen.star(5))
    assert len(cg.edges) == 10


def test_delta_examples():
    q3 = gen.cube(3)
    assert all(delta_chain(q3, J, H).length == 0 for J, H in itertools.combinations(range(3), 2))
    p5 = gen.path(5)
    j = path_hyperplanes(p5)
    dc = delta_chain(p5, j[0], j[3])
    assert dc.length == 2 and dc.chain == (j[1], j[2])
    g = gen.grid(3, 3)
    ycut, _ = grid_lines(g, 3)
    assert delta_chain(g, *ycut).length == 0
    with pytest.raises(ValueError):
        delta_chain(p5, 0, 0)


@pytest.mark.parametrize("g", [gen.grid(4, 3), gen.random_wallspace_dual(12, 8, 9), gen.coset_tree(2),
                               gen.product_of_paths([4, 2, 2])])
def test_delta_and_contact_distance_match_brute_force(g):
    hs = oracles.HyperplaneSets(g.n, g.edges)
    ids = _oracle_ids(g, hs)
    cd = oracles.contact_dist(hs)
    cg = contact_graph(g)
    M = delta_matrix(g)
    for J, H in itertools.combinations(range(structure(g).h), 2):
        assert cg.dist[J, H] == cd[ids[J]][ids[H]]
        assert M[J, H] == hs.delta(ids[J], ids[H])


def test_qi_examples():
    rep = qi_check(gen.cube(3))
    assert rep.clean and rep.literal_upper_failures == 3
    assert rep.literal_upper_example[2:] == (1, 0)
    assert qi_check(gen.path(5)).clean


@pytest.mark.parametrize("k", [3, 4, 8, 20])
def test_path_closed_form(k):
    g = gen.path(k)
    j = path_hyperplanes(g)
    assert delta_chain(g, j[0], j[-1]).length == k - 3
    assert contact_graph(g).dist[j[0], j[-1]] == k - 2
    assert qi_check(g).clean


def test_four_point_examples():
    assert four_point_delta(contact_graph(gen.path(7))) == 0
    assert four_point_delta(contact_graph(gen.cube(3))) == 0
    # the 4-cycle is the smallest graph with positive delta
    c4 = np.array([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    assert four_point_delta(c4) == Fraction(1)
    with pytest.raises(CapExceeded):
        four_point_delta(np.zeros((5, 5), dtype=int), cap=4)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_four_point_matches_quadruple_scan(seed):
    cg = contact_graph(gen.random_wallspace_dual(14, 9, seed))
    assert four_point_delta(cg) == oracles.four_point(cg.dist.tolist())


def test_hagen_on_examples():
    for g in (gen.path(6), gen.grid(4, 4), gen.star(4), gen.random_wallspace_dual(12, 8, 4)):
        assert hagen_check(g).clean


# -- properties --------------------------------------------------------------


@given(median_graphs)
def test_sandwich_holds(g):
    rep = qi_check(g)
    assert not rep.violations


@given(median_graphs)
def test_delta_chain_is_strongly_separated_and_separating(g):
    st = structure(g)
    for J, H in itertools.combinations(range(st.h), 2):
        chain = delta_chain(g, J, H).chain
        for a, b in itertools.combinations(chain, 2):
            assert st.strongly_separated[a, b]
        for V in chain:
            assert st.hside[V, J] >= 0 and st.hside[V, H] >= 0 and st.hside[V, J] != st.hside[V, H]


@given(median_graphs)
def test_transverse_pairs_are_adjacent_in_contact_graph(g):
    st = structure(g)
    cg = contact_graph(g)
    assert np.all(cg.dist[st.transverse] == 1)
    assert np.all(cg.dist >= 0)


@given(median_graphs)
def test_hagen_parts_hold(g):
    if structure(g).h <= 25:
        rep = hagen_check(g)
        assert not rep.part_i_failures and not rep.part_ii_failures
