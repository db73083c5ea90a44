import itertools

import numpy as np
import pytest
from hypothesis import given

import oracles
from cubecx import generators as gen
from cubecx.errors import NotMedianError, StructuralError
from cubecx.graph import (CubeGraph, cubes, dimension, dist_l1, dist_linf, hyperplanes, interval, median,
                          structure, validate_median)
from helpers import grid_lines, path_hyperplanes
from strategies import median_graphs

K3 = CubeGraph(3, [(0, 1), (1, 2), (0, 2)])
C6 = CubeGraph(6, [(i, (i + 1) % 6) for i in range(6)])


# -- construction and validation ---------------------------------------------


def test_cubegraph_rejects_bad_input():
    with pytest.raises(StructuralError):
        CubeGraph(0, [])
    with pytest.raises(StructuralError):
        CubeGraph(2, [(0, 0)])
    with pytest.raises(StructuralError):
        CubeGraph(2, [(0, 1), (1, 0)])
    with pytest.raises(StructuralError):
        CubeGraph(2, [(0, 2)])


def test_q3_is_median():
    rep = validate_median(gen.cube(3))
    assert rep.is_median
    assert (rep.vertex_count, rep.edge_count, rep.hyperplane_count) == (8, 12, 3)


def test_triangle_witness_is_its_vertices():
    rep = validate_median(K3)
    assert not rep.is_median
    assert sorted(rep.witness) == [0, 1, 2]


def test_six_cycle_is_not_median():
    assert not oracles.is_median_graph(6, C6.edges)
    assert not validate_median(C6).is_median


def test_disconnected_graph_reports_components():
    rep = validate_median(CubeGraph(4, [(0, 1), (2, 3)]))
    assert not rep.is_median
    assert rep.witness is not None


def test_queries_on_non_median_graph_raise():
    with pytest.raises(NotMedianError):
        structure(K3)


@pytest.mark.parametrize("n,edges", [
    (4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]),          # K4 minus an edge
    (5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]),  # K_{2,3}
    (7, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 3)]),
])
def test_validation_agrees_with_brute_force(n, edges):
    assert validate_median(CubeGraph(n, edges)).is_median == oracles.is_median_graph(n, edges)


# -- hyperplanes -------------------------------------------------------------


def test_hyperplane_examples():
    assert [len(H.edges) for H in hyperplanes(gen.cube(3))] == [4, 4, 4]
    assert [len(H.edges) for H in hyperplanes(gen.path(5))] == [1] * 4
    grid = gen.grid(3, 3)
    assert [len(H.edges) for H in hyperplanes(grid)] == [3] * 4


@pytest.mark.parametrize("g", [gen.grid(3, 3), gen.cube(3), gen.star(4), gen.random_wallspace_dual(10, 5, 3),
                               gen.coset_tree(2), gen.product_of_paths([3, 2, 2])])
def test_hyperplanes_match_djokovic_winkler(g):
    ours = sorted(sorted(g.edges[e] for e in H.edges) for H in hyperplanes(g))
    assert ours == oracles.dw_classes(g.n, g.edges)
    for H in hyperplanes(g):
        cls = [g.edges[e] for e in H.edges]
        assert sorted([list(H.halfspace_a), list(H.halfspace_b)]) == \
            oracles.halfspaces_by_deletion(g.n, g.edges, cls)
        assert set(H.carrier) == {v for e in cls for v in e}


# -- distances ---------------------------------------------------------------


def test_distance_examples():
    q3 = gen.cube(3)
    assert dist_l1(q3, 0, 7) == (3, (0, 1, 2))
    assert dist_l1(q3, 5, 5) == (0, ())
    assert dist_linf(q3, 0, 7) == 1
    p5 = gen.path(5)
    d, seps = dist_l1(p5, 0, 4)
    assert d == 4 and set(seps) == set(path_hyperplanes(p5))
    assert dist_linf(p5, 0, 4) == 4
    assert dist_linf(gen.grid(3, 3), 0, 8) == 2


@pytest.mark.parametrize("g", [gen.grid(3, 3), gen.cube(3), gen.random_wallspace_dual(9, 6, 11),
                               gen.product_of_paths([3, 2, 2]), gen.star(3)])
def test_distances_against_oracles(g):
    D = oracles.bfs_dist(g.n, g.edges)
    hs = oracles.HyperplaneSets(g.n, g.edges)
    for x, y in itertools.product(range(g.n), repeat=2):
        d, seps = dist_l1(g, x, y)
        assert d == D[x][y] == len(hs.separators_of_vertices(x, y))
        assert dist_linf(g, x, y) == oracles.longest_disjoint_chain(hs, x, y)


# -- medians, intervals, dimension -------------------------------------------


def test_median_examples():
    assert median(gen.cube(3), 0, 3, 5) == 1
    assert interval(gen.path(5), 0, 2) == (0, 1, 2)
    grid = gen.grid(3, 3)
    D = oracles.bfs_dist(grid.n, grid.edges)
    for a, b, c in itertools.combinations([0, 2, 6, 8], 3):
        assert [median(grid, a, b, c)] == oracles.medians(D, a, b, c)


def test_dimension_examples():
    assert dimension(gen.cube(3)) == 3
    assert dimension(gen.random_tree(20, 4)) == 1
    grid = gen.grid(3, 3)
    assert dimension(grid) == 2 == oracles.max_clique_transverse(oracles.HyperplaneSets(grid.n, grid.edges))


def test_cube_enumeration_counts():
    # Q3 has 12 edges, 6 squares and one 3-cube
    sizes = [len(c) for c in cubes(gen.cube(3))]
    assert (sizes.count(2), sizes.count(4), sizes.count(8)) == (12, 6, 1)


# -- properties --------------------------------------------------------------


@given(median_graphs)
def test_generated_graphs_are_median(g):
    assert validate_median(g).is_median


@given(median_graphs)
def test_l1_counts_separators_and_linf_bounds(g):
    st = structure(g)
    ham = (st.S[:, None, :] != st.S[None, :, :]).sum(axis=2)
    assert np.array_equal(ham, st.D)
    assert np.array_equal(st.linf, st.linf_cube_bfs)
    dim = max(st.dimension, 1)
    assert np.all(st.linf >= -(-st.D // dim))
    assert np.all(st.linf <= st.D)


@given(median_graphs)
def test_median_is_majority_and_on_all_three_geodesics(g):
    D = structure(g).D
    rng = np.random.default_rng(g.n)
    for _ in range(20):
        x, y, z = (int(v) for v in rng.integers(g.n, size=3))
        m = median(g, x, y, z)
        assert D[x, m] + D[m, y] == D[x, y]
        assert D[y, m] + D[m, z] == D[y, z]
        assert D[x, m] + D[m, z] == D[x, z]


@given(median_graphs)
def test_dimension_matches_largest_cube(g):
    cs = cubes(g)
    top = max((len(c) for c in cs), default=1)
    assert 2 ** dimension(g) == top


@given(median_graphs)
def test_halfspaces_partition_and_are_connected(g):
    for H in hyperplanes(g):
        a, b = set(H.halfspace_a), set(H.halfspace_b)
        assert a and b and not a & b and a | b == set(range(g.n))
        for e in H.edges:
            u, v = g.edges[e]
            assert (u in a) != (v in a)
