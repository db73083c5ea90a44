import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as hst

from cubecx import generators as gen
from cubecx.duality import Wallspace
from cubecx.errors import StructuralError
from cubecx.graph import CubeGraph, structure, validate_median


def test_cube_three():
    g = gen.generate("cube", ["3"])
    assert nx.is_isomorphic(g.to_networkx(), nx.hypercube_graph(3))


def test_coset_tree_level_counts():
    g = gen.coset_tree(3)
    assert g.n == 1 + 2 + 4 + 8
    depth = nx.single_source_shortest_path_length(g.to_networkx(), 0)
    levels = [sum(1 for d in depth.values() if d == i) for i in range(4)]
    assert levels == [1, 2, 4, 8]
    # every non-leaf coset splits into two
    assert all(len(g.adjacency[v]) - (v != 0) in (0, 2) for v in range(g.n))


def test_coset_tree_action_is_translation_group():
    maps = gen.coset_tree_action(3)
    assert len(maps) == 3
    for m in maps:
        assert m[0] == 0 and sorted(m) == list(range(15))
        assert [m[m[v]] for v in range(15)] == list(range(15))


def test_random_wallspace_is_deterministic():
    a = gen.generate("random-wallspace", ["12", "8"], seed=42)
    b = gen.generate("random-wallspace", ["12", "8"], seed=42)
    assert isinstance(a, Wallspace) and a == b
    assert gen.generate("random-wallspace", ["12", "8"], seed=43) != a


def test_random_tree_is_a_tree():
    g = gen.random_tree(30, 5)
    assert len(g.edges) == 29 and nx.is_tree(g.to_networkx())
    assert gen.random_tree(30, 5).edges == g.edges


def test_bad_parameters():
    with pytest.raises(StructuralError):
        gen.generate("cube", ["1", "2"])
    with pytest.raises(StructuralError):
        gen.cube(20)
    with pytest.raises(StructuralError):
        gen.coset_tree(-1)


@given(hst.integers(6, 30), hst.integers(1, 10), hst.integers(0, 2**31 - 1))
def test_wallspace_duals_validate(k, m, seed):
    try:
        g = gen.random_wallspace_dual(k, m, seed)
    except StructuralError:
        return                       # too few distinct cuts for these points
    assert validate_median(g).is_median
    assert structure(g).h == m


@given(hst.sampled_from(["cube", "path", "star", "coset-tree"]), hst.integers(1, 4))
def test_named_kinds_validate(kind, p):
    g = gen.generate(kind, [p])
    assert isinstance(g, CubeGraph) and validate_median(g).is_median
