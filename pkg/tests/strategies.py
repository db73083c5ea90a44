"""Hypothesis strategies producing small median graphs."""

from hypothesis import strategies as st

from cubecx import generators as gen


@st.composite
def wallspace_duals(draw, max_points=14, max_walls=7):
    k = draw(st.integers(6, max_points))
    m = draw(st.integers(1, max_walls))
    seed = draw(st.integers(0, 2**31 - 1))
    return gen.random_wallspace_dual(k, m, seed)


@st.composite
def trees(draw, max_n=14):
    return gen.random_tree(draw(st.integers(1, max_n)), draw(st.integers(0, 2**31 - 1)))


@st.composite
def products(draw):
    sizes = draw(st.lists(st.integers(1, 4), min_size=1, max_size=3))
    return gen.product_of_paths(sizes)


median_graphs = st.one_of(wallspace_duals(), trees(), products())
