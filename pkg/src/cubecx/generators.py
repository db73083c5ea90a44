"""Named and seeded families of complexes and wallspaces.

Every generator is deterministic: the random ones take an explicit integer
seed and draw from ``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import StructuralError
from .duality import Wallspace, dual_complex
from .graph import CubeGraph

MAX_GENERATED_VERTICES = 50_000


def _check_size(n):
    if n > MAX_GENERATED_VERTICES:
        raise StructuralError(f"{n} vertices exceeds the generator cap of {MAX_GENERATED_VERTICES}")


def product_of_paths(sizes):
    """Cartesian product of paths with ``sizes[i]`` vertices each.

    Vertex ids use mixed radix with the first factor most significant, so in
    ``grid(a, b)`` vertex ``(x, y)`` has id ``x * b + y``.
    """
    sizes = [int(s) for s in sizes]
    if any(s < 1 for s in sizes):
        raise StructuralError("path factors need at least one vertex")
    n = int(np.prod(sizes)) if sizes else 1
    _check_size(n)
    strides = [int(np.prod(sizes[i + 1:])) for i in range(len(sizes))]
    edges = []
    for coords in itertools.product(*(range(s) for s in sizes)):
        v = sum(c * st for c, st in zip(coords, strides))
        for i, c in enumerate(coords):
            if c + 1 < sizes[i]:
                edges.append((v, v + strides[i]))
    return CubeGraph(n, edges)


def cube(n):
    """The hypercube Q_n; vertex id is the bit string read with coordinate 1 most significant."""
    return product_of_paths([2] * int(n))


def path(n):
    return product_of_paths([int(n)])


def grid(a, b):
    return product_of_paths([a, b])


def star(k):
    """Star tree: centre 0 joined to leaves 1..k."""
    return CubeGraph(k + 1, [(0, i) for i in range(1, k + 1)])


def random_tree(n, seed):
    rng = np.random.default_rng(seed)
    n = int(n)
    if n < 1:
        raise StructuralError("a tree needs at least one vertex")
    _check_size(n)
    return CubeGraph(n, [(int(rng.integers(0, i)), i) for i in range(1, n)])


def random_wallspace(k, m, seed, max_attempts=10_000):
    """``m`` walls on ``k`` random planar points, each cut out by a random line."""
    rng = np.random.default_rng(seed)
    k, m = int(k), int(m)
    if k < 2 or m < 0:
        raise StructuralError("need at least two points and a non-negative wall count")
    pts = rng.random((k, 2))
    walls = []
    seen = set()
    for _ in range(max_attempts):
        if len(walls) == m:
            break
        anchor = rng.random(2)
        theta = rng.random() * np.pi
        normal = np.array([np.cos(theta), np.sin(theta)])
        val = (pts - anchor) @ normal
        a = tuple(int(i) for i in np.nonzero(val < 0)[0])
        b = tuple(int(i) for i in np.nonzero(val >= 0)[0])
        if not a or not b:
            continue
        key = min(a, b)
        if key in seen:
            continue
        seen.add(key)
        walls.append((a, b))
    if len(walls) < m:
        raise StructuralError(f"could not cut {m} distinct walls from {k} points")
    return Wallspace(k, tuple(walls))


def random_wallspace_dual(k, m, seed):
    return dual_complex(random_wallspace(k, m, seed)).graph


def _coset_index(depth):
    """Vertex ids for the cosets: level i has 2**(depth - i) cosets of G_i."""
    index = {}
    for level in range(depth, -1, -1):
        for t in range(2 ** (depth - level)):
            index[level, t] = len(index)
    return index


def coset_tree(depth):
    """Cosets of G_i = (Z/2)^i inside G_depth, for i = 0..depth.

    A level-i coset is encoded by the coordinates i+1..depth of any of its
    elements (bit j of the code is coordinate i+1+j); it is joined to the
    unique level-(i+1) coset containing it.  The root is vertex 0.
    """
    depth = int(depth)
    if depth < 0:
        raise StructuralError("negative depth")
    _check_size(2 ** (depth + 1) - 1)
    index = _coset_index(depth)
    edges = [(index[level + 1, t >> 1], index[level, t])
             for level in range(depth) for t in range(2 ** (depth - level))]
    return CubeGraph(len(index), edges)


def coset_tree_action(depth):
    """Vertex maps of the basis vectors e_1..e_depth acting by translation."""
    index = _coset_index(depth)
    maps = []
    for j in range(1, depth + 1):
        img = [0] * len(index)
        for (level, t), v in index.items():
            t2 = t ^ (1 << (j - level - 1)) if j > level else t
            img[v] = index[level, t2]
        maps.append(img)
    return maps


# -- windows of periodic complexes, with a translation defined where possible


def path_window_shift(length=9):
    """Path P_length with the shift v -> v+1 on all but the last vertex."""
    g = path(length)
    domain = list(range(length - 1))
    return g, domain, [v + 1 for v in domain]


def strip_window_shift(length=9, flip=False):
    """P_length x P_2 with (x, y) -> (x+1, y), or (x+1, 1-y) when ``flip``."""
    g = grid(length, 2)
    domain, image = [], []
    for x in range(length - 1):
        for y in range(2):
            domain.append(2 * x + y)
            image.append(2 * (x + 1) + ((1 - y) if flip else y))
    return g, domain, image


def grid_window_diagonal(a=9, b=9):
    """P_a x P_b with the diagonal shift (x, y) -> (x+1, y+1)."""
    g = grid(a, b)
    domain, image = [], []
    for x in range(a - 1):
        for y in range(b - 1):
            domain.append(x * b + y)
            image.append((x + 1) * b + (y + 1))
    return g, domain, image


GENERATOR_KINDS = ("cube", "path", "grid", "random-tree", "random-wallspace", "coset-tree", "star")


def generate(kind, params, seed=0):
    """Dispatch on a generator name; returns a CubeGraph or a Wallspace."""
    p = [int(x) for x in params]
    try:
        if kind == "cube":
            return cube(*p)
        if kind == "path":
            return path(*p)
        if kind == "grid":
            return grid(*p)
        if kind == "star":
            return star(*p)
        if kind == "random-tree":
            return random_tree(*p, seed=seed)
        if kind == "random-wallspace":
            return random_wallspace(*p, seed=seed)
        if kind == "coset-tree":
            return coset_tree(*p)
    except TypeError as exc:
        raise StructuralError(f"bad parameters for {kind}: {params}") from exc
    raise StructuralError(f"unknown generator {kind!r}; choose from {', '.join(GENERATOR_KINDS)}")
