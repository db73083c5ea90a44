"""The fixed test corpora: random wallspace duals, named complexes, actions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import generators as gen
from .actions import PartialAutomorphism, automorphism_group, generate_group
from .graph import CubeGraph

DEFAULT_SEED = 20240601
RANDOM_COUNT = 200


@dataclass(frozen=True)
class Entry:
    name: str
    graph: CubeGraph = field(repr=False)


def random_duals(count=RANDOM_COUNT, seed=DEFAULT_SEED):
    """``count`` duals of random planar wallspaces, with k in [6, 40] points and m in [2, 16] walls."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        k = int(rng.integers(6, 41))
        m = int(rng.integers(2, 17))
        s = int(rng.integers(0, 2**31))
        out.append(Entry(f"wallspace-{i}-k{k}-m{m}-s{s}", gen.random_wallspace_dual(k, m, s)))
    return out


def named_complexes():
    items = [("point", gen.path(1))]
    items += [(f"cube-{n}", gen.cube(n)) for n in (1, 2, 3, 4)]
    items += [(f"path-{n}", gen.path(n)) for n in (2, 5, 9)]
    items += [("grid-3x3", gen.grid(3, 3)), ("grid-4x4", gen.grid(4, 4)), ("grid-6x5", gen.grid(6, 5)),
              ("strip-9x2", gen.grid(9, 2)), ("p3xq3", gen.product_of_paths([3, 2, 2, 2]))]
    items += [(f"star-{k}", gen.star(k)) for k in (3, 5)]
    items += [(f"coset-tree-{d}", gen.coset_tree(d)) for d in (1, 2, 3, 4)]
    items += [(f"random-tree-{s}", gen.random_tree(25, s)) for s in range(5)]
    return [Entry(n, g) for n, g in items]


def full_corpus(seed=DEFAULT_SEED, count=RANDOM_COUNT):
    return named_complexes() + random_duals(count, seed)


# ---------------------------------------------------------------------------
# actions


def cube_coordinate_map(n, perm=None, flips=0):
    """Vertex map of Q_n permuting coordinates (perm[i] = source of coordinate i) and flipping bits."""
    perm = list(range(n)) if perm is None else list(perm)

    def bit(v, i):                   # coordinate i, 0-based, most significant first
        return (v >> (n - 1 - i)) & 1

    return tuple(sum(bit(v, perm[i]) << (n - 1 - i) for i in range(n)) ^ flips for v in range(2**n))


def q3_generators():
    """Three coordinate transpositions and three coordinate flips."""
    swaps = [cube_coordinate_map(3, p) for p in ([1, 0, 2], [0, 2, 1], [2, 1, 0])]
    flips = [cube_coordinate_map(3, flips=1 << k) for k in range(3)]
    return swaps + flips


def grid_dihedral_generators(a):
    """Reflections of the a x a grid in the vertical axis and the diagonal."""
    g = gen.grid(a, a)
    refl = tuple((a - 1 - x) * a + y for x in range(a) for y in range(a))
    diag = tuple(y * a + x for x in range(a) for y in range(a))
    return g, [refl, diag]


@dataclass(frozen=True)
class ActionEntry:
    name: str
    graph: CubeGraph = field(repr=False)
    generators: tuple = field(repr=False)        # vertex maps
    full: bool = False                           # use the whole automorphism group instead

    def group(self, cap=10**6):
        if self.full:
            return automorphism_group(self.graph, cap=cap)
        return generate_group(self.graph, self.generators, cap=cap)


def action_corpus():
    out = []
    q3 = gen.cube(3)
    out.append(ActionEntry("q3-full", q3, tuple(q3_generators())))
    out.append(ActionEntry("q3-cycle", q3, (cube_coordinate_map(3, [2, 0, 1]),)))
    out.append(ActionEntry("q3-trivial", q3, ()))
    p5 = gen.path(5)
    out.append(ActionEntry("p5-endswap", p5, (tuple(range(4, -1, -1)),)))
    out.append(ActionEntry("p5-trivial", p5, ()))
    g10, gens10 = grid_dihedral_generators(10)
    out.append(ActionEntry("p10xp10-dihedral", g10, tuple(gens10)))
    g3, gens3 = grid_dihedral_generators(3)
    out.append(ActionEntry("grid-3x3-dihedral", g3, tuple(gens3)))
    for d in (2, 3, 4):
        out.append(ActionEntry(f"coset-tree-{d}-translations", gen.coset_tree(d),
                               tuple(tuple(m) for m in gen.coset_tree_action(d))))
    out.append(ActionEntry("coset-tree-3-full", gen.coset_tree(3), (), full=True))
    out.append(ActionEntry("star-4-full", gen.star(4), (), full=True))
    out.append(ActionEntry("q4-full", gen.cube(4), (), full=True))
    out.append(ActionEntry("p3xq3-full", gen.product_of_paths([3, 2, 2, 2]), (), full=True))
    out.append(ActionEntry("random-tree-full", gen.random_tree(12, 7), (), full=True))
    return out


def window_actions():
    """Partial shifts of windows cut from periodic complexes."""
    out = {}
    g, d, i = gen.path_window_shift(9)
    out["path-window-shift"] = PartialAutomorphism(
        g, tuple(d), tuple(i), {"periodic": "bi-infinite path", "window": "P9", "translation": "v -> v+1"})
    g, d, i = gen.strip_window_shift(9)
    out["strip-window-shift"] = PartialAutomorphism(
        g, tuple(d), tuple(i), {"periodic": "line x P2", "window": "P9 x P2", "translation": "(x,y) -> (x+1,y)"})
    g, d, i = gen.strip_window_shift(9, flip=True)
    out["strip-window-glide"] = PartialAutomorphism(
        g, tuple(d), tuple(i), {"periodic": "line x P2", "window": "P9 x P2",
                                "translation": "(x,y) -> (x+1,1-y)"})
    g, d, i = gen.grid_window_diagonal(9, 9)
    out["grid-window-diagonal"] = PartialAutomorphism(
        g, tuple(d), tuple(i), {"periodic": "square grid", "window": "P9 x P9",
                                "translation": "(x,y) -> (x+1,y+1)"})
    return out
