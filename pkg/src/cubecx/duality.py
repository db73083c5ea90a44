"""Wallspaces, their dual cube complexes, restriction quotients and products."""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import CapExceeded, LawViolation, StructuralError
from .graph import CubeGraph, hyperplanes, structure

MAX_WALLS = 16


@dataclass(frozen=True)
class Wallspace:
    """A finite ground set ``0..ground-1`` with a list of bipartitions."""

    ground: int
    walls: tuple

    def __post_init__(self):
        if self.ground <= 0:
            raise StructuralError("empty ground set")
        full = set(range(self.ground))
        seen = set()
        walls = []
        for i, w in enumerate(self.walls):
            if len(w) != 2:
                raise StructuralError(f"wall {i} does not have two sides")
            a, b = (tuple(sorted(int(p) for p in s)) for s in w)
            if not a or not b:
                raise StructuralError(f"wall {i} has an empty side")
            if set(a) | set(b) != full or set(a) & set(b) or len(a) + len(b) != self.ground:
                raise StructuralError(f"wall {i} does not partition the ground set")
            key = min(a, b)
            if key in seen:
                raise StructuralError(f"wall {i} duplicates an earlier wall")
            seen.add(key)
            walls.append((a, b))
        object.__setattr__(self, "walls", tuple(walls))

    def side_masks(self):
        """Per wall, the two sides as Python int bitmasks over the ground set."""
        return [tuple(sum(1 << p for p in s) for s in w) for w in self.walls]

    def to_dict(self):
        return {"ground": self.ground, "walls": [[list(a), list(b)] for a, b in self.walls]}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(int(data["ground"]), tuple(tuple(w) for w in data["walls"]))
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed wallspace description: {exc}") from None


@dataclass(frozen=True)
class Ultrafilter:
    orientation: tuple

    def is_consistent(self, ws):
        masks = ws.side_masks()
        chosen = [masks[i][s] for i, s in enumerate(self.orientation)]
        return all(a & b for i, a in enumerate(chosen) for b in chosen[i + 1:])

    @classmethod
    def principal(cls, ws, point):
        return cls(tuple(0 if point in a else 1 for a, _ in ws.walls))


@dataclass(frozen=True)
class DualComplex:
    graph: CubeGraph
    orientations: tuple           # vertex id -> tuple of chosen sides
    wall_hyperplane: tuple        # wall index -> hyperplane id of the dual


def dual_complex(ws, max_walls=MAX_WALLS):
    """Sageev dual of a finite wallspace.

    Vertices are the consistent orientations (pairwise intersecting chosen
    sides) reachable from the principal orientation at point 0 by flipping
    one wall at a time; edges join orientations differing on one wall.
    """
    k = len(ws.walls)
    if max_walls is not None and k > max_walls:
        raise CapExceeded(f"{k} walls exceeds the cap of {max_walls}")
    masks = ws.side_masks()
    # disjoint[i][s][t]: walls j whose side t is disjoint from side s of wall i
    disjoint = [[[0, 0], [0, 0]] for _ in range(k)]
    for i in range(k):
        for s in (0, 1):
            for j in range(k):
                if j == i:
                    continue
                for t in (0, 1):
                    if not masks[i][s] & masks[j][t]:
                        disjoint[i][s][t] |= 1 << j
    full = (1 << k) - 1
    start = sum(1 << i for i, (a, _) in enumerate(ws.walls) if 0 not in a)
    seen = {start}
    queue = deque([start])
    edges = set()
    while queue:
        o = queue.popleft()
        for i in range(k):
            s = 1 - ((o >> i) & 1)
            if (disjoint[i][s][1] & o) or (disjoint[i][s][0] & ~o & full):
                continue
            o2 = o ^ (1 << i)
            edges.add((min(o, o2), max(o, o2)))
            if o2 not in seen:
                seen.add(o2)
                queue.append(o2)
    codes = sorted(seen)
    index = {c: v for v, c in enumerate(codes)}
    g = CubeGraph(len(codes), [(index[a], index[b]) for a, b in edges])
    orientations = tuple(tuple((c >> i) & 1 for i in range(k)) for c in codes)
    wall_hyp = [None] * k
    if k:
        st = structure(g)
        for a, b in sorted(edges):
            i = (a ^ b).bit_length() - 1
            if wall_hyp[i] is None:
                wall_hyp[i] = int(st.edge_class[g.edge_id(index[a], index[b])])
        if None in wall_hyp:
            raise LawViolation(f"wall {wall_hyp.index(None)} is never flipped in the dual")
    return DualComplex(g, orientations, tuple(wall_hyp))


def walls_of(g):
    """The halfspace bipartitions of g as a wallspace on its vertex set."""
    return Wallspace(g.n, tuple((H.halfspace_a, H.halfspace_b) for H in hyperplanes(g)))


def round_trip_map(g, dual=None):
    """Explicit isomorphism g -> dual(walls_of(g)): each vertex to its principal orientation.

    Raises LawViolation unless the map is a bijection carrying edges onto edges.
    """
    st = structure(g)
    if dual is None:
        dual = dual_complex(walls_of(g), max_walls=None)
    index = {o: v for v, o in enumerate(dual.orientations)}
    phi = []
    for v in range(g.n):
        o = tuple(int(b) for b in st.S[v])
        if o not in index:
            raise LawViolation(f"principal orientation of vertex {v} missing from dual")
        phi.append(index[o])
    if sorted(phi) != list(range(dual.graph.n)):
        raise LawViolation("principal orientations do not exhaust the dual")
    image = {tuple(sorted((phi[u], phi[v]))) for u, v in g.edges}
    if image != set(dual.graph.edges):
        raise LawViolation("principal-orientation map does not carry edges onto edges")
    return phi


@dataclass(frozen=True)
class Quotient:
    graph: CubeGraph
    vertex_map: tuple             # vertex of g -> vertex of quotient
    hyperplane_map: dict          # hyperplane of g in K -> hyperplane of quotient


def restriction_quotient(g, K):
    """Collapse every hyperplane outside K.

    Vertices of the quotient are the classes of vertices not separated by
    any member of K.
    """
    st = structure(g)
    K = sorted({int(J) for J in K})
    if any(not 0 <= J < st.h for J in K):
        raise KeyError(f"unknown hyperplane in {K}")
    if not K:
        warnings.warn("empty hyperplane set: restriction quotient is a single point", stacklevel=2)
        return Quotient(CubeGraph(1, []), tuple([0] * g.n), {})
    rows = st.S[:, K]
    uniq, qmap = np.unique(rows, axis=0, return_inverse=True)
    qmap = qmap.ravel()
    E = st.edge_array
    keep = np.isin(st.edge_class, K)
    qedges = {tuple(sorted((int(qmap[u]), int(qmap[v])))) for u, v in E[keep]}
    q = CubeGraph(len(uniq), sorted(qedges))
    qst = structure(q)
    hmap = {}
    for J in K:
        e = int(st.class_edges[J][0])
        u, v = g.edges[e]
        hmap[J] = int(qst.edge_class[q.edge_id(int(qmap[u]), int(qmap[v]))])
    if sorted(hmap.values()) != list(range(qst.h)):
        raise LawViolation("quotient hyperplanes do not biject with K")
    return Quotient(q, tuple(int(c) for c in qmap), hmap)


@dataclass(frozen=True)
class Decomposition:
    classes: tuple                # tuple of tuples of hyperplane ids
    factors: tuple                # Quotient per class

    @property
    def irreducible(self):
        return len(self.classes) <= 1


def irreducible_decompose(g):
    """Split the hyperplanes into classes of the non-transversality graph.

    Hyperplanes in different classes always cross, so g is the product of
    the restriction quotients of the classes; the product identification is
    checked by summing factor distances over every vertex pair.
    """
    st = structure(g)
    if st.h == 0:
        return Decomposition((), ())
    disjoint = ~st.transverse
    np.fill_diagonal(disjoint, False)
    _, labels = connected_components(disjoint.astype(np.int8), directed=False)
    groups = {}
    for J, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(J)
    classes = tuple(sorted(tuple(v) for v in groups.values()))
    factors = tuple(restriction_quotient(g, c) for c in classes)
    total = np.zeros_like(st.D)
    for f in factors:
        qm = np.asarray(f.vertex_map)
        total = total + f.graph.dist[np.ix_(qm, qm)]
    if not np.array_equal(total, st.D):
        raise LawViolation("factor distances do not add up to the distance in g")
    return Decomposition(classes, factors)
