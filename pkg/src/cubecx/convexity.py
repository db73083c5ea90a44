"""Convex vertex sets, hulls and the gate (combinatorial nearest-point) map."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LawViolation, NotConvexError, StructuralError
from .graph import _pack_words, structure


@dataclass(frozen=True)
class ConvexSet:
    """A convex vertex set together with halfspaces cutting it out.

    ``defining_halfspaces`` holds ``(hyperplane, side)`` pairs; the set is
    exactly the intersection of those halfspaces (the whole vertex set when
    the tuple is empty).
    """

    vertices: tuple
    defining_halfspaces: tuple

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in set(self.vertices)

    def to_dict(self):
        return {"vertices": list(self.vertices),
                "defining_halfspaces": [list(p) for p in self.defining_halfspaces]}


def _vertex_array(g, S):
    vs = sorted({g.check_vertex(v) for v in S})
    if not vs:
        raise StructuralError("empty vertex set")
    return np.asarray(vs, dtype=np.int64)


def is_convex(g, S):
    """Return ``(True, None)`` or ``(False, (x, y, u))`` with u on an x-y geodesic outside S."""
    st = structure(g)
    idx = _vertex_array(g, S)
    D = st.D
    inside = np.zeros(g.n, dtype=bool)
    inside[idx] = True
    for x in idx:
        on_geod = D[x][None, :] + D[idx] == D[x, idx][:, None]
        bad = on_geod & ~inside[None, :]
        if bad.any():
            i, u = np.argwhere(bad)[0]
            return False, (int(x), int(idx[i]), int(u))
    return True, None


def convex_hull(g, S):
    """Smallest convex set containing S: the intersection of halfspaces containing it."""
    st = structure(g)
    idx = _vertex_array(g, S)
    sub = st.S[idx]
    all_b = sub.all(axis=0)
    all_a = ~sub.any(axis=0)
    keep = np.ones(g.n, dtype=bool)
    if all_b.any():
        keep &= st.S[:, all_b].all(axis=1)
    if all_a.any():
        keep &= ~st.S[:, all_a].any(axis=1)
    defining = tuple(sorted([(int(J), 0) for J in np.nonzero(all_a)[0]] +
                            [(int(J), 1) for J in np.nonzero(all_b)[0]]))
    return ConvexSet(tuple(int(v) for v in np.nonzero(keep)[0]), defining)


def halfspace(g, J, side):
    st = structure(g)
    col = st.S[:, J] if side else ~st.S[:, J]
    return ConvexSet(tuple(int(v) for v in np.nonzero(col)[0]), ((int(J), int(side)),))


def carrier(g, J):
    """The carrier N(J) as a convex set."""
    st = structure(g)
    return convex_hull(g, st.carriers[J])


def as_convex(g, C):
    if isinstance(C, ConvexSet):
        return C
    ok, witness = is_convex(g, C)
    if not ok:
        raise NotConvexError(witness)
    return convex_hull(g, C)


def crossing(g, C):
    """Hyperplanes meeting C, i.e. with vertices of C on both sides."""
    st = structure(g)
    C = as_convex(g, C)
    sub = st.S[list(C.vertices)]
    both = sub.any(axis=0) & ~sub.all(axis=0)
    return tuple(int(J) for J in np.nonzero(both)[0])


def gate(g, x, C):
    """The unique vertex of convex C nearest to x.

    Found by walking inside C: from the current vertex c, step to a neighbour
    c2 in C whenever median(x, c, c2) = c2.  For adjacent c, c2 that median
    is c2 exactly when d(x, c2) = d(x, c) - 1, which is the test used.  The
    gate law d(x, c) = d(x, gate) + d(gate, c) is then checked for every c
    in C.
    """
    st = structure(g)
    C = as_convex(g, C)
    x = g.check_vertex(x)
    inside = np.zeros(g.n, dtype=bool)
    verts = np.asarray(C.vertices, dtype=np.int64)
    inside[verts] = True
    dx = st.D[x]
    c = int(verts[0])
    moved = True
    while moved:
        moved = False
        for c2 in g.adjacency[c]:
            if inside[c2] and dx[c2] == dx[c] - 1:
                c, moved = c2, True
                break
    D = st.D
    if np.any(D[x, verts] != D[x, c] + D[c, verts]):
        raise LawViolation(f"gate law fails for x={x} and candidate gate {c}")
    return c


@dataclass(frozen=True)
class Projection:
    graph: object = field(repr=False)
    target: ConvexSet
    gates: dict

    @property
    def image(self):
        return tuple(sorted(set(self.gates.values())))

    def diameter(self):
        D = structure(self.graph).D
        im = list(self.image)
        return int(D[np.ix_(im, im)].max())

    def separators(self, x, y):
        """Hyperplanes separating the gates of x and y.

        Checked against (separators of x, y) ∩ (hyperplanes crossing the target).
        """
        st = structure(self.graph)
        px, py = self.gates[x], self.gates[y]
        got = set(np.nonzero(st.S[px] != st.S[py])[0].tolist())
        expected = set(np.nonzero(st.S[x] != st.S[y])[0].tolist()) & set(crossing(self.graph, self.target))
        if got != expected:
            raise LawViolation(f"projection separation law fails for ({x}, {y})")
        return tuple(sorted(got))


def project_set(g, S, C):
    C = as_convex(g, C)
    gates = {int(v): gate(g, v, C) for v in _vertex_array(g, S)}
    return Projection(g, C, gates)


def gate_vector(g, C):
    """Gates of every vertex at once, read off sign vectors.

    A vertex's gate keeps its own side of every hyperplane crossing C and
    takes C's side of every other one; this is an independent route to
    :func:`gate`.
    """
    st = structure(g)
    C = as_convex(g, C)
    sub = st.S[list(C.vertices)]
    fixed = sub.all(axis=0) | ~sub.any(axis=0)
    codes = st.S.copy()
    codes[:, fixed] = sub[0, fixed][None, :]
    out = st.lookup.find(_pack_words(codes))
    if np.any(out < 0):
        raise LawViolation("projected sign vector is not a vertex")
    return out
