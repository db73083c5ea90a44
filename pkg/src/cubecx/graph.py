"""Finite CAT(0) cube complexes, represented by their 1-skeleta.

A finite graph is the 1-skeleton of a CAT(0) cube complex exactly when it is
a median graph (Chepoi, Roller); cubes are then recovered as the subgraphs
isomorphic to hypercubes, so nothing beyond the vertex/edge data is stored.
Hyperplanes are the classes of the relation "opposite sides of a 4-cycle",
closed transitively; in a median graph these coincide with the
Djokovic-Winkler classes, and removing one class leaves exactly two convex
components (the halfspaces).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import CapExceeded, LawViolation, NotMedianError, StructuralError

MAX_VERTICES = 50_000
MAX_HYPERPLANES = 5_000


class CubeGraph:
    """A finite simple graph with dense integer vertex ids ``0..n-1``.

    Edges are stored as sorted ``(u, v)`` pairs with ``u < v``; the position
    of an edge in :attr:`edges` is its edge id.  Construction only checks that
    the data describe a simple graph; the median property is checked by
    :func:`validate_median`, which every geometric query runs implicitly.
    """

    def __init__(self, n, edges):
        n = int(n)
        if n <= 0:
            raise StructuralError("empty graph")
        seen = set()
        for e in edges:
            if len(e) != 2:
                raise StructuralError(f"edge {e!r} does not have two endpoints")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise StructuralError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise StructuralError(f"edge ({u}, {v}) out of range for {n} vertices")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise StructuralError(f"duplicate edge {key}")
            seen.add(key)
        self.n = n
        self.edges = tuple(sorted(seen))
        adj = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)
        self._edge_ids = {e: i for i, e in enumerate(self.edges)}
        self._structure = None
        self._report = None

    def __repr__(self):
        return f"CubeGraph(n={self.n}, edges={len(self.edges)})"

    def edge_id(self, u, v):
        key = (u, v) if u < v else (v, u)
        try:
            return self._edge_ids[key]
        except KeyError:
            raise KeyError(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u, v):
        return ((u, v) if u < v else (v, u)) in self._edge_ids

    def check_vertex(self, v):
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise KeyError(f"unknown vertex {v!r}")
        return int(v)

    # -- serialisation ---------------------------------------------------

    def to_dict(self):
        return {"vertices": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(data["vertices"], data["edges"])
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed complex description: {exc}") from None

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_networkx(self):
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    # -- metric data -----------------------------------------------------

    @cached_property
    def sparse_adjacency(self):
        m = len(self.edges)
        if m == 0:
            return csr_matrix((self.n, self.n), dtype=np.int8)
        e = np.asarray(self.edges, dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return coo_matrix((np.ones(2 * m, dtype=np.int8), (rows, cols)),
                          shape=(self.n, self.n)).tocsr()

    @cached_property
    def dist(self):
        """All-pairs graph distance; ``-1`` marks unreachable pairs."""
        d = shortest_path(self.sparse_adjacency, method="D", unweighted=True)
        d[np.isinf(d)] = -1
        out = d.astype(np.int32)
        out.setflags(write=False)
        return out


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edges: tuple
    halfspace_a: tuple
    halfspace_b: tuple
    carrier: tuple

    def halfspace(self, side):
        return self.halfspace_a if side == 0 else self.halfspace_b


@dataclass(frozen=True)
class ValidationReport:
    is_median: bool
    witness: tuple | None
    vertex_count: int
    edge_count: int
    hyperplane_count: int | None = None
    dimension: int | None = None
    reason: str | None = None

    def to_dict(self):
        return {
            "is_median": self.is_median,
            "witness": None if self.witness is None else list(self.witness),
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "hyperplane_count": self.hyperplane_count,
            "dimension": self.dimension,
            "reason": self.reason,
        }


# ---------------------------------------------------------------------------
# Theta classes


def square_classes(g):
    """Label each edge with its class under the square-opposite closure.

    Returns an int array over edge ids; labels are numbered in order of the
    smallest edge id in each class.
    """
    m = len(g.edges)
    adj_sets = [set(a) for a in g.adjacency]
    rows, cols = [], []
    eid = g._edge_ids
    for u in range(g.n):
        nb = g.adjacency[u]
        for i in range(len(nb)):
            a = nb[i]
            for b in nb[i + 1:]:
                for w in adj_sets[a] & adj_sets[b]:
                    if w == u:
                        continue
                    # square u-a-w-b
                    ua, bw = eid[(u, a) if u < a else (a, u)], eid[(b, w) if b < w else (w, b)]
                    ub, aw = eid[(u, b) if u < b else (b, u)], eid[(a, w) if a < w else (w, a)]
                    rows += [ua, ub]
                    cols += [bw, aw]
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    rel = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(m, m))
    _, labels = connected_components(rel, directed=False)
    first = {}
    for e, lab in enumerate(labels):
        first.setdefault(lab, len(first))
    return np.array([first[lab] for lab in labels], dtype=np.int64)


# ---------------------------------------------------------------------------
# median validation


def _pack_words(S):
    n, h = S.shape
    W = max(1, (h + 63) // 64)
    words = np.zeros((n, W), dtype=np.uint64)
    for k in range(h):
        words[:, k // 64] |= S[:, k].astype(np.uint64) << np.uint64(k % 64)
    return words


class _CodeLookup:
    """Exact membership/lookup of packed sign vectors."""

    def __init__(self, words):
        self.words = words
        W = words.shape[1]
        rng = np.random.default_rng(0x5EED)
        self._mult = (rng.integers(1, 2**63, size=W, dtype=np.uint64) << np.uint64(1)) | np.uint64(1)
        hv = self._hash(words)
        self._order = np.argsort(hv, kind="stable")
        self._sorted = hv[self._order]
        if len(self._sorted) > 1 and np.any(self._sorted[1:] == self._sorted[:-1]):
            raise LawViolation("hash collision between vertex codes")

    def _hash(self, w):
        with np.errstate(over="ignore"):
            return (w * self._mult).sum(axis=-1, dtype=np.uint64) if w.shape[-1] > 1 else w[..., 0].copy()

    def find(self, w):
        """Vertex ids for code rows ``w`` (shape (..., W)); -1 where absent."""
        hv = self._hash(w)
        idx = np.searchsorted(self._sorted, hv)
        idx = np.minimum(idx, len(self._sorted) - 1)
        hit = self._sorted[idx] == hv
        cand = self._order[idx]
        exact = np.all(self.words[cand] == w, axis=-1)
        return np.where(hit & exact, cand, -1)


def _majority_failure(words, lookup):
    n = words.shape[0]
    for x in range(n - 2):
        a = words[x]
        Y = words[x + 1:]
        m = Y.shape[0]
        ay = a & Y
        maj = ay[:, None, :] | ay[None, :, :] | (Y[:, None, :] & Y[None, :, :])
        found = lookup.find(maj)
        bad = (found < 0) & np.triu(np.ones((m, m), dtype=bool), 1)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            return (x, x + 1 + int(i), x + 1 + int(j))
    return None


def median_count(D, x, y, z):
    """Number of vertices lying on geodesics between each pair of x, y, z."""
    ixy = D[x] + D[y] == D[x, y]
    ixz = D[x] + D[z] == D[x, z]
    iyz = D[y] + D[z] == D[y, z]
    return int(np.count_nonzero(ixy & ixz & iyz))


def _brute_median_witness(D):
    n = D.shape[0]
    for x in range(n):
        for y in range(x + 1, n):
            ixy = D[x] + D[y] == D[x, y]
            zs = np.arange(y + 1, n)
            if len(zs) == 0:
                continue
            ixz = (D[x][None, :] + D[zs]) == D[x, zs][:, None]
            iyz = (D[y][None, :] + D[zs]) == D[y, zs][:, None]
            counts = np.count_nonzero(ixy[None, :] & ixz & iyz, axis=1)
            bad = np.nonzero(counts != 1)[0]
            if len(bad):
                z = int(zs[bad[0]])
                return (x, y, z), int(counts[bad[0]])
    return None, 1


class Structure:
    """Hyperplane data of a validated median graph (internal, immutable)."""

    def __init__(self, g, edge_class, S):
        self.g = g
        self.n = g.n
        self.edge_class = edge_class
        self.h = S.shape[1]
        self.S = S
        self.S.setflags(write=False)
        self.words = _pack_words(S)
        self.lookup = _CodeLookup(self.words)
        order = np.argsort(edge_class, kind="stable")
        bounds = np.searchsorted(edge_class[order], np.arange(self.h + 1))
        self.class_edges = [order[bounds[k]:bounds[k + 1]] for k in range(self.h)]

    @property
    def D(self):
        return self.g.dist

    def vertex_of(self, words_row):
        v = int(self.lookup.find(np.asarray(words_row, dtype=np.uint64)[None, :])[0])
        return v

    @cached_property
    def edge_array(self):
        return np.asarray(self.g.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def carriers(self):
        E = self.edge_array
        return [np.unique(E[idx].ravel()) for idx in self.class_edges]

    @cached_property
    def carrier_mask(self):
        M = np.zeros((self.h, self.n), dtype=bool)
        for k, c in enumerate(self.carriers):
            M[k, c] = True
        return M

    @cached_property
    def quadrants(self):
        """``Q[s, t][J, H]`` = size of halfspace(J, s) ∩ halfspace(H, t)."""
        B = self.S.astype(np.int64)
        A = 1 - B
        return {(0, 0): A.T @ A, (0, 1): A.T @ B, (1, 0): B.T @ A, (1, 1): B.T @ B}

    @cached_property
    def transverse(self):
        q = self.quadrants
        T = (q[0, 0] > 0) & (q[0, 1] > 0) & (q[1, 0] > 0) & (q[1, 1] > 0)
        np.fill_diagonal(T, False)
        T.setflags(write=False)
        return T

    @cached_property
    def hside(self):
        """``hside[V, J]`` = side of V containing J's carrier, or -1.

        Defined when V and J are distinct and disjoint; a disjoint J has its
        whole carrier inside one halfspace of V.
        """
        reps = np.array([c[0] for c in self.carriers], dtype=np.int64)
        out = self.S[reps].T.astype(np.int8)
        out[self.transverse] = -1
        np.fill_diagonal(out, -1)
        out.setflags(write=False)
        return out

    @cached_property
    def separation_count(self):
        """Number of hyperplanes separating J from H (0 when they cross)."""
        A = (self.hside == 0).astype(np.int64)
        B = (self.hside == 1).astype(np.int64)
        return A.T @ B + B.T @ A

    @cached_property
    def strongly_separated(self):
        T = self.transverse.astype(np.int64)
        common = T @ T
        ss = ~self.transverse & (common == 0)
        np.fill_diagonal(ss, False)
        return ss

    @cached_property
    def dimension(self):
        if self.h == 0:
            return 0
        G = nx.Graph()
        G.add_nodes_from(range(self.h))
        G.add_edges_from(zip(*np.nonzero(np.triu(self.transverse, 1))))
        clique, _ = nx.max_weight_clique(G, weight=None)
        return len(clique)

    # -- l-infinity ------------------------------------------------------

    def chain_lengths(self, x):
        """Longest nested chain of pairwise disjoint hyperplanes ending at each J.

        Chains start next to ``x`` and move away from it; ``pred[J]`` is the
        previous element of one longest chain (-1 at the start).
        """
        far = 1 - self.S[x].astype(np.int8)          # side not containing x
        hs = self.hside
        # J precedes K: K lies on J's far side and J on K's near side
        prec = (hs == far[:, None]) & (hs.T == (1 - far)[None, :])
        size_far = np.where(far == 1, self.S.sum(axis=0), self.n - self.S.sum(axis=0))
        order = np.argsort(-size_far, kind="stable")
        f = np.ones(self.h, dtype=np.int64)
        pred = np.full(self.h, -1, dtype=np.int64)
        for K in order:
            cand = np.nonzero(prec[:, K])[0]
            if len(cand):
                best = cand[np.argmax(f[cand])]
                f[K] = f[best] + 1
                pred[K] = best
        return f, pred, far

    @cached_property
    def linf(self):
        out = np.zeros((self.n, self.n), dtype=np.int32)
        if self.h == 0:
            return out
        for x in range(self.n):
            f, _, far = self.chain_lengths(x)
            on_far = self.S == far[None, :].astype(bool)
            out[x] = np.max(np.where(on_far, f[None, :], 0), axis=1)
        out.setflags(write=False)
        return out

    @cached_property
    def linf_cube_bfs(self):
        """l-infinity distances as BFS distances after joining co-cubical vertices."""
        rows, cols = [], []
        for cube in cubes(self.g, _structure_ok=True):
            for a, b in itertools.combinations(cube, 2):
                rows.append(a)
                cols.append(b)
        M = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(self.n, self.n)).tocsr()
        d = shortest_path(M, method="D", unweighted=True, directed=False)
        return d.astype(np.int32)


def _caps_check(count, cap, what):
    if cap is not None and count > cap:
        raise CapExceeded(f"{count} {what} exceeds the cap of {cap}; raise the cap explicitly")


def validate_median(g, max_vertices=MAX_VERTICES, max_hyperplanes=MAX_HYPERPLANES):
    """Decide whether ``g`` is a connected median graph.

    On failure the report carries a vertex triple with zero or several
    medians.  On success the hyperplane structure is cached on ``g``.
    """
    if g._report is not None:
        return g._report
    _caps_check(g.n, max_vertices, "vertices")
    n, m = g.n, len(g.edges)

    def fail(witness, reason):
        g._report = ValidationReport(False, tuple(int(v) for v in witness), n, m, reason=reason)
        return g._report

    ncomp, labels = connected_components(g.sparse_adjacency, directed=False)
    if ncomp > 1:
        other = int(np.nonzero(labels != labels[0])[0][0])
        return fail((0, other, other), "disconnected")
    if n == 1:
        st = Structure(g, np.zeros(0, dtype=np.int64), np.zeros((1, 0), dtype=bool))
        g._structure = st
        g._report = ValidationReport(True, None, 1, 0, 0, 0)
        return g._report

    D = g.dist
    edge_class = square_classes(g)
    h = int(edge_class.max()) + 1
    _caps_check(h, max_hyperplanes, "hyperplanes")

    def brute():
        triple, count = _brute_median_witness(D)
        if triple is None:
            raise LawViolation("structural checks failed but every triple has one median")
        return fail(triple, "no median" if count == 0 else "multiple medians")

    E = np.asarray(g.edges, dtype=np.int64)
    first = np.array([np.nonzero(edge_class == k)[0][0] for k in range(h)])
    a, b = E[first, 0], E[first, 1]
    da, db = D[:, a], D[:, b]
    if np.any(da == db):
        return brute()
    S = db < da
    flip = S[0].copy()
    S[:, flip] = ~S[:, flip]
    crosses = S[E[:, 0]] != S[E[:, 1]]
    if not (np.all(crosses.sum(axis=1) == 1) and np.all(crosses[np.arange(m), edge_class])):
        return brute()
    Si = S.astype(np.int32)
    hamming = Si @ (1 - Si).T + (1 - Si) @ Si.T
    if not np.array_equal(hamming, D):
        return brute()
    st = Structure(g, edge_class, S)
    bad = _majority_failure(st.words, st.lookup)
    if bad is not None:
        return fail(bad, "no median")
    g._structure = st
    g._report = ValidationReport(True, None, n, m, h, st.dimension)
    return g._report


def structure(g):
    if g._structure is None:
        report = validate_median(g)
        if not report.is_median:
            raise NotMedianError(report)
    return g._structure


# ---------------------------------------------------------------------------
# queries


def hyperplanes(g):
    """Hyperplanes of ``g`` ordered by smallest edge id.

    Halfspace A is the one containing vertex 0.
    """
    st = structure(g)
    if getattr(st, "_hyperplanes", None) is None:
        out = []
        for k in range(st.h):
            col = st.S[:, k]
            out.append(Hyperplane(
                id=k,
                edges=tuple(int(e) for e in st.class_edges[k]),
                halfspace_a=tuple(int(v) for v in np.nonzero(~col)[0]),
                halfspace_b=tuple(int(v) for v in np.nonzero(col)[0]),
                carrier=tuple(int(v) for v in st.carriers[k]),
            ))
        st._hyperplanes = out
    return st._hyperplanes


def side(g, v, J):
    """0 if ``v`` is in halfspace A of J, else 1."""
    return int(structure(g).S[g.check_vertex(v), J])


def separators(g, x, y):
    st = structure(g)
    x, y = g.check_vertex(x), g.check_vertex(y)
    return tuple(int(k) for k in np.nonzero(st.S[x] != st.S[y])[0])


def dist_l1(g, x, y):
    """Graph distance and the hyperplanes separating ``x`` from ``y``."""
    st = structure(g)
    x, y = g.check_vertex(x), g.check_vertex(y)
    seps = separators(g, x, y)
    d = int(st.D[x, y])
    if d != len(seps):
        raise LawViolation(f"d({x},{y}) = {d} but {len(seps)} hyperplanes separate them")
    return d, seps


def longest_disjoint_chain(g, x, y):
    """A longest sequence of pairwise disjoint separators of x and y, from x."""
    st = structure(g)
    x, y = g.check_vertex(x), g.check_vertex(y)
    if x == y:
        return ()
    f, pred, far = st.chain_lengths(x)
    seps = np.nonzero(st.S[x] != st.S[y])[0]
    end = int(seps[np.argmax(f[seps])])
    chain = [end]
    while pred[chain[-1]] >= 0:
        chain.append(int(pred[chain[-1]]))
    return tuple(reversed(chain))


def dist_linf(g, x, y):
    """l-infinity distance: the most pairwise disjoint hyperplanes separating x, y."""
    st = structure(g)
    x, y = g.check_vertex(x), g.check_vertex(y)
    chain = longest_disjoint_chain(g, x, y)
    if len(chain) != st.linf_cube_bfs[x, y]:
        raise LawViolation(f"chain length {len(chain)} differs from cube-diagonal "
                           f"distance {st.linf_cube_bfs[x, y]} for ({x}, {y})")
    return len(chain)


def interval(g, x, y):
    D = structure(g).D
    x, y = g.check_vertex(x), g.check_vertex(y)
    return tuple(int(u) for u in np.nonzero(D[x] + D[y] == D[x, y])[0])


def median(g, x, y, z):
    st = structure(g)
    x, y, z = (g.check_vertex(v) for v in (x, y, z))
    w = st.words
    maj = (w[x] & w[y]) | (w[x] & w[z]) | (w[y] & w[z])
    m = st.vertex_of(maj)
    if m < 0:
        raise LawViolation(f"majority of ({x}, {y}, {z}) is not a vertex")
    return m


def dimension(g):
    return structure(g).dimension


def cubes(g, _structure_ok=False):
    """Vertex tuples of every cube of dimension >= 1, grown edge by edge.

    A cube is grown from a base vertex ``v`` along neighbours ``a_1 < ... < a_k``;
    adding a direction requires each new corner to be the unique common
    neighbour completing the square, and all cube edges to be present.
    Independent of the hyperplane machinery (used to cross-check it).
    """
    if not _structure_ok:
        structure(g)
    adj = [set(a) for a in g.adjacency]
    found = set()

    def grow(v, dirs, corners):
        # corners: dict frozenset(dir indices) -> vertex
        found.add(frozenset(corners.values()))
        start = g.adjacency[v].index(dirs[-1]) + 1 if dirs else 0
        for b in g.adjacency[v][start:]:
            new = dict(corners)
            new[frozenset([len(dirs)])] = b
            ok = True
            for T in sorted(corners, key=len):
                if not T:
                    continue
                a = next(iter(T))
                p = corners[T]
                q = new[(T - {a}) | {len(dirs)}]
                r = corners[T - {a}]
                common = (adj[p] & adj[q]) - {r}
                if len(common) != 1:
                    ok = False
                    break
                w = common.pop()
                new[T | {len(dirs)}] = w
            if not ok or len(set(new.values())) != len(new):
                continue
            if all(new[T - {i}] in adj[new[T]] for T in new for i in T):
                grow(v, dirs + [b], new)

    for v in range(g.n):
        grow(v, [], {frozenset(): v})
    return sorted(tuple(sorted(c)) for c in found if len(c) > 1)
