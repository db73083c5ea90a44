"""The contact graph on hyperplanes and the strongly separated chain statistic."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import CapExceeded, LawViolation
from .graph import structure

MAX_CONTACT_NODES = 300


@dataclass(frozen=True)
class ContactGraph:
    nodes: tuple
    edges: tuple
    dist: np.ndarray = field(repr=False)
    strongly_separated: tuple = ()      # pairs J < H, for annotation

    def to_dict(self):
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges],
                "dist": self.dist.tolist()}


def _bfs_all(A):
    if A.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    d = shortest_path(csr_matrix(A.astype(np.int8)), unweighted=True, directed=False)
    d[np.isinf(d)] = -1
    return d.astype(np.int64)


def contact_graph(g):
    """Hyperplanes, joined whenever their carriers share a vertex."""
    st = structure(g)
    M = st.carrier_mask.astype(np.int64)
    A = (M @ M.T) > 0
    np.fill_diagonal(A, False)
    if np.any(st.transverse & ~A):
        raise LawViolation("a transverse pair has disjoint carriers")
    edges = tuple((int(a), int(b)) for a, b in zip(*np.nonzero(np.triu(A, 1))))
    ss = tuple((int(a), int(b)) for a, b in zip(*np.nonzero(np.triu(st.strongly_separated, 1))))
    D = _bfs_all(A)
    D.setflags(write=False)
    return ContactGraph(tuple(range(st.h)), edges, D, ss)


@dataclass(frozen=True)
class DeltaChain:
    pair: tuple
    chain: tuple

    @property
    def length(self):
        return len(self.chain)

    def to_dict(self):
        return {"pair": list(self.pair), "chain": list(self.chain), "length": self.length}


def separators_of_pair(st, J, H):
    """Hyperplanes V with J and H in different halfspaces of V."""
    hs = st.hside
    mask = (hs[:, J] >= 0) & (hs[:, H] >= 0) & (hs[:, J] != hs[:, H])
    return np.nonzero(mask)[0]


def _check_chain(st, J, H, chain):
    hs = st.hside
    for V in chain:
        if not (hs[V, J] >= 0 and hs[V, H] >= 0 and hs[V, J] != hs[V, H]):
            raise LawViolation(f"{V} does not separate {J} from {H}")
    for a, b in itertools.combinations(chain, 2):
        if not st.strongly_separated[a, b]:
            raise LawViolation(f"chain members {a}, {b} are not strongly separated")
    for a, b, c in zip(chain, chain[1:], chain[2:]):
        if not (hs[b, a] >= 0 and hs[b, c] >= 0 and hs[b, a] != hs[b, c]):
            raise LawViolation(f"{b} does not separate {a} from {c}")


def delta_chain(g, J, H):
    """A longest chain of pairwise strongly separated separators of J and H.

    Separators are totally ordered by how far they sit from J; the chain is a
    longest path in the DAG whose arcs join strongly separated pairs in that
    order.
    """
    st = structure(g)
    for K in (J, H):
        if not 0 <= K < st.h:
            raise KeyError(f"unknown hyperplane {K!r}")
    if J == H:
        raise ValueError("delta_chain needs two distinct hyperplanes")
    seps = separators_of_pair(st, J, H)
    if len(seps) == 0:
        return DeltaChain((int(J), int(H)), ())
    # V is closer to J than W iff W lies on H's side of V; separators of a
    # pair can still cross each other, so sort by distance-from-J count
    hs = st.hside
    toward_h = hs[seps, H]
    before = (hs[np.ix_(seps, seps)] == toward_h[:, None])
    rank = st.separation_count[J, seps]
    order = np.argsort(rank, kind="stable")
    f = np.ones(len(seps), dtype=np.int64)
    pred = np.full(len(seps), -1, dtype=np.int64)
    ss = st.strongly_separated[np.ix_(seps, seps)]
    for oi, b in enumerate(order):
        for a in order[:oi]:
            if before[a, b] and ss[a, b] and f[a] + 1 > f[b]:
                f[b], pred[b] = f[a] + 1, a
    end = int(np.argmax(f))
    chain = []
    while end >= 0:
        chain.append(int(seps[end]))
        end = int(pred[end])
    chain = tuple(reversed(chain))
    _check_chain(st, J, H, chain)
    return DeltaChain((int(J), int(H)), chain)


def delta_matrix(g):
    st = structure(g)
    out = np.zeros((st.h, st.h), dtype=np.int64)
    for J, H in itertools.combinations(range(st.h), 2):
        out[J, H] = out[H, J] = delta_chain(g, J, H).length
    return out


@dataclass(frozen=True)
class QIReport:
    pairs: int
    violations: tuple               # (J, H, d, delta, which) tuples
    literal_upper_failures: int     # pairs with d > 5 * delta
    literal_upper_example: tuple | None

    @property
    def clean(self):
        return not self.violations

    def to_dict(self):
        return {"pairs": self.pairs, "clean": self.clean,
                "violations": [list(v) for v in self.violations],
                "literal_upper_failures": self.literal_upper_failures,
                "literal_upper_example": None if self.literal_upper_example is None
                else list(self.literal_upper_example)}


def qi_check(g, cg=None, deltas=None):
    """Compare the chain statistic with contact distance on every pair.

    Asserted: delta <= d and delta >= d // 5.  The stronger d <= 5 * delta is
    only counted, since transverse pairs (d = 1, delta = 0) break it.
    """
    st = structure(g)
    cg = cg or contact_graph(g)
    deltas = delta_matrix(g) if deltas is None else deltas
    viol = []
    lit, example = 0, None
    pairs = 0
    for J, H in itertools.combinations(range(st.h), 2):
        pairs += 1
        d, dl = int(cg.dist[J, H]), int(deltas[J, H])
        if dl > d:
            viol.append((J, H, d, dl, "delta > d"))
        if dl < d // 5:
            viol.append((J, H, d, dl, "delta < floor(d/5)"))
        if d > 5 * dl:
            lit += 1
            if example is None:
                example = (J, H, d, dl)
    return QIReport(pairs, tuple(viol), lit, example)


def four_point_delta(cg, cap=MAX_CONTACT_NODES):
    """Exact four-point hyperbolicity constant of a (connected) distance matrix.

    For disconnected inputs the maximum over components is returned.
    """
    D = np.asarray(cg.dist if isinstance(cg, ContactGraph) else cg, dtype=np.int64)
    n = D.shape[0]
    if cap is not None and n > cap:
        raise CapExceeded(f"{n} contact nodes exceeds the quadruple-scan cap of {cap}")
    best = 0
    if n < 4:
        return Fraction(0)
    labels = np.zeros(n, dtype=np.int64)
    if np.any(D < 0):
        seen = -np.ones(n, dtype=np.int64)
        for v in range(n):
            if seen[v] < 0:
                seen[(D[v] >= 0)] = v
        labels = seen
    for lab in np.unique(labels):
        idx = np.nonzero(labels == lab)[0]
        Dc = D[np.ix_(idx, idx)]
        m = len(idx)
        for x in range(m):
            for y in range(x + 1, m):
                s1 = Dc[x, y] + Dc                              # d(x,y) + d(z,w)
                s2 = Dc[x][:, None] + Dc[y][None, :]            # d(x,z) + d(y,w)
                s3 = s2.T                                        # d(x,w) + d(y,z)
                top = np.maximum(np.maximum(s1, s2), s3)
                bottom = np.minimum(np.minimum(s1, s2), s3)
                mid = s1 + s2 + s3 - top - bottom
                v = int((top - mid).max())
                if v > best:
                    best = v
    return Fraction(best, 2)


@dataclass(frozen=True)
class HagenReport:
    pairs: int
    part_i_failures: tuple          # (J, H, S) interior geodesic vertex far from every separator
    part_ii_failures: tuple         # (J, H, W) separator avoided by some geodesic
    far_not_strong: tuple           # pairs with d >= 3 that are not strongly separated

    @property
    def clean(self):
        return not (self.part_i_failures or self.part_ii_failures or self.far_not_strong)

    def to_dict(self):
        return {"pairs": self.pairs, "clean": self.clean,
                "part_i_failures": [list(t) for t in self.part_i_failures],
                "part_ii_failures": [list(t) for t in self.part_ii_failures],
                "far_not_strong": [list(t) for t in self.far_not_strong]}


def hagen_check(g, cg=None):
    """Geodesics of the contact graph stay near the separators and vice versa.

    (i) every interior vertex of a contact geodesic from J to H is within one
    of some hyperplane separating J and H; (ii) every such separator W is
    within one of some vertex of every contact geodesic.  (ii) is checked for
    all geodesics at once: it fails iff J and H stay at the same distance
    after deleting the closed 1-ball around W.
    """
    st = structure(g)
    cg = cg or contact_graph(g)
    D = cg.dist
    A = np.zeros((st.h, st.h), dtype=bool)
    for a, b in cg.edges:
        A[a, b] = A[b, a] = True
    fi, fii, far = [], [], []
    pairs = 0
    for J, H in itertools.combinations(range(st.h), 2):
        pairs += 1
        d = D[J, H]
        if d >= 3 and not st.strongly_separated[J, H]:
            far.append((J, H))
        seps = separators_of_pair(st, J, H)
        on_geod = np.nonzero((D[J] + D[H] == d) & (D[J] > 0) & (D[H] > 0))[0]
        for S in on_geod:
            if not np.any(D[S, seps] <= 1):
                fi.append((J, H, int(S)))
        for W in seps:
            ball = D[W] <= 1
            if ball[J] or ball[H]:
                continue
            keep = ~ball
            sub = A[np.ix_(keep, keep)]
            idx = np.cumsum(keep) - 1
            dsub = shortest_path(csr_matrix(sub.astype(np.int8)), unweighted=True,
                                 directed=False, indices=[idx[J]])[0]
            if dsub[idx[H]] == d:
                fii.append((J, H, int(W)))
    return HagenReport(pairs, tuple(fi), tuple(fii), tuple(far))
