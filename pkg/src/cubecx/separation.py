"""Relations between pairs and triples of hyperplanes.

Transversality, nesting, facing triples, the well-separation degree of a
disjoint pair (computed twice: by searching facing-triple-free families and
as the diameter of a projected carrier), thin joins along a geodesic, and
l-infinity layers of a hyperplane family around a base vertex.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from .convexity import carrier, project_set
from .errors import LawViolation, StructuralError
from .graph import structure

log = logging.getLogger(__name__)

EQUAL, TRANSVERSE, NESTED = "equal", "transverse", "nested"

SEARCH_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class HyperplaneRelation:
    kind: str
    # for nested pairs: side of J containing H, side of H containing J
    j_side_containing_h: int | None = None
    h_side_containing_j: int | None = None


def _check_ids(st, *ids):
    for J in ids:
        if not (isinstance(J, (int, np.integer)) and 0 <= J < st.h):
            raise KeyError(f"unknown hyperplane {J!r}")


def relation(g, J, H):
    st = structure(g)
    _check_ids(st, J, H)
    if J == H:
        return HyperplaneRelation(EQUAL)
    if st.transverse[J, H]:
        return HyperplaneRelation(TRANSVERSE)
    return HyperplaneRelation(NESTED, int(st.hside[J, H]), int(st.hside[H, J]))


def transverse(g, J, H):
    st = structure(g)
    _check_ids(st, J, H)
    return bool(st.transverse[J, H])


def separates(g, V, J, H):
    """True iff J and H lie in different halfspaces of V."""
    st = structure(g)
    _check_ids(st, V, J, H)
    if len({V, J, H}) < 3:
        raise ValueError("separates() needs three distinct hyperplanes")
    a, b = st.hside[V, J], st.hside[V, H]
    return bool(a >= 0 and b >= 0 and a != b)


def facing_triple(g, A, B, C):
    st = structure(g)
    _check_ids(st, A, B, C)
    if len({A, B, C}) < 3:
        return False
    T = st.transverse
    if T[A, B] or T[A, C] or T[B, C]:
        return False
    return not (separates(g, A, B, C) or separates(g, B, A, C) or separates(g, C, A, B))


def strongly_separated(g, J, H):
    st = structure(g)
    _check_ids(st, J, H)
    return bool(st.strongly_separated[J, H])


def crossing_set(g, J, H):
    st = structure(g)
    _check_ids(st, J, H)
    return tuple(int(K) for K in np.nonzero(st.transverse[J] & st.transverse[H])[0])


def _facing_triples(st, fam):
    hs, T = st.hside, st.transverse
    out = []
    for a, b, c in itertools.combinations(fam, 3):
        if T[a, b] or T[a, c] or T[b, c]:
            continue
        # x separates y, z when they sit on different sides of x
        if hs[a, b] != hs[a, c] or hs[b, a] != hs[b, c] or hs[c, a] != hs[c, b]:
            continue
        out.append((a, b, c))
    return out


def max_facing_free_family(g, fam, budget=SEARCH_NODE_BUDGET):
    """Largest subfamily of ``fam`` with no facing triple.

    Branch and bound over include/exclude decisions.  Returns
    ``(family, exact)``; ``exact`` is False when the node budget ran out, in
    which case ``family`` is the best one found.
    """
    st = structure(g)
    fam = sorted(int(J) for J in fam)
    triples = _facing_triples(st, fam)
    if not triples:
        return tuple(fam), True
    pos = {J: i for i, J in enumerate(fam)}
    # conflicts[i] = list of (j, k) with {i, j, k} facing and j, k < i
    conflicts = [[] for _ in fam]
    for t in triples:
        i, j, k = sorted(pos[x] for x in t)
        conflicts[k].append((i, j))
    best = []
    nodes = 0

    def search(i, chosen, chosen_set):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            return
        if len(chosen) + (len(fam) - i) <= len(best):
            return
        if i == len(fam):
            best = list(chosen)
            return
        if not any(a in chosen_set and b in chosen_set for a, b in conflicts[i]):
            chosen.append(i)
            chosen_set.add(i)
            search(i + 1, chosen, chosen_set)
            chosen.pop()
            chosen_set.discard(i)
        search(i + 1, chosen, chosen_set)

    search(0, [], set())
    return tuple(fam[i] for i in best), nodes <= budget


@dataclass(frozen=True)
class SeparationReport:
    pair: tuple
    applicable: bool
    crossing_set: tuple = ()
    degree_direct: int | None = None
    degree_projection: int | None = None
    strongly_separated: bool | None = None
    direct_exact: bool = True
    witness_family: tuple = field(default=(), repr=False)

    @property
    def degree(self):
        return self.degree_projection

    def to_dict(self):
        return {
            "pair": list(self.pair),
            "applicable": self.applicable,
            "crossing_set": list(self.crossing_set),
            "degree_direct": self.degree_direct,
            "degree_projection": self.degree_projection,
            "strongly_separated": self.strongly_separated,
            "direct_exact": self.direct_exact,
        }


def projected_carrier_diameter(g, J, H):
    """Diameter of the gate image of N(H) inside N(J)."""
    st = structure(g)
    proj = project_set(g, st.carriers[H], carrier(g, J))
    return proj.diameter()


def well_separation_degree(g, J, H):
    """Smallest L making the disjoint pair (J, H) L-well-separated.

    Crossing or equal pairs get ``applicable=False``.  The direct value
    (largest facing-triple-free family crossing both) must agree with the
    diameter of the projection of N(H) onto N(J).
    """
    st = structure(g)
    _check_ids(st, J, H)
    pair = (int(J), int(H))
    if J == H or st.transverse[J, H]:
        return SeparationReport(pair, False)
    cross = crossing_set(g, J, H)
    proj = projected_carrier_diameter(g, J, H)
    family, exact = max_facing_free_family(g, cross)
    direct = len(family)
    if not exact:
        log.warning("facing-triple search for %s hit its node budget; "
                    "reporting the projection value %d", pair, proj)
        direct = max(direct, proj)
    elif direct != proj:
        raise LawViolation(f"well-separation degree of {pair}: family search gives {direct}, "
                           f"projected carrier diameter gives {proj}")
    return SeparationReport(pair, True, cross, direct, proj, proj == 0, exact, family)


def separation_scan(g):
    """Reports for every pair J < H, in order."""
    st = structure(g)
    return [well_separation_degree(g, J, H) for J in range(st.h) for H in range(J + 1, st.h)]


# ---------------------------------------------------------------------------
# thin joins


def _check_geodesic(g, gamma):
    st = structure(g)
    gamma = [g.check_vertex(v) for v in gamma]
    if not gamma:
        raise StructuralError("empty path")
    for a, b in zip(gamma, gamma[1:]):
        if not g.has_edge(a, b):
            raise StructuralError(f"({a}, {b}) is not an edge")
    if st.D[gamma[0], gamma[-1]] != len(gamma) - 1:
        raise StructuralError("path is not a geodesic")
    return gamma


def max_join(g, fam):
    """Largest min(|A|, |B|) over joins (A, B) drawn from ``fam``.

    Assumes ``fam`` has no facing triple, which holds for the hyperplanes
    crossed by a geodesic.  Enumerates Galois-closed sides A = N(N(A)),
    where N is the common transverse neighbourhood inside ``fam``.
    Returns ``(C, (A, B))``.
    """
    st = structure(g)
    fam = sorted(int(J) for J in fam)
    k = len(fam)
    nbr = [0] * k
    for i in range(k):
        for j in range(k):
            if st.transverse[fam[i], fam[j]]:
                nbr[i] |= 1 << j
    everyone = (1 << k) - 1

    def common(mask):
        out = everyone
        m = mask
        while m:
            low = m & -m
            out &= nbr[low.bit_length() - 1]
            m ^= low
        return out

    best = (0, 0, 0)
    seen = set()
    stack = [0]
    while stack:
        A = stack.pop()
        B = common(A)
        A = common(B) if A else 0
        if A in seen:
            continue
        seen.add(A)
        a, b = bin(A).count("1"), bin(B).count("1")
        if min(a, b) > best[0]:
            best = (min(a, b), A, B)
        if b <= best[0]:
            continue
        # grow A by one member while the common neighbourhood can still win
        m = everyone & ~A
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            if bin(B & nbr[i]).count("1") > best[0]:
                stack.append(A | low)
    C, A, B = best

    def unpack(mask):
        return tuple(fam[i] for i in range(k) if mask >> i & 1)

    return C, (unpack(A), unpack(B))


def thinness_constant(g, gamma):
    """Smallest C such that every join of hyperplanes crossed by ``gamma`` is C-thin."""
    st = structure(g)
    gamma = _check_geodesic(g, gamma)
    crossed = np.nonzero(st.S[gamma[0]] != st.S[gamma[-1]])[0]
    return max_join(g, crossed)[0]


# ---------------------------------------------------------------------------
# l-infinity layers


def linf_to_carrier(g, x, J):
    """l-infinity distance from x to N(J), attained at the gate of x in N(J)."""
    from .convexity import gate
    st = structure(g)
    p = gate(g, x, carrier(g, J))
    return int(st.linf[x, p])


def _consistently_oriented(st, x, U):
    """Disjoint members' far halfspaces (away from x) are pairwise nested."""
    far = 1 - st.S[x].astype(np.int8)
    for J, K in itertools.combinations(U, 2):
        if st.transverse[J, K]:
            continue
        # nested away from x: one lies on the far side of the other
        if not (st.hside[J, K] == far[J] or st.hside[K, J] == far[K]):
            return False
    return True


def hyperplane_layers(g, x, U):
    """Partition U by l-infinity distance from x to each carrier.

    When U is oriented consistently away from x (for instance the
    separators of x from another vertex), each layer is pairwise transverse
    and has at most dimension-many members; this is checked.
    """
    st = structure(g)
    x = g.check_vertex(x)
    U = sorted({int(J) for J in U})
    _check_ids(st, *U)
    layers = {}
    for J in U:
        layers.setdefault(linf_to_carrier(g, x, J), []).append(J)
    out = [tuple(layers.get(i, ())) for i in range(max(layers) + 1)] if layers else []
    if _consistently_oriented(st, x, U):
        for layer in out:
            if len(layer) > st.dimension:
                raise LawViolation(f"layer {layer} larger than the dimension {st.dimension}")
            for J, K in itertools.combinations(layer, 2):
                if not st.transverse[J, K]:
                    raise LawViolation(f"layer members {J}, {K} are not transverse")
    return out
