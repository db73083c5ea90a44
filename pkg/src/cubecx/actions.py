"""Automorphisms of finite complexes and what they say about acylindricity.

Finite complexes only admit elliptic isometries, so translation-like
behaviour is modelled by a :class:`PartialAutomorphism` defined on a window
of a periodic complex.  Skewering and WPD outputs are therefore relative to
that window, and stabilisers are always taken inside an explicitly supplied
finite group.
"""

from __future__ import annotations

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import CapExceeded, LawViolation, NotAnAutomorphism, StructuralError
from .graph import CubeGraph, interval, structure
from .separation import crossing_set, max_join, well_separation_degree

log = logging.getLogger(__name__)

MAX_GROUP = 10**6


# ---------------------------------------------------------------------------
# maps


def _edge_lookup(g):
    E = np.asarray(g.edges, dtype=np.int64).reshape(-1, 2)
    return E[:, 0] * g.n + E[:, 1]


def _edge_ids(g, keys, u, v):
    """Edge ids of the pairs (u[i], v[i]); -1 where there is no edge."""
    a, b = np.minimum(u, v), np.maximum(u, v)
    q = a * g.n + b
    if len(keys) == 0:
        return np.full(len(q), -1, dtype=np.int64)
    pos = np.minimum(np.searchsorted(keys, q), len(keys) - 1)
    return np.where(keys[pos] == q, pos, -1)


def _hyperplane_images(g, maps):
    """Induced hyperplane permutation of each row of ``maps`` (shape m x n)."""
    st = structure(g)
    maps = np.atleast_2d(maps)
    if st.h == 0:
        return np.zeros((maps.shape[0], 0), dtype=np.int64)
    keys = _edge_lookup(g)
    E = st.edge_array
    ids = _edge_ids(g, keys, maps[:, E[:, 0]].ravel(), maps[:, E[:, 1]].ravel()).reshape(maps.shape[0], -1)
    if np.any(ids < 0):
        raise NotAnAutomorphism("map does not send edges to edges")
    cls = st.edge_class[ids]                            # m x edges
    reps = np.array([c[0] for c in st.class_edges])
    out = cls[:, reps]
    # every edge of a class must land in the same class
    if np.any(cls != out[:, st.edge_class]):
        raise LawViolation("map splits a hyperplane")
    return out


@dataclass(frozen=True)
class Automorphism:
    """A vertex bijection preserving adjacency both ways."""

    graph: CubeGraph = field(repr=False)
    map: tuple
    hyperplane_map: tuple = field(default=(), compare=False)

    def __post_init__(self):
        g, m = self.graph, [int(v) for v in self.map]
        if sorted(m) != list(range(g.n)):
            raise NotAnAutomorphism("map is not a permutation of the vertices")
        for u, v in g.edges:
            if not g.has_edge(m[u], m[v]):
                raise NotAnAutomorphism("adjacency not preserved", (u, v))
        object.__setattr__(self, "map", tuple(m))
        hp = _hyperplane_images(g, np.asarray(m)[None, :])[0]
        object.__setattr__(self, "hyperplane_map", tuple(int(x) for x in hp))

    @classmethod
    def identity(cls, g):
        return cls(g, tuple(range(g.n)))

    @classmethod
    def from_dict(cls, g, data):
        try:
            return cls(g, tuple(data["map"]))
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed automorphism: {exc}") from None

    def to_dict(self):
        return {"map": list(self.map)}

    def __call__(self, v):
        return self.map[v]

    def compose(self, other):
        """self after other."""
        return Automorphism(self.graph, tuple(self.map[other.map[v]] for v in range(self.graph.n)))

    def inverse(self):
        inv = [0] * self.graph.n
        for v, w in enumerate(self.map):
            inv[w] = v
        return Automorphism(self.graph, tuple(inv))


@dataclass(frozen=True)
class PartialAutomorphism:
    """An isometric injection defined on part of a window.

    ``window`` is free-form metadata describing the periodic complex the
    window is cut from and the translation intended.
    """

    graph: CubeGraph = field(repr=False)
    domain: tuple
    image: tuple
    window: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = self.graph
        dom = [g.check_vertex(v) for v in self.domain]
        img = [g.check_vertex(v) for v in self.image]
        if len(dom) != len(img):
            raise NotAnAutomorphism("domain and image differ in length")
        if len(set(dom)) != len(dom) or len(set(img)) != len(img):
            raise NotAnAutomorphism("map is not injective")
        order = np.argsort(dom)
        dom = [dom[i] for i in order]
        img = [img[i] for i in order]
        for (u, a), (v, b) in itertools.combinations(zip(dom, img), 2):
            if g.has_edge(u, v) != g.has_edge(a, b):
                raise NotAnAutomorphism("adjacency not preserved", (u, v))
        object.__setattr__(self, "domain", tuple(dom))
        object.__setattr__(self, "image", tuple(img))

    @classmethod
    def from_automorphism(cls, a, window=None):
        return cls(a.graph, tuple(range(a.graph.n)), a.map, dict(window or {"total": True}))

    @classmethod
    def from_dict(cls, g, data):
        try:
            dom = data.get("domain", list(range(g.n)))
            m = data["map"]
            if len(m) == len(dom):
                img = m
            else:
                img = [m[v] for v in dom]
            return cls(g, tuple(dom), tuple(img), dict(data.get("window", {})))
        except (KeyError, TypeError, IndexError) as exc:
            raise StructuralError(f"malformed partial automorphism: {exc}") from None

    def to_dict(self):
        return {"domain": list(self.domain), "map": list(self.image), "window": self.window}

    def as_array(self):
        """Vertex map with -1 outside the domain."""
        out = np.full(self.graph.n, -1, dtype=np.int64)
        out[list(self.domain)] = self.image
        return out

    def power(self, k):
        """Array of g^k (-1 where undefined), k >= 0."""
        m = self.as_array()
        out = np.arange(self.graph.n)
        for _ in range(k):
            out = np.where(out >= 0, m[np.maximum(out, 0)], -1)
        return out

    def hyperplane_image(self, J, k=1):
        """Image of hyperplane J under g^k, or None when no edge of J is mapped.

        Raises LawViolation if mapped edges of J land in different classes.
        """
        st = structure(self.graph)
        m = self.power(k)
        E = st.edge_array[st.class_edges[J]]
        a, b = m[E[:, 0]], m[E[:, 1]]
        ok = (a >= 0) & (b >= 0)
        if not ok.any():
            return None
        ids = _edge_ids(self.graph, _edge_lookup(self.graph), a[ok], b[ok])
        cls = set(st.edge_class[ids].tolist())
        if len(cls) != 1:
            raise LawViolation(f"g^{k} sends edges of hyperplane {J} to several hyperplanes")
        return cls.pop()


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class Group:
    graph: CubeGraph = field(repr=False)
    elements: np.ndarray = field(repr=False)        # order x n vertex maps, identity first
    hyperplane_maps: np.ndarray = field(repr=False)  # order x h
    truncated: bool = False

    @property
    def order(self):
        return int(self.elements.shape[0])

    def element(self, i):
        return Automorphism(self.graph, tuple(int(v) for v in self.elements[i]))

    def fixed_vertices(self):
        return self.elements == np.arange(self.graph.n)[None, :]

    def fixed_hyperplanes(self):
        return self.hyperplane_maps == np.arange(self.hyperplane_maps.shape[1])[None, :]

    def to_dict(self):
        return {"order": self.order, "truncated": self.truncated}


def _as_maps(g, gens):
    rows = []
    for a in gens:
        if isinstance(a, Automorphism):
            rows.append(a.map)
        else:
            rows.append(Automorphism(g, tuple(a)).map)
    return rows


def generate_group(g, gens, cap=MAX_GROUP):
    """Closure of ``gens`` under composition, breadth first from the identity.

    Stops after ``cap`` elements and marks the group truncated.
    """
    ident = tuple(range(g.n))
    maps = [np.asarray(m, dtype=np.int64) for m in _as_maps(g, gens)]
    seen = {np.asarray(ident, dtype=np.int64).tobytes()}
    elems = [np.asarray(ident, dtype=np.int64)]
    truncated = False
    i = 0
    while i < len(elems) and not truncated:
        e = elems[i]
        i += 1
        for s in maps:
            new = s[e]
            key = new.tobytes()
            if key in seen:
                continue
            if len(elems) >= cap:
                truncated = True
                break
            seen.add(key)
            elems.append(new)
    E = np.vstack(elems)
    return Group(g, E, _hyperplane_images(g, E), truncated)


def automorphism_group(g, cap=MAX_GROUP):
    """All automorphisms of g, by exhaustive graph matching (small graphs)."""
    G = g.to_networkx()
    rows = []
    truncated = False
    for iso in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter():
        if len(rows) >= cap:
            warnings.warn(f"automorphism enumeration stopped at {cap}", stacklevel=2)
            truncated = True
            break
        rows.append([iso[v] for v in range(g.n)])
    ident = list(range(g.n))
    rows.sort(key=lambda r: (r != ident, r))
    E = np.asarray(rows, dtype=np.int64).reshape(-1, g.n)
    return Group(g, E, _hyperplane_images(g, E), truncated)


def hyperplane_stabilizer(group, J):
    """Indices of elements fixing hyperplane J."""
    return np.nonzero(group.hyperplane_maps[:, J] == J)[0]


def pair_stabilizer(group, J1, J2):
    hm = group.hyperplane_maps
    return np.nonzero((hm[:, J1] == J1) & (hm[:, J2] == J2))[0]


def vertex_pair_stabilizer(group, x, y):
    E = group.elements
    return np.nonzero((E[:, x] == x) & (E[:, y] == y))[0]


def coarse_stabilizer(group, x, y, d):
    """Indices of elements moving both x and y by at most d."""
    D = structure(group.graph).D
    E = group.elements
    return np.nonzero((D[x, E[:, x]] <= d) & (D[y, E[:, y]] <= d))[0]


def check_relations(group):
    """Every element preserves transversality and separation counts of hyperplane pairs."""
    st = structure(group.graph)
    for i, hp in enumerate(group.hyperplane_maps):
        if not np.array_equal(st.transverse[np.ix_(hp, hp)], st.transverse):
            raise LawViolation(f"element {i} does not preserve transversality")
        if not np.array_equal(st.separation_count[np.ix_(hp, hp)], st.separation_count):
            raise LawViolation(f"element {i} does not preserve separation")
    return True


# ---------------------------------------------------------------------------
# acylindricity profile


@dataclass(frozen=True)
class AcylProfile:
    group_order: int
    n_hyp: tuple          # n_hyp[R] for R = 0..max separation
    n_weak: tuple         # n_weak[R] for R = 0..diameter
    lower_bound_only: bool
    group: Group = field(repr=False, compare=False, default=None)

    def coarse_stabilizer(self, x, y, d):
        return coarse_stabilizer(self.group, x, y, d)

    def to_dict(self):
        return {"group_order": self.group_order, "n_hyp": list(self.n_hyp),
                "n_weak": list(self.n_weak), "lower_bound_only": self.lower_bound_only}


def _suffix_max(values, keys, size):
    """out[R] = max of values whose key >= R."""
    out = np.zeros(size, dtype=np.int64)
    np.maximum.at(out, keys.ravel(), values.ravel())
    return np.maximum.accumulate(out[::-1])[::-1]


def acyl_profile(group):
    """Tables of stabiliser sizes for pairs of hyperplanes and of vertices.

    ``n_hyp[R]`` is the largest |stab(J1) ∩ stab(J2)| over hyperplane pairs
    (J1 = J2 allowed) separated by at least R others; ``n_weak[R]`` the
    largest |stab(x) ∩ stab(y)| over vertex pairs at distance at least R.
    """
    st = structure(group.graph)
    F = group.fixed_hyperplanes().astype(np.int64)
    P = group.fixed_vertices().astype(np.int64)
    if st.h:
        pair_h = F.T @ F
        sep = st.separation_count
        n_hyp = _suffix_max(pair_h, sep, int(sep.max()) + 1)
    else:
        n_hyp = np.array([group.order])
    pair_v = P.T @ P
    D = st.D
    n_weak = _suffix_max(pair_v, D, int(D.max()) + 1)
    return AcylProfile(group.order, tuple(int(v) for v in n_hyp), tuple(int(v) for v in n_weak),
                       group.truncated, group)


# ---------------------------------------------------------------------------
# Ramsey bound

_RAMSEY_EXACT = {1: 1, 2: 2, 3: 6, 4: 18}


def ramsey_bound(R, dim):
    """Upper bound L for the diagonal Ramsey number Ram(R' + 2), R' = max(R, dim).

    Raising R to the dimension loses nothing for the acylindricity argument
    and guarantees that R' + 2 pairwise transverse hyperplanes cannot exist,
    so L separators always contain R' + 2 pairwise disjoint ones.
    """
    if R < 1 or dim < 1:
        raise ValueError("ramsey_bound needs R >= 1 and dim >= 1")
    k = max(R, dim) + 2
    if k in _RAMSEY_EXACT:
        return _RAMSEY_EXACT[k]
    return math.comb(2 * k - 2, k - 1)


def _has_mono_clique(colors, pairs, k, n):
    """colors: (m, #pairs) 0/1 array of edge colourings of K_n; rows with a monochromatic K_k."""
    index = {p: i for i, p in enumerate(pairs)}
    hit = np.zeros(colors.shape[0], dtype=bool)
    for sub in itertools.combinations(range(n), k):
        cols = [index[p] for p in itertools.combinations(sub, 2)]
        block = colors[:, cols]
        hit |= block.all(axis=1) | (~block.astype(bool)).all(axis=1)
    return hit


def ramsey_number_bruteforce(k, limit=6):
    """Smallest n <= limit such that every 2-colouring of K_n has a monochromatic K_k.

    Returns ``(n, witness)`` where witness is a colouring of K_{n-1} without
    one (as a dict pair -> colour), or ``(None, None)`` above ``limit``.
    """
    prev_witness = None
    for n in range(2, limit + 1):
        pairs = list(itertools.combinations(range(n), 2))
        m = len(pairs)
        codes = np.arange(2 ** m, dtype=np.int64)
        colors = ((codes[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int8)
        hit = _has_mono_clique(colors, pairs, k, n) if n >= k else np.zeros(len(codes), dtype=bool)
        if hit.all():
            return n, prev_witness
        row = colors[np.nonzero(~hit)[0][0]]
        prev_witness = {p: int(c) for p, c in zip(pairs, row)}
    return None, None


@dataclass(frozen=True)
class LinkageReport:
    R: int
    L: int
    pairs_checked: int
    pigeonhole_failures: tuple     # (x, y) with linf < ceil(l1 / dim)
    disjoint_failures: tuple       # (x, y) with l1 >= L but linf < R' + 2
    literal_failures: tuple        # (x, y, element) stabilising no pair at separation >= R
    kernel_failures: tuple         # same, restricted to the subgroup fixing every separator
    kernel_index_failures: tuple   # (x, y, index, bound)
    weak_vs_hyp: tuple             # (N_weak(L), N_hyp(R)) or () when L exceeds the diameter

    @property
    def subgroup_form_holds(self):
        return not (self.pigeonhole_failures or self.disjoint_failures or self.kernel_failures
                    or self.kernel_index_failures)

    @property
    def literal_form_holds(self):
        return not self.literal_failures

    def to_dict(self):
        return {"R": self.R, "L": self.L, "pairs_checked": self.pairs_checked,
                "pigeonhole_failures": [list(t) for t in self.pigeonhole_failures],
                "disjoint_failures": [list(t) for t in self.disjoint_failures],
                "literal_failures": [list(t) for t in self.literal_failures],
                "kernel_failures": [list(t) for t in self.kernel_failures],
                "kernel_index_failures": [list(t) for t in self.kernel_index_failures],
                "weak_vs_hyp": list(self.weak_vs_hyp),
                "subgroup_form_holds": self.subgroup_form_holds,
                "literal_form_holds": self.literal_form_holds}


def ramsey_linkage(group, R):
    """Finite core of the stabiliser argument for one R.

    For every vertex pair with d(x, y) >= L = ramsey_bound(R, dim):

    * there are at least R' + 2 pairwise disjoint separators (l-infinity);
    * literal form: each element of stab(x) ∩ stab(y) fixes two hyperplanes
      separated by at least R others;
    * kernel form: the elements fixing every separator do so, and they have
      index at most (dim!)^{d_inf} in stab(x) ∩ stab(y).

    The pigeonhole inequality l_inf >= ceil(l1 / dim) is checked on every pair.
    """
    st = structure(group.graph)
    dim = max(st.dimension, 1)
    L = ramsey_bound(R, dim)
    Rp = max(R, dim)
    D, Linf = st.D, st.linf
    pig = np.argwhere(Linf < -(-D // dim))
    pig = tuple((int(a), int(b)) for a, b in pig)
    sep = st.separation_count
    hm = group.hyperplane_maps
    E = group.elements
    lit, dis, ker, kidx = [], [], [], []
    far_pairs = np.argwhere(np.triu(D >= L, 1))
    for x, y in far_pairs:
        x, y = int(x), int(y)
        if Linf[x, y] < Rp + 2:
            dis.append((x, y))
        stab = np.nonzero((E[:, x] == x) & (E[:, y] == y))[0]
        seps = np.nonzero(st.S[x] != st.S[y])[0]
        for i in stab:
            fixed = np.nonzero(hm[i] == np.arange(st.h))[0]
            ok = fixed.size >= 2 and sep[np.ix_(fixed, fixed)].max() >= R
            if not ok:
                lit.append((x, y, int(i)))
        kernel = [int(i) for i in stab if np.all(hm[i, seps] == seps)]
        for i in kernel:
            if sep[np.ix_(seps, seps)].max(initial=0) < R:
                ker.append((x, y, i))
        bound = math.factorial(dim) ** int(Linf[x, y])
        if len(stab) > bound * len(kernel):
            kidx.append((x, y, len(stab) // max(len(kernel), 1), bound))
    prof = acyl_profile(group)
    if L < len(prof.n_weak) and R < len(prof.n_hyp):
        wh = (prof.n_weak[L], prof.n_hyp[R])
    else:
        wh = ()
    return LinkageReport(R, L, int(np.count_nonzero(np.triu(np.ones_like(D, dtype=bool), 1))),
                         pig, tuple(dis), tuple(lit), tuple(ker), tuple(kidx), wh)


# ---------------------------------------------------------------------------
# essentiality


@dataclass(frozen=True)
class EssentialityEntry:
    hyperplane: int
    side: int
    penetration: int     # min over base vertices of the deepest orbit point
    flagged: bool

    def to_dict(self):
        return {"hyperplane": self.hyperplane, "side": self.side,
                "penetration": self.penetration, "flagged": self.flagged}


def essentiality_report(group, depth):
    """How deep orbits reach into each halfspace.

    For a base vertex v and halfspace (J, s), the penetration is the largest
    distance from an orbit point inside the halfspace to the opposite
    halfspace (0 when the orbit misses it).  The entry keeps the minimum
    over base vertices and is flagged when it does not exceed ``depth``.
    """
    st = structure(group.graph)
    D = st.D
    E = group.elements
    out = []
    for J in range(st.h):
        carrier = st.carriers[J]
        # distance to the opposite halfspace = distance to the carrier + 1
        to_carrier = D[:, carrier].min(axis=1) + 1
        for s in (0, 1):
            inside = st.S[:, J] == bool(s)
            depth_v = np.where(inside, to_carrier, 0)
            orbit_depth = depth_v[E].max(axis=0)          # per base vertex
            pen = int(orbit_depth.min())
            out.append(EssentialityEntry(J, s, pen, pen <= depth))
    return out


# ---------------------------------------------------------------------------
# skewering and WPD


@dataclass(frozen=True)
class Skewer:
    hyperplane: int
    power: int
    side: int            # side s of J with g^n(J, s) strictly inside (J, s)
    image: int           # g^n J
    image_side: int
    between: int         # hyperplanes strictly between J and g^n J

    def to_dict(self):
        return {"hyperplane": self.hyperplane, "power": self.power, "side": self.side,
                "image": self.image, "image_side": self.image_side, "between": self.between}


def skewer_detect(p, max_power=None):
    """All (J, n) with g^n J⁺ strictly inside J⁺.

    g^n has to be defined on at least one edge of J; on a window the
    carrier itself may stick out of the domain (a diagonal shift of a grid
    window maps no full carrier), so the image hyperplane is read off the
    mapped edges, which must all agree on it and on orientation.
    """
    if isinstance(p, Automorphism):
        p = PartialAutomorphism.from_automorphism(p)
    g = p.graph
    st = structure(g)
    max_power = g.n if max_power is None else max_power
    out = []
    m = np.arange(g.n)
    base = p.as_array()
    any_defined = False
    for n in range(1, max_power + 1):
        m = np.where(m >= 0, base[np.maximum(m, 0)], -1)
        if not np.any(m >= 0):
            break
        for J in range(st.h):
            E = st.edge_array[st.class_edges[J]]
            ok = (m[E[:, 0]] >= 0) & (m[E[:, 1]] >= 0)
            if not ok.any():
                continue
            any_defined = True
            K = p.hyperplane_image(J, n)
            if K == J or st.transverse[J, K]:
                continue
            ends = E[ok].ravel()
            src, dst = st.S[ends, J], st.S[m[ends], K]
            flip = bool(src[0] != dst[0])
            if np.any(src != (dst ^ flip)):
                raise LawViolation(f"g^{n} reverses part of hyperplane {J}")
            for side_j in (0, 1):
                side_k = side_j ^ int(flip)
                a = st.S[:, J] == bool(side_j)
                b = st.S[:, K] == bool(side_k)
                if np.all(a[b]) and a.sum() > b.sum():
                    out.append(Skewer(J, n, side_j, int(K), side_k, int(st.separation_count[J, K])))
    if not any_defined:
        warnings.warn("no edge lies inside the composable range of the map", stacklevel=2)
    return out


def verify_skewer(g, sk):
    """Set-theoretic re-check of the strict halfspace inclusion."""
    st = structure(g)
    a = set(np.nonzero(st.S[:, sk.hyperplane] == bool(sk.side))[0].tolist())
    b = set(np.nonzero(st.S[:, sk.image] == bool(sk.image_side))[0].tolist())
    return b < a


@dataclass(frozen=True)
class WPDCertificate:
    hyperplane: int
    power: int
    image: int
    degree: int
    stabilizer_order: int
    skewer: Skewer
    crossing_set: tuple
    window: dict

    def to_dict(self):
        return {"kind": "certificate", "hyperplane": self.hyperplane, "power": self.power,
                "image": self.image, "degree": self.degree,
                "stabilizer_order": self.stabilizer_order, "skewer": self.skewer.to_dict(),
                "crossing_set": list(self.crossing_set), "window": self.window}


@dataclass(frozen=True)
class WPDRefusal:
    reason: str
    candidates: tuple      # dicts naming the failed condition per candidate
    window: dict

    def to_dict(self):
        return {"kind": "refusal", "reason": self.reason, "candidates": list(self.candidates),
                "window": self.window}


def _translated_crossing(p, cross):
    """A crossing hyperplane W whose translate g^k W != W also crosses, if any."""
    cs = set(cross)
    for W in cross:
        for k in range(1, p.graph.n + 1):
            try:
                img = p.hyperplane_image(W, k)
            except LawViolation:
                break
            if img is None:
                break
            if img != W and img in cs:
                return W, k, img
    return None


def wpd_certificate(p, sym=None):
    """Search skewered pairs (J, g^n J) for a well-separated one.

    Within the window every degree is finite, so a pair is rejected as not
    well separated when its crossing set contains a hyperplane W together
    with a different translate g^k W: in the periodic completion those
    translates give arbitrarily large crossing families.  Among accepted
    pairs the smallest pair stabiliser in ``sym`` wins, then the smallest
    degree, power and hyperplane id.
    """
    g = p.graph
    sym = sym if sym is not None else generate_group(g, [])
    skewers = skewer_detect(p)
    if not skewers:
        return WPDRefusal("no skewered hyperplane", (), p.window)
    good, reasons = [], []
    for sk in skewers:
        J, K = sk.hyperplane, sk.image
        rep = well_separation_degree(g, J, K)
        if not rep.applicable:
            reasons.append({"hyperplane": J, "power": sk.power, "failed": "pair is transverse"})
            continue
        tr = _translated_crossing(p, rep.crossing_set)
        if tr is not None:
            W, k, img = tr
            reasons.append({"hyperplane": J, "power": sk.power, "failed": "not well separated",
                            "degree_in_window": rep.degree,
                            "translated_crossing": [W, k, img]})
            continue
        stab = len(pair_stabilizer(sym, J, K))
        good.append(((stab, rep.degree, sk.power, J), sk, rep))
    if not good:
        return WPDRefusal("no well-separated pair", tuple(reasons), p.window)
    (stab, L, _, _), sk, rep = min(good, key=lambda t: t[0])
    return WPDCertificate(sk.hyperplane, sk.power, sk.image, L, stab, sk, rep.crossing_set, p.window)


# ---------------------------------------------------------------------------
# displacement


@dataclass(frozen=True)
class DisplacementReport:
    x: int
    y: int
    C: int
    d: int
    displacements: tuple        # (z, d(z, gz)) along the checked vertices
    h_sizes: tuple              # (z, #H1, #H2, #H3)
    corrected_holds: bool       # d(z, gz) <= 2C + 6d
    literal_holds: bool         # d(z, gz) <= C + 6d
    difference_holds: bool      # |#H1 - #H2| <= 4d
    sum_holds: bool             # d(z, gz) <= #H1 + #H2 + 2d
    join_holds: bool            # H1, H2 pairwise transverse and min <= C

    def to_dict(self):
        return {"x": self.x, "y": self.y, "C": self.C, "d": self.d,
                "displacements": [list(t) for t in self.displacements],
                "h_sizes": [list(t) for t in self.h_sizes],
                "corrected_holds": self.corrected_holds, "literal_holds": self.literal_holds,
                "difference_holds": self.difference_holds, "sum_holds": self.sum_holds,
                "join_holds": self.join_holds}


def _h_sets(S, x, y, z, gx, gy, gz):
    """Boolean masks of H1, H2, H3 (rows broadcast over group elements)."""
    def sep(a, b, c, d):
        return (S[a] == S[b]) & (S[c] == S[d]) & (S[a] != S[c])
    return sep(gx, z, gz, y), sep(x, gz, z, gy), sep(x, gx, z, gz)


def displacement_check(a, x, y, gamma=None):
    """Displacements along a geodesic from x to y under automorphism ``a``.

    Without ``gamma`` every vertex of the interval [x, y] is checked, which
    covers every geodesic at once (the thinness constant depends only on the
    hyperplanes separating x and y).
    """
    g = a.graph
    st = structure(g)
    x, y = g.check_vertex(x), g.check_vertex(y)
    if gamma is None:
        zs = list(interval(g, x, y))
    else:
        from .separation import _check_geodesic
        zs = _check_geodesic(g, gamma)
        if zs[0] != x or zs[-1] != y:
            raise StructuralError("geodesic does not run from x to y")
    seps = np.nonzero(st.S[x] != st.S[y])[0]
    C = max_join(g, seps)[0]
    m = np.asarray(a.map)
    D, S, T = st.D, st.S, st.transverse
    d = int(max(D[x, m[x]], D[y, m[y]]))
    disp, sizes = [], []
    corr = lit = diff = summ = join = True
    for z in zs:
        dz = int(D[z, m[z]])
        h1, h2, h3 = _h_sets(S, x, y, z, m[x], m[y], m[z])
        n1, n2, n3 = int(h1.sum()), int(h2.sum()), int(h3.sum())
        disp.append((int(z), dz))
        sizes.append((int(z), n1, n2, n3))
        corr &= dz <= 2 * C + 6 * d
        lit &= dz <= C + 6 * d
        diff &= abs(n1 - n2) <= 4 * d
        summ &= dz <= n1 + n2 + 2 * d
        i1, i2 = np.nonzero(h1)[0], np.nonzero(h2)[0]
        join &= bool(T[np.ix_(i1, i2)].all()) and min(n1, n2) <= C
    return DisplacementReport(x, y, int(C), d, tuple(disp), tuple(sizes),
                              bool(corr), bool(lit), bool(diff), bool(summ), bool(join))


@dataclass(frozen=True)
class DisplacementScan:
    checks: int
    corrected_failures: tuple     # (x, y, z, element, displacement, bound)
    literal_failures: int
    literal_example: tuple | None
    intermediate_failures: tuple  # (x, y, z, element, which)

    @property
    def corrected_holds(self):
        return not self.corrected_failures

    def to_dict(self):
        return {"checks": self.checks, "corrected_holds": self.corrected_holds,
                "corrected_failures": [list(t) for t in self.corrected_failures],
                "literal_failures": self.literal_failures,
                "literal_example": None if self.literal_example is None else list(self.literal_example),
                "intermediate_failures": [list(t) for t in self.intermediate_failures]}


def displacement_scan(group, pairs=None, max_failures=20):
    """Displacement check over vertex pairs, interval vertices and group elements.

    For each pair the work is vectorised over (element, interval vertex).
    """
    g = group.graph
    st = structure(g)
    D, S = st.D, st.S
    NT = (~st.transverse).astype(np.int32)
    E = group.elements
    if pairs is None:
        pairs = [(x, y) for x in range(g.n) for y in range(x, g.n)]
    checks = 0
    fails, inter = [], []
    lit, lit_ex = 0, None
    join_cache = {}
    for x, y in pairs:
        seps = np.nonzero(S[x] != S[y])[0]
        key = seps.tobytes()
        if key not in join_cache:
            join_cache[key] = max_join(g, seps)[0]
        C = join_cache[key]
        gx, gy = E[:, x], E[:, y]
        d = np.maximum(D[x, gx], D[y, gy]).astype(np.int64)[:, None]     # order x 1
        Z = np.nonzero(D[x] + D[y] == D[x, y])[0]
        GZ = E[:, Z]                                                    # order x |Z|
        dz = D[Z[None, :], GZ].astype(np.int64)
        checks += dz.size
        Sx, Sy, Sz = S[x], S[y], S[Z][None, :, :]
        Sgx, Sgy, Sgz = S[gx][:, None, :], S[gy][:, None, :], S[GZ]
        h1 = (Sgx == Sz) & (Sgz == Sy) & (Sgx != Sgz)
        h2 = (Sx == Sgz) & (Sz == Sgy) & (Sx != Sz)
        n1, n2 = h1.sum(axis=2), h2.sum(axis=2)
        bound = 2 * C + 6 * d
        for i, j in np.argwhere(dz > bound)[:max(0, max_failures - len(fails))]:
            fails.append((x, y, int(Z[j]), int(i), int(dz[i, j]), int(bound[i, 0])))
        lbad = np.argwhere(dz > C + 6 * d)
        if len(lbad):
            lit += len(lbad)
            if lit_ex is None:
                i, j = lbad[0]
                lit_ex = (x, y, int(Z[j]), int(i), int(dz[i, j]), int(C + 6 * d[i, 0]))
        # pairs (a in H1, b in H2) that fail to cross
        clash = np.einsum("ijh,hk,ijk->ij", h1.astype(np.int32), NT, h2.astype(np.int32))
        for label, mask in (("difference", np.abs(n1 - n2) > 4 * d),
                            ("sum", dz > n1 + n2 + 2 * d),
                            ("thin", np.minimum(n1, n2) > C),
                            ("join", clash > 0)):
            for i, j in np.argwhere(mask)[:3]:
                inter.append((x, y, int(Z[j]), int(i), label))
    return DisplacementScan(checks, tuple(fails), lit, lit_ex, tuple(inter[:max_failures]))


# ---------------------------------------------------------------------------
# action specs


@dataclass(frozen=True)
class ActionSpec:
    graph: CubeGraph
    generators: tuple            # Automorphism or PartialAutomorphism
    name: str = ""

    @property
    def total(self):
        return tuple(a for a in self.generators if isinstance(a, Automorphism))

    @property
    def partial(self):
        return tuple(a for a in self.generators if isinstance(a, PartialAutomorphism))

    def group(self, cap=MAX_GROUP):
        grp = generate_group(self.graph, self.total, cap=cap)
        if grp.truncated:
            warnings.warn(f"group enumeration truncated at {cap} elements", stacklevel=2)
        return grp

    @classmethod
    def from_dict(cls, data):
        try:
            g = CubeGraph.from_dict(data["complex"])
            gens = []
            for a in data.get("automorphisms", []):
                if "domain" in a:
                    gens.append(PartialAutomorphism.from_dict(g, a))
                else:
                    gens.append(Automorphism.from_dict(g, a))
        except KeyError as exc:
            raise StructuralError(f"action description lacks {exc}") from None
        return cls(g, tuple(gens), str(data.get("name", "")))

    def to_dict(self):
        return {"name": self.name, "complex": self.graph.to_dict(),
                "automorphisms": [a.to_dict() for a in self.generators]}


def require_cap(group, cap):
    if group.order > cap:
        raise CapExceeded(f"group of order {group.order} exceeds cap {cap}")
