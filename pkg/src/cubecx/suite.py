"""The acceptance battery: one function per criterion, each returning a Result."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import corpus as K
from .actions import (Automorphism, displacement_check, displacement_scan, ramsey_linkage,
                      ramsey_number_bruteforce, wpd_certificate)
from .contact import contact_graph, delta_chain, hagen_check, qi_check
from .convexity import carrier, convex_hull, gate, gate_vector, halfspace, project_set
from .duality import dual_complex, irreducible_decompose, round_trip_map, walls_of
from .errors import LawViolation
from .generators import path
from .graph import structure
from .io import canonical_json
from .separation import separation_scan


@dataclass
class Result:
    number: str
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    data: dict = field(default_factory=dict)

    def line(self):
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number}: {self.title} ({self.seconds:.1f}s) {self.detail}"

    def to_dict(self):
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(fn):
    def run(*args, **kwargs):
        t = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- 1 ------------------------------------------------------------------


@_timed
def metric_laws(entries):
    """l1 = #separators and l_inf = cube-diagonal BFS = longest disjoint chain, every pair."""
    pairs = bad = 0
    for e in entries:
        st = structure(e.graph)
        D = st.D
        ham = (st.S[:, None, :] != st.S[None, :, :]).sum(axis=2)
        linf_chain = st.linf
        linf_bfs = st.linf_cube_bfs
        pairs += D.size
        bad += int(np.count_nonzero(ham != D)) + int(np.count_nonzero(linf_chain != linf_bfs))
    ok = bad == 0
    return Result("1", "metric laws", ok, f"{len(entries)} complexes, {pairs} ordered pairs, {bad} mismatches")


# -- 2 ------------------------------------------------------------------


def _convex_targets(g):
    st = structure(g)
    out = []
    for J in range(st.h):
        out.append(halfspace(g, J, 0))
        out.append(halfspace(g, J, 1))
        out.append(carrier(g, J))
    return out


@_timed
def gate_laws(entries):
    """Unique nearest vertex and the geodesic-through property, every vertex and target.

    Three routes must agree: the median walk, the halfspace formula and a
    brute-force nearest-vertex scan.
    """
    checks = bad = 0
    for e in entries:
        g = e.graph
        D = structure(g).D
        for C in _convex_targets(g):
            verts = np.asarray(C.vertices)
            sub = D[:, verts]
            nearest = sub.min(axis=1)
            unique = (sub == nearest[:, None]).sum(axis=1) == 1
            brute = verts[sub.argmin(axis=1)]
            vec = gate_vector(g, C)
            through = (D[np.arange(g.n)[:, None], verts[None, :]]
                       == D[np.arange(g.n), vec][:, None] + D[vec][:, verts])
            walk = np.array([gate(g, x, C) for x in range(g.n)])
            checks += g.n
            bad += int(np.count_nonzero(~unique | (brute != vec) | (walk != vec) | ~through.all(axis=1)))
    return Result("2", "gate laws", bad == 0, f"{checks} (vertex, convex set) checks, {bad} failures")


# -- 3 ------------------------------------------------------------------


@_timed
def projection_law(entries, samples=10_000, seed=K.DEFAULT_SEED):
    """separators(gate x, gate y) == separators(x, y) ∩ crossing(C) on sampled triples."""
    rng = np.random.default_rng(seed)
    usable = [e for e in entries if structure(e.graph).h > 0]
    bad = 0
    for _ in range(samples):
        g = usable[int(rng.integers(len(usable)))].graph
        st = structure(g)
        kind = int(rng.integers(3))
        if kind == 0:
            C = halfspace(g, int(rng.integers(st.h)), int(rng.integers(2)))
        elif kind == 1:
            C = carrier(g, int(rng.integers(st.h)))
        else:
            k = int(rng.integers(1, min(4, g.n) + 1))
            C = convex_hull(g, rng.choice(g.n, size=k, replace=False).tolist())
        x, y = (int(v) for v in rng.integers(g.n, size=2))
        proj = project_set(g, [x, y], C)
        try:
            proj.separators(x, y)
        except LawViolation:
            bad += 1
    return Result("3", "projection separation law", bad == 0, f"{samples} sampled triples, {bad} failures")


# -- 4 ------------------------------------------------------------------


@_timed
def well_separation(entries):
    """Facing-triple-free family search == projected carrier diameter, every disjoint pair."""
    pairs = bad = inexact = 0
    for e in entries:
        try:
            reps = separation_scan(e.graph)
        except LawViolation:
            bad += 1
            continue
        for r in reps:
            if r.applicable:
                pairs += 1
                inexact += not r.direct_exact
                bad += r.degree_direct != r.degree_projection
    detail = f"{pairs} disjoint pairs, {bad} mismatches"
    if inexact:
        detail += f", {inexact} searches hit the node budget"
    return Result("4", "well-separation equivalence", bad == 0 and inexact == 0, detail)


# -- 5 ------------------------------------------------------------------


@_timed
def contact_sandwich(entries, max_path=64):
    """delta <= d and delta >= floor(d/5) on every pair; closed form on paths."""
    pairs = bad = literal = 0
    for e in entries:
        rep = qi_check(e.graph)
        pairs += rep.pairs
        bad += len(rep.violations)
        literal += rep.literal_upper_failures
    path_bad = []
    for k in range(3, max_path + 1):
        g = path(k)
        cg = contact_graph(g)
        last = k - 2
        dl = delta_chain(g, 0, last).length
        if dl != k - 3 or cg.dist[0, last] != k - 2:
            path_bad.append(k)
        rep = qi_check(g, cg)
        bad += len(rep.violations)
    ok = bad == 0 and not path_bad
    return Result("5", "contact-graph sandwich", ok,
                  f"{pairs} pairs, {bad} violations, path family bad at {path_bad}; "
                  f"literal d <= 5*delta fails on {literal} pairs (reported only)",
                  data={"literal_upper_failures": literal})


# -- 6 ------------------------------------------------------------------


@_timed
def hagen(entries, max_hyperplanes=40):
    """Contact geodesics vs separators, parts (i) and (ii), on complexes with <= 40 hyperplanes."""
    used = bad = 0
    for e in entries:
        if structure(e.graph).h > max_hyperplanes:
            continue
        used += 1
        rep = hagen_check(e.graph)
        bad += len(rep.part_i_failures) + len(rep.part_ii_failures)
    return Result("6", "contact geodesics near separators", bad == 0, f"{used} complexes, {bad} failures")


# -- 7 ------------------------------------------------------------------


@_timed
def duality(entries):
    """Round trip through the wallspace dual, and the product law of the decomposition."""
    bad = []
    for e in entries:
        g = e.graph
        try:
            st = structure(g)
            if st.h:
                round_trip_map(g, dual_complex(walls_of(g), max_walls=None))
            irreducible_decompose(g)
        except LawViolation as exc:
            bad.append((e.name, str(exc)))
    return Result("7", "duality round trip and product law", not bad,
                  f"{len(entries)} complexes, {len(bad)} failures" + (f": {bad[:3]}" if bad else ""))


# -- 8 ------------------------------------------------------------------


@_timed
def displacement(actions):
    """2C + 6d on every pair, interval vertex and element; the Q3 literal witness."""
    checks = bad = literal = inter = 0
    for a in actions:
        rep = displacement_scan(a.group())
        checks += rep.checks
        bad += len(rep.corrected_failures)
        literal += rep.literal_failures
        inter += len(rep.intermediate_failures)
    q3 = K.named_complexes()[3].graph
    cyc = Automorphism(q3, K.cube_coordinate_map(3, [2, 0, 1]))
    w = displacement_check(cyc, 0, 7, [0, 4, 6, 7])
    disp = dict(w.displacements)
    witness = (w.C == 1 and w.d == 0 and disp[4] == 2 and w.corrected_holds and not w.literal_holds)
    ok = bad == 0 and inter == 0 and witness
    return Result("8", "displacement bound", ok,
                  f"{checks} checks, {bad} corrected-bound failures, {inter} intermediate failures, "
                  f"literal C+6d fails {literal} times; Q3 3-cycle: displacement {disp[4]} vs literal "
                  f"bound {w.C + 6 * w.d}, corrected {2 * w.C + 6 * w.d}")


# -- 9 ------------------------------------------------------------------


@_timed
def ramsey_exact():
    """Ram(3) = 6 by brute force over 2-colourings of K5 and K6."""
    n, witness = ramsey_number_bruteforce(3, limit=6)
    return Result("9a", "Ram(3) = 6 by brute force", n == 6 and witness is not None,
                  f"smallest forcing n = {n}")


@_timed
def linkage(actions, Rs=(1, 2, 3), literal=False):
    """Stabiliser linkage at L = ramsey_bound(R, dim).

    Subgroup form: the subgroup fixing every separator of (x, y) fixes two
    hyperplanes at separation >= R, and pigeonhole l_inf >= ceil(l1 / dim)
    holds everywhere.  Literal form: every element of stab(x) ∩ stab(y) does.
    """
    failures = []
    for a in actions:
        grp = a.group()
        for R in Rs:
            rep = ramsey_linkage(grp, R)
            if literal:
                failures += [(a.name, R) + t for t in rep.literal_failures]
            elif not rep.subgroup_form_holds:
                failures.append((a.name, R))
    if literal:
        return Result("9c", "linkage, literal (every element of stab(x) ∩ stab(y))", not failures,
                      f"{len(failures)} elements fix no far-apart hyperplane pair"
                      + (f", e.g. {failures[0]} (name, R, x, y, element)" if failures else ""))
    return Result("9b", "linkage, separator-fixing subgroup and pigeonhole", not failures,
                  f"{len(actions)} actions x R in {list(Rs)}, {len(failures)} failures")


# -- 10 -----------------------------------------------------------------


def wpd_documents():
    wins = K.window_actions()
    return {"path-window-shift": canonical_json(wpd_certificate(wins["path-window-shift"])),
            "grid-window-diagonal": canonical_json(wpd_certificate(wins["grid-window-diagonal"]))}


def golden_text(name):
    return resources.files("cubecx").joinpath("golden", f"wpd-{name}.json").read_text(encoding="ascii")


@_timed
def wpd_pipeline():
    docs = wpd_documents()
    wins = K.window_actions()
    cert = wpd_certificate(wins["path-window-shift"])
    ref = wpd_certificate(wins["grid-window-diagonal"])
    semantic = (getattr(cert, "degree", None) == 0 and getattr(cert, "stabilizer_order", None) == 1
                and getattr(ref, "reason", None) == "no well-separated pair")
    golden = all(docs[k] == golden_text(k) for k in docs)
    return Result("10", "WPD certificate pipeline", semantic and golden,
                  f"certificate L={getattr(cert, 'degree', None)}, "
                  f"refusal: {getattr(ref, 'reason', None)!r}, golden match {golden}")


def run_all(seed=K.DEFAULT_SEED, count=K.RANDOM_COUNT, progress=None):
    entries = K.full_corpus(seed, count)
    actions = K.action_corpus()
    steps = [
        lambda: metric_laws(entries),
        lambda: gate_laws(entries),
        lambda: projection_law(entries, seed=seed),
        lambda: well_separation(entries),
        lambda: contact_sandwich(entries),
        lambda: hagen(entries),
        lambda: duality(entries),
        lambda: displacement(actions),
        ramsey_exact,
        lambda: linkage(actions),
        lambda: linkage(actions, literal=True),
        wpd_pipeline,
    ]
    out = []
    for step in steps:
        res = step()
        if progress:
            progress(res)
        out.append(res)
    return out
