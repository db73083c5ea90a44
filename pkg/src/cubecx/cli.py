"""Command line entry point: ``cubecx <command> [options]``.

Exit status is 0 on success, 1 when the input fails validation or a checked
property fails (a JSON witness is still written), and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import corpus as K
from . import generators as gen
from .actions import (MAX_GROUP, ActionSpec, acyl_profile, check_relations, displacement_scan,
                      essentiality_report, skewer_detect, wpd_certificate)
from .contact import MAX_CONTACT_NODES, contact_graph, delta_matrix, four_point_delta, hagen_check, qi_check
from .convexity import as_convex, project_set
from .dot import export_dot
from .duality import Wallspace, dual_complex, irreducible_decompose, restriction_quotient
from .errors import CubeComplexError, NotConvexError
from .graph import (MAX_HYPERPLANES, MAX_VERTICES, CubeGraph, dist_l1, dist_linf, hyperplanes,
                    validate_median)
from .io import canonical_json, load_json
from .separation import separation_scan


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    """A property or validation failed; ``payload`` is still emitted."""

    def __init__(self, payload):
        self.payload = payload
        super().__init__("check failed")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple
    seed: int
    cap_vertices: int
    cap_hyperplanes: int
    cap_group: int
    cap_contact: int
    format: str
    output: str | None


# ---------------------------------------------------------------------------
# helpers


def _load(path):
    try:
        return load_json(sys.stdin.fileno() if path == "-" else path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except ValueError as exc:
        raise CheckFailed({"error": "malformed JSON", "detail": str(exc)}) from None


def _complex(cfg, path):
    g = CubeGraph.from_dict(_load(path))
    rep = validate_median(g, cfg.cap_vertices, cfg.cap_hyperplanes)
    if not rep.is_median:
        raise CheckFailed({"validation": rep.to_dict()})
    return g


def _action(cfg, path):
    spec = ActionSpec.from_dict(_load(path))
    rep = validate_median(spec.graph, cfg.cap_vertices, cfg.cap_hyperplanes)
    if not rep.is_median:
        raise CheckFailed({"validation": rep.to_dict()})
    return spec


def _ints(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_validate(cfg, args):
    g = CubeGraph.from_dict(_load(args.complex))
    rep = validate_median(g, cfg.cap_vertices, cfg.cap_hyperplanes)
    if not rep.is_median:
        raise CheckFailed(rep.to_dict())
    return rep.to_dict()


def cmd_hyperplanes(cfg, args):
    g = _complex(cfg, args.complex)
    return [{"id": H.id, "edges": list(H.edges), "halfspace_a": list(H.halfspace_a),
             "halfspace_b": list(H.halfspace_b), "carrier": list(H.carrier)} for H in hyperplanes(g)]


def cmd_dist(cfg, args):
    g = _complex(cfg, args.complex)
    d, seps = dist_l1(g, args.x, args.y)
    return {"x": args.x, "y": args.y, "l1": d, "separators": sorted(seps), "linf": dist_linf(g, args.x, args.y)}


def cmd_project(cfg, args):
    g = _complex(cfg, args.complex)
    try:
        C = as_convex(g, _ints(args.target))
    except NotConvexError as exc:
        raise CheckFailed({"convex": False, "witness": list(exc.witness)}) from None
    if args.points is None:
        src = list(range(g.n))
    else:
        src = _ints(args.points)
    proj = project_set(g, src, C)
    return {"target": C.to_dict(), "gates": {str(k): v for k, v in sorted(proj.gates.items())},
            "image": list(proj.image), "diameter": proj.diameter()}


def cmd_separation(cfg, args):
    g = _complex(cfg, args.complex)
    return [r.to_dict() for r in separation_scan(g)]


def cmd_contact(cfg, args):
    g = _complex(cfg, args.complex)
    cg = contact_graph(g)
    out = cg.to_dict()
    out["strongly_separated"] = [list(p) for p in cg.strongly_separated]
    if len(cg.nodes) <= cfg.cap_contact:
        out["delta_hyperbolicity"] = four_point_delta(cg, cap=cfg.cap_contact)
    return out


def cmd_qi(cfg, args):
    g = _complex(cfg, args.complex)
    q = qi_check(g)
    h = hagen_check(g)
    out = {"qi": q.to_dict(), "geodesics": h.to_dict()}
    if not (q.clean and h.clean):
        raise CheckFailed(out)
    return out


def cmd_dual(cfg, args):
    ws = Wallspace.from_dict(_load(args.wallspace))
    dc = dual_complex(ws)
    rep = validate_median(dc.graph, cfg.cap_vertices, cfg.cap_hyperplanes)
    return {"complex": dc.graph.to_dict(), "orientations": [list(o) for o in dc.orientations],
            "wall_hyperplane": list(dc.wall_hyperplane), "validation": rep.to_dict()}


def cmd_decompose(cfg, args):
    g = _complex(cfg, args.complex)
    if args.restrict is not None:
        q = restriction_quotient(g, _ints(args.restrict))
        return {"quotient": q.graph.to_dict(), "vertex_map": list(q.vertex_map),
                "hyperplane_map": {str(k): v for k, v in sorted(q.hyperplane_map.items())}}
    dec = irreducible_decompose(g)
    return {"irreducible": dec.irreducible, "classes": [list(c) for c in dec.classes],
            "factors": [{"complex": f.graph.to_dict(), "vertex_map": list(f.vertex_map)}
                        for f in dec.factors]}


def _action_report(cfg, spec, depth):
    grp = spec.group(cap=cfg.cap_group)
    check_relations(grp)
    prof = acyl_profile(grp)
    out = {"group": grp.to_dict(), "profile": prof.to_dict(),
           "essentiality": [e.to_dict() for e in essentiality_report(grp, depth)],
           "displacement": displacement_scan(grp).to_dict()}
    if spec.partial:
        out["windows"] = []
        for p in spec.partial:
            out["windows"].append({"skewers": [s.to_dict() for s in skewer_detect(p)],
                                   "wpd": wpd_certificate(p, grp).to_dict()})
    return out


def cmd_action(cfg, args):
    spec = _action(cfg, args.action)
    out = _action_report(cfg, spec, args.depth)
    if not out["displacement"]["corrected_holds"]:
        raise CheckFailed(out)
    return out


def cmd_generate(cfg, args):
    obj = gen.generate(args.kind, args.params, seed=cfg.seed)
    if isinstance(obj, CubeGraph):
        validate_median(obj, cfg.cap_vertices, cfg.cap_hyperplanes)
    return obj.to_dict()


def cmd_dot(cfg, args):
    if args.complex is None:
        return export_dot(None)
    g = _complex(cfg, args.complex)
    return export_dot(contact_graph(g) if args.contact else g)


def cmd_suite(cfg, args):
    from .suite import run_all

    def show(r):
        print(r.line(), file=sys.stderr, flush=True)

    results = run_all(seed=args.corpus_seed, count=args.count, progress=show)
    out = {"criteria": [r.to_dict() for r in results],
           "passed": all(r.passed for r in results)}
    if not out["passed"]:
        raise CheckFailed(out)
    return out


def cmd_analyze(cfg, args):
    data = _load(args.input)
    if "complex" in data:
        spec = ActionSpec.from_dict(data)
        g = spec.graph
    else:
        spec, g = None, CubeGraph.from_dict(data)
    rep = validate_median(g, cfg.cap_vertices, cfg.cap_hyperplanes)
    if not rep.is_median:
        raise CheckFailed({"validation": rep.to_dict()})
    cg = contact_graph(g)
    deltas = delta_matrix(g)
    dec = irreducible_decompose(g)
    out = {
        "validation": rep.to_dict(),
        "hyperplanes": [{"id": H.id, "edges": list(H.edges), "carrier": list(H.carrier)}
                        for H in hyperplanes(g)],
        "separation": [r.to_dict() for r in separation_scan(g)],
        "contact": {"edges": [list(e) for e in cg.edges],
                    "strongly_separated": [list(p) for p in cg.strongly_separated]},
        "qi": qi_check(g, cg, deltas).to_dict(),
        "decomposition": {"classes": [list(c) for c in dec.classes], "irreducible": dec.irreducible},
    }
    if len(cg.nodes) <= cfg.cap_contact:
        out["contact"]["delta_hyperbolicity"] = four_point_delta(cg, cap=cfg.cap_contact)
    if spec is not None:
        out["action"] = _action_report(cfg, spec, args.depth)
    return out


# ---------------------------------------------------------------------------
# parser


def _common(suppress):
    """Shared flags; subcommand copies use SUPPRESS so they never clobber top-level values."""
    c = argparse.ArgumentParser(add_help=False)

    def d(value):
        return argparse.SUPPRESS if suppress else value

    c.add_argument("--seed", type=int, default=d(0), help="seed for random generators")
    c.add_argument("--cap-vertices", type=int, default=d(MAX_VERTICES))
    c.add_argument("--cap-hyperplanes", type=int, default=d(MAX_HYPERPLANES))
    c.add_argument("--cap-group", type=int, default=d(MAX_GROUP))
    c.add_argument("--cap-contact", type=int, default=d(MAX_CONTACT_NODES))
    c.add_argument("--format", choices=("json", "dot", "text"), default=d("json"))
    c.add_argument("--output", "-o", default=d(None), help="write here instead of stdout")
    return c


def build_parser():
    common = _common(suppress=True)
    p = argparse.ArgumentParser(prog="cubecx", description="Finite CAT(0) cube complex toolkit.",
                                parents=[_common(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "check the median property").add_argument("complex")
    add("hyperplanes", cmd_hyperplanes, "list hyperplanes").add_argument("complex")
    sp = add("dist", cmd_dist, "l1 and l-infinity distance")
    sp.add_argument("complex")
    sp.add_argument("x", type=int)
    sp.add_argument("y", type=int)
    sp = add("project", cmd_project, "gates onto a convex vertex set")
    sp.add_argument("complex")
    sp.add_argument("target", help="comma-separated vertices of the convex set")
    sp.add_argument("--points", default=None, help="comma-separated vertices to project (default all)")
    add("separation", cmd_separation, "well-separation report for all pairs").add_argument("complex")
    add("contact", cmd_contact, "contact graph and its hyperbolicity").add_argument("complex")
    add("qi", cmd_qi, "compare chain statistic with contact distance").add_argument("complex")
    add("dual", cmd_dual, "dual complex of a wallspace").add_argument("wallspace")
    sp = add("decompose", cmd_decompose, "irreducible decomposition or restriction quotient")
    sp.add_argument("complex")
    sp.add_argument("--restrict", default=None, help="comma-separated hyperplanes to keep")
    sp = add("action", cmd_action, "profiles and certificates for a group action")
    sp.add_argument("action")
    sp.add_argument("--depth", type=int, default=1, help="essentiality depth")
    sp = add("generate", cmd_generate, "generate a complex or wallspace")
    sp.add_argument("kind", choices=gen.GENERATOR_KINDS)
    sp.add_argument("params", nargs="*")
    sp = add("dot", cmd_dot, "Graphviz export")
    sp.add_argument("complex", nargs="?", default=None)
    sp.add_argument("--contact", action="store_true", help="export the contact graph instead")
    sp = add("suite", cmd_suite, "run the acceptance battery")
    sp.add_argument("--corpus-seed", type=int, default=K.DEFAULT_SEED)
    sp.add_argument("--count", type=int, default=K.RANDOM_COUNT)
    sp = add("analyze", cmd_analyze, "full pipeline on a complex or action file")
    sp.add_argument("input")
    sp.add_argument("--depth", type=int, default=1)
    return p


def _render(cfg, payload):
    if isinstance(payload, str):
        return payload
    if cfg.format == "text":
        return _text(payload)
    return canonical_json(payload)


def _text(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, str)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}{k}: {canonical_json(v).strip()}")
        return "\n".join(lines) + "\n"
    if isinstance(obj, list):
        return "".join(_text(x, indent) if isinstance(x, dict) else f"{pad}{canonical_json(x)}" for x in obj)
    return f"{pad}{canonical_json(obj)}"


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(args.command, (), args.seed, args.cap_vertices, args.cap_hyperplanes,
                    args.cap_group, args.cap_contact, args.format, args.output)
    if cfg.format == "dot" and args.command != "dot":
        print("cubecx: --format dot only applies to the dot command", file=sys.stderr)
        return 2
    try:
        payload = args.fn(cfg, args)
    except UsageError as exc:
        print(f"cubecx: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        _emit(cfg, canonical_json(exc.payload))
        return 1
    except (CubeComplexError, KeyError, ValueError) as exc:
        _emit(cfg, canonical_json({"error": type(exc).__name__, "detail": str(exc)}))
        return 1
    _emit(cfg, _render(cfg, payload))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
