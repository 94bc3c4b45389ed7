"""Command-line front end.

Exit status: 0 on success, 1 when a requested check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import dot, graphs, homology, reps, splice
from .errors import ConditionsFail, OrbspliceError
from .report import build_report, group_json, rep_json

EXIT_OK, EXIT_CHECK, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str) -> tuple[graphs.DecoratedGraph, str]:
    if path == "-":
        return graphs.parse_graph(sys.stdin.read()), "stdin"
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return graphs.parse_graph(text), p.stem
    except graphs.ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(out, args, obj, text):
    if args.json:
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")


def _fmt_factors(group) -> str:
    return "[" + ", ".join(str(d) for d in group.invariant_factors) + "]"


def cmd_validate(args, out):
    g, _ = _load(args.file)
    r = graphs.validate(g)
    obj = {
        "checks": {
            "tree": {"pass": r.is_tree, "witnesses": []},
            "negative_definite": {"pass": r.is_negative_definite, "witnesses": []},
            "quasi_minimal": {"pass": r.is_quasi_minimal,
                              "witnesses": [v for v in r.violations if v.startswith("string")]},
        },
        "determinant": str(r.determinant),
        "violations": list(r.violations),
    }
    lines = [f"tree: {r.is_tree}", f"negative definite: {r.is_negative_definite}",
             f"quasi-minimal: {r.is_quasi_minimal}", f"determinant: {r.determinant}"]
    lines += [f"violation: {v}" for v in r.violations]
    _emit(out, args, obj, "\n".join(lines))
    return EXIT_OK if r.ok and not r.violations else EXIT_CHECK


def cmd_homology(args, out):
    g, _ = _load(args.file)
    order = g.graph.vertices
    if args.orbifold:
        group = homology.orbifold_homology(g)
        kernel = homology.kernel_type(homology.projection_hom(g))
        obj = group_json(group, order)
        obj["kernel"] = group_json(kernel)
        text = (f"orbifold homology: {group.describe()}\n"
                f"invariant factors: {_fmt_factors(group)}\n"
                f"order: {group.order}\n"
                f"kernel of projection: {kernel.describe()} {_fmt_factors(kernel)}")
    else:
        group = homology.discriminant_group(g)
        obj = group_json(group, order)
        text = (f"discriminant group: {group.describe()}\n"
                f"invariant factors: {_fmt_factors(group)}\n"
                f"order: {group.order}")
    obj["group"] = "orbifold" if args.orbifold else "discriminant"
    _emit(out, args, obj, text)
    return EXIT_OK


def cmd_linking(args, out):
    g, _ = _load(args.file)
    lk = homology.linking_matrix(g)
    order = g.graph.vertices
    obj = {"vertex_order": list(order), "linking_matrix": [[str(x) for x in row] for row in lk]}
    width = max(len(str(x)) for row in lk for x in row)
    head = " " * (max(map(len, order)) + 1)
    lines = [head + " ".join(v.rjust(width) for v in order)]
    for v, row in zip(order, lk):
        lines.append(v.ljust(len(head)) + " ".join(str(x).rjust(width) for x in row))
    _emit(out, args, obj, "\n".join(lines))
    return EXIT_OK


def cmd_rep(args, out):
    g, _ = _load(args.file)
    rep = reps.orbifold_diagonal_rep(g) if args.orbifold else reps.diagonal_rep(g)
    obj = rep_json(rep)
    obj["group"] = group_json(rep.group)
    lines = [f"group: {rep.group.describe()}", "leaf order: " + " ".join(rep.leaf_order)]
    for k, img in enumerate(rep.images):
        lines.append(f"g{k + 1} -> (" + ", ".join(str(x) for x in img) + ")   ["
                     + ", ".join(rep.display(img)) + "]")
    _emit(out, args, obj, "\n".join(lines))
    return EXIT_OK


def _describe_sg_failure(x):
    gens = ", ".join(str(v) for v in x["generators"].values())
    return (f"node {x['node']}, edge toward {x['edge']}: {x['target']} is not in the "
            f"semigroup <{gens}> of leaves {', '.join(x['generators'])}")


def cmd_splice(args, out):
    g, _ = _load(args.file)
    d = splice.splice_diagram(g)
    obj = {
        "nodes": {v: [{"edge": e.end, "via": e.via, "weight": str(e.weight)} for e in d.edges[v]]
                  for v in d.nodes},
        "leaf_order": list(d.leaves),
        "edges": [list(e) for e in d.diagram_edges()],
        "checks": {},
    }
    lines = []
    for v in d.nodes:
        lines.append(f"node {v} (d_v = {d.node_weight(v)}): "
                     + ", ".join(f"{e.end}:{e.weight}" for e in d.edges[v]))
    status = EXIT_OK
    if args.check_semigroup:
        sg = splice.semigroup_check(d)
        obj["checks"]["semigroup"] = sg.to_json()
        lines.append(f"semigroup: {'PASS' if sg.passed else 'FAIL'}")
        lines += ["  " + _describe_sg_failure(x) for x in sg.failures]
        if not sg.passed:
            status = EXIT_CHECK
    if args.check_congruence:
        cg = splice.congruence_check(g, args.cap)
        obj["checks"]["congruence"] = cg.to_json()
        verdict = {True: "PASS", False: "FAIL", None: "NOT APPLICABLE"}[cg.passed]
        lines.append(f"congruence: {verdict}")
        for x in cg.details:
            if x["pass"]:
                lines.append(f"  node {x['node']}: " + ", ".join(
                    f"{k}->{_mono_text(m)}" for k, m in x["choice"].items()))
            else:
                lines.append(f"  node {x['node']}: {x['status']}")
        if cg.passed is not True:
            status = EXIT_CHECK
    _emit(out, args, obj, "\n".join(lines))
    return status


def _mono_text(m):
    return "*".join(f"{w}^{a}" if a != 1 else w for w, a in sorted(m.items())) or "1"


def cmd_equations(args, out):
    g, _ = _load(args.file)
    try:
        eqs = splice.generate_equations(g, cap=args.cap)
    except ConditionsFail as exc:
        obj = {"error": str(exc), "failures": exc.failures}
        _emit(out, args, obj, f"conditions fail: {exc}")
        return EXIT_CHECK
    if args.substitute:
        eqs = splice.substitute_powers(eqs, g)
    text = "# variables " + " ".join(f"{eqs.variable}_{i + 1}={w}" for i, w in enumerate(eqs.leaf_order))
    _emit(out, args, eqs.to_json(), text + "\n" + eqs.to_text())
    return EXIT_OK


def cmd_blowup(args, out):
    g, _ = _load(args.file)
    if args.free:
        new = graphs.blow_up_free(g, args.free)
    else:
        new = graphs.blow_up_edge(g, *args.edge)
    return _emit_graph(args, out, new)


def cmd_blowdown(args, out):
    g, _ = _load(args.file)
    return _emit_graph(args, out, graphs.blow_down(g, args.vertex))


def _emit_graph(args, out, g):
    text = graphs.serialize(g)
    obj = {"graph": text, "vertices": dict(g.graph.euler),
           "edges": [list(e) for e in sorted(g.graph.edges)], "weights": dict(g.weights)}
    _emit(out, args, obj, text)
    return EXIT_OK


def cmd_render(args, out):
    g, name = _load(args.file)
    if args.splice:
        text = dot.render_dot(splice.splice_diagram(g), name)
    else:
        text = dot.render_dot(g, name)
    _emit(out, args, {"format": args.format, "text": text}, text)
    return EXIT_OK


def cmd_report(args, out):
    g, name = _load(args.file)
    r = build_report(g, name)
    _emit(out, args, r.to_json(), _report_text(r))
    return EXIT_OK if r.passed else EXIT_CHECK


def _report_text(r) -> str:
    lines = [f"== {r.name}", f"determinant: {r.determinant}"]
    for label, grp in (("D", r.discriminant), ("D*", r.orbifold), ("ker", r.kernel)):
        if grp is not None:
            lines.append(f"{label}: {grp.describe()}")
    lines.append("leaf order: " + " ".join(r.leaf_order))
    for k, c in sorted(r.checks.items()):
        lines.append(f"{k}: {({True: 'PASS', False: 'FAIL', None: 'n/a'})[c.passed]}")
    return "\n".join(lines)


def cmd_corpus(args, out):
    files = sorted(Path(args.directory).glob("*.graph"))
    if not files:
        raise InputError(f"no .graph files in {args.directory}")

    def one(p):
        g = graphs.parse_graph(p.read_text())
        return build_report(g, p.stem)

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(one, files))
    obj = {r.name: r.to_json() for r in results}
    _emit(out, args, obj, "\n".join(_report_text(r) for r in results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit JSON instead of text")
    p = argparse.ArgumentParser(prog="orbsplice", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "tree, negative definiteness, quasi-minimality")
    sp.add_argument("file")
    sp = add("homology", cmd_homology, "discriminant or orbifold homology group")
    sp.add_argument("file")
    sp.add_argument("--orbifold", action="store_true")
    sp = add("linking", cmd_linking, "linking matrix of meridian knots")
    sp.add_argument("file")
    sp = add("rep", cmd_rep, "diagonal representation in (Q/Z)^t")
    sp.add_argument("file")
    sp.add_argument("--orbifold", action="store_true")
    sp = add("splice", cmd_splice, "splice diagram and its conditions")
    sp.add_argument("file")
    sp.add_argument("--check-semigroup", action="store_true")
    sp.add_argument("--check-congruence", action="store_true")
    sp.add_argument("--cap", type=int, default=splice.DEFAULT_CAP)
    sp = add("equations", cmd_equations, "splice diagram equations")
    sp.add_argument("file")
    sp.add_argument("--substitute", action="store_true", help="apply the orbifold power map")
    sp.add_argument("--cap", type=int, default=splice.DEFAULT_CAP,
                    help="max admissible monomials enumerated per edge")
    sp = add("blowup", cmd_blowup, "blow up a point on a curve or an intersection point")
    sp.add_argument("file")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--free", metavar="V")
    grp.add_argument("--edge", nargs=2, metavar=("V", "W"))
    sp = add("blowdown", cmd_blowdown, "contract a -1 curve")
    sp.add_argument("file")
    sp.add_argument("vertex")
    sp = add("render", cmd_render, "DOT text for the graph or its splice diagram")
    sp.add_argument("file")
    sp.add_argument("--splice", action="store_true")
    sp.add_argument("--format", choices=["dot"], default="dot")
    sp = add("report", cmd_report, "every invariant and check for one graph")
    sp.add_argument("file")
    sp = add("corpus", cmd_corpus, "report on every .graph file in a directory")
    sp.add_argument("directory")
    sp.add_argument("--jobs", type=int, default=4)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.func(args, out)
    except (InputError, OrbspliceError) as exc:
        err.write(f"orbsplice: error: {exc}\n")
        return EXIT_INPUT


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
