"""Command-line front end.  Exit codes: 0 success, 1 domain or I/O error, 2 usage error."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import generators as gen
from .cycletree import draw_3conn_cycle_tree, draw_cycle_tree, recognize_cycle_tree
from .drawing import (
    check_geometric,
    check_via_normalized,
    drawing_from_json,
    drawing_to_json,
    queue_layout,
    weak_to_strict,
)
from .errors import InvalidInput, WlspanError
from .graph import Graph, MarkedGraph, graph_from_json, graph_to_json
from .kernels import (
    Modulator,
    TreedepthDecomposition,
    VertexCover,
    modulator_greedy,
    modulator_kernelize,
    threshold_check,
    treedepth_greedy,
    treedepth_kernelize,
    vc_kernelize,
    vertex_cover_2approx,
)
from .solver import DEFAULT_CAP, decide_span, min_span_wlp
from .svg import svg_string

log = logging.getLogger("wlspan")


class IoError(WlspanError):
    code = "Io"


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc.msg}") from exc


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}") from exc


def _summary(d):
    return {"span": d.span(), "height": d.height(), "strict": d.is_strict()}


def _emit(args, doc, drawing=None):
    """JSON to --output (stdout by default); SVG to --svg or, with --format svg, to --output."""
    fmt = args.format
    if fmt in ("json", "both"):
        _write(args.output, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if drawing is not None:
        if fmt == "svg":
            _write(args.svg or args.output, svg_string(drawing))
        elif args.svg:
            _write(args.svg, svg_string(drawing))
    elif fmt == "svg":
        raise InvalidInput("this verb produces no drawing to render as SVG")


# verbs ---------------------------------------------------------------------------------

def cmd_solve(args):
    g = graph_from_json(_read_json(args.input))["graph"]
    if args.span is not None:
        return cmd_decide(args)
    res = min_span_wlp(g, cap=args.cap, strict=args.strict)
    doc = res.to_json()
    if res.witness is not None:
        doc.update(_summary(res.witness))
    _emit(args, doc, res.witness)


def cmd_decide(args):
    if args.span is None:
        raise InvalidInput("decide needs --span")
    g = graph_from_json(_read_json(args.input))["graph"]
    ok, w, lev = decide_span(g, args.span, cap=args.cap, strict=args.strict)
    doc = {"feasible": ok, "span_budget": args.span,
           "leveling": {str(k): v for k, v in sorted(lev.items())} if lev else None,
           "witness": drawing_to_json(w) if w is not None else None}
    if w is not None:
        doc.update(_summary(w))
    _emit(args, doc, w)


def cmd_check(args):
    g = graph_from_json(_read_json(args.input))["graph"]
    d = drawing_from_json(_read_json(args.drawing))
    same = d.graph.vertices == g.vertices and set(d.graph.edges) == set(g.edges)
    geo = check_geometric(d)
    comb = check_via_normalized(d)
    doc = {"valid": bool(geo) and bool(comb) and same, "matches_graph": same,
           "geometric": geo.to_json(), "normalized": comb.to_json()}
    if d.positions:
        doc.update(_summary(d))
    _emit(args, doc, d)


def _cycle_tree_input(doc):
    parsed = graph_from_json(doc)
    if parsed["plane"] is None or "outer_face" not in doc:
        raise InvalidInput("drawing a cycle-tree needs a rotation system and an outer face")
    return recognize_cycle_tree(parsed["plane"])


def cmd_draw(args):
    ct = _cycle_tree_input(_read_json(args.input))
    if args.mode == "3conn-cycle-tree":
        d = draw_3conn_cycle_tree(ct)
    else:
        d = draw_cycle_tree(ct)
    doc = {"drawing": drawing_to_json(d), **_summary(d)}
    _emit(args, doc, d)


def _parse_param(text):
    if text == "vc":
        return ("vc",)
    if text == "treedepth":
        return ("treedepth",)
    if text.startswith("modulator:"):
        try:
            return ("modulator", int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"bad --param {text!r}: use vc, modulator:b or treedepth")


def cmd_kernelize(args):
    doc = _read_json(args.input)
    g = graph_from_json(doc)["graph"]
    kind = args.param[0]
    s = args.span
    if kind == "vc":
        cov = VertexCover(frozenset(doc["cover"])) if "cover" in doc else vertex_cover_2approx(g)
        kernel, trace = vc_kernelize(g, cov, s)
        param, extra = ("vc", cov.k), {"cover": sorted(cov.cover)}
    elif kind == "modulator":
        b = args.param[1]
        mod = Modulator(frozenset(doc["modulator"]), b) if "modulator" in doc else modulator_greedy(g, b)
        kernel, trace = modulator_kernelize(g, mod, s)
        param, extra = ("modulator", b, mod.k), {"modulator": sorted(mod.vertices), "b": b}
    else:
        if "decomposition" in doc:
            parent = {int(k): (None if p is None else int(p)) for k, p in doc["decomposition"].items()}
            t = TreedepthDecomposition(parent, doc.get("td"))
        else:
            t = treedepth_greedy(g)
        kernel, trace = treedepth_kernelize(g, t, s)
        td = t.td if t.td is not None else t.height()
        param, extra = ("treedepth", td), {"td": td}
    out = {"kernel": graph_to_json(kernel), "trace": trace.to_json(),
           "size": {"n": g.n, "m": g.m, "kernel_n": kernel.n, "kernel_m": kernel.m,
                    "removed": g.n - kernel.n},
           "threshold": threshold_check(param, s), "parameter": extra}
    if trace.tree is not None:
        out["decomposition"] = trace.tree.to_json()
    _emit(args, out)


def _kv(items):
    out = {}
    for it in items or []:
        if "=" not in it:
            raise InvalidInput(f"parameter {it!r} is not key=value")
        k, v = it.split("=", 1)
        out[k] = v
    return out


def _need(params, key, cast=int):
    if key not in params:
        raise InvalidInput(f"missing parameter {key}=")
    try:
        return cast(params[key])
    except ValueError as exc:
        raise InvalidInput(f"parameter {key}={params[key]!r} is not a number") from exc


def cmd_generate(args):
    p = _kv(args.params)
    fam = args.family
    seed = args.seed
    if fam == "kplus":
        obj = gen.gen_k_plus(_need(p, "alpha"))
    elif fam == "W":
        obj = gen.gen_W(_need(p, "i"), _need(p, "h"))
    elif fam == "reduction":
        if not args.input:
            raise InvalidInput("reduction needs --input with the bipartite graph H")
        h = graph_from_json(_read_json(args.input))["graph"]
        obj = gen.reduce_instance(h, _need(p, "s"))
    elif fam == "stacked":
        obj = gen.gen_stacked_cycles(_need(p, "k"))
    elif fam == "nested":
        obj = gen.nested_triangles_plane(_need(p, "r"))
    elif fam == "3conn-lower":
        obj = gen.gen_3conn_lower(_need(p, "n")).pg
    elif fam == "ct-lower":
        obj = gen.gen_cycle_tree_lower(_need(p, "n")).pg
    elif fam == "random-ct":
        three = p.get("three_connected", "1") not in ("0", "false", "no")
        obj = gen.gen_random_cycle_tree(_need(p, "n"), three_connected=three, seed=seed).pg
    else:
        keep = float(p.get("keep", 0.7))
        obj = gen.gen_random_planar(_need(p, "n"), seed=seed, keep=keep)
    _emit(args, graph_to_json(obj))


def cmd_reduce(args):
    h = graph_from_json(_read_json(args.input))["graph"]
    _emit(args, graph_to_json(gen.reduce_instance(h, args.span)))


def cmd_queue_layout(args):
    d = drawing_from_json(_read_json(args.input))
    ql = queue_layout(d)
    doc = {"order": list(ql.order), "num_queues": ql.num_queues,
           "queues": [[u, v, q] for (u, v), q in sorted(ql.queue.items())]}
    _emit(args, doc)


def cmd_strictify(args):
    d = weak_to_strict(drawing_from_json(_read_json(args.input)))
    _emit(args, {"drawing": drawing_to_json(d), **_summary(d)}, d)


# parser ----------------------------------------------------------------------------------

FAMILIES = ["kplus", "W", "reduction", "stacked", "nested", "3conn-lower", "ct-lower",
            "random-ct", "random-planar"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wlspan", description="weakly leveled planar drawings")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        p.add_argument("--output", "-o", default=None, help="JSON output path (default stdout)")
        p.add_argument("--format", choices=["json", "svg", "both"], default="json")
        return p

    for name, fn, help_ in (("solve", cmd_solve, "minimum span (or decide with --span)"),
                            ("decide", cmd_decide, "is there a drawing with span <= s")):
        p = verb(name, fn, help_)
        p.add_argument("--input", "-i", required=True)
        p.add_argument("--span", type=int, default=None)
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)
        p.add_argument("--strict", action="store_true", help="forbid horizontal edges")
        p.add_argument("--svg", default=None)

    p = verb("check", cmd_check, "validate a drawing against a graph")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--drawing", "-d", required=True)
    p.add_argument("--svg", default=None)

    p = verb("draw", cmd_draw, "draw a cycle-tree")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--mode", choices=["cycle-tree", "3conn-cycle-tree"], default="cycle-tree")
    p.add_argument("--svg", default=None)

    p = verb("kernelize", cmd_kernelize, "kernelize for a structural parameter")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--param", type=_parse_param, required=True)
    p.add_argument("--span", type=int, required=True)

    p = verb("generate", cmd_generate, "generate an instance family")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--params", nargs="*", default=[], help="key=value pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input", "-i", default=None, help="base graph for the reduction family")

    p = verb("reduce", cmd_reduce, "span-forcing reduction of a bipartite planar graph")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--span", type=int, required=True)

    p = verb("queue-layout", cmd_queue_layout, "queue layout read off a drawing")
    p.add_argument("--input", "-i", required=True, help="drawing JSON")

    p = verb("strictify", cmd_strictify, "turn a weak drawing into a strict one")
    p.add_argument("--input", "-i", required=True, help="drawing JSON")
    p.add_argument("--svg", default=None)
    return ap


def run(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("WLSPAN_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "svg"):
        args.svg = None
    try:
        args.fn(args)
    except WlspanError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return 1
    except RecursionError:
        sys.stderr.write(json.dumps({"error": "Domain", "message": "input too deep"}) + "\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
