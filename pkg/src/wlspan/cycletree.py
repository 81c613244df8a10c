"""Cycle-trees: recognition, SPQ decomposition of path-trees and the drawing algorithms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping
from fractions import Fraction
import math

from .drawing import PolylineDrawing, Virtual, normalize, realize, weak_to_strict
from .errors import (CorridorTooShort, FrameMismatch, InadmissibleTemplate, InvalidInput, Not3Connected,
                     NotAlmost3Connected, NotCycleTree, NotInternallyTriangulated)
from .graph import (Graph, MarkedGraph, PlaneGraph, RotationBuilder, embed, graph_from_edges,
                    components, face_key, is_connected, is_k_connected, make_plane_graph,
                    plane_is_3_connected, trace_faces, trace_faces_raw)
from .outerplanar import OuterplanarLayout, polyline_rows
from .outerplanar import height_bound as outerplanar_height_bound


@dataclass(frozen=True)
class CycleTreeInstance:
    pg: PlaneGraph
    external: frozenset
    internal: frozenset
    three_connected: bool

    @property
    def graph(self):
        return self.pg.graph


def recognize_cycle_tree(pg: PlaneGraph) -> CycleTreeInstance:
    g = pg.graph
    external = frozenset(pg.outer_face)
    internal = frozenset(v for v in g.vertices if v not in external)
    if not internal:
        raise NotCycleTree("no internal vertices")
    if not is_connected(g):
        raise NotCycleTree("graph is disconnected")
    t = g.subgraph(internal)
    if t.m != t.n - 1 or not is_connected(t):
        raise NotCycleTree("internal vertices do not induce a tree")
    return CycleTreeInstance(pg, external, internal, plane_is_3_connected(pg))


# ------------------------------------------------------------------ helpers

def _deep(fn, *args, **kw):
    """Run a deeply recursive function in a thread with a large stack."""
    import sys
    import threading

    out = {}

    def target():
        try:
            out["value"] = fn(*args, **kw)
        except BaseException as exc:  # re-raised in the caller
            out["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 200000))
    threading.stack_size(512 * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in out:
        raise out["error"]
    return out["value"]


def _edge(a, b):
    return (a, b) if a <= b else (b, a)


# ------------------------------------------------------------------ SPQ trees

FLAT_TEMPLATES = frozenset({(-1, -1), (1, 1), (-1, -3), (3, 1)})
ROOF_TEMPLATES = frozenset({(1, -3), (3, -1)})


@dataclass(frozen=True)
class DrawingTemplate:
    """Level offsets a = l(rho) - l(lam) and b = l(r) - l(rho)."""
    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) not in FLAT_TEMPLATES | ROOF_TEMPLATES:
            raise InadmissibleTemplate(f"no template with offsets ({self.a},{self.b})")

    @property
    def kind(self) -> str:
        return "flat" if (self.a, self.b) in FLAT_TEMPLATES else "roof"

    @property
    def pair(self) -> tuple:
        return (self.a, self.b)


@dataclass
class SpqNode:
    id: int
    kind: str                  # "S", "P" or "Q"
    rho: int
    lam: int
    r: int
    children: list
    own_edges: tuple = ()      # edges this node is responsible for drawing


@dataclass
class SpqTree:
    nodes: list
    root: int
    graph: Graph
    path: tuple
    frame_edges: tuple         # root edges (rho, lam) and (rho, r) present in the graph

    def node(self, i) -> SpqNode:
        return self.nodes[i]

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 1)]
        while stack:
            i, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in self.nodes[i].children)
        return best


def _path_from_marks(g: Graph, rho, lam, r) -> list:
    """Recover the lam..r path of a path-tree: it closes the face of (lam, r) away from rho."""
    if g.n == 3:
        return [lam, r]
    aug = g.with_edges([(rho, lam), (rho, r), (lam, r)])
    pg = embed(aug)
    for f in trace_faces(pg):
        k = len(f)
        for i in range(k):
            a, b = f[i], f[(i + 1) % k]
            if {a, b} == {lam, r} and rho not in f:
                walk = f[(i + 1) % k:] + f[:(i + 1) % k]   # starts at b, ends at a
                walk = list(walk)
                if walk[0] != lam:
                    walk.reverse()
                return walk
    raise NotAlmost3Connected("no face closes the path between lam and r")


def build_spq(pt, path=None, validate: bool = True) -> SpqTree:
    """Canonical SPQ decomposition of an internally triangulated path-tree.

    ``pt`` is a MarkedGraph with marks ``rho``, ``lam`` and ``r``; ``path`` lists the
    path from lam to r and is recovered from an embedding when omitted.
    """
    g, marks = pt.graph, pt.marks
    rho, lam, r = marks["rho"], marks["lam"], marks["r"]
    if path is None:
        path = _path_from_marks(g, rho, lam, r)
    path = tuple(path)
    if path[0] != lam or path[-1] != r:
        raise InvalidInput("path must run from lam to r")
    if validate and g.n <= 300:
        aug = g.with_edges([(rho, lam), (rho, r), (lam, r)])
        if aug.n >= 4 and not is_k_connected(aug, 3):
            raise NotAlmost3Connected("closing the frame does not give a 3-connected graph")
    return _deep(_build_spq, g, path, rho)


def _build_spq(g: Graph, path: tuple, rho) -> SpqTree:
    pos = {x: i for i, x in enumerate(path)}
    if len(pos) != len(path):
        raise InvalidInput("path repeats a vertex")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise NotAlmost3Connected(f"path edge ({a},{b}) missing")
    tree = [v for v in g.vertices if v not in pos]
    if rho not in tree:
        raise InvalidInput("rho must be a tree vertex")
    t = g.subgraph(tree)
    if t.m != t.n - 1 or not is_connected(t):
        raise NotAlmost3Connected("non-path vertices do not induce a tree")
    parent = {rho: None}
    order = [rho]
    for v in order:
        for w in t.neighbors(v):
            if w not in parent:
                parent[w] = v
                order.append(w)
    kids = {v: [] for v in order}
    for v in order[1:]:
        kids[parent[v]].append(v)
    lo, hi = {}, {}
    for v in reversed(order):
        ps = [pos[x] for x in g.neighbors(v) if x in pos]
        ps += [lo[c] for c in kids[v] if c in lo] + [hi[c] for c in kids[v] if c in hi]
        if ps:
            lo[v], hi[v] = min(ps), max(ps)
    nodes = []

    def new(kind, root, a, b, children, own):
        nodes.append(SpqNode(len(nodes), kind, root, path[a], path[b], children, tuple(own)))
        return len(nodes) - 1

    def segment(root, a, b, kid):
        if kid is None:
            if b != a + 1:
                raise NotInternallyTriangulated(f"face at {root} over {path[a]}..{path[b]} is not a triangle")
            return new("Q", root, a, b, [], [(path[a], path[b])])
        child = rec(kid, a, b)
        return new("S", root, a, b, [child],
                   [(root, kid), (path[a], kid), (kid, path[b])])

    def rec(root, a, b):
        ps = sorted(pos[x] for x in g.neighbors(root) if x in pos)
        if not ps or ps[0] < a or ps[-1] > b:
            raise NotAlmost3Connected(f"vertex {root} reaches outside its path interval")
        if ps[0] != a or ps[-1] != b:
            raise NotInternallyTriangulated(f"vertex {root} misses an end of {path[a]}..{path[b]}")
        bounds = [a] + [p for p in ps if a < p < b] + [b]
        by_seg = {}
        for c in kids[root]:
            if c not in lo:
                raise NotAlmost3Connected(f"subtree at {c} has no path neighbour")
            j = _bisect_right(bounds, lo[c]) - 1
            if j >= len(bounds) - 1 or hi[c] > bounds[j + 1]:
                raise NotAlmost3Connected(f"subtree at {c} straddles a neighbour of {root}")
            if (lo[c], hi[c]) != (bounds[j], bounds[j + 1]) or j in by_seg:
                raise NotInternallyTriangulated(f"face next to subtree {c} is not a triangle")
            by_seg[j] = c
        if len(bounds) == 2:
            return segment(root, a, b, by_seg.get(0))
        children = [segment(root, bounds[j], bounds[j + 1], by_seg.get(j))
                    for j in range(len(bounds) - 1)]
        own = [(root, path[bounds[j]]) for j in range(1, len(bounds) - 1)]
        return new("P", root, a, b, children, own)

    root = rec(rho, 0, len(path) - 1)
    frame = tuple(e for e in ((rho, path[0]), (rho, path[-1])) if g.has_edge(*e))
    return SpqTree(nodes, root, g, path, frame)


def _bisect_right(xs, x):
    from bisect import bisect_right
    return bisect_right(xs, x)


def assemble(t: SpqTree) -> Graph:
    """Rebuild the path-tree from the node-owned pieces."""
    es = list(t.frame_edges)
    vs = set(t.path)
    for nd in t.nodes:
        es.extend(nd.own_edges)
        vs.add(nd.rho)
    return graph_from_edges(es, vertices=vs)


# ------------------------------------------------------------------ template drawings
#
# Every node is drawn in its own local coordinates with rho at level 0.  Only the
# left-to-right order per level matters (any order-preserving placement is again a
# valid drawing), so a node reports per level a list of its own items and slots that
# stand for the child drawings.  A child slot is keyed by the left boundary of the
# child's region on that level; flattening the slots yields the global orders.

_BASE = {"P": {(1, 1), (3, 1)}, "S": {(1, 1), (3, 1), (3, -1)}, "Q": {(1, 1), (3, 1), (3, -1)}}

# frame points (lam, rho, r) used when a node is drawn on its own
_FRAME = {
    (1, 1): ((1, -1), (2, 0), (6, 1)),
    (3, 1): ((1, -3), (2, 0), (6, 1)),
    (3, -1): ((1, -3), (2, 0), (4, -1)),
}


class _Slot:
    __slots__ = ("toks", "dy", "rev")

    def __init__(self, toks, dy, rev):
        self.toks, self.dy, self.rev = toks, dy, rev


class _Toks:
    __slots__ = ("levels",)

    def __init__(self, levels):
        self.levels = levels


class _View:
    """A node seen directly or mirrored (lam and r swapped, children reversed)."""
    __slots__ = ("t", "i", "mirrored")

    def __init__(self, t, i, mirrored=False):
        self.t, self.i, self.mirrored = t, i, mirrored

    @property
    def node(self):
        return self.t.nodes[self.i]

    @property
    def lam(self):
        nd = self.node
        return nd.r if self.mirrored else nd.lam

    @property
    def r(self):
        nd = self.node
        return nd.lam if self.mirrored else nd.r

    def children(self):
        cs = self.node.children
        if self.mirrored:
            cs = cs[::-1]
        return [_View(self.t, c, self.mirrored) for c in cs]

    def flip(self):
        return _View(self.t, self.i, not self.mirrored)


def _crossing(pts, y):
    """x where a y-monotone polyline meets level y."""
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if min(y0, y1) <= y <= max(y0, y1):
            if y0 == y1:
                return Fraction(x0)
            return Fraction(x0) + (Fraction(x1) - Fraction(x0)) * Fraction(y - y0, y1 - y0)
    raise ValueError("level outside polyline")


def _left_boundary(path_pts, y):
    """Left border at level y of the region below the path lam -> rho -> r."""
    j = 0
    while j + 1 < len(path_pts) and path_pts[j + 1][1] > path_pts[j][1]:
        j += 1
    lam_y = path_pts[0][1]
    if j > 0 and lam_y <= y <= path_pts[j][1]:
        return _crossing(path_pts[: j + 1], y)
    return Fraction(path_pts[0][0])


class _Drawer:
    def __init__(self, t: SpqTree):
        self.t = t
        self.chains = {}

    # geometry of the base templates, in local coordinates ------------------------------

    def _layout(self, view, tpl):
        nd = view.node
        lam, rho, r = view.lam, nd.rho, view.r
        pts, lines, kids = {}, [], []
        if nd.kind == "Q":
            lp, _, rp = _FRAME[tpl]
            lines.append((lam, r, [lp, rp]))
        elif nd.kind == "S":
            (child,) = view.children()
            c = child.node.rho
            if tpl == (3, -1):
                up, vp, wp, cp, ctpl = (1, -3), (2, 0), (4, -1), (2, -2), (1, 1)
            else:
                up, vp, wp, cp, ctpl = _FRAME[tpl][0], (2, 0), (6, 1), (3, 0), tpl
            pts[c] = cp
            lines += [(rho, c, [vp, cp]), (lam, c, [up, cp]), (c, r, [cp, wp])]
            kids.append((child, ctpl, [up, cp, wp], cp[1]))
        else:
            children = view.children()
            k = len(children)
            vp = (k + 1, 0)
            wp = (2 * k + 3, 1)
            lifted = 1 if tpl == (3, 1) else 0   # parity of the indices drawn low
            to_v = {}
            for i, ch in enumerate(children, start=1):
                x = ch.lam
                low = (i % 2 == 1) == (lifted == 1)
                if low:
                    poly = [(i, -3), (i, -1), vp]
                else:
                    poly = [(i, -1), vp]
                to_v[i] = poly
                if i > 1:
                    pts[x] = poly[0]
                    lines.append((rho, x, poly[::-1]))
            for i, ch in enumerate(children, start=1):
                left = to_v[i]
                right = to_v[i + 1][::-1] if i < k else [vp, wp]
                lam_y, r_y = left[0][1], right[-1][1]
                ctpl = (0 - lam_y, r_y - 0)
                kids.append((ch, ctpl, left + right[1:], 0))
        return pts, lines, kids

    def _line_items(self, a, b, poly):
        """Virtual items of the edge a-b drawn along ``poly`` (from a), keyed by level."""
        y0, y1 = poly[0][1], poly[-1][1]
        step = 1 if y1 > y0 else -1
        chain = []
        out = []
        for k, y in enumerate(range(y0 + step, y1, step)):
            it = Virtual(a, b, k)
            chain.append(it)
            out.append((y, _crossing(poly, y), it))
        self.chains[(a, b)] = chain
        return out

    def draw(self, view, tpl) -> _Toks:
        kind = view.node.kind
        if kind == "P" and tpl in ROOF_TEMPLATES:
            raise InadmissibleTemplate(f"P-node cannot take roof template {tpl}")
        if tpl not in FLAT_TEMPLATES | ROOF_TEMPLATES:
            raise InadmissibleTemplate(f"no template with offsets {tpl}")
        if tpl not in _BASE[kind]:
            inner = self.draw(view.flip(), (-tpl[1], -tpl[0]))
            return _Toks({y: [_Slot(inner, 0, True)] for y in inner.levels})
        pts, lines, kids = self._layout(view, tpl)
        rows = {}
        for v, (x, y) in pts.items():
            rows.setdefault(y, []).append(((Fraction(x), 0), v))
        for a, b, poly in lines:
            for y, x, it in self._line_items(a, b, poly):
                rows.setdefault(y, []).append(((x, 0), it))
        for child, ctpl, frame, dy in kids:
            sub = self.draw(child, ctpl)
            for y in sub.levels:
                yy = y + dy
                rows.setdefault(yy, []).append(((_left_boundary(frame, yy), 1), _Slot(sub, dy, False)))
        return _Toks({y: [e for _, e in sorted(row, key=lambda p: p[0])] for y, row in rows.items()})

    def standalone(self, view, tpl, extra_edges=True) -> _Toks:
        """The node together with its frame path drawn on the frame points."""
        if tpl not in _BASE[view.node.kind] and tpl in FLAT_TEMPLATES | ROOF_TEMPLATES:
            inner = self.standalone(view.flip(), (-tpl[1], -tpl[0]), extra_edges)
            return _Toks({y: [_Slot(inner, 0, True)] for y in inner.levels})
        if tpl not in _FRAME:
            raise InadmissibleTemplate(f"no template with offsets {tpl}")
        lp, rp_, wp = _FRAME[tpl]
        lam, rho, r = view.lam, view.node.rho, view.r
        g = self.t.graph
        rows = {}
        for v, (x, y) in ((lam, lp), (rho, rp_), (r, wp)):
            rows.setdefault(y, []).append(((Fraction(x), 0), v))
        for a, b, poly in ((lam, rho, [lp, rp_]), (rho, r, [rp_, wp])):
            if g.has_edge(a, b):
                for y, x, it in self._line_items(a, b, poly):
                    rows.setdefault(y, []).append(((x, 0), it))
        sub = self.draw(view, tpl)
        for y in sub.levels:
            rows.setdefault(y, []).append(((_left_boundary([lp, rp_, wp], y), 1), _Slot(sub, 0, False)))
        return _Toks({y: [e for _, e in sorted(row, key=lambda p: p[0])] for y, row in rows.items()})


def _flatten(toks: _Toks) -> dict:
    orders = {}
    for y in sorted(toks.levels):
        out = []
        stack = [(iter(toks.levels[y]), 0, False)]
        while stack:
            it, dy, rev = stack[-1]
            e = next(it, None)
            if e is None:
                stack.pop()
                continue
            if isinstance(e, _Slot):
                d, rv = dy + e.dy, rev ^ e.rev
                row = e.toks.levels.get(y - d, ())
                stack.append((reversed(row) if rv else iter(row), d, rv))
            else:
                out.append(e)
        orders[y] = out
    return orders


def _subtree_edges(t: SpqTree, i) -> list:
    out = []
    stack = [i]
    while stack:
        nd = t.nodes[stack.pop()]
        out.extend(nd.own_edges)
        stack.extend(nd.children)
    return out


def _realize_subset(orders, chains, edges):
    """Realize by rank, keeping only the given edges (and their endpoints)."""
    keep = {(min(a, b), max(a, b)) for a, b in edges}
    used = {k: v for k, v in chains.items() if (min(k), max(k)) in keep}
    for a, b in keep:
        if (a, b) not in used and (b, a) not in used:
            used[(a, b)] = []
    verts = {v for e in keep for v in e}
    drop = {it for k, ch in chains.items() if k not in used for it in ch}
    clean = {y: [it for it in row if it not in drop] for y, row in orders.items()}
    return realize(clean, used, verts)


@dataclass(frozen=True)
class Frame:
    """Anchor path u-v-w with optional bends; its region lies below the path,
    between the vertical rays going down from u and w."""
    anchor: tuple               # (u, v, w)
    points: tuple               # ((x, y), (x, y), (x, y))
    bends: tuple = ((), ())     # bends of u-v (listed from u) and of v-w (from v)

    def __post_init__(self):
        pts = tuple((Fraction(x), int(y)) for x, y in self.points)
        bends = tuple(tuple((Fraction(x), int(y)) for x, y in b) for b in self.bends)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "bends", bends)
        if pts[0][0] >= pts[2][0]:
            raise FrameMismatch("frame anchor u must lie left of w")
        path = self.path()
        for a, b in zip(path, path[1:]):
            if a[1] == b[1] and (a, b) != (path[0], path[-1]):
                raise FrameMismatch("frame path has a horizontal piece")

    def path(self) -> list:
        pu, pv, pw = self.points
        return [pu, *self.bends[0], pv, *self.bends[1], pw]

    def levels(self) -> tuple:
        return tuple(y for _, y in self.points)

    def interval(self, y):
        """Open x-interval of the region on level y, or None when it is empty."""
        path = self.path()
        if y >= max(q[1] for q in path):
            return None
        lo = _left_boundary(path, y)
        hi = _left_boundary(path[::-1], y)
        return (lo, hi) if lo < hi else None

    def mirrored(self) -> "Frame":
        """Reflection in a vertical line; u and w trade places."""
        pu, pv, pw = self.points
        off = pu[0] + pw[0]
        ref = lambda q: (off - q[0], q[1])
        return Frame(self.anchor[::-1], (ref(pw), ref(pv), ref(pu)),
                     (tuple(ref(q) for q in self.bends[1][::-1]),
                      tuple(ref(q) for q in self.bends[0][::-1])))


def template_frame(template, anchor=(None, None, None)) -> Frame:
    """Straight frame with the offsets of ``template``."""
    tpl = template.pair if isinstance(template, DrawingTemplate) else tuple(template)
    DrawingTemplate(*tpl)
    if tpl in _FRAME:
        return Frame(tuple(anchor), _FRAME[tpl])
    f = Frame(tuple(anchor)[::-1], _FRAME[(-tpl[1], -tpl[0])]).mirrored()
    return f


def _place_in_frame(frame: Frame, interior: Mapping) -> dict:
    """Spread each level's interior items evenly over the region's open interval."""
    out = {}
    for y, row in interior.items():
        if not row:
            continue
        iv = frame.interval(y)
        if iv is None:
            raise FrameMismatch(f"level {y} has items but the region is empty there")
        lo, hi = iv
        step = (hi - lo) / (len(row) + 1)
        for i, it in enumerate(row, start=1):
            out[it] = (lo + step * i, y)
    return out


def _frame_edge_bends(frame: Frame, a, b):
    """Bends of the frame edge a-b listed from a: the polyline's crossings of every level."""
    u, v, w = frame.anchor
    pu, pv, pw = frame.points
    if {a, b} == {u, v}:
        poly = [pu, *frame.bends[0], pv]
    else:
        poly = [pv, *frame.bends[1], pw]
    if a != (u if {a, b} == {u, v} else v):
        poly = poly[::-1]
    y0, y1 = poly[0][1], poly[-1][1]
    if y0 == y1:
        return ()
    step = 1 if y1 > y0 else -1
    return tuple((_crossing(poly, y), y) for y in range(y0 + step, y1, step))


def _assemble_framed(frame: Frame, placed: dict, chains: Mapping, edges, graph) -> PolylineDrawing:
    u, v, w = frame.anchor
    pos = dict(placed)
    for a, q in zip(frame.anchor, frame.points):
        pos[a] = q
    out = []
    for a, b in edges:
        if {a, b} in ({u, v}, {v, w}):
            out.append((a, b, _frame_edge_bends(frame, a, b)))
            continue
        if (a, b) in chains:
            ch = chains[(a, b)]
        elif (b, a) in chains:
            a, b = b, a
            ch = chains[(a, b)]
        else:
            ch = ()
        out.append((a, b, tuple(pos[c] for c in ch)))
    verts = {x for e in edges for x in e} | set(frame.anchor)
    return PolylineDrawing({x: pos[x] for x in verts}, tuple(out))


def geometric_realize(sub: PolylineDrawing, frame: Frame) -> PolylineDrawing:
    """Move a good drawing into ``frame`` keeping every level's left-to-right order."""
    u, v, w = frame.anchor
    for a in frame.anchor:
        if a not in sub.positions:
            raise FrameMismatch(f"anchor {a} is not drawn")
    lv = sub.levels
    if (lv[u], lv[v], lv[w]) != frame.levels():
        raise FrameMismatch("anchor levels differ from the frame")
    nd = normalize(sub)
    edge_bends = {frozenset(e[:2]): e for e in sub.edges}

    def sub_poly(a, b):
        e = edge_bends.get(frozenset((a, b)))
        if e is None:
            return [sub.positions[a], sub.positions[b]]
        pts = [sub.positions[e[0]], *e[2], sub.positions[e[1]]]
        return pts if e[0] == a else pts[::-1]

    pu_v = sub_poly(u, v)
    pv_w = sub_poly(v, w)
    here = Frame(frame.anchor, (sub.positions[u], sub.positions[v], sub.positions[w]),
                 (tuple(pu_v[1:-1]), tuple(pv_w[1:-1])))
    anchor_items = {u, v, w}
    for key in ((u, v), (v, u), (v, w), (w, v)):
        anchor_items.update(nd.chains.get(key, ()))
    interior = {}
    for y, row in nd.orders.items():
        inside = [it for it in row if it not in anchor_items]
        iv = here.interval(y) if inside else None
        for it in inside:
            if iv is None or not iv[0] < nd.coords[it] < iv[1]:
                raise FrameMismatch(f"{it} lies outside the region of the anchor path")
        interior[y] = inside
    placed = _place_in_frame(frame, interior)
    return _assemble_framed(frame, placed, nd.chains, [e[:2] for e in sub.edges], sub.graph)


def draw_template(t: SpqTree, node: int, template) -> PolylineDrawing:
    """Good drawing of a node's pertinent graph inside the frame of ``template``."""
    tpl = template.pair if isinstance(template, DrawingTemplate) else tuple(template)
    DrawingTemplate(*tpl)
    view = _View(t, node)
    nd = t.nodes[node]
    dr = _Drawer(t)
    interior = _flatten(_deep(dr.draw, view, tpl))
    frame = template_frame(tpl, (nd.lam, nd.rho, nd.r))
    placed = _place_in_frame(frame, interior)
    edges = _subtree_edges(t, node)
    edges += [e for e in ((nd.lam, nd.rho), (nd.rho, nd.r)) if t.graph.has_edge(*e)]
    return _assemble_framed(frame, placed, dr.chains, edges, t.graph)


# ------------------------------------------------------------------ 3-connected cycle-trees

def internally_triangulate(ct: CycleTreeInstance):
    """Fan-triangulate every internal face; returns (plane graph, added edges).

    Each internal face consists of one run of external vertices x_a..x_b and one
    tree path t_1..t_m.  t_1 is joined to the run, then x_a to the rest of the path.
    """
    pg = ct.pg
    ext = ct.external
    outer = face_key(pg.outer_face)
    rb = RotationBuilder(pg.rotation)
    added = []
    for f in trace_faces(pg):
        if face_key(f) == outer or len(f) <= 3:
            continue
        k = len(f)
        starts = [i for i in range(k) if f[i] in ext and f[i - 1] not in ext]
        if len(starts) != 1:
            raise Not3Connected(f"internal face {f} does not split into one external and one tree run")
        s = starts[0]
        walk = list(f[s:] + f[:s])
        xs = [v for v in walk if v in ext]
        ts = walk[len(xs):]
        if walk[: len(xs)] != xs or not ts:
            raise Not3Connected(f"internal face {f} does not split into one external and one tree run")
        t1 = ts[0]
        cur = list(walk)
        for x in reversed(xs[:-1]):
            if x == xs[0] and len(ts) == 1:
                continue
            rb.add_chord(cur, t1, x)
            added.append((t1, x))
            i = cur.index(x)
            cur = cur[: i + 1] + cur[cur.index(t1):]
        xa = xs[0]
        for tj in ts[1:-1]:
            rb.add_chord(cur, xa, tj)
            added.append((xa, tj))
            cur = [xa] + cur[cur.index(tj):]
    return rb.plane_graph(pg.outer_face), added


def draw_3conn_cycle_tree(ct: CycleTreeInstance) -> PolylineDrawing:
    """Span-4 drawing of a 3-connected cycle-tree."""
    if not isinstance(ct, CycleTreeInstance):
        ct = recognize_cycle_tree(ct)
    if not ct.three_connected:
        raise Not3Connected("cycle-tree is not 3-connected")
    tri, added = internally_triangulate(ct)
    g = tri.graph
    cyc = list(tri.outer_face)
    u, w = min(_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))
    i = cyc.index(u)
    if cyc[(i + 1) % len(cyc)] == w:
        path = [cyc[(i - j) % len(cyc)] for j in range(len(cyc))]
    else:
        path = [cyc[(i + j) % len(cyc)] for j in range(len(cyc))]
    outer = face_key(tri.outer_face)
    common = sorted(x for f in trace_faces(tri) if face_key(f) != outer and u in f and w in f
                    for x in f if x in ct.internal)
    if not common:
        raise Not3Connected("no internal vertex next to the chosen outer edge")
    v = common[0]
    pt = MarkedGraph(g.without_edges([(u, w)]), {"rho": v, "lam": u, "r": w})
    t = build_spq(pt, path, validate=False)
    dr = _Drawer(t)
    toks = _deep(dr.standalone, _View(t, t.root), (1, 1))
    bend = Virtual(u, w, 0)
    toks.levels[0] = [bend] + toks.levels[0]
    dr.chains[(u, w)] = [bend]
    orders = _flatten(toks)
    return _realize_subset(orders, dr.chains, ct.graph.edges)


# ------------------------------------------------------------------ general cycle-trees

def stretch_factor(n: int) -> int:
    """Number of levels inserted between consecutive levels of the core drawing."""
    return max(3 + 2 * math.ceil(math.log2(max(n, 2))), outerplanar_height_bound(n))


def general_span_bound(n: int) -> int:
    return 9 * (stretch_factor(n) + 1)


def _chord_at(rb: RotationBuilder, walk, i, j):
    """Add a chord between walk positions i and j through the face of ``walk``."""
    k = len(walk)
    p, q = walk[i], walk[j]
    rb.insert_before(p, q, walk[(i - 1) % k])
    rb.insert_before(q, p, walk[(j - 1) % k])


def _split_walk(walk, i, j):
    k = len(walk)
    if i > j:
        i, j = j, i
    return walk[i:j + 1], walk[j:] + walk[:i + 1]


def augment_cycle_tree(ct: CycleTreeInstance):
    """Maximal augmentation keeping every external vertex on the outer face.

    Returns (plane graph, added edges).  The outer walk is made a simple cycle by
    cutting corners at repeated vertices; then every internal face receives
    chords from external vertices until none can be added.
    """
    pg = ct.pg
    ext = ct.external
    rb = RotationBuilder(pg.rotation)
    adj = {v: set(ns) for v, ns in pg.rotation.items()}
    added = []

    def connect(walk, i, j):
        p, q = walk[i], walk[j]
        _chord_at(rb, walk, i, j)
        adj[p].add(q)
        adj[q].add(p)
        added.append((p, q))

    outer = list(pg.outer_face)
    progress = True
    while progress and len(set(outer)) < len(outer):
        progress = False
        k = len(outer)
        count = {}
        for v in outer:
            count[v] = count.get(v, 0) + 1
        for i in range(k):
            c, a, b = outer[i], outer[i - 1], outer[(i + 1) % k]
            if count[c] > 1 and a != b and b not in adj[a]:
                connect(outer, (i - 1) % k, (i + 1) % k)
                outer = outer[:i] + outer[i + 1:] if i else outer[1:]
                progress = True
                break
    if len(set(outer)) != len(outer):
        raise NotCycleTree("outer boundary cannot be closed into a simple cycle")

    okey = face_key(outer)
    work = [list(f) for f in rb.faces() if face_key(f) != okey]
    while work:
        f = work.pop()
        k = len(f)
        if k <= 3:
            continue
        pick = None
        for i in range(k):
            if f[i] not in ext:
                continue
            for j in ((i + 2) % k, (i - 2) % k):
                if f[j] != f[i] and f[j] not in adj[f[i]]:
                    pick = (i, j)
                    break
            if pick:
                break
        if pick is None:
            for i in range(k):
                if f[i] not in ext:
                    continue
                for j in range(k):
                    if (j - i) % k in (0, 1, k - 1):
                        continue
                    if f[j] != f[i] and f[j] not in adj[f[i]]:
                        pick = (i, j)
                        break
                if pick:
                    break
        if pick is None:
            continue
        connect(f, *pick)
        work.extend(_split_walk(f, *pick))
    return rb.plane_graph(tuple(outer)), added


@dataclass(frozen=True)
class InsideComponent:
    vertices: tuple
    base: object        # the one vertex of C adjacent to all of them
    reference: object   # the core-tree vertex adjacent to the component
    attachment: object  # the neighbour of the reference inside the component


@dataclass(frozen=True)
class OutsideComponent:
    graph: Graph        # maximal outerplanar, includes the cycle edge (u, v)
    u: object
    v: object


@dataclass(frozen=True)
class CycleTreeParts:
    augmented: PlaneGraph
    added: tuple
    cycle: tuple
    core: PlaneGraph
    outside: tuple
    inside: tuple


def decompose_cycle_tree(ct: CycleTreeInstance) -> CycleTreeParts:
    """Split an augmented cycle-tree into a 3-connected core and removable parts."""
    aug, added = augment_cycle_tree(ct)
    g = aug.graph
    ext, tree = ct.external, ct.internal
    rot = aug.rotation
    rot_w = {v: tuple(w for w in rot[v] if w in ext) for v in ext}

    t0 = next((t for t in sorted(tree) if any(w in ext for w in rot[t])), None)
    if t0 is None:
        raise NotCycleTree("internal tree does not touch the outer vertices")
    w0 = min(w for w in rot[t0] if w in ext)
    ring = rot[w0]
    i = ring.index(t0)
    b = next(ring[(i - s) % len(ring)] for s in range(1, len(ring) + 1)
             if ring[(i - s) % len(ring)] in ext)
    cycle = None
    for f in trace_faces_raw(rot_w):
        if any(f[j] == w0 and f[(j + 1) % len(f)] == b for j in range(len(f))):
            cycle = tuple(f)
            break
    if cycle is None or len(set(cycle)) != len(cycle) or len(cycle) < 3:
        raise NotCycleTree("the face holding the internal tree is not bounded by a cycle")
    on_c = set(cycle)

    rest = g.subgraph([v for v in ext if v not in on_c])
    outside = []
    for comp in components(rest):
        att = sorted({w for v in comp for w in g.neighbors(v) if w in on_c})
        if len(att) != 2 or not g.has_edge(*att):
            raise NotCycleTree(f"outside component {sorted(comp)} does not hang off one cycle edge")
        sub = g.subgraph(set(comp) | set(att))
        outside.append(OutsideComponent(sub, att[0], att[1]))

    cnb = {t: [w for w in g.neighbors(t) if w in on_c] for t in tree}
    core_tree = {t for t in tree if len(cnb[t]) >= 2}
    if not core_tree:
        raise NotCycleTree("no internal vertex has two neighbours on the cycle")
    if not is_connected(g.subgraph(core_tree)):
        raise NotCycleTree("core internal vertices do not induce a tree")
    inside = []
    for comp in components(g.subgraph([t for t in tree if t not in core_tree])):
        bases = {w for v in comp for w in cnb[v]}
        if len(bases) != 1 or any(len(cnb[v]) != 1 for v in comp):
            raise NotCycleTree(f"inside component {sorted(comp)} is not attached to one base vertex")
        cs = set(comp)
        refs = {(w, v) for v in comp for w in g.neighbors(v) if w in tree and w not in cs}
        if len(refs) != 1:
            raise NotCycleTree(f"inside component {sorted(comp)} has no unique reference vertex")
        (x, a), = refs
        u = bases.pop()
        if x not in core_tree or not g.has_edge(x, u):
            raise NotCycleTree(f"reference vertex {x} is not joined to base {u}")
        inside.append(InsideComponent(tuple(sorted(comp)), u, x, a))

    keep = on_c | core_tree
    hg = g.subgraph(keep)
    hrot = {v: tuple(w for w in rot[v] if w in keep) for v in keep}
    core = make_plane_graph(hg, hrot, tuple(reversed(cycle)))
    if set(core.outer_face) != on_c:
        raise NotCycleTree("core outer face is not the cycle")
    if not is_k_connected(hg, 3):
        raise Not3Connected("stripped core is not 3-connected")
    return CycleTreeParts(aug, tuple(added), cycle, core, tuple(outside), tuple(inside))


class _OrderHost:
    """Per-level item orders kept as linked lists, for cheap insertion."""

    def __init__(self, nd):
        self.level = {}
        self.nxt = {}
        self.head = {}
        for y, row in nd.orders.items():
            prev = None
            for it in row:
                self.level[it] = y
                if prev is None:
                    self.head[y] = it
                else:
                    self.nxt[prev] = it
                prev = it
        self.chains = {k: list(c) for k, c in nd.chains.items()}
        self.vertices = set(nd.graph.vertices)

    def chain(self, a, b):
        """Items of edge (a, b) listed from a to b."""
        if (a, b) in self.chains:
            return self.chains[(a, b)]
        if (b, a) in self.chains:
            return self.chains[(b, a)][::-1]
        raise InvalidInput(f"edge ({a},{b}) is not in the host drawing")

    def insert_after(self, ref, items):
        y = self.level[ref]
        after = self.nxt.get(ref)
        prev = ref
        for it in items:
            if it in self.level:
                raise InvalidInput(f"item {it} already drawn")
            self.level[it] = y
            self.nxt[prev] = it
            prev = it
        if after is None:
            self.nxt.pop(prev, None)
        else:
            self.nxt[prev] = after

    def add_edge(self, a, b, chain):
        self.chains[(a, b)] = list(chain)

    def orders(self) -> dict:
        out = {}
        for y, it in self.head.items():
            row = []
            while it is not None:
                row.append(it)
                it = self.nxt.get(it)
            out[y] = row
        return out

    def drawing(self) -> PolylineDrawing:
        return realize(self.orders(), self.chains, self.vertices)


def _subtree_blocks(tree: Graph, root, top: int, d: int):
    """Depth of every vertex below the corridor top, and the pre-order used per level."""
    parent = {root: None}
    order = [root]
    for v in order:
        for w in tree.neighbors(v):
            if w not in parent:
                parent[w] = v
                order.append(w)
    if len(order) != tree.n or tree.m != tree.n - 1:
        raise InvalidInput("component is not a tree")
    size = {v: 1 for v in order}
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    kids = {v: [] for v in order}
    for v in order[1:]:
        kids[parent[v]].append(v)
    heavy = {}
    for v, ks in kids.items():
        if ks:
            heavy[v] = min(ks, key=lambda c: (-size[c], c))
    depth = {root: 1}
    pre = []
    stack = [root]
    while stack:
        v = stack.pop()
        pre.append(v)
        light = sorted(c for c in kids[v] if c != heavy.get(v))
        for c in light:
            depth[c] = depth[v] + 1
        if v in heavy:
            depth[heavy[v]] = depth[v]
            stack.append(heavy[v])
        stack.extend(reversed(light))
    return depth, pre, heavy, parent


def _insert_subtree(host: _OrderHost, x, u, tree: Graph, root):
    if root not in tree:
        raise InvalidInput(f"root {root} is not in the tree")
    lx, lu = host.level[x], host.level[u]
    gap = abs(lx - lu)
    d = 1 if lu > lx else -1
    depth, pre, heavy, parent = _subtree_blocks(tree, root, lx, d)
    need = max(depth.values()) + 1
    if gap < need:
        raise CorridorTooShort(f"edge ({x},{u}) spans {gap} levels, tree needs {need}",
                               need=need, have=gap)
    edge_items = {host.level[it]: it for it in host.chain(x, u)}
    rows = {lx + d * k: [] for k in range(1, gap)}
    for v in pre:
        lv = lx + d * depth[v]
        rows[lv].append(v)
        chain = []
        for k, y in enumerate(range(lv + d, lu, d)):
            it = Virtual(v, u, k)
            rows[y].append(it)
            chain.append(it)
        host.add_edge(v, u, chain)
        p = parent[v]
        host.add_edge(v, x if p is None else p, ())
    for y, items in rows.items():
        if items:
            host.insert_after(edge_items[y], items)
    host.vertices.update(pre)


def _insert_outerplanar(host: _OrderHost, comp: Graph, u, v):
    if comp.n <= 2:
        return
    if host.level[u] > host.level[v]:
        u, v = v, u
    lu, lv = host.level[u], host.level[v]
    layout = OuterplanarLayout(comp, u, v)
    rows, chains = polyline_rows(layout, lv - lu)
    edge_items = {host.level[it]: it for it in host.chain(u, v)}
    for (a, b), chain in chains.items():
        if {a, b} != {u, v}:
            host.add_edge(a, b, chain)
    for r, items in rows.items():
        host.insert_after(edge_items[lu + r], items)
    host.vertices.update(comp.vertices)


def _host_of(p: PolylineDrawing) -> _OrderHost:
    return _OrderHost(normalize(p))


def insert_subtree(host: PolylineDrawing, x, u, tree: Graph, root) -> PolylineDrawing:
    """Draw ``tree`` beside edge (x, u): every tree vertex joined to u, ``root`` to x."""
    h = _host_of(host)
    _insert_subtree(h, x, u, tree, root)
    return h.drawing()


def insert_outerplanar(host: PolylineDrawing, comp) -> PolylineDrawing:
    """Draw a maximal outerplanar ``comp`` (marks u, v) between the levels of edge (u, v)."""
    if isinstance(comp, MarkedGraph):
        g, u, v = comp.graph, comp.marks["u"], comp.marks["v"]
    else:
        g, u, v = comp.graph, comp.u, comp.v
    h = _host_of(host)
    _insert_outerplanar(h, g, u, v)
    return h.drawing()


def _stretched(p: PolylineDrawing, factor: int) -> PolylineDrawing:
    pos = {v: (x, y * factor) for v, (x, y) in p.positions.items()}
    es = tuple((a, b, tuple((x, y * factor) for x, y in bends)) for a, b, bends in p.edges)
    return PolylineDrawing(pos, es)


def draw_cycle_tree(ct) -> PolylineDrawing:
    """O(log n)-span drawing of a connected cycle-tree given with its embedding."""
    if not isinstance(ct, CycleTreeInstance):
        ct = recognize_cycle_tree(ct)
    parts = decompose_cycle_tree(ct)
    core_ct = recognize_cycle_tree(parts.core)
    core = weak_to_strict(draw_3conn_cycle_tree(core_ct))
    n = ct.graph.n
    host = _host_of(_stretched(core, stretch_factor(n) + 1))
    g = parts.augmented.graph
    for comp in parts.inside:
        _insert_subtree(host, comp.reference, comp.base, g.subgraph(comp.vertices),
                        comp.attachment)
    for comp in parts.outside:
        _insert_outerplanar(host, comp.graph, comp.u, comp.v)
    out = host.drawing()
    want = {frozenset(e) for e in ct.graph.edges}
    drop = [(a, b, ()) for a, b, _ in out.edges if frozenset((a, b)) not in want]
    out = out.restricted(drop_edges=[e[:2] for e in drop])
    if len(out.edges) != ct.graph.m or set(out.positions) != set(ct.graph.vertices):
        raise InvalidInput("reinsertion lost part of the graph")
    return out
