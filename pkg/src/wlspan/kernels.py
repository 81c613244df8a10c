"""Kernelizations for vertex cover, bounded-component modulators and treedepth.

Every kernelization returns the reduced graph together with a ReductionTrace that
lists the removed parts.  For the vertex-cover kernel the trace is enough to put
the removed vertices back into a drawing of the kernel without raising the span.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import networkx as nx

from .drawing import PolylineDrawing, Virtual, normalize, realize
from .errors import (
    InvalidCover,
    InvalidDecomposition,
    InvalidInput,
    InvalidModulator,
    NoSiblingFound,
    TooManyAttachments,
)
from .graph import Graph, MarkedGraph, components, embed, graph_from_edges

YES = "YES"
UNDECIDED = "Undecided"


# parameters ----------------------------------------------------------------------

@dataclass(frozen=True)
class VertexCover:
    cover: frozenset

    @property
    def k(self) -> int:
        return len(self.cover)

    def validate(self, g: Graph):
        extra = [c for c in self.cover if c not in g]
        if extra:
            raise InvalidCover(f"cover vertices {sorted(extra)} are not in the graph")
        for u, v in g.edges:
            if u not in self.cover and v not in self.cover:
                raise InvalidCover(f"edge ({u},{v}) is not covered", edge=(u, v))


@dataclass(frozen=True)
class Modulator:
    vertices: frozenset
    b: int

    @property
    def k(self) -> int:
        return len(self.vertices)

    def validate(self, g: Graph):
        if self.b < 1:
            raise InvalidModulator("component bound b must be at least 1")
        extra = [c for c in self.vertices if c not in g]
        if extra:
            raise InvalidModulator(f"modulator vertices {sorted(extra)} are not in the graph")
        for comp in components(g.without(self.vertices)):
            if len(comp) > self.b:
                raise InvalidModulator(f"component of size {len(comp)} exceeds b={self.b}",
                                       component=sorted(comp))


@dataclass(frozen=True)
class TreedepthDecomposition:
    """Rooted forest on the vertex set given by parent pointers (roots map to None)."""
    parent: Mapping
    td: int | None = None

    def depth(self, v) -> int:
        d = 0
        while v is not None:
            d += 1
            v = self.parent[v]
        return d

    def root_path(self, v) -> list:
        out = []
        while v is not None:
            out.append(v)
            v = self.parent[v]
        return out

    def height(self) -> int:
        return max((self.depth(v) for v in self.parent), default=0)

    def children(self) -> dict:
        kids = {v: [] for v in self.parent}
        for v, p in self.parent.items():
            if p is not None:
                kids[p].append(v)
        for ks in kids.values():
            ks.sort()
        return kids

    def validate(self, g: Graph):
        if set(self.parent) != set(g.vertices):
            raise InvalidDecomposition("decomposition does not cover exactly the vertex set")
        for v, p in self.parent.items():
            if p is not None and p not in self.parent:
                raise InvalidDecomposition(f"parent {p} of {v} is not a vertex")
        for v in self.parent:
            seen = set()
            x = v
            while x is not None:
                if x in seen:
                    raise InvalidDecomposition(f"parent pointers loop through {x}")
                seen.add(x)
                x = self.parent[x]
        anc = {v: set(self.root_path(v)) for v in self.parent}
        for u, v in g.edges:
            if u not in anc[v] and v not in anc[u]:
                raise InvalidDecomposition(f"edge ({u},{v}) joins unrelated vertices", edge=(u, v))
        if self.td is not None and self.height() > self.td:
            raise InvalidDecomposition(f"depth {self.height()} exceeds declared td={self.td}")

    def to_json(self):
        return {"parent": [[v, p] for v, p in sorted(self.parent.items(), key=lambda t: t[0])],
                "td": self.td}


# traces ------------------------------------------------------------------------------

@dataclass(frozen=True)
class RuleApplication:
    rule: str               # "deg1", "deg2", "one-attachment", "two-attachment", "threshold"
    anchors: tuple          # (c,), (c, d) or the attachment set
    removed: tuple          # removed vertices, sorted
    edges: tuple            # every edge they had at removal time
    kept: tuple = ()        # surviving members of the same group, smallest first


@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)
    tree: TreedepthDecomposition | None = None

    def __len__(self):
        return len(self.steps)

    def removed_vertices(self) -> set:
        out = set()
        for st in self.steps:
            out.update(st.removed)
        return out

    def replay(self, g: Graph) -> Graph:
        return g.without(self.removed_vertices())

    def to_json(self):
        return {"steps": [{"rule": st.rule,
                           "anchors": list(st.anchors),
                           "removed": list(st.removed),
                           "edges": [list(e) for e in st.edges],
                           "kept": list(st.kept)} for st in self.steps]}


def _removed_part(g: Graph, vs: Iterable) -> tuple:
    vs = set(vs)
    es = [e for e in g.edges if e[0] in vs or e[1] in vs]
    return tuple(sorted(vs)), tuple(sorted(es))


# thresholds --------------------------------------------------------------------------

def span_threshold(param) -> int:
    """Span from which every instance with the given parameter is a YES instance."""
    kind = param[0]
    if kind == "vc":
        return 6 * param[1]
    if kind == "modulator":
        b, k = param[1], param[2]
        return (5 * b + 1) * b * k
    if kind == "treedepth":
        td = param[1]
        return ((5 * td) ** td + 1) ** td
    raise InvalidInput(f"unknown parameter kind {kind!r}")


def threshold_check(param, s: int) -> str:
    """param is ("vc", k), ("modulator", b, k) or ("treedepth", td)."""
    return YES if s >= span_threshold(param) else UNDECIDED


# vertex cover --------------------------------------------------------------------------

def vc_caps(s: int, k: int) -> tuple[int, int]:
    return 3, min(4 * s + 5, 24 * k + 5)


def _cover_groups(g: Graph, cover):
    deg1, deg2 = {}, {}
    for v in g.vertices:
        if v in cover:
            continue
        ns = g.neighbors(v)
        if len(ns) == 1:
            deg1.setdefault(ns[0], []).append(v)
        elif len(ns) == 2:
            deg2.setdefault(tuple(ns), []).append(v)
    return deg1, deg2


def vc_kernelize(g: Graph, C, s: int):
    cov = C if isinstance(C, VertexCover) else VertexCover(frozenset(C))
    cov.validate(g)
    cap1, cap2 = vc_caps(s, cov.k)
    deg1, deg2 = _cover_groups(g, cov.cover)
    trace = ReductionTrace()
    drop = set()
    for c in sorted(deg1):
        vs = sorted(deg1[c])
        if len(vs) > cap1:
            trace.steps.append(RuleApplication("deg1", (c,), *_removed_part(g, vs[cap1:]),
                                               tuple(vs[:cap1])))
            drop.update(vs[cap1:])
    for cd in sorted(deg2):
        vs = sorted(deg2[cd])
        if len(vs) > cap2:
            trace.steps.append(RuleApplication("deg2", cd, *_removed_part(g, vs[cap2:]),
                                               tuple(vs[:cap2])))
            drop.update(vs[cap2:])
    return g.without(drop), trace


class _Orders:
    """Linked-list level orders of a normalized drawing, for cheap insertion."""

    def __init__(self, p: PolylineDrawing):
        nd = normalize(p)
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
        if (a, b) in self.chains:
            return self.chains[(a, b)]
        if (b, a) in self.chains:
            return self.chains[(b, a)][::-1]
        raise InvalidInput(f"edge ({a},{b}) is not in the drawing")

    def insert_after(self, ref, items):
        y = self.level[ref]
        after = self.nxt.get(ref)
        prev = ref
        for it in items:
            self.level[it] = y
            self.nxt[prev] = it
            prev = it
        if after is None:
            self.nxt.pop(prev, None)
        else:
            self.nxt[prev] = after

    def row(self, y) -> list:
        out = []
        it = self.head.get(y)
        while it is not None:
            out.append(it)
            it = self.nxt.get(it)
        return out

    def set_row(self, y, row):
        for it in row:
            self.level[it] = y
        self.head[y] = row[0] if row else None
        if not row:
            del self.head[y]
        for a, b in zip(row, row[1:]):
            self.nxt[a] = b
        if row:
            self.nxt.pop(row[-1], None)

    def orders(self) -> dict:
        return {y: self.row(y) for y in self.head}

    def drawing(self) -> PolylineDrawing:
        return realize(self.orders(), self.chains, self.vertices)


def _clone_beside(host: _Orders, sibling, path_ends, new):
    """Draw ``new`` right after ``sibling`` with the same edges, mirroring every chain."""
    host.vertices.add(new)
    host.insert_after(sibling, [new])
    for c in path_ends:
        src = host.chain(c, sibling)
        items = [Virtual(c, new, k) for k in range(len(src))]
        for ref, it in zip(src, items):
            host.insert_after(ref, [it])
        host.chains[(c, new)] = items


def vc_reinsert(d: PolylineDrawing, trace: ReductionTrace) -> PolylineDrawing:
    if not trace.steps:
        return d
    host = _Orders(d)
    lv = d.levels
    for st in reversed(trace.steps):
        if st.rule not in ("deg1", "deg2"):
            raise InvalidInput(f"rule {st.rule!r} has no constructive re-insertion")
        if st.rule == "deg1":
            (c,) = st.anchors
            ok = [w for w in st.kept if w in lv and lv[w] != lv[c]]
            if not ok:
                raise NoSiblingFound(f"no kept neighbor of {c} lies off its level", anchor=c)
        else:
            c, dd = st.anchors
            lo, hi = sorted((lv[c], lv[dd]))
            ok = [w for w in st.kept if w in lv and lo < lv[w] < hi]
            if not ok:
                raise NoSiblingFound(f"no kept common neighbor of {c},{dd} lies strictly between",
                                     anchor=(c, dd))
        w = ok[0]
        # reversed so that the removed vertices end up in increasing order to the right
        for v in reversed(st.removed):
            _clone_beside(host, w, st.anchors, v)
    return host.drawing()


# bridges and equivalence ---------------------------------------------------------------

def _bridge(g: Graph, comp, att) -> MarkedGraph:
    comp = set(comp)
    es = [e for e in g.edges
          if (e[0] in comp or e[1] in comp) and (e[0] in comp or e[0] in att)
          and (e[1] in comp or e[1] in att)]
    roles = ("u", "v")
    marks = {roles[i]: a for i, a in enumerate(sorted(att))}
    return MarkedGraph(Graph(tuple(sorted(comp | set(att))), tuple(sorted(es))), marks)


def _gadget(c: MarkedGraph, size: int) -> nx.Graph:
    """Bridge plus a pendant path of length (i+1)(size+1) at the i-th attachment role."""
    att = set(c.marks.values())
    h = nx.Graph()
    h.add_nodes_from(("x", v) for v in c.graph.vertices)
    h.add_edges_from((("x", a), ("x", b)) for a, b in c.graph.edges
                     if not (a in att and b in att))
    for i, role in enumerate(sorted(c.marks)):
        prev = ("x", c.marks[role])
        for j in range((i + 1) * (size + 1)):
            node = ("p", role, j)
            h.add_edge(prev, node)
            prev = node
    return h


def _check_marks(c: MarkedGraph):
    if len(c.marks) > 2:
        raise TooManyAttachments(f"{len(c.marks)} attachments, at most 2 supported")


def component_equivalent(c1: MarkedGraph, c2: MarkedGraph) -> bool:
    """Isomorphism of two bridge graphs that maps each attachment to the one with its role."""
    _check_marks(c1)
    _check_marks(c2)
    if set(c1.marks) != set(c2.marks):
        raise InvalidInput("bridges have different attachment roles")
    if c1.graph.n != c2.graph.n:
        return False
    size = c1.graph.n
    return nx.is_isomorphic(_gadget(c1, size), _gadget(c2, size))


def _class_key(c: MarkedGraph):
    return c.graph.n, nx.weisfeiler_lehman_graph_hash(_gadget(c, c.graph.n))


def _classes(bridges: list) -> list[list[int]]:
    """Partition bridge indices into equivalence classes, keeping input order inside each."""
    buckets: dict = {}
    out: list[list[int]] = []
    for i, c in enumerate(bridges):
        reps = buckets.setdefault(_class_key(c), [])
        for cls in reps:
            if component_equivalent(bridges[cls[0]], c):
                cls.append(i)
                break
        else:
            cls = [i]
            reps.append(cls)
            out.append(cls)
    return out


# modulator -------------------------------------------------------------------------------

def modulator_caps(s: int, b: int, k: int) -> tuple[int, int]:
    t = (5 * b + 1) * b * k
    return (min((4 * s + 4) * b, (4 * t + 4) * b),
            min((8 * s + 8) * (b + 1), (8 * t + 8) * (b + 1)))


def _reduce_attached(g: Graph, comps: list, mod: set, cap1: int, cap2: int, trace) -> set:
    """Apply the one/two-attachment rules to ``comps`` (lists of vertices) around ``mod``."""
    groups: dict = {}
    for comp in comps:
        att = tuple(sorted({w for v in comp for w in g.neighbors(v) if w in mod}))
        if 1 <= len(att) <= 2:
            groups.setdefault(att, []).append(tuple(sorted(comp)))
    drop = set()
    for att in sorted(groups):
        members = sorted(groups[att])
        cap = cap1 if len(att) == 1 else cap2
        if len(members) <= cap:
            continue
        bridges = [_bridge(g, m, att) for m in members]
        for cls in _classes(bridges):
            if len(cls) <= cap:
                continue
            gone = [v for i in cls[cap:] for v in members[i]]
            trace.steps.append(RuleApplication(
                "one-attachment" if len(att) == 1 else "two-attachment", att,
                *_removed_part(g, gone), tuple(members[i] for i in cls[:cap])))
            drop.update(gone)
    return drop


def modulator_kernelize(g: Graph, m, s: int):
    mod = m if isinstance(m, Modulator) else Modulator(frozenset(m[0]), m[1])
    mod.validate(g)
    cap1, cap2 = modulator_caps(s, mod.b, mod.k)
    trace = ReductionTrace()
    comps = components(g.without(mod.vertices))
    drop = _reduce_attached(g, comps, set(mod.vertices), cap1, cap2, trace)
    return g.without(drop), trace


def modulator_greedy(g: Graph, b: int) -> Modulator:
    """Add a highest-degree vertex of an oversized component until every component fits."""
    if b < 1:
        raise InvalidModulator("component bound b must be at least 1")
    mod: set = set()
    while True:
        big = [c for c in components(g.without(mod)) if len(c) > b]
        if not big:
            return Modulator(frozenset(mod), b)
        comp = min(big, key=lambda c: min(c))
        sub = g.subgraph(set(comp))
        mod.add(min(comp, key=lambda v: (-sub.degree(v), v)))


# treedepth ----------------------------------------------------------------------------------

def treedepth_kernelize(g: Graph, t: TreedepthDecomposition, s: int):
    t.validate(g)
    td = t.height() if t.td is None else t.td
    trace = ReductionTrace()
    if g.n and threshold_check(("treedepth", td), s) == YES:
        keep = min(g.vertices)
        trace.steps.append(RuleApplication("threshold", (), *_removed_part(g, set(g.vertices) - {keep})))
        trace.tree = TreedepthDecomposition({keep: None}, td)
        return g.subgraph([keep]), trace
    parent = dict(t.parent)
    kids = TreedepthDecomposition(parent).children()
    post = []
    stack = [(r, False) for r in sorted((v for v, p in parent.items() if p is None), reverse=True)]
    while stack:
        v, done = stack.pop()
        if done:
            post.append(v)
            continue
        stack.append((v, True))
        stack.extend((c, False) for c in reversed(kids[v]))
    cur = g
    for v in post:
        if v not in cur:
            continue
        tree = TreedepthDecomposition(parent)
        below = _descendants(parent, v)
        if not below:
            continue
        rpath = set(tree.root_path(v))
        inside = [c for c in components(cur.without(rpath)) if set(c) <= below]
        if not inside:
            continue
        b = max(len(c) for c in inside)
        cap1, cap2 = (4 * s + 4) * b, (8 * s + 8) * (b + 1)
        drop = _reduce_attached(cur, inside, rpath, cap1, cap2, trace)
        if drop:
            cur = cur.without(drop)
            parent = _reparent(parent, drop)
    trace.tree = TreedepthDecomposition(parent, t.td)
    return cur, trace


def _descendants(parent: Mapping, v) -> set:
    kids: dict = {}
    for x, p in parent.items():
        kids.setdefault(p, []).append(x)
    out = set()
    stack = list(kids.get(v, ()))
    while stack:
        x = stack.pop()
        out.add(x)
        stack.extend(kids.get(x, ()))
    return out


def _reparent(parent: Mapping, drop: set) -> dict:
    """Delete ``drop`` and hang each orphan on its lowest surviving ancestor."""
    out = {}
    for v, p in parent.items():
        if v in drop:
            continue
        while p is not None and p in drop:
            p = parent[p]
        out[v] = p
    return out


# parameter heuristics -------------------------------------------------------------------------

def vertex_cover_2approx(g: Graph) -> VertexCover:
    """Both ends of a greedy maximal matching."""
    cover: set = set()
    for u, v in g.edges:
        if u not in cover and v not in cover:
            cover.update((u, v))
    return VertexCover(frozenset(cover))


def treedepth_greedy(g: Graph) -> TreedepthDecomposition:
    """Root every component at a highest-degree vertex and recurse on the rest."""
    parent: dict = {}
    work = [(tuple(c), None) for c in components(g)]
    while work:
        comp, up = work.pop()
        sub = g.subgraph(comp)
        r = min(comp, key=lambda v: (-sub.degree(v), v))
        parent[r] = up
        for c in components(sub.without([r])):
            work.append((tuple(c), r))
    dec = TreedepthDecomposition(parent)
    return TreedepthDecomposition(parent, dec.height())


def many_attachment_count(g: Graph, X: Iterable) -> int:
    """Vertices outside X with at least three neighbors in X (at most 2|X| when planar)."""
    X = set(X)
    return sum(1 for v in g.vertices
               if v not in X and sum(1 for w in g.neighbors(v) if w in X) >= 3)


# large-span witness for the vertex-cover case -------------------------------------------------

def trim(g: Graph, cover) -> tuple[Graph, dict, dict]:
    """Drop cover-free leaves and smooth cover-free degree-2 vertices.

    Returns (trimmed graph, leaves by anchor, smoothed vertices by anchor pair).
    """
    deg1, deg2 = _cover_groups(g, cover)
    gone = {v for vs in deg1.values() for v in vs} | {v for vs in deg2.values() for v in vs}
    extra = list(deg2)
    return g.without(gone).with_edges(extra) if extra else g.without(gone), deg1, deg2


def _double(p: PolylineDrawing) -> PolylineDrawing:
    pos = {v: (x, 2 * y) for v, (x, y) in p.positions.items()}
    es = tuple((a, b, tuple((x, 2 * y) for x, y in bends)) for a, b, bends in p.edges)
    return PolylineDrawing(pos, es)


def _adjacent_items(host: _Orders) -> dict:
    nb: dict = {}
    for (a, b), chain in host.chains.items():
        seq = [a, *chain, b]
        for x, y in zip(seq, seq[1:]):
            nb.setdefault(x, []).append(y)
            nb.setdefault(y, []).append(x)
    return nb


def _insert_pendant(host: _Orders, c, v) -> bool:
    """Put v on a level next to c with a straight edge; False when no gap is free."""
    nb = _adjacent_items(host)
    y = host.level[c]
    here = host.row(y)
    ic = here.index(c)
    pos_here = {it: i for i, it in enumerate(here)}
    for ty in (y + 1, y - 1):
        row = host.row(ty)
        ranges = []
        for it in row:
            idx = [pos_here[w] for w in nb.get(it, ()) if w in pos_here]
            ranges.append((min(idx), max(idx)) if idx else None)
        horiz = {frozenset((a, b)) for (a, b), ch in host.chains.items()
                 if not ch and host.level.get(a) == ty and host.level.get(b) == ty}
        for gap in range(len(row) + 1):
            left_ok = all(r is None or r[1] <= ic for r in ranges[:gap])
            right_ok = all(r is None or r[0] >= ic for r in ranges[gap:])
            split = 0 < gap < len(row) and frozenset((row[gap - 1], row[gap])) in horiz
            if left_ok and right_ok and not split:
                host.set_row(ty, row[:gap] + [v] + row[gap:])
                host.vertices.add(v)
                host.chains[(c, v)] = []
                return True
    return False


def draw_large_s_witness(g: Graph, C) -> PolylineDrawing:
    """Drawing of span at most 6k built from a drawing of the trimmed graph."""
    from .solver import _combine
    from .stdraw import st_leveled_drawing

    cov = C if isinstance(C, VertexCover) else VertexCover(frozenset(C))
    cov.validate(g)
    t, deg1, deg2 = trim(g, cov.cover)
    parts = []
    for comp in components(t):
        sub = t.subgraph(comp)
        pg = embed(sub)
        low = min(comp)
        parts.append(_double(st_leveled_drawing(pg, low)))
    base = _combine(parts) if parts else PolylineDrawing({}, ())
    host = _Orders(base)
    for cd in sorted(deg2):
        c, d = cd
        chain = host.chain(c, d)
        mid = [it for it in chain if host.level[it] % 2]
        ref = mid[0]
        k = chain.index(ref)
        for v in reversed(sorted(deg2[cd])):
            host.vertices.add(v)
            host.insert_after(ref, [v])
            low_part = [Virtual(c, v, i) for i in range(k)]
            high_part = [Virtual(v, d, i) for i in range(len(chain) - k - 1)]
            for src, it in zip(chain[:k], low_part):
                host.insert_after(src, [it])
            for src, it in zip(chain[k + 1:], high_part):
                host.insert_after(src, [it])
            host.chains[(c, v)] = low_part
            host.chains[(v, d)] = high_part
        if not g.has_edge(c, d):
            key = (c, d) if (c, d) in host.chains else (d, c)
            for it in host.chains.pop(key):
                yy = host.level.pop(it)
                host.set_row(yy, [x for x in host.row(yy) if x != it])
                host.nxt.pop(it, None)
    for c in sorted(deg1):
        for v in sorted(deg1[c]):
            if not _insert_pendant(host, c, v):
                raise InvalidInput(f"no free gap next to {c} for the leaf {v}")
    return host.drawing()
