"""Leveled drawings from st-numberings: one vertex per level, lowest and highest prescribed."""
from __future__ import annotations

from .drawing import PolylineDrawing, Virtual, realize
from .errors import Disconnected, InvalidInput, NotCoFacial
from .graph import (
    PlaneGraph,
    RotationBuilder,
    articulation_points,
    components,
    graph_from_edges,
    is_connected,
    trace_faces_raw,
)


def _rot_graph(rot):
    return graph_from_edges(((u, w) for u, ns in rot.items() for w in ns), vertices=rot.keys())


def biconnect(rb: RotationBuilder) -> list:
    """Add edges inside faces until no cut vertex is left. Returns the added edges."""
    added = []
    while True:
        g = _rot_graph(rb.rot)
        cuts = articulation_points(g)
        if not cuts:
            return added
        c = min(cuts)
        comp = {}
        for i, part in enumerate(components(g.without([c]))):
            for v in part:
                comp[v] = i
        ns = rb.rot[c]
        for j in range(len(ns)):
            b, a = ns[j], ns[(j - 1) % len(ns)]
            if comp[a] != comp[b]:
                break
        else:  # pragma: no cover - c would not be a cut vertex
            raise AssertionError("cut vertex without a separating angle")
        # face walk ... b -> c -> a ...: close the angle at c with the chord a-b
        rb.insert_before(a, b, c)
        rb.insert_after(b, a, c)
        added.append((a, b))


def st_numbering(g, s, t) -> dict:
    """Even-Tarjan numbering of a biconnected graph containing the edge (s, t)."""
    pre, parent, low = {s: 0}, {s: None}, {}
    order = [s]
    low[s] = s
    # DFS with t as the first child of s
    first = [t] + [w for w in g.neighbors(s) if w != t]
    stack = [(s, iter(first))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            if w not in pre:
                pre[w] = len(order)
                order.append(w)
                parent[w] = v
                low[w] = w
                stack.append((w, iter(g.neighbors(w))))
                advanced = True
                break
            if w != parent[v] and pre[w] < pre[low[v]]:
                low[v] = w
        if advanced:
            continue
        stack.pop()
        p = parent[v]
        if p is not None and pre[low[v]] < pre[low[p]]:
            low[p] = low[v]
    nxt, prv = {s: t, t: None}, {s: None, t: s}
    sign = {s: -1}
    for v in order[2:]:
        p = parent[v]
        if sign[low[v]] == -1:
            # insert before p
            q = prv[p]
            prv[v], nxt[v] = q, p
            prv[p] = v
            if q is not None:
                nxt[q] = v
            sign[p] = 1
        else:
            q = nxt[p]
            prv[v], nxt[v] = p, q
            nxt[p] = v
            if q is not None:
                prv[q] = v
            sign[p] = -1
        sign.setdefault(v, 0)
    head = s
    while prv[head] is not None:
        head = prv[head]
    num = {}
    k = 1
    while head is not None:
        num[head] = k
        k += 1
        head = nxt[head]
    return num


def _check_bipolar(g, num, s, t):
    for v in g.vertices:
        if v in (s, t):
            continue
        lo = any(num[w] < num[v] for w in g.neighbors(v))
        hi = any(num[w] > num[v] for w in g.neighbors(v))
        if not (lo and hi):
            raise AssertionError(f"st-numbering broken at {v}")


def _add_edge_in_common_face(rb: RotationBuilder, s, t):
    faces = trace_faces_raw({v: tuple(ns) for v, ns in rb.rot.items()})
    for f in sorted(faces, key=lambda f: (len(f), f)):
        if s in f and t in f:
            i, j = f.index(s), f.index(t)
            k = len(f)
            rb.insert_before(s, t, f[(i - 1) % k])
            rb.insert_before(t, s, f[(j - 1) % k])
            return
    raise NotCoFacial(f"{s} and {t} share no face")


def st_leveled_drawing(pg: PlaneGraph, low, high=None) -> PolylineDrawing:
    g = pg.graph
    if low not in g or (high is not None and high not in g):
        raise InvalidInput("low/high must be vertices of the graph")
    if not is_connected(g):
        raise Disconnected("st-drawings need a connected graph")
    if g.n == 1:
        return realize({0: [low]}, {}, [low])
    rb = RotationBuilder(pg.rotation)
    if high is None:
        high = g.neighbors(low)[0]
    if high == low:
        raise InvalidInput("low and high must differ")
    original = set(g.edges)
    if not g.has_edge(low, high):
        _add_edge_in_common_face(rb, low, high)
    if len(rb.rot) >= 3:
        biconnect(rb)
    h = _rot_graph(rb.rot)
    num = st_numbering(h, low, high)
    _check_bipolar(h, num, low, high)
    rot = rb.rot

    def split(v):
        ns = rot[v]
        d = len(ns)
        ins = [num[w] < num[v] for w in ns]
        # rotate so that the incoming block comes first
        if all(ins):
            return None, []
        start = next((i for i in range(d) if ins[i] and not ins[(i - 1) % d]), None)
        if start is None:
            return [], list(ns)
        seq = ns[start:] + ns[:start]
        k = sum(ins)
        if not all(num[w] < num[v] for w in seq[:k]):
            raise AssertionError(f"incoming edges at {v} are not contiguous")
        return seq[:k], seq[k:]

    # outer angle at low: a face through the edge low-high, walk ... a -> low -> b ...
    faces = trace_faces_raw({v: tuple(ns) for v, ns in rot.items()})
    a = None
    for f in faces:
        k = len(f)
        for i in range(k):
            if f[i] == low and f[(i + 1) % k] == high:
                a = f[(i - 1) % k]
                break
        if a is not None:
            break
    ns = rot[low]
    ia = ns.index(a)
    ccw = ns[ia:] + ns[:ia]
    frontier = [(low, w) for w in reversed(ccw)]

    orders = {}
    chains = {e: [] for e in h.edges}
    key = {}
    for e in h.edges:
        key[(e[0], e[1])] = e
        key[(e[1], e[0])] = e
    byn = sorted(h.vertices, key=num.get)
    orders[0] = [low]
    for v in byn[1:]:
        lev = num[v] - 1
        incoming, outgoing = split(v)
        idx = [i for i, (x, y) in enumerate(frontier) if y == v]
        if not idx or idx != list(range(idx[0], idx[0] + len(idx))):
            raise AssertionError(f"incoming edges of {v} are not consecutive on the frontier")
        expect = [x for x, _ in frontier[idx[0]:idx[-1] + 1]]
        if incoming is None:
            i0 = rot[v].index(expect[0])
            incoming = rot[v][i0:] + rot[v][:i0]
        if expect != incoming:
            raise AssertionError(f"frontier order at {v} disagrees with the rotation")
        row = []
        for i, (x, y) in enumerate(frontier):
            if i == idx[0]:
                row.append(v)
            if y == v:
                continue
            e = key[(x, y)]
            it = Virtual(e[0], e[1], len(chains[e]))
            chains[e].append(it)
            row.append(it)
        orders[lev] = row
        frontier = frontier[:idx[0]] + [(v, w) for w in reversed(outgoing)] + frontier[idx[-1] + 1:]
    keep = {}
    for e, ch in chains.items():
        if e in original:
            u, w = e
            keep[e] = tuple(ch) if num[u] < num[w] else tuple(reversed(ch))
    drop = {it for e, ch in chains.items() if e not in original for it in ch}
    orders = {lev: [it for it in row if it not in drop] for lev, row in orders.items()}
    return realize(orders, keep, g.vertices)
