"""Gadgets, reductions, lower-bound families and seeded random instances."""
from __future__ import annotations

import math
import random
from itertools import count

from .errors import BadParams, GenerationFailed, NotBipartite, NotPlanar, TooSmall
from .graph import (
    Graph,
    MarkedGraph,
    RotationBuilder,
    graph_from_edges,
    is_connected,
    is_planar,
    make_plane_graph,
    two_coloring,
)


def rotation_from_coordinates(g: Graph, coords) -> dict:
    """ccw rotation of a straight-line drawing."""
    rot = {}
    for v in g.vertices:
        x0, y0 = coords[v]
        rot[v] = tuple(sorted(g.neighbors(v),
                              key=lambda w: math.atan2(coords[w][1] - y0, coords[w][0] - x0)))
    return rot


# ------------------------------------------------------------------ hardness gadgets

def gen_k_plus(alpha: int) -> MarkedGraph:
    if alpha < 1:
        raise BadParams("alpha must be at least 1")
    edges = [(0, 1)] + [(e, m) for m in range(2, alpha + 2) for e in (0, 1)]
    return MarkedGraph(graph_from_edges(edges), {"top": 0, "bottom": 1})


def w_vertex_count(i: int, h: int) -> int:
    if h == 1:
        return 2 * i + 3
    return 2 * i + 3 + (2 * i + 1) * (w_vertex_count(i, h - 1) - 2)


def _w_edges(i, h, north, south, fresh, edges):
    middles = [next(fresh) for _ in range(2 * i + 1)]
    edges.append((north, south))
    for x in middles:
        edges.append((south, x))
        if h == 1:
            edges.append((north, x))
        else:
            _w_edges(i, h - 1, north, x, fresh, edges)


def gen_W(i: int, h: int) -> MarkedGraph:
    if i < 2 or not 1 <= h < i:
        raise BadParams("need i >= 2 and 1 <= h < i")
    edges = []
    _w_edges(i, h, 0, 1, count(2), edges)
    return MarkedGraph(graph_from_edges(edges), {"north-pole": 0, "south-pole": 1})


def reduce_instance(h: Graph, s: int) -> Graph:
    """Replace every edge of a bipartite planar graph by the span-forcing gadget for ``s``."""
    if s < 1:
        raise BadParams("s must be positive")
    color = two_coloring(h)
    if color is None:
        raise NotBipartite("input graph is not bipartite")
    if not is_planar(h):
        raise NotPlanar("input graph is not planar")
    if not is_connected(h):
        raise BadParams("input graph must be connected")
    fresh = count(max(h.vertices, default=-1) + 1)
    north_class = color[h.vertices[0]] if h.vertices else 0
    edges = []
    for u, v in h.edges:
        if s == 1:
            for _ in range(4):
                x = next(fresh)
                edges += [(u, x), (v, x)]
        else:
            north, south = (u, v) if color[u] == north_class else (v, u)
            _w_edges(s, s - 1, north, south, fresh, edges)
    return graph_from_edges(edges, vertices=h.vertices)


# ------------------------------------------------------------------ bare families

def gen_stacked_cycles(k: int) -> Graph:
    if k < 1:
        raise BadParams("k must be at least 1")
    z = 0
    u = [1 + 2 * i for i in range(k)]
    v = [2 + 2 * i for i in range(k)]
    edges = []
    for i in range(k):
        edges += [(u[i], v[i]), (u[i], z), (v[i], z)]
        if i + 1 < k:
            edges += [(u[i], u[i + 1]), (v[i], v[i + 1])]
    return graph_from_edges(edges)


def nested_triangles_plane(r: int):
    if r < 2:
        raise BadParams("r must be at least 2")
    edges, coords = [], {}
    for i in range(r):
        tri = [3 * i, 3 * i + 1, 3 * i + 2]
        for j, v in enumerate(tri):
            ang = math.pi / 2 + 2 * math.pi * j / 3
            coords[v] = ((r - i) * math.cos(ang), (r - i) * math.sin(ang))
        edges += [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])]
        if i + 1 < r:
            edges += [(3 * i + j, 3 * i + 3 + j) for j in range(3)]
    g = graph_from_edges(edges)
    return make_plane_graph(g, rotation_from_coordinates(g, coords), outer_face=(0, 2, 1))


def gen_nested_triangles(r: int) -> Graph:
    return nested_triangles_plane(r).graph


# ------------------------------------------------------------------ cycle-tree families

def _outer(rb: RotationBuilder, verts):
    want = set(verts)
    for f in rb.faces():
        if set(f) == want and len(f) == len(verts):
            return f
    raise AssertionError("outer face not found")  # pragma: no cover


def _k4_core():
    # v2 in the centre of the triangle v1 v3 v4 (ids 1..4 = v1..v4)
    coords = {1: (0.0, 10.0), 3: (-9.0, -6.0), 4: (9.0, -6.0), 2: (0.0, 0.0)}
    g = graph_from_edges([(a, b) for a in range(1, 5) for b in range(a + 1, 5)])
    return RotationBuilder(rotation_from_coordinates(g, coords))


def _face_with(rb, verts):
    want = set(verts)
    for f in rb.faces():
        if len(f) == len(verts) and set(f) == want:
            return f
    raise AssertionError(f"no face {verts}")  # pragma: no cover


def _strip(rb, a, b, c, ids):
    """Path ids[0..] stacked in face (a, b, c): first vertex sees a, b, c; later ones a, prev, c."""
    prev = b
    for x in ids:
        f = _face_with(rb, (a, prev, c))
        rb.add_vertex_in_face(f, x, [w for w in f])
        prev = x


def gen_3conn_lower(n: int):
    from .cycletree import recognize_cycle_tree

    if n < 43:
        raise TooSmall("the construction needs n >= 43")
    k = n - 30
    rb = _k4_core()
    ids = count(5)
    _strip(rb, 1, 2, 3, [next(ids) for _ in range(13)])
    _strip(rb, 1, 2, 4, [next(ids) for _ in range(13)])
    _strip(rb, 3, 2, 4, [next(ids) for _ in range(k)])
    pg = rb.plane_graph(_outer(rb, (1, 3, 4)))
    return recognize_cycle_tree(pg)


def gen_cycle_tree_lower(n: int):
    from .cycletree import recognize_cycle_tree

    if n < 10:
        raise TooSmall("the construction needs n >= 10")
    k = 1
    while 2 * (k + 1) - 1 <= (n - 4) / 2:
        k = 2 * (k + 1) - 1
    rb = _k4_core()
    ids = count(5)
    roots = []
    for face in ((1, 2, 3), (1, 2, 4)):
        tids = [next(ids) for _ in range(k)]
        f = _face_with(rb, face)
        rb.add_vertex_in_face(f, tids[0], list(f))
        children = {tids[i]: [tids[j] for j in (2 * i + 1, 2 * i + 2) if j < k] for i in range(k)}
        # children of the root go into the angle just before v1
        stack = [(tids[0], 1)]
        while stack:
            v, ref = stack.pop()
            for c in children.get(v, ()):
                rb.rot[c] = [v]
                rb.insert_before(v, c, ref)
                stack.append((c, v))
        roots.append(tids[0])
    extra = n - 2 * k - 4
    r2 = roots[1]
    for _ in range(extra):
        x = next(ids)
        rb.rot[x] = [r2]
        rb.insert_before(r2, x, 1)
    pg = rb.plane_graph(_outer(rb, (1, 3, 4)))
    return recognize_cycle_tree(pg)


def _random_tree(m, rng):
    parent = {0: None}
    for v in range(1, m):
        parent[v] = rng.randrange(v)
    return parent


def gen_random_cycle_tree(n: int, three_connected: bool = True, seed: int = 0, retries: int = 200):
    """Random cycle-tree with an explicit embedding.

    A random tree is embedded, its boundary walk is cut into arcs and every arc is covered
    by one new external vertex, which gives an internally triangulated 3-connected
    cycle-tree. In general mode some external-internal edges are then deleted and a few
    triangulated polygons are glued onto outer edges.
    """
    from .cycletree import recognize_cycle_tree

    if n < 4:
        raise TooSmall("n must be at least 4")
    rng = random.Random(seed)
    for _ in range(retries):
        lo = math.ceil((n + 2) / 3)
        options = [1] + list(range(lo, max(lo, n // 2) + 1))
        m = rng.choice([x for x in options if n - x >= 3] or [1])
        ears = 0
        if not three_connected and n >= 12:
            ears = rng.randint(0, n // 6)
            m = min(m, max(1, math.ceil((n - ears + 2) / 3)) + rng.randint(0, 2))
        k = n - m - ears
        if m == 1:
            if k < 3:
                continue
            res = _wheel(k)
            res = (res[0], [res[1][1], res[1][0]] + res[1][2:])
        else:
            res = _wrap_tree(_random_tree(m, rng), k, rng)
            if res is None:
                continue
        rb, ext = res
        dart = (ext[0], ext[1])
        if ears:
            dart = _add_ears(rb, dart, ears, rng, next_id=m + k)
        if not three_connected:
            _thin(rb, set(range(m)), rng)
        g = rb.graph()
        if g.n != n:
            continue
        pg = rb.plane_graph(face_of_dart(rb.rot, *dart))
        ct = recognize_cycle_tree(pg)
        if three_connected and not ct.three_connected:
            continue
        return ct
    raise GenerationFailed("retry budget exhausted")


def _wheel(k):
    coords = {0: (0.0, 0.0)}
    for j in range(k):
        a = 2 * math.pi * j / k
        coords[1 + j] = (math.cos(a), math.sin(a))
    edges = [(0, 1 + j) for j in range(k)] + [(1 + j, 1 + (j + 1) % k) for j in range(k)]
    g = graph_from_edges(edges)
    return RotationBuilder(rotation_from_coordinates(g, coords)), list(range(1, k + 1))


def _wrap_tree(parent, k, rng):
    m = len(parent)
    kids = {v: [] for v in parent}
    for v, p in parent.items():
        if p is not None:
            kids[p].append(v)
    rot = {}
    for v in parent:
        ns = list(kids[v])
        rng.shuffle(ns)
        if parent[v] is not None:
            ns.insert(rng.randint(0, len(ns)), parent[v])
        rot[v] = ns
    # boundary walk of the tree: corners (vertex, index of the dart leaving it)
    walk = []
    a, b = 0, rot[0][0]
    start = (a, b)
    while True:
        walk.append(a)
        ns = rot[b]
        c = ns[(ns.index(a) - 1) % len(ns)]
        a, b = b, c
        if (a, b) == start:
            break
    L = len(walk)
    leaves = {v for v in parent if len(rot[v]) == 1}
    bps = list(range(L))
    if k > L or k < 3:
        return None

    def arc(i, j):
        out = []
        t = i
        while True:
            out.append(walk[t])
            if t == j:
                return out
            t = (t + 1) % L

    cur = set(bps)
    order = list(range(L))
    rng.shuffle(order)
    for t in order:
        if len(cur) == k:
            break
        if walk[t] in leaves:
            continue
        srt = sorted(cur)
        i = srt.index(t)
        prv, nxt = srt[i - 1], srt[(i + 1) % len(srt)]
        seg = arc(prv, nxt)
        if len(seg) == len(set(seg)):
            cur.discard(t)
    if len(cur) != k:
        return None
    srt = sorted(cur)
    rb = RotationBuilder({v: list(ns) for v, ns in rot.items()})
    ext = list(range(m, m + k))
    # external vertex j covers the corners srt[j] .. srt[j+1] of the boundary walk; the
    # walk has the face on its left, so new neighbours of a tree vertex go into the angle
    # just before the vertex the walk arrives from
    for j in range(k):
        e = ext[j]
        seq = []
        t = srt[j]
        while True:
            seq.append(t)
            if t == srt[(j + 1) % k]:
                break
            t = (t + 1) % L
        for t in seq[1:-1]:
            rb.insert_before(walk[t], e, walk[(t - 1) % L])
        rb.rot[e] = [ext[(j - 1) % k]] + [walk[t] for t in seq] + [ext[(j + 1) % k]]
    for j in range(k):
        # a shared corner sees the later arc first when turning ccw
        t = srt[j]
        v = walk[t]
        i = rb.rot[v].index(walk[(t - 1) % L])
        rb.rot[v][i:i] = [ext[j], ext[(j - 1) % k]]
    return rb, ext


def face_of_dart(rot, a, b):
    walk = []
    x, y = a, b
    while True:
        walk.append(x)
        ns = rot[y]
        z = ns[(ns.index(x) - 1) % len(ns)]
        x, y = y, z
        if (x, y) == (a, b):
            return tuple(walk)


def _add_ears(rb, dart, count_, rng, next_id):
    """Glue triangles onto random outer edges; returns a dart of the new outer face."""
    vid = next_id
    for _ in range(count_):
        outer = face_of_dart(rb.rot, *dart)
        k = len(outer)
        i = rng.randrange(k)
        a, b = outer[i], outer[(i + 1) % k]
        rb.add_vertex_in_face(outer, vid, [a, b])
        if (a, b) == dart:
            dart = (a, vid)
        vid += 1
    return dart


def _thin(rb, internal, rng):
    """Delete about a third of the external-internal edges, keeping at least one."""
    cand = sorted({(min(u, w), max(u, w)) for u in rb.rot for w in rb.rot[u]
                   if (u in internal) != (w in internal)})
    rng.shuffle(cand)
    for u, w in cand[: len(cand) // 3]:
        if len(cand) < 2:
            break
        a, b = (u, w) if u in internal else (w, u)
        if len(rb.rot[b]) <= 2:
            continue
        rb.rot[a].remove(b)
        rb.rot[b].remove(a)


def gen_random_planar(n: int, seed: int = 0, keep: float = 0.7) -> Graph:
    if n < 1:
        raise BadParams("n must be positive")
    rng = random.Random(seed)
    if n <= 3:
        return graph_from_edges([(i, i + 1) for i in range(n - 1)], vertices=range(n))
    rb = RotationBuilder({0: [1, 2], 1: [2, 0], 2: [0, 1]})
    for v in range(3, n):
        faces = rb.faces()
        f = faces[rng.randrange(len(faces))]
        rb.add_vertex_in_face(f, v, list(f))
    g = rb.graph()
    # delete edges at random but keep a spanning tree
    order = list(g.edges)
    rng.shuffle(order)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree, rest = [], []
    for u, v in order:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.append((u, v))
        else:
            rest.append((u, v))
    kept = tree + [e for e in rest if rng.random() < keep]
    return graph_from_edges(kept, vertices=range(n))
