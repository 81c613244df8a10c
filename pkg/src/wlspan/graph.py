"""Simple graphs, rotation systems and the structural predicates used everywhere else."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    DanglingEndpoint,
    InvalidInput,
    NonPlanarRotation,
    NotPlanar,
    ParallelEdge,
    SelfLoop,
)


def _edge(u, v):
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: tuple
    _adj: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "_adj", {v: tuple(sorted(ns)) for v, ns in adj.items()})

    @property
    def n(self):
        return len(self.vertices)

    @property
    def m(self):
        return len(self.edges)

    def neighbors(self, v):
        return self._adj[v]

    def degree(self, v):
        return len(self._adj[v])

    def has_edge(self, u, v):
        return u in self._adj and v in self._adj[u]

    def __contains__(self, v):
        return v in self._adj

    def subgraph(self, keep: Iterable) -> "Graph":
        keep = set(keep)
        return Graph(
            tuple(v for v in self.vertices if v in keep),
            tuple(e for e in self.edges if e[0] in keep and e[1] in keep),
        )

    def without(self, drop: Iterable) -> "Graph":
        drop = set(drop)
        return self.subgraph(v for v in self.vertices if v not in drop)

    def with_edges(self, extra: Iterable) -> "Graph":
        es = set(self.edges)
        vs = set(self.vertices)
        for u, v in extra:
            if u == v:
                raise SelfLoop(f"self-loop at {u}")
            vs.update((u, v))
            es.add(_edge(u, v))
        return Graph(tuple(sorted(vs)), tuple(sorted(es)))

    def without_edges(self, drop: Iterable) -> "Graph":
        drop = {_edge(u, v) for u, v in drop}
        return Graph(self.vertices, tuple(e for e in self.edges if e not in drop))


def build_graph(vertices: Iterable, edges: Iterable) -> Graph:
    vs = list(vertices)
    vset = set(vs)
    if len(vset) != len(vs):
        raise InvalidInput("duplicate vertex id")
    seen = set()
    for u, v in edges:
        if u == v:
            raise SelfLoop(f"self-loop at {u}", vertex=u)
        if u not in vset or v not in vset:
            raise DanglingEndpoint(f"edge ({u},{v}) uses an undeclared vertex", edge=(u, v))
        e = _edge(u, v)
        if e in seen:
            raise ParallelEdge(f"edge ({u},{v}) given twice", edge=e)
        seen.add(e)
    return Graph(tuple(sorted(vset)), tuple(sorted(seen)))


def graph_from_edges(edges: Iterable, vertices: Iterable = ()) -> Graph:
    """Lenient constructor: vertices inferred, duplicates merged."""
    vs = set(vertices)
    es = set()
    for u, v in edges:
        if u == v:
            raise SelfLoop(f"self-loop at {u}", vertex=u)
        vs.update((u, v))
        es.add(_edge(u, v))
    return Graph(tuple(sorted(vs)), tuple(sorted(es)))


@dataclass(frozen=True)
class MarkedGraph:
    graph: Graph
    marks: Mapping

    def __post_init__(self):
        for role, v in self.marks.items():
            if v not in self.graph:
                raise DanglingEndpoint(f"mark {role} -> {v} is not a vertex")


# connectivity ---------------------------------------------------------------

def components(g: Graph) -> list[list]:
    seen = set()
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    dq.append(y)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def bfs_order(g: Graph, root=None) -> list:
    order = []
    seen = set()
    starts = [root] if root is not None else []
    starts += list(g.vertices)
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        dq = deque([s])
        while dq:
            x = dq.popleft()
            order.append(x)
            for y in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    dq.append(y)
    return order


def articulation_points(g: Graph, skip=None) -> set:
    """Cut vertices of g, or of g minus ``skip`` when given (without copying the graph)."""
    disc, low, cut = {}, {}, set()
    if skip is not None:
        disc[skip] = low[skip] = -1
    t = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = t
        t += 1
        kids = 0
        stack = [(root, None, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            pushed = False
            for w in it:
                if w == parent or w == skip:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = t
                    t += 1
                    if v == root:
                        kids += 1
                    stack.append((w, v, iter(g.neighbors(w))))
                    pushed = True
                    break
            if pushed:
                continue
            stack.pop()
            if parent is not None:
                low[parent] = min(low[parent], low[v])
                if parent != root and low[v] >= disc[parent]:
                    cut.add(parent)
        if kids > 1:
            cut.add(root)
    return cut


def is_k_connected(g: Graph, k: int) -> bool:
    if k < 1:
        return True
    if g.n < k + 1 or not is_connected(g):
        return False
    if k == 1:
        return True
    if k == 2:
        return not articulation_points(g)
    if k == 3:
        if articulation_points(g):
            return False
        return all(not articulation_points(g, skip=v) and _connected_without(g, v)
                   for v in g.vertices)
    return is_k_connected_exhaustive(g, k)


def _connected_without(g: Graph, skip) -> bool:
    start = next(v for v in g.vertices if v != skip)
    seen = {start, skip}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.neighbors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.n


def is_k_connected_exhaustive(g: Graph, k: int) -> bool:
    """Remove every (k-1)-subset and test connectivity. Desk scale only."""
    from itertools import combinations

    if g.n < k + 1 or not is_connected(g):
        return False
    for cut in combinations(g.vertices, k - 1):
        if not is_connected(g.without(cut)):
            return False
    return True


def two_coloring(g: Graph):
    """Return {v: 0|1} or None when g is not bipartite."""
    color = {}
    for s in g.vertices:
        if s in color:
            continue
        color[s] = 0
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for y in g.neighbors(x):
                if y not in color:
                    color[y] = 1 - color[x]
                    dq.append(y)
                elif color[y] == color[x]:
                    return None
    return color


def smooth_degree_two(g: Graph, protected: Iterable = ()) -> Graph:
    protected = set(protected)
    adj = {v: set(g.neighbors(v)) for v in g.vertices}
    todo = sorted(v for v in adj if len(adj[v]) == 2 and v not in protected)
    while todo:
        v = todo.pop(0)
        if v not in adj or len(adj[v]) != 2:
            continue
        a, b = sorted(adj[v])
        del adj[v]
        adj[a].discard(v)
        adj[b].discard(v)
        adj[a].add(b)
        adj[b].add(a)
        for w in (a, b):
            if len(adj[w]) == 2 and w not in protected and w not in todo:
                todo.append(w)
        todo.sort()
    return graph_from_edges(
        ((u, w) for u in adj for w in adj[u] if u < w), vertices=adj.keys()
    )


# rotation systems ------------------------------------------------------------

def face_key(walk) -> tuple:
    walk = tuple(walk)
    if not walk:
        return walk
    return min(walk[i:] + walk[:i] for i in range(len(walk)))


def trace_faces_raw(rotation: Mapping) -> list[tuple]:
    """Face walks of a ccw rotation system; each face lies to the left of its darts."""
    pos = {v: {w: i for i, w in enumerate(ns)} for v, ns in rotation.items()}
    used = set()
    faces = []
    for u in sorted(rotation):
        for v in rotation[u]:
            if (u, v) in used:
                continue
            walk = []
            a, b = u, v
            while (a, b) not in used:
                used.add((a, b))
                walk.append(a)
                ns = rotation[b]
                c = ns[(pos[b][a] - 1) % len(ns)]
                a, b = b, c
            faces.append(tuple(walk))
    return faces


@dataclass(frozen=True)
class PlaneGraph:
    graph: Graph
    rotation: Mapping
    outer_face: tuple

    def faces(self) -> list[tuple]:
        return trace_faces(self)

    def outer_vertices(self) -> list:
        return list(dict.fromkeys(self.outer_face))


def _check_rotation(g: Graph, rotation: Mapping):
    for v in g.vertices:
        ns = list(rotation.get(v, ()))
        if sorted(ns) != list(g.neighbors(v)):
            raise InvalidInput(f"rotation at {v} does not list its neighbours", vertex=v)


def _euler_ok(g: Graph, faces) -> bool:
    comp_of = {}
    for i, c in enumerate(components(g)):
        for v in c:
            comp_of[v] = i
    fcount = {}
    for f in faces:
        c = comp_of[f[0]]
        fcount[c] = fcount.get(c, 0) + 1
    ecount, vcount = {}, {}
    for u, _ in g.edges:
        ecount[comp_of[u]] = ecount.get(comp_of[u], 0) + 1
    for v in g.vertices:
        vcount[comp_of[v]] = vcount.get(comp_of[v], 0) + 1
    for c, e in ecount.items():
        if vcount[c] - e + fcount.get(c, 0) != 2:
            return False
    return True


def trace_faces(pg: PlaneGraph) -> list[tuple]:
    faces = trace_faces_raw(pg.rotation)
    if not _euler_ok(pg.graph, faces):
        raise NonPlanarRotation("face count violates Euler's formula")
    return faces


def make_plane_graph(g: Graph, rotation: Mapping, outer_face=None) -> PlaneGraph:
    _check_rotation(g, rotation)
    rot = {v: tuple(rotation.get(v, ())) for v in g.vertices}
    faces = trace_faces_raw(rot)
    if not _euler_ok(g, faces):
        raise NonPlanarRotation("face count violates Euler's formula")
    keys = {face_key(f): f for f in faces}
    if outer_face is None:
        outer = max(faces, key=lambda f: (len(f), face_key(f))) if faces else ()
    else:
        k = face_key(outer_face)
        if k not in keys:
            # accept the same cycle given in the opposite direction
            rk = face_key(tuple(reversed(tuple(outer_face))))
            if rk in keys:
                k = rk
            else:
                raise InvalidInput("outer_face is not a face of the rotation system")
        outer = keys[k]
    return PlaneGraph(g, rot, face_key(outer))


def embed(g: Graph) -> PlaneGraph:
    """Planar embedding of a bare graph via networkx; raises NotPlanar."""
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    ok, emb = nx.check_planarity(G)
    if not ok:
        raise NotPlanar("graph is not planar")
    rot = {v: tuple(reversed(list(emb.neighbors_cw_order(v)))) for v in g.vertices}
    return make_plane_graph(g, rot)


def is_planar(g: Graph) -> bool:
    if g.n >= 3 and g.m > 3 * g.n - 6:
        return False
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    return nx.check_planarity(G)[0]


def is_planar_by_rotation_search(g: Graph, limit: int = 10) -> bool:
    """Exhaustive rotation-system search. Used as an independent check for tiny graphs."""
    from itertools import permutations, product

    if g.n > limit:
        raise InvalidInput("rotation search limited to tiny graphs")
    if g.n >= 3 and g.m > 3 * g.n - 6:
        return False
    choices = []
    for v in g.vertices:
        ns = g.neighbors(v)
        if len(ns) <= 2:
            choices.append([ns])
        else:
            first = ns[0]
            choices.append([(first,) + p for p in permutations(ns[1:])])
    for combo in product(*choices):
        rot = dict(zip(g.vertices, combo))
        if _euler_ok(g, trace_faces_raw(rot)):
            return True
    return False


def plane_is_3_connected(pg: PlaneGraph) -> bool:
    """3-connectivity read off the faces of a plane graph.

    The graph is 2-connected when every face is a simple cycle; it is then 3-connected
    exactly when any two faces share at most one vertex or one common edge.
    """
    g = pg.graph
    if g.n < 4 or not is_connected(g):
        return False
    faces = trace_faces(pg)
    fsets = []
    for f in faces:
        if len(set(f)) != len(f):
            return False
        fsets.append(set(f))
    darts = [{(f[i], f[(i + 1) % len(f)]) for i in range(len(f))} for f in faces]
    at = {v: [] for v in g.vertices}
    for i, f in enumerate(faces):
        for v in f:
            at[v].append(i)
    shared = {}
    for v, fs in at.items():
        for a in range(len(fs)):
            for b in range(a + 1, len(fs)):
                key = (fs[a], fs[b]) if fs[a] < fs[b] else (fs[b], fs[a])
                shared.setdefault(key, []).append(v)
    for (i, j), vs in shared.items():
        if len(vs) >= 3:
            return False
        if len(vs) == 2:
            x, y = vs
            on_i = (x, y) in darts[i] or (y, x) in darts[i]
            on_j = (x, y) in darts[j] or (y, x) in darts[j]
            if not (on_i and on_j):
                return False
    return True


class RotationBuilder:
    """Mutable ccw rotation system used by generators and augmentation code."""

    def __init__(self, rotation: Mapping | None = None):
        self.rot = {v: list(ns) for v, ns in (rotation or {}).items()}

    def add_vertex(self, v, ccw_neighbors=()):
        self.rot[v] = list(ccw_neighbors)

    def insert_before(self, v, new, ref):
        ns = self.rot[v]
        ns.insert(ns.index(ref), new)

    def insert_after(self, v, new, ref):
        ns = self.rot[v]
        ns.insert(ns.index(ref) + 1, new)

    def add_chord(self, face_walk, p, q):
        """Add edge p-q through the face whose ccw walk is ``face_walk``."""
        walk = list(face_walk)
        k = len(walk)
        ip, iq = walk.index(p), walk.index(q)
        self.insert_before(p, q, walk[(ip - 1) % k])
        self.insert_before(q, p, walk[(iq - 1) % k])

    def add_vertex_in_face(self, face_walk, x, attachments):
        """New vertex x inside a face, joined to ``attachments`` (listed in walk order)."""
        walk = list(face_walk)
        k = len(walk)
        self.rot[x] = list(attachments)
        for w in attachments:
            i = walk.index(w)
            self.insert_before(w, x, walk[(i - 1) % k])

    def graph(self) -> Graph:
        return graph_from_edges(
            ((u, w) for u, ns in self.rot.items() for w in ns), vertices=self.rot.keys()
        )

    def plane_graph(self, outer_face=None) -> PlaneGraph:
        return make_plane_graph(self.graph(), self.rot, outer_face)

    def faces(self):
        return trace_faces_raw({v: tuple(ns) for v, ns in self.rot.items()})


# json -------------------------------------------------------------------------

def graph_to_json(g, rotation=None, outer_face=None, marks=None, leveling=None) -> dict:
    if isinstance(g, PlaneGraph):
        rotation = g.rotation if rotation is None else rotation
        outer_face = g.outer_face if outer_face is None else outer_face
        g = g.graph
    if isinstance(g, MarkedGraph):
        marks = dict(g.marks) if marks is None else marks
        g = g.graph
    out = {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}
    if rotation is not None:
        out["rotation"] = {str(v): list(rotation[v]) for v in g.vertices}
    if outer_face is not None:
        out["outer_face"] = list(outer_face)
    if marks:
        out["marks"] = {k: v for k, v in marks.items()}
    if leveling is not None:
        out["leveling"] = {str(v): int(leveling[v]) for v in g.vertices}
    return out


def graph_from_json(doc) -> dict:
    """Parse the JSON schema; returns dict with graph, plane (or None), marks, leveling."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    g = build_graph(doc.get("vertices", []), [tuple(e) for e in doc.get("edges", [])])
    plane = None
    if "rotation" in doc:
        rot = {int(k): tuple(v) for k, v in doc["rotation"].items()}
        plane = make_plane_graph(g, rot, doc.get("outer_face"))
    marks = {k: int(v) for k, v in doc.get("marks", {}).items()}
    lev = None
    if "leveling" in doc:
        lev = {int(k): int(v) for k, v in doc["leveling"].items()}
    return {"graph": g, "plane": plane, "marks": marks, "leveling": lev}
