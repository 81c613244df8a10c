"""Levelings, polyline drawings, the two validity checkers and drawing transforms."""
from __future__ import annotations

import json
from math import lcm
from bisect import insort
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

from .errors import (
    CoincidentPoints,
    InconsistentSubdivision,
    InvalidInput,
    MissingLevel,
    NonMonotoneEdge,
)
from .graph import Graph, graph_from_edges


# levelings ---------------------------------------------------------------------

def span_of(levels: Mapping, g: Graph) -> int:
    try:
        return max((abs(levels[u] - levels[v]) for u, v in g.edges), default=0)
    except KeyError as exc:
        raise MissingLevel(f"vertex {exc.args[0]} has no level") from None


def height_of(levels: Mapping) -> int:
    if not levels:
        return 0
    return max(levels.values()) - min(levels.values())


def compact_levels(levels: Mapping) -> dict:
    used = sorted(set(levels.values()))
    rank = {y: i for i, y in enumerate(used)}
    return {v: rank[y] for v, y in levels.items()}


# drawings ----------------------------------------------------------------------

class Virtual(NamedTuple):
    """Subdivision point number ``k`` of the edge (u, v), counted from u."""
    u: object
    v: object
    k: int


@dataclass(frozen=True)
class PolylineDrawing:
    positions: Mapping          # v -> (Fraction x, int y)
    edges: tuple                # (u, v, bends) with bends listed from u towards v

    @property
    def graph(self) -> Graph:
        return graph_from_edges(((u, v) for u, v, _ in self.edges), vertices=self.positions)

    @property
    def levels(self) -> dict:
        return {v: p[1] for v, p in self.positions.items()}

    def span(self) -> int:
        return max((abs(self.positions[u][1] - self.positions[v][1]) for u, v, _ in self.edges),
                   default=0)

    def height(self) -> int:
        return height_of(self.levels)

    def is_strict(self) -> bool:
        return all(self.positions[u][1] != self.positions[v][1] for u, v, _ in self.edges)

    def edge_points(self, e):
        u, v, bends = e
        return [self.positions[u], *bends, self.positions[v]]

    def restricted(self, keep_vertices=None, drop_edges=()) -> "PolylineDrawing":
        drop = {frozenset(e) for e in drop_edges}
        pos = self.positions
        if keep_vertices is not None:
            keep = set(keep_vertices)
            pos = {v: p for v, p in pos.items() if v in keep}
        es = tuple(e for e in self.edges
                   if e[0] in pos and e[1] in pos and frozenset(e[:2]) not in drop)
        return PolylineDrawing(dict(pos), es)

    def shifted(self, dy: int) -> "PolylineDrawing":
        pos = {v: (x, y + dy) for v, (x, y) in self.positions.items()}
        es = tuple((u, v, tuple((x, y + dy) for x, y in b)) for u, v, b in self.edges)
        return PolylineDrawing(pos, es)


def make_drawing(positions: Mapping, edges) -> PolylineDrawing:
    pos = {v: (Fraction(x), int(y)) for v, (x, y) in positions.items()}
    es = []
    for e in edges:
        u, v = e[0], e[1]
        bends = e[2] if len(e) > 2 else ()
        es.append((u, v, tuple((Fraction(x), int(y)) for x, y in bends)))
    return PolylineDrawing(pos, tuple(es))


def _frac_json(x: Fraction, y: int):
    x = Fraction(x)
    return [x.numerator, x.denominator, int(y)]


def drawing_to_json(p: PolylineDrawing) -> dict:
    return {
        "positions": {str(v): _frac_json(*p.positions[v]) for v in sorted(p.positions)},
        "edges": [{"u": u, "v": v, "bends": [_frac_json(*b) for b in bends]}
                  for u, v, bends in sorted(p.edges, key=lambda e: (e[0], e[1]))],
    }


def drawing_from_json(doc) -> PolylineDrawing:
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    try:
        pos = {int(k): (Fraction(a, b), int(y)) for k, (a, b, y) in doc["positions"].items()}
        es = tuple((int(e["u"]), int(e["v"]),
                    tuple((Fraction(a, b), int(y)) for a, b, y in e.get("bends", [])))
                   for e in doc["edges"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
        raise InvalidInput(f"malformed drawing: {exc}") from exc
    for u, v, _ in es:
        if u not in pos or v not in pos:
            raise InvalidInput(f"edge ({u},{v}) has an unplaced endpoint")
    return PolylineDrawing(pos, es)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    condition: str | None = None
    pair: tuple | None = None
    level: int | None = None
    detail: str = ""

    def __bool__(self):
        return self.valid

    def to_json(self):
        out = {"valid": self.valid}
        if not self.valid:
            out.update(condition=self.condition, pair=_jsonable(self.pair), level=_jsonable(self.level),
                       detail=self.detail)
        return out


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


VALID = Verdict(True)


# normalized drawings -------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedDrawing:
    graph: Graph
    orders: Mapping                 # level -> tuple of items, left to right
    chains: Mapping                 # (u, v) -> tuple of Virtual items from u to v
    coords: Mapping | None = None   # item -> x, kept when read off a geometric drawing
    _level: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        lv = {}
        for y, items in self.orders.items():
            for it in items:
                if it in lv:
                    raise InconsistentSubdivision(f"item {it} appears on two levels")
                lv[it] = y
        object.__setattr__(self, "_level", lv)

    def level_of(self, item):
        return self._level[item]

    def sub_edges(self):
        for (u, v), chain in self.chains.items():
            seq = (u, *chain, v)
            for a, b in zip(seq, seq[1:]):
                yield a, b, (u, v)


def normalize(p: PolylineDrawing) -> NormalizedDrawing:
    items = defaultdict(list)
    for v, (x, y) in p.positions.items():
        if y != int(y):
            raise InvalidInput(f"vertex {v} is not on an integer level")
        items[int(y)].append((Fraction(x), v))
    chains = {}
    for u, v, bends in p.edges:
        pts = [p.positions[u], *bends, p.positions[v]]
        ys = [y for _, y in pts]
        if any(y != int(y) for _, y in bends):
            raise NonMonotoneEdge(f"edge ({u},{v}) has a bend off the levels", edge=(u, v))
        if ys[0] == ys[-1]:
            if bends:
                raise NonMonotoneEdge(f"horizontal edge ({u},{v}) has bends", edge=(u, v))
            chains[(u, v)] = ()
            continue
        up = ys[-1] > ys[0]
        if any((b <= a) if up else (b >= a) for a, b in zip(ys, ys[1:])):
            raise NonMonotoneEdge(f"edge ({u},{v}) is not y-monotone", edge=(u, v))
        chain = []
        k = 0
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            step = 1 if y2 > y1 else -1
            for t in range(y1 + step, y2 + step, step):
                if t == ys[-1] and (x2, y2) == pts[-1]:
                    break
                x = Fraction(x1) + (Fraction(x2) - Fraction(x1)) * Fraction(t - y1, y2 - y1)
                it = Virtual(u, v, k)
                k += 1
                chain.append(it)
                items[t].append((x, it))
        chains[(u, v)] = tuple(chain)
    orders, coords = {}, {}
    for y in sorted(items):
        row = sorted(items[y], key=lambda t: t[0])
        for (xa, a), (xb, b) in zip(row, row[1:]):
            if xa == xb:
                raise CoincidentPoints(f"{a} and {b} share the point ({xa},{y})", pair=(a, b))
        orders[y] = tuple(it for _, it in row)
        coords.update((it, x) for x, it in row)
    return NormalizedDrawing(p.graph, orders, chains, coords)


def check_normalized(d: NormalizedDrawing) -> Verdict:
    pos = {}
    for y, row in d.orders.items():
        for i, it in enumerate(row):
            pos[it] = i
    bands = defaultdict(list)
    for a, b, e in d.sub_edges():
        if a not in pos or b not in pos:
            raise InconsistentSubdivision(f"sub-edge ({a},{b}) uses an unplaced item")
        ya, yb = d.level_of(a), d.level_of(b)
        if abs(ya - yb) > 1:
            raise InconsistentSubdivision(f"sub-edge ({a},{b}) spans more than one level")
        if ya == yb:
            if isinstance(a, Virtual) or isinstance(b, Virtual):
                raise InconsistentSubdivision(f"virtual item on horizontal edge {e}")
            if abs(pos[a] - pos[b]) != 1:
                return Verdict(False, "i", (e,), ya,
                               f"endpoints of horizontal edge {e} are not consecutive")
            continue
        if ya > yb:
            a, b, ya = b, a, yb
        bands[ya].append((pos[a], pos[b], e))
    for y in sorted(bands):
        rows = sorted(bands[y], key=lambda t: (t[0], t[1]))
        best = None   # item of an earlier lower position with the largest upper position
        i = 0
        while i < len(rows):
            j = i
            while j < len(rows) and rows[j][0] == rows[i][0]:
                j += 1
            if best is not None:
                for r in rows[i:j]:
                    if r[1] < best[1]:
                        return Verdict(False, "ii", (best[2], r[2]), y,
                                       "inter-level edges cross between levels "
                                       f"{y} and {y + 1}")
            for r in rows[i:j]:
                if best is None or r[1] > best[1]:
                    best = r
            i = j
    return VALID


def check_via_normalized(p: PolylineDrawing) -> Verdict:
    """check_normalized(normalize(p)) with structural failures reported as verdicts."""
    try:
        nd = normalize(p)
    except NonMonotoneEdge as exc:
        return Verdict(False, "monotone", tuple(exc.details.get("edge", ())), None, str(exc))
    except CoincidentPoints as exc:
        return Verdict(False, "coincident", tuple(exc.details.get("pair", ())), None, str(exc))
    return check_normalized(nd)


# geometric checker ----------------------------------------------------------------

def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, c):
    """c lies on the closed segment ab (given collinear)."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def segment_intersection(p1, p2, q1, q2):
    """None, ("point", pt) or ("overlap", None) for two closed segments."""
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    if d1 == d2 == d3 == d4 == 0:
        # collinear: project on the dominant axis
        axis = 0 if p1[0] != p2[0] or q1[0] != q2[0] else 1
        lo = max(min(p1[axis], p2[axis]), min(q1[axis], q2[axis]))
        hi = min(max(p1[axis], p2[axis]), max(q1[axis], q2[axis]))
        if lo > hi:
            return None
        if lo < hi:
            return ("overlap", None)
        for pt in (p1, p2):
            if pt[axis] == lo:
                return ("point", pt)
    if d1 * d2 > 0 or d3 * d4 > 0:
        return None
    if d1 == 0 and _on_segment(q1, q2, p1):
        return ("point", p1)
    if d2 == 0 and _on_segment(q1, q2, p2):
        return ("point", p2)
    if d3 == 0 and _on_segment(p1, p2, q1):
        return ("point", q1)
    if d4 == 0 and _on_segment(p1, p2, q2):
        return ("point", q2)
    if 0 in (d1, d2, d3, d4):
        return None
    # proper crossing
    x1, y1 = p1
    x2, y2 = p2
    x3, y3 = q1
    x4, y4 = q2
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    t = Fraction((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / den
    return ("point", (x1 + t * (x2 - x1), y1 + t * (y2 - y1)))


def _segment_extent(a, b, lo_y, hi_y):
    """x-range of segment ab restricted to lo_y <= y <= hi_y (assumes non-empty)."""
    (x1, y1), (x2, y2) = a, b
    if y1 == y2:
        return min(x1, x2), max(x1, x2)
    ya, yb = max(lo_y, min(y1, y2)), min(hi_y, max(y1, y2))
    xa = x1 + (x2 - x1) * Fraction(ya - y1, y2 - y1)
    xb = x1 + (x2 - x1) * Fraction(yb - y1, y2 - y1)
    return min(xa, xb), max(xa, xb)


def check_geometric(p: PolylineDrawing) -> Verdict:
    for v, (x, y) in p.positions.items():
        if y != int(y):
            return Verdict(False, "level", (v,), None, f"vertex {v} is off the integer levels")
    # scale x to integers so the orientation tests stay in integer arithmetic
    scale = 1
    for x, _ in list(p.positions.values()) + [b for e in p.edges for b in e[2]]:
        scale = lcm(scale, Fraction(x).denominator)

    def sc(pt):
        f = Fraction(pt[0]) * scale
        return (f.numerator, pt[1])

    def unscale(pt):
        return (Fraction(pt[0]) / scale, pt[1])

    pos = {v: sc(pt) for v, pt in p.positions.items()}
    segs = []   # (p, q, edge index, piece index)
    for ei, (u, v, bends) in enumerate(p.edges):
        pts = [pos[u], *(sc(b) for b in bends), pos[v]]
        ys = [y for _, y in pts]
        horizontal = ys[0] == ys[-1]
        if horizontal and len(pts) > 2:
            return Verdict(False, "monotone", ((u, v),), ys[0], "horizontal edge with bends")
        if not horizontal:
            up = ys[-1] > ys[0]
            if any((b <= a) if up else (b >= a) for a, b in zip(ys, ys[1:])):
                return Verdict(False, "monotone", ((u, v),), None, "edge is not y-monotone")
        if any(y != int(y) for y in ys):
            return Verdict(False, "monotone", ((u, v),), None, "bend off the integer levels")
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            segs.append((a, b, ei, k))
    edge_ends = [{u, v} for u, v, _ in p.edges]
    npiece = [len(e[2]) + 1 for e in p.edges]

    # bucket every segment and vertex point by the integer levels it meets
    buckets = defaultdict(list)   # level y -> (lo, hi, kind, id)
    bands = defaultdict(list)     # band (y, y+1) -> (x at y, x at y+1, segment)
    for si, (a, b, ei, k) in enumerate(segs):
        ylo, yhi = min(a[1], b[1]), max(a[1], b[1])
        for y in range(ylo, yhi + 1):
            lo, hi = _segment_extent(a, b, y, y)
            # the edge endpoint this piece touches on level y, if any
            tag = None
            if a[1] != b[1]:
                if k == 0 and a[1] == y:
                    tag = p.edges[ei][0]
                elif k == npiece[ei] - 1 and b[1] == y:
                    tag = p.edges[ei][1]
            buckets[y].append((lo, hi, "s", si, tag))
            if y < yhi:
                bands[y].append((_segment_extent(a, b, y, y)[0],
                                 _segment_extent(a, b, y + 1, y + 1)[0], si))
    for v, (x, y) in pos.items():
        buckets[y].append((x, x, "p", v, v))

    candidates = set()
    # a piece spans its whole band, so two pieces meet inside the open band exactly
    # when their bottom and top orders strictly disagree
    for y, row in bands.items():
        row.sort()
        best = None
        i = 0
        while i < len(row):
            j = i
            while j < len(row) and row[j][0] == row[i][0]:
                if best is not None and row[j][1] < best[1]:
                    a, b = ("s", best[2]), ("s", row[j][2])
                    candidates.add((a, b) if a <= b else (b, a))
                j += 1
            top = max(row[i:j], key=lambda t: t[1])
            if best is None or top[1] > best[1]:
                best = top
            i = j

    for key in buckets:
        row = sorted(buckets[key], key=lambda t: (t[0], t[1]))
        active = []   # (hi, entry)
        for ent in row:
            lo = ent[0]
            active = [t for t in active if t[1] >= lo]
            for other in active:
                if other[4] is not None and other[4] == ent[4]:
                    continue   # both meet at the same vertex they are incident to
                a, b = other[2:4], ent[2:4]
                candidates.add((a, b) if a <= b else (b, a))
            active.append(ent)

    for (ka, ia), (kb, ib) in sorted(candidates):
        if ka == "p" and kb == "p":
            if ia != ib:
                return Verdict(False, "coincident", (ia, ib), pos[ia][1], "two vertices share a point")
            continue
        if ka == "p" or kb == "p":
            v, si = (ia, ib) if ka == "p" else (ib, ia)
            a, b, ei, k = segs[si]
            pt = pos[v]
            if _orient(a, b, pt) != 0 or not _on_segment(a, b, pt):
                continue
            u0, v0, _ = p.edges[ei]
            if (v == u0 and k == 0 and pt == a) or (v == v0 and k == npiece[ei] - 1 and pt == b):
                continue
            return Verdict(False, "touch", (v, (u0, v0)), pt[1], f"vertex {v} lies on edge ({u0},{v0})")
        s1, s2 = segs[ia], segs[ib]
        hit = segment_intersection(s1[0], s1[1], s2[0], s2[1])
        if hit is None:
            continue
        e1, e2 = p.edges[s1[2]][:2], p.edges[s2[2]][:2]
        if hit[0] == "point":
            pt = hit[1]
            if s1[2] == s2[2] and abs(s1[3] - s2[3]) == 1:
                shared = s1[1] if s1[3] < s2[3] else s2[1]
                if pt == shared:
                    continue
            elif s1[2] != s2[2]:
                common = edge_ends[s1[2]] & edge_ends[s2[2]]
                if any(pos[c] == pt for c in common) and pt in (s1[0], s1[1]) and pt in (s2[0], s2[1]):
                    continue
            x = unscale(pt)[0]
            return Verdict(False, "crossing", (e1, e2), pt[1],
                           f"edges {e1} and {e2} meet at ({x},{pt[1]})")
        return Verdict(False, "overlap", (e1, e2), s1[0][1], f"edges {e1} and {e2} overlap")
    return VALID


# realizing per-level orders ------------------------------------------------------------

def realize(orders: Mapping, chains: Mapping, vertices=None) -> PolylineDrawing:
    """x = rank within the level, a bend at every subdivision item."""
    x = {}
    y = {}
    for lev, row in orders.items():
        for i, it in enumerate(row):
            x[it] = Fraction(i)
            y[it] = lev
    keep = set(vertices) if vertices is not None else {it for it in x if not isinstance(it, Virtual)}
    pos = {v: (x[v], y[v]) for v in keep}
    es = tuple((u, v, tuple((x[c], y[c]) for c in chain)) for (u, v), chain in chains.items())
    return PolylineDrawing(pos, es)


def realize_normalized(d: NormalizedDrawing) -> PolylineDrawing:
    return realize(d.orders, d.chains, d.graph.vertices)


# weak -> strict ---------------------------------------------------------------------------

def weak_to_strict(p: PolylineDrawing) -> PolylineDrawing:
    nd = normalize(p)
    verdict = check_normalized(nd)
    if not verdict:
        raise InvalidInput(f"input drawing is not valid: {verdict.detail}")
    pos = {}
    for lev, row in nd.orders.items():
        for i, it in enumerate(row):
            pos[it] = i
    horiz = defaultdict(set)
    for (u, v), chain in nd.chains.items():
        if not chain and nd.level_of(u) == nd.level_of(v):
            horiz[u].add(v)
            horiz[v].add(u)
    lifted = set()
    for lev, row in nd.orders.items():
        run = 0
        for i, it in enumerate(row):
            if i > 0 and row[i - 1] in horiz[it]:
                run += 1
            else:
                run = 0
            if run % 2 == 1:
                lifted.add(it)

    mids = defaultdict(list)     # odd level -> (key, item)
    tops = defaultdict(list)     # lifted vertex -> (lower pos, item)
    new_chains = {}
    for (u, v), chain in nd.chains.items():
        seq = (u, *chain, v)
        out = []
        if not chain and nd.level_of(u) == nd.level_of(v):
            new_chains[(u, v)] = ()
            continue
        for k, (a, b) in enumerate(zip(seq, seq[1:])):
            lo, hi = (a, b) if nd.level_of(a) < nd.level_of(b) else (b, a)
            piece = []
            if lo not in lifted:
                it = Virtual(u, v, ("m", k))
                mids[2 * nd.level_of(lo) + 1].append(((pos[lo], pos[hi]), it))
                piece.append(it)
            if hi in lifted:
                it = Virtual(u, v, ("t", k))
                tops[hi].append((pos[lo], it))
                piece.append(it)
            if lo == b:
                piece.reverse()
            out.extend(piece)
            if k + 1 < len(seq) - 1:
                out.append(b)
        new_chains[(u, v)] = tuple(out)
    orders = defaultdict(list)
    for lev, row in nd.orders.items():
        for it in row:
            if it in lifted:
                orders[2 * lev].extend(t for _, t in sorted(tops[it], key=lambda t: t[0]))
                mids[2 * lev + 1].append(((pos[it], -1), it))
            else:
                orders[2 * lev].append(it)
    for lev, row in mids.items():
        orders[lev] = [it for _, it in sorted(row, key=lambda t: t[0])]
    return realize({k: v for k, v in orders.items() if v}, new_chains, nd.graph.vertices)


# queue layouts -------------------------------------------------------------------------------

@dataclass(frozen=True)
class QueueLayout:
    order: tuple
    queue: Mapping      # (u, v) -> queue index

    @property
    def num_queues(self) -> int:
        return len(set(self.queue.values()))


def nesting_violations(ql: QueueLayout) -> list:
    rank = {v: i for i, v in enumerate(ql.order)}
    by_q = defaultdict(list)
    for (u, v), q in ql.queue.items():
        a, b = sorted((rank[u], rank[v]))
        by_q[q].append((a, b, (u, v)))
    bad = []
    for q, es in by_q.items():
        # e1 nests e2 when a1 < a2 and b2 < b1; scan by left end, largest right end first
        es.sort(key=lambda t: (t[0], -t[1]))
        for i, (a1, b1, e1) in enumerate(es):
            for a2, b2, e2 in es[i + 1:]:
                if a2 >= b1:
                    break
                if a1 < a2 and b2 < b1:
                    bad.append((e1, e2))
    return bad


def queue_layout(p: PolylineDrawing) -> QueueLayout:
    verdict = check_via_normalized(p)
    if not verdict:
        raise InvalidInput(f"input drawing is not valid: {verdict.detail}")
    order = tuple(sorted(p.positions, key=lambda v: (p.positions[v][1], p.positions[v][0])))
    spans = {(u, v): abs(p.positions[u][1] - p.positions[v][1]) for u, v, _ in p.edges}
    used = sorted(set(spans.values()))
    index = {s: i for i, s in enumerate(used)}
    return QueueLayout(order, {e: index[s] for e, s in spans.items()})
