"""Exact desk-scale solver for bounded-span weakly leveled planarity.

Two nested searches: an enumeration of levelings (twins kept in canonical order,
vertical reflection quotiented out) and, for each leveling, a bottom-up search over
per-level orders of the subdivided graph.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

from .drawing import NormalizedDrawing, PolylineDrawing, Virtual, check_normalized, realize
from .errors import NonPlanarInput, SizeCapExceeded
from .graph import Graph, components, is_planar

DEFAULT_CAP = 10
DEFAULT_BUDGET = 40


@dataclass
class Stats:
    levelings: int = 0          # complete levelings handed to the order search
    partial_checks: int = 0     # order searches run on partial levelings
    order_nodes: int = 0        # placement steps inside the order search

    def as_dict(self):
        return {"levelings": self.levelings, "partial_checks": self.partial_checks,
                "order_nodes": self.order_nodes}


@dataclass
class SolveResult:
    optimum: int | None                  # None means infeasible (non-planar)
    witness: PolylineDrawing | None
    leveling: dict | None
    stats: Stats = field(default_factory=Stats)

    def to_json(self):
        from .drawing import drawing_to_json

        return {
            "optimum": self.optimum,
            "leveling": {str(k): v for k, v in sorted(self.leveling.items())} if self.leveling else None,
            "witness": drawing_to_json(self.witness) if self.witness is not None else None,
            "stats": self.stats.as_dict(),
        }


# ---------------------------------------------------------------- fixed leveling

class _Level:
    __slots__ = ("items", "down", "up", "horiz")


def subdivide(g: Graph, levels: Mapping):
    """Items per level plus chains of virtual items for every edge."""
    rows = defaultdict(list)
    for v in g.vertices:
        rows[levels[v]].append(v)
    chains = {}
    nbr = defaultdict(lambda: ([], [], []))   # item -> (down, up, horizontal)
    for u, v in g.edges:
        lu, lv = levels[u], levels[v]
        if lu == lv:
            nbr[u][2].append(v)
            nbr[v][2].append(u)
            chains[(u, v)] = ()
            continue
        step = 1 if lv > lu else -1
        seq = [u]
        for k, y in enumerate(range(lu + step, lv, step)):
            it = Virtual(u, v, k)
            rows[y].append(it)
            seq.append(it)
        seq.append(v)
        for a, b in zip(seq, seq[1:]):
            lo, hi = (a, b) if step == 1 else (b, a)
            nbr[lo][1].append(hi)
            nbr[hi][0].append(lo)
        chains[(u, v)] = tuple(seq[1:-1])
    return dict(rows), chains, nbr


def _linear_forest(vertices, adj) -> bool:
    seen = set()
    for v in vertices:
        if len(adj[v]) > 2:
            return False
    for s in vertices:
        if s in seen:
            continue
        # walk the component, count vertices and edge endpoints
        stack, comp, deg = [s], 0, 0
        seen.add(s)
        while stack:
            x = stack.pop()
            comp += 1
            deg += len(adj[x])
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if deg // 2 != comp - 1:
            return False
    return True


def _caterpillar_forest(edges) -> bool:
    adj = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    # forest check
    seen = set()
    for s in adj:
        if s in seen:
            continue
        stack, comp, deg = [s], 0, 0
        seen.add(s)
        while stack:
            x = stack.pop()
            comp += 1
            deg += len(adj[x])
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if deg // 2 != comp - 1:
            return False
    # removing leaves must leave paths
    for v in adj:
        if len(adj[v]) > 1 and sum(1 for w in adj[v] if len(adj[w]) > 1) > 2:
            return False
    return True


class _OrderSearch:
    def __init__(self, g: Graph, levels: Mapping, stats: Stats | None, node_limit=None):
        self.rows, self.chains, nbr = subdivide(g, levels)
        self.g = g
        self.stats = stats
        self.ys = sorted(self.rows)
        self.down = {}
        self.up = {}
        self.horiz = {}
        for y, row in self.rows.items():
            for it in row:
                d, u, h = nbr[it] if it in nbr else ([], [], [])
                self.down[it] = frozenset(d)
                self.up[it] = frozenset(u)
                self.horiz[it] = frozenset(h)
        # canonical order inside every twin class
        self.prev_twin = {}
        for y, row in self.rows.items():
            classes = defaultdict(list)
            for it in row:
                classes[(self.down[it], self.up[it], self.horiz[it])].append(it)
            for members in classes.values():
                if len(members) > 1:
                    members.sort(key=_item_key)
                    for a, b in zip(members, members[1:]):
                        self.prev_twin[b] = a
        self.memo = set()
        self.result = None

    def size(self):
        return sum(len(r) for r in self.rows.values())

    def quick_reject(self) -> bool:
        for y, row in self.rows.items():
            if not _linear_forest(row, self.horiz):
                return True
        bands = defaultdict(list)
        for y, row in self.rows.items():
            for it in row:
                for w in self.up[it]:
                    bands[y].append((it, w))
        return not all(_caterpillar_forest(es) for es in bands.values())

    def run(self):
        if self.quick_reject():
            return None
        orders = {}
        if self._level(0, {}, orders):
            return orders
        return None

    def _level(self, li, low_pos, orders) -> bool:
        if li == len(self.ys):
            return True
        y = self.ys[li]
        row = self.rows[y]
        has_lower = li > 0 and self.ys[li - 1] == y - 1
        rng = {}
        for it in row:
            ps = [low_pos[w] for w in self.down[it]] if has_lower else []
            rng[it] = (min(ps), max(ps)) if ps else None
        sinks = [it for it in row if not self.up[it] and not self.horiz[it] and rng[it] is not None]
        isolated = [it for it in row if not self.up[it] and not self.horiz[it] and rng[it] is None]
        active = sorted((it for it in row if self.up[it] or self.horiz[it]), key=_item_key)
        if not _sinks_compatible(sinks, rng):
            return False
        groups = defaultdict(int)   # upper item -> number of its lower neighbours on this level
        for it in active:
            for w in self.up[it]:
                groups[w] += 1
        placed = []
        done = set()
        count = defaultdict(int)
        found = []

        def finish():
            full = _insert_sinks(placed, sinks, rng, self.horiz)
            if full is None:
                return False
            full = full + sorted(isolated, key=_item_key)
            relevant = tuple(it for it in placed if self.up[it])
            key = (li, relevant)
            if key in self.memo:
                return False
            self.memo.add(key)
            orders[y] = full
            nxt = {it: i for i, it in enumerate(relevant)}
            if self._level(li + 1, nxt, orders):
                return True
            del orders[y]
            return False

        def extend(max_low, open_group, pending):
            if self.stats is not None:
                self.stats.order_nodes += 1
            if len(placed) == len(active):
                return finish()
            cands = [pending] if pending is not None else active
            last = placed[-1] if placed else None
            for a in cands:
                if a in done:
                    continue
                pt = self.prev_twin.get(a)
                if pt is not None and pt not in done:
                    continue
                r = rng[a]
                if r is not None and r[0] < max_low:
                    continue
                # a horizontal neighbour placed earlier must be the previous item
                hp = [w for w in self.horiz[a] if w in done]
                if hp and hp != [last]:
                    continue
                ups = self.up[a]
                if open_group is not None and ups and open_group not in ups:
                    continue
                incomplete = [w for w in ups if count[w] + 1 < groups[w]]
                if len(incomplete) > 1:
                    continue
                if open_group is not None and open_group not in ups and not ups:
                    new_open = open_group
                else:
                    new_open = incomplete[0] if incomplete else None
                hn = [w for w in self.horiz[a] if w not in done]
                if len(hn) > 1:
                    continue
                placed.append(a)
                done.add(a)
                for w in ups:
                    count[w] += 1
                ok = extend(max(max_low, r[1]) if r is not None else max_low, new_open,
                            hn[0] if hn else None)
                if ok:
                    return True
                placed.pop()
                done.discard(a)
                for w in ups:
                    count[w] -= 1
            return False

        return extend(-1, None, None)


def _item_key(it):
    if isinstance(it, Virtual):
        return (1, it.u, it.v, it.k)
    return (0, it, 0, 0)


def _sinks_compatible(sinks, rng) -> bool:
    iv = sorted(rng[s] for s in sinks)
    return all(a[1] <= b[0] for a, b in zip(iv, iv[1:]))


def _insert_sinks(placed, sinks, rng, horiz):
    if not sinks:
        return list(placed)
    n = len(placed)
    pre = [-1] * (n + 1)       # max upper end of ranges left of gap g
    for i, it in enumerate(placed):
        r = rng[it]
        pre[i + 1] = max(pre[i], r[1] if r is not None else -1)
    suf = [float("inf")] * (n + 1)
    for i in range(n - 1, -1, -1):
        r = rng[placed[i]]
        suf[i] = min(suf[i + 1], r[0] if r is not None else float("inf"))
    slots = defaultdict(list)
    for s in sinks:
        lo, hi = rng[s]
        for gpos in range(n + 1):
            if pre[gpos] <= lo and suf[gpos] >= hi:
                if 0 < gpos < n and placed[gpos - 1] in horiz[placed[gpos]]:
                    continue
                slots[gpos].append(s)
                break
        else:
            return None
    out = []
    for gpos in range(n + 1):
        out.extend(sorted(slots.get(gpos, ()), key=lambda s: (rng[s], _item_key(s))))
        if gpos < n:
            out.append(placed[gpos])
    return out


def level_planar_fixed_leveling(g: Graph, levels: Mapping, cap: int = DEFAULT_CAP,
                                budget: int = DEFAULT_BUDGET, stats: Stats | None = None):
    """Per-level orders proving the leveling drawable, or None when no drawing exists."""
    if g.n > cap:
        raise SizeCapExceeded(f"{g.n} vertices exceed the cap {cap}", n=g.n, cap=cap)
    search = _OrderSearch(g, levels, stats)
    if search.size() > budget:
        raise SizeCapExceeded(f"subdivided size {search.size()} exceeds the budget {budget}",
                              size=search.size(), budget=budget)
    orders = search.run()
    if orders is None:
        return None
    nd = NormalizedDrawing(g, {y: tuple(r) for y, r in orders.items()}, search.chains)
    verdict = check_normalized(nd)
    if not verdict:  # pragma: no cover - search and checker disagree
        raise AssertionError(f"order search produced an invalid drawing: {verdict}")
    return nd


def _orders_feasible(g, levels, stats) -> bool:
    if stats is not None:
        stats.partial_checks += 1
    return _OrderSearch(g, levels, stats).run() is not None


# ---------------------------------------------------------------- leveling enumeration

def _twin_classes(g: Graph):
    classes = defaultdict(list)
    for v in g.vertices:
        classes[g.neighbors(v)].append(v)
    return [sorted(c) for c in classes.values() if len(c) > 1]


def _vertex_order(g: Graph):
    if g.n == 0:
        return []
    # ties go to the smallest id; vertices are kept sorted so rank works for any id type
    rank = {v: i for i, v in enumerate(g.vertices)}
    first = max(g.vertices, key=lambda v: (g.degree(v), -rank[v]))
    order = [first]
    assigned = {first}
    while len(order) < g.n:
        best = None
        for v in g.vertices:
            if v in assigned:
                continue
            k = sum(1 for w in g.neighbors(v) if w in assigned)
            if k == 0:
                continue
            key = (k, g.degree(v), -rank[v])
            if best is None or key > best[0]:
                best = (key, v)
        v = best[1]
        order.append(v)
        assigned.add(v)
    return order


def iter_levelings(g: Graph, s: int, strict: bool = False, canonical: bool = True,
                   prune=None, stats: Stats | None = None):
    """Contiguous levelings of a connected graph with span <= s.

    With ``canonical`` the first vertex sits on level 0, twins get non-decreasing levels and
    only one of every mirror pair is produced. ``prune(partial)`` may reject partial levelings.
    """
    order = _vertex_order(g)
    if not order:
        return
    n = len(order)
    root = order[0]
    pos = {v: i for i, v in enumerate(order)}
    prev_twin = {}
    mirror_free = set(order)
    if canonical:
        for cls in _twin_classes(g):
            if root in cls:
                continue
            cls.sort(key=pos.get)
            for a, b in zip(cls, cls[1:]):
                prev_twin[b] = a
            mirror_free.difference_update(cls)
    levels = {root: 0}
    used = defaultdict(int)
    used[0] = 1

    def gaps():
        lo, hi = min(used), max(used)
        return (hi - lo + 1) - len(used)

    def rec(i, sign_fixed):
        if i == n:
            if gaps() == 0:
                if stats is not None:
                    stats.levelings += 1
                yield dict(levels)
            return
        v = order[i]
        nb = [levels[w] for w in g.neighbors(v) if w in levels]
        lo, hi = max(nb) - s, min(nb) + s
        if canonical and v in prev_twin:
            lo = max(lo, levels[prev_twin[v]])
        for y in range(lo, hi + 1):
            if strict and y in nb:
                continue
            fixed = sign_fixed
            if canonical and not fixed and v in mirror_free:
                if y < 0:
                    continue
                fixed = y > 0
            levels[v] = y
            used[y] += 1
            if gaps() <= n - i - 1 and (prune is None or prune(levels)):
                yield from rec(i + 1, fixed)
            used[y] -= 1
            if not used[y]:
                del used[y]
            del levels[v]

    yield from rec(1, False)


# ---------------------------------------------------------------- public API

def _check_size(g, cap):
    if g.n > cap:
        raise SizeCapExceeded(f"{g.n} vertices exceed the cap {cap}", n=g.n, cap=cap)


def _decide_connected(g: Graph, s: int, strict: bool, cap, budget, stats, partial=True):
    if g.n == 1:
        return {g.vertices[0]: 0}, level_planar_fixed_leveling(g, {g.vertices[0]: 0}, cap, budget, stats)

    def prune(levels):
        if not partial or len(levels) < 3:
            return True
        sub = g.subgraph(levels)
        return _orders_feasible(sub, levels, stats)

    for lev in iter_levelings(g, s, strict=strict, prune=prune, stats=stats):
        nd = level_planar_fixed_leveling(g, lev, cap, budget, stats)
        if nd is not None:
            return lev, nd
    return None, None


def _combine(parts):
    """Place drawings of components side by side."""
    from fractions import Fraction

    pos, edges = {}, []
    offset = Fraction(0)
    for d in parts:
        xs = [x for x, _ in d.positions.values()] + [x for e in d.edges for x, _ in e[2]]
        lo = min(xs) if xs else 0
        hi = max(xs) if xs else 0
        shift = offset - lo
        for v, (x, y) in d.positions.items():
            pos[v] = (x + shift, y)
        for u, v, b in d.edges:
            edges.append((u, v, tuple((x + shift, y) for x, y in b)))
        offset += hi - lo + 1
    return PolylineDrawing(pos, tuple(edges))


def decide_span(g: Graph, s: int, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET,
                strict: bool = False, stats: Stats | None = None):
    """(True, witness, leveling) when a drawing with span <= s exists, else (False, None, None)."""
    _check_size(g, cap)
    stats = stats if stats is not None else Stats()
    if s < 0:
        return False, None, None
    parts, levels = [], {}
    for comp in components(g):
        sub = g.subgraph(comp)
        lev, nd = _decide_connected(sub, s, strict, cap, budget, stats)
        if nd is None:
            return False, None, None
        parts.append(realize(nd.orders, nd.chains, sub.vertices))
        levels.update(lev)
    return True, _combine(parts), levels


def min_span_wlp(g: Graph, cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET,
                 strict: bool = False) -> SolveResult:
    _check_size(g, cap)
    if not is_planar(g):
        raise NonPlanarInput("graph is not planar")
    stats = Stats()
    parts, levels, best = [], {}, 0
    for comp in components(g):
        sub = g.subgraph(comp)
        for s in range(0 if not strict else 1, max(sub.n, 2)):
            if strict and sub.n == 1:
                s = 0
            lev, nd = _decide_connected(sub, s, strict, cap, budget, stats)
            if nd is not None:
                best = max(best, s)
                parts.append(realize(nd.orders, nd.chains, sub.vertices))
                levels.update(lev)
                break
        else:  # pragma: no cover - planar graphs always have an st-drawing
            return SolveResult(None, None, None, stats)
    return SolveResult(best, _combine(parts), levels, stats)


def feasible_levelings(g: Graph, s: int, strict: bool = False, max_height: int | None = None,
                       cap: int = DEFAULT_CAP, budget: int = DEFAULT_BUDGET):
    """Every leveling (no symmetry reduction, levels from 0) with span <= s that admits a drawing."""
    _check_size(g, cap)
    out = []
    for lev in iter_levelings(g, s, strict=strict, canonical=False):
        lo = min(lev.values())
        lev = {v: y - lo for v, y in lev.items()}
        if max_height is not None and max(lev.values()) > max_height:
            continue
        if level_planar_fixed_leveling(g, lev, cap, budget) is not None:
            out.append(lev)
    return out
