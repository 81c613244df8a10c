"""Low-height drawings of maximal outerplanar graphs hanging off one outer edge.

The construction works on a flat visibility representation: every vertex is a
horizontal bar on an integer row, an edge is either a vertical segment between
two bars that sees no other bar, or the touching point of two bars on the same
row.  Contracting every bar to its left end and bending each vertical edge onto
its segment one row after leaving the lower bar gives a y-monotone planar
poly-line drawing whose rows are the levels.

A *lens* is the part of the graph on the far side of an edge (a, b), away from
the triangle we arrived from.  Lenses are drawn in one of two shapes:

* vertical: a on the bottom row, b on the top row, edge (a, b) at x = 0 and the
  content at x >= 1.  The bars of a and b reach at least to ``pe`` / ``qe``.
* flat: a and b on row 0, a's bar ending at x = -1 and b's starting at x = 0,
  the content above the junction on rows 1..r and in columns lo..hi.

With t triangles a vertical lens needs height at most 1 + 2*floor(log2(t + 1)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidInput
from .graph import Graph

EMPTY = -1


def vertical_height_bound(triangles: int) -> int:
    return 1 + 2 * int(math.floor(math.log2(triangles + 1)))


def height_bound(n: int) -> int:
    """Rows between the two root vertices, inclusive of both, for n vertices."""
    if n <= 2:
        return 1
    return vertical_height_bound(n - 2) + 2


@dataclass
class _Lens:
    a: object
    b: object
    z: object
    left: int       # lens (a, z)
    right: int      # lens (z, b)
    vh: int = 0     # vertical height
    fr: int = 0     # flat rows
    opt: str = ""
    w: int = 0      # vertical width
    pe: int = 0
    qe: int = 0
    lo: int = 0     # flat columns
    hi: int = -1


class OuterplanarLayout:
    """Visibility layout of a maximal outerplanar graph below/above root edge (u, v)."""

    def __init__(self, g: Graph, u, v):
        self.g = g
        self.u, self.v = u, v
        self.lenses: list[_Lens] = []
        self.bars: dict = {}
        self.edges: list = []
        self._adj = {x: set(g.neighbors(x)) for x in g.vertices}
        if not g.has_edge(u, v):
            raise InvalidInput(f"root edge ({u},{v}) missing from the component")
        self.root = self._decompose()
        self._measure()

    # structure ---------------------------------------------------------------

    def _decompose(self) -> int:
        seen = {self.u, self.v}
        out = []
        # iterative post-order so large components do not hit the recursion limit
        stack = [(self.u, self.v, None, None, 0)]
        result = {}
        while stack:
            a, b, frm, slot, state = stack.pop()
            if state == 0:
                zs = [z for z in self._adj[a] & self._adj[b] if z != frm]
                if not zs:
                    result[slot] = EMPTY
                    continue
                if len(zs) > 1:
                    raise InvalidInput(f"edge ({a},{b}) lies on more than two triangles")
                z = zs[0]
                if z in seen:
                    raise InvalidInput("component is not maximal outerplanar")
                seen.add(z)
                idx = len(self.lenses)
                self.lenses.append(_Lens(a, b, z, EMPTY, EMPTY))
                stack.append((a, b, idx, slot, 1))
                stack.append((z, b, a, ("r", idx), 0))
                stack.append((a, z, b, ("l", idx), 0))
            else:
                idx = frm
                self.lenses[idx].left = result.pop(("l", idx))
                self.lenses[idx].right = result.pop(("r", idx))
                result[slot] = idx
                out.append(idx)
        if len(seen) != self.g.n or self.g.m != 2 * self.g.n - 3:
            raise InvalidInput("component is not maximal outerplanar with the root edge outside")
        self._post = out
        return result[None]

    def _vh(self, i):
        return 1 if i == EMPTY else self.lenses[i].vh

    def _fr(self, i):
        return 0 if i == EMPTY else self.lenses[i].fr

    def _measure(self):
        for i in self._post:
            L = self.lenses[i]
            A, B = L.left, L.right
            ha = max(self._fr(A) + 1, self._vh(B))
            hb = max(self._fr(B) + 1, self._vh(A))
            L.vh, L.opt = (ha, "a") if ha <= hb else (hb, "b")
            L.fr = 1 + max(self._vh(A), self._vh(B))
            wa, pa, qa = self._dims(A)
            wb, pb, qb = self._dims(B)
            L.lo, L.hi = -1 - wa, wb
            if L.opt == "a":
                lo, hi = self._flat_cols(A)
                o = max(1, 1 - lo)
                sw = o + max(hi, 0) + 1
                L.w, L.pe, L.qe = sw + wb, o - 1, sw + qb
            else:
                lo, hi = self._flat_cols(B)
                o = max(1, 2 + hi)
                sw = max(o + 1, o - lo)
                L.w, L.pe, L.qe = sw + wa, sw + pa, o - 1

    def _dims(self, i):
        if i == EMPTY:
            return 0, 0, 0
        L = self.lenses[i]
        return L.w, L.pe, L.qe

    def _flat_cols(self, i):
        if i == EMPTY:
            return 0, -1
        L = self.lenses[i]
        return L.lo, L.hi

    @property
    def height(self) -> int:
        """Level difference needed between u and v (u, v alone on their rows)."""
        return self._vh(self.root) + 2

    # emission ------------------------------------------------------------------

    def layout(self, span: int):
        """Bars and edges for a root edge of the given span; rows 1..span-1 hold the rest."""
        if span < self.height:
            raise BudgetExceeded(f"component needs span {self.height}, edge has {span}",
                                 need=self.height, have=span)
        self.bars = {self.u: (0, 0, 0), self.v: (span, 0, 0)}
        self.edges = []
        work = [("v", self.root, 0, 1, 1, 1, span - 2)]
        while work:
            kind, i, x0, y0, sx, sy, h = work.pop()
            if i == EMPTY:
                continue
            if kind == "v":
                work.extend(self._emit_vertical(i, x0, y0, sx, sy, h))
            else:
                work.extend(self._emit_flat(i, x0, y0, sx, sy))
        return self.bars, self.edges

    def _bar(self, v, row, x1, x2):
        lo, hi = min(x1, x2), max(x1, x2)
        self.bars[v] = (row, lo, hi)

    def _emit_vertical(self, i, x0, y0, sx, sy, h):
        L = self.lenses[i]
        p, q, w = L.a, L.b, L.z
        X = lambda x: x0 + sx * x
        Y = lambda y: y0 + sy * y
        if L.opt == "a":
            lo, hi = self._flat_cols(L.left)
            o = max(1, 1 - lo)
            sw = o + max(hi, 0) + 1
            _, pb, _ = self._dims(L.right)
            self._bar(w, Y(0), X(o), X(sw + pb))
            self.edges.append((p, w, X(o)))
            self.edges.append((w, q, X(sw)))
            return [("f", L.left, X(o), Y(0), sx, sy, 0),
                    ("v", L.right, X(sw), Y(0), sx, sy, h)]
        lo, hi = self._flat_cols(L.right)
        o = max(1, 2 + hi)
        sw = max(o + 1, o - lo)
        _, _, qa = self._dims(L.left)
        self._bar(w, Y(h), X(o), X(sw + qa))
        self.edges.append((q, w, X(o)))
        self.edges.append((p, w, X(sw)))
        # lens (z, b) is canonically flat with z on the left; mirror and hang it down
        return [("f", L.right, X(o - 1), Y(h), -sx, -sy, 0),
                ("v", L.left, X(sw), Y(0), sx, sy, h)]

    def _emit_flat(self, i, x0, y0, sx, sy):
        L = self.lenses[i]
        a, b, z = L.a, L.b, L.z
        r = L.fr
        X = lambda x: x0 + sx * x
        Y = lambda y: y0 + sy * y
        _, _, qa = self._dims(L.left)
        _, pb, _ = self._dims(L.right)
        self._bar(z, Y(r), X(-1 - qa), X(pb))
        self.edges.append((a, z, X(-1)))
        self.edges.append((z, b, X(0)))
        # (a, z): a at the bottom (one row below its own frame), content to the left
        # (z, b): drawn with z at the bottom, flipped so that b is below
        return [("v", L.left, X(-1), Y(1), -sx, sy, r - 1),
                ("v", L.right, X(0), Y(r), sx, -sy, r - 1)]


def polyline_rows(layout: OuterplanarLayout, span: int):
    """Per-row items and edge chains of the layout; rows 1..span-1 only.

    Returns (rows, chains): rows maps row -> list of items left to right, chains
    maps (a, b) -> list of (row, item) from a to b with a on the lower row.
    """
    from .drawing import Virtual

    bars, edges = layout.layout(span)
    root = {layout.u, layout.v}
    rows: dict = {}
    taken = set()
    for v, (row, lo, _) in bars.items():
        if v in root:
            continue
        rows.setdefault(row, []).append((lo, 0, v))
        taken.add((row, lo))
    chains = {}
    for a, b, x in edges:
        ra, rb = bars[a][0], bars[b][0]
        if ra > rb:
            a, b, ra, rb = b, a, rb, ra
        chain = []
        for k, row in enumerate(range(ra + 1, rb)):
            if (row, x) in taken:
                raise InvalidInput(f"layout collision at row {row}, column {x}")
            taken.add((row, x))
            it = Virtual(a, b, k)
            rows.setdefault(row, []).append((x, 1, it))
            chain.append(it)
        chains[(a, b)] = chain
    out = {row: [it for _, _, it in sorted(items, key=lambda t: (t[0], t[1]))]
           for row, items in rows.items()}
    return out, chains
