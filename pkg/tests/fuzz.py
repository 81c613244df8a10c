"""Random local edits of poly-line drawings, for checker cross-validation."""
from fractions import Fraction

from wlspan.drawing import PolylineDrawing


def _xs_on(p, y):
    xs = [x for x, yy in p.positions.values() if yy == y]
    xs += [x for e in p.edges for x, yy in e[2] if yy == y]
    return sorted(set(xs)) or [Fraction(0)]


def _near(p, y, rng):
    xs = _xs_on(p, y)
    x = rng.choice(xs)
    return x + rng.choice([Fraction(-1, 2), Fraction(0), Fraction(1, 3), Fraction(1)])


def mutate(p: PolylineDrawing, rng) -> PolylineDrawing:
    pos = dict(p.positions)
    edges = [list(e) for e in p.edges]
    kind = rng.randrange(5)
    verts = sorted(pos)
    if kind == 0 and verts:
        v = rng.choice(verts)
        same = [w for w in verts if pos[w][1] == pos[v][1] and w != v]
        if same:
            w = rng.choice(same)
            pos[v], pos[w] = pos[w], pos[v]
    elif kind == 1 and verts:
        v = rng.choice(verts)
        x, y = pos[v]
        pos[v] = (_near(p, y, rng), y)
    elif kind == 2:
        bent = [e for e in edges if e[2]]
        if bent:
            e = rng.choice(bent)
            bends = list(e[2])
            i = rng.randrange(len(bends))
            x, y = bends[i]
            bends[i] = (_near(p, y, rng), y)
            e[2] = tuple(bends)
    elif kind == 3 and verts:
        v = rng.choice(verts)
        x, y = pos[v]
        pos[v] = (x, y + rng.choice([-1, 1]))
    elif kind == 4 and edges:
        e = rng.choice(edges)
        e[2] = tuple(reversed(e[2]))
    return PolylineDrawing(pos, tuple((u, v, tuple(b)) for u, v, b in edges))
