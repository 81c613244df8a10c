import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fuzz import mutate
from wlspan.drawing import (
    NormalizedDrawing,
    PolylineDrawing,
    Virtual,
    check_geometric,
    check_normalized,
    check_via_normalized,
    compact_levels,
    drawing_from_json,
    drawing_to_json,
    height_of,
    make_drawing,
    nesting_violations,
    normalize,
    queue_layout,
    realize,
    span_of,
    weak_to_strict,
)
from wlspan.errors import InconsistentSubdivision, MissingLevel, NotCoFacial
from wlspan.generators import gen_random_cycle_tree, gen_random_planar
from wlspan.graph import embed, graph_from_edges
from wlspan.solver import decide_span
from wlspan.stdraw import st_leveled_drawing


def path(n):
    return graph_from_edges([(i, i + 1) for i in range(n - 1)])


def test_span_and_height():
    assert span_of({0: 0, 1: 1, 2: 2}, path(3)) == 1
    assert height_of({0: 0, 1: 1, 2: 2}) == 2
    k24 = graph_from_edges([(a, m) for a in (0, 1) for m in range(2, 6)])
    lev = {0: 0, 1: 2, 2: 1, 3: 1, 4: 1, 5: 1}
    assert span_of(lev, k24) == 1
    assert span_of({0: 5, 1: 5}, path(2)) == 0


def test_span_needs_every_level():
    with pytest.raises(MissingLevel):
        span_of({0: 0}, path(2))


@pytest.mark.parametrize("lev,out", [
    ({"a": 0, "b": 5}, {"a": 0, "b": 1}),
    ({"a": 0, "b": 1}, {"a": 0, "b": 1}),
    ({"a": 2, "b": 2, "c": 7}, {"a": 0, "b": 0, "c": 1}),
])
def test_compact_levels(lev, out):
    assert compact_levels(lev) == out


@given(st.dictionaries(st.integers(0, 6), st.integers(-20, 20), min_size=2))
def test_compaction_never_raises_span(lev):
    vs = sorted(lev)
    g = graph_from_edges([(a, b) for a, b in zip(vs, vs[1:])])
    c = compact_levels(lev)
    assert span_of(c, g) <= span_of(lev, g)
    assert all((lev[a] < lev[b]) == (c[a] < c[b]) for a in vs for b in vs)


def _nd(orders, edges, chains=None):
    g = graph_from_edges(edges)
    ch = chains or {e: () for e in edges}
    return NormalizedDrawing(g, orders, ch)


def test_condition_ii_violation():
    nd = _nd({0: ("u", "w"), 1: ("x", "v")}, [("u", "v"), ("w", "x")])
    v = check_normalized(nd)
    assert not v and v.condition == "ii" and v.level == 0


def test_condition_i_violation():
    nd = _nd({0: ("u", "z", "v")}, [("u", "v")])
    v = check_normalized(nd)
    assert not v and v.condition == "i"


def test_single_edge_valid():
    assert check_normalized(_nd({0: ("a",), 1: ("b",)}, [("a", "b")]))


def test_inconsistent_subdivision():
    nd = _nd({0: ("a",), 2: ("b",)}, [("a", "b")])
    with pytest.raises(InconsistentSubdivision):
        check_normalized(nd)


def test_normalize_adds_virtual_at_bend():
    p = make_drawing({0: (0, 0), 1: (0, 2)}, [(0, 1, [(1, 1)])])
    nd = normalize(p)
    assert nd.chains[(0, 1)] == (Virtual(0, 1, 0),)
    assert nd.orders[1] == (Virtual(0, 1, 0),)


def test_normalize_horizontal_edge():
    p = make_drawing({0: (0, 0), 1: (1, 0)}, [(0, 1)])
    nd = normalize(p)
    assert nd.chains[(0, 1)] == () and nd.orders == {0: (0, 1)}


def test_crossing_found_by_both_checkers():
    p = make_drawing({0: (0, 0), 1: (1, 1), 2: (1, 0), 3: (0, 1)}, [(0, 1), (2, 3)])
    geo, comb = check_geometric(p), check_via_normalized(p)
    assert not geo and not comb
    assert geo.condition == "crossing" and comb.condition == "ii"


def test_disjoint_edges_valid():
    p = make_drawing({0: (0, 0), 1: (0, 1), 2: (1, 0), 3: (1, 1)}, [(0, 1), (2, 3)])
    assert check_geometric(p)


def test_overlapping_horizontal_edges():
    p = make_drawing({0: (0, 0), 1: (2, 0), 2: (1, 0), 3: (3, 0)}, [(0, 1), (2, 3)])
    assert not check_geometric(p)
    assert not check_via_normalized(p)


def test_drawing_json_round_trip():
    p = make_drawing({0: (Fraction(1, 3), 0), 1: (0, 2)}, [(0, 1, [(Fraction(5, 7), 1)])])
    assert drawing_from_json(drawing_to_json(p)) == p


def test_strict_single_horizontal_edge():
    p = make_drawing({0: (0, 0), 1: (1, 0)}, [(0, 1)])
    q = weak_to_strict(p)
    assert q.is_strict() and q.span() <= 1 and q.height() <= 1 and check_geometric(q)


def test_strict_triangle():
    ok, w, _ = decide_span(graph_from_edges([(0, 1), (1, 2), (0, 2)]), 1)
    assert ok and w.span() == 1
    q = weak_to_strict(w)
    assert q.is_strict() and q.span() <= 3 and q.height() <= 2 * w.height() + 1
    assert check_geometric(q)


def _witnesses():
    out = []
    for seed in range(12):
        g = gen_random_planar(7, seed=seed)
        for s in (0, 1, 2):
            ok, w, _ = decide_span(g, s)
            if ok:
                out.append(w)
                break
    return out


WITNESSES = _witnesses()


@pytest.mark.parametrize("i", range(len(WITNESSES)))
def test_strict_transform_bounds(i):
    p = WITNESSES[i]
    q = weak_to_strict(p)
    assert check_geometric(q) and q.is_strict()
    assert q.span() <= 2 * p.span() + 1 and q.height() <= 2 * p.height() + 1
    assert set(q.positions) == set(p.positions)


@pytest.mark.parametrize("i", range(len(WITNESSES)))
def test_queue_layout_bounds(i):
    p = WITNESSES[i]
    ql = queue_layout(p)
    assert ql.num_queues <= p.span() + 1
    assert nesting_violations(ql) == []


def test_queue_layout_path_and_star():
    p = make_drawing({0: (0, 0), 1: (0, 1), 2: (1, 0)}, [(0, 1), (1, 2)])
    assert queue_layout(p).num_queues <= 2
    star = make_drawing({0: (0, 0), 1: (0, 1), 2: (1, 1), 3: (2, 1)}, [(0, 1), (0, 2), (0, 3)])
    ql = queue_layout(star)
    assert ql.num_queues in (1, 2) and not nesting_violations(ql)


def test_queue_layout_cycle_tree_span_four():
    from wlspan.cycletree import draw_3conn_cycle_tree

    d = draw_3conn_cycle_tree(gen_random_cycle_tree(40, seed=5))
    ql = queue_layout(d)
    assert ql.num_queues <= 5 and not nesting_violations(ql)


def test_st_drawing_single_edge():
    d = st_leveled_drawing(embed(path(2)), 0)
    assert d.levels[0] < d.levels[1]


def test_st_drawing_c4_opposite():
    c4 = graph_from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    d = st_leveled_drawing(embed(c4), 0, 2)
    lv = d.levels
    assert check_geometric(d) and len(set(lv.values())) == 4
    assert lv[0] == min(lv.values()) and lv[2] == max(lv.values()) and d.span() == 2


def test_st_drawing_k4():
    k4 = graph_from_edges([(i, j) for i in range(4) for j in range(i + 1, 4)])
    d = st_leveled_drawing(embed(k4), 2)
    assert check_geometric(d) and len(set(d.levels.values())) == 4


def test_st_drawing_needs_common_face():
    from wlspan.generators import nested_triangles_plane

    pg = nested_triangles_plane(3)
    inner = [v for v in pg.graph.vertices if v not in pg.outer_face]
    with pytest.raises(NotCoFacial):
        st_leveled_drawing(pg, pg.outer_face[0], max(inner))


@given(st.integers(2, 14), st.integers(0, 10_000))
def test_st_drawing_one_vertex_per_level(n, seed):
    g = gen_random_planar(n, seed=seed)
    from wlspan.graph import components

    comp = max(components(g), key=len)
    sub = g.subgraph(comp)
    low = min(comp)
    d = st_leveled_drawing(embed(sub), low)
    lv = d.levels
    assert check_geometric(d)
    assert sorted(lv.values()) == list(range(min(lv.values()), min(lv.values()) + sub.n))
    assert lv[low] == min(lv.values())


@pytest.mark.parametrize("i", range(len(WITNESSES)))
def test_checkers_agree_on_mutations(i):
    rng = random.Random(i)
    p = WITNESSES[i]
    for _ in range(40):
        q = mutate(p, rng)
        assert bool(check_geometric(q)) == bool(check_via_normalized(q))


def test_adjacent_swap_flips_condition_ii():
    nd = _nd({0: ("a", "b"), 1: ("c", "d")}, [("a", "c"), ("b", "d")])
    assert check_normalized(nd)
    swapped = NormalizedDrawing(nd.graph, {0: ("b", "a"), 1: ("c", "d")}, nd.chains)
    v = check_normalized(swapped)
    assert not v and v.condition == "ii"


def test_realize_by_rank_round_trip():
    p = WITNESSES[0]
    nd = normalize(p)
    q = realize(nd.orders, nd.chains, nd.graph.vertices)
    assert normalize(q).orders == nd.orders and check_geometric(q)
