import pytest
from hypothesis import given, strategies as st

from oracles import connected_graphs_up_to_iso, naive_drawable, naive_drawable_flat, naive_min_span
from wlspan.drawing import check_geometric, span_of
from wlspan.errors import NonPlanarInput, SizeCapExceeded
from wlspan.generators import gen_W, gen_random_planar
from wlspan.graph import graph_from_edges, is_planar
from wlspan.solver import (
    decide_span,
    feasible_levelings,
    iter_levelings,
    level_planar_fixed_leveling,
    min_span_wlp,
)

C3 = graph_from_edges([(0, 1), (1, 2), (0, 2)])
C4 = graph_from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
K24 = graph_from_edges([(a, m) for a in (0, 1) for m in range(2, 6)])


def test_c4_fixed_leveling_feasible():
    assert level_planar_fixed_leveling(C4, {0: 0, 1: 1, 2: 1, 3: 0}) is not None


def test_c4_alternating_levels_infeasible():
    # K_{2,2} between two levels always crosses
    lev = {0: 0, 1: 1, 2: 0, 3: 1}
    assert level_planar_fixed_leveling(C4, lev) is None
    assert not naive_drawable_flat(C4, lev)


def test_k24_poles_on_one_level_infeasible():
    lev = {0: 0, 1: 0, 2: 1, 3: 1, 4: -1, 5: -1}
    assert level_planar_fixed_leveling(K24, lev) is None
    assert level_planar_fixed_leveling(K24, {0: 0, 1: 0, 2: 1, 3: 1, 4: 1, 5: 1}) is None


def test_horizontal_edge_feasible():
    assert level_planar_fixed_leveling(graph_from_edges([(0, 1)]), {0: 0, 1: 0}) is not None


def test_fixed_leveling_matches_flat_enumeration():
    for lev in ({0: 0, 1: 1, 2: 1, 3: 0}, {0: 0, 1: 0, 2: 0, 3: 0}, {0: 0, 1: 2, 2: 0, 3: 1}):
        assert (level_planar_fixed_leveling(C4, lev) is not None) == naive_drawable_flat(C4, lev)


def test_path_span_zero():
    assert min_span_wlp(graph_from_edges([(i, i + 1) for i in range(6)])).optimum == 0


def test_triangle_span_one():
    res = min_span_wlp(C3)
    assert res.optimum == 1 and res.witness.span() == 1


def test_k24_property_four():
    res = min_span_wlp(K24)
    assert res.optimum == 1
    for lev in feasible_levelings(K24, 1, max_height=5):
        assert abs(lev[0] - lev[1]) == 2
        assert all(lev[m] == (lev[0] + lev[1]) // 2 for m in range(2, 6))


def test_w21_pole_edge_forced_to_span_two():
    w = gen_W(2, 1)
    n, s_ = w.marks["north-pole"], w.marks["south-pole"]
    ok, wit, lev = decide_span(w.graph, 2)
    assert ok and abs(lev[n] - lev[s_]) == 2
    assert not decide_span(w.graph, 1)[0]
    levs = feasible_levelings(w.graph, 2)
    assert levs and all(abs(lv[n] - lv[s_]) == 2 for lv in levs)


def test_triangle_not_span_zero():
    assert decide_span(C3, 0)[0] is False


def test_size_cap():
    big = graph_from_edges([(i, i + 1) for i in range(12)])
    with pytest.raises(SizeCapExceeded):
        decide_span(big, 1)
    assert decide_span(big, 0, cap=13)[0]


def test_non_planar_rejected():
    k5 = graph_from_edges([(i, j) for i in range(5) for j in range(i + 1, 5)])
    with pytest.raises(NonPlanarInput):
        min_span_wlp(k5)


def test_disconnected_result_is_max():
    g = graph_from_edges([(0, 1), (1, 2), (0, 2), (3, 4)])
    res = min_span_wlp(g)
    assert res.optimum == 1 and check_geometric(res.witness)


def test_canonical_enumeration_covers_reflections():
    # every leveling of the path on 3 vertices, up to shift and reflection
    p3 = graph_from_edges([(0, 1), (1, 2)])
    canon = list(iter_levelings(p3, 1, canonical=True))
    full = list(iter_levelings(p3, 1, canonical=False))
    assert len(canon) < len(full)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_min_span_matches_naive(n):
    for g in connected_graphs_up_to_iso(n):
        if not is_planar(g):
            continue
        res = min_span_wlp(g)
        assert res.optimum == naive_min_span(g), g.edges
        assert check_geometric(res.witness) and res.witness.span() == res.optimum


@pytest.mark.slow
def test_min_span_matches_naive_six():
    for g in connected_graphs_up_to_iso(6):
        if is_planar(g):
            assert min_span_wlp(g).optimum == naive_min_span(g), g.edges


def test_naive_oracles_agree_on_small_levelings():
    for lev in ({0: 0, 1: 1, 2: 2, 3: 1}, {0: 0, 1: 1, 2: 1, 3: 1}, {0: 0, 1: 0, 2: 1, 3: 1}):
        assert naive_drawable(C4, lev) == naive_drawable_flat(C4, lev)


@given(st.integers(1, 8), st.integers(0, 10_000), st.integers(0, 2))
def test_monotone_and_sound(n, seed, s):
    g = gen_random_planar(n, seed=seed)
    ok, w, lev = decide_span(g, s)
    if ok:
        assert check_geometric(w) and w.span() <= s and span_of(lev, g) <= s
        assert w.levels == lev
        assert decide_span(g, s + 1)[0]
    else:
        assert not decide_span(g, max(s - 1, 0))[0]


def test_string_vertex_ids():
    g = graph_from_edges([("a", "m"), ("b", "m"), ("a", "n"), ("b", "n"), ("a", "b")])
    ok, w, lev = decide_span(g, 1)
    assert ok and check_geometric(w) and w.span() <= 1
    assert min_span_wlp(g).optimum == 1
