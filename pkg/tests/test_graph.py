import pytest
from hypothesis import given, strategies as st

from oracles import brute_k_connected
from wlspan.errors import DanglingEndpoint, InvalidInput, NonPlanarRotation, ParallelEdge, SelfLoop
from wlspan.generators import gen_W
from wlspan.graph import (
    build_graph,
    components,
    embed,
    face_key,
    graph_from_edges,
    graph_from_json,
    graph_to_json,
    is_connected,
    is_k_connected,
    is_planar,
    is_planar_by_rotation_search,
    make_plane_graph,
    plane_is_3_connected,
    smooth_degree_two,
    trace_faces,
)


def K(n):
    return graph_from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return graph_from_edges([p for p, k in zip(pairs, keep) if k], vertices=range(n))


def test_build_triangle():
    g = build_graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert g.n == 3 and g.m == 3


@pytest.mark.parametrize("vs,es,err", [
    ([1], [(1, 1)], SelfLoop),
    ([1, 2], [(1, 2), (2, 1)], ParallelEdge),
    ([1, 2], [(1, 3)], DanglingEndpoint),
])
def test_build_rejects(vs, es, err):
    with pytest.raises(err):
        build_graph(vs, es)


def test_duplicate_vertex_rejected():
    with pytest.raises(InvalidInput):
        build_graph([1, 1], [])


def test_faces_of_triangle():
    g = K(3)
    pg = make_plane_graph(g, {0: (1, 2), 1: (2, 0), 2: (0, 1)})
    faces = trace_faces(pg)
    assert sorted(len(f) for f in faces) == [3, 3]


def test_faces_of_k4():
    faces = trace_faces(embed(K(4)))
    assert len(faces) == 4 and all(len(f) == 3 for f in faces)


def test_k5_rotation_is_rejected():
    rot = {v: tuple(w for w in range(5) if w != v) for v in range(5)}
    with pytest.raises(NonPlanarRotation):
        make_plane_graph(K(5), rot)


def test_every_dart_on_one_face():
    pg = embed(K(4))
    darts = [(f[i], f[(i + 1) % len(f)]) for f in trace_faces(pg) for i in range(len(f))]
    assert len(darts) == len(set(darts)) == 2 * pg.graph.m


def test_outer_face_is_canonical():
    pg = embed(K(4))
    f = trace_faces(pg)[0]
    pg2 = make_plane_graph(pg.graph, pg.rotation, f[1:] + f[:1])
    assert pg2.outer_face == face_key(f)


def test_connectivity_examples():
    assert is_k_connected(K(4), 3)
    assert not is_k_connected(graph_from_edges([(0, 1), (1, 2), (2, 3)]), 2)
    w = gen_W(2, 1).graph
    assert is_k_connected(w, 2) and not is_k_connected(w, 3)


def test_components_and_connected():
    g = graph_from_edges([(0, 1), (2, 3)], vertices=[4])
    assert sorted(map(sorted, components(g))) == [[0, 1], [2, 3], [4]]
    assert not is_connected(g)


@given(small_graphs())
def test_k_connectivity_matches_cut_enumeration(g):
    for k in (1, 2, 3):
        assert is_k_connected(g, k) == brute_k_connected(g, k)


@given(small_graphs(max_n=6))
def test_planarity_matches_rotation_search(g):
    assert is_planar(g) == is_planar_by_rotation_search(g)


@given(small_graphs(max_n=8))
def test_face_based_3_connectivity(g):
    if not is_planar(g) or not is_connected(g):
        return
    pg = embed(g)
    assert plane_is_3_connected(pg) == brute_k_connected(g, 3)


@given(small_graphs(max_n=8))
def test_euler_on_embeddings(g):
    if not is_planar(g) or not is_connected(g) or g.m == 0:
        return
    pg = embed(g)
    assert g.n - g.m + len(trace_faces(pg)) == 2


def test_smooth_path():
    g = graph_from_edges([(0, 1), (1, 2)])
    assert smooth_degree_two(g, {0, 2}).edges == ((0, 2),)


def test_smooth_merges_parallel_edges():
    c4 = graph_from_edges([(0, 1), (1, 2), (2, 3), (3, 0)])
    out = smooth_degree_two(c4, {0, 2})
    assert out.vertices == (0, 2) and out.edges == ((0, 2),)


def test_smooth_without_degree_two_is_identity():
    assert smooth_degree_two(K(4)) == K(4)


@given(small_graphs())
def test_smooth_is_idempotent(g):
    once = smooth_degree_two(g)
    assert smooth_degree_two(once) == once


def test_json_round_trip():
    pg = embed(K(4))
    doc = graph_to_json(pg, marks={"root": 0}, leveling={v: v for v in range(4)})
    back = graph_from_json(doc)
    assert back["graph"] == pg.graph
    assert back["plane"].rotation == pg.rotation
    assert back["marks"] == {"root": 0} and back["leveling"][3] == 3
