"""Stack-map construction, bijection with trees, distances and degrees."""

import numpy as np
import pytest

from stackmaps.maps import (
    QUADRANGULATION,
    TRIANGULATION,
    NotStackMapError,
    StackMap,
    adjacency_from_offspring,
    bfs_distance,
    bfs_distances_from,
    canonical_drawing,
    degree_via_tree,
    degree_via_tree_literal_quad,
    distance_matrix,
    grow,
    map_from_history,
    map_from_tree,
    theta,
    to_svg,
    tree_from_map,
)
from stackmaps.passage import gamma_prime_literal, quad_root_distance, tri_root_distance
from stackmaps.trees import (
    OrderedTree,
    enumerate_trees,
    rng_from_seed,
    sample_increasing_tree,
    sample_uniform_tree,
)


def test_theta_triangle():
    m = theta(TRIANGULATION)
    assert m.n_vertices == 3
    assert m.n_edges == 3
    assert m.leaf_faces() == [()]


def test_theta_square():
    m = theta(QUADRANGULATION)
    assert m.n_vertices == 4
    assert m.n_edges == 4


def test_grow_triangulation_euler():
    m = theta(TRIANGULATION)
    rng = rng_from_seed(1)
    for _ in range(30):
        faces = m.leaf_faces()
        m = grow(m, faces[int(rng.integers(len(faces)))])
        # Euler: V - E + F = 2 with F = finite faces + outer face
        n_faces = 1 + 2 * m.n_insertions  # finite triangles
        assert m.n_vertices - m.n_edges + (n_faces + 1) == 2


def test_grow_quadrangulation_euler():
    m = theta(QUADRANGULATION)
    rng = rng_from_seed(2)
    for _ in range(30):
        faces = m.leaf_faces()
        m = grow(m, faces[int(rng.integers(len(faces)))])
        n_faces = 1 + m.n_insertions
        assert m.n_vertices - m.n_edges + (n_faces + 1) == 2


def test_map_from_history_matches_tree():
    # inserting in lexicographic face order replays map_from_tree
    t = OrderedTree(3, [3, 3, 0, 0, 0, 0, 0])
    m1 = map_from_tree(t, TRIANGULATION)
    m2 = map_from_history([(), (1,)], TRIANGULATION)
    assert m1 == m2


def test_roundtrip_exhaustive_small():
    for family, arity in ((TRIANGULATION, 3), (QUADRANGULATION, 2)):
        for n in range(5):
            for t in enumerate_trees(arity, n):
                assert tree_from_map(map_from_tree(t, family)) == t


def test_roundtrip_sampled_large():
    rng = rng_from_seed(4)
    for family, arity in ((TRIANGULATION, 3), (QUADRANGULATION, 2)):
        t = sample_uniform_tree(arity, 500, rng)
        assert tree_from_map(map_from_tree(t, family)) == t


def test_map_from_tree_injective_small():
    for family, arity in ((TRIANGULATION, 3), (QUADRANGULATION, 2)):
        for n in range(5):
            maps = [map_from_tree(t, family) for t in enumerate_trees(arity, n)]
            assert len(set(maps)) == len(maps)


def _non_stack_triangulation() -> StackMap:
    """A triangulation of the triangle that no insertion history produces:
    an inner triangle x,y,z with each inner vertex joined to two boundary
    corners (the octahedron drawn in a triangle)."""
    A, B, C, x, y, z = range(6)
    edges = [
        (A, B), (B, C), (C, A),
        (x, y), (y, z), (z, x),
        (x, A), (x, B), (y, B), (y, C), (z, C), (z, A),
    ]
    adj = [[] for _ in range(6)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    m = StackMap(TRIANGULATION)
    m.adjacency = adj
    m.vertex_words = [None] * 6
    return m


def test_tree_from_map_rejects_non_stack():
    with pytest.raises(NotStackMapError):
        tree_from_map(_non_stack_triangulation())


def test_root_distance_identity_exhaustive():
    for n in range(1, 5):
        for t in enumerate_trees(3, n):
            m = map_from_tree(t, TRIANGULATION)
            d = distance_matrix(m, sources=[0])[0]
            for u in t.internal_words():
                assert d[m.vertex_of(u)] == tri_root_distance(u)


def test_quad_root_distance_identity_exhaustive():
    for n in range(1, 6):
        for t in enumerate_trees(2, n):
            m = map_from_tree(t, QUADRANGULATION)
            d = distance_matrix(m, sources=[0])[0]
            for u in t.internal_words():
                assert d[m.vertex_of(u)] == quad_root_distance(u)


def test_quad_literal_distance_discrepancy():
    t = OrderedTree.from_internal_words(2, {(), (1,)})
    m = map_from_tree(t, QUADRANGULATION)
    u = (1, 1)
    # (1,1) is a leaf word; its vertex is the one born at internal (1,)
    v = m.vertex_of((1,))
    assert bfs_distance(m, 0, v) == quad_root_distance((1,))
    assert quad_root_distance(u) == 3
    assert gamma_prime_literal(u) == 2


def test_degree_via_tree_matches_graph_tri():
    rng = rng_from_seed(8)
    for _ in range(5):
        t = sample_uniform_tree(3, 40, rng)
        m = map_from_tree(t, TRIANGULATION)
        for u in t.internal_words():
            assert degree_via_tree(t, u, TRIANGULATION) == m.degree(m.vertex_of(u))


def test_degree_via_tree_matches_graph_quad():
    rng = rng_from_seed(9)
    for _ in range(5):
        t = sample_uniform_tree(2, 40, rng)
        m = map_from_tree(t, QUADRANGULATION)
        for u in t.internal_words():
            assert degree_via_tree(t, u, QUADRANGULATION) == m.degree(m.vertex_of(u))


def test_degree_literal_quad_disagrees_somewhere():
    # the simple block language overcounts/undercounts on some trees
    found = False
    for t in enumerate_trees(2, 5):
        m = map_from_tree(t, QUADRANGULATION)
        for u in t.internal_words():
            lit = degree_via_tree_literal_quad(t, u)
            if lit != m.degree(m.vertex_of(u)):
                found = True
    assert found


def test_mean_degree_bound():
    # sum of degrees = 2E; triangulations have E = 3 + 3n
    rng = rng_from_seed(10)
    t = sample_uniform_tree(3, 100, rng)
    m = map_from_tree(t, TRIANGULATION)
    assert sum(m.degree(v) for v in range(m.n_vertices)) == 2 * m.n_edges
    assert m.n_edges == 3 + 3 * 100


def test_fast_adjacency_matches_map():
    rng = rng_from_seed(12)
    for family, arity in ((TRIANGULATION, 3), (QUADRANGULATION, 2)):
        t = sample_uniform_tree(arity, 60, rng)
        m = map_from_tree(t, family)
        adj = adjacency_from_offspring(t.offspring, family)
        assert [sorted(a) for a in adj] == [sorted(a) for a in m.adjacency]
        d_fast = bfs_distances_from(adj, 0)
        d_ref = distance_matrix(m, sources=[0])[0]
        assert (d_fast == d_ref).all()


def test_distance_matrix_symmetric():
    t = sample_uniform_tree(3, 30, rng_from_seed(13))
    m = map_from_tree(t, TRIANGULATION)
    d = distance_matrix(m)
    assert (d == d.T).all()
    assert (np.diag(d) == 0).all()


def test_json_roundtrip():
    t = sample_uniform_tree(3, 20, rng_from_seed(14))
    m = map_from_tree(t, TRIANGULATION)
    import json

    m2 = StackMap.from_json_dict(json.loads(m.to_json()))
    assert m == m2
    assert m2.faces == m.faces


def test_drawing_and_svg():
    t = sample_uniform_tree(3, 25, rng_from_seed(15))
    m = map_from_tree(t, TRIANGULATION)
    pos = canonical_drawing(m)
    assert set(pos) == set(range(m.n_vertices))
    svg = to_svg(m)
    assert svg.startswith("<svg")
    assert svg.count("<line") == m.n_edges


def test_growth_tree_map_consistency():
    it = sample_increasing_tree(3, 50, rng_from_seed(16))
    m = map_from_tree(it.shape(), TRIANGULATION)
    assert m.n_insertions == 50
    assert tree_from_map(m) == it.shape()
