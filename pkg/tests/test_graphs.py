"""Graph core: construction, equality, metric oracle, barycentric subdivision."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vers.graphs import (
    INFINITY,
    VTYPE,
    Edge,
    GraphError,
    TypedGraph,
    barycentric_subdivision,
    bfs_distance,
    erase_colors,
    graph_equal,
    relabel,
    subdivision_colors,
    subdivision_kappa,
    validate_kappa_compatible,
)


def g(vertices, edges):
    return TypedGraph.build(vertices, edges)


# ----- construction -----------------------------------------------------------


def test_build_rejects_duplicate_vertices():
    with pytest.raises(GraphError):
        g([("u", "t"), ("u", "t")], [])


def test_build_rejects_duplicate_edge_ids():
    with pytest.raises(GraphError):
        g([("u", "t")], [Edge("e", "u", "u", "c"), Edge("e", "u", "u", "c")])


def test_build_rejects_unknown_endpoints():
    with pytest.raises(GraphError):
        g([("u", "t")], [Edge("e", "u", "w", "c")])


def test_parallel_edges_are_kept():
    h = g([("u", "t")], [Edge("e1", "u", "u", "c"), Edge("e2", "u", "u", "c")])
    assert len(h.edges) == 2


# ----- labeled equality ---------------------------------------------------------


def test_graph_equal_ignores_ids_and_order():
    h1 = g([("u", "t"), ("w", "t")], [Edge("e1", "u", "w", "c"), Edge("e2", "w", "u", "d")])
    h2 = g([("w", "t"), ("u", "t")], [Edge("x", "w", "u", "d"), Edge("y", "u", "w", "c")])
    assert graph_equal(h1, h2)


def test_graph_equal_counts_parallel_multiplicity():
    h1 = g([("u", "t")], [Edge("e1", "u", "u", "c")])
    h2 = g([("u", "t")], [Edge("e1", "u", "u", "c"), Edge("e2", "u", "u", "c")])
    assert not graph_equal(h1, h2)


def test_graph_equal_sees_types_colors_direction():
    base = g([("u", "t"), ("w", "t")], [Edge("e", "u", "w", "c")])
    assert not graph_equal(base, g([("u", "t"), ("w", "t2")], [Edge("e", "u", "w", "c")]))
    assert not graph_equal(base, g([("u", "t"), ("w", "t")], [Edge("e", "u", "w", "d")]))
    assert not graph_equal(base, g([("u", "t"), ("w", "t")], [Edge("e", "w", "u", "c")]))


# ----- distances ----------------------------------------------------------------


def test_bfs_distance_path_and_disconnection():
    h = g(
        [("a", "t"), ("b", "t"), ("c", "t"), ("z", "t")],
        [Edge("e1", "a", "b", "c"), Edge("e2", "c", "b", "c")],
    )
    assert bfs_distance(h, "a", "a") == 0
    assert bfs_distance(h, "a", "c") == 2
    assert bfs_distance(h, "c", "a") == 2
    assert bfs_distance(h, "a", "z") == INFINITY


def test_bfs_distance_unknown_vertex():
    h = g([("a", "t")], [])
    with pytest.raises(GraphError):
        bfs_distance(h, "a", "missing")


def _floyd_warshall(n, pairs):
    dist = [[0 if i == j else INFINITY for j in range(n)] for i in range(n)]
    for i, j in pairs:
        if i != j:
            dist[i][j] = dist[j][i] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                via = dist[i][k] + dist[k][j]
                if via < dist[i][j]:
                    dist[i][j] = via
    return dist


@given(st.data())
def test_bfs_distance_matches_all_pairs_oracle(data):
    n = data.draw(st.integers(min_value=1, max_value=8))
    pairs = data.draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
            max_size=16,
        )
    )
    h = g(
        [(i, "t") for i in range(n)],
        [Edge(f"e{k}", i, j, "c") for k, (i, j) in enumerate(pairs)],
    )
    oracle = _floyd_warshall(n, pairs)
    for i in range(n):
        for j in range(n):
            assert bfs_distance(h, i, j) == oracle[i][j]


# ----- barycentric subdivision ----------------------------------------------------


def _loops_graph():
    # one vertex with two loops of the same color
    return g([("n", "nodetype")], [Edge("L", "n", "n", "c"), Edge("R", "n", "n", "c")])


def test_barycentric_counts_and_shape():
    b = barycentric_subdivision(_loops_graph())
    assert len(b.vertices) == 3  # original + one midpoint per edge
    assert len(b.edges) == 4  # two halves per edge
    types = b.vertex_types()
    assert types["n"] == VTYPE
    assert types["L"] == "c" and types["R"] == "c"
    ci, ct = subdivision_colors("c")
    got = sorted((e.src, e.dst, e.color) for e in b.edges)
    assert got == sorted(
        [("n", "L", ci), ("L", "n", ct), ("n", "R", ci), ("R", "n", ct)]
    )


def test_barycentric_is_kappa_compatible_with_subdivision_kappa():
    b = barycentric_subdivision(_loops_graph())
    report = validate_kappa_compatible(b, subdivision_kappa(["c"]))
    assert report.ok, report.issues


def test_barycentric_counts_general():
    h = g(
        [("u", "x"), ("w", "x")],
        [Edge("e1", "u", "w", "c"), Edge("e2", "u", "w", "d"), Edge("e3", "w", "w", "c")],
    )
    b = barycentric_subdivision(h)
    assert len(b.vertices) == len(h.vertices) + len(h.edges)
    assert len(b.edges) == 2 * len(h.edges)
    # midpoint of a directed edge u->w: in-half u->mid, out-half mid->w
    srcs = {e.dst for e in b.edges if e.src == "u"}
    assert srcs == {"e1", "e2"}


def test_barycentric_rejects_id_collision():
    h = g([("e1", "x"), ("w", "x")], [Edge("e1", "e1", "w", "c")])
    with pytest.raises(GraphError):
        barycentric_subdivision(h)


# ----- relabel / erase ----------------------------------------------------------


def test_relabel_and_injectivity():
    h = g([("u", "t"), ("w", "t")], [Edge("e", "u", "w", "c")])
    r = relabel(h, {"u": 0, "w": 1})
    assert r.edges[0].src == 0 and r.edges[0].dst == 1
    with pytest.raises(GraphError):
        relabel(h, {"u": 0, "w": 0})


def test_erase_colors_keeps_listed():
    h = g([("u", "t")], [Edge("e1", "u", "u", "c"), Edge("e2", "u", "u", "d")])
    r = erase_colors(h, keep=("d",))
    assert sorted(e.color for e in r.edges) == ["", "d"]
