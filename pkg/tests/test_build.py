import pytest
from hypothesis import given, strategies as st

from tcspan.build import (
    PrefixCode,
    bipartite_poset,
    bipartite_single_steiner,
    build_steiner_2tc,
    lcp_point,
    path_query,
    prefix_code,
    prefix_point,
    spanner_from_dict,
    spanner_to_dict,
    spanner_to_dot,
)
from tcspan.poset import (
    EmbeddingError,
    Poset,
    canonicalize_embedding,
    dominance_leq,
    hypergrid,
    iter_comparable_pairs,
)

import helpers


# --- prefix machinery -------------------------------------------------------


@pytest.mark.parametrize(
    "t,i,ell,expected",
    [
        (0, 0, 2, 2),  # b=00 -> 10
        (0, 1, 2, 1),  # b=00 -> 01
        (5, 2, 3, 5),  # b=101 -> prefix "10" + "1"
    ],
)
def test_prefix_point_examples(t, i, ell, expected):
    assert prefix_point(t, i, ell) == expected
    assert prefix_code(t, i, ell).to_int() == expected


@given(st.integers(1, 10), st.data())
def test_prefix_point_matches_string_oracle(ell, data):
    t = data.draw(st.integers(0, 2**ell - 1))
    i = data.draw(st.integers(0, ell - 1))
    assert prefix_point(t, i, ell) == helpers.string_prefix_point(t, i, ell)


def test_prefix_point_range_errors():
    with pytest.raises(ValueError):
        prefix_point(0, 2, 2)
    with pytest.raises(ValueError):
        prefix_point(4, 0, 2)


def test_prefix_code_validates():
    with pytest.raises(ValueError):
        PrefixCode(3, "01")
    with pytest.raises(ValueError):
        PrefixCode(2, "0x")


@pytest.mark.parametrize(
    "x,y,ell,expected",
    [
        ((1,), (3,), 2, (2,)),  # empty common prefix
        ((0,), (1,), 2, (1,)),  # common prefix "0"
        ((0, 1), (1, 3), 2, (1, 2)),  # per-dimension
    ],
)
def test_lcp_point_examples(x, y, ell, expected):
    assert lcp_point(x, y, ell) == expected


def test_lcp_point_rejects_equal_coordinate():
    with pytest.raises(EmbeddingError):
        lcp_point((1, 2), (1, 3), 2)


@given(st.integers(1, 8), st.data())
def test_lcp_point_lies_between(ell, data):
    d = data.draw(st.integers(1, 3))
    x, y = [], []
    for _ in range(d):
        a = data.draw(st.integers(0, 2**ell - 1))
        b = data.draw(st.integers(0, 2**ell - 1))
        if a == b:
            b = (a + 1) % 2**ell
        x.append(min(a, b))
        y.append(max(a, b))
    z = lcp_point(tuple(x), tuple(y), ell)
    assert dominance_leq(tuple(x), z) and dominance_leq(z, tuple(y))
    assert z != tuple(x)


# --- construction -----------------------------------------------------------


def test_line4_exact_edges():
    h = build_steiner_2tc(hypergrid(4, 1))
    # ids are coords + 1 on a line
    assert h.edges == ((1, 2), (1, 3), (2, 3), (3, 4))
    assert h.steiner_coords == ()


def test_line2_single_edge():
    h = build_steiner_2tc(hypergrid(2, 1))
    assert h.edges == ((1, 2),)


def test_single_element_empty():
    h = build_steiner_2tc(Poset(1, 1, ((0,),)))
    assert h.edges == ()
    assert h.steiner_coords == ()


def test_non_canonical_rejected():
    with pytest.raises(EmbeddingError):
        build_steiner_2tc(hypergrid(2, 2))


def test_sparse_coordinates_rejected():
    # distinct per dimension but outside the dyadic grid for n=2
    with pytest.raises(EmbeddingError):
        build_steiner_2tc(Poset(1, 9, ((0,), (8,))))


def test_deterministic():
    p = canonicalize_embedding(hypergrid(3, 2))
    assert build_steiner_2tc(p) == build_steiner_2tc(p)


@pytest.mark.parametrize("m,d", [(8, 1), (16, 1), (3, 2), (4, 2), (2, 3)])
def test_edge_bound_and_two_hop(m, d):
    g = hypergrid(m, d)
    p = g if g.is_canonical else canonicalize_embedding(g)
    h = build_steiner_2tc(p)
    assert len(h.edges) <= p.n * h.ell**d
    adj = helpers.adjacency(h.edges)
    for u, v in iter_comparable_pairs(p):
        assert helpers.bfs_dist(adj, u).get(v, 99) <= 2


@pytest.mark.parametrize("seed", range(10))
def test_random_posets_two_hop(seed):
    import numpy as np

    rng = np.random.Generator(np.random.Philox(key=[seed, 1]))
    d = int(rng.integers(1, 4))
    n = int(rng.integers(2, min(40, 8**d + 1)))
    pts = helpers.random_distinct_points(rng, n, d, 8)
    p = canonicalize_embedding(Poset(d, 8, pts))
    h = build_steiner_2tc(p)
    adj = helpers.adjacency(h.edges)
    for u, v in iter_comparable_pairs(p):
        assert helpers.bfs_dist(adj, u).get(v, 99) <= 2


# --- path queries ------------------------------------------------------------


def test_path_query_line4():
    h = build_steiner_2tc(hypergrid(4, 1))
    assert path_query(h, 1, 4) == ((1, 3), (3, 4))  # relay at coord 2
    assert path_query(h, 1, 2) == ((1, 2),)
    assert path_query(h, 2, 3) == ((2, 3),)


def test_path_query_rejects_bad_pairs():
    h = build_steiner_2tc(hypergrid(4, 1))
    with pytest.raises(ValueError):
        path_query(h, 2, 2)
    with pytest.raises(ValueError):
        path_query(h, 4, 1)


def test_path_query_exhaustive_line():
    h = build_steiner_2tc(hypergrid(64, 1))
    for x in range(1, 65):
        for y in range(x + 1, 65):
            path = path_query(h, x, y)
            assert 1 <= len(path) <= 2
            for e in path:
                assert e in h.edge_set
            if len(path) == 2:
                z = path[0][1]
                cz = h.coords(z)
                assert dominance_leq(h.coords(x), cz)
                assert dominance_leq(cz, h.coords(y))


# --- bipartite construction ---------------------------------------------------


@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_bipartite_edge_count(n):
    s = bipartite_single_steiner(n)
    assert s.n_vertices == n + 1
    assert len(s.edges) == n
    assert len(s.steiner_coords) == 1


def test_bipartite_rejects_odd():
    with pytest.raises(ValueError):
        bipartite_single_steiner(5)


def test_bipartite_embedding_is_complete_bipartite():
    p = bipartite_poset(8)
    h = 4
    for i in range(1, h + 1):
        for j in range(1, h + 1):
            assert p.leq(i, h + j)
            if i != j:
                assert not p.leq(i, j) and not p.leq(j, i)
                assert not p.leq(h + i, h + j)


def test_bipartite_all_pairs_distance_two():
    n = 8
    s = bipartite_single_steiner(n)
    adj = helpers.adjacency(s.edges)
    for left in range(1, n // 2 + 1):
        dist = helpers.bfs_dist(adj, left)
        for right in range(n // 2 + 1, n + 1):
            assert dist[right] == 2


# --- serialization ------------------------------------------------------------


def test_spanner_roundtrip():
    p = canonicalize_embedding(hypergrid(3, 2))
    h = build_steiner_2tc(p)
    data = spanner_to_dict(h)
    assert data["originals"] == p.n
    back = spanner_from_dict(data)
    assert back == h
    back2 = spanner_from_dict(
        {"originals": data["originals"], "steiners": data["steiners"], "edges": data["edges"], "ell": h.ell},
        poset=p,
    )
    assert back2 == h


def test_spanner_dict_requires_poset():
    h = build_steiner_2tc(hypergrid(4, 1))
    bare = {"originals": 4, "steiners": [], "edges": [[1, 2]]}
    with pytest.raises(ValueError):
        spanner_from_dict(bare)


def test_dot_export_mentions_all_vertices():
    h = build_steiner_2tc(canonicalize_embedding(hypergrid(2, 2)))
    dot = spanner_to_dot(h)
    for vid in range(1, h.n_vertices + 1):
        assert f"v{vid}" in dot
