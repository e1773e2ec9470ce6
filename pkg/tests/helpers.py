"""Independent reference implementations used as test oracles.

Everything here is written straight from first principles (subset
enumeration, BFS, string manipulation, definition-verbatim scans) and
deliberately shares no code with the library, so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from collections import deque


def bfs_dist(adj: dict[int, list[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj.get(u, ()):
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def adjacency(edges) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
    return adj


def leq(x, y) -> bool:
    return all(a <= b for a, b in zip(x, y))


def comparable_pairs(points) -> list[tuple[int, int]]:
    n = len(points)
    return [
        (u, v)
        for u in range(1, n + 1)
        for v in range(1, n + 1)
        if u != v and leq(points[u - 1], points[v - 1])
    ]


def spanner_ok(points, edges, k: int) -> bool:
    """Definition check: comparable pairs within k hops, others unreachable."""
    n = len(points)
    adj = adjacency(edges)
    pairs = set(comparable_pairs(points))
    for u in range(1, n + 1):
        dist = bfs_dist(adj, u)
        for v in range(1, n + 1):
            if u == v:
                continue
            if (u, v) in pairs:
                if dist.get(v, k + 1) > k:
                    return False
            elif v in dist:
                return False
    return True


def naive_min_spanner(points, k: int) -> int:
    """Exact minimum by enumerating edge subsets in increasing size."""
    candidates = sorted(comparable_pairs(points))
    for size in range(len(candidates) + 1):
        for subset in itertools.combinations(candidates, size):
            if spanner_ok(points, subset, k):
                return size
    raise AssertionError("full closure should always be feasible")


def string_prefix_point(t: int, i: int, ell: int) -> int:
    """Relay coordinate built by literal string surgery."""
    bits = bin(t)[2:].rjust(ell, "0")
    return int(bits[:i] + "1" + "0" * (ell - i - 1), 2)


def string_lcp_len(a: int, b: int, ell: int) -> int:
    sa = bin(a)[2:].rjust(ell, "0")
    sb = bin(b)[2:].rjust(ell, "0")
    i = 0
    while i < ell and sa[i] == sb[i]:
        i += 1
    return i


def naive_jumps(points) -> set[tuple]:
    """Definition-verbatim jump scan, O(n^2) per box pair.

    Returns tuples (a, b, ivec, jvec) with ids and the 1-based odd box.
    """
    n = len(points)
    d = len(points[0])
    ell = n.bit_length() - 1
    lp = ell // (d - 1)

    def inbox(pt, ivec, jvec) -> bool:
        return all(
            (jvec[t] - 1) * 2 ** (ell - ivec[t])
            <= pt[t + 1]
            <= jvec[t] * 2 ** (ell - ivec[t]) - 1
            for t in range(d - 1)
        )

    out = set()
    for ivec in itertools.product(range(1, lp + 1), repeat=d - 1):
        odd_ranges = [range(1, 2**i + 1, 2) for i in ivec]
        for jvec in itertools.product(*odd_ranges):
            succ = tuple(j + 1 for j in jvec)
            for a in range(1, n + 1):
                if not inbox(points[a - 1], ivec, jvec):
                    continue
                for b in range(a + 1, n + 1):
                    if not inbox(points[b - 1], ivec, succ):
                        continue
                    blocked = any(
                        inbox(points[c - 1], ivec, jvec)
                        or inbox(points[c - 1], ivec, succ)
                        for c in range(a + 1, b)
                    )
                    if not blocked:
                        out.add((a, b, ivec, jvec))
    return out


def random_distinct_points(rng, n: int, d: int, side: int):
    """n distinct coordinate vectors in [0, side-1]^d."""
    assert side**d >= n
    seen = set()
    while len(seen) < n:
        seen.add(tuple(int(rng.integers(0, side)) for _ in range(d)))
    return tuple(sorted(seen))
