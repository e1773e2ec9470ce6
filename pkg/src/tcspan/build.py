"""Two-hop shortcut graphs over canonical grid embeddings.

The construction places, for each element and each tuple of dyadic prefix
lengths, a relay point whose coordinates round the element's binary
coordinates up or down to a dyadic midpoint. Any comparable pair then meets
at the relay defined by the per-dimension longest common binary prefixes,
so every query is answered by at most two edges found with O(d) word
operations.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

from .poset import (
    Coords,
    DimensionMismatch,
    EmbeddingError,
    Poset,
    dominance_leq,
)


@dataclass(frozen=True)
class PrefixCode:
    """An ell-bit binary string naming a dyadic relay coordinate."""

    ell: int
    value: str

    def __post_init__(self) -> None:
        if self.ell < 1 or len(self.value) != self.ell:
            raise ValueError(f"value {self.value!r} is not {self.ell} bits")
        if set(self.value) - {"0", "1"}:
            raise ValueError(f"value {self.value!r} is not binary")

    def to_int(self) -> int:
        return int(self.value, 2)


def prefix_code(t: int, i: int, ell: int) -> PrefixCode:
    """String form of the relay coordinate: i leading bits of t, a 1, zeros."""
    _check_prefix_args(t, i, ell)
    bits = format(t, f"0{ell}b")
    return PrefixCode(ell, bits[:i] + "1" + "0" * (ell - i - 1))


def prefix_point(t: int, i: int, ell: int) -> int:
    """Relay coordinate as an integer, via word operations."""
    _check_prefix_args(t, i, ell)
    prefix = t >> (ell - i)
    return ((prefix << 1) | 1) << (ell - i - 1)


def _check_prefix_args(t: int, i: int, ell: int) -> None:
    if ell < 1:
        raise ValueError(f"bit length must be >= 1, got {ell}")
    if not 0 <= i <= ell - 1:
        raise ValueError(f"prefix length {i} outside [0, {ell - 1}]")
    if not 0 <= t < (1 << ell):
        raise ValueError(f"coordinate {t} does not fit in {ell} bits")


def lcp_point(x: Coords, y: Coords, ell: int) -> Coords:
    """The relay point defined by per-dimension longest common prefixes.

    Requires x and y to differ in every dimension (canonical embedding);
    for x strictly below y the result z satisfies x < z <= y.
    """
    if len(x) != len(y):
        raise DimensionMismatch(
            f"points have dimensions {len(x)} and {len(y)}"
        )
    out = []
    for xi, yi in zip(x, y):
        if xi == yi:
            raise EmbeddingError(
                f"coordinate {xi} repeats across elements; "
                "canonical embedding required"
            )
        if xi >= (1 << ell) or yi >= (1 << ell):
            raise ValueError(
                f"coordinates {xi}, {yi} do not fit in {ell} bits"
            )
        i = ell - (xi ^ yi).bit_length()
        out.append(prefix_point(xi, i, ell))
    return tuple(out)


@dataclass(frozen=True)
class SpannerGraph:
    """Directed shortcut graph over poset elements plus relay vertices.

    Vertex ids 1..n_originals are the poset elements; relay (Steiner)
    vertices continue the numbering. Edges are stored sorted and deduped;
    self-loops are rejected. Whether each edge respects dominance is the
    verifier's concern, so deliberately broken graphs can be constructed
    and diagnosed.
    """

    n_originals: int
    original_coords: tuple[Coords, ...]
    steiner_coords: tuple[Coords, ...]
    edges: tuple[tuple[int, int], ...]
    ell: int
    base_side: int

    def __post_init__(self) -> None:
        if self.n_originals != len(self.original_coords):
            raise ValueError("original coordinate count does not match n_originals")
        n_all = self.n_originals + len(self.steiner_coords)
        seen = set(self.original_coords)
        if len(seen) != self.n_originals:
            raise ValueError("duplicate original coordinates")
        for pt in self.steiner_coords:
            if pt in seen:
                raise ValueError(f"steiner coordinates {pt} collide with another vertex")
            seen.add(pt)
        prev = None
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (1 <= u <= n_all and 1 <= v <= n_all):
                raise ValueError(f"edge ({u}, {v}) references unknown vertex")
            if prev is not None and (u, v) <= prev:
                raise ValueError("edges must be sorted and free of duplicates")
            prev = (u, v)

    @property
    def n_vertices(self) -> int:
        return self.n_originals + len(self.steiner_coords)

    @property
    def steiner_ids(self) -> range:
        return range(self.n_originals + 1, self.n_vertices + 1)

    def coords(self, vid: int) -> Coords:
        if 1 <= vid <= self.n_originals:
            return self.original_coords[vid - 1]
        if vid <= self.n_vertices:
            return self.steiner_coords[vid - self.n_originals - 1]
        raise ValueError(f"vertex id {vid} outside 1..{self.n_vertices}")

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    @cached_property
    def out_adj(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n_vertices + 1)}
        for u, v in self.edges:
            adj[u].append(v)
        return {u: tuple(sorted(vs)) for u, vs in adj.items()}

    @cached_property
    def in_adj(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n_vertices + 1)}
        for u, v in self.edges:
            adj[v].append(u)
        return {u: tuple(sorted(vs)) for u, vs in adj.items()}

    @cached_property
    def vertex_by_coords(self) -> dict[Coords, int]:
        out = {pt: i + 1 for i, pt in enumerate(self.original_coords)}
        for i, pt in enumerate(self.steiner_coords):
            out[pt] = self.n_originals + 1 + i
        return out


def _make_graph(
    n: int,
    original_coords: tuple[Coords, ...],
    steiner_coords: tuple[Coords, ...],
    edges: set[tuple[int, int]],
    ell: int,
    base_side: int,
) -> SpannerGraph:
    return SpannerGraph(
        n, original_coords, steiner_coords, tuple(sorted(edges)), ell, base_side
    )


def spanner_ell(n: int) -> int:
    """Bit length used by the construction: ceil(log2 n), and 1 for n = 1."""
    return 1 if n <= 1 else (n - 1).bit_length()


def build_steiner_2tc(p: Poset) -> SpannerGraph:
    """Construct the dyadic-relay two-hop spanner of a canonical poset.

    For every element x and every tuple (i_1, ..., i_d) of prefix lengths,
    the point with coordinates (prefix_point(x_1, i_1), ...) joins the graph
    with an edge to or from x, oriented by dominance. Candidates matching an
    existing element merge with it; candidates incomparable to x contribute
    nothing. The edge count is at most n * ell^d.
    """
    if not p.is_canonical:
        raise EmbeddingError(
            "construction requires pairwise-distinct coordinates per "
            "dimension; apply canonicalize_embedding first"
        )
    n = p.n
    ell = spanner_ell(n)
    limit = 1 << ell
    if any(c >= limit for pt in p.points for c in pt):
        raise EmbeddingError(
            f"coordinates exceed the {limit}-point dyadic grid; "
            "apply canonicalize_embedding first"
        )
    if n == 1:
        return _make_graph(1, p.points, (), set(), ell, p.side)

    vid_by_coords = {pt: i + 1 for i, pt in enumerate(p.points)}
    steiners: list[Coords] = []
    edges: set[tuple[int, int]] = set()
    for eid in range(1, n + 1):
        x = p.points[eid - 1]
        for tup in itertools.product(range(ell), repeat=p.dim):
            cand = tuple(prefix_point(x[j], tup[j], ell) for j in range(p.dim))
            if cand == x:
                continue
            if dominance_leq(x, cand):
                forward = True
            elif dominance_leq(cand, x):
                forward = False
            else:
                continue
            vid = vid_by_coords.get(cand)
            if vid is None:
                steiners.append(cand)
                vid = n + len(steiners)
                vid_by_coords[cand] = vid
            edges.add((eid, vid) if forward else (vid, eid))
    assert len(edges) <= n * ell**p.dim
    return _make_graph(n, p.points, tuple(steiners), edges, ell, p.side)


def path_query(s: SpannerGraph, x: int, y: int) -> tuple[tuple[int, int], ...]:
    """A path of at most two edges from x to y, found without graph search.

    Requires x strictly below y and a graph produced by build_steiner_2tc.
    The relay is the per-dimension common-prefix point; when it coincides
    with x or y the single direct edge is returned.
    """
    if not (1 <= x <= s.n_originals and 1 <= y <= s.n_originals):
        raise ValueError(f"query ids must be original elements 1..{s.n_originals}")
    cx = s.original_coords[x - 1]
    cy = s.original_coords[y - 1]
    if x == y or not dominance_leq(cx, cy):
        raise ValueError(f"element {x} is not strictly below element {y}")
    z = lcp_point(cx, cy, s.ell)
    if z == cx or z == cy:
        path = ((x, y),)
    else:
        zid = s.vertex_by_coords.get(z)
        if zid is None:
            raise ValueError(
                f"relay point {z} missing; graph was not produced by build_steiner_2tc"
            )
        path = ((x, zid), (zid, y))
    for edge in path:
        if edge not in s.edge_set:
            raise ValueError(
                f"edge {edge} missing; graph was not produced by build_steiner_2tc"
            )
    return path


def bipartite_poset(n: int) -> Poset:
    """Grid embedding of the complete bipartite order with n/2 + n/2 parts.

    Left elements map to the antichain (i-1, n/2-i) for i in 1..n/2, right
    elements to (n-i, n/2+i-1); every left point lies below every right
    point and the two parts are internally incomparable.
    """
    if n < 2 or n % 2:
        raise ValueError(f"n must be even and >= 2, got {n}")
    h = n // 2
    left = [(i - 1, h - i) for i in range(1, h + 1)]
    right = [(n - i, h + i - 1) for i in range(1, h + 1)]
    return Poset(2, n, tuple(left + right))


def bipartite_single_steiner(n: int) -> SpannerGraph:
    """Two-hop spanner of the bipartite order through one relay vertex.

    n/2 edges enter the relay from the left part and n/2 leave it to the
    right part: exactly n edges in total.
    """
    p = bipartite_poset(n)
    h = n // 2
    steiner = (h - 1, h)
    sid = n + 1
    edges = {(i, sid) for i in range(1, h + 1)}
    edges |= {(sid, h + i) for i in range(1, h + 1)}
    return _make_graph(n, p.points, (steiner,), edges, spanner_ell(n), p.side)


# --- serialization ---------------------------------------------------------
#
# Spanner schema: {"originals": n, "steiners": [[coords], ...],
# "edges": [[tailId, headId], ...]} with edges ordered lexicographically by
# (tail coords, head coords). Files written here also embed the base poset
# so `tcspan path` can run from the spanner file alone; loading a bare file
# requires the poset to be supplied.


def spanner_to_dict(s: SpannerGraph, meta: dict | None = None) -> dict:
    order = sorted(s.edges, key=lambda e: (s.coords(e[0]), s.coords(e[1])))
    data = {
        "originals": s.n_originals,
        "steiners": [list(pt) for pt in s.steiner_coords],
        "edges": [list(e) for e in order],
        "ell": s.ell,
        "base": 0,
        "poset": {
            "d": len(s.original_coords[0]),
            "m": s.base_side,
            "base": 0,
            "points": [list(pt) for pt in s.original_coords],
        },
    }
    if meta:
        data["meta"] = meta
    return data


def spanner_from_dict(data: dict, poset: Poset | None = None) -> SpannerGraph:
    try:
        n = int(data["originals"])
        steiners = tuple(tuple(int(c) for c in pt) for pt in data["steiners"])
        edges = {(int(u), int(v)) for u, v in data["edges"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed spanner object: {exc}") from exc
    if poset is None:
        embedded = data.get("poset")
        if embedded is None:
            raise ValueError(
                "spanner file carries no base poset; pass one explicitly"
            )
        from .poset import poset_from_dict

        poset = poset_from_dict(embedded)
    if poset.n != n:
        raise ValueError(
            f"spanner lists {n} originals but poset has {poset.n} elements"
        )
    ell = int(data.get("ell", spanner_ell(n)))
    return _make_graph(n, poset.points, steiners, edges, ell, poset.side)


def load_spanner(path: str, poset: Poset | None = None) -> SpannerGraph:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON: {exc}") from exc
    return spanner_from_dict(data, poset)


def save_spanner(s: SpannerGraph, path: str, meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(spanner_to_dict(s, meta), fh, indent=2, sort_keys=True)
        fh.write("\n")


def spanner_to_dot(s: SpannerGraph) -> str:
    """GraphViz rendering; relay vertices are drawn as boxes."""
    lines = ["digraph spanner {"]
    for vid in range(1, s.n_originals + 1):
        lines.append(f'  v{vid} [label="{vid} {list(s.coords(vid))}"];')
    for vid in s.steiner_ids:
        lines.append(
            f'  v{vid} [shape=box, label="s{vid} {list(s.coords(vid))}"];'
        )
    for u, v in sorted(s.edges, key=lambda e: (s.coords(e[0]), s.coords(e[1]))):
        lines.append(f"  v{u} -> v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
