"""Randomized posets, dyadic box partitions, and forced-crossing pairs.

A sampled poset fixes element a at first coordinate a and draws the other
d-1 coordinates uniformly. For each vector of dyadic resolutions the grid
splits into boxes; a jump is a pair of elements sitting in an odd box and
its successor with nothing between them in either box, and each jump forces
some edge of any valid spanner to cross between the two boxes. Counting
jumps therefore bounds spanner size from below, which the Monte-Carlo
driver and the jump-to-edge mapping check empirically.

Randomness comes from the counter-based Philox generator keyed as
(seed, stream): trial t of a run with seed s uses stream (s, t), so trials
are independent and reproducible in any order.
"""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from .build import SpannerGraph
from .poset import Poset

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomPosetSpec:
    n: int
    d: int
    seed: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need n >= 2, got {self.n}")
        if self.d < 2:
            raise ValueError(f"need d >= 2, got {self.d}")


class BoxId(NamedTuple):
    """Box of the partition BP(ivec): resolutions ivec, interval indices jvec.

    Indices are 1-based: i_t selects 2^{i_t} intervals of length 2^{ell-i_t}
    along dimension t+1, and j_t picks one of them.
    """

    ivec: tuple[int, ...]
    jvec: tuple[int, ...]


def box_location(pt: tuple[int, ...], ivec: tuple[int, ...], ell: int) -> BoxId:
    """The box of partition BP(ivec) containing a 0-based grid point."""
    jvec = tuple(
        (pt[t + 1] >> (ell - ivec[t])) + 1 for t in range(len(ivec))
    )
    return BoxId(ivec, jvec)


class Jump(NamedTuple):
    a: int  # first coordinate (= element id) of the lower element
    b: int  # first coordinate of the upper element
    ivec: tuple[int, ...]
    jvec: tuple[int, ...]  # the generating odd box (1-based)


@dataclass(frozen=True)
class JumpSet:
    n: int
    d: int
    ell: int
    ell_prime: int
    jumps: tuple[Jump, ...]

    def per_partition(self) -> dict[tuple[int, ...], int]:
        counts: dict[tuple[int, ...], int] = {
            ivec: 0
            for ivec in product(range(1, self.ell_prime + 1), repeat=self.d - 1)
        }
        for j in self.jumps:
            counts[j.ivec] += 1
        return counts


def rng_stream(seed: int, stream: int) -> np.random.Generator:
    """Philox generator for (seed, stream); streams never overlap."""
    return np.random.Generator(
        np.random.Philox(key=[seed & MASK64, stream & MASK64])
    )


def sample_poset(spec: RandomPosetSpec, stream: int = 0) -> Poset:
    """Draw a poset: element a at first coordinate a-1, the rest uniform."""
    gen = rng_stream(spec.seed, stream)
    tail = gen.integers(0, spec.n, size=(spec.n, spec.d - 1))
    points = tuple(
        (a, *(int(c) for c in tail[a])) for a in range(spec.n)
    )
    return Poset(spec.d, spec.n, points)


def _check_sampled_form(p: Poset) -> tuple[int, int]:
    if p.dim < 2:
        raise ValueError("jump enumeration needs dimension >= 2")
    for i, pt in enumerate(p.points):
        if pt[0] != i:
            raise ValueError(
                "element first coordinates must be 0..n-1 in id order"
            )
    n = p.n
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    ell = n.bit_length() - 1
    return ell, ell // (p.dim - 1)


def enumerate_jumps(p: Poset) -> JumpSet:
    """All jumps of all box partitions, one linear pass per partition.

    Within a partition, elements whose interval indices are all even sit in
    an odd box, those all odd in its successor; elements with mixed parity
    belong to neither box of any odd pair. Restricted to one box pair in
    first-coordinate order, every adjacent (lower, upper) occurrence is a
    jump.
    """
    ell, ell_prime = _check_sampled_form(p)
    d = p.dim
    jumps: list[Jump] = []
    for ivec in product(range(1, ell_prime + 1), repeat=d - 1):
        shifts = tuple(ell - i for i in ivec)
        last: dict[tuple[int, ...], tuple[int, int]] = {}
        for eid in range(1, p.n + 1):
            pt = p.points[eid - 1]
            idx = tuple(pt[t + 1] >> shifts[t] for t in range(d - 1))
            parities = {j & 1 for j in idx}
            if len(parities) != 1:
                continue
            side = parities.pop()
            key = tuple(j >> 1 for j in idx)
            prev = last.get(key)
            if side == 1 and prev is not None and prev[0] == 0:
                jvec = tuple(2 * q + 1 for q in key)
                jumps.append(Jump(prev[1], eid, ivec, jvec))
            last[key] = (side, eid)
    return JumpSet(p.n, d, ell, ell_prime, tuple(jumps))


@dataclass(frozen=True)
class JumpStats:
    n: int
    d: int
    trials: int
    seed: int
    counts: tuple[int, ...]
    mean: float
    stddev: float
    ci95: tuple[float, float]


def monte_carlo_jumps(
    n: int, d: int, trials: int, seed: int, threads: int = 1
) -> JumpStats:
    """Sample statistics of the jump count over independent posets."""
    if trials < 2:
        raise ValueError(f"need at least 2 trials, got {trials}")
    spec = RandomPosetSpec(n, d, seed)

    def one(t: int) -> int:
        return len(enumerate_jumps(sample_poset(spec, stream=t)).jumps)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = tuple(pool.map(one, range(trials)))
    else:
        counts = tuple(one(t) for t in range(trials))
    mean = sum(counts) / trials
    var = sum((c - mean) ** 2 for c in counts) / (trials - 1)
    stddev = math.sqrt(var)
    half = 1.96 * stddev / math.sqrt(trials)
    return JumpStats(
        n, d, trials, seed, counts, mean, stddev, (mean - half, mean + half)
    )


# --- mapping jumps to spanner edges ----------------------------------------


class MappingError(ValueError):
    """The jump-to-edge mapping could not be completed or failed a check."""


@dataclass(frozen=True)
class MappingReport:
    n_jumps: int
    n_edges: int
    selected: tuple[tuple[Jump, tuple[int, int]], ...]
    multiplicities: dict[tuple[int, int], int]
    max_multiplicity: int
    injective: bool


def _shortest_path(h: SpannerGraph, a: int, b: int, k: int) -> list[int]:
    """Lexicographically smallest shortest path from a to b, length <= k."""
    dist_to = [-1] * (h.n_vertices + 1)
    dist_to[b] = 0
    queue = deque([b])
    while queue:
        u = queue.popleft()
        for w in h.in_adj[u]:
            if dist_to[w] < 0:
                dist_to[w] = dist_to[u] + 1
                queue.append(w)
    if dist_to[a] < 0 or dist_to[a] > k:
        raise MappingError(
            f"no path of length <= {k} from {a} to {b}; "
            "the graph is not a valid spanner of the poset"
        )
    path = [a]
    cur = a
    while cur != b:
        cur = min(
            w for w in h.out_adj[cur] if dist_to[w] == dist_to[cur] - 1
        )
        path.append(cur)
    return path


def jump_edge_mapping(p: Poset, h: SpannerGraph, k: int) -> MappingReport:
    """Map every jump to the spanner edge it forces and count collisions.

    For each jump a lexicographically smallest shortest path from p_a to
    p_b is walked. In two dimensions the selected edge is the unique one
    crossing from the odd box into its successor, and the mapping must be
    injective. In higher dimensions the edge maximizing the Hamming
    distance between endpoint box parities is selected (ties: earliest on
    the path); that distance must reach ceil((d-1)/k), and multiplicities
    are reported.
    """
    if h.n_originals != p.n or h.original_coords != p.points:
        raise MappingError(
            "spanner originals do not match the poset; map in one embedding"
        )
    ell, _ = _check_sampled_form(p)
    d = p.dim
    dprime = math.ceil((d - 1) / k)
    jumpset = enumerate_jumps(p)
    selected: list[tuple[Jump, tuple[int, int]]] = []
    for jump in jumpset.jumps:
        path = _shortest_path(h, jump.a, jump.b, k)

        def box_idx(vid: int) -> tuple[int, ...]:
            return box_location(h.coords(vid), jump.ivec, ell).jvec

        if d == 2:
            lower = jump.jvec[0]
            edge = None
            for x, y in zip(path, path[1:]):
                if box_idx(x)[0] == lower and box_idx(y)[0] == lower + 1:
                    edge = (x, y)
                    break
            if edge is None:
                raise MappingError(
                    f"no edge of the path {path} crosses boxes for jump {jump}"
                )
        else:
            best_dist = -1
            edge = None
            for x, y in zip(path, path[1:]):
                ham = sum(
                    1
                    for jx, jy in zip(box_idx(x), box_idx(y))
                    if (jx & 1) != (jy & 1)
                )
                if ham > best_dist:
                    best_dist = ham
                    edge = (x, y)
            if best_dist < dprime:
                raise MappingError(
                    f"max parity distance {best_dist} below {dprime} "
                    f"for jump {jump}"
                )
        selected.append((jump, edge))
    mult = Counter(edge for _, edge in selected)
    max_mult = max(mult.values(), default=0)
    if d == 2 and max_mult > 1:
        raise MappingError(
            "jump-to-edge mapping is not injective in two dimensions"
        )
    return MappingReport(
        n_jumps=len(jumpset.jumps),
        n_edges=len(h.edges),
        selected=tuple(selected),
        multiplicities=dict(mult),
        max_multiplicity=max_mult,
        injective=max_mult <= 1,
    )
