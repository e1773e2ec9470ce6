"""Grid-embedded posets under the componentwise dominance order.

Element ids are 1-based positions in the point list. Coordinates are
0-based internally; the JSON loaders accept 1-based files and normalize.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

Coords = tuple[int, ...]
Relation = tuple[tuple[int, int], ...]

# hypergrid() refuses to enumerate grids larger than this.
GRID_ELEMENT_GUARD = 1 << 20

# Comparable-pair count above which callers should prefer streaming
# iter_comparable_pairs() over a materialized transitive_closure().
CLOSURE_BUDGET = 1 << 16


class DimensionMismatch(ValueError):
    """Points of different dimension were compared."""


class EmbeddingError(ValueError):
    """An embedding violates a structural requirement."""


def dominance_leq(x: Coords, y: Coords) -> bool:
    """True iff x_i <= y_i in every dimension."""
    if len(x) != len(y):
        raise DimensionMismatch(
            f"cannot compare points of dimension {len(x)} and {len(y)}"
        )
    return all(a <= b for a, b in zip(x, y))


def dominance_lt(x: Coords, y: Coords) -> bool:
    """True iff x strictly below y: componentwise <= and x != y."""
    return x != y and dominance_leq(x, y)


@dataclass(frozen=True)
class Poset:
    """n distinct grid points in [0, side-1]^dim with the dominance order.

    Immutable after construction; all operations on it are pure.
    """

    dim: int
    side: int
    points: tuple[Coords, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise EmbeddingError(f"dimension must be >= 1, got {self.dim}")
        if self.side < 1:
            raise EmbeddingError(f"side must be >= 1, got {self.side}")
        if not self.points:
            raise EmbeddingError("poset needs at least one element")
        seen: set[Coords] = set()
        for eid, pt in enumerate(self.points, start=1):
            if len(pt) != self.dim:
                raise DimensionMismatch(
                    f"element {eid} has {len(pt)} coordinates, expected {self.dim}"
                )
            if any(c < 0 or c >= self.side for c in pt):
                raise EmbeddingError(
                    f"element {eid} coordinates {pt} outside [0, {self.side - 1}]"
                )
            if pt in seen:
                raise EmbeddingError(f"duplicate coordinate vector {pt}")
            seen.add(pt)

    @property
    def n(self) -> int:
        return len(self.points)

    def coords(self, eid: int) -> Coords:
        if not 1 <= eid <= self.n:
            raise ValueError(f"element id {eid} outside 1..{self.n}")
        return self.points[eid - 1]

    def leq(self, a: int, b: int) -> bool:
        """Dominance comparison by element id."""
        return dominance_leq(self.coords(a), self.coords(b))

    @cached_property
    def is_canonical(self) -> bool:
        """True iff every dimension's coordinates are pairwise distinct."""
        return all(
            len({pt[i] for pt in self.points}) == self.n for i in range(self.dim)
        )


def hypergrid(m: int, d: int) -> Poset:
    """The full m^d grid poset, points enumerated lexicographically."""
    if m < 1 or d < 1:
        raise EmbeddingError(f"need m >= 1 and d >= 1, got m={m}, d={d}")
    if m**d > GRID_ELEMENT_GUARD:
        raise EmbeddingError(
            f"grid with {m}^{d} elements exceeds the {GRID_ELEMENT_GUARD} guard"
        )
    return Poset(d, m, tuple(itertools.product(range(m), repeat=d)))


def canonicalize_embedding(p: Poset) -> Poset:
    """Rank-transform each dimension so coordinates become pairwise distinct.

    Ties within a dimension are broken by the full coordinate vector in
    lexicographic order, which never reorders a comparable pair. The result
    has side n. Comparability is re-checked pair by pair; a change raises
    EmbeddingError naming the offending pair.
    """
    n = p.n
    cols: list[list[int]] = []
    for i in range(p.dim):
        order = sorted(range(n), key=lambda e: (p.points[e][i], p.points[e]))
        col = [0] * n
        for rank, e in enumerate(order):
            col[e] = rank
        cols.append(col)
    new_points = tuple(
        tuple(cols[i][e] for i in range(p.dim)) for e in range(n)
    )
    out = Poset(p.dim, n, new_points)
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            before = dominance_leq(p.points[a], p.points[b])
            after = dominance_leq(new_points[a], new_points[b])
            if before != after:
                raise EmbeddingError(
                    f"canonicalization would change comparability of elements "
                    f"{a + 1} and {b + 1}"
                )
    return out


def iter_comparable_pairs(p: Poset) -> Iterator[tuple[int, int]]:
    """Yield all ordered pairs (u, v) of element ids with u strictly below v."""
    for u in range(1, p.n + 1):
        cu = p.points[u - 1]
        for v in range(1, p.n + 1):
            if u != v and dominance_leq(cu, p.points[v - 1]):
                yield (u, v)


def transitive_closure(p: Poset) -> Relation:
    """All ordered comparable pairs, as a sorted tuple of id pairs.

    Materializes the full relation; above CLOSURE_BUDGET pairs callers
    should stream iter_comparable_pairs() instead.
    """
    return tuple(sorted(iter_comparable_pairs(p)))


# --- JSON interchange ------------------------------------------------------
#
# File schema: {"d": int, "m": int, "points": [[c1, ..., cd], ...]}.
# An optional "base" key (0 or 1) pins the coordinate origin; without it,
# files containing a zero coordinate are read as 0-based and all others as
# 1-based.


def poset_to_dict(p: Poset) -> dict:
    return {
        "d": p.dim,
        "m": p.side,
        "base": 0,
        "points": [list(pt) for pt in p.points],
    }


def poset_from_dict(data: dict) -> Poset:
    try:
        d = int(data["d"])
        m = int(data["m"])
        raw = data["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise EmbeddingError(f"malformed poset object: {exc}") from exc
    pts = [tuple(int(c) for c in row) for row in raw]
    base = data.get("base")
    if base is None:
        base = 0 if any(c == 0 for pt in pts for c in pt) else 1
    if base not in (0, 1):
        raise EmbeddingError(f"base must be 0 or 1, got {base}")
    if base == 1:
        pts = [tuple(c - 1 for c in pt) for pt in pts]
    return Poset(d, m, tuple(pts))


def load_poset(path: str) -> Poset:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise EmbeddingError(f"{path}: invalid JSON: {exc}") from exc
    return poset_from_dict(data)


def save_poset(p: Poset, path: str, meta: dict | None = None) -> None:
    data = poset_to_dict(p)
    if meta:
        data["meta"] = meta
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
