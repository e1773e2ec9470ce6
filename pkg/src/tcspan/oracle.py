"""Exact sparsest-spanner search on tiny posets.

Ground truth for the construction and the dual certificates. The search
space is the set of comparable pairs: any edge outside it is either
forbidden (it would connect an incomparable pair) or redundant. For
stretch 2 a pair is satisfied by its direct edge or by two chosen edges
through a strictly intermediate element, so feasibility is a per-pair
existence check; for general k a BFS decides it. Both searches branch on
one undecided edge at a time with an incumbent bound, seeded with the
forced edges of pairs that admit no intermediate vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .poset import Poset, Relation, transitive_closure

PAIR_GUARD = 40
DEFAULT_BUDGET = 10_000_000


class SearchGuardExceeded(ValueError):
    """The instance has too many comparable pairs for exact search."""


class BudgetExhausted(RuntimeError):
    """The node budget ran out before the search completed."""


@dataclass(frozen=True)
class OracleResult:
    opt_size: int
    witness: tuple[tuple[int, int], ...]
    explored: int


def _closure_guarded(g: Poset, pair_guard: int | None) -> Relation:
    closure = transitive_closure(g)
    if pair_guard is not None and len(closure) > pair_guard:
        raise SearchGuardExceeded(
            f"{len(closure)} comparable pairs exceed the exact-search guard "
            f"of {pair_guard}; try a smaller instance"
        )
    return closure


def min_2tc_bruteforce(
    g: Poset,
    budget: int = DEFAULT_BUDGET,
    pair_guard: int | None = PAIR_GUARD,
) -> OracleResult:
    """Exact minimum edge count of a stretch-2 spanner without relays."""
    closure = _closure_guarded(g, pair_guard)
    edge_index = {e: i for i, e in enumerate(closure)}
    # options[pair] = ways to satisfy it: the direct edge, or both halves
    # through a strictly intermediate element.
    options: dict[tuple[int, int], list[tuple[tuple[int, int], ...]]] = {}
    for u, v in closure:
        opts: list[tuple[tuple[int, int], ...]] = [((u, v),)]
        for w in range(1, g.n + 1):
            if w != u and w != v and g.leq(u, w) and g.leq(w, v):
                opts.append(((u, w), (w, v)))
        options[(u, v)] = opts

    chosen: set[tuple[int, int]] = set()
    banned: set[tuple[int, int]] = set()
    for pair, opts in options.items():
        if len(opts) == 1:
            chosen.add(pair)

    best: list = [len(closure), tuple(closure)]
    explored = [0]

    def viable(opt: tuple[tuple[int, int], ...]) -> bool:
        return not any(e in banned for e in opt)

    def satisfied(pair: tuple[int, int]) -> bool:
        return any(all(e in chosen for e in opt) for opt in options[pair])

    def search() -> None:
        explored[0] += 1
        if explored[0] > budget:
            raise BudgetExhausted(
                f"node budget {budget} exhausted after exploring {explored[0] - 1} nodes"
            )
        # Unit propagation: pairs with a single viable option force its edges.
        added: list[tuple[int, int]] = []
        while True:
            forced = None
            for pair in closure:
                if satisfied(pair):
                    continue
                live = [opt for opt in options[pair] if viable(opt)]
                if not live:
                    for e in added:
                        chosen.discard(e)
                    return
                if len(live) == 1:
                    forced = live[0]
                    break
            if forced is None:
                break
            for e in forced:
                if e not in chosen:
                    chosen.add(e)
                    added.append(e)
        if len(chosen) >= best[0]:
            for e in added:
                chosen.discard(e)
            return
        pending = [pair for pair in closure if not satisfied(pair)]
        if not pending:
            best[0] = len(chosen)
            best[1] = tuple(sorted(chosen))
            for e in added:
                chosen.discard(e)
            return
        # Fail-first: branch on an edge of the most constrained pair.
        pending.sort(
            key=lambda pair: (
                sum(1 for opt in options[pair] if viable(opt)),
                edge_index[pair],
            )
        )
        target = pending[0]
        branch_edge = None
        for opt in options[target]:
            if viable(opt):
                for e in opt:
                    if e not in chosen:
                        branch_edge = e
                        break
            if branch_edge is not None:
                break
        assert branch_edge is not None
        chosen.add(branch_edge)
        search()
        chosen.discard(branch_edge)
        banned.add(branch_edge)
        search()
        banned.discard(branch_edge)
        for e in added:
            chosen.discard(e)

    search()
    return OracleResult(best[0], best[1], explored[0])


def min_ktc_bruteforce(
    g: Poset,
    k: int,
    budget: int = DEFAULT_BUDGET,
    pair_guard: int | None = PAIR_GUARD,
) -> OracleResult:
    """Exact minimum edge count of a stretch-k spanner without relays."""
    if k < 1:
        raise ValueError(f"stretch must be >= 1, got {k}")
    closure = _closure_guarded(g, pair_guard)
    closure_set = set(closure)

    def dist_within(edges: set[tuple[int, int]], s: int, t: int) -> int | None:
        if s == t:
            return 0
        adj: dict[int, list[int]] = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if dist[u] >= k:
                continue
            for w in sorted(adj.get(u, ())):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    if w == t:
                        return dist[w]
                    queue.append(w)
        return dist.get(t)

    chosen: set[tuple[int, int]] = set()
    banned: set[tuple[int, int]] = set()
    # Cover pairs (no strictly intermediate element) must take their edge.
    for u, v in closure:
        if not any(
            w != u and w != v and g.leq(u, w) and g.leq(w, v)
            for w in range(1, g.n + 1)
        ):
            chosen.add((u, v))

    best: list = [len(closure), tuple(closure)]
    explored = [0]

    def shortest_open_path(s: int, t: int) -> list[int] | None:
        """Lexicographically smallest shortest path over chosen+undecided."""
        allowed = closure_set - banned
        adj: dict[int, list[int]] = {}
        for u, v in allowed:
            adj.setdefault(u, []).append(v)
        # distances to t over reversed edges
        radj: dict[int, list[int]] = {}
        for u, v in allowed:
            radj.setdefault(v, []).append(u)
        dist_to = {t: 0}
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for w in radj.get(u, ()):
                if w not in dist_to:
                    dist_to[w] = dist_to[u] + 1
                    queue.append(w)
        if s not in dist_to or dist_to[s] > k:
            return None
        path = [s]
        cur = s
        while cur != t:
            nxt = min(
                w for w in adj.get(cur, ()) if dist_to.get(w) == dist_to[cur] - 1
            )
            path.append(nxt)
            cur = nxt
        return path

    def search() -> None:
        explored[0] += 1
        if explored[0] > budget:
            raise BudgetExhausted(
                f"node budget {budget} exhausted after exploring {explored[0] - 1} nodes"
            )
        if len(chosen) >= best[0]:
            return
        unsat = [
            (u, v)
            for u, v in closure
            if (d := dist_within(chosen, u, v)) is None or d > k
        ]
        if not unsat:
            best[0] = len(chosen)
            best[1] = tuple(sorted(chosen))
            return
        if len(chosen) + 1 >= best[0]:
            return
        for u, v in unsat:
            path = shortest_open_path(u, v)
            if path is None:
                return
            undecided = [
                (path[i], path[i + 1])
                for i in range(len(path) - 1)
                if (path[i], path[i + 1]) not in chosen
            ]
            if undecided:
                branch_edge = undecided[0]
                chosen.add(branch_edge)
                search()
                chosen.discard(branch_edge)
                banned.add(branch_edge)
                search()
                banned.discard(branch_edge)
                return
        raise AssertionError("unsatisfied pair with fully chosen path")

    search()
    return OracleResult(best[0], best[1], explored[0])
