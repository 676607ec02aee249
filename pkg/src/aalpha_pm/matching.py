"""Perfect-matching oracles: subset DP, Edmonds' blossom algorithm, Tutte sets.

The three routes share nothing but the :class:`~aalpha_pm.graph.Graph` type,
so agreement between them is a meaningful check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import Graph, components

__all__ = [
    "MatchingResult",
    "TutteWitness",
    "OddOrderError",
    "DP_MAX_ORDER",
    "TUTTE_MAX_ORDER",
    "has_perfect_matching_dp",
    "max_matching",
    "tutte_witness",
    "odd_components",
]

DP_MAX_ORDER = 24
TUTTE_MAX_ORDER = 20


class OddOrderError(ValueError):
    """Odd-order graphs never have a perfect matching; raised instead of returning False."""


@dataclass(frozen=True)
class MatchingResult:
    size: int
    edges: tuple[tuple[int, int], ...]
    perfect: bool


@dataclass(frozen=True)
class TutteWitness:
    set: frozenset[int]
    odd_components: int

    @property
    def deficiency(self) -> int:
        return self.odd_components - len(self.set)


def has_perfect_matching_dp(g: Graph) -> bool:
    """Exact perfect-matching test by memoised search over vertex subsets.

    The lowest unmatched vertex is always the one matched next, so each
    subset is reached in one canonical way.
    """
    n = g.n
    if n % 2:
        raise OddOrderError(f"graph has odd order {n}; no perfect matching is possible")
    if n > DP_MAX_ORDER:
        raise ValueError(f"subset DP refused for n={n} > {DP_MAX_ORDER}; use max_matching")
    adj = g.adj
    memo: dict[int, bool] = {0: True}

    def solve(rest: int) -> bool:
        hit = memo.get(rest)
        if hit is not None:
            return hit
        low = rest & -rest
        v = low.bit_length() - 1
        options = adj[v] & rest
        ok = False
        while options:
            u_bit = options & -options
            if solve(rest ^ low ^ u_bit):
                ok = True
                break
            options ^= u_bit
        memo[rest] = ok
        return ok

    return solve((1 << n) - 1)


def max_matching(g: Graph) -> MatchingResult:
    """Maximum-cardinality matching by Edmonds' blossom contraction, O(n^3).

    Roots and neighbours are scanned in increasing index order, so the output
    is deterministic.
    """
    n = g.n
    nbrs = [g.neighbors(v) for v in range(n)]
    mate = [-1] * n

    # greedy start; the search below only ever improves on it
    for v in range(n):
        if mate[v] == -1:
            for u in nbrs[v]:
                if mate[u] == -1:
                    mate[v], mate[u] = u, v
                    break

    for root in range(n):
        if mate[root] == -1:
            end, parent = _augmenting_path(nbrs, mate, root)
            v = end
            while v != -1:
                pv = parent[v]
                nxt = mate[pv]
                mate[v], mate[pv] = pv, v
                v = nxt

    edges = tuple((v, mate[v]) for v in range(n) if mate[v] > v)
    _check_matching(g, edges)
    return MatchingResult(len(edges), edges, 2 * len(edges) == n)


def _augmenting_path(nbrs: list[list[int]], mate: list[int], root: int) -> tuple[int, list[int]]:
    n = len(nbrs)
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in nbrs[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    return to, parent
                used[mate[to]] = True
                queue.append(mate[to])
    return -1, parent


def _check_matching(g: Graph, edges: tuple[tuple[int, int], ...]) -> None:
    covered = 0
    for u, v in edges:
        if not g.has_edge(u, v):
            raise AssertionError(f"matched pair ({u}, {v}) is not an edge")
        if covered >> u & 1 or covered >> v & 1:
            raise AssertionError(f"vertex reused in matching at ({u}, {v})")
        covered |= 1 << u | 1 << v


def odd_components(g: Graph, removed: int) -> int:
    """Number of odd components of ``g`` minus the vertex bitmask ``removed``."""
    return sum(comp.bit_count() & 1 for comp in components(g, removed))


def _count_odd_exceeding(adj: tuple[int, ...], rest: int, bound: int) -> int:
    """Odd components of the induced subgraph on ``rest``; stops early once the count cannot exceed ``bound``."""
    odd = 0
    while rest:
        if odd + rest.bit_count() <= bound:
            return odd
        low = rest & -rest
        comp = frontier = low
        while frontier:
            reach = 0
            while frontier:
                b = frontier & -frontier
                reach |= adj[b.bit_length() - 1]
                frontier ^= b
            frontier = reach & rest & ~comp
            comp |= frontier
        rest &= ~comp
        odd += comp.bit_count() & 1
    return odd


def tutte_witness(g: Graph) -> TutteWitness | None:
    """A minimum-size set ``S`` with ``o(G - S) > |S|``, or None if no such set exists.

    Subsets are scanned by increasing size (numeric order within a size), so
    the result is deterministic.
    """
    n = g.n
    if n > TUTTE_MAX_ORDER:
        raise ValueError(f"exhaustive Tutte search refused for n={n} > {TUTTE_MAX_ORDER}")
    full = (1 << n) - 1
    adj = g.adj
    # o(G-S) <= n - |S|, so only |S| < n/2 can give o(G-S) > |S|
    for k in range(0, (n - 1) // 2 + 1):
        if k == 0:
            masks = iter((0,))
        else:
            masks = _masks_of_size(n, k)
        for s_mask in masks:
            odd = _count_odd_exceeding(adj, full & ~s_mask, k)
            if odd > k:
                members = frozenset(v for v in range(n) if s_mask >> v & 1)
                return TutteWitness(members, odd)
    return None


def _masks_of_size(n: int, k: int):
    # Gosper's hack: all n-bit masks with popcount k, increasing
    mask = (1 << k) - 1
    limit = 1 << n
    while mask < limit:
        yield mask
        c = mask & -mask
        r = mask + c
        mask = (((r ^ mask) >> 2) // c) | r
