"""Simple undirected graphs stored as per-vertex adjacency bitsets.

Also holds graph6 encoding, the join/union constructors used to build the
split families ``K_s + (K_{n1} u ... u K_{nq})``, connectivity, and a labeled
enumerator for exhaustive checks on tiny orders.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Graph",
    "GraphFormatError",
    "PartitionSpec",
    "parse_graph6",
    "to_graph6",
    "read_graph6_file",
    "complete_graph",
    "empty_graph",
    "disjoint_union",
    "join",
    "extremal_graph",
    "family_g5",
    "split_family",
    "is_connected",
    "components",
    "enumerate_graphs",
    "MAX_ENUMERATION_ORDER",
]

MAX_ENUMERATION_ORDER = 7
_GRAPH6_SHORT_MAX = 62
_GRAPH6_LONG_MAX = 258047


class GraphFormatError(ValueError):
    """Malformed graph6 input. ``offset`` is the 0-based byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``adj[v]`` is an int whose bit ``u`` is set iff ``u`` and ``v`` are adjacent.
    """

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, adj: Sequence[int]):
        if n < 1:
            raise ValueError(f"graph order must be positive, got {n}")
        if len(adj) != n:
            raise ValueError(f"expected {n} adjacency rows, got {len(adj)}")
        full = (1 << n) - 1
        adj = tuple(int(a) for a in adj)
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"vertex {v} has a neighbour outside 0..{n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            rest = row
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                if not adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")
                rest ^= low
        self.n = n
        self.adj = adj
        self._hash = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj)

    @classmethod
    def _trusted(cls, n: int, adj: Sequence[int]) -> Graph:
        # Skips validation; callers guarantee a symmetric loop-free bitset.
        g = object.__new__(cls)
        g.n = n
        g.adj = tuple(adj)
        g._hash = None
        return g

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def adjacency_matrix(self):
        import numpy as np

        m = np.zeros((self.n, self.n))
        for u, v in self.edges():
            m[u, v] = m[v, u] = 1.0
        return m

    def subgraph_without(self, removed: int) -> tuple[int, ...]:
        """Adjacency rows with the vertex bitmask ``removed`` cleared (labels kept)."""
        keep = ~removed
        return tuple(row & keep for row in self.adj)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# graph6


def _encode_n(n: int) -> str:
    if n <= _GRAPH6_SHORT_MAX:
        return chr(n + 63)
    if n <= _GRAPH6_LONG_MAX:
        return "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))
    raise ValueError(f"graph6 supports n <= {_GRAPH6_LONG_MAX}, got {n}")


def to_graph6(g: Graph) -> str:
    """Encode ``g`` as a graph6 string (no header, no trailing newline)."""
    n = g.n
    head = _encode_n(n)
    bits = [g.adj[i] >> j & 1 for j in range(1, n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k:k + 6]:
            value = value << 1 | b
        body.append(chr(value + 63))
    return head + "".join(body)


def parse_graph6(text: str | bytes) -> Graph:
    """Decode one graph6 line. Errors carry the offending byte offset."""
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    if text.startswith(">>graph6<<"):
        text = text[len(">>graph6<<"):]
    text = text.rstrip("\r\n")
    if not text:
        raise GraphFormatError("empty graph6 string", 0)
    for pos, ch in enumerate(text):
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"character {ch!r} outside graph6 range 63..126", pos)

    if text[0] != "~":
        n, pos = ord(text[0]) - 63, 1
    elif len(text) >= 2 and text[1] == "~":
        raise GraphFormatError("8-byte graph6 size form is not supported", 1)
    else:
        if len(text) < 4:
            raise GraphFormatError("truncated long-form graph6 size", len(text))
        n = 0
        for ch in text[1:4]:
            n = n << 6 | (ord(ch) - 63)
        pos = 4
        if n <= _GRAPH6_SHORT_MAX:
            raise GraphFormatError(f"long-form size {n} should use the short form", 1)
    if n < 1:
        raise GraphFormatError("graph6 order 0 is not a valid graph here", 0)

    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = text[pos:]
    if len(body) != nbytes:
        raise GraphFormatError(
            f"expected {nbytes} edge bytes for n={n}, found {len(body)}", pos + min(len(body), nbytes)
        )
    pad = nbytes * 6 - nbits
    if pad and (ord(body[-1]) - 63) & ((1 << pad) - 1):
        raise GraphFormatError("nonzero padding bits in final byte", pos + nbytes - 1)

    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    return Graph._trusted(n, adj)


def read_graph6_file(path: str | os.PathLike) -> Iterator[tuple[int, Graph | GraphFormatError]]:
    """Yield ``(line_number, graph_or_error)`` for each non-blank line of a corpus file."""
    with open(path, encoding="ascii", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line == ">>graph6<<":
                continue
            try:
                yield lineno, parse_graph6(line)
            except GraphFormatError as exc:
                yield lineno, exc


# ---------------------------------------------------------------------------
# constructors (canonical labeling: earlier operands get lower labels)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"complete graph needs n >= 1, got {n}")
    full = (1 << n) - 1
    return Graph._trusted(n, [full ^ (1 << v) for v in range(n)])


def empty_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError(f"empty graph needs n >= 1, got {n}")
    return Graph._trusted(n, [0] * n)


def disjoint_union(gs: Sequence[Graph]) -> Graph:
    if not gs:
        raise ValueError("disjoint_union needs at least one graph")
    adj: list[int] = []
    offset = 0
    for g in gs:
        adj.extend(row << offset for row in g.adj)
        offset += g.n
    return Graph._trusted(offset, adj)


def join(g: Graph, h: Graph) -> Graph:
    """``g`` followed by ``h`` with every cross pair made adjacent."""
    mask_g = (1 << g.n) - 1
    mask_h = ((1 << h.n) - 1) << g.n
    adj = [row | mask_h for row in g.adj]
    adj.extend((row << g.n) | mask_g for row in h.adj)
    return Graph._trusted(g.n + h.n, adj)


@dataclass(frozen=True)
class PartitionSpec:
    """The split family ``K_s + (K_{n1} u ... u K_{nq})`` with ``n1 >= ... >= nq``."""

    s: int
    parts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))
        if self.s < 1:
            raise ValueError(f"join clique size s must be >= 1, got {self.s}")
        if not self.parts:
            raise ValueError("parts must be non-empty")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive, got {list(self.parts)}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be non-increasing, got {list(self.parts)}")

    @property
    def q(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return self.s + sum(self.parts)

    def block_sizes(self) -> tuple[int, ...]:
        return (self.s, *self.parts)

    def blocks(self) -> list[list[int]]:
        """Canonical vertex blocks: the join clique first, then each part."""
        out = [list(range(self.s))]
        start = self.s
        for p in self.parts:
            out.append(list(range(start, start + p)))
            start += p
        return out


def split_family(spec: PartitionSpec) -> Graph:
    return join(complete_graph(spec.s), disjoint_union([complete_graph(p) for p in spec.parts]))


def extremal_graph(n: int) -> Graph:
    """``K_1 + (K_{n-3} u 2K_1)``: connected, no perfect matching."""
    if n < 4:
        raise ValueError(f"extremal graph needs n >= 4, got {n}")
    return split_family(PartitionSpec(1, (n - 3, 1, 1)))


def family_g5(n: int, s: int) -> Graph:
    """``K_s + (K_{n-2s-1} u (s+1)K_1)`` for ``1 <= s <= n/2 - 1``, ``n`` even."""
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    if not 1 <= s <= n // 2 - 1:
        raise ValueError(f"s must lie in [1, {n // 2 - 1}] for n={n}, got {s}")
    return split_family(PartitionSpec(s, (n - 2 * s - 1,) + (1,) * (s + 1)))


# ---------------------------------------------------------------------------
# connectivity


def _component_of(adj: Sequence[int], start: int, allowed: int) -> int:
    comp = frontier = 1 << start
    while frontier:
        reach = 0
        while frontier:
            low = frontier & -frontier
            reach |= adj[low.bit_length() - 1]
            frontier ^= low
        frontier = reach & allowed & ~comp
        comp |= frontier
    return comp


def components(g: Graph, removed: int = 0) -> list[int]:
    """Vertex bitmasks of the components of ``g`` minus the vertex set ``removed``."""
    rest = ((1 << g.n) - 1) & ~removed
    out = []
    while rest:
        low = rest & -rest
        comp = _component_of(g.adj, low.bit_length() - 1, rest)
        out.append(comp)
        rest &= ~comp
    return out


def is_connected(g: Graph) -> bool:
    return _component_of(g.adj, 0, (1 << g.n) - 1) == (1 << g.n) - 1


# ---------------------------------------------------------------------------
# enumeration


def enumerate_graphs(n: int, connected_only: bool = False) -> Iterator[Graph]:
    """Every labeled graph on ``n`` vertices, once each, in edge-mask order."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > MAX_ENUMERATION_ORDER:
        raise ValueError(
            f"labeled enumeration refused for n={n} > {MAX_ENUMERATION_ORDER}; "
            "supply a graph6 corpus file instead"
        )
    pairs = list(itertools.combinations(range(n), 2))
    full = (1 << n) - 1
    for mask in range(1 << len(pairs)):
        adj = [0] * n
        k = mask
        for u, v in pairs:
            if k & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            k >>= 1
            if not k:
                break
        if connected_only and _component_of(adj, 0, full) != full:
            continue
        yield Graph._trusted(n, adj)
