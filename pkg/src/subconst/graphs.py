"""Graphs, graph6 I/O, example-family generators, and distance partitions.

Vertices are 0-based contiguous integers.  Generators document their
vertex-to-combinatorial-object maps so callers can target specific
vertices: Hamming vertices are tuples in lexicographic order, dual polar
vertices are row-reduced basis matrices in sorted order.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from itertools import combinations, product

from .errors import (
    DisconnectedGraphError,
    Graph6ParseError,
    SizeCapError,
    UnsupportedParameterError,
)

DEFAULT_SIZE_CAP = 4096
SIZE_CAP_ENV = "SUBCONST_SIZE_CAP"


def default_size_cap() -> int:
    value = os.environ.get(SIZE_CAP_ENV)
    return int(value) if value else DEFAULT_SIZE_CAP


class Graph:
    """Simple undirected connected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "edges", "_adj", "vertex_labels")

    def __init__(self, n: int, edges, vertex_labels=None):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        normalized = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u} is not allowed")
            normalized.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = frozenset(normalized)
        adj = [[] for _ in range(n)]
        for u, v in sorted(normalized):
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(nb)) for nb in adj)
        self.vertex_labels = tuple(vertex_labels) if vertex_labels else None
        if not self._is_connected():
            raise DisconnectedGraphError(
                f"graph on {n} vertices with {len(self.edges)} edges "
                "is not connected"
            )

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def _is_connected(self) -> bool:
        seen = [False] * self.n
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    queue.append(w)
        return count == self.n

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class DistancePartition:
    """BFS shells around a base vertex."""

    base: int
    dist: tuple[int, ...]
    diameter: int
    shells: tuple[tuple[int, ...], ...]


def distance_partition(g: Graph, x: int) -> DistancePartition:
    """BFS from ``x``; shells[i] lists the vertices at distance i."""
    if not (0 <= x < g.n):
        raise ValueError(f"base vertex {x} out of range for n={g.n}")
    dist = [-1] * g.n
    dist[x] = 0
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    diameter = max(dist)
    shells = [[] for _ in range(diameter + 1)]
    for v, d in enumerate(dist):
        shells[d].append(v)
    return DistancePartition(
        base=x,
        dist=tuple(dist),
        diameter=diameter,
        shells=tuple(tuple(s) for s in shells),
    )


# ---------------------------------------------------------------------------
# graph6 (6-bit big-endian groups, value+63 bytes, upper-triangle column order)

_G6_MIN, _G6_MAX = 63, 126


def _g6_check_byte(c: int, offset: int) -> int:
    if not (_G6_MIN <= c <= _G6_MAX):
        raise Graph6ParseError(f"invalid graph6 byte {c!r}", offset)
    return c - _G6_MIN


def parse_graph6(text: str) -> Graph:
    """Decode a one-line graph6 string; rejects disconnected graphs."""
    data = text.strip()
    if not data:
        raise Graph6ParseError("empty graph6 string", 0)
    try:
        raw = data.encode("ascii")
    except UnicodeEncodeError as exc:
        raise Graph6ParseError("non-ASCII byte", exc.start) from None
    pos = 0
    first = _g6_check_byte(raw[pos], pos)
    if first < 63:
        n = first
        pos = 1
    else:
        if len(raw) < 4:
            raise Graph6ParseError("truncated long-form vertex count", pos)
        if raw[1] == ord("~"):
            raise Graph6ParseError("vertex counts >= 2^18 unsupported", 1)
        n = 0
        for k in range(1, 4):
            n = (n << 6) | _g6_check_byte(raw[k], k)
        pos = 4
    if n == 0:
        raise Graph6ParseError("graph6 string encodes the empty graph", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(raw) - pos != nbytes:
        raise Graph6ParseError(
            f"expected {nbytes} data bytes for n={n}, got {len(raw) - pos}",
            pos,
        )
    bits = []
    for k in range(nbytes):
        value = _g6_check_byte(raw[pos + k], pos + k)
        for shift in (5, 4, 3, 2, 1, 0):
            bits.append((value >> shift) & 1)
    for extra in range(nbits, len(bits)):
        if bits[extra]:
            raise Graph6ParseError(
                "nonzero padding bit", pos + extra // 6
            )
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v))
            idx += 1
    return Graph(n, edges)


def encode_graph6(g: Graph) -> str:
    """Encode a graph as a one-line graph6 string."""
    n = g.n
    if n < 63:
        head = chr(n + 63)
    elif n < 2**18:
        head = "~" + "".join(
            chr(((n >> shift) & 0x3F) + 63) for shift in (12, 6, 0)
        )
    else:
        raise ValueError("vertex counts >= 2^18 unsupported")
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append(1 if (u, v) in g.edges else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = []
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k : k + 6]:
            value = (value << 1) | b
        chars.append(chr(value + 63))
    return head + "".join(chars)


# ---------------------------------------------------------------------------
# Generators

def gen_hamming(D: int, N: int, size_cap: int | None = None) -> Graph:
    """Hamming graph H(D, N): D-tuples over {1..N}, adjacent when the
    tuples differ in exactly one coordinate.

    Vertex i is the i-th tuple of ``itertools.product(range(1, N+1),
    repeat=D)`` (lexicographic order).
    """
    if D < 1:
        raise UnsupportedParameterError("Hamming D must be >= 1")
    if N < 2:
        raise UnsupportedParameterError("Hamming N must be >= 2")
    cap = size_cap if size_cap is not None else default_size_cap()
    n = N**D
    if n > cap:
        raise SizeCapError(f"H({D},{N}) has {n} vertices, cap is {cap}")
    tuples = list(product(range(1, N + 1), repeat=D))
    index = {t: i for i, t in enumerate(tuples)}
    edges = []
    for i, t in enumerate(tuples):
        for coord in range(D):
            for letter in range(t[coord] + 1, N + 1):
                other = t[:coord] + (letter,) + t[coord + 1 :]
                edges.append((i, index[other]))
    return Graph(n, edges, vertex_labels=tuples)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [row[:] for row in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] % p), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = pow(m[rank][c], p - 2, p) if p > 2 else m[rank][c] % p
        m[rank] = [(e * inv) % p for e in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c] % p:
                f = m[r][c] % p
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _reduced_echelon_bases(dim: int, ambient: int, q: int):
    """All row-reduced canonical basis matrices of dim-dimensional
    subspaces of F_q^ambient, one matrix per subspace."""
    for pivots in combinations(range(ambient), dim):
        free = [
            (i, j)
            for i in range(dim)
            for j in range(pivots[i] + 1, ambient)
            if j not in pivots
        ]
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * ambient for _ in range(dim)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), val in zip(free, values):
                rows[i][j] = val
            yield tuple(tuple(r) for r in rows)


def _quadratic_form(v, q: int) -> int:
    # hyperbolic split form in consecutive coordinate pairs
    return sum(v[2 * k] * v[2 * k + 1] for k in range(len(v) // 2)) % q


def _polar_form(u, v, q: int) -> int:
    return (
        sum(
            u[2 * k] * v[2 * k + 1] + u[2 * k + 1] * v[2 * k]
            for k in range(len(u) // 2)
        )
        % q
    )


def gen_dual_polar(D: int, q: int, size_cap: int | None = None) -> Graph:
    """Bipartite dual polar graph of type D on parameters (D, q).

    Vertices are the D-dimensional totally singular subspaces of
    F_q^{2D} under the hyperbolic form Q(x) = x_1 x_2 + ... +
    x_{2D-1} x_{2D}, each represented by its row-reduced basis matrix;
    vertex order is the sorted order of those matrices.  Two subspaces
    are adjacent when they intersect in dimension D-1.

    The form vanishes on a subspace iff it vanishes on a basis and the
    polar form vanishes on all basis pairs (valid in every
    characteristic, since cross terms of Q expand through the polar
    form).
    """
    if D < 2:
        raise UnsupportedParameterError("dual polar D must be >= 2")
    if not _is_prime(q):
        raise UnsupportedParameterError(
            f"q={q} is not prime (prime powers unsupported)"
        )
    cap = size_cap if size_cap is not None else default_size_cap()
    n = 1
    for i in range(D):
        n *= q**i + 1
    if n > cap:
        raise SizeCapError(f"D_{D}({q}) has {n} vertices, cap is {cap}")

    vertices = []
    for basis in _reduced_echelon_bases(D, 2 * D, q):
        if any(_quadratic_form(row, q) for row in basis):
            continue
        if any(
            _polar_form(basis[i], basis[j], q)
            for i in range(D)
            for j in range(i + 1, D)
        ):
            continue
        vertices.append(basis)
    vertices.sort()
    if len(vertices) != n:
        raise AssertionError(
            f"expected {n} totally singular subspaces, found {len(vertices)}"
        )
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            stacked = [list(r) for r in vertices[i]] + [
                list(r) for r in vertices[j]
            ]
            if _rank_mod_p(stacked, q) == D + 1:
                edges.append((i, j))
    return Graph(n, edges, vertex_labels=vertices)
