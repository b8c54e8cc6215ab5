"""Independent reference implementations used as test oracles.

Everything here is deliberately written from scratch with different
algorithms and different number types than the package under test, so
agreement between the two is meaningful evidence of correctness:

- graph6 encoding via big-integer bit packing instead of bit lists;
- matrix span dimension over ``fractions.Fraction`` via plain Gaussian
  elimination (no canonical RREF bookkeeping);
- algebra dimension by brute-force enumeration of all words in the
  generators up to stabilization of the span;
- BFS distances on a dict-of-sets adjacency structure.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


# ---------------------------------------------------------------------------
# graph6

def g6_encode_reference(n: int, edges) -> str:
    """Encode a graph as graph6 by packing the upper-triangle column-major
    bit string into one big integer."""
    if n < 1:
        raise ValueError("need at least one vertex")
    if n < 63:
        head = chr(n + 63)
    else:
        head = "~" + chr(((n >> 12) & 63) + 63) + chr(((n >> 6) & 63) + 63) + chr((n & 63) + 63)
    edge_set = {(min(u, v), max(u, v)) for u, v in edges}
    nbits = n * (n - 1) // 2
    value = 0
    k = 0
    for v in range(1, n):
        for u in range(v):
            value <<= 1
            if (u, v) in edge_set:
                value |= 1
            k += 1
    assert k == nbits
    pad = (-nbits) % 6
    value <<= pad
    total = nbits + pad
    body = []
    for shift in range(total - 6, -6, -6):
        body.append(chr(((value >> shift) & 63) + 63))
    return head + "".join(body)


# ---------------------------------------------------------------------------
# Fraction linear algebra

def frac_rank(rows: list[list[Fraction]]) -> int:
    """Rank by straightforward Gaussian elimination with partial search."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        pivot = next(
            (r for r in range(rank, nrows) if m[r][col] != 0), None
        )
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = Fraction(1) / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def word_span_dim(generators, include_identity: bool = True) -> int:
    """Dimension of the algebra generated by the given integer matrices,
    computed by enumerating all products g_{w1} g_{w2} ... g_{wk} of
    increasing word length until the span dimension stabilizes."""
    gens = [[list(map(Fraction, row)) for row in g] for g in generators]
    n = len(gens[0])
    words = []
    if include_identity:
        ident = [
            [Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]
        words.append(ident)
    current = [g for g in gens]
    words.extend(current)
    dim = frac_rank([[x for row in w for x in row] for w in words])
    while True:
        nxt = []
        for w in current:
            for g in gens:
                nxt.append(_mat_mul(w, g))
        words.extend(nxt)
        new_dim = frac_rank([[x for row in w for x in row] for w in words])
        if new_dim == dim:
            return dim
        dim = new_dim
        current = nxt


# ---------------------------------------------------------------------------
# Graph measurements

def bfs_distances(n: int, edges, start: int) -> list[int]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    dist = {start: 0}
    frontier = [start]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return [dist[v] for v in range(n)]


def hamming_vertices_and_edges(D: int, N: int):
    """Hamming graph built from scratch: same lexicographic vertex order
    as the generator under test, edges found by pairwise comparison."""
    tuples = list(product(range(1, N + 1), repeat=D))
    edges = []
    for i in range(len(tuples)):
        for j in range(i + 1, len(tuples)):
            diffs = sum(a != b for a, b in zip(tuples[i], tuples[j]))
            if diffs == 1:
                edges.append((i, j))
    return tuples, edges


def hamming_theta_star(D: int, N: int) -> list[int]:
    return [(N - 1) * (D - i) - i for i in range(D + 1)]


def dual_polar_x(q: int, D: int, i: int) -> float:
    """Lowering parameter x_i of the bipartite dual polar graph."""
    return q ** (i + 1) * (q**i - 1) * (q ** (D - i - 1) - 1) / (q - 1) ** 2


def dual_polar_vertex_count(D: int, q: int) -> int:
    n = 1
    for i in range(D):
        n *= q**i + 1
    return n
