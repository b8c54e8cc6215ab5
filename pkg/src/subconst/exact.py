"""Exact dense rational linear algebra over vectorized matrices.

Matrices are numpy arrays of dtype ``object`` whose entries are Python
ints or ``gmpy2.mpq`` rationals (``fractions.Fraction`` if gmpy2 is
unavailable); both are always kept in lowest terms by the number type
itself.  A :class:`Subspace` stores the unique reduced-row-echelon basis
of a span, so subspace equality is entrywise basis comparison.

All algebra dimensions downstream hinge on strict integer comparisons,
which is why nothing in this module ever touches floating point.
"""

from __future__ import annotations

import warnings
from bisect import bisect_left
from collections import deque

import numpy as np

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as QQ

AMBIENT_WARN_THRESHOLD = 10_000


def as_matrix(rows) -> np.ndarray:
    """Coerce nested sequences (or an array) to a 2-d object array."""
    m = np.array(rows, dtype=object)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError("expected a nonempty two-dimensional matrix")
    return m


def identity_matrix(n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=object)
    for i in range(n):
        m[i, i] = 1
    return m


def zero_matrix(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def vectorize(m: np.ndarray) -> np.ndarray:
    """Row-major flattening of a matrix into an ambient vector."""
    return m.reshape(-1)


def _is_zero_vector(v: np.ndarray) -> bool:
    return not bool(np.any(v != 0))


class _SpanBuilder:
    """Incremental reduced-row-echelon accumulator.

    Rows are kept fully reduced at all times (pivots equal 1 and are the
    only nonzero entries in their columns), so the row list is the
    canonical basis of the span at every step.
    """

    def __init__(self, ambient_dim: int):
        if ambient_dim > AMBIENT_WARN_THRESHOLD:
            warnings.warn(
                f"ambient dimension {ambient_dim} exceeds "
                f"{AMBIENT_WARN_THRESHOLD}; exact elimination may be slow",
                stacklevel=2,
            )
        self.ambient_dim = ambient_dim
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def residual(self, vec: np.ndarray) -> np.ndarray:
        v = np.array(vec, dtype=object, copy=True)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if c != 0:
                v = v - c * row
        return v

    def contains(self, vec: np.ndarray) -> bool:
        return _is_zero_vector(self.residual(vec))

    def insert(self, vec: np.ndarray) -> bool:
        """Adjoin a vector; return True iff it enlarged the span."""
        v = self.residual(vec)
        support = np.flatnonzero(v != 0)
        if support.size == 0:
            return False
        p = int(support[0])
        lead = v[p]
        v = v * (QQ(1) / QQ(lead))
        for k, row in enumerate(self.rows):
            c = row[p]
            if c != 0:
                self.rows[k] = row - c * v
        at = bisect_left(self.pivots, p)
        self.pivots.insert(at, p)
        self.rows.insert(at, v)
        return True


class Subspace:
    """A subspace of an ambient coordinate space, in canonical RREF basis."""

    def __init__(self, ambient_dim: int, rows, pivots):
        self.ambient_dim = ambient_dim
        self._rows = tuple(rows)
        self._pivots = tuple(pivots)

    @classmethod
    def from_vectors(cls, vectors, ambient_dim: int) -> "Subspace":
        builder = _SpanBuilder(ambient_dim)
        for v in vectors:
            v = np.asarray(v, dtype=object)
            if v.shape != (ambient_dim,):
                raise ValueError(
                    f"vector length {v.shape} does not match ambient "
                    f"dimension {ambient_dim}"
                )
            builder.insert(v)
        return cls(ambient_dim, builder.rows, builder.pivots)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def basis(self) -> tuple[np.ndarray, ...]:
        return self._rows

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def contains_vector(self, vec: np.ndarray) -> bool:
        v = np.asarray(vec, dtype=object)
        if v.shape != (self.ambient_dim,):
            raise ValueError("ambient dimension mismatch")
        for row, p in zip(self._rows, self._pivots):
            c = v[p]
            if c != 0:
                v = v - c * row
        return _is_zero_vector(v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim:
            return False
        if self._pivots != other._pivots:
            return False
        return all(
            bool(np.all(a == b)) for a, b in zip(self._rows, other._rows)
        )

    def __hash__(self):  # pragma: no cover - subspaces are not dict keys
        return hash((self.ambient_dim, self._pivots))

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def rref(m) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row echelon form, rank, and pivot columns of a matrix."""
    m = as_matrix(m)
    rows, cols = m.shape
    builder = _SpanBuilder(cols)
    for r in range(rows):
        builder.insert(m[r])
    out = zero_matrix(rows, cols)
    for k, row in enumerate(builder.rows):
        out[k] = row
    return out, len(builder.pivots), tuple(builder.pivots)


def nullspace(m) -> list[np.ndarray]:
    """Canonical basis of ``{x : m @ x = 0}`` (free-variable vectors)."""
    m = as_matrix(m)
    reduced, _, pivots = rref(m)
    cols = m.shape[1]
    pivot_set = set(pivots)
    pivot_row = {p: k for k, p in enumerate(pivots)}
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = np.zeros(cols, dtype=object)
        v[free] = 1
        for p in pivots:
            v[p] = -reduced[pivot_row[p], free]
        basis.append(v)
    return basis


def span_of(matrices) -> Subspace:
    """Canonical basis of the span of the vectorized matrices."""
    mats = [as_matrix(m) for m in matrices]
    if not mats:
        raise ValueError("span_of requires at least one matrix")
    shape = mats[0].shape
    for m in mats:
        if m.shape != shape:
            raise ValueError("matrices in a span must share dimensions")
    ambient = shape[0] * shape[1]
    return Subspace.from_vectors((vectorize(m) for m in mats), ambient)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace.from_vectors(list(a.basis) + list(b.basis), a.ambient_dim)


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Canonical basis of ``a ∩ b``.

    Solves for coefficient vectors with ``sum(alpha_i a_i) =
    sum(beta_j b_j)`` via the nullspace of the matrix whose columns are
    the two bases.
    """
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return Subspace.from_vectors([], a.ambient_dim)
    cols = a.dim + b.dim
    stacked = zero_matrix(a.ambient_dim, cols)
    for j, row in enumerate(a.basis):
        stacked[:, j] = row
    for j, row in enumerate(b.basis):
        stacked[:, a.dim + j] = row
    vectors = []
    for coeff in nullspace(stacked):
        v = np.zeros(a.ambient_dim, dtype=object)
        for j, row in enumerate(a.basis):
            c = coeff[j]
            if c != 0:
                v = v + c * row
        vectors.append(v)
    return Subspace.from_vectors(vectors, a.ambient_dim)


def contains(s: Subspace, m) -> bool:
    """True iff the vectorized matrix lies in the subspace."""
    return s.contains_vector(vectorize(as_matrix(m)))


class MatrixAlgebra:
    """A multiplication-closed span of square matrices.

    The canonical basis lives in the :class:`Subspace`; the seed
    matrices are retained for provenance.
    """

    def __init__(self, subspace: Subspace, generators, matrix_dim: int):
        self.subspace = subspace
        self.generators = tuple(generators)
        self.matrix_dim = matrix_dim

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def basis_matrices(self) -> list[np.ndarray]:
        n = self.matrix_dim
        return [row.reshape(n, n) for row in self.subspace.basis]

    def contains_matrix(self, m) -> bool:
        return contains(self.subspace, m)

    def __repr__(self):
        return f"MatrixAlgebra(matrix_dim={self.matrix_dim}, dim={self.dim})"


def algebra_closure(seed, include_identity: bool = True) -> MatrixAlgebra:
    """Smallest multiplication-closed subspace containing the seed.

    Maintains the RREF basis of the current span together with a list of
    representative matrices spanning it; every product of two
    representatives is tested for span membership and adjoined when it
    enlarges the span.  Terminates because the dimension is bounded by
    n^2 and strictly increases on every adjunction.
    """
    mats = [as_matrix(m) for m in seed]
    if not mats:
        raise ValueError("algebra_closure requires at least one seed matrix")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise ValueError("seed matrices must be square and equally sized")
    if include_identity:
        mats = [identity_matrix(n)] + mats

    builder = _SpanBuilder(n * n)
    reps: list[np.ndarray] = []
    pending: deque[tuple[int, int]] = deque()

    def adjoin(m: np.ndarray) -> None:
        if builder.insert(vectorize(m)):
            k = len(reps)
            reps.append(m)
            for j in range(k + 1):
                pending.append((k, j))
                if j != k:
                    pending.append((j, k))

    for m in mats:
        adjoin(m)
    while pending:
        i, j = pending.popleft()
        adjoin(reps[i].dot(reps[j]))

    subspace = Subspace(n * n, builder.rows, builder.pivots)
    algebra = MatrixAlgebra(subspace, seed, n)
    if include_identity and not algebra.contains_matrix(identity_matrix(n)):
        raise AssertionError("closure lost the identity matrix")
    return algebra
