"""Constructs the concrete matrices and algebras attached to a rooted graph.

Given a graph and a base vertex this module builds the adjacency matrix
A, the dual idempotents E_i (diagonal shell projectors), the lowering /
flat / raising split A = L + F + R, the subconstituent algebra T
(generated by A and the E_i), the quantum adjacency algebra Q (generated
by L, F, R), and the shell-shift gradings of both.  Every identity
checked here is a theorem, so a violation raises ``ConsistencyError``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .exact import (
    MatrixAlgebra,
    Subspace,
    algebra_closure,
    identity_matrix,
    subspace_intersection,
    vectorize,
    zero_matrix,
)
from .graphs import DistancePartition, Graph


def adjacency_matrix(g: Graph) -> np.ndarray:
    a = zero_matrix(g.n, g.n)
    for u, v in g.edges:
        a[u, v] = 1
        a[v, u] = 1
    return a


def dual_idempotents(p: DistancePartition) -> list[np.ndarray]:
    """Diagonal 0/1 projectors onto the distance shells; one per shell."""
    n = len(p.dist)
    out = []
    for i in range(p.diameter + 1):
        e = zero_matrix(n, n)
        for v in p.shells[i]:
            e[v, v] = 1
        out.append(e)
    return out


def shell_shift_part(m: np.ndarray, dist, n: int) -> np.ndarray:
    """The part of a matrix moving shell i to shell i+n, i.e. the sum of
    sandwiches E_{i+n} m E_i; equals m masked to entries (u, v) with
    dist[u] - dist[v] = n."""
    d = np.asarray(dist)
    mask = (d[:, None] - d[None, :]) == n
    return np.where(mask, m, 0)


@dataclass(frozen=True)
class QuantumDecomposition:
    """A = L + F + R relative to the distance partition, with the dual
    idempotents and base diameter."""

    A: np.ndarray
    L: np.ndarray
    F: np.ndarray
    R: np.ndarray
    E: tuple[np.ndarray, ...]
    D: int
    dist: tuple[int, ...]


def _exact_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.all(a == b))


def _check_decomposition(qd: QuantumDecomposition) -> None:
    n = qd.A.shape[0]
    ident = identity_matrix(n)
    if not _exact_equal(qd.L + qd.F + qd.R, qd.A):
        raise ConsistencyError("A != L + F + R")
    if not _exact_equal(qd.L.T, qd.R):
        raise ConsistencyError("L^t != R")
    if not _exact_equal(qd.F.T, qd.F):
        raise ConsistencyError("F is not symmetric")
    total = zero_matrix(n, n)
    for i, ei in enumerate(qd.E):
        total = total + ei
        for j, ej in enumerate(qd.E):
            expect = ei if i == j else zero_matrix(n, n)
            if not _exact_equal(ei.dot(ej), expect):
                raise ConsistencyError("E_i E_j != delta_ij E_i")
            if abs(i - j) > 1 and not _exact_equal(
                ei.dot(qd.A).dot(ej), zero_matrix(n, n)
            ):
                raise ConsistencyError("E_i A E_j != 0 for |i-j| > 1")
    if not _exact_equal(total, ident):
        raise ConsistencyError("sum of dual idempotents != I")
    zero = zero_matrix(n, n)
    if not _exact_equal(qd.L.dot(qd.E[0]), zero):
        raise ConsistencyError("L E_0 != 0")
    if not _exact_equal(qd.E[qd.D].dot(qd.L), zero):
        raise ConsistencyError("E_D L != 0")
    if not _exact_equal(qd.R.dot(qd.E[qd.D]), zero):
        raise ConsistencyError("R E_D != 0")
    if not _exact_equal(qd.E[0].dot(qd.R), zero):
        raise ConsistencyError("E_0 R != 0")
    # shift relations: L E_i = E_{i-1} L, F E_i = E_i F, R E_{i-1} = E_i R
    for i in range(qd.D + 1):
        if not _exact_equal(qd.F.dot(qd.E[i]), qd.E[i].dot(qd.F)):
            raise ConsistencyError("F E_i != E_i F")
        if i >= 1:
            if not _exact_equal(qd.L.dot(qd.E[i]), qd.E[i - 1].dot(qd.L)):
                raise ConsistencyError("L E_i != E_{i-1} L")
            if not _exact_equal(qd.R.dot(qd.E[i - 1]), qd.E[i].dot(qd.R)):
                raise ConsistencyError("R E_{i-1} != E_i R")


def lfr_decomposition(A: np.ndarray, E, dist) -> QuantumDecomposition:
    """Split A into lowering, flat, and raising parts; verifies all exact
    decomposition identities before returning."""
    dist = tuple(dist)
    n = A.shape[0]
    L = shell_shift_part(A, dist, -1)
    F = shell_shift_part(A, dist, 0)
    R = shell_shift_part(A, dist, 1)
    qd = QuantumDecomposition(
        A=A, L=L, F=F, R=R, E=tuple(E), D=len(E) - 1, dist=dist
    )
    if n != len(dist):
        raise ValueError("A and dist sizes disagree")
    _check_decomposition(qd)
    return qd


def build_T(A: np.ndarray, E) -> MatrixAlgebra:
    """Subconstituent algebra: closure of {A} and the dual idempotents."""
    return algebra_closure([A] + list(E), include_identity=True)


def build_Q(
    qd: QuantumDecomposition,
    T: MatrixAlgebra | None = None,
    include_identity: bool = True,
) -> MatrixAlgebra:
    """Quantum adjacency algebra: closure of {L, F, R}.

    The identity is adjoined by default (unital convention); pass
    ``include_identity=False`` to probe whether the non-unital closure
    already contains I.  When T is supplied, exact containment Q <= T is
    verified basis element by basis element.
    """
    Q = algebra_closure([qd.L, qd.F, qd.R], include_identity=include_identity)
    if T is not None:
        for b in Q.subspace.basis:
            if not T.subspace.contains_vector(b):
                raise ConsistencyError("Q is not contained in T")
    return Q


def grading_components(
    alg: MatrixAlgebra, dist, D: int
) -> dict[int, Subspace]:
    """Shell-shift grading of an algebra built over the same partition:
    component n is the span of the shift-n parts of the basis elements.

    The components must sum directly to the algebra; a dimension
    mismatch is an internal error.
    """
    n = alg.matrix_dim
    components: dict[int, Subspace] = {}
    for shift in range(-D, D + 1):
        parts = [
            shell_shift_part(b, dist, shift) for b in alg.basis_matrices()
        ]
        components[shift] = Subspace.from_vectors(
            (vectorize(p) for p in parts), n * n
        )
    total = sum(c.dim for c in components.values())
    if total != alg.dim:
        raise ConsistencyError(
            f"grading dimensions sum to {total}, algebra has dim {alg.dim}"
        )
    return components


def q_grading(
    Q: MatrixAlgebra, T_components: dict[int, Subspace], dist, D: int
) -> dict[int, Subspace]:
    """Grading of Q, computed two independent ways and cross-checked:
    (a) intersect Q with each T component, (b) shift-n parts of the Q
    basis.  The two must agree exactly."""
    projected = grading_components(Q, dist, D)
    components: dict[int, Subspace] = {}
    for shift in range(-D, D + 1):
        via_intersection = subspace_intersection(
            Q.subspace, T_components[shift]
        )
        if via_intersection != projected[shift]:
            raise ConsistencyError(
                f"Q grading component {shift}: intersection and projection "
                "methods disagree"
            )
        components[shift] = via_intersection
    return components


def hamming_dual_adjacency(E, D: int, N: int) -> np.ndarray:
    """Dual adjacency matrix of H(D, N) at the base vertex: the diagonal
    matrix with eigenvalue (N-1)(D-i) - i on shell i.  The eigenvalues
    are strictly decreasing in i, hence pairwise distinct."""
    thetas = [(N - 1) * (D - i) - i for i in range(D + 1)]
    n = E[0].shape[0]
    out = zero_matrix(n, n)
    for theta, ei in zip(thetas, E):
        out = out + theta * ei
    return out
