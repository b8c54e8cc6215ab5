"""Decomposition of the standard module and classification of its
irreducible submodules.

The commutant of the generators is computed exactly; a generic symmetric
commutant element is then sampled with a seeded RNG and its
eigendecomposition splits the coordinate space into candidate
irreducible submodules.  Numeric results are certified downstream by
exact integer dimension identities, so a bad sample is detected and
resampled rather than silently accepted.

All generators in scope are real symmetric, so the analyzer works over
real scalars; a graph that genuinely needed complex module bases would
fail the dimension certificate and abort with ``DecompositionError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClassificationError,
    ConsistencyError,
    DecompositionError,
    ProfileError,
)
from .exact import Subspace, as_matrix, nullspace


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds for the floating-point side of the analysis."""

    eig_cluster: float = 1e-8  # relative eigenvalue clustering
    rank: float = 1e-8  # singular-value threshold, relative to largest
    residual: float = 1e-8  # invariance / eigenvector residuals


DEFAULT_TOLERANCES = Tolerances()


def to_float(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).astype(float)


def _numeric_rank(m: np.ndarray, tol: float, scale: float | None = None) -> int:
    """Singular values above ``tol * scale`` (scale defaults to the
    largest singular value of ``m`` itself).  Pass an explicit scale
    when ``m`` may legitimately be (near) zero, otherwise a noise matrix
    counts as rank 1 relative to itself."""
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    reference = s[0] if scale is None else scale
    if reference == 0.0:
        return 0
    return int(np.sum(s > tol * reference))


# ---------------------------------------------------------------------------
# Commutant

def commutant(generators) -> Subspace:
    """Exact canonical basis of the matrices commuting with every
    generator, as vectors in the n^2-dimensional ambient space.

    Diagonal generators are handled combinatorially first: X commutes
    with a diagonal g iff X vanishes wherever g's diagonal values
    differ.  The remaining commutation constraints form a linear system
    over the surviving positions, solved by exact elimination.
    """
    gens = [as_matrix(g) for g in generators]
    if not gens:
        raise ValueError("commutant requires at least one generator")
    n = gens[0].shape[0]
    for g in gens:
        if g.shape != (n, n):
            raise ValueError("generators must be square and equally sized")

    diag_gens, other_gens = [], []
    for g in gens:
        off = g.copy()
        for i in range(n):
            off[i, i] = 0
        (diag_gens if not np.any(off != 0) else other_gens).append(g)

    support = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if all(g[u, u] == g[v, v] for g in diag_gens)
    ]
    position = {uv: k for k, uv in enumerate(support)}
    unknowns = len(support)

    rows = []
    for g in other_gens:
        col_nonzero = [
            [k for k in range(n) if g[k, v] != 0] for v in range(n)
        ]
        row_nonzero = [
            [k for k in range(n) if g[u, k] != 0] for u in range(n)
        ]
        for u in range(n):
            for v in range(n):
                row = np.zeros(unknowns, dtype=object)
                touched = False
                for k in col_nonzero[v]:  # (X g)_{uv} terms
                    pos = position.get((u, k))
                    if pos is not None:
                        row[pos] = row[pos] + g[k, v]
                        touched = True
                for k in row_nonzero[u]:  # (g X)_{uv} terms
                    pos = position.get((k, v))
                    if pos is not None:
                        row[pos] = row[pos] - g[u, k]
                        touched = True
                if touched and bool(np.any(row != 0)):
                    rows.append(row)

    if rows:
        solutions = nullspace(np.array(rows, dtype=object))
    else:
        solutions = [
            np.array(
                [1 if j == k else 0 for j in range(unknowns)], dtype=object
            )
            for k in range(unknowns)
        ]
    vectors = []
    for sol in solutions:
        full = np.zeros(n * n, dtype=object)
        for (u, v), k in position.items():
            full[u * n + v] = sol[k]
        vectors.append(full)
    return Subspace.from_vectors(vectors, n * n)


# ---------------------------------------------------------------------------
# Decomposition

@dataclass
class IrreducibleModuleView:
    """An irreducible submodule of the standard module: an orthonormal
    real basis plus its shell profile and, when thin, the scalar flat
    and lowering parameters."""

    basis: np.ndarray  # n x dim, orthonormal columns
    endpoint: int
    diameter: int
    shell_dims: tuple[int, ...]
    thin: bool
    a: tuple[float, ...] | None = None
    x: tuple[float, ...] | None = None
    label: str | None = None
    iso_class: int | None = None
    quasi_class: int | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _cluster_eigenvalues(w: np.ndarray, rel_tol: float) -> list[slice]:
    scale = max(float(np.max(np.abs(w))), 1.0)
    clusters = []
    start = 0
    for k in range(1, len(w)):
        if w[k] - w[k - 1] > rel_tol * scale:
            clusters.append(slice(start, k))
            start = k
    clusters.append(slice(start, len(w)))
    return clusters


def _invariant_under(basis: np.ndarray, gen: np.ndarray, tol: float) -> bool:
    gnorm = max(np.linalg.norm(gen, 2), 1.0)
    image = gen @ basis
    resid = image - basis @ (basis.T @ image)
    return bool(np.linalg.norm(resid) <= tol * gnorm * basis.shape[1])


def _krylov_spans(
    restricted_ops: list[np.ndarray], start: np.ndarray, tol: float
) -> int:
    """Rank of the smallest invariant subspace containing ``start``
    under the restricted operators."""
    span = start.reshape(-1, 1) / np.linalg.norm(start)
    while True:
        images = [span] + [op @ span for op in restricted_ops]
        stacked = np.hstack(images)
        rank = _numeric_rank(stacked, tol)
        if rank == span.shape[1]:
            return rank
        u, s, _ = np.linalg.svd(stacked, full_matrices=False)
        span = u[:, : rank]


def decompose_standard_module(
    generators,
    comm: Subspace,
    seed: int,
    idempotents,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    max_attempts: int = 5,
) -> list[IrreducibleModuleView]:
    """Split the standard module into irreducible submodules.

    Samples a random symmetric commutant element (integer coefficients
    on the symmetrized exact basis) and takes its eigenspaces.  Each
    eigenspace is checked for invariance under the generators and for
    irreducibility (the orbit of a random vector under the restricted
    generators must fill it); failure resamples with the next seed, up
    to ``max_attempts`` times.  The final certification -- the sum of
    squared class dimensions equals dim T exactly -- happens in
    :func:`classify_modules`.
    """
    gen_f = [to_float(g) for g in generators]
    n = gen_f[0].shape[0]
    e_float = [to_float(e) for e in idempotents]
    comm_f = [row.reshape(n, n).astype(float) for row in comm.basis]
    if not comm_f:
        raise DecompositionError("commutant is zero-dimensional")

    last_failure = "no attempt made"
    for attempt in range(max_attempts):
        rng = np.random.default_rng(seed + attempt)
        coeffs = rng.integers(-9, 10, size=len(comm_f))
        sample = np.zeros((n, n))
        for c, b in zip(coeffs, comm_f):
            sample += float(c) * (b + b.T)
        if np.linalg.norm(sample) == 0.0:
            last_failure = "sampled zero commutant element"
            continue
        w, vecs = np.linalg.eigh(sample)
        ok = True
        views = []
        for cluster in _cluster_eigenvalues(w, tolerances.eig_cluster):
            basis = vecs[:, cluster]
            if not all(
                _invariant_under(basis, g, tolerances.residual)
                for g in gen_f
            ):
                ok, last_failure = False, "eigenspace not invariant"
                break
            restricted = [basis.T @ g @ basis for g in gen_f]
            start = rng.standard_normal(basis.shape[1])
            if (
                _krylov_spans(restricted, start, tolerances.rank)
                != basis.shape[1]
            ):
                ok, last_failure = False, "eigenspace is reducible"
                break
            r, d, shell_dims = module_profile(basis, e_float, tolerances)
            views.append(
                IrreducibleModuleView(
                    basis=basis,
                    endpoint=r,
                    diameter=d,
                    shell_dims=shell_dims,
                    thin=all(s == 1 for s in shell_dims),
                )
            )
        if not ok:
            continue
        if sum(v.dim for v in views) != n:
            last_failure = "module dimensions do not sum to |X|"
            continue
        views.sort(
            key=lambda v: (v.endpoint, v.diameter, v.dim, v.shell_dims)
        )
        return views
    raise DecompositionError(
        f"no certified decomposition after {max_attempts} attempts: "
        f"{last_failure}"
    )


def module_profile(
    basis: np.ndarray, idempotents_float, tolerances=DEFAULT_TOLERANCES
) -> tuple[int, int, tuple[int, ...]]:
    """Endpoint, diameter, and per-shell dimensions of a module.

    The nonzero shells must form a contiguous window; anything else
    signals a tolerance failure or a non-module input.
    """
    # columns of basis are orthonormal and the idempotents are projectors,
    # so 1 is the natural scale for the shell-rank decisions
    ranks = [
        _numeric_rank(e @ basis, tolerances.rank, scale=1.0)
        for e in idempotents_float
    ]
    occupied = [i for i, r in enumerate(ranks) if r > 0]
    if not occupied:
        raise ProfileError("module meets no shell")
    r, last = occupied[0], occupied[-1]
    if occupied != list(range(r, last + 1)):
        raise ProfileError(f"non-contiguous shell profile {ranks}")
    if sum(ranks) != basis.shape[1]:
        raise ProfileError(
            f"shell dimensions {ranks} do not sum to module dimension "
            f"{basis.shape[1]}"
        )
    return r, last - r, tuple(ranks[r : last + 1])


def thin_parameters(
    view: IrreducibleModuleView,
    L: np.ndarray,
    F: np.ndarray,
    R: np.ndarray,
    idempotents_float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Flat and lowering scalars of a thin module on its standard basis
    u, Ru, R^2 u, ... where u spans the endpoint shell."""
    if not view.thin:
        raise ValueError("thin parameters are defined only for thin modules")
    r, d = view.endpoint, view.diameter
    projected = idempotents_float[r] @ view.basis
    u_full, s, _ = np.linalg.svd(projected, full_matrices=False)
    u = u_full[:, 0]
    fnorm = max(np.linalg.norm(F, 2), 1.0)
    lnorm = max(np.linalg.norm(L, 2), 1.0)
    rnorm = max(np.linalg.norm(R, 2), 1.0)
    vs = [u]
    for i in range(1, d + 1):
        nxt = R @ vs[-1]
        if np.linalg.norm(nxt) <= tolerances.residual * rnorm * np.linalg.norm(
            vs[-1]
        ):
            raise ConsistencyError(
                f"standard basis vector vanished at step {i} < diameter {d}"
            )
        vs.append(nxt)
    top = R @ vs[d]
    if np.linalg.norm(top) > tolerances.residual * rnorm * np.linalg.norm(
        vs[d]
    ):
        raise ConsistencyError("R does not annihilate the top basis vector")
    a, x = [], []
    for i, v in enumerate(vs):
        norm_sq = float(v @ v)
        ai = float(F @ v @ v) / norm_sq
        if np.linalg.norm(F @ v - ai * v) > tolerances.residual * fnorm * (
            np.linalg.norm(v)
        ):
            raise ConsistencyError(
                f"flat action is not scalar on basis vector {i}"
            )
        a.append(ai)
        if i >= 1:
            prev = vs[i - 1]
            xi = float(L @ v @ prev) / float(prev @ prev)
            if np.linalg.norm(
                L @ v - xi * prev
            ) > tolerances.residual * lnorm * np.linalg.norm(v):
                raise ConsistencyError(
                    f"lowering action is not scalar on basis vector {i}"
                )
            x.append(xi)
    return tuple(a), tuple(x)


# ---------------------------------------------------------------------------
# Intertwiners and classification

def intertwiner_exists(
    U: IrreducibleModuleView,
    W: IrreducibleModuleView,
    shift: int,
    L: np.ndarray,
    F: np.ndarray,
    R: np.ndarray,
    idempotents_float,
    mode: str = "quasi",
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> bool:
    """Whether a bijection U -> W intertwines L, F, R exactly and the
    dual idempotents up to the given endpoint shift.

    Shift 0 is module isomorphism proper (``mode="iso"``); the quasi
    mode requires the shift to equal the endpoint difference.  The
    solution space of the intertwining system is computed by SVD; any
    nonzero solution between irreducible modules is invertible, which is
    confirmed by a singular-value threshold.
    """
    if mode not in ("quasi", "iso"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "iso" and shift != 0:
        raise ValueError("iso mode requires shift 0")
    if mode == "quasi" and shift != W.endpoint - U.endpoint:
        raise ValueError("quasi mode requires shift = r(W) - r(U)")
    du, dw = U.dim, W.dim
    if du != dw:
        return False
    D = len(idempotents_float) - 1

    def restricted(op, view):
        return view.basis.T @ op @ view.basis

    constraints = []
    op_scale = 1.0
    for op in (L, F, R):
        op_u = restricted(op, U)
        op_w = restricted(op, W)
        op_scale = max(
            op_scale, np.linalg.norm(op_u, 2), np.linalg.norm(op_w, 2)
        )
        constraints.append(
            np.kron(np.eye(dw), op_u.T) - np.kron(op_w, np.eye(du))
        )
    zero_w = np.zeros((dw, dw))
    for i in range(D + 1):
        e_u = restricted(idempotents_float[i], U)
        j = i + shift
        e_w = (
            restricted(idempotents_float[j], W)
            if 0 <= j <= D
            else zero_w
        )
        constraints.append(
            np.kron(np.eye(dw), e_u.T) - np.kron(e_w, np.eye(du))
        )
    system = np.vstack(constraints)
    _, s, vt = np.linalg.svd(system)
    # cutoff is relative to the size of the restricted operators, not to
    # the system itself: an (all but) zero system means every map
    # intertwines, not that there is no nullspace
    cutoff = tolerances.rank * max(
        float(s[0]) if s.size else 0.0, op_scale
    )
    null_vectors = [vt[k] for k in range(len(s)) if s[k] <= cutoff]
    null_vectors += [vt[k] for k in range(len(s), vt.shape[0])]
    if not null_vectors:
        return False
    rng = np.random.default_rng(0)
    candidates = list(null_vectors)
    for _ in range(4 if len(null_vectors) > 1 else 0):
        weights = rng.standard_normal(len(null_vectors))
        candidates.append(
            sum(w * v for w, v in zip(weights, null_vectors))
        )
    for cand in candidates:
        sigma = cand.reshape(dw, du)
        sv = np.linalg.svd(sigma, compute_uv=False)
        if sv[0] > 0 and sv[-1] > tolerances.rank * sv[0]:
            return True
    return False


@dataclass
class IsoClass:
    label: str
    members: list[int]
    endpoint: int
    diameter: int
    dim: int
    shell_dims: tuple[int, ...]
    quasi_label: str = ""


@dataclass
class QuasiClass:
    label: str
    iso_labels: list[str]
    diameter: int
    dim: int
    multiplicity: int  # number of iso classes mapping onto this class


@dataclass
class ModuleClassification:
    modules: list[IrreducibleModuleView]
    iso_classes: list[IsoClass]
    quasi_classes: list[QuasiClass]
    psi_multiplicities: dict[str, int]
    q_equals_t: bool
    witness: tuple[int, int] | None  # module indices with distinct endpoints
    checks: dict[str, bool] = field(default_factory=dict)


def classify_modules(
    modules: list[IrreducibleModuleView],
    dim_T: int,
    dim_Q: int,
    L: np.ndarray,
    F: np.ndarray,
    R: np.ndarray,
    idempotents_float,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ModuleClassification:
    """Partition the modules into isomorphism and quasi-isomorphism
    classes and decide Q = T.

    Quasi-isomorphism is decided by the intertwiner search, pre-bucketed
    by (diameter, shell profile); iso classes are the refinement of the
    quasi classes by endpoint (quasi-isomorphic modules with equal
    endpoints are isomorphic).  The exact integer identities sum(d^2) =
    dim T over iso classes, sum(d^2) = dim Q over quasi classes, and
    sum(m d^2) = dim T certify the whole numeric pipeline; any failure
    raises ``ClassificationError``.
    """
    k = len(modules)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for i in range(k):
        for j in range(i + 1, k):
            u, w = modules[i], modules[j]
            if find(i) == find(j):
                continue
            if (u.diameter, u.shell_dims) != (w.diameter, w.shell_dims):
                continue
            if intertwiner_exists(
                u,
                w,
                w.endpoint - u.endpoint,
                L,
                F,
                R,
                idempotents_float,
                mode="quasi",
                tolerances=tolerances,
            ):
                union(i, j)

    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)

    # iso classes: quasi classes refined by endpoint
    raw_iso: list[tuple[list[int], int]] = []  # (members, quasi group id)
    for gid, members in groups.items():
        by_endpoint: dict[int, list[int]] = {}
        for i in members:
            by_endpoint.setdefault(modules[i].endpoint, []).append(i)
        for _, sub in sorted(by_endpoint.items()):
            raw_iso.append((sub, gid))

    def iso_key(entry):
        m = modules[entry[0][0]]
        return (m.endpoint, m.diameter, m.dim, m.shell_dims)

    raw_iso.sort(key=iso_key)
    iso_classes = []
    gid_of_iso = []
    for idx, (members, gid) in enumerate(raw_iso):
        m = modules[members[0]]
        iso_classes.append(
            IsoClass(
                label=f"T{idx}",
                members=sorted(members),
                endpoint=m.endpoint,
                diameter=m.diameter,
                dim=m.dim,
                shell_dims=m.shell_dims,
            )
        )
        gid_of_iso.append(gid)
        for i in members:
            modules[i].iso_class = idx

    quasi_order = []
    for gid in gid_of_iso:
        if gid not in quasi_order:
            quasi_order.append(gid)
    quasi_classes = []
    for qidx, gid in enumerate(quasi_order):
        iso_labels = [
            iso_classes[c].label
            for c in range(len(iso_classes))
            if gid_of_iso[c] == gid
        ]
        rep = modules[groups[gid][0]]
        quasi_classes.append(
            QuasiClass(
                label=f"Q{qidx}",
                iso_labels=iso_labels,
                diameter=rep.diameter,
                dim=rep.dim,
                multiplicity=len(iso_labels),
            )
        )
        for c in range(len(iso_classes)):
            if gid_of_iso[c] == gid:
                iso_classes[c].quasi_label = f"Q{qidx}"
        for i in groups[gid]:
            modules[i].quasi_class = qidx

    # invariance of diameter across quasi classes, endpoint across iso
    for qc in quasi_classes:
        members = [
            i
            for c, gid in enumerate(gid_of_iso)
            if iso_classes[c].quasi_label == qc.label
            for i in iso_classes[c].members
        ]
        if len({modules[i].diameter for i in members}) != 1:
            raise ClassificationError(
                "diameter varies within a quasi-isomorphism class"
            )

    witness = None
    for gid, members in groups.items():
        endpoints = sorted({modules[i].endpoint for i in members})
        if len(endpoints) > 1:
            pair = (
                min(i for i in members if modules[i].endpoint == endpoints[0]),
                min(i for i in members if modules[i].endpoint == endpoints[1]),
            )
            if witness is None or pair < witness:
                witness = pair
    q_equals_t = witness is None

    checks = {}
    sum_iso = sum(c.dim**2 for c in iso_classes)
    checks["sum_d_lambda_sq_equals_dim_T"] = sum_iso == dim_T
    sum_quasi = sum(c.dim**2 for c in quasi_classes)
    checks["sum_d_mu_sq_equals_dim_Q"] = sum_quasi == dim_Q
    sum_weighted = sum(c.multiplicity * c.dim**2 for c in quasi_classes)
    checks["sum_m_mu_d_mu_sq_equals_dim_T"] = sum_weighted == dim_T
    checks["verdict_matches_dimensions"] = (dim_T == dim_Q) == q_equals_t
    for name, passed in checks.items():
        if not passed:
            raise ClassificationError(
                name,
                f"dim_T={dim_T}, dim_Q={dim_Q}, sum_iso={sum_iso}, "
                f"sum_quasi={sum_quasi}, sum_weighted={sum_weighted}",
            )

    psi = {c.label: c.multiplicity for c in quasi_classes}
    return ModuleClassification(
        modules=modules,
        iso_classes=iso_classes,
        quasi_classes=quasi_classes,
        psi_multiplicities=psi,
        q_equals_t=q_equals_t,
        witness=witness,
        checks=checks,
    )
