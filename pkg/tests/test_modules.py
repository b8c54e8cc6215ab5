"""Commutant, module decomposition, thin parameters, classification."""

import numpy as np
import pytest

from subconst import (
    Graph,
    Tolerances,
    adjacency_matrix,
    analyze_graph,
    build_exact_model,
    classify_model,
    classify_modules,
    commutant,
    decompose_standard_module,
    distance_partition,
    dual_idempotents,
    gen_dual_polar,
    gen_hamming,
    intertwiner_exists,
    thin_parameters,
)
from subconst.exact import as_matrix, identity_matrix
from subconst.modules import to_float

C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


def rooted_generators(graph, base=0):
    p = distance_partition(graph, base)
    a = adjacency_matrix(graph)
    e = dual_idempotents(p)
    return p, a, e


class TestCommutant:
    def test_identity_generator_gives_everything(self):
        assert commutant([identity_matrix(3)]).dim == 9

    def test_distinct_diagonal_gives_diagonals(self):
        d = as_matrix([[1, 0], [0, 2]])
        c = commutant([d])
        assert c.dim == 2

    def test_swap_matrix(self):
        swap = as_matrix([[0, 1], [1, 0]])
        # commutant of the swap: span{I, swap}
        assert commutant([swap]).dim == 2

    # [DERIVED] the commutant of (A, E_i*) for the rooted 4-cycle is
    # 2-dimensional: one irreducible of dim 3, one of dim 1
    def test_four_cycle(self):
        _, a, e = rooted_generators(C4)
        assert commutant([a] + e).dim == 2

    def test_commutant_elements_commute(self):
        _, a, e = rooted_generators(gen_hamming(2, 2))
        c = commutant([a] + e)
        n = 4
        for row in c.basis:
            x = row.reshape(n, n)
            assert np.all(x.dot(a) == a.dot(x))
            for ei in e:
                assert np.all(x.dot(ei) == ei.dot(x))


class TestDecomposition:
    def test_two_vertex(self):
        _, a, e = rooted_generators(Graph(2, [(0, 1)]))
        comm = commutant([a] + e)
        # T is the full 2x2 matrix algebra, so the standard module is
        # a single thin irreducible of dimension 2
        views = decompose_standard_module([a] + e, comm, seed=1, idempotents=e)
        assert [v.dim for v in views] == [2]
        assert views[0].endpoint == 0 and views[0].diameter == 1
        assert views[0].shell_dims == (1, 1) and views[0].thin

    # [DERIVED] module profile of the rooted 4-cycle
    def test_four_cycle_profile(self):
        _, a, e = rooted_generators(C4)
        comm = commutant([a] + e)
        views = decompose_standard_module([a] + e, comm, seed=1, idempotents=e)
        profiles = sorted(
            (v.endpoint, v.diameter, v.dim, v.shell_dims) for v in views
        )
        assert profiles == [(0, 2, 3, (1, 1, 1)), (1, 0, 1, (1,))]
        assert all(v.thin for v in views)

    def test_bases_orthonormal_and_spanning(self):
        _, a, e = rooted_generators(gen_hamming(2, 3))
        comm = commutant([a] + e)
        views = decompose_standard_module([a] + e, comm, seed=1, idempotents=e)
        stacked = np.hstack([v.basis for v in views])
        assert stacked.shape == (9, 9)
        assert np.max(np.abs(stacked.T @ stacked - np.eye(9))) < 1e-10

    def test_seeds_agree_on_profiles(self):
        _, a, e = rooted_generators(gen_hamming(2, 2))
        comm = commutant([a] + e)
        key = lambda vs: sorted(
            (v.endpoint, v.diameter, v.dim, v.shell_dims) for v in vs
        )
        first = decompose_standard_module(
            [a] + e, comm, seed=1, idempotents=e
        )
        second = decompose_standard_module(
            [a] + e, comm, seed=7, idempotents=e
        )
        assert key(first) == key(second)


class TestThinParameters:
    # [DERIVED] rooted 4-cycle: the big thin module has a = (0,0,0) and
    # x = (2, 2); the small one sits on shell 1 with empty x
    def test_four_cycle(self):
        result = analyze_graph(C4)
        big = next(v for v in result.modules if v.dim == 3)
        small = next(v for v in result.modules if v.dim == 1)
        assert big.a is not None and big.x is not None
        assert np.allclose(big.a, (0.0, 0.0, 0.0), atol=1e-10)
        assert np.allclose(big.x, (2.0, 2.0), atol=1e-10)
        assert small.a is not None and abs(small.a[0]) < 1e-10
        assert small.x == ()

    def test_rejects_nonthin(self):
        # the path 3-0-1-2 rooted at 0 is a single irreducible module
        # with shell dimensions (1, 2, 1), hence not thin
        result = analyze_graph(Graph(4, [(0, 1), (0, 3), (1, 2)]), base=0)
        fat = next(v for v in result.modules if not v.thin)
        qd = result.model.decomposition
        e_float = [to_float(x) for x in qd.E]
        with pytest.raises(ValueError):
            thin_parameters(
                fat, to_float(qd.L), to_float(qd.F), to_float(qd.R), e_float
            )


class TestIntertwiners:
    def _setup(self, graph, base=0, seed=1):
        result = analyze_graph(graph, base=base, seed=seed)
        qd = result.model.decomposition
        return (
            result,
            to_float(qd.L),
            to_float(qd.F),
            to_float(qd.R),
            [to_float(x) for x in qd.E],
        )

    def test_self_isomorphism(self):
        result, L, F, R, e = self._setup(C4)
        for v in result.modules:
            assert intertwiner_exists(v, v, 0, L, F, R, e, mode="iso")

    def test_different_dims_never_isomorphic(self):
        result, L, F, R, e = self._setup(C4)
        big = next(v for v in result.modules if v.dim == 3)
        small = next(v for v in result.modules if v.dim == 1)
        assert not intertwiner_exists(
            small, big, big.endpoint - small.endpoint, L, F, R, e
        )

    # [DERIVED] H(2,3) has two isomorphic copies of the thin module
    # with endpoint 1, and its trivial/endpoint-1 modules are not
    # quasi-isomorphic to each other
    def test_hamming_23_iso_pair(self):
        result, L, F, R, e = self._setup(gen_hamming(2, 3))
        endpoint1 = [v for v in result.modules if v.endpoint == 1 and v.dim == 2]
        assert len(endpoint1) == 2
        assert intertwiner_exists(endpoint1[0], endpoint1[1], 0, L, F, R, e)
        assert intertwiner_exists(
            endpoint1[0], endpoint1[1], 0, L, F, R, e, mode="iso"
        )

    # [DERIVED] D_3(2): endpoint-1 and endpoint-2 thin modules of
    # diameter 1 are quasi- but not properly isomorphic
    def test_dual_polar_quasi_pair(self):
        result, L, F, R, e = self._setup(gen_dual_polar(3, 2))
        w = result.classification.witness
        assert w is not None
        u, v = result.modules[w[0]], result.modules[w[1]]
        assert {u.endpoint, v.endpoint} == {1, 2}
        assert intertwiner_exists(u, v, v.endpoint - u.endpoint, L, F, R, e)

    def test_mode_validation(self):
        result, L, F, R, e = self._setup(C4)
        v = result.modules[0]
        with pytest.raises(ValueError):
            intertwiner_exists(v, v, 1, L, F, R, e, mode="iso")
        with pytest.raises(ValueError):
            intertwiner_exists(v, v, 1, L, F, R, e, mode="quasi")
        with pytest.raises(ValueError):
            intertwiner_exists(v, v, 0, L, F, R, e, mode="nope")


class TestClassification:
    def test_four_cycle_classes(self):
        result = analyze_graph(C4)
        cls = result.classification
        assert len(cls.iso_classes) == 2
        assert len(cls.quasi_classes) == 2
        assert cls.q_equals_t and cls.witness is None
        assert sum(c.dim**2 for c in cls.iso_classes) == 10
        assert all(m == 1 for m in cls.psi_multiplicities.values())

    def test_dual_polar_classes(self):
        result = analyze_graph(gen_dual_polar(3, 2))
        cls = result.classification
        model = result.model
        assert model.T.dim == 24 and model.Q.dim == 20
        assert not cls.q_equals_t
        merged = [q for q in cls.quasi_classes if q.multiplicity > 1]
        assert len(merged) == 1 and merged[0].multiplicity == 2
        assert sum(c.dim**2 for c in cls.iso_classes) == 24
        assert sum(c.dim**2 for c in cls.quasi_classes) == 20
        assert (
            sum(c.multiplicity * c.dim**2 for c in cls.quasi_classes) == 24
        )

    def test_certificates_rejected_when_dims_wrong(self):
        result = analyze_graph(C4)
        qd = result.model.decomposition
        e_float = [to_float(x) for x in qd.E]
        from subconst import ClassificationError

        with pytest.raises(ClassificationError):
            classify_modules(
                result.modules,
                11,  # wrong dim T
                result.model.Q.dim,
                to_float(qd.L),
                to_float(qd.F),
                to_float(qd.R),
                e_float,
            )

    def test_classify_model_reuses_exact_model(self):
        model = build_exact_model(C4)
        r1 = classify_model(model, seed=1)
        r2 = classify_model(model, seed=2)
        assert r1.classification.q_equals_t == r2.classification.q_equals_t
        assert len(r1.classification.iso_classes) == len(
            r2.classification.iso_classes
        )

    def test_custom_tolerances_accepted(self):
        tight = Tolerances(eig_cluster=1e-9, rank=1e-9, residual=1e-9)
        result = analyze_graph(C4, tolerances=tight)
        assert result.tolerances == tight
