import numpy as np
import pytest
from hypothesis import given, strategies as st

from bimod import (
    DirectedGraph,
    PartitionPair,
    ValidationError,
    bimodularity_index,
    build_modularity,
    community_bimodularity,
    export_dense_matrix,
    undirected_modularity,
)

from conftest import random_graph

# Hand-worked values for the directed triangle 0 -> 1 -> 2 -> 0:
# all degrees are 1, m = 3, so B = C - J/3 with C the cyclic shift.
THREE_CYCLE_B = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]) - np.ones((3, 3)) / 3


class TestOperator:
    def test_three_cycle_dense_matrix(self, three_cycle):
        op = build_modularity(three_cycle, mode="dense")
        np.testing.assert_allclose(op.dense(), THREE_CYCLE_B, atol=1e-15)

    def test_single_edge_operator_vanishes(self):
        # one edge: the null model reproduces A exactly, B = 0
        g = DirectedGraph(2, [0], [1])
        op = build_modularity(g)
        assert np.max(np.abs(op.dense())) == 0.0

    @given(st.integers(0, 500))
    def test_zero_row_and_column_sums(self, seed):
        g = random_graph(seed)
        for mode in ("dense", "implicit"):
            row, col = build_modularity(g, mode=mode).row_col_sum_residual()
            assert row <= 1e-10
            assert col <= 1e-10

    @given(st.integers(0, 500))
    def test_dense_and_implicit_actions_agree(self, seed):
        g = random_graph(seed)
        dense = build_modularity(g, mode="dense")
        implicit = build_modularity(g, mode="implicit")
        rng = np.random.default_rng(seed)
        x = rng.standard_normal(g.n_nodes)
        block = rng.standard_normal((g.n_nodes, 3))
        scale = np.max(np.abs(dense.matvec(x))) + 1e-30
        assert np.max(np.abs(dense.matvec(x) - implicit.matvec(x))) / scale < 1e-12
        assert np.allclose(dense.rmatvec(x), implicit.rmatvec(x), rtol=1e-12, atol=1e-13)
        assert np.allclose(dense.matvec(block), implicit.matvec(block),
                           rtol=1e-12, atol=1e-13)
        assert np.allclose(dense.rmatvec(block), implicit.rmatvec(block),
                           rtol=1e-12, atol=1e-13)

    def test_adjoint_identity(self):
        g = random_graph(7, weighted=True)
        op = build_modularity(g, mode="implicit")
        rng = np.random.default_rng(7)
        x = rng.standard_normal(g.n_nodes)
        y = rng.standard_normal(g.n_nodes)
        assert np.isclose(y @ op.matvec(x), op.rmatvec(y) @ x, rtol=1e-12)

    def test_auto_mode_respects_cap(self, three_cycle):
        assert build_modularity(three_cycle, dense_cap=2).mode == "implicit"
        assert build_modularity(three_cycle, dense_cap=3).mode == "dense"

    def test_unknown_mode_rejected(self, three_cycle):
        with pytest.raises(ValidationError):
            build_modularity(three_cycle, mode="sparse")

    def test_export_matches_scipy_reader(self, tmp_path):
        import scipy.io

        g = random_graph(3, weighted=True, n_max=12)
        op = build_modularity(g, mode="dense")
        path = tmp_path / "B.mtx"
        export_dense_matrix(op, path)
        np.testing.assert_allclose(scipy.io.mmread(path), op.dense(),
                                   rtol=0, atol=0)


class TestPartitionPair:
    def test_discrete_accepts_plus_minus_one(self):
        p = PartitionPair(np.array([1.0, -1.0]), np.array([-1.0, 1.0]))
        assert p.kind == "discrete"

    def test_discrete_rejects_other_values(self):
        with pytest.raises(ValidationError):
            PartitionPair(np.array([1.0, 0.5]), np.array([1.0, -1.0]))

    def test_relaxed_requires_unit_norm(self):
        v = np.array([0.6, 0.8])
        PartitionPair(v, v, kind="relaxed")
        with pytest.raises(ValidationError):
            PartitionPair(2 * v, v, kind="relaxed")

    def test_frozen(self):
        p = PartitionPair(np.array([1.0, -1.0]), np.array([-1.0, 1.0]))
        with pytest.raises(ValueError):
            p.s_out[0] = -1.0


class TestBimodularityIndex:
    def test_three_cycle_hand_value(self, three_cycle):
        s_out = np.array([1.0, 1.0, -1.0])
        s_in = np.array([1.0, -1.0, 1.0])
        assert np.isclose(bimodularity_index(three_cycle, s_out, s_in), -2 / 9,
                          rtol=0, atol=1e-15)

    def test_accepts_partition_pair(self, three_cycle):
        pair = PartitionPair(np.array([1.0, 1.0, -1.0]), np.array([1.0, -1.0, 1.0]))
        assert bimodularity_index(three_cycle, pair) == \
            bimodularity_index(three_cycle, pair.s_out, pair.s_in)

    @given(st.integers(0, 300))
    def test_matches_quadratic_form(self, seed):
        g = random_graph(seed)
        rng = np.random.default_rng(seed + 1)
        s_out = rng.choice([-1.0, 1.0], g.n_nodes)
        s_in = rng.choice([-1.0, 1.0], g.n_nodes)
        dense_b = build_modularity(g, mode="dense").dense()
        expected = (s_out @ dense_b @ s_in) / (2 * g.total_weight)
        assert np.isclose(bimodularity_index(g, s_out, s_in), expected,
                          rtol=1e-12, atol=1e-14)

    @given(st.integers(0, 300))
    def test_symmetric_input_reduces_to_newman(self, seed):
        # on a symmetric graph with s_out = s_in the index must equal the
        # classic two-community modularity, computed here from scratch
        g = random_graph(seed, weighted=True).symmetrized()
        rng = np.random.default_rng(seed + 2)
        s = rng.choice([-1.0, 1.0], g.n_nodes)
        a = g.adjacency(dense=True)
        w_tot = a.sum()
        q = 0.0
        for side in (-1.0, 1.0):
            mask = s == side
            q += a[np.ix_(mask, mask)].sum() / w_tot \
                - (a[mask, :].sum() / w_tot) ** 2
        assert np.isclose(bimodularity_index(g, s, s), q, rtol=0, atol=1e-12)


class TestCommunityBimodularity:
    def test_all_edges_of_three_cycle(self, three_cycle):
        op = build_modularity(three_cycle)
        assert np.isclose(community_bimodularity(op, range(3)), 2 / 3,
                          rtol=0, atol=1e-15)

    def test_empty_subset_scores_zero(self, three_cycle):
        assert community_bimodularity(build_modularity(three_cycle), []) == 0.0

    def test_out_of_range_edge_id(self, three_cycle):
        with pytest.raises(ValidationError):
            community_bimodularity(build_modularity(three_cycle), [3])

    def test_accepts_graph_directly(self, three_cycle):
        assert community_bimodularity(three_cycle, [0]) == \
            community_bimodularity(build_modularity(three_cycle), [0])

    @given(st.integers(0, 300))
    def test_additive_over_edge_partition(self, seed):
        g = random_graph(seed, weighted=True)
        op = build_modularity(g)
        rng = np.random.default_rng(seed + 3)
        groups = rng.integers(0, 4, g.n_edges)
        total = sum(community_bimodularity(op, np.flatnonzero(groups == k))
                    for k in range(4))
        assert np.isclose(total, community_bimodularity(op, range(g.n_edges)),
                          rtol=1e-12, atol=1e-14)


class TestUndirectedModularity:
    def test_two_disjoint_triangles(self, two_triangles):
        labels = [0, 0, 0, 1, 1, 1]
        assert np.isclose(undirected_modularity(two_triangles, labels), 0.5,
                          rtol=0, atol=1e-15)

    def test_single_community_is_zero(self, two_triangles):
        assert np.isclose(undirected_modularity(two_triangles, np.zeros(6)),
                          0.0, atol=1e-15)

    def test_rejects_directed_graph(self, three_cycle):
        with pytest.raises(ValidationError):
            undirected_modularity(three_cycle, [0, 0, 1])

    def test_rejects_wrong_label_length(self, two_triangles):
        with pytest.raises(ValidationError):
            undirected_modularity(two_triangles, [0, 1])
