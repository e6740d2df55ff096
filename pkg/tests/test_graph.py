import numpy as np
import pytest
from hypothesis import given, strategies as st

from bimod import (
    DirectedGraph,
    MetadataJoinError,
    ParseError,
    ValidationError,
    degree_sequences,
    load_edge_list,
    load_node_metadata,
    save_edge_list,
)

from conftest import random_graph


class TestConstruction:
    def test_canonical_edge_order(self):
        g = DirectedGraph(4, [3, 0, 1, 0], [0, 2, 3, 1])
        assert list(zip(g.src, g.dst)) == [(0, 1), (0, 2), (1, 3), (3, 0)]

    def test_duplicate_edges_merge_weights(self):
        g = DirectedGraph(3, [0, 0, 0], [1, 1, 2], [1.5, 2.5, 1.0])
        assert g.n_edges == 2
        assert g.weight[0] == 4.0

    def test_degrees_and_total_weight(self):
        g = DirectedGraph(3, [0, 1, 2], [1, 2, 0], [1.0, 2.0, 3.0])
        out_deg, in_deg, m = degree_sequences(g)
        assert m == 6.0
        assert list(out_deg) == [1.0, 2.0, 3.0]
        assert list(in_deg) == [3.0, 1.0, 2.0]

    def test_arrays_are_frozen(self, three_cycle):
        with pytest.raises(ValueError):
            three_cycle.src[0] = 2
        with pytest.raises(ValueError):
            three_cycle.out_degree[0] = 5.0

    def test_rejects_out_of_range_ids(self):
        with pytest.raises(ValidationError):
            DirectedGraph(2, [0, 1], [1, 2])

    def test_rejects_negative_weight(self):
        with pytest.raises(ValidationError):
            DirectedGraph(2, [0], [1], [-1.0])

    def test_rejects_nan_weight(self):
        with pytest.raises(ValidationError):
            DirectedGraph(2, [0], [1], [float("nan")])

    def test_rejects_empty_graph(self):
        with pytest.raises(ValidationError):
            DirectedGraph(0, [], [])

    def test_self_loop_count(self):
        g = DirectedGraph(3, [0, 1, 2], [0, 2, 2])
        assert g.self_loop_count == 2

    def test_reciprocated_edges(self):
        # 0<->1 reciprocated, 1->2 not, 2->2 self loop counts as reciprocated
        g = DirectedGraph(3, [0, 1, 1, 2], [1, 0, 2, 2])
        assert g.reciprocated_edge_count() == 3

    def test_symmetrized_mirrors_one_way_edges(self, three_cycle):
        s = three_cycle.symmetrized()
        assert s.is_symmetric()
        a = s.adjacency(dense=True)
        assert a[0, 1] == 1.0 and a[1, 0] == 1.0

    def test_binarized(self):
        g = DirectedGraph(3, [0, 1], [1, 2], [4.0, 0.25])
        b = g.binarized()
        assert list(b.weight) == [1.0, 1.0]


class TestEdgeListIO:
    def test_round_trip_tsv(self, tmp_path):
        g = random_graph(0, weighted=True)
        path = tmp_path / "g.tsv"
        save_edge_list(g, path)
        assert load_edge_list(path) == g

    def test_round_trip_csv(self, tmp_path):
        g = random_graph(1, weighted=True)
        path = tmp_path / "g.csv"
        save_edge_list(g, path)
        assert load_edge_list(path) == g

    def test_round_trip_matrix_market(self, tmp_path):
        g = random_graph(2, weighted=True)
        path = tmp_path / "g.mtx"
        save_edge_list(g, path)
        assert load_edge_list(path) == g

    @given(st.integers(0, 10_000))
    def test_round_trip_any_seed(self, tmp_path_factory, seed):
        g = random_graph(seed, n_max=12)
        path = tmp_path_factory.mktemp("rt") / "g.tsv"
        save_edge_list(g, path)
        assert load_edge_list(path) == g

    def test_integer_tokens_are_node_ids(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t5\n5\t3\n")
        g = load_edge_list(path)
        assert g.n_nodes == 6
        assert g.n_edges == 2

    def test_nodes_directive_adds_isolated_nodes(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("# nodes: 9\n0\t1\n")
        assert load_edge_list(path).n_nodes == 9

    def test_string_labels_get_dense_ids(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("alpha\tbeta\nbeta\tgamma\n")
        g = load_edge_list(path)
        assert g.n_nodes == 3
        assert g.label_of(0) == "alpha"
        assert g.label_of(2) == "gamma"

    def test_label_table_round_trip(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("# nodes: 3\n# label: 0 AVAL\n# label: 1 AVAR\n"
                        "# label: 2 PVCL\nAVAL\tPVCL\t2.0\nPVCL\tAVAR\t1.0\n")
        g = load_edge_list(path)
        out = tmp_path / "out.tsv"
        save_edge_list(g, out)
        assert load_edge_list(out) == g

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("# a comment\n\n0\t1\t1.0  # trailing note\n\n1\t0\n")
        g = load_edge_list(path)
        assert g.n_edges == 2

    def test_weights_parse(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("0,1,2.5\n1,2,0.5\n")
        g = load_edge_list(path)
        assert list(g.weight) == [2.5, 0.5]

    def test_bad_weight_reports_line(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t1\n1\t2\tfast\n")
        with pytest.raises(ParseError, match=r":2:"):
            load_edge_list(path)

    def test_wrong_field_count_reports_line(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t1\t1.0\t1.0\n")
        with pytest.raises(ParseError, match=r":1:"):
            load_edge_list(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("# nothing here\n")
        with pytest.raises((ParseError, ValidationError)):
            load_edge_list(path)

    def test_symmetrize_on_load(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t1\t1.0\n")
        g = load_edge_list(path, symmetrize=True)
        assert g.is_symmetric()

    def test_drop_self_loops_on_load(self, tmp_path):
        path = tmp_path / "g.tsv"
        path.write_text("0\t0\t1.0\n0\t1\t1.0\n")
        g = load_edge_list(path, drop_self_loops=True)
        assert g.self_loop_count == 0
        assert g.n_edges == 1


class TestMatrixMarket:
    def test_pattern_field(self, tmp_path):
        path = tmp_path / "g.mtx"
        path.write_text("%%MatrixMarket matrix coordinate pattern general\n"
                        "3 3 2\n1 2\n2 3\n")
        g = load_edge_list(path)
        assert g.n_edges == 2
        assert list(g.weight) == [1.0, 1.0]

    def test_symmetric_storage_mirrors(self, tmp_path):
        path = tmp_path / "g.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real symmetric\n"
                        "3 3 2\n2 1 1.0\n3 1 2.0\n")
        g = load_edge_list(path)
        assert g.is_symmetric()
        assert g.n_edges == 4

    def test_rectangular_rejected(self, tmp_path):
        path = tmp_path / "g.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n"
                        "3 4 1\n1 2 1.0\n")
        with pytest.raises(ValidationError):
            load_edge_list(path)

    def test_index_out_of_bounds_reports_line(self, tmp_path):
        path = tmp_path / "g.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n"
                        "3 3 1\n1 4 1.0\n")
        with pytest.raises(ParseError, match=r":3:"):
            load_edge_list(path)

    def test_missing_header_rejected(self, tmp_path):
        path = tmp_path / "g.mtx"
        path.write_text("3 3 1\n1 2 1.0\n")
        with pytest.raises(ParseError):
            load_edge_list(path)


class TestMetadata:
    def test_join_on_labels(self, fixtures_dir):
        g = load_edge_list(fixtures_dir + "/mini_connectome.tsv")
        meta = load_node_metadata(fixtures_dir + "/mini_metadata.csv", g)
        assert len(meta) == g.n_nodes
        assert meta[0].category in ("sensory", "inter", "motor")
        assert meta[0].position is not None

    def test_unknown_category_becomes_other(self, tmp_path, three_cycle):
        path = tmp_path / "meta.csv"
        path.write_text("0,sensory\n1,glia\n2,motor\n")
        meta = load_node_metadata(path, three_cycle)
        assert meta[1].category == "other"

    def test_unmatched_label_raises_join_error(self, tmp_path, three_cycle):
        path = tmp_path / "meta.csv"
        path.write_text("0,sensory\n7,inter\n")
        with pytest.raises(MetadataJoinError, match="7"):
            load_node_metadata(path, three_cycle)

    def test_position_column_optional(self, tmp_path, three_cycle):
        path = tmp_path / "meta.csv"
        path.write_text("node,category\n0,inter\n1,inter\n2,inter\n")
        meta = load_node_metadata(path, three_cycle)
        assert meta[2].position is None
