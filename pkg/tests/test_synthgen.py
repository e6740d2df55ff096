import json

import numpy as np
import pytest

from bimod import (
    BlockCycleSpec,
    ConfigError,
    ValidationError,
    generate,
    load_spec,
    resolve_structure,
)


class TestSpec:
    def test_probability_bounds(self):
        with pytest.raises(ValidationError):
            BlockCycleSpec(2, 10, p_self=1.2, p_con=0.3)
        with pytest.raises(ValidationError):
            BlockCycleSpec(2, 10, p_self=0.3, p_con=-0.1)

    def test_structure_pair_range(self):
        with pytest.raises(ValidationError):
            BlockCycleSpec(2, 5, 0.5, 0.5, structure=((0, 3),))

    def test_unknown_structure_name(self):
        with pytest.raises(ValidationError):
            BlockCycleSpec(2, 5, 0.5, 0.5, structure="ring")

    def test_cycle_goes_counter_clockwise(self):
        spec = BlockCycleSpec(4, 5, 0.5, 0.5)
        assert resolve_structure(spec) == [(0, 3), (1, 0), (2, 1), (3, 2)]

    def test_two_block_cycle_collapses(self):
        assert resolve_structure(BlockCycleSpec(2, 5, 0.5, 0.5)) == [(0, 1)]

    def test_one_block_is_plain_er(self):
        assert resolve_structure(BlockCycleSpec(1, 5, 0.5, 0.5)) == []

    def test_custom_pairs_dedupe_reverse(self):
        spec = BlockCycleSpec(3, 5, 0.5, 0.5, structure=((0, 1), (1, 0), (1, 2)))
        assert resolve_structure(spec) == [(0, 1), (1, 2)]


class TestGenerate:
    def test_fixed_seed_is_bit_identical(self):
        spec = BlockCycleSpec(4, 20, 0.3, 0.3, seed=17)
        g1, e1, n1 = generate(spec)
        g2, e2, n2 = generate(spec)
        assert g1 == g2
        assert np.array_equal(e1, e2)
        assert np.array_equal(n1, n2)

    def test_seed_changes_the_draw(self):
        a = generate(BlockCycleSpec(3, 20, 0.4, 0.4, seed=0))[0]
        b = generate(BlockCycleSpec(3, 20, 0.4, 0.4, seed=1))[0]
        assert a != b

    def test_no_self_loops_and_no_reciprocals(self):
        g, _, _ = generate(BlockCycleSpec(4, 30, 0.5, 0.5, seed=2))
        assert g.self_loop_count == 0
        assert g.reciprocated_edge_count() == 0

    def test_truth_labels_match_block_membership(self):
        spec = BlockCycleSpec(4, 15, 0.4, 0.4, seed=3)
        g, edge_blocks, node_blocks = generate(spec)
        pairs = resolve_structure(spec)
        for e in range(g.n_edges):
            a, b = node_blocks[g.src[e]], node_blocks[g.dst[e]]
            if edge_blocks[e] < spec.n_blocks:
                assert a == b == edge_blocks[e]
            else:
                assert (a, b) == pairs[edge_blocks[e] - spec.n_blocks]

    def test_cross_edges_follow_structure_direction(self):
        spec = BlockCycleSpec(2, 25, 0.0, 0.6, seed=4)
        g, edge_blocks, node_blocks = generate(spec)
        assert np.all(edge_blocks == 2)
        assert np.all(node_blocks[g.src] == 0)
        assert np.all(node_blocks[g.dst] == 1)

    def test_densities_within_four_sigma(self):
        npb, p = 60, 0.3
        spec = BlockCycleSpec(2, npb, p_self=p, p_con=p, seed=5)
        g, edge_blocks, _ = generate(spec)
        n_pairs_within = npb * (npb - 1) // 2
        sigma_within = np.sqrt(n_pairs_within * p * (1 - p))
        for block in (0, 1):
            count = int(np.sum(edge_blocks == block))
            assert abs(count - n_pairs_within * p) < 4 * sigma_within
        n_pairs_cross = npb * npb
        sigma_cross = np.sqrt(n_pairs_cross * p * (1 - p))
        cross = int(np.sum(edge_blocks == 2))
        assert abs(cross - n_pairs_cross * p) < 4 * sigma_cross

    def test_within_block_direction_is_even(self):
        spec = BlockCycleSpec(1, 80, p_self=0.5, p_con=0.0, seed=6)
        g, _, _ = generate(spec)
        forward = int(np.sum(g.src < g.dst))
        backward = g.n_edges - forward
        assert abs(forward - backward) < 4 * np.sqrt(g.n_edges * 0.25)

    def test_p_dir_extremes(self):
        always_up = generate(BlockCycleSpec(1, 40, 0.5, 0.0, p_dir=1.0, seed=7))[0]
        assert np.all(always_up.src < always_up.dst)
        always_down = generate(BlockCycleSpec(1, 40, 0.5, 0.0, p_dir=0.0, seed=7))[0]
        assert np.all(always_down.src > always_down.dst)

    def test_block_streams_are_independent(self):
        # adding a block must not disturb the draws inside earlier blocks
        small = generate(BlockCycleSpec(2, 20, 0.4, 0.0, seed=8))[0]
        large = generate(BlockCycleSpec(3, 20, 0.4, 0.0, seed=8))[0]
        n_small = small.n_nodes
        inside = large.src < n_small
        assert np.array_equal(large.src[inside & (large.dst < n_small)], small.src)

    def test_p_one_is_complete(self):
        spec = BlockCycleSpec(2, 6, p_self=1.0, p_con=1.0, seed=9)
        g, _, _ = generate(spec)
        # every unordered within pair once, every cross pair once
        assert g.n_edges == 2 * (6 * 5 // 2) + 36


class TestSpecFiles:
    def test_toml_round_trip(self, tmp_path):
        path = tmp_path / "spec.toml"
        path.write_text('n_blocks = 3\nnodes_per_block = 8\np_self = 0.4\n'
                        'p_con = 0.2\nseed = 11\n')
        spec = load_spec(path)
        assert spec == BlockCycleSpec(3, 8, 0.4, 0.2, seed=11)

    def test_json_with_custom_structure(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({
            "n_blocks": 3, "nodes_per_block": 8, "p_self": 0.4,
            "p_con": 0.2, "structure": [[0, 1], [1, 2]],
        }))
        spec = load_spec(path)
        assert spec.structure == ((0, 1), (1, 2))

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "spec.toml"
        path.write_text('n_blocks = 3\nnodes_per_block = 8\np_self = 0.4\n'
                        'p_con = 0.2\nblocks = 4\n')
        with pytest.raises(ConfigError, match="blocks"):
            load_spec(path)

    def test_malformed_toml_rejected(self, tmp_path):
        path = tmp_path / "spec.toml"
        path.write_text("n_blocks = = 3\n")
        with pytest.raises(ConfigError):
            load_spec(path)
