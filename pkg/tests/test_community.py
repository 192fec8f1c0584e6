from __future__ import annotations

import random

import pytest

from equinet.community import (
    CommunityPartition,
    class_census,
    dummy_encode,
    louvain,
    modularity,
    significant_classes,
)
from equinet.errors import EmptyGraph, InvalidAssignment, SingleClass
from equinet.graph import EquityGraph

from . import oracles
from .graphgen import clique_pairs, random_graph

TWO_TRIANGLES = EquityGraph.from_directed_pairs(
    "w",
    list("ABCDEF"),
    [("A", "B"), ("B", "C"), ("C", "A"), ("D", "E"), ("E", "F"), ("F", "D")],
)


def make_partition(graph, assignment, seed=0, resolution=1.0):
    sizes = {}
    for c in assignment.values():
        sizes[c] = sizes.get(c, 0) + 1
    return CommunityPartition(
        assignment=assignment,
        modularity=modularity(graph, assignment, resolution),
        class_sizes=dict(sorted(sizes.items())),
        seed=seed,
        resolution=resolution,
    )


class TestModularity:
    def test_single_class_is_zero(self):
        triangle = EquityGraph.from_directed_pairs(
            "w", ["A", "B", "C"], [("A", "B"), ("B", "C"), ("C", "A")]
        )
        assert modularity(triangle, {"A": 0, "B": 0, "C": 0}) == pytest.approx(0.0)

    def test_two_disjoint_triangles_give_half(self):
        assignment = {"A": 0, "B": 0, "C": 0, "D": 1, "E": 1, "F": 1}
        assert modularity(TWO_TRIANGLES, assignment) == pytest.approx(0.5)

    def test_random_partitions_match_pairwise_oracle(self):
        rng = random.Random(99)
        for seed in range(8):
            graph = random_graph(12, 0.25, seed=seed)
            assignment = {n: rng.randrange(3) for n in graph.nodes}
            expected = oracles.modularity_pairwise(graph, assignment)
            assert modularity(graph, assignment) == pytest.approx(expected, abs=1e-12)

    def test_resolution_multiplies_null_term(self):
        assignment = {"A": 0, "B": 0, "C": 0, "D": 1, "E": 1, "F": 1}
        q1 = modularity(TWO_TRIANGLES, assignment, resolution=1.0)
        q2 = modularity(TWO_TRIANGLES, assignment, resolution=2.0)
        expected = oracles.modularity_pairwise(TWO_TRIANGLES, assignment, resolution=2.0)
        assert q2 == pytest.approx(expected, abs=1e-12)
        assert q2 < q1

    def test_relabeling_invariance(self):
        assignment = {"A": 0, "B": 0, "C": 0, "D": 1, "E": 1, "F": 1}
        relabeled = {n: 7 - c for n, c in assignment.items()}
        assert modularity(TWO_TRIANGLES, assignment) == pytest.approx(
            modularity(TWO_TRIANGLES, relabeled)
        )

    def test_missing_node_raises(self):
        with pytest.raises(InvalidAssignment):
            modularity(TWO_TRIANGLES, {"A": 0})

    def test_empty_graph_raises(self):
        with pytest.raises(EmptyGraph):
            modularity(EquityGraph.from_directed_pairs("w", [], []), {})

    def test_edgeless_graph_is_zero(self):
        graph = EquityGraph.from_directed_pairs("w", ["A", "B"], [])
        assert modularity(graph, {"A": 0, "B": 1}) == 0.0


class TestLouvain:
    def test_two_triangles_recovered_exactly(self):
        partition = louvain(TWO_TRIANGLES, seed=0)
        assert partition.class_count == 2
        assert partition.modularity == pytest.approx(0.5)
        assert len({partition.assignment[n] for n in "ABC"}) == 1
        assert len({partition.assignment[n] for n in "DEF"}) == 1

    def test_complete_graph_single_class(self):
        k6 = EquityGraph.from_directed_pairs("w", list("ABCDEF"), clique_pairs(list("ABCDEF")))
        partition = louvain(k6, seed=1)
        assert partition.class_count == 1

    @pytest.mark.parametrize("seed", range(10))
    def test_planted_two_cliques_recovered_for_all_seeds(self, seed):
        left = [f"L{i:02d}" for i in range(20)]
        right = [f"R{i:02d}" for i in range(20)]
        pairs = clique_pairs(left) + clique_pairs(right) + [(left[0], right[0])]
        graph = EquityGraph.from_directed_pairs("w", left + right, pairs)
        partition = louvain(graph, seed=seed)
        assert partition.class_count == 2
        assert len({partition.assignment[n] for n in left}) == 1
        assert len({partition.assignment[n] for n in right}) == 1

    def test_never_below_singletons_partition(self):
        for seed in range(6):
            graph = random_graph(14, 0.2, seed=seed)
            singletons = {n: i for i, n in enumerate(graph.sorted_nodes())}
            q_singletons = modularity(graph, singletons)
            partition = louvain(graph, seed=seed)
            assert partition.modularity >= q_singletons - 1e-12

    def test_within_002_of_exhaustive_optimum_on_small_graphs(self):
        for seed in range(25):
            graph = random_graph(7, 0.35, seed=100 + seed)
            best_q, _ = oracles.best_partition_bruteforce(graph)
            partition = louvain(graph, seed=seed)
            assert partition.modularity >= best_q - 0.02

    def test_deterministic_given_seed(self):
        graph = random_graph(30, 0.1, seed=5)
        p1 = louvain(graph, seed=42)
        p2 = louvain(graph, seed=42)
        assert p1.assignment == p2.assignment
        assert p1.modularity == p2.modularity

    def test_class_indices_dense_and_sizes_sum(self):
        graph = random_graph(25, 0.12, seed=8)
        partition = louvain(graph, seed=3)
        classes = set(partition.assignment.values())
        assert classes == set(range(len(classes)))
        assert sum(partition.class_sizes.values()) == graph.node_count
        assert -0.5 <= partition.modularity <= 1.0

    def test_empty_graph_raises(self):
        with pytest.raises(EmptyGraph):
            louvain(EquityGraph.from_directed_pairs("w", [], []))


class TestSignificantClasses:
    def test_single_class_holding_everything(self):
        partition = make_partition(TWO_TRIANGLES, {n: 0 for n in "ABCDEF"})
        assert significant_classes(partition) == {0}

    def test_inclusive_boundary(self):
        nodes = [f"N{i:03d}" for i in range(100)]
        graph = EquityGraph.from_directed_pairs("w", nodes, [])
        assignment = {}
        for i, n in enumerate(nodes):
            assignment[n] = 0 if i < 60 else 1 if i < 90 else 2 if i < 95 else 3
        partition = make_partition(graph, assignment)
        assert partition.class_sizes == {0: 60, 1: 30, 2: 5, 3: 5}
        assert significant_classes(partition, 0.05) == {0, 1, 2, 3}
        assert significant_classes(partition, 0.051) == {0, 1}


class TestCensus:
    def test_four_equal_classes(self):
        nodes = [f"N{i:03d}" for i in range(100)]
        graph = EquityGraph.from_directed_pairs("w", nodes, [])
        partition = make_partition(graph, {n: i % 4 for i, n in enumerate(nodes)})
        census = class_census(partition)
        assert [row.percent for row in census] == [25.0, 25.0, 25.0, 25.0]

    def test_percentages_match_counting_oracle(self):
        graph = random_graph(40, 0.1, seed=4)
        partition = louvain(graph, seed=4)
        census = class_census(partition)
        total = graph.node_count
        for row in census:
            manual = sum(1 for c in partition.assignment.values() if c == row.class_index)
            assert row.count == manual
            assert row.percent == round(100 * manual / total, 2)
        assert sum(r.percent for r in census) == pytest.approx(100.0, abs=0.05)


class TestDummies:
    def partition(self):
        nodes = [f"N{i}" for i in range(9)]
        graph = EquityGraph.from_directed_pairs("w", nodes, [])
        return make_partition(graph, {n: i % 3 for i, n in enumerate(nodes)})

    def test_baseline_encodes_to_zeros(self):
        partition = self.partition()
        _, vectors = dummy_encode(partition, baseline=0)
        assert vectors["N0"] == (0, 0)

    def test_non_baseline_single_one(self):
        partition = self.partition()
        dummy_classes, vectors = dummy_encode(partition, baseline=0)
        assert dummy_classes == [1, 2]
        assert vectors["N2"] == (0, 1)
        assert all(sum(v) <= 1 for v in vectors.values())

    def test_column_sums_equal_class_sizes(self):
        graph = random_graph(30, 0.15, seed=21)
        partition = louvain(graph, seed=2)
        if partition.class_count < 2:
            pytest.skip("degenerate partition")
        baseline = max(partition.class_sizes, key=lambda c: partition.class_sizes[c])
        dummy_classes, vectors = dummy_encode(partition, baseline)
        for slot, cls in enumerate(dummy_classes):
            column_sum = sum(vectors[n][slot] for n in vectors)
            assert column_sum == partition.class_sizes[cls]

    def test_single_class_raises(self):
        nodes = ["A", "B"]
        graph = EquityGraph.from_directed_pairs("w", nodes, [])
        partition = make_partition(graph, {"A": 0, "B": 0})
        with pytest.raises(SingleClass):
            dummy_encode(partition, baseline=0)
