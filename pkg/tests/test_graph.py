import random
from fractions import Fraction

import pytest

from wtps import (
    CoefficientKind,
    EmptyGraph,
    FollowerGraph,
    Indicator,
    StepsExceedRepoCount,
    build_graph,
    clustering_coefficient,
    deletion_experiment,
    format_edge_list,
    scores_for_measure,
)
from synth import make_bipartite_graph

# Exhaustively precomputed overlap coefficient for the shipped 3-repo sample
# (see overlap_oracle below): mean of per-node overlap means = 61/126.
FOLLOWER_SAMPLE_OVERLAP = Fraction(61, 126)


def overlap_oracle(g: FollowerGraph) -> float:
    """Exhaustive pairwise-overlap enumeration, independent of the library.

    Walks every node, finds its same-side distance-2 peers by brute force,
    and averages |N(u) & N(v)| / |N(u) | N(v)| with exact fractions.
    """
    repo_adj = {r: set() for r in g.repo_nodes}
    follower_adj = {f: set() for f in g.follower_nodes}
    for repo, follower in g.edges:
        repo_adj[repo].add(follower)
        follower_adj[follower].add(repo)

    per_node = []
    for side in (repo_adj, follower_adj):
        for u in sorted(side):
            # distance-2 peers: same-side nodes sharing at least one neighbor
            peers = sorted(
                v for v in side if v != u and side[u] & side[v]
            )
            if not peers:
                per_node.append(Fraction(0))
                continue
            total = sum(
                Fraction(len(side[u] & side[v]), len(side[u] | side[v]))
                for v in peers
            )
            per_node.append(total / len(peers))
    return float(sum(per_node) / len(per_node))


@pytest.fixture()
def sample_graph(follower_corpus):
    return build_graph(follower_corpus)


class TestBuildGraph:
    def test_sample_topology(self, sample_graph):
        assert sample_graph.node_count == 7
        assert sample_graph.edge_count == 8
        follower_adj = sample_graph.follower_adjacency()
        assert follower_adj["f2"] == {"R1", "R2", "R3"}
        assert sample_graph.repo_adjacency()["R1"] == {"f1", "f2", "f4"}

    def test_no_follower_data_gives_edgeless_graph(self, community_corpus):
        graph = build_graph(community_corpus)
        assert graph.repo_nodes == {"R1", "R2", "R3", "R4"}
        assert graph.follower_nodes == frozenset()
        assert graph.edge_count == 0

    def test_shared_owner_means_identical_neighborhoods(self, follower_corpus):
        from dataclasses import replace

        twin_source = follower_corpus.repos[0]
        twin = replace(twin_source, repo_id="R9", full_name="orchard/alpha-mirror")
        corpus = type(follower_corpus)(
            repos=follower_corpus.repos + (twin,),
            events=follower_corpus.events,
            grid=follower_corpus.grid,
            captured_at=follower_corpus.captured_at,
        )
        graph = build_graph(corpus)
        adjacency = graph.repo_adjacency()
        assert adjacency["R9"] == adjacency["R1"]

    def test_edges_must_reference_known_nodes(self):
        with pytest.raises(ValueError):
            FollowerGraph(
                repo_nodes=frozenset({"r1"}),
                follower_nodes=frozenset(),
                edges=frozenset({("r1", "f1")}),
            )


class TestClusteringCoefficients:
    def test_transitivity_zero_on_sample(self, sample_graph):
        value = clustering_coefficient(sample_graph, CoefficientKind.GLOBAL_TRANSITIVITY)
        assert value == 0.0

    @pytest.mark.parametrize("seed", range(10))
    def test_triangle_based_kinds_zero_on_random_bipartite(self, seed):
        rng = random.Random(seed)
        graph = make_bipartite_graph(
            rng,
            n_repos=rng.randint(1, 8),
            n_followers=rng.randint(1, 10),
            edge_prob=rng.uniform(0.1, 0.9),
        )
        assert clustering_coefficient(graph, CoefficientKind.GLOBAL_TRANSITIVITY) == 0.0
        assert clustering_coefficient(graph, CoefficientKind.AVERAGE_LOCAL) == 0.0

    def test_average_local_zero_on_single_edge(self):
        graph = FollowerGraph(
            repo_nodes=frozenset({"r"}),
            follower_nodes=frozenset({"f"}),
            edges=frozenset({("r", "f")}),
        )
        assert clustering_coefficient(graph, CoefficientKind.AVERAGE_LOCAL) == 0.0

    def test_overlap_matches_exhaustive_oracle_on_sample(self, sample_graph):
        got = clustering_coefficient(sample_graph, CoefficientKind.BIPARTITE_LATAPY)
        assert got == pytest.approx(overlap_oracle(sample_graph), abs=1e-12)
        assert got == pytest.approx(float(FOLLOWER_SAMPLE_OVERLAP), abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_overlap_matches_oracle_on_random_graphs(self, seed):
        rng = random.Random(100 + seed)
        graph = make_bipartite_graph(
            rng,
            n_repos=rng.randint(1, 7),
            n_followers=rng.randint(1, 9),
            edge_prob=rng.uniform(0.1, 0.8),
        )
        got = clustering_coefficient(graph, CoefficientKind.BIPARTITE_LATAPY)
        assert got == pytest.approx(overlap_oracle(graph), abs=1e-12)
        assert 0.0 <= got <= 1.0

    def test_empty_graph_rejected(self):
        empty = FollowerGraph(frozenset(), frozenset(), frozenset())
        with pytest.raises(EmptyGraph):
            clustering_coefficient(empty, CoefficientKind.BIPARTITE_LATAPY)


class TestDeletionExperiment:
    def _star_scores(self, follower_corpus):
        return scores_for_measure(follower_corpus, Indicator.STARS)

    def test_highest_stars_removed_first(self, sample_graph, follower_corpus):
        scores = self._star_scores(follower_corpus)
        assert scores == {"R1": 45.0, "R2": 30.0, "R3": 50.0}
        series = deletion_experiment(
            sample_graph, scores, steps=1, measure=Indicator.STARS
        )
        assert series.removed == ("R3",)
        assert len(series.values) == 2
        assert series.values[0] == pytest.approx(float(FOLLOWER_SAMPLE_OVERLAP), abs=1e-12)

    def test_removed_order_equals_sorted_star_order(self, sample_graph, follower_corpus):
        scores = self._star_scores(follower_corpus)
        series = deletion_experiment(
            sample_graph, scores, steps=3, measure=Indicator.STARS
        )
        expected = sorted(scores, key=lambda rid: (-scores[rid], rid))
        assert list(series.removed) == expected == ["R3", "R1", "R2"]

    def test_full_deletion_reaches_zero_coefficient(self, sample_graph, follower_corpus):
        scores = self._star_scores(follower_corpus)
        series = deletion_experiment(sample_graph, scores, steps=3)
        assert len(series.values) == 4
        assert series.values[-1] == 0.0

    def test_deterministic_series(self, sample_graph, follower_corpus):
        scores = self._star_scores(follower_corpus)
        first = deletion_experiment(sample_graph, scores, steps=3)
        second = deletion_experiment(sample_graph, scores, steps=3)
        assert first == second

    def test_ties_break_by_repo_id(self, sample_graph):
        series = deletion_experiment(
            sample_graph, {"R1": 1.0, "R2": 1.0, "R3": 1.0}, steps=3
        )
        assert list(series.removed) == ["R1", "R2", "R3"]

    def test_followers_retained_and_bipartite_preserved(self, sample_graph, follower_corpus):
        scores = self._star_scores(follower_corpus)
        current = sample_graph
        for rid in sorted(scores, key=lambda r: (-scores[r], r)):
            current = current.remove_repo(rid)
            assert current.follower_nodes == sample_graph.follower_nodes
            for repo, follower in current.edges:
                assert repo in current.repo_nodes
                assert follower in current.follower_nodes
        assert current.repo_nodes == frozenset()
        assert current.edge_count == 0

    def test_steps_beyond_repo_count_rejected(self, sample_graph, follower_corpus):
        with pytest.raises(StepsExceedRepoCount):
            deletion_experiment(sample_graph, self._star_scores(follower_corpus), steps=4)

    def test_missing_scores_rejected(self, sample_graph):
        with pytest.raises(ValueError):
            deletion_experiment(sample_graph, {"R1": 1.0}, steps=1)

    def test_series_json_round_trip(self, sample_graph, follower_corpus):
        series = deletion_experiment(
            sample_graph,
            self._star_scores(follower_corpus),
            steps=2,
            kind=CoefficientKind.BIPARTITE_LATAPY,
            measure=Indicator.STARS,
        )
        payload = series.to_json_dict()
        assert payload["measure"] == "stars"
        assert payload["coefficient_kind"] == "bipartite_latapy"
        assert len(payload["values"]) == 3
        assert payload["removed"] == ["R3", "R1"]


class TestEdgeListExport:
    def test_sorted_pairs_one_per_line(self, sample_graph):
        text = format_edge_list(sample_graph)
        lines = text.strip().splitlines()
        assert len(lines) == 8
        assert lines == sorted(lines)
        assert lines[0] == "R1 f1"

    def test_empty_graph_exports_empty_text(self):
        graph = FollowerGraph(frozenset({"r"}), frozenset(), frozenset())
        assert format_edge_list(graph) == ""
