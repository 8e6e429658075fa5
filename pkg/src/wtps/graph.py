"""Bipartite repository-follower graph, clustering coefficients, and the
popularity-ordered node-deletion experiment.

The graph links each repository to its owner's followers and nothing else,
so it is strictly bipartite: triangle-based clustering coefficients are
identically zero on it. They are still computed honestly (and asserted zero
by the test suite); the pairwise neighbor-overlap coefficient is the nonzero
notion of clustering for two-mode graphs and is the default for deletion
experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import EmptyGraph, StepsExceedRepoCount
from .model import Corpus
from .scoring import Indicator, WeightTable, rank


class CoefficientKind(Enum):
    """Clustering-coefficient definitions supported on the follower graph."""

    GLOBAL_TRANSITIVITY = "global_transitivity"
    AVERAGE_LOCAL = "average_local"
    BIPARTITE_LATAPY = "bipartite_latapy"


@dataclass(frozen=True)
class FollowerGraph:
    """Strictly bipartite graph between repositories and owner-followers.

    Edges always pair a repo node with a follower node, so duplicate edges
    and odd cycles cannot exist. The two node namespaces are independent: a
    repo id and a follower id with the same text are distinct nodes.
    """

    repo_nodes: frozenset[str]
    follower_nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "repo_nodes", frozenset(self.repo_nodes))
        object.__setattr__(self, "follower_nodes", frozenset(self.follower_nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for repo, follower in self.edges:
            if repo not in self.repo_nodes:
                raise ValueError(f"edge references unknown repo node {repo!r}")
            if follower not in self.follower_nodes:
                raise ValueError(
                    f"edge references unknown follower node {follower!r}"
                )

    @property
    def node_count(self) -> int:
        return len(self.repo_nodes) + len(self.follower_nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def repo_adjacency(self) -> dict[str, set[str]]:
        """Follower neighborhoods per repo node (isolated repos included)."""
        adjacency: dict[str, set[str]] = {r: set() for r in self.repo_nodes}
        for repo, follower in self.edges:
            adjacency[repo].add(follower)
        return adjacency

    def follower_adjacency(self) -> dict[str, set[str]]:
        """Repo neighborhoods per follower node (isolated followers included)."""
        adjacency: dict[str, set[str]] = {f: set() for f in self.follower_nodes}
        for repo, follower in self.edges:
            adjacency[follower].add(repo)
        return adjacency

    def remove_repo(self, repo_id: str) -> "FollowerGraph":
        """Drop one repo node and its incident edges.

        Followers left without neighbors stay in the graph; keeping the node
        population stable is a documented choice that affects node-averaged
        coefficients.
        """
        if repo_id not in self.repo_nodes:
            raise ValueError(f"{repo_id!r} is not a repo node")
        return FollowerGraph(
            repo_nodes=self.repo_nodes - {repo_id},
            follower_nodes=self.follower_nodes,
            edges=frozenset(e for e in self.edges if e[0] != repo_id),
        )


def build_graph(corpus: Corpus) -> FollowerGraph:
    """Link every repository to each of its owner's followers."""
    edges = set()
    followers = set()
    for record in corpus.repos:
        for follower in record.follower_ids:
            followers.add(follower)
            edges.add((record.repo_id, follower))
    return FollowerGraph(
        repo_nodes=frozenset(corpus.repo_ids),
        follower_nodes=frozenset(followers),
        edges=frozenset(edges),
    )


def clustering_coefficient(g: FollowerGraph, kind: CoefficientKind) -> float:
    """Compute the requested clustering coefficient of the whole graph.

    Raises:
        EmptyGraph: the graph has no nodes at all.
    """
    if g.node_count == 0:
        raise EmptyGraph("coefficient undefined on a graph with no nodes")
    if kind is CoefficientKind.GLOBAL_TRANSITIVITY:
        return _global_transitivity(g)
    if kind is CoefficientKind.AVERAGE_LOCAL:
        return _average_local(g)
    return _bipartite_overlap(g)


def _combined_adjacency(g: FollowerGraph) -> dict[tuple[str, str], set]:
    # Namespace node keys by side so a repo id never collides with a follower id.
    adjacency: dict[tuple[str, str], set] = {("r", r): set() for r in g.repo_nodes}
    adjacency.update({("f", f): set() for f in g.follower_nodes})
    for repo, follower in g.edges:
        adjacency[("r", repo)].add(("f", follower))
        adjacency[("f", follower)].add(("r", repo))
    return adjacency


def _closed_pair_count(adjacency: Mapping, node) -> int:
    """Number of adjacent pairs among a node's neighbors."""
    neighbors = sorted(adjacency[node])
    closed = 0
    for i, a in enumerate(neighbors):
        for b in neighbors[i + 1:]:
            if b in adjacency[a]:
                closed += 1
    return closed


def _global_transitivity(g: FollowerGraph) -> float:
    """Closed triples over connected triples; 0 when no triples exist."""
    adjacency = _combined_adjacency(g)
    closed = 0
    triples = 0
    for node, neighbors in adjacency.items():
        degree = len(neighbors)
        triples += degree * (degree - 1) // 2
        closed += _closed_pair_count(adjacency, node)
    if triples == 0:
        return 0.0
    return closed / triples


def _average_local(g: FollowerGraph) -> float:
    """Mean local coefficient over all nodes; degree < 2 contributes 0."""
    adjacency = _combined_adjacency(g)
    values = []
    for node, neighbors in adjacency.items():
        degree = len(neighbors)
        if degree < 2:
            values.append(0.0)
            continue
        possible = degree * (degree - 1) // 2
        values.append(_closed_pair_count(adjacency, node) / possible)
    return math.fsum(values) / len(values)


def _bipartite_overlap(g: FollowerGraph) -> float:
    """Mean over all nodes of the pairwise neighbor-overlap coefficient.

    Per node u, cc(u) averages |N(u) & N(v)| / |N(u) | N(v)| over the
    same-side nodes v at distance 2 from u; nodes with no such neighbors
    (including isolated ones) contribute 0. fsum keeps the result identical
    regardless of set iteration order.
    """
    repo_adj = g.repo_adjacency()
    follower_adj = g.follower_adjacency()
    values = []
    for side, other in ((repo_adj, follower_adj), (follower_adj, repo_adj)):
        for node, neighborhood in side.items():
            peers: set[str] = set()
            for shared in neighborhood:
                peers |= other[shared]
            peers.discard(node)
            if not peers:
                values.append(0.0)
                continue
            overlaps = math.fsum(
                len(neighborhood & side[peer]) / len(neighborhood | side[peer])
                for peer in peers
            )
            values.append(overlaps / len(peers))
    return math.fsum(values) / len(values)


@dataclass(frozen=True)
class DeletionSeries:
    """Coefficient trajectory of a stepwise highest-popularity deletion run.

    ``values[0]`` is the coefficient of the intact graph; one value follows
    per removed repository, so the series is always ``steps + 1`` long.
    """

    measure: Indicator
    coefficient_kind: CoefficientKind
    values: tuple[float, ...]
    removed: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "coefficient_kind": self.coefficient_kind.value,
            "values": list(self.values),
            "removed": list(self.removed),
        }


def deletion_experiment(
    g: FollowerGraph,
    scores: Mapping[str, float],
    steps: int,
    kind: CoefficientKind = CoefficientKind.BIPARTITE_LATAPY,
    measure: Indicator = Indicator.WTPS,
) -> DeletionSeries:
    """Repeatedly delete the top-scoring remaining repo node and re-measure.

    Ties on score break by ascending repo_id. Follower nodes never leave the
    graph, so the node population for averaged coefficients shrinks only on
    the repo side. The coefficient trend across deletions is reported, never
    asserted: a decrease is an empirical observation, not an invariant.

    Raises:
        StepsExceedRepoCount: ``steps`` exceeds the number of repo nodes.
        ValueError: a repo node is missing from ``scores``.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if steps > len(g.repo_nodes):
        raise StepsExceedRepoCount(
            f"{steps} deletions requested but only {len(g.repo_nodes)} repo nodes"
        )
    missing = sorted(g.repo_nodes - set(scores))
    if missing:
        raise ValueError(f"missing scores for repo nodes: {missing[:5]}")

    current = g
    values = [clustering_coefficient(current, kind)]
    removed: list[str] = []
    remaining = sorted(g.repo_nodes, key=lambda rid: (-scores[rid], rid))
    for target in remaining[:steps]:
        current = current.remove_repo(target)
        removed.append(target)
        values.append(
            clustering_coefficient(current, kind) if current.node_count else 0.0
        )
    return DeletionSeries(
        measure=measure,
        coefficient_kind=kind,
        values=tuple(values),
        removed=tuple(removed),
    )


def format_edge_list(g: FollowerGraph) -> str:
    """Plain-text export: one sorted "repo_id follower_id" pair per line."""
    lines = [f"{repo} {follower}" for repo, follower in sorted(g.edges)]
    return "\n".join(lines) + ("\n" if lines else "")


def scores_for_measure(
    corpus: Corpus, measure: Indicator, *, weights: WeightTable | None = None
) -> dict[str, float]:
    """Per-repo score mapping used to drive a deletion experiment."""
    return {
        entry.repo_id: float(entry.value)
        for entry in rank(corpus, measure, weights=weights)
    }
