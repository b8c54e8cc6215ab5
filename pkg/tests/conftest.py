"""Shared fixtures: the small-graph corpus and a session-wide cache of
exact models and classifications, so the property-based acceptance
criteria reuse one expensive sweep instead of re-analyzing per test."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import networkx as nx
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from subconst import Graph, build_exact_model, classify_model, gen_dual_polar, gen_hamming

HAMMING_PARAMS = [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)]


@dataclass
class CorpusInstance:
    """One rooted graph together with its cached analyses."""

    name: str
    graph: Graph
    base: int
    hamming: tuple[int, int] | None  # (D, N) when generated as Hamming
    model: object
    results: dict[int, object]  # seed -> AnalysisResult


def _atlas_graphs() -> list[tuple[str, Graph]]:
    """All connected graphs on 1..6 vertices, one per isomorphism class."""
    out = []
    for idx, g in enumerate(nx.graph_atlas_g()):
        n = g.number_of_nodes()
        if 1 <= n <= 6 and nx.is_connected(g):
            out.append(
                (f"atlas{idx}", Graph(n, [tuple(e) for e in g.edges()]))
            )
    return out


@pytest.fixture(scope="session")
def atlas_graphs():
    return _atlas_graphs()


def _analyze(name, graph, base, hamming, seeds=(1, 2)) -> CorpusInstance:
    model = build_exact_model(graph, base)
    results = {s: classify_model(model, seed=s) for s in seeds}
    return CorpusInstance(
        name=name,
        graph=graph,
        base=base,
        hamming=hamming,
        model=model,
        results=results,
    )


@pytest.fixture(scope="session")
def named_corpus(atlas_graphs):
    """The full acceptance corpus, analyzed at two RNG seeds: the five
    Hamming graphs and the bipartite dual polar graph at base 0, plus
    every connected graph on at most six vertices at every base."""
    instances = []
    for D, N in HAMMING_PARAMS:
        instances.append(
            _analyze(f"H({D},{N})", gen_hamming(D, N), 0, (D, N))
        )
    instances.append(_analyze("D_3(2)", gen_dual_polar(3, 2), 0, None))
    for name, graph in atlas_graphs:
        for base in range(graph.n):
            instances.append(_analyze(name, graph, base, None))
    return instances
