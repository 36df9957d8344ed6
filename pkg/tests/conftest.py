"""Shared fixtures and random-instance builders for the test suite."""

import os
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from tropkit import Divisor, GraphPoint, MetricGraph, load_workspace

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile(
    "ci",
    max_examples=50,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(scope="session")
def c6():
    """Unit six-cycle workspace with its divisors and systems."""
    return load_workspace(str(FIXTURES / "c6.json"))


@pytest.fixture(scope="session")
def banana():
    """Three-banana chain workspace for the gonality fixtures."""
    return load_workspace(str(FIXTURES / "banana.json"))


@pytest.fixture(scope="session")
def tp3():
    """Three-element ground set with the rectangle point set."""
    return load_workspace(str(FIXTURES / "tp3.json"))


# ---------------------------------------------------------------------------
# deterministic random builders (shared by module and acceptance tests)
# ---------------------------------------------------------------------------

def random_length(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 4), rng.choice([1, 1, 2, 3]))


def random_graph(rng: random.Random, max_vertices: int = 8,
                 max_edges: int = 12) -> MetricGraph:
    """Random connected multigraph with rational edge lengths.

    Spanning tree first, then extra edges (parallels and loops allowed,
    loops are normalized away by the constructor).
    """
    n = rng.randint(2, max_vertices)
    names = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        edges.append((f"e{len(edges)}", names[j], names[i], random_length(rng)))
    for _ in range(rng.randint(0, max_edges - (n - 1))):
        a = rng.randrange(n)
        b = rng.randrange(n)
        edges.append((f"e{len(edges)}", names[a], names[b], random_length(rng)))
    return MetricGraph.of(names, edges)


def random_point(rng: random.Random, graph: MetricGraph) -> GraphPoint:
    if rng.random() < 0.5:
        return graph.vertex_point(rng.choice(graph.vertices))
    e = rng.choice(graph.edges)
    offset = e.length * Fraction(rng.randint(1, 3), 4)
    return graph.point(edge=e.id, offset=offset)


def random_divisor(rng: random.Random, graph: MetricGraph,
                   points: int = 3) -> Divisor:
    pairs = [(random_point(rng, graph), Fraction(rng.randint(-3, 3)))
             for _ in range(points)]
    return Divisor.of(graph, pairs)


def equal_degree_pair(rng: random.Random,
                      graph: MetricGraph) -> tuple[Divisor, Divisor]:
    """Two random divisors of the same degree (coefficients may be negative)."""
    d1 = random_divisor(rng, graph)
    d2 = random_divisor(rng, graph)
    gap = d1.degree() - d2.degree()
    if gap:
        patch = Divisor.of(graph, [(random_point(rng, graph), gap)])
        d2 = d2.add(patch)
    return d1, d2
