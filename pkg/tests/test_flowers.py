from __future__ import annotations

import itertools

import pytest
from hypothesis import assume, given
from strategies import PROPERTY_SETTINGS, multigraphs

from bkernel.flowers import flower_order, max_flower
from bkernel.graph import Graph, PreconditionError


def bouquet(petals: int) -> Graph:
    edges = []
    for k in range(petals):
        a, b = 2 * k + 1, 2 * k + 2
        edges += [(0, a), (a, b), (b, 0)]
    return Graph.build(range(2 * petals + 1), edges)


@pytest.mark.parametrize(
    ("graph", "order"),
    [
        (bouquet(3), 3),
        (Graph.build(range(4), [(0, 1, 2), (0, 2, 2), (0, 3, 2)]), 3),
        (Graph.build(range(4), itertools.combinations(range(4), 2)), 1),
        (Graph.build(range(4), [(0, 1), (1, 2), (2, 3)]), 0),
        (Graph.build([0]), 0),
    ],
)
def test_flower_order(graph: Graph, order: int) -> None:
    assert flower_order(graph, 0) == order
    cert = max_flower(graph, 0)
    assert cert.order == order
    assert cert.center == 0
    assert len(cert.deletion) <= order


def test_hub_blocks_all_petals() -> None:
    # every cycle through 0 also runs through 1
    g = Graph.build(range(5), [(0, 1), (1, 2), (1, 3), (1, 4), (0, 2), (0, 3), (0, 4)])
    assert flower_order(g, 0) == 1
    assert max_flower(g, 0).deletion == frozenset({1})


def test_center_preconditions() -> None:
    with pytest.raises(PreconditionError):
        flower_order(Graph.build([0, 1], [(0, 0), (0, 1)]), 0)
    with pytest.raises(PreconditionError):
        flower_order(Graph.build([0]), 3)


@PROPERTY_SETTINGS
@given(graph=multigraphs(max_n=6))
def test_order_is_bounded_by_edge_ends(graph: Graph) -> None:
    assume(graph.vertices and not graph.has_loop(0))
    order = flower_order(graph, 0)
    ends = sum(graph.multiplicity(0, u) for u in graph.neighbors(0) if u != 0)
    assert 0 <= order <= ends // 2
    cert = max_flower(graph, 0)
    assert cert.order == order
    assert 0 not in cert.deletion
