from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given
from strategies import PROPERTY_SETTINGS, multigraphs, simple_graphs

from bkernel.graph import Graph
from bkernel.naive import naive_opt
from bkernel.oracles import (
    MINUS_INFINITY,
    PLUS_INFINITY,
    OracleCapExceeded,
    UnsupportedInput,
    finite,
    matches,
    opt_exact,
    vc_forest_dp,
)
from bkernel.settings import OracleCaps


def cycle(n: int) -> Graph:
    return Graph.build(range(n), [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.build(range(n), itertools.pairwise(range(n)))


def complete(n: int) -> Graph:
    return Graph.build(range(n), itertools.combinations(range(n), 2))


@pytest.mark.parametrize(
    ("problem", "graph", "expected"),
    [
        ("vc", cycle(5), 3),
        ("vc", complete(4), 3),
        ("fvs", complete(4), 2),
        ("fvs", Graph.build([0, 1], [(0, 1, 2)]), 1),
        ("fvs", Graph.build([0, 1], [(0, 0), (0, 1)]), 1),
        ("tds", path(4), 0),
        ("tds", cycle(4), 1),
        ("tds", Graph.build(range(4), [(0, 1)]), 2),
        ("ds", path(4), 2),
        ("ds", Graph.build(range(3)), 3),
        ("cvd", path(3), 1),
        ("ce", path(3), 1),
        ("ce", complete(4), 0),
        ("mc", complete(3), 2),
        ("mc", cycle(4), 4),
        ("lc", cycle(5), 5),
        ("lc", complete(4), 4),
        ("lp", path(5), 4),
        ("lp", Graph.build([0]), 0),
        ("deg2mod", path(4), 2),
    ],
)
def test_known_optima(problem: str, graph: Graph, expected: int) -> None:
    assert opt_exact(problem, graph) == finite(expected)


def test_infinite_values() -> None:
    assert opt_exact("lc", path(4)) == MINUS_INFINITY
    assert opt_exact("lp", Graph.build([])) == MINUS_INFINITY


@pytest.mark.parametrize(
    ("problem", "graph", "answer"),
    [
        ("hc", cycle(5), 1),
        ("hc", path(5), 0),
        ("hc", complete(2), 0),
        ("hp", path(5), 1),
        ("hp", Graph.build([0]), 1),
        ("hp", Graph.build(range(2)), 0),
        ("hp", Graph.build(range(4), [(0, 1), (0, 2), (0, 3)]), 0),
    ],
)
def test_hamiltonian_decisions(problem: str, graph: Graph, answer: int) -> None:
    assert opt_exact(problem, graph) == finite(answer)


def test_matches_is_tag_aware() -> None:
    assert matches("vc", finite(4), finite(3), 1)
    assert not matches("vc", finite(4), finite(3), 0)
    assert matches("lc", MINUS_INFINITY, MINUS_INFINITY, 2)
    assert not matches("lc", MINUS_INFINITY, finite(0), 0)
    assert matches("hc", finite(1), finite(1), None)
    assert str(PLUS_INFINITY) == "inf"


def test_cap_and_input_checks() -> None:
    with pytest.raises(OracleCapExceeded):
        opt_exact("vc", path(6), caps=OracleCaps(general=5))
    with pytest.raises(OracleCapExceeded):
        opt_exact("ce", path(6), caps=OracleCaps(ce=5))
    with pytest.raises(UnsupportedInput):
        opt_exact("vc", Graph.build([0, 1], [(0, 1, 2)]))
    with pytest.raises(UnsupportedInput):
        opt_exact("steiner", path(2))


def test_vc_forest_dp() -> None:
    tree = Graph.build(range(7), [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert vc_forest_dp(tree) == 2
    with pytest.raises(UnsupportedInput):
        vc_forest_dp(cycle(3))


@PROPERTY_SETTINGS
@given(graph=simple_graphs(max_n=6))
@pytest.mark.parametrize("problem", ["vc", "tds", "ds", "cvd", "mc", "lc", "lp", "hc", "hp"])
def test_oracles_agree_with_naive_enumeration(problem: str, graph: Graph) -> None:
    assert opt_exact(problem, graph) == naive_opt(problem, graph)


@PROPERTY_SETTINGS
@given(graph=multigraphs(max_n=6))
def test_fvs_oracle_agrees_on_multigraphs(graph: Graph) -> None:
    assert opt_exact("fvs", graph) == naive_opt("fvs", graph)


@PROPERTY_SETTINGS
@given(graph=simple_graphs(max_n=4))
def test_cluster_editing_agrees(graph: Graph) -> None:
    assert opt_exact("ce", graph) == naive_opt("ce", graph)


def _atlas(max_n: int) -> list[Graph]:
    return [Graph.from_nx(g) for g in nx.graph_atlas_g() if g.number_of_nodes() <= max_n]


@pytest.mark.slow
@pytest.mark.parametrize("problem", ["vc", "fvs", "ds", "mc"])
def test_atlas_up_to_seven_vertices(problem: str) -> None:
    for graph in _atlas(7):
        assert opt_exact(problem, graph) == naive_opt(problem, graph), graph


@pytest.mark.slow
@pytest.mark.parametrize("problem", ["ce", "lc", "lp", "hc", "hp", "tds"])
def test_atlas_up_to_six_vertices(problem: str) -> None:
    for graph in _atlas(6):
        assert opt_exact(problem, graph) == naive_opt(problem, graph), graph
