from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import PROPERTY_SETTINGS, bipartite_edges

from bkernel.graph import PreconditionError
from bkernel.matching import Bipartite, expansion_sets, hall_violator, max_matching


def _nx_matching_size(left: list, right: list, edges: list) -> int:
    g = nx.Graph()
    g.add_nodes_from(("l", u) for u in left)
    g.add_nodes_from(("r", v) for v in right)
    g.add_edges_from((("l", u), ("r", v)) for u, v in edges)
    top = [("l", u) for u in left]
    return len(nx.bipartite.hopcroft_karp_matching(g, top_nodes=top)) // 2


class TestMaxMatching:
    def test_small_example(self) -> None:
        bip = Bipartite.build([0, 1, 2], ["a", "b"], [(0, "a"), (1, "a"), (1, "b"), (2, "b")])
        m = max_matching(bip)
        assert m.size == 2
        assert set(m.reverse) == {"a", "b"}

    def test_edges_must_respect_the_sides(self) -> None:
        with pytest.raises(ValueError):
            Bipartite.build([0], ["a"], [("a", 0)])

    @PROPERTY_SETTINGS
    @given(data=bipartite_edges())
    def test_size_matches_networkx(self, data) -> None:
        left, right, edges = data
        bip = Bipartite.build(left, right, edges)
        m = max_matching(bip)
        assert m.size == _nx_matching_size(left, right, edges)
        assert len(set(m.mates.values())) == m.size
        assert all(v in bip.adj[u] for u, v in m.pairs())

    def test_deterministic(self) -> None:
        bip = Bipartite.build(range(4), range(4), [(u, v) for u in range(4) for v in range(4)])
        assert max_matching(bip).pairs() == max_matching(bip).pairs()


class TestHallViolator:
    def test_none_when_left_is_saturated(self) -> None:
        bip = Bipartite.build([0, 1], ["a", "b"], [(0, "a"), (1, "b")])
        assert hall_violator(bip) is None

    def test_violator_on_a_crowded_vertex(self) -> None:
        bip = Bipartite.build([0, 1, 2], ["a", "b"], [(0, "a"), (1, "a"), (2, "b")])
        v = hall_violator(bip)
        assert v is not None
        assert v.nodes == frozenset({0, 1})
        assert v.neighborhood == frozenset({"a"})
        assert v.matching.mates == {2: "b"}

    def test_right_side(self) -> None:
        bip = Bipartite.build([0], ["a", "b"], [(0, "a"), (0, "b")])
        assert hall_violator(bip, side="left") is None
        v = hall_violator(bip, side="right")
        assert v is not None and len(v.neighborhood) < len(v.nodes)
        with pytest.raises(ValueError):
            hall_violator(bip, side="middle")

    @PROPERTY_SETTINGS
    @given(data=bipartite_edges())
    def test_violator_properties(self, data) -> None:
        left, right, edges = data
        bip = Bipartite.build(left, right, edges)
        v = hall_violator(bip)
        if v is None:
            assert max_matching(bip).size == len(bip.left)
            return
        assert len(v.neighborhood) < len(v.nodes)
        assert bip.neighborhood(v.nodes) == v.neighborhood
        assert set(v.matching.mates) == set(bip.left) - v.nodes
        assert not set(v.matching.mates.values()) & v.neighborhood


@st.composite
def expandable(draw: st.DrawFn) -> Bipartite:
    left = list(range(draw(st.integers(min_value=1, max_value=3))))
    size = draw(st.integers(min_value=2 * len(left), max_value=2 * len(left) + 3))
    right = [f"y{k}" for k in range(size)]
    edges = []
    for y in right:
        nbrs = draw(st.lists(st.sampled_from(left), min_size=1, unique=True))
        edges.extend((x, y) for x in nbrs)
    return Bipartite.build(left, right, edges)


class TestExpansion:
    @PROPERTY_SETTINGS
    @given(bip=expandable())
    def test_two_expansion(self, bip: Bipartite) -> None:
        exp = expansion_sets(bip)
        assert exp.left
        assert set(exp.partners) == set(exp.left)
        used = [y for pair in exp.partners.values() for y in pair]
        assert len(used) == len(set(used))
        for x, pair in exp.partners.items():
            assert set(pair) <= exp.right
            assert all(y in bip.adj[x] for y in pair)
        for y in exp.right:
            assert {x for x in bip.left if y in bip.adj[x]} <= exp.left

    def test_preconditions(self) -> None:
        with pytest.raises(PreconditionError):
            expansion_sets(Bipartite.build([0, 1], ["a", "b", "c"], [(0, "a")]))
        with pytest.raises(PreconditionError):
            expansion_sets(Bipartite.build([0], ["a", "b"], [(0, "a")]))
