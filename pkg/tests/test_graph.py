from __future__ import annotations

import pytest
from hypothesis import given
from strategies import PROPERTY_SETTINGS, bg, simple_graphs

from bkernel.graph import (
    FOREST,
    CapExceededError,
    Graph,
    GraphError,
    KernelInputError,
    PreconditionError,
    TargetClass,
    are_isomorphic_small,
    glue,
    glue_boundaried,
    induced_subgraph,
    lift_modulator_into_boundary,
    shrink_boundary,
    treedepth_class,
    validate,
)


class TestGraph:
    def test_repeated_edges_keep_the_larger_multiplicity(self) -> None:
        g = Graph.build([0, 1], [(0, 1), (1, 0, 2), (0, 1)])
        assert g.edges == ((0, 1, 2),)
        assert g.m == 2

    def test_loop_counts_twice_in_degree(self) -> None:
        g = Graph.build([0, 1], [(0, 0), (0, 1)])
        assert g.degree(0) == 3
        assert g.has_loop(0)
        assert not g.is_simple
        assert g.neighbors(0) == frozenset({1})

    def test_components_ordered_by_smallest_id(self) -> None:
        g = Graph.build(range(6), [(4, 5), (0, 3), (1, 2)])
        assert g.components() == [frozenset({0, 3}), frozenset({1, 2}), frozenset({4, 5})]

    def test_nx_conversion_keeps_multiplicities(self) -> None:
        g = Graph.build([0, 1, 2], [(0, 1, 2), (2, 2)])
        assert Graph.from_nx(g.to_nx()) == g


class TestTargetClass:
    def test_parse(self) -> None:
        assert TargetClass.parse("forest") == FOREST
        assert TargetClass.parse("td 3") == treedepth_class(3)
        assert str(treedepth_class(2)) == "td 2"

    @pytest.mark.parametrize("text", ["", "tree", "td", "td 0", "td x", "vc 2"])
    def test_parse_rejects(self, text: str) -> None:
        with pytest.raises(GraphError):
            TargetClass.parse(text)


class TestGlue:
    def test_shared_boundary_is_identified(self) -> None:
        g = bg(3, [(0, 2), (1, 2)], boundary=[0, 1])
        h = bg([0, 1, 5], [(0, 5), (0, 1)], boundary=[0, 1])
        glued = glue(g, h)
        assert glued.vertices == frozenset({0, 1, 2, 5})
        assert glued.multiplicity(0, 1) == 1
        assert glued.multiplicity(0, 5) == 1

    def test_colliding_ids_are_renamed(self) -> None:
        g = bg(3, [(0, 1), (1, 2)], boundary=[0])
        h = bg([0, 2], [(0, 2)], boundary=[0])
        glued = glue(g, h)
        assert glued.n == 4
        assert glued.multiplicity(0, 3) == 1
        assert glued.multiplicity(0, 2) == 0

    def test_empty_attachment_returns_the_graph(self) -> None:
        g = bg(3, [(0, 1), (1, 2)], boundary=[0, 1])
        assert glue(g, bg([0, 1], boundary=[0, 1])) == g.graph

    def test_shared_edge_keeps_max_multiplicity(self) -> None:
        g = bg(2, [(0, 1, 2)], boundary=[0, 1])
        h = bg(2, [(0, 1)], boundary=[0, 1])
        assert glue(g, h).multiplicity(0, 1) == 2

    def test_glue_boundaried_keeps_both_boundaries(self) -> None:
        g = bg(3, [(0, 2)], boundary=[0])
        h = bg([0, 1], [(0, 1)], boundary=[0, 1])
        assert glue_boundaried(g, h).boundary == frozenset({0, 1})

    @PROPERTY_SETTINGS
    @given(a=simple_graphs(max_n=6), b=simple_graphs(max_n=6))
    def test_vertex_count_adds_up(self, a: Graph, b: Graph) -> None:
        shared = frozenset(range(min(a.n, b.n, 2)))
        g = bg(a.vertices, a.edges, boundary=shared)
        h = bg(b.vertices, b.edges, boundary=shared)
        assert glue(g, h).n == a.n + b.n - len(shared)
        assert glue(g, h).m == glue(h, g).m


class TestBoundaryOperations:
    def test_shrink_boundary_requires_subset(self) -> None:
        g = bg(3, boundary=[0, 1])
        assert shrink_boundary(g, [1]).boundary == frozenset({1})
        with pytest.raises(PreconditionError):
            shrink_boundary(g, [2])

    def test_lift_modulator(self) -> None:
        g = bg(4, [(0, 2), (1, 3)], boundary=[0], modulator=[1])
        lifted = lift_modulator_into_boundary(g)
        assert lifted.boundary == lifted.modulator == frozenset({0, 1})
        with pytest.raises(KernelInputError):
            lift_modulator_into_boundary(bg(2))

    def test_lift_restricts_parents(self) -> None:
        g = bg(4, [(1, 2), (2, 3)], modulator=[0, 2], parents=[(3, 2), (1, 2)])
        assert lift_modulator_into_boundary(g).parents == ()

    def test_induced_subgraph(self) -> None:
        g = bg(
            5,
            [(0, 1), (1, 2), (2, 3), (3, 4)],
            boundary=[0, 4],
            modulator=[0, 4],
            parents=[(1, 2), (3, 2)],
        )
        sub = induced_subgraph(g, [0, 1, 3])
        assert sub.boundary == frozenset({0})
        assert sub.modulator == frozenset({0})
        assert sub.graph.edges == ((0, 1, 1),)
        assert sub.parents == ()


class TestValidate:
    def test_clean_graph(self) -> None:
        assert validate(bg(3, [(0, 1)], boundary=[0], modulator=[0], target=FOREST)) == []

    def test_bad_multiplicity(self) -> None:
        g = bg(2, [(0, 1, 3)])
        assert [d.code for d in validate(g)] == ["multiplicity"]

    def test_boundary_outside_graph(self) -> None:
        g = bg(2, boundary=[5])
        assert [d.code for d in validate(g)] == ["boundary"]

    def test_class_violation(self) -> None:
        g = bg(3, [(0, 1), (1, 2), (0, 2)], modulator=[], target=FOREST)
        assert [d.code for d in validate(g)] == ["class"]

    def test_bad_decomposition(self) -> None:
        g = bg(3, [(0, 1), (1, 2)], modulator=[], parents=[(1, 0)])
        assert [d.code for d in validate(g)] == ["decomposition"]


class TestIsomorphism:
    def test_boundary_is_pinned(self) -> None:
        path = bg(3, [(0, 1), (1, 2)], boundary=[0])
        star = bg(3, [(0, 1), (0, 2)], boundary=[0])
        assert not are_isomorphic_small(path, star)
        assert are_isomorphic_small(bg(3, [(0, 1), (1, 2)]), bg(3, [(0, 1), (0, 2)]))

    def test_cap(self) -> None:
        with pytest.raises(CapExceededError):
            are_isomorphic_small(bg(5), bg(5), cap=4)
