from __future__ import annotations

import pytest
from strategies import bg, equivalence

from bkernel.graph import BoundariedGraph, Graph, KernelInputError, lift_modulator_into_boundary
from bkernel.harness import run_campaign
from bkernel.kernel_vc import kernelize_vc_vc
from bkernel.kernel_vc_td import (
    blocking_bound,
    build_chunk_system,
    fixpoint_violations,
    group_components,
    kernelize_vc_td,
    reduce_component_count,
    regular_kernel_vc_td,
    size_bound,
    td_chunks,
)
from bkernel.oracles import opt_exact
from bkernel.registry import meets_target


def hub_with_paths(count: int, *, at_end: bool = True) -> BoundariedGraph:
    """Modulator 0 next to one vertex of each of `count` disjoint 3-vertex paths."""
    edges = []
    for k in range(count):
        a = 3 * k + 1
        edges += [(a, a + 1), (a + 1, a + 2), (0, a if at_end else a + 1)]
    return bg(3 * count + 1, edges, modulator=[0])


def hub_with_edges(count: int) -> BoundariedGraph:
    edges = []
    for k in range(count):
        a = 2 * k + 1
        edges += [(a, a + 1), (0, a)]
    return bg(2 * count + 1, edges, modulator=[0])


@pytest.mark.parametrize(("d", "bound"), [(2, 2), (3, 3), (4, 5)])
def test_blocking_bound(d: int, bound: int) -> None:
    assert blocking_bound(d) == bound


def test_blocking_bound_needs_depth_two() -> None:
    with pytest.raises(KernelInputError):
        blocking_bound(1)


def test_td_chunks() -> None:
    g = Graph.build(range(3), [(0, 1)])
    assert td_chunks(g, frozenset({0, 1, 2}), 2) == [(0,), (1,), (2,), (0, 2), (1, 2)]
    assert td_chunks(g, frozenset({0, 1, 2}), 1) == [(0,), (1,), (2,)]


def test_group_components() -> None:
    comps = tuple(frozenset({v}) for v in range(5))
    assert [len(g) for g in group_components(comps, 2)] == [2, 2, 1]
    assert len(group_components(comps, 0)) == 5


class TestChunkSystem:
    def test_conflict_free_components_are_doomed(self) -> None:
        lifted = lift_modulator_into_boundary(hub_with_edges(4))
        sys = build_chunk_system(lifted, 2)
        assert sys.chunks == ((0,),)
        assert sys.violator is not None
        assert sys.doomed == (0, 1, 2, 3)

    def test_one_component_per_chunk_survives(self) -> None:
        lifted = lift_modulator_into_boundary(hub_with_paths(3))
        sys = build_chunk_system(lifted, 2)
        assert sys.violator is None
        assert sys.kept == frozenset({0})
        assert sys.opt == (1, 1, 1)
        assert sys.root(0) == 2

    def test_depth_checks(self) -> None:
        lifted = lift_modulator_into_boundary(hub_with_paths(1))
        with pytest.raises(KernelInputError):
            build_chunk_system(lifted, 1)
        long_path = bg(8, [(v, v + 1) for v in range(1, 7)] + [(0, 1)], modulator=[0])
        with pytest.raises(KernelInputError):
            build_chunk_system(lift_modulator_into_boundary(long_path), 2)

    def test_reduce_component_count(self) -> None:
        g = hub_with_edges(3)
        reduced, delta = reduce_component_count(g, 2)
        assert delta == 3
        assert reduced.graph.vertices == frozenset({0})
        assert reduced.boundary == g.boundary


class TestKernel:
    def test_depth_one_is_the_crown_kernel(self) -> None:
        g = bg(4, [(0, 1), (0, 2), (0, 3)], modulator=[0])
        assert kernelize_vc_td(g, 1) == kernelize_vc_vc(g)

    def test_input_checks(self) -> None:
        with pytest.raises(KernelInputError):
            kernelize_vc_td(hub_with_paths(1), 0)
        with pytest.raises(KernelInputError):
            kernelize_vc_td(bg(2, [(0, 1)]), 2)

    def test_surplus_paths_are_solved(self) -> None:
        g = hub_with_paths(3)
        result = kernelize_vc_td(g, 2)
        assert result.rule_count("rr_delete_unmatched_components") == 2
        assert result.delta is not None and result.delta >= 2
        assert result.notes["components"] == 3
        assert not fixpoint_violations(result, 2)
        assert equivalence("vc", g, result).passed

    @pytest.mark.parametrize("at_end", [True, False])
    def test_equivalent_on_a_boundary(self, at_end: bool) -> None:
        base = hub_with_paths(3, at_end=at_end)
        g = BoundariedGraph(graph=base.graph, boundary=frozenset({0, 1}), modulator=frozenset({0}))
        result = kernelize_vc_td(g, 2)
        assert result.reduced.boundary == g.boundary
        assert equivalence("vc", g, result, fresh=1).passed

    def test_regular_kernel(self) -> None:
        g = hub_with_paths(3)
        for ell in range(5):
            kernel = regular_kernel_vc_td(g.graph, frozenset({0}), 2, ell)
            answer = meets_target("vc", opt_exact("vc", kernel.instance.graph), kernel.ell)
            assert answer == (opt_exact("vc", g.graph).value <= ell)

    def test_size_bound(self) -> None:
        assert size_bound(2, 2) == 120
        assert size_bound(0, 3) == 30

    @pytest.mark.parametrize("param", ["td:2", "td:3"])
    def test_campaign(self, small_config, param: str) -> None:
        summary = run_campaign(small_config("vc", param, max_k=1), workers=1)
        assert summary.failures == 0
