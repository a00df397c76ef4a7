from __future__ import annotations

import pytest

from bkernel.graph import FOREST, VERTEX_COVER, Graph, treedepth_class
from bkernel.oracles import MINUS_INFINITY, finite, opt_exact
from bkernel.registry import (
    EXCLUDED,
    Param,
    UnsupportedCombination,
    derive_regular_kernel,
    lookup,
    meets_target,
    supported_pairs,
)

STAR = Graph.build(range(4), [(0, 1), (0, 2), (0, 3)])


class TestParam:
    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("vc", Param("vc")),
            ("fvs", Param("fvs")),
            ("deg2", Param("deg2")),
            ("td:3", Param("td", 3)),
        ],
    )
    def test_parse(self, text: str, expected: Param) -> None:
        assert Param.parse(text) == expected
        assert str(expected) == text

    @pytest.mark.parametrize("text", ["tw", "td", "td:0", "td:x", "vc:2", ""])
    def test_parse_errors(self, text: str) -> None:
        with pytest.raises(ValueError):
            Param.parse(text)

    def test_target_class(self) -> None:
        assert Param("vc").target_class == VERTEX_COVER
        assert Param("fvs").target_class == FOREST
        assert Param("td", 2).target_class == treedepth_class(2)
        assert Param("deg2").target_class is None


class TestLookup:
    def test_supported(self) -> None:
        assert lookup("vc", "vc").key == "vc/vc"
        assert lookup("hp", "deg2").key == "hp/deg2"
        assert lookup("vc", "td:2").param == Param("td", 2)
        assert "vc/td:<d>" in supported_pairs()
        assert "fvs/fvs" in supported_pairs()

    @pytest.mark.parametrize(("problem", "param"), sorted(EXCLUDED))
    def test_excluded_pairs_name_their_family(self, problem: str, param: str) -> None:
        with pytest.raises(UnsupportedCombination) as info:
            lookup(problem, param)
        assert "family" in info.value.reason
        assert info.value.problem == problem

    def test_unknown_pairs(self) -> None:
        with pytest.raises(UnsupportedCombination, match="no boundaried kernel"):
            lookup("fvs", "vc")
        with pytest.raises(UnsupportedCombination, match="unknown parameterization"):
            lookup("vc", "treewidth")


class TestRegularKernel:
    def test_star_vertex_cover(self) -> None:
        kernel = derive_regular_kernel("vc", "vc", STAR, frozenset({0}), 5)
        assert kernel.decided is None
        assert kernel.instance.boundary == frozenset()
        assert kernel.ell == 2
        assert kernel.instance.graph.n == 2

    def test_negative_target_is_a_constant_no(self) -> None:
        kernel = derive_regular_kernel("vc", "vc", STAR, frozenset({0}), -1)
        assert kernel.decided is False
        value = opt_exact("vc", kernel.instance.graph)
        assert not meets_target("vc", value, kernel.ell)

    def test_unreachable_maximum_is_a_constant_no(self) -> None:
        kernel = derive_regular_kernel("lp", "vc", STAR, frozenset({0}), 10)
        assert kernel.decided is False
        assert not meets_target("lp", opt_exact("lp", kernel.instance.graph), kernel.ell)

    def test_decision_problems_keep_no_target(self) -> None:
        kernel = derive_regular_kernel("hc", "vc", STAR, frozenset({0}), None)
        assert kernel.ell is None
        assert not meets_target("hc", opt_exact("hc", kernel.instance.graph), None)

    @pytest.mark.parametrize("ell", range(-1, 5))
    @pytest.mark.parametrize(("problem", "param"), [("vc", "vc"), ("vc", "fvs"), ("lp", "vc")])
    def test_answers_are_preserved(self, problem: str, param: str, ell: int) -> None:
        graph = Graph.build(range(6), [(0, 2), (0, 3), (1, 3), (1, 4), (0, 5), (1, 5)])
        kernel = derive_regular_kernel(problem, param, graph, frozenset({0, 1}), ell)
        before = meets_target(problem, opt_exact(problem, graph), ell)
        after = meets_target(problem, opt_exact(problem, kernel.instance.graph), kernel.ell)
        assert before == after


def test_meets_target() -> None:
    assert meets_target("vc", finite(2), 2)
    assert not meets_target("vc", finite(3), 2)
    assert meets_target("lc", finite(5), 4)
    assert not meets_target("lc", MINUS_INFINITY, 0)
    assert meets_target("hp", finite(1), None)
