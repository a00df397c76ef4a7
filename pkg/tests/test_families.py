from __future__ import annotations

import pytest

from bkernel.families import (
    FAMILIES,
    FamilyError,
    FamilySpec,
    demonstrate_ds_index,
    ds_member,
    ds_subsets,
    gen_family,
    lc_member,
    lp_member,
    make_spec,
    verify_separation,
)
from bkernel.graph import in_target_class, validate


class TestSpecs:
    def test_defaults(self) -> None:
        assert make_spec("ce-cliques") == FamilySpec("ce-cliques", i=0, j=1)
        assert make_spec("tds-star") == FamilySpec("tds-star", i=1, j=2)
        assert make_spec("tds-tree", i=4) == FamilySpec("tds-tree", i=4, j=5)
        assert make_spec("ds-subsets", q=3).problem == "ds"

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"name": "nope"},
            {"name": "ce-cliques", "i": 2, "j": 2},
            {"name": "tds-star", "i": 0},
            {"name": "tds-tree", "i": 1},
            {"name": "ds-subsets"},
            {"name": "ds-subsets", "q": 2, "j": 4},
            {"name": "lp-deg2", "h": -1},
        ],
    )
    def test_rejected(self, kwargs: dict) -> None:
        name = kwargs.pop("name")
        with pytest.raises(FamilyError):
            make_spec(name, **kwargs)


class TestMembers:
    @pytest.mark.parametrize("name", sorted(FAMILIES))
    def test_members_are_valid(self, name: str) -> None:
        spec = make_spec(name, q=3) if name == "ds-subsets" else make_spec(name)
        fam = gen_family(spec)
        for g in (*fam.members, *fam.witnesses):
            assert not validate(g)
        for g in fam.members:
            if g.target_class is not None:
                assert in_target_class(g.graph.without(g.boundary), g.target_class)

    def test_degree_two_members(self) -> None:
        for g in (lc_member(2), lp_member(3)):
            assert all(g.graph.degree(v) == 2 for v in g.rest)

    def test_ds_subsets(self) -> None:
        assert ds_subsets(4) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        g = ds_member(4, 0b100001)
        assert g.graph.n == 6
        assert g.graph.neighbors(4) == frozenset({0, 1})
        assert g.graph.neighbors(5) == frozenset({2, 3})


class TestSeparation:
    @pytest.mark.parametrize(
        "spec",
        [
            make_spec("ce-cliques"),
            make_spec("ce-cliques", i=3, j=1),
            make_spec("mc-bipartite"),
            make_spec("mc-bipartite", i=1, j=3),
            make_spec("tds-star"),
            make_spec("tds-tree"),
            make_spec("lc-deg2"),
            make_spec("lc-deg2", i=2, j=0),
            make_spec("lp-deg2"),
            make_spec("lp-deg2", i=3, j=1),
            make_spec("ds-subsets", q=4),
        ],
        ids=str,
    )
    def test_pairs_are_separated(self, spec: FamilySpec) -> None:
        report = verify_separation(spec)
        assert report.verdict
        assert report.closed_form, report.optima
        assert len(report.optima) == 4

    def test_closed_forms(self) -> None:
        assert verify_separation(make_spec("ce-cliques", i=1, j=2)).optima == [0, 0, 1, 2]
        assert verify_separation(make_spec("lc-deg2", i=0, j=1)).optima == [4, 4, 4, 5]
        assert verify_separation(make_spec("lp-deg2", i=0, j=1)).optima == [2, 3, 4, 4]
        assert verify_separation(make_spec("mc-bipartite", i=0, j=1, h=1)).optima == [0, 2, 3, 4]

    def test_index_override(self) -> None:
        report = verify_separation(make_spec("lc-deg2"), i=2, j=3)
        assert report.indices["i"] == 2
        assert report.optima == [4, 4, 6, 7]


class TestDominatingSetIndex:
    def test_two_boundary_vertices(self) -> None:
        report = demonstrate_ds_index(2)
        assert report.members == 4
        assert report.pairs == 6
        assert report.separated == 6
        assert not report.unseparated
        assert report.bound_ok is None

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [3, 4])
    def test_larger_boundaries(self, q: int) -> None:
        report = demonstrate_ds_index(q)
        assert report.separated == report.pairs
        assert report.full_witness_optima == [q]
        assert report.bound_ok in (None, True)

    @pytest.mark.parametrize("q", [1, 5])
    def test_range(self, q: int) -> None:
        with pytest.raises(FamilyError):
            demonstrate_ds_index(q)
