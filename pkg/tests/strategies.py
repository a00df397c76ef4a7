"""Hypothesis strategies and small builders shared by the test modules."""

from __future__ import annotations

import itertools
from collections.abc import Iterable

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bkernel.graph import BoundariedGraph, Graph, KernelResult, TargetClass
from bkernel.harness import check_equivalence, exhaustive_attachments
from bkernel.reports import EquivalenceVerdict

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


def bg(
    vertices: int | Iterable[int],
    edges: Iterable[tuple[int, int] | tuple[int, int, int]] = (),
    *,
    boundary: Iterable[int] = (),
    modulator: Iterable[int] | None = None,
    target: TargetClass | None = None,
    parents: Iterable[tuple[int, int]] | None = None,
) -> BoundariedGraph:
    vs = range(vertices) if isinstance(vertices, int) else vertices
    return BoundariedGraph(
        graph=Graph.build(vs, edges),
        boundary=frozenset(boundary),
        modulator=None if modulator is None else frozenset(modulator),
        target_class=target,
        parents=None if parents is None else tuple(sorted(parents)),
    )


def equivalence(
    problem: str, g: BoundariedGraph, result: KernelResult, *, fresh: int = 2
) -> EquivalenceVerdict:
    """Check result against every attachment on g's boundary plus `fresh` new vertices."""
    return check_equivalence(problem, g, result, exhaustive_attachments(g.boundary, fresh))


@st.composite
def simple_graphs(draw: st.DrawFn, max_n: int = 7) -> Graph:
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.build(range(n), chosen)


@st.composite
def multigraphs(draw: st.DrawFn, max_n: int = 6) -> Graph:
    g = draw(simple_graphs(max_n=max_n))
    mults = dict(g.mults)
    for key in list(mults):
        if draw(st.booleans()):
            mults[key] = 2
    for v in sorted(g.vertices):
        if draw(st.integers(min_value=0, max_value=5)) == 0:
            mults[(v, v)] = 1
    return Graph.from_mults(g.vertices, mults)


@st.composite
def vc_instances(
    draw: st.DrawFn, max_boundary: int = 2, max_k: int = 2, max_rest: int = 6
) -> BoundariedGraph:
    """Boundary 0..b-1, modulator 0..b+k-1, independent rest hanging off the modulator."""
    b = draw(st.integers(min_value=0, max_value=max_boundary))
    k = draw(st.integers(min_value=0, max_value=max_k))
    r = draw(st.integers(min_value=0, max_value=max_rest))
    mod = list(range(b + k))
    rest = list(range(b + k, b + k + r))
    inner = list(itertools.combinations(mod, 2))
    cross = [(x, v) for x in mod for v in rest]
    edges = draw(st.lists(st.sampled_from(inner), unique=True) if inner else st.just([]))
    edges += draw(st.lists(st.sampled_from(cross), unique=True) if cross else st.just([]))
    return bg(b + k + r, edges, boundary=range(b), modulator=mod)


@st.composite
def forest_instances(
    draw: st.DrawFn, max_boundary: int = 2, max_k: int = 1, max_rest: int = 6
) -> BoundariedGraph:
    """Like vc_instances, with a random forest on the rest."""
    g = draw(vc_instances(max_boundary=max_boundary, max_k=max_k, max_rest=max_rest))
    mod = sorted(g.modulator or ())
    rest = sorted(g.graph.vertices - frozenset(mod))
    tree = []
    for n, v in enumerate(rest[1:], start=1):
        if draw(st.booleans()):
            tree.append((draw(st.sampled_from(rest[:n])), v))
    edges = [(u, v) for u, v, _ in g.graph.edges] + tree
    return bg(g.graph.vertices, edges, boundary=g.boundary, modulator=mod)


@st.composite
def bipartite_edges(
    draw: st.DrawFn, max_left: int = 5, max_right: int = 5
) -> tuple[list[int], list[str], list[tuple[int, str]]]:
    left = list(range(draw(st.integers(min_value=0, max_value=max_left))))
    right = [f"r{k}" for k in range(draw(st.integers(min_value=0, max_value=max_right)))]
    pairs = [(u, v) for u in left for v in right]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return left, right, edges
