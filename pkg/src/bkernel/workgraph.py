"""Mutable working graphs for the reduction loops.

Kernels copy their input into a networkx graph whose edges carry a `mult`
attribute, rewrite it in place, and freeze it back into a Graph at the end.
"""

from __future__ import annotations

import networkx as nx

from .graph import BoundariedGraph, Graph, TargetClass


def thaw(g: Graph) -> nx.Graph:
    return g.to_nx()


def freeze(w: nx.Graph) -> Graph:
    return Graph.from_nx(w)


def mult(w: nx.Graph, u: int, v: int) -> int:
    data = w.get_edge_data(u, v)
    return 0 if data is None else int(data["mult"])


def add_edge(w: nx.Graph, u: int, v: int, count: int = 1) -> None:
    """Add edge copies; loops cap at one copy and other edges at two."""
    cap = 1 if u == v else 2
    w.add_edge(u, v, mult=min(cap, mult(w, u, v) + count))


def degree(w: nx.Graph, v: int) -> int:
    """Edge ends at v with multiplicity; a loop counts twice."""
    d = 0
    for u, data in w[v].items():
        d += 2 if u == v else int(data["mult"])
    return d


def neighbors(w: nx.Graph, v: int) -> set[int]:
    return {u for u in w[v] if u != v}


def has_loop(w: nx.Graph, v: int) -> bool:
    return w.has_edge(v, v)


def fresh_id(w: nx.Graph) -> int:
    return max(w.nodes, default=-1) + 1


def new_trace(*rules: str) -> dict[str, int]:
    return {r: 0 for r in rules}


def rebound(
    source: BoundariedGraph,
    w: nx.Graph,
    *,
    modulator: frozenset[int] | None = None,
    target_class: TargetClass | None = None,
) -> BoundariedGraph:
    """The working graph back as a boundaried graph with source's boundary."""
    graph = freeze(w)
    mod = None if modulator is None else modulator & graph.vertices
    return BoundariedGraph(
        graph=graph,
        boundary=source.boundary,
        modulator=mod,
        target_class=target_class or source.target_class,
    )
