"""Naive reference enumerators.

Written straight from the problem definitions with networkx and itertools,
independently of the bitmask oracles, so the two can be cross-checked.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable

import networkx as nx

from .graph import Graph
from .oracles import MINUS_INFINITY, OptValue, UnsupportedInput, finite


def _simple(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(g.vertices)
    out.add_edges_from((u, v) for u, v, _ in g.edges if u != v)
    return out


def _multi(g: Graph) -> nx.MultiGraph:
    out = nx.MultiGraph()
    out.add_nodes_from(g.vertices)
    for u, v, m in g.edges:
        for _ in range(m):
            out.add_edge(u, v)
    return out


def _subsets(items: list[int]) -> Iterable[tuple[int, ...]]:
    for k in range(len(items) + 1):
        yield from itertools.combinations(items, k)


def _min_deletion(g: nx.Graph | nx.MultiGraph, ok) -> OptValue:
    nodes = sorted(g.nodes)
    for s in _subsets(nodes):
        rest = g.copy()
        rest.remove_nodes_from(s)
        if ok(rest):
            return finite(len(s))
    raise AssertionError("no feasible deletion set")


def _is_cluster(g: nx.Graph) -> bool:
    for comp in nx.connected_components(g):
        k = len(comp)
        if g.subgraph(comp).number_of_edges() != k * (k - 1) // 2:
            return False
    return True


def _naive_ce(g: nx.Graph) -> OptValue:
    nodes = sorted(g.nodes)
    pairs = list(itertools.combinations(nodes, 2))
    for k in range(len(pairs) + 1):
        for flips in itertools.combinations(pairs, k):
            h = g.copy()
            for u, v in flips:
                if h.has_edge(u, v):
                    h.remove_edge(u, v)
                else:
                    h.add_edge(u, v)
            if _is_cluster(h):
                return finite(k)
    raise AssertionError("a complete graph is a cluster graph")


def _naive_mc(g: nx.Graph) -> OptValue:
    nodes = sorted(g.nodes)
    best = 0
    for sides in itertools.product((0, 1), repeat=len(nodes)):
        part = {v for v, s in zip(nodes, sides) if s}
        best = max(best, nx.cut_size(g, part) if part and len(part) < len(nodes) else 0)
    return finite(best)


def _is_path(g: nx.Graph, order: tuple[int, ...]) -> bool:
    return all(g.has_edge(a, b) for a, b in zip(order, order[1:]))


def _naive_lp(g: nx.Graph) -> OptValue:
    nodes = sorted(g.nodes)
    if not nodes:
        return MINUS_INFINITY
    for r in range(len(nodes), 0, -1):
        for order in itertools.permutations(nodes, r):
            if _is_path(g, order):
                return finite(r - 1)
    raise AssertionError("a single vertex is a path")


def _naive_lc(g: nx.Graph) -> OptValue:
    lengths = [len(c) for c in nx.simple_cycles(g) if len(c) >= 3]
    return finite(max(lengths)) if lengths else MINUS_INFINITY


def _naive_hamiltonian(g: nx.Graph, cycle: bool) -> OptValue:
    nodes = sorted(g.nodes)
    n = len(nodes)
    if cycle and n < 3:
        return finite(0)
    if not cycle and n <= 1:
        return finite(int(n == 1))
    for order in itertools.permutations(nodes):
        if cycle and order[0] != nodes[0]:
            break
        if _is_path(g, order) and (not cycle or g.has_edge(order[-1], order[0])):
            return finite(1)
    return finite(0)


def naive_opt(problem: str, g: Graph) -> OptValue:
    simple = _simple(g)
    if problem == "vc":
        return _min_deletion(simple, lambda h: h.number_of_edges() == 0)
    if problem == "fvs":
        return _min_deletion(_multi(g), lambda h: h.number_of_nodes() == 0 or nx.is_forest(h))
    if problem == "tds":
        if g.n == 0:
            return finite(0)
        return _min_deletion(simple, lambda h: h.number_of_nodes() > 0 and nx.is_tree(h))
    if problem == "ds":
        nodes = sorted(g.vertices)
        for s in _subsets(nodes):
            if nx.is_dominating_set(simple, s):
                return finite(len(s))
        raise AssertionError("the vertex set dominates")
    if problem == "cvd":
        return _min_deletion(simple, _is_cluster)
    if problem == "ce":
        return _naive_ce(simple)
    if problem == "mc":
        return _naive_mc(simple)
    if problem == "lc":
        return _naive_lc(simple)
    if problem == "lp":
        return _naive_lp(simple)
    if problem in ("hc", "hp"):
        return _naive_hamiltonian(simple, problem == "hc")
    if problem == "deg2mod":
        return finite(sum(1 for _, d in _multi(g).degree() if d != 2))
    raise UnsupportedInput(f"unknown problem: {problem}")
