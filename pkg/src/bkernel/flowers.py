"""x-flowers: cycles pairwise meeting only in x.

The order is the maximum number of vertex-disjoint paths between the edge
ends at x in G - x. Those are counted with Gallai's doubling: every vertex
outside the terminal set gets a twin joined by a rung, and

    flower order = nu(doubled graph) - |non-terminal vertices|.

The deletion set X is the minimizer of |X| + sum over components C of
G - (X + x) of floor(e(x, C) / 2); at desk scale it is found by scanning sets
of size at most the order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from .graph import Graph, PreconditionError


@dataclass(frozen=True)
class FlowerCertificate:
    center: int
    order: int
    deletion: frozenset[int]


def _check_center(g: Graph, x: int) -> None:
    if x not in g.vertices:
        raise PreconditionError(f"vertex {x} not in graph")
    if g.has_loop(x):
        raise PreconditionError(f"vertex {x} carries a loop")


def flower_order(g: Graph, x: int) -> int:
    _check_center(g, x)
    core = [v for v in sorted(g.vertices) if v != x]
    h = nx.Graph()
    for v in core:
        h.add_edge(("v", v, 0), ("v", v, 1))
    for u, v, _ in g.edges:
        if x in (u, v) or u == v:
            continue
        for c in (0, 1):
            h.add_edge(("v", u, c), ("v", v, c))
    for u in sorted(g.neighbors(x)):
        for i in range(g.multiplicity(x, u)):
            for c in (0, 1):
                h.add_edge(("t", u, i), ("v", u, c))
    nu = len(nx.max_weight_matching(h, maxcardinality=True))
    return nu - len(core)


def _petal_bound(g: Graph, x: int, deletion: frozenset[int]) -> int:
    rest = g.without(deletion | {x})
    total = len(deletion)
    for comp in rest.components():
        e = sum(g.multiplicity(x, u) for u in comp if u in g.neighbors(x))
        total += e // 2
    return total


def max_flower(g: Graph, x: int) -> FlowerCertificate:
    order = flower_order(g, x)
    reach = nx.node_connected_component(g.to_nx(), x) - {x}
    cands = sorted(reach)
    for size in range(order + 1):
        for combo in itertools.combinations(cands, size):
            dset = frozenset(combo)
            if _petal_bound(g, x, dset) == order:
                return FlowerCertificate(center=x, order=order, deletion=dset)
    raise AssertionError(f"no deletion set attains flower order {order} at {x}")
