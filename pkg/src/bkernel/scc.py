"""Tail strongly connected components (SCCs without outgoing edges)."""

from __future__ import annotations

import networkx as nx


def tail_sccs(d: nx.DiGraph) -> list[frozenset]:
    """All sink components of the condensation, ordered by smallest member."""
    if d.number_of_nodes() == 0:
        return []
    cond = nx.condensation(d)
    sinks = [frozenset(cond.nodes[c]["members"]) for c in cond if cond.out_degree(c) == 0]
    return sorted(sinks, key=min)
