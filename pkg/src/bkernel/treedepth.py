"""Treedepth decompositions.

A decomposition is a rooted forest given by parent pointers; every graph edge
must join an ancestor/descendant pair and the height is the number of vertices
on the longest root-to-leaf path.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

from .graph import CapExceededError, Graph, GraphError, restrict_parents

log = logging.getLogger("bkernel")


class DecompositionError(GraphError):
    pass


@dataclass(frozen=True)
class TreedepthDecomposition:
    parent: Mapping[int, int | None]

    @cached_property
    def children(self) -> dict[int | None, list[int]]:
        out: dict[int | None, list[int]] = {}
        for v in sorted(self.parent):
            out.setdefault(self.parent[v], []).append(v)
        return out

    @property
    def roots(self) -> list[int]:
        return self.children.get(None, [])

    @cached_property
    def depth(self) -> dict[int, int]:
        out: dict[int, int] = {}
        stack = [(r, 1) for r in self.roots]
        while stack:
            v, d = stack.pop()
            out[v] = d
            stack.extend((c, d + 1) for c in self.children.get(v, []))
        return out

    @property
    def height(self) -> int:
        return max(self.depth.values(), default=0)

    def ancestors(self, v: int) -> Iterator[int]:
        p = self.parent[v]
        while p is not None:
            yield p
            p = self.parent[p]

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((c, p) for c, p in self.parent.items() if p is not None))

    def restricted(self, keep: Iterable[int]) -> TreedepthDecomposition:
        ks = frozenset(keep) & frozenset(self.parent)
        up = dict(restrict_parents(self.pairs(), ks))
        return TreedepthDecomposition({v: up.get(v) for v in sorted(ks)})


def check_decomposition(g: Graph, dec: TreedepthDecomposition) -> None:
    if set(dec.parent) != set(g.vertices):
        raise DecompositionError("decomposition does not cover exactly the graph's vertices")
    if len(dec.depth) != len(dec.parent):
        raise DecompositionError("parent pointers contain a cycle")
    for u, v, _ in g.edges:
        if u == v:
            continue
        if u not in set(dec.ancestors(v)) and v not in set(dec.ancestors(u)):
            raise DecompositionError(f"edge {u}-{v} joins two unrelated vertices")


def decomposition_from_parents(
    g: Graph, pairs: Iterable[tuple[int, int]]
) -> TreedepthDecomposition:
    parent: dict[int, int | None] = {v: None for v in g.vertices}
    for child, p in pairs:
        if child not in parent or p not in parent:
            raise DecompositionError(f"parent pointer {child}->{p} leaves the graph")
        parent[child] = p
    dec = TreedepthDecomposition(parent)
    check_decomposition(g, dec)
    return dec


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Search:
    def __init__(self, adj: list[int]) -> None:
        self.adj = adj
        self.exact: dict[int, int] = {}
        self.root: dict[int, int] = {}
        self.lower: dict[int, int] = {}

    def components(self, mask: int) -> list[int]:
        out: list[int] = []
        rest = mask
        while rest:
            comp = frontier = rest & -rest
            while frontier:
                nxt = 0
                for v in _bits(frontier):
                    nxt |= self.adj[v]
                nxt &= mask & ~comp
                comp |= nxt
                frontier = nxt
            out.append(comp)
            rest &= ~comp
        return out

    def solve(self, mask: int, limit: int) -> int | None:
        """Treedepth of G[mask] if at most limit, else None."""
        if mask in self.exact:
            val = self.exact[mask]
            return val if val <= limit else None
        if self.lower.get(mask, 0) > limit or limit < 1:
            return None
        if mask & (mask - 1) == 0:
            self.exact[mask] = 1
            self.root[mask] = mask.bit_length() - 1
            return 1

        comps = self.components(mask)
        if len(comps) > 1:
            worst = 0
            for c in comps:
                r = self.solve(c, limit)
                if r is None:
                    self.lower[mask] = limit + 1
                    return None
                worst = max(worst, r)
            self.exact[mask] = worst
            return worst

        order = sorted(_bits(mask), key=lambda v: (-(self.adj[v] & mask).bit_count(), v))
        best: int | None = None
        for v in order:
            bound = limit - 1 if best is None else best - 2
            if bound < 1:
                break
            r = self.solve(mask & ~(1 << v), bound)
            if r is not None:
                best = r + 1
                self.root[mask] = v
        if best is None:
            self.lower[mask] = limit + 1
            return None
        self.exact[mask] = best
        return best

    def build(self, mask: int, parent: int | None, out: dict[int, int | None]) -> None:
        for comp in self.components(mask):
            r = self.root[comp]
            out[r] = parent
            rest = comp & ~(1 << r)
            if rest:
                self.build(rest, r, out)


def treedepth_decompose(
    g: Graph, budget: int | None = None, *, cap: int | None = None
) -> TreedepthDecomposition | None:
    """A minimum-height decomposition, or None when treedepth exceeds budget."""
    if cap is None:
        from .settings import load_settings

        cap = load_settings().caps.td
    ids = sorted(g.vertices)
    idx = {v: i for i, v in enumerate(ids)}
    adj = [0] * len(ids)
    for u, v, _ in g.edges:
        if u != v:
            adj[idx[u]] |= 1 << idx[v]
            adj[idx[v]] |= 1 << idx[u]
    search = _Search(adj)
    limit = len(ids) if budget is None else budget
    for comp in search.components((1 << len(ids)) - 1):
        if comp.bit_count() > cap:
            raise CapExceededError(f"treedepth search limited to {cap} vertices per component")
        if search.solve(comp, limit) is None:
            return None

    out: dict[int, int | None] = {}
    search.build((1 << len(ids)) - 1, None, out)
    return TreedepthDecomposition({ids[c]: None if p is None else ids[p] for c, p in out.items()})


def vc_bounded_td_dp(
    g: Graph, dec: TreedepthDecomposition, forbidden: Iterable[int] = ()
) -> int:
    """Minimum vertex cover of g - forbidden, by DP over the decomposition.

    The state of a vertex is the set of its ancestors left out of the cover,
    so the work grows with 2^height, not with |V|.
    """
    if not g.is_simple:
        raise GraphError("vc_bounded_td_dp needs a simple graph")
    dec = dec.restricted(g.vertices) if set(dec.parent) != set(g.vertices) else dec
    check_decomposition(g, dec)
    banned = frozenset(forbidden)

    def best(v: int, excluded: frozenset[int]) -> int:
        kids = dec.children.get(v, [])
        if v in banned:
            return sum(best(c, excluded) for c in kids)
        take = 1 + sum(best(c, excluded) for c in kids)
        if g.adjacency[v] & excluded:
            return take
        leave = sum(best(c, excluded | {v}) for c in kids)
        return min(take, leave)

    return sum(best(r, frozenset()) for r in dec.roots)


def restrict_decomposition(
    dec: TreedepthDecomposition, vertices: Iterable[int]
) -> TreedepthDecomposition:
    """Keep only `vertices`, each re-parented to its nearest kept ancestor."""
    return dec.restricted(vertices)
