"""Bipartite matchings.

- Hopcroft-Karp with ascending-order exploration (deterministic output)
- Hall violators from alternating reachability
- 2-expansion sets by peeling violators off a doubled left side
"""

from __future__ import annotations

from collections import deque
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass
from typing import Any

from .graph import PreconditionError

Node = Any


@dataclass(frozen=True)
class Bipartite:
    left: tuple[Node, ...]
    right: tuple[Node, ...]
    adj: Mapping[Node, tuple[Node, ...]]

    @classmethod
    def build(
        cls, left: Iterable[Node], right: Iterable[Node], edges: Iterable[tuple[Node, Node]]
    ) -> Bipartite:
        ls = tuple(sorted(set(left)))
        rs = tuple(sorted(set(right)))
        rset = set(rs)
        nbrs: dict[Node, set[Node]] = {u: set() for u in ls}
        for u, v in edges:
            if u not in nbrs or v not in rset:
                raise ValueError(f"edge {u!r}-{v!r} leaves the bipartition")
            nbrs[u].add(v)
        return cls(left=ls, right=rs, adj={u: tuple(sorted(vs)) for u, vs in nbrs.items()})

    def edges(self) -> list[tuple[Node, Node]]:
        return [(u, v) for u in self.left for v in self.adj[u]]

    def transposed(self) -> Bipartite:
        return Bipartite.build(self.right, self.left, ((v, u) for u, v in self.edges()))

    def neighborhood(self, nodes: Iterable[Node]) -> frozenset[Node]:
        out: set[Node] = set()
        for u in nodes:
            out.update(self.adj[u])
        return frozenset(out)


@dataclass(frozen=True)
class Matching:
    mates: Mapping[Hashable, Node]

    @property
    def size(self) -> int:
        return len(self.mates)

    @property
    def reverse(self) -> dict[Node, Node]:
        return {v: u for u, v in self.mates.items()}

    def pairs(self) -> list[tuple[Node, Node]]:
        return sorted(self.mates.items())

    def restricted(self, keep: Iterable[Node]) -> Matching:
        ks = set(keep)
        return Matching({u: v for u, v in self.mates.items() if u in ks})


def max_matching(bip: Bipartite) -> Matching:
    """Hopcroft-Karp; layers and augmenting paths explored in ascending order."""
    mate_l: dict[Node, Node] = {}
    mate_r: dict[Node, Node] = {}

    while True:
        dist: dict[Node, int | None] = {}
        queue: deque[Node] = deque()
        for u in bip.left:
            if u not in mate_l:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for v in bip.adj[u]:
                w = mate_r.get(v)
                if w is None:
                    found = True
                elif w not in dist:
                    dist[w] = dist[u] + 1  # type: ignore[operator]
                    queue.append(w)
        if not found:
            break

        def augment(u: Node) -> bool:
            du = dist[u]
            for v in bip.adj[u]:
                w = mate_r.get(v)
                if w is None or (du is not None and dist.get(w) == du + 1 and augment(w)):
                    mate_l[u] = v
                    mate_r[v] = u
                    return True
            dist[u] = None
            return False

        for u in bip.left:
            if u not in mate_l:
                augment(u)

    return Matching(dict(sorted(mate_l.items())))


@dataclass(frozen=True)
class HallViolator:
    nodes: frozenset[Node]
    neighborhood: frozenset[Node]
    # maximum matching restricted to the saturated part of the side
    matching: Matching


def _alternating_reach(bip: Bipartite, m: Matching) -> tuple[set[Node], set[Node]]:
    reach_l = {u for u in bip.left if u not in m.mates}
    reach_r: set[Node] = set()
    back = m.reverse
    queue = deque(sorted(reach_l))
    while queue:
        u = queue.popleft()
        for v in bip.adj[u]:
            if v in reach_r:
                continue
            reach_r.add(v)
            w = back.get(v)
            if w is not None and w not in reach_l:
                reach_l.add(w)
                queue.append(w)
    return reach_l, reach_r


def hall_violator(bip: Bipartite, side: str = "left") -> HallViolator | None:
    """A set S on `side` with |N(S)| < |S|, or None if `side` can be saturated.

    The returned matching saturates side minus S, keyed by side vertices.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be left or right, got {side!r}")
    work = bip if side == "left" else bip.transposed()
    m = max_matching(work)
    if m.size == len(work.left):
        return None
    reach_l, reach_r = _alternating_reach(work, m)
    return HallViolator(
        nodes=frozenset(reach_l),
        neighborhood=frozenset(reach_r),
        matching=m.restricted(set(work.left) - reach_l),
    )


@dataclass(frozen=True)
class Expansion:
    left: frozenset[Node]
    right: frozenset[Node]
    # two distinct right partners per left vertex
    partners: Mapping[Node, tuple[Node, Node]]


def expansion_sets(bip: Bipartite) -> Expansion:
    """Nonempty X' of the left side and Y' of the right side with N(Y') = X'
    and a 2-expansion of X' into Y'."""
    if len(bip.right) < 2 * len(bip.left):
        raise PreconditionError("expansion needs |Y| >= 2|X|")
    back: dict[Node, set[Node]] = {v: set() for v in bip.right}
    for u, v in bip.edges():
        back[v].add(u)
    lonely = [v for v, us in back.items() if not us]
    if lonely:
        raise PreconditionError(f"right vertices without a neighbor: {sorted(lonely)[:5]}")
    if not bip.left:
        raise PreconditionError("expansion needs a nonempty left side")

    xs = set(bip.left)
    ys = set(bip.right)
    while True:
        doubled = Bipartite.build(
            ((u, c) for u in xs for c in (0, 1)),
            ys,
            (((u, c), v) for u in xs for v in bip.adj[u] if v in ys for c in (0, 1)),
        )
        m = max_matching(doubled)
        if m.size == len(doubled.left):
            partners = {u: (m.mates[(u, 0)], m.mates[(u, 1)]) for u in sorted(xs)}
            return Expansion(left=frozenset(xs), right=frozenset(ys), partners=partners)
        reach_l, reach_r = _alternating_reach(doubled, m)
        xs -= {u for u, _ in reach_l}
        ys -= reach_r
