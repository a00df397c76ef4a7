"""Vertex Cover parameterized by vertex cover: crown marking.

Two rules, applied to exhaustion after the modulator is lifted into the boundary:
- isolated vertices outside the boundary are deleted
- a crown (I, H) with I outside the boundary loses every edge at H except its
  H-saturating matching; I and H are then marked and never revisited

Crowns come from tail SCCs of the auxiliary bipartite graph oriented by a
maximum matching. The auxiliary digraph is built once and shrunk as crowns are
consumed; one fresh rebuild at the end confirms the fixpoint.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import networkx as nx

from .graph import (
    VERTEX_COVER,
    BoundariedGraph,
    KernelInputError,
    KernelResult,
    PreconditionError,
    lift_modulator_into_boundary,
    make_result,
)
from .matching import Bipartite, max_matching
from .scc import tail_sccs
from .workgraph import freeze, new_trace, rebound, thaw

log = logging.getLogger("bkernel")

RULES = ("rr_remove_isolated", "rr_crown_reduce")


@dataclass(frozen=True)
class Crown:
    I: frozenset[int]  # noqa: E741
    H: frozenset[int]
    # (h, i) pairs saturating H
    M: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CrownMarks:
    marked_i: frozenset[int] = frozenset()
    marked_h: frozenset[int] = frozenset()

    @property
    def all(self) -> frozenset[int]:
        return self.marked_i | self.marked_h

    def with_crown(self, crown: Crown) -> CrownMarks:
        return CrownMarks(self.marked_i | crown.I, self.marked_h | crown.H)


def _remove_isolated(w: nx.Graph, boundary: frozenset[int]) -> set[int]:
    gone = {v for v in w.nodes if v not in boundary and w.degree(v) == 0}
    w.remove_nodes_from(gone)
    return gone


class CrownFinder:
    """Auxiliary digraph over x-copies of unmarked R and y-copies of unmarked V."""

    def __init__(self, w: nx.Graph, boundary: frozenset[int], marks: CrownMarks) -> None:
        skip = marks.all
        left = [("x", v) for v in w.nodes if v not in boundary and v not in skip]
        right = [("y", v) for v in w.nodes if v not in skip]
        edges = []
        for _, u in left:
            for v in w[u]:
                if v != u and v not in skip:
                    edges.append((("x", u), ("y", v)))
        bip = Bipartite.build(left, right, edges)
        self.matching = max_matching(bip)
        d = nx.DiGraph()
        d.add_nodes_from(bip.left)
        d.add_nodes_from(bip.right)
        d.add_edges_from(bip.edges())
        d.add_edges_from((y, x) for x, y in self.matching.mates.items())
        self.digraph = d

    def next_crown(self) -> Crown | None:
        mate_of = self.matching.reverse
        for scc in tail_sccs(self.digraph):
            s_x = frozenset(v for t, v in scc if t == "x")
            s_y = frozenset(v for t, v in scc if t == "y")
            if not s_x or s_x & s_y:
                continue
            pairs = tuple(sorted((h, mate_of[("y", h)][1]) for h in s_y))
            return Crown(I=s_x, H=s_y, M=pairs)
        return None

    def discard(self, vertices: set[int] | frozenset[int]) -> None:
        for v in vertices:
            for t in ("x", "y"):
                if self.digraph.has_node((t, v)):
                    self.digraph.remove_node((t, v))


def check_crown(
    w: nx.Graph, boundary: frozenset[int], crown: Crown, marks: CrownMarks
) -> None:
    if not crown.I:
        raise PreconditionError("invalid crown: I is empty")
    if crown.I & boundary:
        raise PreconditionError("invalid crown: I meets the boundary")
    if (crown.I | crown.H) & marks.all:
        raise PreconditionError("invalid crown: touches marked vertices")
    missing = (crown.I | crown.H) - set(w.nodes)
    if missing:
        raise PreconditionError(f"invalid crown: unknown vertices {sorted(missing)}")
    nbh: set[int] = set()
    for v in crown.I:
        ns = set(w[v]) - {v}
        if ns & crown.I or w.has_edge(v, v):
            raise PreconditionError("invalid crown: I is not independent")
        nbh |= ns
    if nbh != set(crown.H):
        raise PreconditionError("invalid crown: H is not the neighborhood of I")
    hs = [h for h, _ in crown.M]
    is_ = [i for _, i in crown.M]
    if sorted(hs) != sorted(crown.H) or len(set(is_)) != len(is_):
        raise PreconditionError("invalid crown: M does not saturate H")
    for h, i in crown.M:
        if i not in crown.I or not w.has_edge(h, i):
            raise PreconditionError(f"invalid crown: {h}-{i} is not an H-I edge")


def _apply_crown(w: nx.Graph, crown: Crown) -> int:
    keep = {frozenset(p) for p in crown.M}
    doomed = set()
    for h in crown.H:
        for u in w[h]:
            if frozenset((h, u)) not in keep:
                doomed.add((min(h, u), max(h, u)))
    w.remove_edges_from(doomed)
    log.debug("crown I=%s H=%s: %d edges removed", sorted(crown.I), sorted(crown.H), len(doomed))
    return len(doomed)


def exhaust_crowns(w: nx.Graph, boundary: frozenset[int], trace: dict[str, int]) -> CrownMarks:
    """Apply both rules in place until neither fires; returns the final marks."""
    marks = CrownMarks()
    trace["rr_remove_isolated"] += len(_remove_isolated(w, boundary))
    while True:
        finder = CrownFinder(w, boundary, marks)
        progressed = False
        while (crown := finder.next_crown()) is not None:
            if _apply_crown(w, crown):
                trace["rr_crown_reduce"] += 1
            marks = marks.with_crown(crown)
            gone = _remove_isolated(w, boundary)
            trace["rr_remove_isolated"] += len(gone)
            finder.discard(crown.I | crown.H | gone)
            progressed = True
        if not progressed:
            return marks


def rr_remove_isolated(g: BoundariedGraph) -> tuple[BoundariedGraph, int]:
    w = thaw(g.graph)
    gone = _remove_isolated(w, g.boundary)
    return (
        BoundariedGraph(
            graph=freeze(w),
            boundary=g.boundary,
            modulator=None if g.modulator is None else g.modulator - gone,
            target_class=g.target_class,
        ),
        len(gone),
    )


def find_crown(g: BoundariedGraph, marks: CrownMarks = CrownMarks()) -> Crown | None:
    return CrownFinder(thaw(g.graph), g.boundary, marks).next_crown()


def rr_crown_reduce(
    g: BoundariedGraph, crown: Crown, marks: CrownMarks = CrownMarks()
) -> tuple[BoundariedGraph, CrownMarks]:
    w = thaw(g.graph)
    check_crown(w, g.boundary, crown, marks)
    _apply_crown(w, crown)
    reduced = BoundariedGraph(
        graph=freeze(w),
        boundary=g.boundary,
        modulator=g.modulator,
        target_class=g.target_class,
    )
    return reduced, marks.with_crown(crown)


def require_vertex_cover(g: BoundariedGraph) -> None:
    if g.modulator is None:
        raise KernelInputError("vertex cover kernel needs a modulator")
    if not g.graph.is_simple:
        raise KernelInputError("vertex cover kernel needs a simple graph")
    if g.graph.without(g.modulator).edges:
        raise KernelInputError("graph minus modulator is not an independent set")


def kernelize_vc_vc(g: BoundariedGraph) -> KernelResult:
    require_vertex_cover(g)
    lifted = lift_modulator_into_boundary(g)
    w = thaw(lifted.graph)
    trace = new_trace(*RULES)
    exhaust_crowns(w, lifted.boundary, trace)

    reduced = rebound(g, w, modulator=lifted.boundary, target_class=VERTEX_COVER)
    log.info("vc[vc]: %d -> %d vertices", g.graph.n, reduced.graph.n)
    return make_result(g, reduced, delta=0, trace=trace)


def size_bound(g: BoundariedGraph) -> int:
    return 2 * len(g.boundary | (g.modulator or frozenset()))


def fixpoint_violations(result: KernelResult) -> list[str]:
    """Independent leftover R' must satisfy 2|R'| <= |V'|."""
    reduced = result.reduced
    out: list[str] = []
    mod = reduced.modulator or frozenset()
    rest = reduced.graph.vertices - mod
    if not reduced.graph.induced(rest).edges and 2 * len(rest) > reduced.graph.n:
        out.append(f"independent remainder of {len(rest)} exceeds half of {reduced.graph.n}")
    return out
