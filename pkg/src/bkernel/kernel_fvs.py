"""Feedback Vertex Set parameterized by feedback vertex set.

Works on multigraphs: a loop forces its vertex into every solution and a double
edge is a 2-cycle. Adding a third copy of an edge (or a second loop) is a no-op.

Rules, with B the boundary after lifting the modulator:
- R-vertices of degree 0 or 1 are deleted; R-vertices with two edge ends are
  bypassed, except that one path between two non-adjacent B-vertices survives
  and a second such path turns both into a double edge
- a looped B-vertex loses its other edges
- a B-vertex carrying a flower of order > |B| gets a loop instead of its edges
- a Gallai structure at x (X plus tree components hanging off x by one edge
  and 2-expanding into X) is replaced by double edges x-X

Whenever a B-vertex keeps >= 5|B| neighbors in R, the flower or Gallai rule is
found constructively (max flower, component classification, expansion sets).
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from .flowers import flower_order, max_flower
from .graph import (
    FOREST,
    BoundariedGraph,
    Graph,
    KernelInputError,
    KernelResult,
    PreconditionError,
    is_forest,
    lift_modulator_into_boundary,
    make_result,
)
from .matching import Bipartite, expansion_sets, max_matching
from .workgraph import add_edge, degree, freeze, has_loop, mult, neighbors, new_trace, rebound, thaw

log = logging.getLogger("bkernel")

RULES = (
    "rr_delete_low_degree",
    "rr_bypass_degree_two",
    "rr_loop_cleanup",
    "rr_flower",
    "rr_gallai",
)


@dataclass(frozen=True)
class GallaiStructure:
    x: int
    X: frozenset[int]
    components: tuple[frozenset[int], ...]
    # vertex of X -> two components it owns
    witness: Mapping[int, tuple[frozenset[int], frozenset[int]]] = field(default_factory=dict)


def _between_boundary(w: nx.Graph, boundary: frozenset[int], a: int, b: int) -> bool:
    return a != b and a in boundary and b in boundary and not w.has_edge(a, b)


def _twin(w: nx.Graph, boundary: frozenset[int], v: int, a: int, b: int) -> int | None:
    """Another R-vertex whose only edges are single ones to a and b."""
    for s in sorted((neighbors(w, a) & neighbors(w, b)) - boundary - {v}):
        if degree(w, s) == 2:
            return s
    return None


def _degree_cleanup(w: nx.Graph, boundary: frozenset[int], trace: dict[str, int]) -> int:
    applied = 0
    dirty = sorted(v for v in w.nodes if v not in boundary)
    while dirty:
        v = dirty.pop()
        if v not in w or v in boundary:
            continue
        d = degree(w, v)
        if d <= 1:
            touched = neighbors(w, v)
            w.remove_node(v)
            trace["rr_delete_low_degree"] += 1
        elif d == 2 and not has_loop(w, v):
            ends = [u for u in sorted(neighbors(w, v)) for _ in range(mult(w, v, u))]
            a, b = ends
            if _between_boundary(w, boundary, a, b):
                # B-B edges merge on gluing: a lone path stays, twin paths become a 2-cycle
                twin = _twin(w, boundary, v, a, b)
                if twin is None:
                    continue
                touched = {twin}
                w.remove_node(v)
                add_edge(w, a, b, 2)
                log.debug("bypassed %d with twin %d: double edge %d-%d", v, twin, a, b)
            else:
                touched = {a, b}
                w.remove_node(v)
                add_edge(w, a, b)
                log.debug("bypassed %d: edge %d-%d", v, a, b)
            trace["rr_bypass_degree_two"] += 1
        else:
            continue
        applied += 1
        dirty.extend(sorted(u for u in touched if u not in boundary))
    return applied


def _strip_to_loop(w: nx.Graph, x: int) -> int:
    doomed = [(x, u) for u in neighbors(w, x)]
    w.remove_edges_from(doomed)
    add_edge(w, x, x)
    return len(doomed)


def _loop_cleanup(w: nx.Graph, boundary: frozenset[int], trace: dict[str, int]) -> int:
    applied = 0
    for x in sorted(boundary):
        if x in w and has_loop(w, x) and neighbors(w, x):
            _strip_to_loop(w, x)
            trace["rr_loop_cleanup"] += 1
            applied += 1
            log.debug("looped %d stripped", x)
    return applied


def rr_degree_cleanup(g: BoundariedGraph) -> BoundariedGraph:
    w = thaw(g.graph)
    _degree_cleanup(w, g.boundary, new_trace(*RULES))
    return rebound(g, w, modulator=g.modulator)


def rr_loop_cleanup(g: BoundariedGraph) -> BoundariedGraph:
    w = thaw(g.graph)
    _loop_cleanup(w, g.boundary, new_trace(*RULES))
    return rebound(g, w, modulator=g.modulator)


def _bound(boundary: frozenset[int]) -> int:
    return max(len(boundary), 1)


def rr_flower(g: BoundariedGraph, x: int) -> BoundariedGraph:
    if x not in g.boundary:
        raise PreconditionError(f"flower rule applies to boundary vertices, {x} is not one")
    if g.graph.has_loop(x):
        raise PreconditionError(f"{x} already carries a loop")
    order = flower_order(g.graph, x)
    if order <= _bound(g.boundary):
        raise PreconditionError(f"flower order {order} at {x} does not exceed {_bound(g.boundary)}")
    w = thaw(g.graph)
    _strip_to_loop(w, x)
    return rebound(g, w, modulator=g.modulator)


def _is_tree(w: nx.Graph, comp: frozenset[int]) -> bool:
    sub = w.subgraph(comp)
    if any(u == v or d["mult"] != 1 for u, v, d in sub.edges(data=True)):
        return False
    return nx.is_tree(sub)


def _x_edges(w: nx.Graph, x: int, comp: Iterable[int]) -> int:
    return sum(mult(w, x, u) for u in comp if u != x)


def check_gallai(w: nx.Graph, boundary: frozenset[int], s: GallaiStructure) -> None:
    if s.x in s.X:
        raise PreconditionError("invalid Gallai structure: x lies in X")
    if not s.X or not s.components:
        raise PreconditionError("invalid Gallai structure: X and the components must be nonempty")
    cut = s.X | {s.x}
    seen: set[int] = set()
    for comp in s.components:
        if comp & cut or comp & seen:
            raise PreconditionError("invalid Gallai structure: overlapping components")
        seen |= comp
        if not nx.is_connected(w.subgraph(comp)):
            raise PreconditionError(f"invalid Gallai structure: {sorted(comp)} is not connected")
        outside = {u for v in comp for u in w[v]} - comp
        if not outside <= cut:
            raise PreconditionError(f"invalid Gallai structure: {sorted(comp)} is not a component")
        if comp & boundary:
            raise PreconditionError(f"condition (i): {sorted(comp)} meets the boundary")
        if _x_edges(w, s.x, comp) != 1:
            raise PreconditionError(f"condition (ii): {sorted(comp)} has not exactly one edge to x")
        if not _is_tree(w, comp):
            raise PreconditionError(f"condition (iii): {sorted(comp)} is not a tree")
    doubled = Bipartite.build(
        ((v, c) for v in s.X for c in (0, 1)),
        range(len(s.components)),
        (
            ((v, c), i)
            for i, comp in enumerate(s.components)
            for v in s.X
            if any(w.has_edge(v, u) for u in comp)
            for c in (0, 1)
        ),
    )
    if max_matching(doubled).size < 2 * len(s.X):
        raise PreconditionError("condition (iv): some Z in X sees fewer than 2|Z| components")


def _apply_gallai(w: nx.Graph, s: GallaiStructure) -> None:
    for comp in s.components:
        w.remove_edges_from([(s.x, u) for u in comp if w.has_edge(s.x, u)])
    for v in sorted(s.X):
        add_edge(w, s.x, v, 2)
    log.debug("gallai at %d: X=%s, %d components cut", s.x, sorted(s.X), len(s.components))


def rr_gallai(g: BoundariedGraph, s: GallaiStructure) -> BoundariedGraph:
    w = thaw(g.graph)
    check_gallai(w, g.boundary, s)
    _apply_gallai(w, s)
    return rebound(g, w, modulator=g.modulator)


def find_gallai(w: nx.Graph, boundary: frozenset[int], x: int) -> GallaiStructure:
    """Gallai structure at a high-degree x once the flower at x is small."""
    cert = max_flower(freeze(w), x)
    if not cert.deletion:
        raise PreconditionError(f"no Gallai structure at {x}: the flower deletion set is empty")
    cut = cert.deletion | {x}
    comps = [frozenset(c) for c in nx.connected_components(w.subgraph(set(w.nodes) - cut))]
    hanging = sorted(
        (c for c in comps if not c & boundary and _x_edges(w, x, c) == 1 and _is_tree(w, c)),
        key=min,
    )
    by_id = {min(c): c for c in hanging}
    edges = [
        (v, k)
        for k, c in by_id.items()
        for v in sorted(cert.deletion)
        if any(w.has_edge(v, u) for u in c)
    ]
    bip = Bipartite.build(cert.deletion, by_id, edges)
    exp = expansion_sets(bip)
    return GallaiStructure(
        x=x,
        X=frozenset(exp.left),
        components=tuple(by_id[k] for k in sorted(exp.right)),
        witness={v: (by_id[a], by_id[b]) for v, (a, b) in exp.partners.items()},
    )


def _high_degree_step(w: nx.Graph, boundary: frozenset[int], x: int) -> str:
    b = _bound(boundary)
    rest_nbrs = neighbors(w, x) - boundary
    if len(rest_nbrs) < 5 * b:
        raise PreconditionError(f"{x} has {len(rest_nbrs)} R-neighbors, below {5 * b}")
    order = flower_order(freeze(w), x)
    if order > b:
        _strip_to_loop(w, x)
        log.debug("flower of order %d at %d: looped", order, x)
        return "rr_flower"
    s = find_gallai(w, boundary, x)
    check_gallai(w, boundary, s)
    _apply_gallai(w, s)
    return "rr_gallai"


def reduce_high_degree(g: BoundariedGraph, x: int) -> tuple[BoundariedGraph, str]:
    """Apply the flower or Gallai rule at a B-vertex of R-degree >= 5|B|."""
    if x not in g.boundary:
        raise PreconditionError(f"{x} is not a boundary vertex")
    if g.graph.has_loop(x):
        raise PreconditionError(f"{x} carries a loop; loop cleanup comes first")
    w = thaw(g.graph)
    rule = _high_degree_step(w, g.boundary, x)
    return rebound(g, w, modulator=g.modulator), rule


def _boundary_step(w: nx.Graph, boundary: frozenset[int], trace: dict[str, int]) -> bool:
    b = _bound(boundary)
    for x in sorted(boundary):
        if has_loop(w, x) or not neighbors(w, x):
            continue
        if len(neighbors(w, x) - boundary) >= 5 * b:
            trace[_high_degree_step(w, boundary, x)] += 1
            return True
        if flower_order(freeze(w), x) > b:
            _strip_to_loop(w, x)
            trace["rr_flower"] += 1
            log.debug("flower at %d exceeds %d: looped", x, b)
            return True
    return False


def _require_fvs(g: BoundariedGraph) -> None:
    if g.modulator is None:
        raise KernelInputError("feedback vertex set kernel needs a modulator")
    if not is_forest(g.graph.without(g.modulator)):
        raise KernelInputError("graph minus modulator is not a simple forest")


def kernelize_fvs_fvs(g: BoundariedGraph) -> KernelResult:
    _require_fvs(g)
    lifted = lift_modulator_into_boundary(g)
    boundary = lifted.boundary
    w = thaw(lifted.graph)
    trace = new_trace(*RULES)
    while True:
        _degree_cleanup(w, boundary, trace)
        if _loop_cleanup(w, boundary, trace):
            continue
        if not _boundary_step(w, boundary, trace):
            break

    reduced = rebound(g, w, modulator=boundary, target_class=FOREST)
    log.info("fvs[fvs]: %d -> %d vertices", g.graph.n, reduced.graph.n)
    return make_result(g, reduced, delta=0, trace=trace)


def size_bound(b: int) -> int:
    """Vertices left for a lifted boundary of b: fewer than 5b^2 low-degree R-vertices
    and no more branching ones."""
    b = max(b, 1)
    return b + 10 * b * b


def _is_lone_path(graph: Graph, boundary: frozenset[int], ends: frozenset[int]) -> bool:
    if len(ends) != 2 or not ends <= boundary:
        return False
    a, b = sorted(ends)
    return graph.multiplicity(a, b) == 0


def fixpoint_violations(result: KernelResult) -> list[str]:
    reduced = result.reduced
    graph = reduced.graph
    boundary = reduced.modulator or frozenset()
    b = _bound(boundary)
    out: list[str] = []
    rest = graph.vertices - boundary
    if not is_forest(graph.induced(rest)):
        out.append("G[R] is not a simple forest")
    paths: set[frozenset[int]] = set()
    for v in sorted(rest):
        ends = graph.neighbors(v)
        if graph.degree(v) == 2 and _is_lone_path(graph, boundary, ends) and ends not in paths:
            paths.add(ends)
            continue
        if graph.degree(v) < 3:
            out.append(f"R-vertex {v} has degree {graph.degree(v)}")
    for x in sorted(boundary):
        nbrs = graph.neighbors(x)
        if graph.has_loop(x):
            if nbrs:
                out.append(f"looped {x} keeps {len(nbrs)} neighbors")
            continue
        if len(nbrs - boundary) >= 5 * b:
            out.append(f"{x} has {len(nbrs - boundary)} R-neighbors")
        if nbrs and flower_order(graph, x) > b:
            out.append(f"flower at {x} exceeds {b}")
    if graph.n > size_bound(len(boundary)):
        out.append(f"{graph.n} vertices exceed {size_bound(len(boundary))}")
    return out
