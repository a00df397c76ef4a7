"""Vertex Cover parameterized by feedback vertex set.

After the modulator is lifted into the boundary B and the crown rules are
exhausted, vertices left unmatched by a maximum matching of the forest G[R]
join the boundary (B' = B + I, |I| <= |B|). On that working boundary:

- a component of G[R] on which no chunk causes a conflict is deleted
- a chunk with total conflict >= |B'| is marked: a singleton x gets a pendant
  leaf and loses its R-edges, a pair {x, y} becomes an edge
- adjacent pairs of low R-degree that no chunk can block are deleted
- the leaf/degree-3 path structure t-u-v-w is deleted under the same condition

A chunk is an independent subset of B' with one or two vertices; the conflict
of chunk Z on a tree F is OPT(F - N_F(Z)) + |N_F(Z)| - OPT(F).
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx

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
from .kernel_vc import exhaust_crowns
from .matching import Bipartite, max_matching
from .oracles import vc_forest_dp
from .workgraph import fresh_id, freeze, new_trace, rebound, thaw

log = logging.getLogger("bkernel")

RULES = (
    "rr_remove_isolated",
    "rr_crown_reduce",
    "rr_zero_conflict_component",
    "rr_heavy_chunk",
    "rr_unblockable_pair",
    "rr_unblockable_quad",
)

Chunk = frozenset[int]


@dataclass(frozen=True)
class LeafMarks:
    # boundary vertex -> its pendant leaf
    leaves: Mapping[int, int] = field(default_factory=dict)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.leaves.values())

    def with_leaf(self, x: int, leaf: int) -> LeafMarks:
        return LeafMarks({**self.leaves, x: leaf})


def _forest_matching(forest: Graph) -> dict[int, int]:
    """Maximum matching of a forest, symmetric (both endpoints map to each other)."""
    if not forest.vertices:
        return {}
    color = nx.bipartite.color(forest.to_nx())
    left = [v for v in forest.vertices if color[v] == 0]
    right = [v for v in forest.vertices if color[v] == 1]
    edges = [(u, v) if color[u] == 0 else (v, u) for u, v, _ in forest.edges]
    m = max_matching(Bipartite.build(left, right, edges))
    out = dict(m.mates)
    out.update(m.reverse)
    return out


def perfect_matching_cleanup(g: BoundariedGraph) -> tuple[BoundariedGraph, frozenset[int]]:
    """Move the vertices a maximum matching of G[R] leaves uncovered into the boundary."""
    rest = g.graph.induced(g.rest)
    if not is_forest(rest):
        raise PreconditionError("perfect matching cleanup needs G - B to be a forest")
    mates = _forest_matching(rest)
    widened = g.boundary | (rest.vertices - frozenset(mates))
    return replace(g, boundary=widened), widened


def chunks(graph: Graph, boundary: Iterable[int]) -> list[Chunk]:
    bs = sorted(boundary)
    out: list[Chunk] = [frozenset((x,)) for x in bs]
    out.extend(
        frozenset((x, y))
        for x, y in itertools.combinations(bs, 2)
        if y not in graph.adjacency[x]
    )
    return out


def conf(graph: Graph, component: Iterable[int], chunk: Iterable[int]) -> int:
    f = graph.induced(component)
    z = frozenset(chunk)
    hit = [v for v in f.vertices if graph.adjacency[v] & z]
    return vc_forest_dp(f.without(hit)) + len(hit) - vc_forest_dp(f)


@dataclass(frozen=True)
class ConflictTable:
    components: tuple[frozenset[int], ...]
    chunks: tuple[Chunk, ...]
    # vc_forest_dp of each component
    opt: tuple[int, ...]
    # (component index, chunk) -> conflict; zero entries omitted
    values: Mapping[tuple[int, Chunk], int]

    @classmethod
    def build(
        cls, graph: Graph, boundary: frozenset[int], marks: LeafMarks = LeafMarks()
    ) -> ConflictTable:
        rest = graph.vertices - boundary - marks.vertices
        forest = graph.induced(rest)
        comps = tuple(forest.components())
        cs = tuple(chunks(graph, boundary))
        opt: list[int] = []
        values: dict[tuple[int, Chunk], int] = {}
        for i, comp in enumerate(comps):
            f = forest.induced(comp)
            base = vc_forest_dp(f)
            opt.append(base)
            for z in cs:
                hit = [v for v in comp if graph.adjacency[v] & z]
                if not hit:
                    continue
                c = vc_forest_dp(f.without(hit)) + len(hit) - base
                if c:
                    values[(i, z)] = c
        return cls(components=comps, chunks=cs, opt=tuple(opt), values=values)

    def conf(self, index: int, chunk: Chunk) -> int:
        return self.values.get((index, chunk), 0)

    @cached_property
    def totals(self) -> dict[Chunk, int]:
        out = {z: 0 for z in self.chunks}
        for (_, z), c in self.values.items():
            out[z] += c
        return out

    @property
    def active(self) -> int:
        return sum(self.values.values())

    def zero_components(self) -> list[int]:
        hot = {i for i, _ in self.values}
        return [i for i in range(len(self.components)) if i not in hot]

    def heavy(self, threshold: int) -> list[Chunk]:
        return [z for z in self.chunks if self.totals[z] >= threshold]


@dataclass
class _Work:
    w: nx.Graph
    boundary: frozenset[int]
    marks: LeafMarks = field(default_factory=LeafMarks)

    @property
    def rest(self) -> set[int]:
        return set(self.w.nodes) - self.boundary - self.marks.vertices

    def n_b(self, v: int) -> frozenset[int]:
        return frozenset(u for u in self.w[v] if u in self.boundary)

    def n_r(self, v: int) -> set[int]:
        rest = self.rest
        return {u for u in self.w[v] if u in rest}


def _blockable(work: _Work, u: int, v: int) -> bool:
    """Some chunk sees both u and v."""
    nu, nv = work.n_b(u), work.n_b(v)
    if nu & nv:
        return True
    return any(not work.w.has_edge(a, b) for a in nu for b in nv)


def _attach(w: nx.Graph, v: int, targets: Iterable[int]) -> None:
    w.add_edges_from((v, x) for x in targets)


def _join_outer(w: nx.Graph, t: int, x: int) -> None:
    w.add_edge(t, x)


def _mark_chunk(work: _Work, z: Chunk) -> None:
    if len(z) == 2:
        x, y = sorted(z)
        work.w.add_edge(x, y)
        log.debug("heavy chunk {%d, %d}: edge added", x, y)
        return
    (x,) = z
    if x not in work.marks.leaves:
        leaf = fresh_id(work.w)
        work.w.add_edge(x, leaf)
        work.marks = work.marks.with_leaf(x, leaf)
    doomed = [(x, u) for u in work.n_r(x)]
    work.w.remove_edges_from(doomed)
    log.debug("heavy chunk {%d}: leaf %d, %d R-edges removed", x, work.marks.leaves[x], len(doomed))


def _pair_candidate(work: _Work, u: int, v: int) -> bool:
    rest = work.rest
    if u not in rest or v not in rest or u == v or not work.w.has_edge(u, v):
        return False
    if len(work.n_r(u)) > 2 or len(work.n_r(v)) > 2:
        return False
    return not _blockable(work, u, v)


def _apply_pair(work: _Work, u: int, v: int) -> None:
    nb_u, nb_v = work.n_b(u), work.n_b(v)
    t = min(work.n_r(u) - {v}, default=None)
    x = min(work.n_r(v) - {u}, default=None)
    work.w.remove_nodes_from((u, v))
    if t is not None:
        _attach(work.w, t, nb_v)
    if x is not None:
        _attach(work.w, x, nb_u)
    if t is not None and x is not None:
        _join_outer(work.w, t, x)
    log.debug("unblockable pair %d-%d removed (outer %s, %s)", u, v, t, x)


def _find_pair(work: _Work) -> tuple[int, int] | None:
    rest = work.rest
    for u, v in sorted((min(a, b), max(a, b)) for a, b in work.w.edges if a != b):
        if u in rest and v in rest and _pair_candidate(work, u, v):
            return u, v
    return None


@dataclass(frozen=True)
class Quad:
    t: int
    u: int
    v: int
    w: int


def _quad_candidate(work: _Work, q: Quad) -> bool:
    rest = work.rest
    if len({q.t, q.u, q.v, q.w}) != 4 or not {q.t, q.u, q.v, q.w} <= rest:
        return False
    if not work.w.has_edge(q.u, q.v):
        return False
    if len(work.n_r(q.u)) != 3 or len(work.n_r(q.v)) != 3:
        return False
    if work.n_r(q.t) != {q.u} or work.n_r(q.w) != {q.v}:
        return False
    return not (
        _blockable(work, q.u, q.t) or _blockable(work, q.v, q.w) or _blockable(work, q.t, q.w)
    )


def _apply_quad(work: _Work, q: Quad) -> None:
    p = min(work.n_r(q.u) - {q.t, q.v})
    r = min(work.n_r(q.v) - {q.w, q.u})
    nb_t, nb_w = work.n_b(q.t), work.n_b(q.w)
    work.w.remove_nodes_from((q.t, q.u, q.v, q.w))
    _attach(work.w, p, nb_t)
    _attach(work.w, r, nb_w)
    log.debug("unblockable quad %d-%d-%d-%d removed", q.t, q.u, q.v, q.w)


def _find_quad(work: _Work) -> Quad | None:
    rest = work.rest
    for a, b in sorted((min(a, b), max(a, b)) for a, b in work.w.edges if a != b):
        if a not in rest or b not in rest:
            continue
        for u, v in ((a, b), (b, a)):
            for t in sorted(work.n_r(u) - {v}):
                for x in sorted(work.n_r(v) - {u}):
                    q = Quad(t, u, v, x)
                    if _quad_candidate(work, q):
                        return q
    return None


def _exhaust(work: _Work, trace: dict[str, int]) -> int:
    delta = 0
    while True:
        graph = freeze(work.w)
        table = ConflictTable.build(graph, work.boundary, work.marks)
        zero = table.zero_components()
        if zero:
            i = zero[0]
            work.w.remove_nodes_from(table.components[i])
            delta += table.opt[i]
            trace["rr_zero_conflict_component"] += 1
            log.debug("conflict-free component %s deleted", sorted(table.components[i]))
            continue
        heavy = table.heavy(len(work.boundary))
        if heavy:
            _mark_chunk(work, heavy[0])
            trace["rr_heavy_chunk"] += 1
            continue
        pair = _find_pair(work)
        if pair is not None:
            _apply_pair(work, *pair)
            delta += 1
            trace["rr_unblockable_pair"] += 1
            continue
        quad = _find_quad(work)
        if quad is not None:
            _apply_quad(work, quad)
            delta += 2
            trace["rr_unblockable_quad"] += 1
            continue
        return delta


def _work_from(g: BoundariedGraph, marks: LeafMarks) -> _Work:
    return _Work(w=thaw(g.graph), boundary=g.boundary, marks=marks)


def _rewrap(g: BoundariedGraph, work: _Work) -> BoundariedGraph:
    kept = frozenset(work.w.nodes)
    mod = None if g.modulator is None else g.modulator & kept
    return replace(g, graph=freeze(work.w), modulator=mod)


def rr_zero_conflict_component(
    g: BoundariedGraph, table: ConflictTable
) -> tuple[BoundariedGraph, int]:
    """Delete the first conflict-free component of G[R]; returns the Δ increase."""
    zero = table.zero_components()
    if not zero:
        return g, 0
    i = zero[0]
    return replace(g, graph=g.graph.without(table.components[i])), table.opt[i]


def rr_heavy_chunk(
    g: BoundariedGraph, table: ConflictTable, marks: LeafMarks = LeafMarks()
) -> tuple[BoundariedGraph, LeafMarks]:
    heavy = table.heavy(len(g.boundary))
    if not heavy:
        return g, marks
    work = _work_from(g, marks)
    _mark_chunk(work, heavy[0])
    return _rewrap(g, work), work.marks


def rr_unblockable_pair(
    g: BoundariedGraph,
    pair: tuple[int, int] | None = None,
    marks: LeafMarks = LeafMarks(),
) -> tuple[BoundariedGraph, int]:
    """Delete an adjacent unblockable pair of R-degree <= 2; returns (graph, Δ increase).

    Without an explicit pair the first candidate is used and (g, 0) comes back
    when there is none.
    """
    work = _work_from(g, marks)
    if pair is None:
        pair = _find_pair(work)
        if pair is None:
            return g, 0
    elif not _pair_candidate(work, *pair):
        raise PreconditionError(f"pair {pair} is not an unblockable low-degree R-edge")
    _apply_pair(work, *pair)
    return _rewrap(g, work), 1


def rr_unblockable_quad(
    g: BoundariedGraph, quad: Quad | None = None, marks: LeafMarks = LeafMarks()
) -> tuple[BoundariedGraph, int]:
    work = _work_from(g, marks)
    if quad is None:
        quad = _find_quad(work)
        if quad is None:
            return g, 0
    elif not _quad_candidate(work, quad):
        raise PreconditionError(f"{quad} does not satisfy the degree and blocking conditions")
    _apply_quad(work, quad)
    return _rewrap(g, work), 2


def _require_forest_modulator(g: BoundariedGraph) -> None:
    if g.modulator is None:
        raise KernelInputError("feedback vertex set kernel needs a modulator")
    if not g.graph.is_simple:
        raise KernelInputError("vertex cover kernel needs a simple graph")
    if not is_forest(g.graph.without(g.modulator)):
        raise KernelInputError("graph minus modulator is not a forest")


@dataclass(frozen=True)
class VcFvsRun:
    result: KernelResult
    lifted: frozenset[int]
    # boundary after the perfect matching cleanup
    widened: frozenset[int]
    marks: LeafMarks


def reduce_vc_fvs(g: BoundariedGraph) -> VcFvsRun:
    _require_forest_modulator(g)
    lifted = lift_modulator_into_boundary(g)
    w = thaw(lifted.graph)
    trace = new_trace(*RULES)
    exhaust_crowns(w, lifted.boundary, trace)

    _, widened = perfect_matching_cleanup(replace(lifted, graph=freeze(w)))
    log.debug("matching cleanup moved %s into the boundary", sorted(widened - lifted.boundary))
    work = _Work(w=w, boundary=widened)
    delta = _exhaust(work, trace)

    reduced = rebound(g, w, modulator=widened | work.marks.vertices, target_class=FOREST)
    notes = {
        "widened_boundary": len(widened),
        "leaves": len(work.marks.leaves),
    }
    log.info("vc[fvs]: %d -> %d vertices, delta %d", g.graph.n, reduced.graph.n, delta)
    return VcFvsRun(
        result=make_result(g, reduced, delta=delta, trace=trace, notes=notes),
        lifted=lifted.boundary,
        widened=widened,
        marks=work.marks,
    )


def kernelize_vc_fvs(g: BoundariedGraph) -> KernelResult:
    return reduce_vc_fvs(g).result


def active_bound(b: int) -> int:
    return b * b + (b * (b - 1) // 2) * b


def size_bound(b: int, leaves: int = 0) -> int:
    """Vertex bound for a working boundary of b vertices and the given leaf count."""
    return b + leaves + 14 * (b**2 + b**3)


def fixpoint_violations(run: VcFvsRun) -> list[str]:
    graph = run.result.reduced.graph
    b = len(run.widened)
    out: list[str] = []
    table = ConflictTable.build(graph, run.widened, run.marks)
    if table.active > active_bound(b):
        out.append(f"{table.active} active conflicts exceed {active_bound(b)}")
    rest = graph.vertices - run.widened - run.marks.vertices
    mates = _forest_matching(graph.induced(rest))
    if set(mates) != rest:
        out.append(f"G[R] has no perfect matching: {sorted(rest - set(mates))} uncovered")
    if graph.n > size_bound(b, len(run.marks.leaves)):
        out.append(f"{graph.n} vertices exceed {size_bound(b, len(run.marks.leaves))}")
    if len(run.widened) > 2 * len(run.lifted):
        out.append(f"cleanup boundary of {len(run.widened)} exceeds twice {len(run.lifted)}")
    return out
