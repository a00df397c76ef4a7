"""Long Cycle, Long Path and Hamiltonicity under a vertex cover modulator.

With B the lifted boundary and R = V - B independent:
- Long Cycle keeps the R-vertices matched into pairs of B-vertices they see
  both of, plus one fixed 4-cycle witness (two R-vertices sharing two B-neighbors)
- Long Path matches R into single B-vertices as well as pairs
- Hamiltonian Cycle/Path: more than 2|B| + 1 vertices rule out every gluing,
  so the answer is a fixed NO-gadget
- the degree-two parameterization contracts adjacent degree-two vertices
  until the rest is independent, then uses the Hamiltonian kernel
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace

from .graph import (
    VERTEX_COVER,
    BoundariedGraph,
    Graph,
    KernelInputError,
    KernelResult,
    PreconditionError,
    lift_modulator_into_boundary,
    make_result,
)
from .kernel_vc import require_vertex_cover
from .matching import Bipartite, Matching, max_matching
from .workgraph import add_edge, neighbors, new_trace, thaw

log = logging.getLogger("bkernel")

HAMILTONIAN = ("hc", "hp")


@dataclass(frozen=True)
class PairMatchingAux:
    bip: Bipartite
    matching: Matching
    # matched R-vertices
    J: frozenset[int]  # noqa: E741
    # R- and B-vertices of the fixed 4-cycle, empty when there is none
    K: frozenset[int] = frozenset()
    B_K: frozenset[int] = frozenset()

    @property
    def kept(self) -> frozenset[int]:
        return self.J | self.K


def _targets(boundary: frozenset[int], *, singletons: bool) -> list[tuple[int, ...]]:
    bs = sorted(boundary)
    out: list[tuple[int, ...]] = []
    if singletons:
        # both path ends may hang off the same B-vertex: (p,) and (p, p) are its two slots
        out.extend(t for p in bs for t in ((p,), (p, p)))
    out.extend(itertools.combinations(bs, 2))
    return out


def four_cycle_witness(g: BoundariedGraph) -> tuple[tuple[int, int], tuple[int, int]] | None:
    """Lexicographically smallest ((v1, v2), (p, q)) with v1, v2 in R sharing B-neighbors p, q."""
    rest = sorted(g.rest)
    for v1, v2 in itertools.combinations(rest, 2):
        common = sorted(g.graph.neighbors(v1) & g.graph.neighbors(v2) & g.boundary)
        if len(common) >= 2:
            return (v1, v2), (common[0], common[1])
    return None


def build_pair_aux(g: BoundariedGraph, *, singletons: bool, witness: bool) -> PairMatchingAux:
    """Auxiliary bipartite graph A (pairs only) or D (singletons and pairs) over R."""
    targets = _targets(g.boundary, singletons=singletons)
    edges = [
        (v, t)
        for v in g.rest
        for t in targets
        if all(p in g.graph.neighbors(v) for p in t)
    ]
    bip = Bipartite.build(g.rest, targets, edges)
    m = max_matching(bip)
    k = b_k = frozenset()
    if witness and (found := four_cycle_witness(g)) is not None:
        k, b_k = frozenset(found[0]), frozenset(found[1])
    return PairMatchingAux(bip=bip, matching=m, J=frozenset(m.mates), K=k, B_K=b_k)


def _drop_unkept(
    g: BoundariedGraph, lifted: BoundariedGraph, aux: PairMatchingAux, keep_one: bool
) -> BoundariedGraph:
    doomed = lifted.rest - aux.kept
    if keep_one and not lifted.boundary and doomed == lifted.rest and doomed:
        doomed = doomed - {min(doomed)}
    graph = lifted.graph.without(doomed)
    log.debug("dropping %d unmatched R-vertices", len(doomed))
    return BoundariedGraph(
        graph=graph,
        boundary=g.boundary,
        modulator=lifted.boundary,
        target_class=VERTEX_COVER,
    )


def kernelize_lc_vc(g: BoundariedGraph) -> KernelResult:
    require_vertex_cover(g)
    lifted = lift_modulator_into_boundary(g)
    aux = build_pair_aux(lifted, singletons=False, witness=True)
    reduced = _drop_unkept(g, lifted, aux, keep_one=False)
    trace = new_trace("rr_long_cycle_matching")
    trace["rr_long_cycle_matching"] = g.graph.n - reduced.graph.n
    log.info("lc[vc]: %d -> %d vertices", g.graph.n, reduced.graph.n)
    return make_result(g, reduced, delta=0, trace=trace)


def kernelize_lp_vc(g: BoundariedGraph) -> KernelResult:
    require_vertex_cover(g)
    lifted = lift_modulator_into_boundary(g)
    aux = build_pair_aux(lifted, singletons=True, witness=False)
    # without a boundary a lone vertex still carries the length-0 path
    reduced = _drop_unkept(g, lifted, aux, keep_one=True)
    trace = new_trace("rr_long_path_matching")
    trace["rr_long_path_matching"] = g.graph.n - reduced.graph.n
    log.info("lp[vc]: %d -> %d vertices", g.graph.n, reduced.graph.n)
    return make_result(g, reduced, delta=0, trace=trace)


def no_gadget(boundary: frozenset[int]) -> BoundariedGraph:
    """B as an independent set plus two isolated non-boundary vertices."""
    nxt = max(boundary, default=-1) + 1
    graph = Graph.build(boundary | {nxt, nxt + 1})
    return BoundariedGraph(
        graph=graph, boundary=boundary, modulator=boundary, target_class=VERTEX_COVER
    )


def _check_which(which: str) -> None:
    if which not in HAMILTONIAN:
        raise KernelInputError(f"expected hc or hp, got {which!r}")


def kernelize_hc_hp_vc(g: BoundariedGraph, which: str) -> KernelResult:
    _check_which(which)
    require_vertex_cover(g)
    lifted = lift_modulator_into_boundary(g)
    trace = new_trace("rr_hamiltonian_no_gadget")
    if g.graph.n <= 2 * len(lifted.boundary) + 1:
        reduced = replace(g, modulator=lifted.boundary, target_class=VERTEX_COVER)
    else:
        reduced = no_gadget(g.boundary)
        trace["rr_hamiltonian_no_gadget"] = 1
        log.debug("%s[vc]: %d vertices exceed %d", which, g.graph.n, 2 * len(lifted.boundary) + 1)
    log.info("%s[vc]: %d -> %d vertices", which, g.graph.n, reduced.graph.n)
    return make_result(g, reduced, delta=None, trace=trace)


def _degree_two_rest(g: BoundariedGraph) -> frozenset[int]:
    mod = g.modulator or frozenset()
    return g.graph.vertices - g.boundary - mod


def _require_degree_two(g: BoundariedGraph) -> None:
    if g.modulator is None:
        raise KernelInputError("degree-two kernel needs a modulator")
    if not g.graph.is_simple:
        raise KernelInputError("hamiltonian kernels need a simple graph")
    bad = sorted(v for v in g.graph.vertices - g.modulator if g.graph.degree(v) != 2)
    if bad:
        raise KernelInputError(f"vertices outside the modulator with degree != 2: {bad[:5]}")


def contract_degree_two(g: BoundariedGraph) -> tuple[BoundariedGraph, int]:
    """Contract adjacent pairs of R_X into the smaller id; returns (graph, contractions).

    A pair whose outer neighbors coincide closes a triangle and is left alone.
    """
    _require_degree_two(g)
    w = thaw(g.graph)
    rest = set(_degree_two_rest(g))
    count = 0
    progress = True
    while progress:
        progress = False
        for u, v in sorted((min(a, b), max(a, b)) for a, b in w.edges if a in rest and b in rest):
            (a,) = neighbors(w, u) - {v}
            (c,) = neighbors(w, v) - {u}
            if a == c:
                continue
            w.remove_node(v)
            add_edge(w, u, c)
            rest.discard(v)
            count += 1
            log.debug("contracted %d into %d", v, u)
            progress = True
            break
    graph = Graph.from_nx(w)
    return replace(g, graph=graph, modulator=(g.modulator or frozenset()) & graph.vertices), count


def kernelize_hc_hp_deg2(g: BoundariedGraph, which: str) -> KernelResult:
    _check_which(which)
    contracted, count = contract_degree_two(g)
    rest = _degree_two_rest(contracted)
    # triangle pairs survive contraction and move into the cover
    stuck = frozenset(v for v in rest if contracted.graph.neighbors(v) & rest)
    mod = (contracted.modulator or frozenset()) | stuck | contracted.boundary
    cover = replace(contracted, modulator=mod)
    inner = kernelize_hc_hp_vc(cover, which)

    graph = inner.reduced.graph
    off_two = frozenset(v for v in graph.vertices if graph.degree(v) != 2)
    reduced = replace(inner.reduced, modulator=off_two, target_class=None)
    trace = {"rr_contract_degree_two": count, **dict(inner.trace)}
    log.info("%s[deg2]: %d -> %d vertices", which, g.graph.n, graph.n)
    return make_result(g, reduced, delta=None, trace=trace)


def size_bound_lc(b: int) -> int:
    return b * b + 2


def size_bound_lp(b: int) -> int:
    return b * b + b


def fixpoint_violations(problem: str, result: KernelResult) -> list[str]:
    if problem not in ("lc", "lp", *HAMILTONIAN):
        raise PreconditionError(f"no path kernel for {problem}")
    reduced = result.reduced
    b = len(reduced.modulator or frozenset())
    rest = reduced.graph.vertices - (reduced.modulator or frozenset())
    out: list[str] = []
    if problem == "lc" and len(rest) > size_bound_lc(b):
        out.append(f"{len(rest)} R-vertices exceed {size_bound_lc(b)}")
    if problem == "lp" and len(rest) > max(size_bound_lp(b), 1):
        out.append(f"{len(rest)} R-vertices exceed {size_bound_lp(b)}")
    if problem in HAMILTONIAN and reduced.graph.n > max(2 * b + 1, len(reduced.boundary) + 2):
        out.append(f"{reduced.graph.n} vertices exceed the Hamiltonian bound")
    return out
