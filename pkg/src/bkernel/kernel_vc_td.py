"""Vertex Cover parameterized by a modulator to treedepth at most d.

After lifting the modulator into the boundary B, every component F of G - B
has a decomposition of height <= d with a single root. Components are matched
against chunks, the independent subsets Z of B with at most 2^(d-2) + 1
vertices, through their conflicts conf(F, Z). Components outside the matching
and outside the neighborhood of the Hall violator are solved and deleted.

The survivors are packed into groups of at most |B| components. Each group is
kernelized recursively with its roots added to the boundary at depth d - 1,
and the per-group kernels are glued back together along B. Depth 1 is the
crown kernel.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .graph import (
    BoundariedGraph,
    Graph,
    KernelInputError,
    KernelResult,
    glue,
    lift_modulator_into_boundary,
    make_result,
    restrict_parents,
    shrink_boundary,
    treedepth_class,
)
from .kernel_vc import kernelize_vc_vc
from .matching import Bipartite, HallViolator, Matching, hall_violator, max_matching
from .treedepth import (
    DecompositionError,
    TreedepthDecomposition,
    decomposition_from_parents,
    restrict_decomposition,
    treedepth_decompose,
    vc_bounded_td_dp,
)
from .workgraph import new_trace

if TYPE_CHECKING:
    from .registry import RegularKernel

log = logging.getLogger("bkernel")

RULES = ("rr_delete_unmatched_components", "rr_remove_isolated", "rr_crown_reduce")

Chunk = tuple[int, ...]


def blocking_bound(d: int) -> int:
    """Largest minimal blocking set of a treedepth-d graph."""
    if d < 2:
        raise KernelInputError(f"blocking-set bound needs d >= 2, got {d}")
    return 2 ** (d - 2) + 1


def td_chunks(graph: Graph, boundary: frozenset[int], b: int) -> list[Chunk]:
    """Nonempty independent subsets of the boundary with at most b vertices."""
    bs = sorted(boundary)
    out: list[Chunk] = []
    for size in range(1, min(b, len(bs)) + 1):
        for z in itertools.combinations(bs, size):
            if all(graph.multiplicity(u, v) == 0 for u, v in itertools.combinations(z, 2)):
                out.append(z)
    return out


@dataclass(frozen=True)
class TdChunkSystem:
    d: int
    b: int
    boundary: frozenset[int]
    # components of G - B, largest first, ties broken on the smallest id
    components: tuple[frozenset[int], ...]
    chunks: tuple[Chunk, ...]
    # OPT of each component, by index
    opt: tuple[int, ...]
    # chunks on the left, component indices on the right
    bip: Bipartite
    # chunk -> component, saturating every chunk outside the violator
    matching: Matching
    violator: HallViolator | None
    dec: TreedepthDecomposition = field(repr=False)

    @property
    def kept(self) -> frozenset[int]:
        """Indices of components that are matched or adjacent to the violator."""
        near = frozenset() if self.violator is None else self.violator.neighborhood
        return near | frozenset(self.matching.mates.values())

    @property
    def doomed(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.components)) if i not in self.kept)

    def root(self, i: int) -> int:
        (r,) = self.dec.restricted(self.components[i]).roots
        return r


def _component_order(components: list[frozenset[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted(components, key=lambda c: (-len(c), min(c))))


def _rest_decomposition(lifted: BoundariedGraph, d: int) -> TreedepthDecomposition:
    rest = lifted.graph.induced(lifted.rest)
    if lifted.parents is not None:
        try:
            dec = decomposition_from_parents(rest, lifted.parents)
        except DecompositionError as exc:
            raise KernelInputError(f"invalid treedepth decomposition: {exc}") from exc
        if dec.height > d:
            raise KernelInputError(f"decomposition has height {dec.height}, expected <= {d}")
        return dec
    dec = treedepth_decompose(rest, budget=d)
    if dec is None:
        raise KernelInputError(f"graph minus modulator has treedepth above {d}")
    return dec


def conf_td(
    graph: Graph, component: frozenset[int], chunk: Chunk, dec: TreedepthDecomposition, opt: int
) -> int:
    """OPT(F - N_F(Z)) + |N_F(Z)| - OPT(F)."""
    hit = frozenset(v for v in component if graph.neighbors(v) & set(chunk))
    if not hit:
        return 0
    part = graph.induced(component)
    return vc_bounded_td_dp(part, dec, forbidden=hit) + len(hit) - opt


def build_chunk_system(
    g: BoundariedGraph, d: int, dec: TreedepthDecomposition | None = None
) -> TdChunkSystem:
    """Chunk/component system of an already lifted instance.

    `dec` decomposes g - boundary; without one it is read from g.parents or
    computed with the exact search.
    """
    if d < 2:
        raise KernelInputError(f"chunk system needs d >= 2, got {d}")
    if dec is None:
        dec = _rest_decomposition(g, d)
    graph = g.graph
    b = blocking_bound(d)
    comps = _component_order(graph.induced(g.rest).components())
    chunks = td_chunks(graph, g.boundary, b)

    opt: list[int] = []
    edges: list[tuple[Chunk, int]] = []
    for i, comp in enumerate(comps):
        sub = restrict_decomposition(dec, comp)
        opt.append(vc_bounded_td_dp(graph.induced(comp), sub))
        for z in chunks:
            if conf_td(graph, comp, z, sub, opt[i]) > 0:
                edges.append((z, i))
    bip = Bipartite.build(chunks, range(len(comps)), edges)

    violator = hall_violator(bip, side="left")
    matching = max_matching(bip) if violator is None else violator.matching
    log.debug(
        "chunk system: %d components, %d chunks, %d conflict edges, violator %d",
        len(comps),
        len(chunks),
        len(edges),
        0 if violator is None else len(violator.nodes),
    )
    return TdChunkSystem(
        d=d,
        b=b,
        boundary=g.boundary,
        components=comps,
        chunks=tuple(chunks),
        opt=tuple(opt),
        bip=bip,
        matching=matching,
        violator=violator,
        dec=dec,
    )


def rr_delete_unmatched_components(
    g: BoundariedGraph, sys: TdChunkSystem
) -> tuple[BoundariedGraph, int]:
    """Delete the components neither matched nor next to the violator; returns (g', Δ)."""
    doomed = sys.doomed
    if not doomed:
        return g, 0
    gone = frozenset().union(*(sys.components[i] for i in doomed))
    delta = sum(sys.opt[i] for i in doomed)
    graph = g.graph.without(gone)
    parents = None
    if g.parents is not None:
        parents = restrict_parents(g.parents, graph.vertices - g.boundary)
    mod = None if g.modulator is None else g.modulator - gone
    log.debug("deleted %d unmatched components, offset %d", len(doomed), delta)
    return BoundariedGraph(
        graph=graph,
        boundary=g.boundary,
        modulator=mod,
        target_class=g.target_class,
        parents=parents,
    ), delta


def reduce_component_count(g: BoundariedGraph, d: int) -> tuple[BoundariedGraph, int]:
    """Lift the modulator and delete surplus components; returns (g', Δ).

    The result keeps g's boundary; its modulator is the lifted one.
    """
    lifted = lift_modulator_into_boundary(g)
    sys = build_chunk_system(lifted, d)
    reduced, delta = rr_delete_unmatched_components(lifted, sys)
    if reduced.parents is None:
        parents = restrict_parents(sys.dec.pairs(), reduced.rest)
        reduced = BoundariedGraph(
            graph=reduced.graph,
            boundary=reduced.boundary,
            modulator=reduced.modulator,
            target_class=reduced.target_class,
            parents=parents,
        )
    return shrink_boundary(reduced, g.boundary), delta


def group_components(
    components: tuple[frozenset[int], ...], size: int
) -> list[tuple[frozenset[int], ...]]:
    """Consecutive groups of at most `size` components, in the given order."""
    size = max(size, 1)
    return [components[i : i + size] for i in range(0, len(components), size)]


def _require_modulator(g: BoundariedGraph, d: int) -> None:
    if d < 1:
        raise KernelInputError(f"treedepth bound must be at least 1, got {d}")
    if g.modulator is None:
        raise KernelInputError("treedepth kernel needs a modulator")
    if not g.graph.is_simple:
        raise KernelInputError("vertex cover kernel needs a simple graph")


def kernelize_vc_td(g: BoundariedGraph, d: int) -> KernelResult:
    _require_modulator(g, d)
    if d == 1:
        return kernelize_vc_vc(g)

    lifted = lift_modulator_into_boundary(g)
    border = lifted.boundary
    trace = new_trace(*RULES)
    sys = build_chunk_system(lifted, d)
    pruned, delta = rr_delete_unmatched_components(lifted, sys)
    trace["rr_delete_unmatched_components"] += len(sys.doomed)

    doomed = set(sys.doomed)
    kept = tuple(c for i, c in enumerate(sys.components) if i not in doomed)
    groups = group_components(kept, len(border))
    assembled = BoundariedGraph(graph=pruned.graph.induced(border), boundary=border)
    for idx, group in enumerate(groups):
        body = frozenset().union(*group)
        roots = frozenset(sys.root(sys.components.index(c)) for c in group)
        inner_boundary = border | roots
        piece = BoundariedGraph(
            graph=pruned.graph.induced(border | body),
            boundary=inner_boundary,
            modulator=inner_boundary,
            target_class=treedepth_class(d - 1),
            parents=restrict_parents(sys.dec.pairs(), body - roots),
        )
        inner = kernelize_vc_td(piece, d - 1)
        delta += inner.delta or 0
        for rule, count in inner.trace:
            trace[rule] = trace.get(rule, 0) + count
        log.debug(
            "group %d: %d components, %d -> %d vertices",
            idx,
            len(group),
            piece.graph.n,
            inner.reduced.graph.n,
        )
        assembled = BoundariedGraph(
            graph=glue(assembled, shrink_boundary(inner.reduced, border)), boundary=border
        )

    graph = assembled.graph
    reduced = BoundariedGraph(
        graph=graph,
        boundary=g.boundary,
        modulator=border,
        target_class=treedepth_class(d),
        parents=restrict_parents(sys.dec.pairs(), graph.vertices - border),
    )
    log.info("vc[td:%d]: %d -> %d vertices", d, g.graph.n, graph.n)
    return make_result(
        g,
        reduced,
        delta=delta,
        trace=trace,
        notes={"components": len(sys.components), "groups": len(groups)},
    )


def regular_kernel_vc_td(
    graph: Graph, modulator: frozenset[int], d: int, ell: int
) -> RegularKernel:
    """Regular kernel for "vertex cover of size at most ell" from the td kernel."""
    from .registry import derive_regular_kernel

    return derive_regular_kernel("vc", f"td:{d}", graph, modulator, ell)


def size_bound(b: int, d: int, *, c: int = 30) -> int:
    return c * max(b, 1) ** (2 ** (d - 1))


def fixpoint_violations(result: KernelResult, d: int) -> list[str]:
    """The output decomposition must be valid with height <= d, and the size in bound."""
    reduced = result.reduced
    mod = reduced.modulator or frozenset()
    out: list[str] = []
    rest = reduced.graph.induced(reduced.graph.vertices - mod)
    if d >= 2:
        try:
            dec = decomposition_from_parents(rest, reduced.parents or ())
        except DecompositionError as exc:
            out.append(f"output decomposition invalid: {exc}")
        else:
            if dec.height > d:
                out.append(f"output decomposition has height {dec.height} > {d}")
    if rest.n > size_bound(len(mod), d):
        out.append(f"{rest.n} vertices outside the modulator exceed {size_bound(len(mod), d)}")
    return out
