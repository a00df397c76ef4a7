"""Boundaried multigraphs.

Provides:
- Graph: vertex ids plus edge multiplicities (loops allowed, multiplicity 1 or 2)
- BoundariedGraph: a graph with a boundary, an optional modulator and target class
- gluing, boundary shrinking, modulator lifting
- validation diagnostics and boundary-pinned isomorphism for small graphs
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx

log = logging.getLogger("bkernel")

Edge = tuple[int, int, int]


class GraphError(ValueError):
    pass


class PreconditionError(GraphError):
    pass


class KernelInputError(GraphError):
    pass


class CapExceededError(RuntimeError):
    pass


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: frozenset[int]
    edges: tuple[Edge, ...] = ()

    @classmethod
    def build(
        cls,
        vertices: Iterable[int],
        edges: Iterable[tuple[int, int] | tuple[int, int, int]] = (),
    ) -> Graph:
        """Build from pairs (multiplicity 1) or triples; repeated pairs keep the max."""
        mults: dict[tuple[int, int], int] = {}
        for e in edges:
            u, v = e[0], e[1]
            m = e[2] if len(e) == 3 else 1
            k = edge_key(u, v)
            mults[k] = max(mults.get(k, 0), m)
        return cls.from_mults(vertices, mults)

    @classmethod
    def from_mults(cls, vertices: Iterable[int], mults: Mapping[tuple[int, int], int]) -> Graph:
        edges = tuple(sorted((u, v, m) for (u, v), m in mults.items() if m > 0))
        return cls(vertices=frozenset(vertices), edges=edges)

    @classmethod
    def from_nx(cls, g: nx.Graph) -> Graph:
        mults = {edge_key(u, v): int(d.get("mult", 1)) for u, v, d in g.edges(data=True)}
        return cls.from_mults(g.nodes, mults)

    def to_nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(sorted(self.vertices))
        for u, v, m in self.edges:
            g.add_edge(u, v, mult=m)
        return g

    @cached_property
    def mults(self) -> dict[tuple[int, int], int]:
        return {(u, v): m for u, v, m in self.edges}

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v, _ in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return {v: frozenset(ns) for v, ns in adj.items()}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return sum(m for _, _, m in self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def multiplicity(self, u: int, v: int) -> int:
        return self.mults.get(edge_key(u, v), 0)

    def has_loop(self, v: int) -> bool:
        return (v, v) in self.mults

    def degree(self, v: int) -> int:
        """Number of edge ends at v; a loop counts twice."""
        d = sum(self.multiplicity(v, u) for u in self.adjacency[v])
        return d + (2 if self.has_loop(v) else 0)

    @property
    def is_simple(self) -> bool:
        return all(u != v and m == 1 for u, v, m in self.edges)

    def induced(self, keep: Iterable[int]) -> Graph:
        ks = frozenset(keep) & self.vertices
        return Graph(
            vertices=ks,
            edges=tuple(e for e in self.edges if e[0] in ks and e[1] in ks),
        )

    def without(self, drop: Iterable[int]) -> Graph:
        return self.induced(self.vertices - frozenset(drop))

    def components(self) -> list[frozenset[int]]:
        """Connected components ordered by their smallest vertex id."""
        comps = [frozenset(c) for c in nx.connected_components(self.to_nx())]
        return sorted(comps, key=min)


@dataclass(frozen=True)
class TargetClass:
    kind: str
    depth: int | None = None

    KINDS = ("independent", "vc", "forest", "td")

    @classmethod
    def parse(cls, text: str) -> TargetClass:
        parts = text.split()
        if not parts or parts[0] not in cls.KINDS:
            raise GraphError(f"unknown target class: {text!r}")
        if parts[0] == "td":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise GraphError(f"td class needs a depth >= 1: {text!r}")
            return cls("td", int(parts[1]))
        if len(parts) != 1:
            raise GraphError(f"unexpected class arguments: {text!r}")
        return cls(parts[0])

    def __str__(self) -> str:
        return f"td {self.depth}" if self.kind == "td" else self.kind


INDEPENDENT = TargetClass("independent")
VERTEX_COVER = TargetClass("vc")
FOREST = TargetClass("forest")


def treedepth_class(d: int) -> TargetClass:
    return TargetClass("td", d)


@dataclass(frozen=True)
class BoundariedGraph:
    graph: Graph
    boundary: frozenset[int] = frozenset()
    modulator: frozenset[int] | None = None
    target_class: TargetClass | None = None
    # parent pointers (child, parent) of a treedepth decomposition of graph - modulator;
    # roots are the uncovered vertices
    parents: tuple[tuple[int, int], ...] | None = None

    @property
    def rest(self) -> frozenset[int]:
        """Vertices outside the boundary."""
        return self.graph.vertices - self.boundary


@dataclass(frozen=True)
class KernelStats:
    n_in: int
    m_in: int
    n_out: int
    m_out: int


@dataclass(frozen=True)
class KernelResult:
    reduced: BoundariedGraph
    delta: int | None
    trace: tuple[tuple[str, int], ...] = ()
    stats: KernelStats | None = None
    notes: dict[str, int] = field(default_factory=dict)

    def rule_count(self, name: str) -> int:
        return sum(c for r, c in self.trace if r == name)


def make_result(
    source: BoundariedGraph,
    reduced: BoundariedGraph,
    *,
    delta: int | None,
    trace: Mapping[str, int],
    notes: Mapping[str, int] | None = None,
) -> KernelResult:
    stats = KernelStats(
        n_in=source.graph.n,
        m_in=source.graph.m,
        n_out=reduced.graph.n,
        m_out=reduced.graph.m,
    )
    return KernelResult(
        reduced=reduced,
        delta=delta,
        trace=tuple(trace.items()),
        stats=stats,
        notes=dict(notes or {}),
    )


def glue(g: BoundariedGraph, h: BoundariedGraph) -> Graph:
    """Glue h onto g along the shared boundary ids.

    Vertices of h that collide with g's ids outside B ∩ C get fresh ids.
    An edge present on both sides keeps the larger multiplicity.
    """
    shared = g.boundary & h.boundary
    gv = g.graph.vertices
    rename: dict[int, int] = {}
    nxt = max(gv | h.graph.vertices, default=-1) + 1
    for v in sorted(h.graph.vertices):
        if v in shared:
            rename[v] = v
        elif v in gv:
            rename[v] = nxt
            nxt += 1
        else:
            rename[v] = v

    if not h.graph.edges and h.graph.vertices <= shared:
        return g.graph

    mults = dict(g.graph.mults)
    for u, v, m in h.graph.edges:
        k = edge_key(rename[u], rename[v])
        mults[k] = max(mults.get(k, 0), m)
    return Graph.from_mults(gv | frozenset(rename.values()), mults)


def glue_boundaried(g: BoundariedGraph, h: BoundariedGraph) -> BoundariedGraph:
    return BoundariedGraph(graph=glue(g, h), boundary=g.boundary | h.boundary)


def shrink_boundary(g: BoundariedGraph, b: Iterable[int]) -> BoundariedGraph:
    keep = frozenset(b)
    if not keep <= g.boundary:
        extra = sorted(keep - g.boundary)
        raise PreconditionError(f"new boundary is not a subset of the old one: {extra}")
    return replace(g, boundary=keep)


def restrict_parents(
    parents: Iterable[tuple[int, int]], keep: frozenset[int]
) -> tuple[tuple[int, int], ...]:
    """Re-parent every kept vertex to its nearest kept ancestor."""
    up = dict(parents)
    out: list[tuple[int, int]] = []
    for child in sorted(keep):
        p = up.get(child)
        while p is not None and p not in keep:
            p = up.get(p)
        if p is not None:
            out.append((child, p))
    return tuple(out)


def induced_subgraph(g: BoundariedGraph, vertices: Iterable[int]) -> BoundariedGraph:
    keep = frozenset(vertices) & g.graph.vertices
    mod = None if g.modulator is None else g.modulator & keep
    parents = g.parents
    if parents is not None:
        parents = restrict_parents(parents, keep - (mod or frozenset()))
    return replace(
        g, graph=g.graph.induced(keep), boundary=g.boundary & keep, modulator=mod, parents=parents
    )


def lift_modulator_into_boundary(g: BoundariedGraph) -> BoundariedGraph:
    if g.modulator is None:
        raise KernelInputError("missing modulator")
    lifted = g.boundary | g.modulator
    parents = g.parents
    if parents is not None:
        parents = restrict_parents(parents, g.graph.vertices - lifted)
    return replace(g, boundary=lifted, modulator=lifted, parents=parents)


def is_independent(graph: Graph) -> bool:
    return not graph.edges


def is_forest(graph: Graph) -> bool:
    if not graph.is_simple:
        return False
    return nx.is_forest(graph.to_nx()) if graph.vertices else True


def in_target_class(graph: Graph, cls: TargetClass) -> bool:
    if cls.kind in ("independent", "vc"):
        return is_independent(graph)
    if cls.kind == "forest":
        return is_forest(graph)
    from .treedepth import treedepth_decompose

    assert cls.depth is not None
    return graph.is_simple and treedepth_decompose(graph, budget=cls.depth) is not None


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def validate(g: BoundariedGraph) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    vs = g.graph.vertices
    for u, v, m in g.graph.edges:
        if u not in vs or v not in vs:
            out.append(Diagnostic("edge-endpoint", f"edge {u}-{v} has an unknown endpoint"))
        if u == v and m != 1:
            out.append(Diagnostic("multiplicity", f"loop at {u} has multiplicity {m}"))
        elif m not in (1, 2):
            out.append(Diagnostic("multiplicity", f"edge {u}-{v} has multiplicity {m}"))
    if not g.boundary <= vs:
        out.append(Diagnostic("boundary", f"boundary ids not in graph: {sorted(g.boundary - vs)}"))
    if g.modulator is not None and not g.modulator <= vs:
        out.append(
            Diagnostic("modulator", f"modulator ids not in graph: {sorted(g.modulator - vs)}")
        )
    if out:
        return out

    if g.target_class is not None and g.modulator is not None:
        rest = g.graph.without(g.modulator)
        if not in_target_class(rest, g.target_class):
            out.append(
                Diagnostic(
                    "class",
                    f"graph minus modulator is not in class {g.target_class}",
                )
            )
    if g.parents is not None:
        from .treedepth import DecompositionError, decomposition_from_parents

        try:
            decomposition_from_parents(g.graph.without(g.modulator or ()), g.parents)
        except DecompositionError as e:
            out.append(Diagnostic("decomposition", str(e)))
    return out


def _pinned_nx(g: BoundariedGraph) -> nx.Graph:
    out = g.graph.to_nx()
    for v in out.nodes:
        out.nodes[v]["pin"] = v if v in g.boundary else -1
    return out


def are_isomorphic_small(
    g: BoundariedGraph, h: BoundariedGraph, *, cap: int | None = None
) -> bool:
    """True iff an isomorphism exists that fixes every boundary vertex by id."""
    if cap is None:
        from .settings import load_settings

        cap = load_settings().caps.iso
    if g.graph.n > cap or h.graph.n > cap:
        raise CapExceededError(f"isomorphism check limited to {cap} vertices")
    if g.boundary != h.boundary or g.graph.n != h.graph.n or g.graph.m != h.graph.m:
        return False
    return nx.is_isomorphic(
        _pinned_nx(g),
        _pinned_nx(h),
        node_match=lambda a, b: a["pin"] == b["pin"],
        edge_match=lambda a, b: a["mult"] == b["mult"],
    )
