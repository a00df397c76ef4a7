"""Kernel registry.

Maps a (problem, parameter) pair to its boundaried kernelization, the size and
fixpoint checks run after it, and the regular kernel derived from it with an
empty boundary. Pairs without finite integer index are refused with a reason.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import partial

from . import kernel_fvs, kernel_paths, kernel_vc, kernel_vc_fvs, kernel_vc_td
from .graph import (
    FOREST,
    VERTEX_COVER,
    BoundariedGraph,
    Graph,
    KernelResult,
    TargetClass,
    treedepth_class,
)
from .oracles import DECIDE, MAXIMIZE, PROBLEM_KINDS, OptValue

log = logging.getLogger("bkernel")

Check = Callable[[BoundariedGraph, KernelResult], list[str]]


class UnsupportedCombination(RuntimeError):
    def __init__(self, problem: str, param: str, reason: str) -> None:
        super().__init__(f"{problem}/{param}: {reason}")
        self.problem = problem
        self.param = param
        self.reason = reason


@dataclass(frozen=True)
class Param:
    name: str
    depth: int | None = None

    NAMES = ("vc", "fvs", "td", "deg2")

    @classmethod
    def parse(cls, text: str) -> Param:
        name, _, depth = text.partition(":")
        if name not in cls.NAMES:
            raise ValueError(f"unknown parameterization: {text!r}")
        if name == "td":
            if not depth.isdigit() or int(depth) < 1:
                raise ValueError(f"td needs a depth >= 1, e.g. td:2 (got {text!r})")
            return cls("td", int(depth))
        if depth:
            raise ValueError(f"{name} takes no argument: {text!r}")
        return cls(name)

    def __str__(self) -> str:
        return f"td:{self.depth}" if self.name == "td" else self.name

    @property
    def target_class(self) -> TargetClass | None:
        if self.name == "vc":
            return VERTEX_COVER
        if self.name == "fvs":
            return FOREST
        if self.name == "td":
            assert self.depth is not None
            return treedepth_class(self.depth)
        return None


@dataclass(frozen=True)
class KernelSpec:
    problem: str
    param: Param
    run: Callable[[BoundariedGraph], KernelResult]
    check: Check

    @property
    def key(self) -> str:
        return f"{self.problem}/{self.param}"

    def violations(self, source: BoundariedGraph, result: KernelResult) -> list[str]:
        return self.check(source, result)


EXCLUDED: dict[tuple[str, str], str] = {
    ("ce", "ce"): (
        "Cluster Editing has no finite integer index: cliques of different sizes "
        "behind one boundary vertex are pairwise non-equivalent (family ce-cliques)"
    ),
    ("ce", "cvd"): (
        "Cluster Editing by cluster vertex deletion has no finite integer index: "
        "the clique family behind one boundary vertex separates every pair (family ce-cliques)"
    ),
    ("mc", "vc"): (
        "Max Cut by vertex cover has no finite integer index: complete bipartite "
        "gadgets on an independent rest are pairwise non-equivalent (family mc-bipartite)"
    ),
    ("tds", "vc"): (
        "Tree Deletion Set by vertex cover has no finite integer index: "
        "stars of different sizes at the boundary are pairwise non-equivalent (family tds-star)"
    ),
    ("tds", "tds"): (
        "Tree Deletion Set by its own solution size has no finite integer index: "
        "trees hanging from the boundary are pairwise non-equivalent (family tds-tree)"
    ),
    ("lc", "deg2"): (
        "Long Cycle by degree-two modulator has no finite integer index: boundary paths "
        "of different lengths are pairwise non-equivalent (family lc-deg2)"
    ),
    ("lp", "deg2"): (
        "Long Path by degree-two modulator has no finite integer index: boundary paths "
        "of different lengths are pairwise non-equivalent (family lp-deg2)"
    ),
    ("ds", "vc"): (
        "Dominating Set by vertex cover has no single-exponential index: subset families "
        "over q boundary vertices give doubly exponentially many classes (family ds-subsets)"
    ),
}


def _check_vc_vc(source: BoundariedGraph, result: KernelResult) -> list[str]:
    out = kernel_vc.fixpoint_violations(result)
    bound = kernel_vc.size_bound(source)
    if result.reduced.graph.n > bound:
        out.append(f"{result.reduced.graph.n} vertices exceed 2(|B|+k) = {bound}")
    return out


def _check_vc_fvs(source: BoundariedGraph, result: KernelResult) -> list[str]:
    # the fixpoint needs the working boundary and leaf marks of the run
    return kernel_vc_fvs.fixpoint_violations(kernel_vc_fvs.reduce_vc_fvs(source))


def _check_fvs_fvs(source: BoundariedGraph, result: KernelResult) -> list[str]:
    return kernel_fvs.fixpoint_violations(result)


def _check_paths(problem: str, source: BoundariedGraph, result: KernelResult) -> list[str]:
    return kernel_paths.fixpoint_violations(problem, result)


def _check_deg2(source: BoundariedGraph, result: KernelResult) -> list[str]:
    graph = result.reduced.graph
    mod = result.reduced.modulator or frozenset()
    off = sorted(v for v in graph.vertices - mod if graph.degree(v) != 2)
    return [f"vertices of degree != 2 outside the modulator: {off[:5]}"] if off else []


def _check_vc_td(d: int, source: BoundariedGraph, result: KernelResult) -> list[str]:
    return kernel_vc_td.fixpoint_violations(result, d)


def _specs() -> dict[tuple[str, str], KernelSpec]:
    out = [
        KernelSpec("vc", Param("vc"), kernel_vc.kernelize_vc_vc, _check_vc_vc),
        KernelSpec("vc", Param("fvs"), kernel_vc_fvs.kernelize_vc_fvs, _check_vc_fvs),
        KernelSpec("fvs", Param("fvs"), kernel_fvs.kernelize_fvs_fvs, _check_fvs_fvs),
        KernelSpec("lc", Param("vc"), kernel_paths.kernelize_lc_vc, partial(_check_paths, "lc")),
        KernelSpec("lp", Param("vc"), kernel_paths.kernelize_lp_vc, partial(_check_paths, "lp")),
    ]
    for which in kernel_paths.HAMILTONIAN:
        out.append(
            KernelSpec(
                which,
                Param("vc"),
                partial(kernel_paths.kernelize_hc_hp_vc, which=which),
                partial(_check_paths, which),
            )
        )
        out.append(
            KernelSpec(
                which,
                Param("deg2"),
                partial(kernel_paths.kernelize_hc_hp_deg2, which=which),
                _check_deg2,
            )
        )
    return {(s.problem, s.param.name): s for s in out}


SUPPORTED = _specs()


def supported_pairs() -> list[str]:
    return sorted([*(s.key for s in SUPPORTED.values()), "vc/td:<d>"])


def lookup(problem: str, param: str | Param) -> KernelSpec:
    """The kernel for (problem, param), or UnsupportedCombination with the reason."""
    text = str(param)
    # some excluded parameters (ce, cvd, tds) have no Param of their own
    if (problem, text) in EXCLUDED:
        raise UnsupportedCombination(problem, text, EXCLUDED[(problem, text)])
    try:
        p = param if isinstance(param, Param) else Param.parse(param)
    except ValueError as exc:
        raise UnsupportedCombination(problem, text, str(exc)) from None
    if (problem, p.name) in EXCLUDED:
        raise UnsupportedCombination(problem, text, EXCLUDED[(problem, p.name)])
    if problem == "vc" and p.name == "td":
        assert p.depth is not None
        return KernelSpec(
            "vc",
            p,
            partial(kernel_vc_td.kernelize_vc_td, d=p.depth),
            partial(_check_vc_td, p.depth),
        )
    spec = SUPPORTED.get((problem, p.name))
    if spec is None:
        raise UnsupportedCombination(problem, text, "no boundaried kernel is implemented")
    return spec


@dataclass(frozen=True)
class RegularKernel:
    instance: BoundariedGraph
    # sought value for the kernel; None for decision problems
    ell: int | None
    delta: int | None
    # set when the instance was replaced by a constant YES/NO instance
    decided: bool | None = None
    result: KernelResult | None = None


def _constant_no(problem: str) -> tuple[Graph, frozenset[int], int]:
    if problem == "vc":
        return Graph.build([0, 1], [(0, 1)]), frozenset({0}), 0
    if problem == "fvs":
        return Graph.build([0, 1, 2], [(0, 1), (1, 2), (0, 2)]), frozenset({0}), 0
    # no cycle and no path with an edge
    return Graph.build([0]), frozenset({0}), 1


def _constant_yes(problem: str) -> tuple[Graph, frozenset[int], int]:
    return Graph.build([0]), frozenset({0}), 0


def _constant(
    problem: str, spec: KernelSpec, answer: bool, delta: int | None, result: KernelResult
) -> RegularKernel:
    graph, mod, ell = (_constant_yes if answer else _constant_no)(problem)
    log.debug("%s: replaced by a constant %s instance", spec.key, "YES" if answer else "NO")
    instance = BoundariedGraph(graph=graph, modulator=mod, target_class=spec.param.target_class)
    return RegularKernel(instance=instance, ell=ell, delta=delta, decided=answer, result=result)


def derive_regular_kernel(
    problem: str,
    param: str | Param,
    graph: Graph,
    modulator: frozenset[int],
    ell: int | None,
    *,
    parents: tuple[tuple[int, int], ...] | None = None,
) -> RegularKernel:
    """Run the boundaried kernel with an empty boundary and shift the target by Δ.

    Minimization asks OPT <= ell, maximization OPT >= ell. Targets that fall
    outside what the kernel can express become constant instances.
    """
    spec = lookup(problem, param)
    source = BoundariedGraph(
        graph=graph,
        boundary=frozenset(),
        modulator=frozenset(modulator),
        target_class=spec.param.target_class,
        parents=parents,
    )
    result = spec.run(source)
    reduced = result.reduced
    delta = result.delta
    kind = PROBLEM_KINDS[problem]
    if kind == DECIDE or ell is None:
        return RegularKernel(instance=reduced, ell=ell, delta=delta, result=result)

    shifted = ell - (delta or 0)
    n = reduced.graph.n
    if kind == MAXIMIZE:
        if shifted > n:
            return _constant(problem, spec, False, delta, result)
        if shifted <= 0 and problem == "lp" and n:
            return _constant(problem, spec, True, delta, result)
        return RegularKernel(instance=reduced, ell=shifted, delta=delta, result=result)

    if shifted < 0:
        return _constant(problem, spec, False, delta, result)
    return RegularKernel(instance=reduced, ell=min(shifted, n), delta=delta, result=result)


def meets_target(problem: str, value: OptValue, ell: int | None) -> bool:
    """Answer of the decision version: OPT <= ell, OPT >= ell, or YES."""
    kind = PROBLEM_KINDS[problem]
    if kind == DECIDE or ell is None:
        return value.is_finite and value.value == 1
    if not value.is_finite:
        # +inf never fits under ell, -inf never reaches it
        return False
    assert value.value is not None
    return value.value >= ell if kind == MAXIMIZE else value.value <= ell
