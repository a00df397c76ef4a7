"""Gluing-equivalence fuzzing.

A kernel passes on an instance G when OPT(G + H) = OPT(G' + H) + Δ for every
sampled attachment H (plain equality for the Hamiltonian decision problems).
Sampling cannot cover "every H", so small boundaries also get the exhaustive
attachment set; a failure is shrunk to a minimal attachment before reporting.

Work items are keyed by (seed, index), never by scheduling order, so a
campaign replays identically with any worker count.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import partial
from pathlib import Path

from . import __version__
from .bkg import write_bkg
from .config import FuzzConfig
from .graph import (
    BoundariedGraph,
    Graph,
    KernelResult,
    TargetClass,
    glue,
    glue_boundaried,
    shrink_boundary,
)
from .oracles import MULTIGRAPH_OK, OptValue, matches, opt_exact
from .registry import Param, lookup
from .reports import CampaignSummary, EquivalenceVerdict
from .settings import OracleCaps, load_settings
from .verdicts import init_db, insert_verdict

log = logging.getLogger("bkernel")

Sink = Callable[[EquivalenceVerdict], None]


def _rng(cfg: FuzzConfig, *salt: object) -> random.Random:
    return random.Random("/".join(str(s) for s in (cfg.seed, *salt)))


# --- instances ----------------------------------------------------------------------


def _pairs(rng: random.Random, vs: Iterable[int], density: float) -> list[tuple[int, int]]:
    return [(u, v) for u, v in itertools.combinations(sorted(vs), 2) if rng.random() < density]


def _forest(rng: random.Random, rest: list[int], density: float) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []
    for n, v in enumerate(rest[1:], start=1):
        if rng.random() < density:
            edges.append((rng.choice(rest[:n]), v))
    return edges


def _td_forest(
    rng: random.Random, rest: list[int], d: int, density: float
) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Random edges inside a random decomposition of height <= d; returns (edges, parents)."""
    depth: dict[int, int] = {}
    parent: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for v in rest:
        open_ = [u for u in depth if depth[u] < d]
        if open_ and rng.random() < 0.8:
            p = rng.choice(open_)
            parent[v] = p
            depth[v] = depth[p] + 1
            if rng.random() < 0.8:
                edges.append((p, v))
            anc = parent.get(p)
            while anc is not None:
                if rng.random() < density:
                    edges.append((anc, v))
                anc = parent.get(anc)
        else:
            depth[v] = 1
    return edges, sorted(parent.items())


def _degree_two(
    rng: random.Random, rest: list[int], mod: list[int]
) -> list[tuple[int, int]]:
    """Chains of rest vertices whose ends hang on two distinct modulator vertices."""
    order = list(rest)
    rng.shuffle(order)
    edges: list[tuple[int, int]] = []
    while order:
        size = min(len(order), rng.randint(1, 4))
        chain, order = order[:size], order[size:]
        a, c = rng.sample(mod, 2)
        edges.extend(itertools.pairwise([a, *chain, c]))
    return edges


def gen_instance(cfg: FuzzConfig, index: int) -> BoundariedGraph:
    """Class-respecting random instance, deterministic in (cfg.seed, index).

    The boundary is 0..b-1, the modulator 0..b+k-1 (it contains the boundary),
    the rest follows the parameterization's class.
    """
    rng = _rng(cfg, "instance", index)
    p = cfg.parsed_param
    b = rng.randint(0, cfg.max_boundary)
    k = rng.randint(0, cfg.max_k)
    if p.name == "deg2" and b + k < 2:
        k = 2 - b
    n = rng.randint(min(b + k + 1, cfg.max_n), cfg.max_n)
    n = max(n, b + k)
    boundary = frozenset(range(b))
    mod = list(range(b + k))
    rest = list(range(b + k, n))

    edges: list[tuple[int, int] | tuple[int, int, int]] = []
    edges.extend(_pairs(rng, mod, cfg.rest_density))
    parents: list[tuple[int, int]] | None = None
    target: TargetClass | None = p.target_class
    # loops and double edges at the modulator only where the problem reads multigraphs
    multi = p.name == "fvs" and cfg.problem in MULTIGRAPH_OK
    if p.name == "deg2":
        edges.extend(_degree_two(rng, rest, mod))
    else:
        if p.name == "fvs":
            edges.extend(_forest(rng, rest, cfg.rest_density))
        elif p.name == "td":
            assert p.depth is not None
            inner, parents = _td_forest(rng, rest, p.depth, cfg.rest_density)
            edges.extend(inner)
        for x in mod:
            for v in rest:
                if rng.random() < cfg.cross_density:
                    mult = 2 if multi and rng.random() < 0.15 else 1
                    edges.append((x, v, mult))
        if multi:
            edges.extend((x, x, 1) for x in mod if rng.random() < 0.1)

    return BoundariedGraph(
        graph=Graph.build(range(n), edges),
        boundary=boundary,
        modulator=frozenset(mod),
        target_class=target,
        parents=None if parents is None else tuple(parents),
    )


# --- attachments --------------------------------------------------------------------


def _fresh_ids(boundary: frozenset[int], t: int) -> list[int]:
    start = max(boundary, default=-1) + 1
    return list(range(start, start + t))


def _structured(boundary: frozenset[int], kind: int, t: int) -> Graph:
    bs = sorted(boundary)
    if kind == 0:
        return Graph.build(bs)
    if kind == 1:
        return Graph.build(bs, itertools.combinations(bs, 2))
    fresh = _fresh_ids(boundary, t)
    if kind == 2:
        if not fresh:
            return Graph.build(bs)
        return Graph.build([*bs, fresh[0]], [(fresh[0], x) for x in bs])
    # a path through the boundary, with fresh vertices between neighbors while they last
    walk: list[int] = []
    spare = iter(fresh)
    for n, x in enumerate(bs):
        if n and (f := next(spare, None)) is not None:
            walk.append(f)
        walk.append(x)
    return Graph.build(walk, itertools.pairwise(walk))


STRUCTURED = 4


def gen_attachment(
    boundary: frozenset[int], cfg: FuzzConfig, index: int, *, room: int | None = None
) -> BoundariedGraph:
    """Attachment number `index` over `boundary`.

    The first few are structured (empty, clique on B, star into B, path through
    B); the rest are random at the configured densities. `room` caps the
    number of fresh vertices.
    """
    t_max = cfg.max_fresh if room is None else max(0, min(cfg.max_fresh, room))
    if index < STRUCTURED:
        graph = _structured(boundary, index, t_max)
    else:
        rng = _rng(cfg, "attachment", sorted(boundary), index)
        t = rng.randint(0, t_max)
        density = cfg.densities[index % len(cfg.densities)]
        vs = [*sorted(boundary), *_fresh_ids(boundary, t)]
        graph = Graph.build(vs, _pairs(rng, vs, density))
    return BoundariedGraph(graph=graph, boundary=boundary)


def exhaustive_attachments(boundary: frozenset[int], t: int) -> Iterator[BoundariedGraph]:
    """Every simple graph on B plus s fresh vertices, for s = 0..t."""
    for s in range(t + 1):
        vs = [*sorted(boundary), *_fresh_ids(boundary, s)]
        pairs = list(itertools.combinations(vs, 2))
        for mask in range(1 << len(pairs)):
            edges = [pr for n, pr in enumerate(pairs) if mask >> n & 1]
            yield BoundariedGraph(graph=Graph.build(vs, edges), boundary=boundary)


# --- equivalence ---------------------------------------------------------------------


def _optima(
    problem: str,
    g: BoundariedGraph,
    reduced: BoundariedGraph,
    h: BoundariedGraph,
    caps: OracleCaps | None,
) -> tuple[OptValue, OptValue]:
    return (
        opt_exact(problem, glue(g, h), caps=caps),
        opt_exact(problem, glue(reduced, h), caps=caps),
    )


def _fails(
    problem: str,
    g: BoundariedGraph,
    result: KernelResult,
    h: BoundariedGraph,
    caps: OracleCaps | None,
) -> bool:
    orig, red = _optima(problem, g, result.reduced, h, caps)
    return not matches(problem, orig, red, result.delta)


def shrink_attachment(
    problem: str,
    g: BoundariedGraph,
    result: KernelResult,
    h: BoundariedGraph,
    *,
    caps: OracleCaps | None = None,
) -> BoundariedGraph:
    """Greedily drop fresh vertices, then edges, while the mismatch persists."""
    cur = h
    while True:
        candidates = [
            replace(cur, graph=cur.graph.without([v]))
            for v in sorted(cur.graph.vertices - cur.boundary)
        ]
        for u, v, _ in cur.graph.edges:
            mults = {key: m for key, m in cur.graph.mults.items() if key != (u, v)}
            candidates.append(replace(cur, graph=Graph.from_mults(cur.graph.vertices, mults)))
        smaller = next((c for c in candidates if _fails(problem, g, result, c, caps)), None)
        if smaller is None:
            return cur
        cur = smaller


def check_equivalence(
    problem: str,
    g: BoundariedGraph,
    result: KernelResult,
    attachments: Iterable[BoundariedGraph],
    *,
    instance: int = 0,
    caps: OracleCaps | None = None,
) -> EquivalenceVerdict:
    checked = 0
    for h in attachments:
        checked += 1
        if not _fails(problem, g, result, h, caps):
            continue
        small = shrink_attachment(problem, g, result, h, caps=caps)
        orig, red = _optima(problem, g, result.reduced, small, caps)
        shifted = red if result.delta is None else red.shifted(result.delta)
        log.warning("instance %d: OPT(G+H) = %s, OPT(G'+H) + delta = %s", instance, orig, shifted)
        return EquivalenceVerdict(
            instance=instance,
            passed=False,
            attachment=write_bkg(small),
            original=str(orig),
            reduced=str(red),
            delta=result.delta,
            checked=checked,
            message=f"OPT(G+H) = {orig} but OPT(G'+H) + delta = {shifted}",
        )
    return EquivalenceVerdict(instance=instance, passed=True, delta=result.delta, checked=checked)


def check_composition(
    problem: str,
    param: str | Param,
    g1: BoundariedGraph,
    g2: BoundariedGraph,
    attachments: Iterable[BoundariedGraph],
    *,
    caps: OracleCaps | None = None,
) -> EquivalenceVerdict:
    """Kernelize two parts apart, glue the kernels, and compare with the glued whole."""
    spec = lookup(problem, param)
    r1, r2 = spec.run(g1), spec.run(g2)
    whole = glue_boundaried(g1, g2)
    composed = glue_boundaried(r1.reduced, r2.reduced)
    delta = None if r1.delta is None or r2.delta is None else r1.delta + r2.delta
    combined = KernelResult(reduced=composed, delta=delta)
    return check_equivalence(problem, whole, combined, attachments, caps=caps)


def check_boundary_shrink(
    problem: str,
    g: BoundariedGraph,
    result: KernelResult,
    boundary: Iterable[int],
    attachments: Iterable[BoundariedGraph],
    *,
    caps: OracleCaps | None = None,
) -> EquivalenceVerdict:
    """The kernel certified for g's boundary, checked against a smaller boundary."""
    small = shrink_boundary(g, boundary)
    shrunk = replace(result, reduced=shrink_boundary(result.reduced, boundary))
    return check_equivalence(problem, small, shrunk, attachments, caps=caps)


# --- campaigns ----------------------------------------------------------------------


def attachments_for(cfg: FuzzConfig, g: BoundariedGraph) -> list[BoundariedGraph]:
    room = load_settings().caps.general - g.graph.n
    out: list[BoundariedGraph] = []
    if len(g.boundary) <= cfg.exhaustive_boundary:
        out.extend(exhaustive_attachments(g.boundary, max(0, min(cfg.exhaustive_fresh, room))))
    out.extend(gen_attachment(g.boundary, cfg, i, room=room) for i in range(cfg.attachments))
    return out


def check_instance(cfg: FuzzConfig, index: int) -> list[EquivalenceVerdict]:
    """Kernelize instance `index`, compare against its attachments, check the fixpoint."""
    g = gen_instance(cfg, index)
    spec = lookup(cfg.problem, cfg.param)
    result = spec.run(g)
    verdict = check_equivalence(cfg.problem, g, result, attachments_for(cfg, g), instance=index)
    problems = spec.violations(g, result)
    if problems:
        log.warning("instance %d: %s", index, "; ".join(problems))
    fixpoint = EquivalenceVerdict(
        instance=index,
        passed=not problems,
        kind="fixpoint",
        delta=result.delta,
        message="; ".join(problems),
    )
    return [verdict, fixpoint]


def _safe_check(cfg: FuzzConfig, index: int) -> list[EquivalenceVerdict]:
    try:
        return check_instance(cfg, index)
    except Exception as exc:
        log.exception("instance %d crashed", index)
        return [EquivalenceVerdict(instance=index, passed=False, kind="error", message=repr(exc))]


def _verdict_stream(cfg: FuzzConfig, workers: int) -> Iterator[list[EquivalenceVerdict]]:
    check = partial(_safe_check, cfg)
    indices = range(cfg.instances)
    if workers <= 1:
        yield from map(check, indices)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(check, indices)


def run_campaign(
    cfg: FuzzConfig,
    *,
    workers: int | None = None,
    db_path: Path | None = None,
    sink: Sink | None = None,
) -> CampaignSummary:
    """Check cfg.instances instances; verdicts reach `sink` in index order."""
    settings = load_settings()
    workers = workers or settings.workers
    db_path = db_path or settings.verdict_db
    if db_path is not None:
        init_db(db_path)

    failures = 0
    attachments = 0
    for verdicts in _verdict_stream(cfg, workers):
        for v in verdicts:
            attachments += v.checked
            failures += not v.passed
            if sink is not None:
                sink(v)
            if db_path is not None:
                insert_verdict(
                    db_path, problem=cfg.problem, param=cfg.param, seed=cfg.seed, verdict=v
                )

    summary = CampaignSummary(
        problem=cfg.problem,
        parameterization=cfg.param,
        seed=cfg.seed,
        instances=cfg.instances,
        attachments=attachments,
        failures=failures,
        tool_version=__version__,
    )
    log.info(
        "%s/%s seed %d: %d instances, %d attachments, %d failures",
        cfg.problem,
        cfg.param,
        cfg.seed,
        cfg.instances,
        attachments,
        failures,
    )
    return summary
