"""Exact exponential-time oracles.

Every problem works on a bitmask view of the graph (vertex i of the sorted id
list is bit i). Problem tags:

- minimization: vc, fvs, tds, ds, cvd, ce, deg2mod
- maximization: mc, lc (cycle length), lp (path length in edges)
- decision: hc, hp (1 = YES, 0 = NO)
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass

import networkx as nx

from .graph import CapExceededError, Graph, GraphError
from .settings import OracleCaps, load_settings

log = logging.getLogger("bkernel")


class OracleCapExceeded(CapExceededError):
    pass


class UnsupportedInput(GraphError):
    pass


FINITE = "finite"
PLUS_INF = "plus_infinity"
MINUS_INF = "minus_infinity"


@dataclass(frozen=True)
class OptValue:
    tag: str
    value: int | None = None

    @property
    def is_finite(self) -> bool:
        return self.tag == FINITE

    def shifted(self, delta: int) -> OptValue:
        if self.tag != FINITE or self.value is None:
            return self
        return OptValue(FINITE, self.value + delta)

    def __str__(self) -> str:
        if self.tag == PLUS_INF:
            return "inf"
        if self.tag == MINUS_INF:
            return "-inf"
        return str(self.value)


PLUS_INFINITY = OptValue(PLUS_INF)
MINUS_INFINITY = OptValue(MINUS_INF)


def finite(value: int) -> OptValue:
    return OptValue(FINITE, value)


MINIMIZE = "min"
MAXIMIZE = "max"
DECIDE = "decision"

PROBLEM_KINDS: dict[str, str] = {
    "vc": MINIMIZE,
    "fvs": MINIMIZE,
    "tds": MINIMIZE,
    "ds": MINIMIZE,
    "cvd": MINIMIZE,
    "ce": MINIMIZE,
    "deg2mod": MINIMIZE,
    "mc": MAXIMIZE,
    "lc": MAXIMIZE,
    "lp": MAXIMIZE,
    "hc": DECIDE,
    "hp": DECIDE,
}

MULTIGRAPH_OK = frozenset({"fvs", "hc", "hp", "deg2mod"})


def matches(problem: str, original: OptValue, reduced: OptValue, delta: int | None) -> bool:
    """OPT(G + H) == OPT(G' + H) + delta, comparing tags first."""
    if PROBLEM_KINDS[problem] == DECIDE or delta is None:
        return original == reduced
    return original == reduced.shifted(delta)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class _Masks:
    ids: tuple[int, ...]
    adj: tuple[int, ...]
    loops: int
    doubles: frozenset[tuple[int, int]]

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def full(self) -> int:
        return (1 << len(self.ids)) - 1


def _masks(g: Graph) -> _Masks:
    ids = tuple(sorted(g.vertices))
    idx = {v: i for i, v in enumerate(ids)}
    adj = [0] * len(ids)
    loops = 0
    doubles: set[tuple[int, int]] = set()
    for u, v, m in g.edges:
        iu, iv = idx[u], idx[v]
        if iu == iv:
            loops |= 1 << iu
            continue
        adj[iu] |= 1 << iv
        adj[iv] |= 1 << iu
        if m >= 2:
            doubles.add((min(iu, iv), max(iu, iv)))
    return _Masks(ids=ids, adj=tuple(adj), loops=loops, doubles=frozenset(doubles))


# --- vertex cover ------------------------------------------------------------


def _vc(adj: tuple[int, ...], alive: int, memo: dict[int, int]) -> int:
    if alive in memo:
        return memo[alive]
    best, best_deg = -1, 0
    for v in _bits(alive):
        d = (adj[v] & alive).bit_count()
        if d == 1:
            u = (adj[v] & alive).bit_length() - 1
            out = 1 + _vc(adj, alive & ~(1 << u) & ~(1 << v), memo)
            memo[alive] = out
            return out
        if d > best_deg:
            best, best_deg = v, d
    if best_deg == 0:
        memo[alive] = 0
        return 0
    nb = adj[best] & alive
    take = 1 + _vc(adj, alive & ~(1 << best), memo)
    skip = best_deg + _vc(adj, alive & ~nb & ~(1 << best), memo)
    memo[alive] = min(take, skip)
    return memo[alive]


def _solve_vc(mk: _Masks) -> OptValue:
    return finite(_vc(mk.adj, mk.full, {}))


# --- feedback vertex set -------------------------------------------------------


def _acyclic(mk: _Masks, alive: int) -> bool:
    parent = list(range(mk.n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    if mk.loops & alive:
        return False
    for u in _bits(alive):
        for v in _bits(mk.adj[u] & alive):
            if v < u:
                continue
            if (u, v) in mk.doubles:
                return False
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
    return True


def _multi_degree(mk: _Masks, v: int, alive: int) -> int:
    d = 0
    for u in _bits(mk.adj[v] & alive):
        d += 2 if (min(u, v), max(u, v)) in mk.doubles else 1
    return d + (2 if mk.loops >> v & 1 else 0)


def _solve_fvs(mk: _Masks) -> OptValue:
    alive = mk.full
    forced = mk.loops
    alive &= ~forced
    changed = True
    while changed:
        changed = False
        for v in _bits(alive):
            if _multi_degree(mk, v, alive) <= 1:
                alive &= ~(1 << v)
                changed = True
    cand = list(_bits(alive))
    base = forced.bit_count()
    for k in range(len(cand) + 1):
        for combo in itertools.combinations(cand, k):
            drop = 0
            for v in combo:
                drop |= 1 << v
            if _acyclic(mk, alive & ~drop):
                return finite(base + k)
    raise AssertionError("deleting every vertex leaves a forest")


# --- tree deletion set ---------------------------------------------------------


def _is_tree(mk: _Masks, alive: int) -> bool:
    if not alive:
        return False
    count = alive.bit_count()
    edges = sum((mk.adj[v] & alive).bit_count() for v in _bits(alive)) // 2
    if edges != count - 1:
        return False
    start = alive & -alive
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for v in _bits(frontier):
            nxt |= mk.adj[v]
        nxt &= alive & ~seen
        seen |= nxt
        frontier = nxt
    return seen == alive


def _solve_tds(mk: _Masks) -> OptValue:
    if mk.n == 0:
        return finite(0)
    verts = list(range(mk.n))
    for k in range(mk.n):
        for combo in itertools.combinations(verts, k):
            drop = 0
            for v in combo:
                drop |= 1 << v
            if _is_tree(mk, mk.full & ~drop):
                return finite(k)
    raise AssertionError("a single vertex is a tree")


# --- dominating set ------------------------------------------------------------


def _solve_ds(mk: _Masks) -> OptValue:
    closed = [mk.adj[v] | (1 << v) for v in range(mk.n)]
    forced = 0
    for v in range(mk.n):
        if mk.adj[v] == 0:
            forced |= 1 << v
    covered = forced
    rest = [v for v in range(mk.n) if not forced >> v & 1]
    base = forced.bit_count()
    if covered == mk.full:
        return finite(base)
    for k in range(1, len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            cov = covered
            for v in combo:
                cov |= closed[v]
            if cov == mk.full:
                return finite(base + k)
    raise AssertionError("all vertices dominate the graph")


# --- cluster vertex deletion -------------------------------------------------------


def _p3(adj: tuple[int, ...], alive: int) -> tuple[int, int, int] | None:
    for v in _bits(alive):
        nb = adj[v] & alive
        for u in _bits(nb):
            non = nb & ~adj[u] & ~(1 << u)
            if non:
                return u, v, (non & -non).bit_length() - 1
    return None


def _cvd(adj: tuple[int, ...], alive: int, memo: dict[int, int]) -> int:
    if alive in memo:
        return memo[alive]
    tri = _p3(adj, alive)
    if tri is None:
        memo[alive] = 0
        return 0
    out = 1 + min(_cvd(adj, alive & ~(1 << x), memo) for x in tri)
    memo[alive] = out
    return out


def _solve_cvd(mk: _Masks) -> OptValue:
    return finite(_cvd(mk.adj, mk.full, {}))


# --- cluster editing ------------------------------------------------------------


def _solve_ce(mk: _Masks) -> OptValue:
    n = mk.n
    best = [sum(a.bit_count() for a in mk.adj) // 2]
    clusters: list[int] = []

    def place(v: int, cost: int, assigned: int) -> None:
        if cost >= best[0]:
            return
        if v == n:
            best[0] = cost
            return
        nb = mk.adj[v]
        for i, c in enumerate(clusters):
            extra = (c & ~nb).bit_count() + (nb & assigned & ~c).bit_count()
            clusters[i] = c | (1 << v)
            place(v + 1, cost + extra, assigned | (1 << v))
            clusters[i] = c
        clusters.append(1 << v)
        place(v + 1, cost + (nb & assigned).bit_count(), assigned | (1 << v))
        clusters.pop()

    place(0, 0, 0)
    return finite(best[0])


# --- max cut ---------------------------------------------------------------------


def _solve_mc(mk: _Masks) -> OptValue:
    n = mk.n
    if n <= 1:
        return finite(0)
    # vertex n-1 stays on side 0; Gray code over the others
    side = 0
    cut = 0
    best = 0
    for step in range(1, 1 << (n - 1)):
        v = (step & -step).bit_length() - 1
        same = (mk.adj[v] & (side if side >> v & 1 else ~side & mk.full)).bit_count()
        other = mk.adj[v].bit_count() - same
        cut += same - other
        side ^= 1 << v
        best = max(best, cut)
    return finite(best)


# --- paths and cycles ------------------------------------------------------------


def _component_masks(mk: _Masks) -> list[int]:
    seen = 0
    out: list[int] = []
    for v in range(mk.n):
        if seen >> v & 1:
            continue
        comp = frontier = 1 << v
        while frontier:
            nxt = 0
            for u in _bits(frontier):
                nxt |= mk.adj[u]
            nxt &= ~comp
            comp |= nxt
            frontier = nxt
        seen |= comp
        out.append(comp)
    return out


def _path_ends(mk: _Masks, universe: int, *, anchored: bool) -> dict[int, int]:
    """mask -> bitmask of possible path ends covering exactly mask.

    anchored: the path starts at the lowest vertex of mask.
    """
    verts = list(_bits(universe))
    ends: dict[int, int] = {1 << v: 1 << v for v in verts}
    # submasks in increasing order: every extension lands on a larger mask
    mask = 0
    while True:
        mask = (mask - universe) & universe
        if not mask:
            break
        e = ends.get(mask)
        if not e:
            continue
        low = mask & -mask
        for u in verts:
            bit = 1 << u
            if mask & bit or not mk.adj[u] & e:
                continue
            if anchored and bit < low:
                continue
            ends[mask | bit] = ends.get(mask | bit, 0) | bit
    return ends


def _solve_lc(mk: _Masks) -> OptValue:
    best: int | None = None
    for comp in _component_masks(mk):
        if comp.bit_count() < 3:
            continue
        for mask, e in _path_ends(mk, comp, anchored=True).items():
            size = mask.bit_count()
            if size < 3 or (best is not None and size <= best):
                continue
            low = (mask & -mask).bit_length() - 1
            if mk.adj[low] & e:
                best = size
    return MINUS_INFINITY if best is None else finite(best)


def _solve_lp(mk: _Masks) -> OptValue:
    if mk.n == 0:
        return MINUS_INFINITY
    best = 0
    for comp in _component_masks(mk):
        if comp.bit_count() - 1 <= best:
            continue
        for mask, e in _path_ends(mk, comp, anchored=False).items():
            if e:
                best = max(best, mask.bit_count() - 1)
    return finite(best)


def trivial_hamiltonian(problem: str, n: int) -> bool | None:
    """Answer for graphs too small to reason about edges; None otherwise.

    No Hamiltonian cycle below 3 vertices; the single vertex has a Hamiltonian path.
    """
    if problem == "hc" and n < 3:
        return False
    if problem == "hp" and n <= 1:
        return n == 1
    return None


def _solve_hamiltonian(problem: str, mk: _Masks) -> OptValue:
    trivial = trivial_hamiltonian(problem, mk.n)
    if trivial is not None:
        return finite(int(trivial))
    if len(_component_masks(mk)) > 1:
        return finite(0)
    ends = _path_ends(mk, mk.full, anchored=problem == "hc").get(mk.full, 0)
    if problem == "hp":
        return finite(int(ends != 0))
    return finite(int(bool(mk.adj[0] & ends)))


def _solve_deg2mod(g: Graph) -> OptValue:
    return finite(sum(1 for v in g.vertices if g.degree(v) != 2))


def opt_exact(problem: str, g: Graph, *, caps: OracleCaps | None = None) -> OptValue:
    if problem not in PROBLEM_KINDS:
        raise UnsupportedInput(f"unknown problem: {problem}")
    if problem == "deg2mod":
        return _solve_deg2mod(g)
    if problem not in MULTIGRAPH_OK and not g.is_simple:
        raise UnsupportedInput(f"{problem} oracle needs a simple graph")

    caps = caps or load_settings().caps
    cap = caps.ce if problem == "ce" else caps.general
    if g.n > cap:
        raise OracleCapExceeded(f"{problem} oracle limited to {cap} vertices, got {g.n}")

    mk = _masks(g)
    if problem == "vc":
        return _solve_vc(mk)
    if problem == "fvs":
        return _solve_fvs(mk)
    if problem == "tds":
        return _solve_tds(mk)
    if problem == "ds":
        return _solve_ds(mk)
    if problem == "cvd":
        return _solve_cvd(mk)
    if problem == "ce":
        return _solve_ce(mk)
    if problem == "mc":
        return _solve_mc(mk)
    if problem == "lc":
        return _solve_lc(mk)
    if problem == "lp":
        return _solve_lp(mk)
    return _solve_hamiltonian(problem, mk)


def vc_forest_dp(g: Graph) -> int:
    """Minimum vertex cover of a simple forest by leaf-to-root DP."""
    if not g.vertices:
        return 0
    if not g.is_simple:
        raise UnsupportedInput("vc_forest_dp needs a simple forest")
    nxg = g.to_nx()
    if not nx.is_forest(nxg):
        raise UnsupportedInput("vc_forest_dp needs a forest")
    take: dict[int, int] = {}
    skip: dict[int, int] = {}
    total = 0
    for comp in sorted(nx.connected_components(nxg), key=min):
        root = min(comp)
        order = list(nx.dfs_preorder_nodes(nxg, root))
        parent = nx.dfs_predecessors(nxg, root)
        for v in reversed(order):
            kids = [u for u in nxg[v] if parent.get(u) == v]
            take[v] = 1 + sum(min(take[u], skip[u]) for u in kids)
            skip[v] = sum(take[u] for u in kids)
        total += min(take[root], skip[root])
    return total
