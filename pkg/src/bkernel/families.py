"""Counterexample families for problems without (single-exponential) finite index.

Each family is a sequence of boundaried graphs G^i over a fixed boundary plus
two attachments W1, W2 such that OPT(G^i + W1) - OPT(G^j + W1) differs from
OPT(G^i + W2) - OPT(G^j + W2) for all i != j, so no offset makes G^i and G^j
gluing-equivalent. The dominating set family is indexed by subfamilies of the
half-size subsets of the boundary, given as bitmasks over their sorted list.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, replace

from .graph import (
    FOREST,
    INDEPENDENT,
    BoundariedGraph,
    Graph,
    TargetClass,
    glue,
)
from .oracles import OptValue, opt_exact
from .reports import DsIndexReport, PairWitness, SeparationReport
from .settings import load_settings

log = logging.getLogger("bkernel")

FAMILIES: dict[str, str] = {
    "ce-cliques": "ce",
    "mc-bipartite": "mc",
    "tds-star": "tds",
    "tds-tree": "tds",
    "lc-deg2": "lc",
    "lp-deg2": "lp",
    "ds-subsets": "ds",
}

# smallest member index per family
_LOWEST = {"tds-star": 1, "tds-tree": 2}

MAX_DS_Q = 4


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    name: str
    i: int = 0
    j: int = 1
    # witness index; None picks the one the construction needs for (i, j)
    h: int | None = None
    q: int | None = None

    @property
    def problem(self) -> str:
        return FAMILIES[self.name]

    def check(self) -> None:
        if self.name not in FAMILIES:
            raise FamilyError(f"unknown family {self.name!r}; expected one of {sorted(FAMILIES)}")
        if self.i == self.j:
            raise FamilyError(f"member indices must differ, got i = j = {self.i}")
        if self.name == "ds-subsets":
            q = self.q
            if q is None or q < 2:
                raise FamilyError("ds-subsets needs q >= 2")
            top = 1 << len(ds_subsets(q))
            for k in (self.i, self.j):
                if not 0 <= k < top:
                    raise FamilyError(f"subfamily mask {k} outside 0..{top - 1} for q = {q}")
            return
        low = _LOWEST.get(self.name, 0)
        for k in (self.i, self.j):
            if k < low:
                raise FamilyError(f"{self.name} needs indices >= {low}, got {k}")
        if self.h is not None and self.h < 0:
            raise FamilyError(f"witness index must be non-negative, got {self.h}")


@dataclass(frozen=True)
class Family:
    spec: FamilySpec
    members: tuple[BoundariedGraph, BoundariedGraph]
    witnesses: tuple[BoundariedGraph, BoundariedGraph]
    witness_names: tuple[str, str]


def _bg(
    vertices: range | list[int],
    edges: list[tuple[int, int]],
    boundary: range | list[int],
    target: TargetClass | None = None,
) -> BoundariedGraph:
    b = frozenset(boundary)
    return BoundariedGraph(
        graph=Graph.build(vertices, edges),
        boundary=b,
        modulator=b,
        target_class=target,
    )


def _path(ids: list[int]) -> list[tuple[int, int]]:
    return list(itertools.pairwise(ids))


# --- members ---------------------------------------------------------------------


def clique(i: int) -> BoundariedGraph:
    """K_{i+1} with boundary vertex 0."""
    return _bg(range(i + 1), list(itertools.combinations(range(i + 1), 2)), [0])


def mc_member(i: int) -> BoundariedGraph:
    """x = 0, y = 1 and i common neighbors."""
    edges = [(b, v) for v in range(2, i + 2) for b in (0, 1)]
    return _bg(range(i + 2), edges, [0, 1], INDEPENDENT)


def tds_star(i: int) -> BoundariedGraph:
    return _bg(range(i + 1), [(0, v) for v in range(1, i + 1)], [0], INDEPENDENT)


def tds_tree(i: int) -> BoundariedGraph:
    """Star at x = 0 whose leaves also meet y = 1."""
    leaves = range(2, i + 2)
    edges = [(0, v) for v in leaves] + [(1, v) for v in leaves]
    return _bg(range(i + 2), edges, [0], FOREST)


def lc_member(i: int) -> BoundariedGraph:
    """Boundary x1..x4 = 0..3, path x1-a-x2 and a path of length i+2 from x3 to x4."""
    inner = list(range(5, i + 6))
    edges = [(0, 4), (4, 1), *_path([2, *inner, 3])]
    return _bg(range(i + 6), edges, range(4))


def lp_member(i: int) -> BoundariedGraph:
    """Boundary x1..x3 = 0..2, path of length i+2 from x2 to x3."""
    inner = list(range(3, i + 4))
    return _bg(range(i + 4), _path([1, *inner, 2]), range(3))


def ds_subsets(q: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(q), q // 2))


def ds_member(q: int, mask: int) -> BoundariedGraph:
    """Boundary 0..q-1 and one vertex per chosen subset, adjacent to its members."""
    chosen = [s for k, s in enumerate(ds_subsets(q)) if mask >> k & 1]
    edges = [(q + n, x) for n, s in enumerate(chosen) for x in s]
    return _bg(range(q + len(chosen)), edges, range(q), INDEPENDENT)


# --- attachments --------------------------------------------------------------------


def mc_witness(h: int) -> BoundariedGraph:
    """K_{h,h} with one side on x = 0 and the other on y = 1."""
    us = list(range(2, h + 2))
    ws = list(range(h + 2, 2 * h + 2))
    edges = [(u, w) for u in us for w in ws] + [(0, u) for u in us] + [(1, w) for w in ws]
    return _bg(range(2 * h + 2), edges, [0, 1])


def tds_witness(h: int) -> BoundariedGraph:
    """Triangles x-a_n-b_n for n = 1..h, every a_n also on r = 1."""
    edges: list[tuple[int, int]] = []
    for n in range(1, h + 1):
        a, b = 2 * n, 2 * n + 1
        edges += [(a, b), (0, a), (0, b), (1, a)]
    return _bg(range(2 * h + 2), edges, [0])


def lc_witness(side: str) -> BoundariedGraph:
    ends = (0, 1) if side == "L" else (2, 3)
    return _bg([0, 1, 2, 3, 4], [(ends[0], 4), (4, ends[1])], range(4))


def lp_witness(h: int) -> BoundariedGraph:
    """Path of length h hanging from x1 = 0."""
    return _bg([0, 1, 2, *range(3, h + 3)], _path([0, *range(3, h + 3)]), range(3))


def ds_witness(q: int, subset: frozenset[int]) -> BoundariedGraph:
    """A pendant z_k at x_k for every k in subset."""
    ps = sorted(subset)
    edges = [(q + n, k) for n, k in enumerate(ps)]
    return _bg([*range(q), *range(q, q + len(ps))], edges, range(q))


def member(spec: FamilySpec, index: int) -> BoundariedGraph:
    builders: dict[str, Callable[[int], BoundariedGraph]] = {
        "ce-cliques": clique,
        "mc-bipartite": mc_member,
        "tds-star": tds_star,
        "tds-tree": tds_tree,
        "lc-deg2": lc_member,
        "lp-deg2": lp_member,
    }
    if spec.name == "ds-subsets":
        assert spec.q is not None
        return ds_member(spec.q, index)
    return builders[spec.name](index)


def _witness_index(spec: FamilySpec) -> int:
    if spec.h is not None:
        return spec.h
    top = max(spec.i, spec.j)
    return {"tds-tree": top + 2, "lp-deg2": top + 3}.get(spec.name, top + 1)


def _ds_split(spec: FamilySpec) -> tuple[int, ...]:
    """A subset chosen by exactly one of the two subfamilies."""
    assert spec.q is not None
    k = ((spec.i ^ spec.j) & -(spec.i ^ spec.j)).bit_length() - 1
    return ds_subsets(spec.q)[k]


Pair = tuple[BoundariedGraph, BoundariedGraph]


def _witnesses(spec: FamilySpec) -> tuple[Pair, tuple[str, str]]:
    h = _witness_index(spec)
    if spec.name == "ce-cliques":
        return (clique(0), clique(h)), ("G^0", f"G^{h}")
    if spec.name == "mc-bipartite":
        return (mc_witness(0), mc_witness(h)), ("H^0", f"H^{h}")
    if spec.name in ("tds-star", "tds-tree"):
        return (tds_witness(1), tds_witness(h)), ("H^1", f"H^{h}")
    if spec.name == "lc-deg2":
        return (lc_witness("L"), lc_witness("R")), ("L", "R")
    if spec.name == "lp-deg2":
        return (lp_witness(0), lp_witness(h)), ("H^0", f"H^{h}")
    assert spec.q is not None
    full = frozenset(range(spec.q))
    split = _ds_split(spec)
    rest = full - frozenset(split)
    return (
        (ds_witness(spec.q, full), ds_witness(spec.q, rest)),
        ("H^[q]", f"H^{sorted(rest)}"),
    )


def make_spec(
    name: str,
    *,
    i: int | None = None,
    j: int | None = None,
    h: int | None = None,
    q: int | None = None,
) -> FamilySpec:
    """A checked FamilySpec; missing member indices start at the family's lowest index."""
    if name not in FAMILIES:
        raise FamilyError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}")
    i = _LOWEST.get(name, 0) if i is None else i
    spec = FamilySpec(name, i=i, j=i + 1 if j is None else j, h=h, q=q)
    spec.check()
    return spec


def gen_family(spec: FamilySpec) -> Family:
    spec.check()
    witnesses, names = _witnesses(spec)
    return Family(
        spec=spec,
        members=(member(spec, spec.i), member(spec, spec.j)),
        witnesses=witnesses,
        witness_names=names,
    )


# --- verification -------------------------------------------------------------------


def _value(v: OptValue) -> int:
    if not v.is_finite or v.value is None:
        raise FamilyError(f"family instance has no finite optimum: {v}")
    return v.value


def _opt(problem: str, g: BoundariedGraph, h: BoundariedGraph) -> int:
    glued = glue(g, h)
    caps = load_settings().caps.raised(glued.n)
    return _value(opt_exact(problem, glued, caps=caps))


def _closed_form(spec: FamilySpec, optima: list[int]) -> tuple[bool, list[str]]:
    i, j = spec.i, spec.j
    h = _witness_index(spec)
    lo, hi = (0, 1) if i < j else (1, 0)
    small = min(i, j)
    notes: list[str] = []
    name = spec.name
    if name == "ce-cliques":
        expected = [0, 0, min(i, h), min(j, h)]
    elif name == "mc-bipartite":
        expected = [2 * i, 2 * j, h * h + 2 * h + i, h * h + 2 * h + j]
    elif name == "lc-deg2":
        expected = [4, 4, i + 4, j + 4]
    elif name == "lp-deg2":
        expected = [i + 2, j + 2, max(h, i + 2), max(h, j + 2)]
    elif name in ("tds-star", "tds-tree"):
        extra = 1 if name == "tds-star" else 2
        ok = optima[0] == optima[1] == extra
        ok = ok and optima[2 + lo] <= small + extra
        if h >= max(i, j) + extra:
            ok = ok and optima[2 + hi] >= h
        notes.append(f"OPT with H^{h}: <= {small + extra} for the smaller member")
        return ok, notes
    else:
        assert spec.q is not None
        q = spec.q
        split = _ds_split(spec)
        # the member containing the split subset is the cheap one
        cheap = 0 if spec.i >> ds_subsets(q).index(split) & 1 else 1
        bound = math.ceil(q / 2) + 1
        ok = optima[0] == optima[1] == q and optima[2 + cheap] <= bound
        if q >= 4:
            ok = ok and optima[3 - cheap] > bound
        else:
            notes.append("strict bound not asserted below q = 4")
        return ok, notes
    return optima == expected, notes


def verify_separation(
    spec: FamilySpec, i: int | None = None, j: int | None = None
) -> SeparationReport:
    """Compute the four optima of a family pair and check offsets and closed forms."""
    if i is not None or j is not None:
        spec = replace(spec, i=spec.i if i is None else i, j=spec.j if j is None else j)
    fam = gen_family(spec)
    problem = spec.problem
    gi, gj = fam.members
    w1, w2 = fam.witnesses
    optima = [_opt(problem, g, w) for w in (w1, w2) for g in (gi, gj)]
    closed, notes = _closed_form(spec, optima)
    verdict = optima[0] - optima[1] != optima[2] - optima[3]
    indices = {"i": spec.i, "j": spec.j}
    if spec.name == "ds-subsets":
        assert spec.q is not None
        indices["q"] = spec.q
    else:
        indices["h"] = _witness_index(spec)
    log.info("%s %s: optima %s, separated %s", spec.name, indices, optima, verdict)
    return SeparationReport(
        family=spec.name,
        problem=problem,
        indices=indices,
        witnesses=list(fam.witness_names),
        optima=optima,
        closed_form=closed,
        verdict=verdict,
        notes=notes,
    )


def demonstrate_ds_index(q: int, *, fresh: int = 2) -> DsIndexReport:
    """Separate every pair of dominating set members over a boundary of size q.

    Pairs are tried against the subset witnesses H^P first; pairs they leave
    together fall back to every attachment on B plus `fresh` new vertices.
    """
    if not 2 <= q <= MAX_DS_Q:
        raise FamilyError(f"q must lie in 2..{MAX_DS_Q}, got {q}")
    from .harness import exhaustive_attachments

    subsets = ds_subsets(q)
    count = 1 << len(subsets)
    members = [ds_member(q, m) for m in range(count)]
    ps = [frozenset(p) for r in range(q + 1) for p in itertools.combinations(range(q), r)]
    table = [[_opt("ds", g, ds_witness(q, p)) for p in ps] for g in members]
    full = ps.index(frozenset(range(q)))

    bound = math.ceil(q / 2) + 1
    bound_ok: bool | None = True if q >= 4 else None
    exhaustive: list[BoundariedGraph] | None = None
    ex_table: dict[int, list[int]] = {}
    tally = {"subset": 0, "other": 0, "exhaustive": 0}
    unseparated: list[tuple[int, int]] = []
    witnesses: list[PairWitness] = []

    for a, b in itertools.combinations(range(count), 2):
        diff = [table[a][k] - table[b][k] for k in range(len(ps))]
        k = ((a ^ b) & -(a ^ b)).bit_length() - 1
        rest = ps.index(frozenset(range(q)) - frozenset(subsets[k]))
        if diff[full] != diff[rest]:
            tally["subset"] += 1
            witnesses.append(PairWitness(left=a, right=b, witness=f"H^{sorted(ps[rest])}"))
            if q >= 4:
                cheap, dear = (a, b) if a >> k & 1 else (b, a)
                if not table[cheap][rest] <= bound < table[dear][rest]:
                    bound_ok = False
            continue
        other = next((n for n, d in enumerate(diff) if d != diff[full]), None)
        if other is not None:
            tally["other"] += 1
            witnesses.append(PairWitness(left=a, right=b, witness=f"H^{sorted(ps[other])}"))
            continue
        if exhaustive is None:
            exhaustive = list(exhaustive_attachments(frozenset(range(q)), fresh))
        for m in (a, b):
            if m not in ex_table:
                ex_table[m] = [_opt("ds", members[m], h) for h in exhaustive]
        offsets = {x - y for x, y in zip(ex_table[a], ex_table[b], strict=True)}
        if len(offsets) > 1:
            tally["exhaustive"] += 1
            witnesses.append(PairWitness(left=a, right=b, witness=f"exhaustive<={fresh}"))
        else:
            unseparated.append((a, b))
            log.warning("ds q=%d: members %d and %d not separated", q, a, b)

    pairs = count * (count - 1) // 2
    separated = pairs - len(unseparated)
    log.info("ds q=%d: %d members, %d of %d pairs separated", q, count, separated, pairs)
    return DsIndexReport(
        q=q,
        members=count,
        pairs=pairs,
        separated=separated,
        by_subset_witness=tally["subset"],
        by_other_subset=tally["other"],
        by_exhaustive=tally["exhaustive"],
        unseparated=unseparated,
        full_witness_optima=sorted({row[full] for row in table}),
        bound_ok=bound_ok,
        witnesses=witnesses,
    )
