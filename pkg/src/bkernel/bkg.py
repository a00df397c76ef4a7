"""BKG text format.

One record per line, '#' starts a comment:

    bkg 1
    n <count>              vertices 0..count-1
    v <id>...              optional explicit vertex ids (each < count)
    b <id>...              boundary
    x <id>...              optional modulator
    class independent|forest|td <d>|vc
    tdp <child> <parent>...   optional treedepth parent pointers
    e <u> <v> <mult>

The writer is canonical: ascending ids, edges as (min, max, mult).
"""

from __future__ import annotations

from pathlib import Path

from .graph import BoundariedGraph, Graph, GraphError, TargetClass, edge_key


class BkgParseError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _ints(lineno: int, parts: list[str]) -> list[int]:
    out: list[int] = []
    for p in parts:
        try:
            val = int(p)
        except ValueError:
            raise BkgParseError(lineno, f"expected an integer, got {p!r}") from None
        if val < 0:
            raise BkgParseError(lineno, f"negative id {val}")
        out.append(val)
    return out


def parse_bkg(text: str, *, simple: bool = False) -> BoundariedGraph:
    seen_magic = False
    n: int | None = None
    vertices: frozenset[int] | None = None
    boundary: frozenset[int] = frozenset()
    modulator: frozenset[int] | None = None
    target: TargetClass | None = None
    parents: tuple[tuple[int, int], ...] | None = None
    mults: dict[tuple[int, int], int] = {}
    once: set[str] = set()

    def check_ids(lineno: int, ids: list[int]) -> None:
        assert vertices is not None
        for i in ids:
            if i not in vertices:
                raise BkgParseError(lineno, f"vertex id {i} out of range")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()

        if not seen_magic:
            if head != "bkg" or rest != ["1"]:
                raise BkgParseError(lineno, "expected header 'bkg 1'")
            seen_magic = True
            continue

        if head in ("n", "v", "b", "x", "class", "tdp"):
            if head in once:
                raise BkgParseError(lineno, f"duplicate '{head}' record")
            once.add(head)

        if head == "n":
            vals = _ints(lineno, rest)
            if len(vals) != 1:
                raise BkgParseError(lineno, "'n' takes exactly one count")
            if mults or "b" in once or "x" in once:
                raise BkgParseError(lineno, "'n' must precede other records")
            n = vals[0]
            vertices = frozenset(range(n))
            continue

        if n is None or vertices is None:
            raise BkgParseError(lineno, f"'{head}' before 'n'")

        if head == "v":
            ids = _ints(lineno, rest)
            if len(set(ids)) != len(ids):
                raise BkgParseError(lineno, "repeated vertex id")
            if mults or "b" in once or "x" in once or "tdp" in once:
                raise BkgParseError(lineno, "'v' must directly follow 'n'")
            for i in ids:
                if i >= n:
                    raise BkgParseError(lineno, f"vertex id {i} out of range")
            vertices = frozenset(ids)
        elif head == "b":
            ids = _ints(lineno, rest)
            check_ids(lineno, ids)
            boundary = frozenset(ids)
        elif head == "x":
            ids = _ints(lineno, rest)
            check_ids(lineno, ids)
            modulator = frozenset(ids)
        elif head == "class":
            try:
                target = TargetClass.parse(" ".join(rest))
            except GraphError as e:
                raise BkgParseError(lineno, str(e)) from None
        elif head == "tdp":
            ids = _ints(lineno, rest)
            if len(ids) % 2:
                raise BkgParseError(lineno, "'tdp' takes child/parent pairs")
            check_ids(lineno, ids)
            pairs = list(zip(ids[0::2], ids[1::2]))
            if len({c for c, _ in pairs}) != len(pairs):
                raise BkgParseError(lineno, "vertex with two parents")
            parents = tuple(sorted(pairs))
        elif head == "e":
            vals = _ints(lineno, rest)
            if len(vals) != 3:
                raise BkgParseError(lineno, "'e' takes <u> <v> <mult>")
            u, v, m = vals
            check_ids(lineno, [u, v])
            if m < 1:
                raise BkgParseError(lineno, f"multiplicity must be positive, got {m}")
            if simple and (u == v or m != 1):
                raise BkgParseError(lineno, "loops and multi-edges are not allowed here")
            k = edge_key(u, v)
            if k in mults:
                raise BkgParseError(lineno, f"duplicate edge {k[0]} {k[1]}")
            mults[k] = m
        else:
            raise BkgParseError(lineno, f"unknown record '{head}'")

    if not seen_magic:
        raise BkgParseError(1, "empty input")
    if vertices is None:
        raise BkgParseError(1, "missing 'n' record")

    return BoundariedGraph(
        graph=Graph.from_mults(vertices, mults),
        boundary=boundary,
        modulator=modulator,
        target_class=target,
        parents=parents,
    )


def _ids(head: str, ids: frozenset[int] | list[int]) -> str:
    return " ".join([head, *(str(i) for i in sorted(ids))])


def write_bkg(g: BoundariedGraph) -> str:
    vs = g.graph.vertices
    n = max(vs, default=-1) + 1
    lines = ["bkg 1", f"n {n}"]
    if vs != frozenset(range(n)):
        lines.append(_ids("v", vs))
    lines.append(_ids("b", g.boundary))
    if g.modulator is not None:
        lines.append(_ids("x", g.modulator))
    if g.target_class is not None:
        lines.append(f"class {g.target_class}")
    if g.parents is not None:
        flat = [str(i) for pair in sorted(g.parents) for i in pair]
        lines.append(" ".join(["tdp", *flat]))
    for u, v, m in g.graph.edges:
        lines.append(f"e {u} {v} {m}")
    return "\n".join(lines) + "\n"


def read_bkg(path: Path, *, simple: bool = False) -> BoundariedGraph:
    return parse_bkg(path.read_text(encoding="utf-8"), simple=simple)


def save_bkg(path: Path, g: BoundariedGraph) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_bkg(g), encoding="utf-8", newline="\n")
