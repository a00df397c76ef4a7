"""Command-line front end.

Subcommands: kernelize, derive-kernel, glue, solve, validate, fuzz, family,
verify-lb. Exit codes: 0 ok, 1 usage, 2 parse/validation, 3 unsupported
combination, 4 oracle cap exceeded, 5 check failures found.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from collections import Counter
from dataclasses import replace
from pathlib import Path

from pydantic import BaseModel

from . import __version__
from .bkg import BkgParseError, read_bkg, save_bkg, write_bkg
from .config import load_fuzz_config, render_fuzz_config
from .families import FamilyError, demonstrate_ds_index, gen_family, make_spec, verify_separation
from .graph import CapExceededError, GraphError, KernelInputError, glue_boundaried, validate
from .harness import run_campaign
from .naive import naive_opt
from .oracles import DECIDE, PROBLEM_KINDS, opt_exact
from .registry import UnsupportedCombination, derive_regular_kernel, lookup, supported_pairs
from .reports import DerivedKernelReport, EquivalenceVerdict, RunReport
from .settings import load_settings

log = logging.getLogger("bkernel")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_CAP = 4
EXIT_FAILURES = 5


def _emit(model: BaseModel, path: Path | None) -> None:
    text = model.model_dump_json(indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _kernelize(args: argparse.Namespace) -> int:
    spec = lookup(args.problem, args.param)
    g = read_bkg(args.input)
    if g.target_class is None:
        g = replace(g, target_class=spec.param.target_class)

    started = time.perf_counter()
    result = spec.run(g)
    elapsed = (time.perf_counter() - started) * 1000.0

    for problem in spec.violations(g, result):
        log.warning("%s: %s", spec.key, problem)
    save_bkg(args.out, result.reduced)

    rules: Counter[str] = Counter()
    for name, count in result.trace:
        rules[name] += count
    assert result.stats is not None
    report = RunReport(
        problem=spec.problem,
        parameterization=str(spec.param),
        n_in=result.stats.n_in,
        m_in=result.stats.m_in,
        n_out=result.stats.n_out,
        m_out=result.stats.m_out,
        boundary_size=len(g.boundary),
        param_value=len(g.boundary | (g.modulator or frozenset())),
        delta=result.delta,
        rules=dict(rules),
        elapsed_ms=round(elapsed, 3) if args.timing else None,
        tool_version=__version__,
    )
    _emit(report, args.report)
    return EXIT_OK


def _derive_kernel(args: argparse.Namespace) -> int:
    g = read_bkg(args.input)
    if g.modulator is None:
        raise KernelInputError("derive-kernel needs a modulator (an 'x' record)")
    if g.boundary:
        log.info("ignoring the boundary of %s; regular kernels run with B empty", args.input)
    derived = derive_regular_kernel(
        args.problem, args.param, g.graph, g.modulator, args.ell, parents=g.parents
    )
    text = write_bkg(derived.instance)
    if args.out is None:
        sys.stdout.write(text)
    else:
        save_bkg(args.out, derived.instance)
    report = DerivedKernelReport(
        problem=args.problem,
        parameterization=args.param,
        n_in=g.graph.n,
        n_out=derived.instance.graph.n,
        ell_in=args.ell,
        ell_out=derived.ell,
        delta=derived.delta,
        decided=derived.decided,
        tool_version=__version__,
    )
    if args.report is not None:
        _emit(report, args.report)
    return EXIT_OK


def _glue(args: argparse.Namespace) -> int:
    glued = glue_boundaried(read_bkg(args.a), read_bkg(args.b))
    if args.out is None:
        sys.stdout.write(write_bkg(glued))
    else:
        save_bkg(args.out, glued)
    return EXIT_OK


def _solve(args: argparse.Namespace) -> int:
    g = read_bkg(args.input)
    value = naive_opt(args.problem, g.graph) if args.naive else opt_exact(args.problem, g.graph)
    if PROBLEM_KINDS[args.problem] == DECIDE:
        print("YES" if value.value == 1 else "NO")
    else:
        print(value)
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    diagnostics = validate(read_bkg(args.input))
    for d in diagnostics:
        print(d)
    if diagnostics:
        return EXIT_INPUT
    print("ok")
    return EXIT_OK


def _fuzz(args: argparse.Namespace) -> int:
    cfg = load_fuzz_config(args.config)
    if args.seed is not None:
        cfg = cfg.model_copy(update={"seed": args.seed})
    if args.dump_config:
        sys.stdout.write(render_fuzz_config(cfg))
        return EXIT_OK
    lookup(cfg.problem, cfg.param)

    def sink(v: EquivalenceVerdict) -> None:
        print(v.model_dump_json(), flush=True)

    summary = run_campaign(cfg, workers=args.workers, db_path=args.db, sink=sink)
    sys.stderr.write(summary.model_dump_json() + "\n")
    return EXIT_FAILURES if summary.failures else EXIT_OK


def _family(args: argparse.Namespace) -> int:
    spec = make_spec(args.name, i=args.i, j=args.j, h=args.h, q=args.q)
    fam = gen_family(spec)
    files = [
        (f"member-{spec.i}.bkg", fam.members[0]),
        (f"member-{spec.j}.bkg", fam.members[1]),
        ("witness-1.bkg", fam.witnesses[0]),
        ("witness-2.bkg", fam.witnesses[1]),
    ]
    for name, g in files:
        save_bkg(args.out_dir / name, g)
        print(args.out_dir / name)
    return EXIT_OK


def _verify_lb(args: argparse.Namespace) -> int:
    if args.index_demo:
        if args.name != "ds-subsets" or args.q is None:
            raise FamilyError("--index-demo needs --name ds-subsets and --q")
        demo = demonstrate_ds_index(args.q)
        _emit(demo, args.report)
        ok = not demo.unseparated and demo.bound_ok is not False
        return EXIT_OK if ok else EXIT_FAILURES
    spec = make_spec(args.name, i=args.i, j=args.j, h=args.h, q=args.q)
    report = verify_separation(spec)
    _emit(report, args.report)
    return EXIT_OK if report.verdict and report.closed_form else EXIT_FAILURES


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bkernel",
        description="Boundaried kernelization with brute-force equivalence checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "kernelize",
        help="Run a boundaried kernel",
        description="Supported pairs: " + ", ".join(supported_pairs()),
    )
    p.add_argument("--problem", required=True)
    p.add_argument("--param", required=True, help="vc | fvs | deg2 | td:<d>")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--report", type=Path, help="JSON run report (stdout when omitted)")
    p.add_argument("--timing", action="store_true", help="Record elapsed_ms in the report")
    p.set_defaults(func=_kernelize)

    p = sub.add_parser("derive-kernel", help="Regular kernel from a boundaried one (B empty)")
    p.add_argument("--problem", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--ell", type=int, help="Target value; omit for hc/hp")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, help="Kernel BKG (stdout when omitted)")
    p.add_argument("--report", type=Path)
    p.set_defaults(func=_derive_kernel)

    p = sub.add_parser("glue", help="Glue two boundaried graphs along shared boundary ids")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_glue)

    p = sub.add_parser("solve", help="Exact optimum of a BKG graph")
    p.add_argument("--problem", required=True, choices=sorted(PROBLEM_KINDS))
    p.add_argument("--naive", action="store_true", help="Use the networkx enumerators")
    p.add_argument("input", type=Path)
    p.set_defaults(func=_solve)

    p = sub.add_parser("validate", help="Print diagnostics of a BKG file")
    p.add_argument("input", type=Path)
    p.set_defaults(func=_validate)

    p = sub.add_parser("fuzz", help="Gluing-equivalence campaign, verdicts as JSON lines")
    p.add_argument("--config", type=Path, required=True, help=".json or .toml FuzzConfig")
    p.add_argument("--seed", type=int, help="Override the config seed")
    p.add_argument("--workers", type=int, help="Process pool size (default BKERNEL_WORKERS)")
    p.add_argument("--db", type=Path, help="sqlite verdict log (default BKERNEL_VERDICT_DB)")
    p.add_argument(
        "--dump-config", action="store_true", help="Print the validated config as TOML and exit"
    )
    p.set_defaults(func=_fuzz)

    for name, helptext, func in (
        ("family", "Write a lower-bound family pair and its witnesses", _family),
        ("verify-lb", "Check that a family pair is not gluing-equivalent", _verify_lb),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--name", required=True)
        p.add_argument("--i", type=int)
        p.add_argument("--j", type=int)
        p.add_argument("--h", type=int, help="Witness index (default: the construction's)")
        p.add_argument("--q", type=int, help="Boundary size for ds-subsets")
        if name == "family":
            p.add_argument("--out-dir", type=Path, required=True)
        else:
            p.add_argument("--index-demo", action="store_true")
            p.add_argument("--report", type=Path)
        p.set_defaults(func=func)
    return parser


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level: int | str = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = load_settings().log_level
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def run(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    _configure_logging(args.verbose)

    try:
        return int(args.func(args))
    except UnsupportedCombination as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (BkgParseError, GraphError, FamilyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
