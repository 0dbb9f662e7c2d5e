"""Command-line entry point: ``ahasp <command> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 size-limit error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .alns import AlnsConfig, solve
from .baselines import BruteForceLimits, brute_force, eddbid
from .decode import fdd
from .errors import ConfigError, FormatError, InstanceError, RepresentationError, SizeLimitError
from .experiments import (
    ACCEL_HEADER,
    GRID_CARRIERS,
    GRID_SHUTTLES,
    RPD_HEADER,
    SWEEP_HEADER,
    bench,
    rows_as_lists,
    sweep,
)
from .generate import GenSpec, generate
from .io import (
    dumps_instance,
    load_instance,
    load_solution,
    save_solution,
    solution_to_dict,
    verify_solution,
    write_csv,
    write_run_log,
)
from .milp import export_milp

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_SIZE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_range(text: str) -> list[int]:
    """Parse ``"2-6"`` or ``"2,3,5"``."""
    try:
        if "-" in text:
            lo, hi = text.split("-", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 2-6 or a list like 2,4,8, got {text!r}") from None


def _add_budget(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--budget-ms", type=float, help="wall-clock budget; default zeta * n^2 * (m+ + m-) ms")
    g.add_argument("--iterations", type=int, help="run a fixed number of iterations instead of a time budget")
    p.add_argument("--no-brs", action="store_true", help="full-scan insertion without deadlock pruning")
    p.add_argument("--zeta", type=float, default=10.0)


def _config(args, seed: int) -> AlnsConfig:
    cfg = AlnsConfig(seed=seed, zeta=args.zeta, use_brs=not args.no_brs)
    if args.iterations is not None:
        cfg = replace(cfg, budget_mode="iterations", iterations=args.iterations)
    elif args.budget_ms is not None:
        cfg = replace(cfg, budget_ms=args.budget_ms)
    return cfg.validate()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ahasp", description="Carrier/shuttle AGV scheduling with deadlock-free ALNS.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a seeded random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--carriers", type=int, default=4)
    g.add_argument("--shuttles", type=int, default=8)
    g.add_argument("--positions", type=int, default=GenSpec.positions)
    g.add_argument("--tightness", type=float, default=GenSpec.tightness)
    g.add_argument("--slack", type=float, default=GenSpec.slack)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path)

    s = sub.add_parser("solve", help="optimize an instance")
    s.add_argument("--instance", type=Path, required=True)
    s.add_argument("--algo", choices=["alns", "eddbid"], default="alns")
    s.add_argument("--seed", type=int, default=0)
    _add_budget(s)
    s.add_argument("--out", type=Path, help="solution JSON (default: stdout summary only)")
    s.add_argument("--log", type=Path, help="per-iteration CSV log (alns only)")

    v = sub.add_parser("verify", help="re-decode a solution file and compare")
    v.add_argument("--instance", type=Path, required=True)
    v.add_argument("--solution", type=Path, required=True)

    o = sub.add_parser("oracle", help="exact optimum by exhaustive enumeration")
    o.add_argument("--instance", type=Path, required=True)
    o.add_argument("--max-tasks", type=int, default=BruteForceLimits.max_tasks)
    o.add_argument("--strategy", choices=["dispatch", "chains"], default="dispatch")
    o.add_argument("--out", type=Path)

    b = sub.add_parser("baseline", help="earliest-due-date bidding dispatch")
    b.add_argument("--instance", type=Path, required=True)
    b.add_argument("--out", type=Path)

    m = sub.add_parser("export-milp", help="write the MILP model in LP format")
    m.add_argument("--instance", type=Path, required=True)
    m.add_argument("--big-l", type=float)
    m.add_argument("--out", type=Path)

    be = sub.add_parser("bench", help="repeated seeded runs; RPD and acceleration tables")
    be.add_argument("--instance", type=Path, nargs="+", required=True)
    be.add_argument("--seeds", type=int, default=5, help="repetitions per instance (seeds 0..R-1)")
    be.add_argument("--algo", nargs="+", choices=["alns", "eddbid"], default=["alns", "eddbid"])
    be.add_argument("--paired-brs", action="store_true", help="also run ALNS without BRS under the same budget")
    _add_budget(be)
    be.add_argument("--out", type=Path, required=True, help="RPD table CSV")
    be.add_argument("--accel-out", type=Path, help="acceleration table CSV (needs --paired-brs)")

    sw = sub.add_parser("sweep", help="fleet-size sensitivity grid")
    sw.add_argument("--instance", type=Path, nargs="+", required=True)
    sw.add_argument("--seeds", type=int, default=20)
    sw.add_argument("--carriers", type=_int_range, default=list(GRID_CARRIERS))
    sw.add_argument("--shuttles", type=_int_range, default=list(GRID_SHUTTLES))
    sw.add_argument("--algo", choices=["alns", "eddbid"], default="alns")
    _add_budget(sw)
    sw.add_argument("--out", type=Path, required=True)
    return p


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _cmd_generate(args) -> int:
    spec = GenSpec(
        n=args.n,
        m_plus=args.carriers,
        m_minus=args.shuttles,
        positions=args.positions,
        tightness=args.tightness,
        slack=args.slack,
        seed=args.seed,
    )
    _emit(dumps_instance(generate(spec)), args.out)
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.algo == "eddbid":
        sched, chain = eddbid(inst)
        meta = {"algorithm": "eddbid"}
    else:
        cfg = _config(args, args.seed)
        res = solve(inst, cfg)
        sched, chain = res.schedule, res.chain
        meta = {
            "algorithm": "alns",
            "seed": cfg.seed,
            "budget_ms": res.budget_ms,
            "iterations": res.iterations,
            "elapsed_ms": res.elapsed_ms,
            "brs": cfg.use_brs,
            "operators": res.operators,
        }
        if args.log:
            write_run_log(args.log, res.log)
    if args.out:
        save_solution(solution_to_dict(inst, chain, sched, instance_path=str(args.instance), metadata=meta), args.out)
    print(f"objective {sched.objective!r} (distance {sched.total_distance!r}, tardiness {sched.total_tardiness!r})")
    return EXIT_OK


def _cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    report = verify_solution(inst, load_solution(args.solution))
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_DATA


def _cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    res = brute_force(inst, BruteForceLimits(max_tasks=args.max_tasks), strategy=args.strategy)
    if args.out:
        sched = fdd(inst, res.optimal_chain)
        meta = {"algorithm": f"brute-force/{args.strategy}", "enumerated": res.enumerated}
        save_solution(solution_to_dict(inst, res.optimal_chain, sched, instance_path=str(args.instance), metadata=meta), args.out)
    print(f"optimal objective {res.optimal_objective!r} over {res.enumerated} candidates")
    return EXIT_OK


def _cmd_baseline(args) -> int:
    args.algo = "eddbid"
    args.log = None
    return _cmd_solve(args)


def _cmd_export(args) -> int:
    inst = load_instance(args.instance)
    _emit(export_milp(inst, args.big_l), args.out)
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.accel_out and not args.paired_brs:
        raise ConfigError("--accel-out needs --paired-brs")
    instances = [load_instance(p) for p in args.instance]
    cfg = _config(args, 0)
    rpd_rows, accel_rows = bench(instances, range(args.seeds), cfg, args.algo, paired_brs=args.paired_brs)
    write_csv(args.out, RPD_HEADER, rows_as_lists(rpd_rows, RPD_HEADER))
    if args.accel_out:
        write_csv(args.accel_out, ACCEL_HEADER, rows_as_lists(accel_rows, ACCEL_HEADER))
    print(f"wrote {len(rpd_rows)} RPD rows" + (f" and {len(accel_rows)} acceleration rows" if args.accel_out else ""))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    instances = [load_instance(p) for p in args.instance]
    cfg = _config(args, 0)
    rows = sweep(instances, range(args.seeds), cfg, args.carriers, args.shuttles, algorithm=args.algo)
    write_csv(args.out, SWEEP_HEADER, rows_as_lists(rows, SWEEP_HEADER))
    print(f"wrote {len(rows)} cells")
    return EXIT_OK


COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
    "baseline": _cmd_baseline,
    "export-milp": _cmd_export,
    "bench": _cmd_bench,
    "sweep": _cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SizeLimitError as exc:
        print(f"ahasp: size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except ConfigError as exc:
        print(f"ahasp: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, InstanceError, RepresentationError) as exc:
        print(f"ahasp: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
