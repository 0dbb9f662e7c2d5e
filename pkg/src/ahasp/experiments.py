"""Benchmark and sensitivity-sweep harnesses.

Both return plain row dicts sorted by (instance, algorithm, seed) so that CSV
output is stable.  Runs are sequential; every run owns its RNG.
"""
from __future__ import annotations

import math
from dataclasses import replace
from statistics import fmean
from typing import Iterable, Optional, Sequence

from .alns import AlnsConfig, solve
from .baselines import eddbid
from .decode import Schedule
from .generate import resize_fleet
from .metrics import RunRecord, acceleration_metrics, rpd
from .model import Instance

RPD_HEADER = ["instance", "algorithm", "seed", "objective", "best_objective", "rpd", "iterations", "elapsed_ms"]
ACCEL_HEADER = [
    "instance",
    "seed",
    "budget_ms",
    "iterations_brs",
    "iterations_full_scan",
    "A_R",
    "G_AP",
    "ipp",
]
SWEEP_HEADER = ["m_plus", "m_minus", "runs", "mean_distance", "mean_tardiness", "mean_objective"]

GRID_CARRIERS = (2, 3, 4, 5, 6)
GRID_SHUTTLES = (4, 5, 6, 7, 8, 9, 10, 11, 12)


def run_algorithm(inst: Instance, algorithm: str, config: AlnsConfig) -> tuple[Schedule, RunRecord]:
    if algorithm == "eddbid":
        sched, _ = eddbid(inst)
        return sched, RunRecord(inst.name, "eddbid", config.seed, sched.objective)
    if algorithm in ("alns", "alns-full-scan"):
        cfg = replace(config, use_brs=algorithm == "alns", log=False)
        res = solve(inst, cfg)
        rec = RunRecord(
            inst.name,
            algorithm,
            config.seed,
            res.objective,
            iterations=res.iterations,
            elapsed_ms=res.elapsed_ms,
            with_brs=cfg.use_brs,
            budget_ms=res.budget_ms,
        )
        return res.schedule, rec
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _rpd_or_nan(f: float, best: float) -> float:
    if best > 0 and math.isfinite(f):
        return rpd(f, best)
    return 0.0 if f == best else math.nan


def bench(
    instances: Sequence[Instance],
    seeds: Iterable[int],
    config: AlnsConfig,
    algorithms: Sequence[str] = ("alns", "eddbid"),
    paired_brs: bool = False,
) -> tuple[list[dict], list[dict]]:
    """Run every algorithm on every instance for every seed.

    Returns ``(rpd_rows, accel_rows)``.  RPD is measured against the best
    objective any run reached on the instance.  With ``paired_brs`` each ALNS
    run is repeated with full-scan insertion under the same budget, and the
    pair yields one acceleration row.
    """
    seeds = list(seeds)
    algos = list(algorithms)
    if paired_brs and "alns-full-scan" not in algos:
        algos.append("alns-full-scan")
    rpd_rows: list[dict] = []
    accel_rows: list[dict] = []
    for inst in instances:
        records: list[RunRecord] = []
        ipps: dict[int, float] = {}
        for seed in seeds:
            cfg = replace(config, seed=seed)
            for algo in algos:
                if algo == "eddbid" and seed != seeds[0]:
                    # Deterministic: one run per instance is enough.
                    records.append(replace(records_by(records, "eddbid")[0], seed=seed))
                    continue
                if algo == "alns" and paired_brs:
                    res = solve(inst, replace(cfg, log=False))
                    ipps[seed] = res.insertion_stats.mean_ipp
                    records.append(
                        RunRecord(
                            inst.name, "alns", seed, res.objective, res.iterations, res.elapsed_ms, True, res.budget_ms
                        )
                    )
                    continue
                _, rec = run_algorithm(inst, algo, cfg)
                records.append(rec)
        best = min(r.objective for r in records)
        for r in records:
            rpd_rows.append(
                {
                    "instance": r.instance,
                    "algorithm": r.algorithm,
                    "seed": r.seed,
                    "objective": r.objective,
                    "best_objective": best,
                    "rpd": _rpd_or_nan(r.objective, best),
                    "iterations": r.iterations,
                    "elapsed_ms": r.elapsed_ms,
                }
            )
        if paired_brs:
            for seed in seeds:
                a = next(r for r in records if r.algorithm == "alns" and r.seed == seed)
                o = next(r for r in records if r.algorithm == "alns-full-scan" and r.seed == seed)
                a_r, g_ap = acceleration_metrics(a, o, best)
                accel_rows.append(
                    {
                        "instance": inst.name,
                        "seed": seed,
                        "budget_ms": a.budget_ms,
                        "iterations_brs": a.iterations,
                        "iterations_full_scan": o.iterations,
                        "A_R": a_r,
                        "G_AP": g_ap,
                        "ipp": ipps[seed],
                    }
                )
    rpd_rows.sort(key=lambda r: (r["instance"], r["algorithm"], r["seed"]))
    accel_rows.sort(key=lambda r: (r["instance"], r["seed"]))
    return rpd_rows, accel_rows


def records_by(records: list[RunRecord], algorithm: str) -> list[RunRecord]:
    return [r for r in records if r.algorithm == algorithm]


def sweep(
    instances: Sequence[Instance],
    seeds: Iterable[int],
    config: AlnsConfig,
    carriers: Sequence[int] = GRID_CARRIERS,
    shuttles: Sequence[int] = GRID_SHUTTLES,
    algorithm: str = "alns",
    fleet_seed: int = 0,
) -> list[dict]:
    """Mean distance and tardiness per (m+, m-) cell over instances x seeds."""
    seeds = list(seeds)
    rows = []
    for mp in carriers:
        for mm in shuttles:
            dist, tard, obj = [], [], []
            for base in instances:
                inst = resize_fleet(base, mp, mm, fleet_seed)
                for seed in seeds:
                    sched, _ = run_algorithm(inst, algorithm, replace(config, seed=seed))
                    dist.append(sched.total_distance)
                    tard.append(sched.total_tardiness)
                    obj.append(sched.objective)
            rows.append(
                {
                    "m_plus": mp,
                    "m_minus": mm,
                    "runs": len(obj),
                    "mean_distance": fmean(dist),
                    "mean_tardiness": fmean(tard),
                    "mean_objective": fmean(obj),
                }
            )
    return rows


def diagonal(rows: list[dict], carriers: Sequence[int] = GRID_CARRIERS) -> list[dict]:
    """Cells where the shuttle fleet is twice the carrier fleet, by fleet size."""
    cells = {(r["m_plus"], r["m_minus"]): r for r in rows}
    return [cells[(c, 2 * c)] for c in carriers if (c, 2 * c) in cells]


def rows_as_lists(rows: list[dict], header: list[str]) -> list[list]:
    return [[_fmt(r[h]) for h in header] for r in rows]


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else v


def mean_of(rows: list[dict], key: str, where: Optional[dict] = None) -> float:
    sel = [r[key] for r in rows if not where or all(r[k] == v for k, v in where.items())]
    return fmean(sel)
