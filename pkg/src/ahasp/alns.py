"""Adaptive large neighborhood search over dual chains."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Optional

from .chain import DualChain
from .decode import Schedule, fdd
from .errors import ConfigError
from .model import Instance, check_instance
from .operators import (
    REMOVALS,
    InsertionStats,
    OperatorBank,
    accept,
    best_insertion,
    insert_greedy,
    removal_count,
    reward,
    select_operator,
    update_weights,
)

BUDGET_MODES = ("time", "iterations")


@dataclass(frozen=True)
class AlnsConfig:
    mu: float = 20.0
    phi: float = 0.3
    rho: float = 0.1
    kappa: int = 15
    psi: float = 0.3
    zeta: float = 10.0
    scores: tuple[float, float, float] = (33.0, 9.0, 13.0)
    seed: int = 0
    budget_mode: str = "time"
    # Explicit budgets override the defaults: budget_ms for "time" mode,
    # iterations for "iterations" mode.
    budget_ms: Optional[float] = None
    iterations: int = 100
    use_brs: bool = True
    # Re-run every insertion with the opposite scan and fail on any mismatch.
    audit: bool = False
    log: bool = True

    def validate(self) -> "AlnsConfig":
        bad = []
        if not self.mu >= 0:
            bad.append(f"mu must be >= 0, got {self.mu}")
        for name in ("phi", "rho", "psi"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                bad.append(f"{name} must lie in [0, 1], got {v}")
        if not isinstance(self.kappa, int) or self.kappa < 1:
            bad.append(f"kappa must be a positive integer, got {self.kappa}")
        if not self.zeta > 0:
            bad.append(f"zeta must be > 0, got {self.zeta}")
        if len(self.scores) != 3 or any(not s >= 0 for s in self.scores):
            bad.append(f"scores must be three non-negative numbers, got {self.scores}")
        if self.budget_mode not in BUDGET_MODES:
            bad.append(f"budget_mode must be one of {BUDGET_MODES}, got {self.budget_mode!r}")
        if self.budget_ms is not None and not self.budget_ms >= 0:
            bad.append(f"budget_ms must be >= 0, got {self.budget_ms}")
        if self.iterations < 0:
            bad.append(f"iterations must be >= 0, got {self.iterations}")
        if bad:
            raise ConfigError("invalid ALNS config: " + "; ".join(bad))
        return self


def default_budget_ms(inst: Instance, zeta: float = 10.0) -> float:
    """zeta * n^2 * (m+ + m-) milliseconds."""
    return zeta * inst.n ** 2 * (inst.m_plus + inst.m_minus)


def temperature(inst: Instance, mu: float) -> float:
    total = math.fsum(inst.dist[t.source][t.dest] for t in inst.tasks)
    return mu * total / (inst.n * (inst.m_plus + inst.m_minus))


@dataclass
class LogRow:
    iteration: int
    elapsed_ms: float
    removal: str
    insertion: str
    current_f: float
    best_f: float
    accepted: bool


@dataclass
class AlnsState:
    inst: Instance
    config: AlnsConfig
    rng: random.Random
    chain: DualChain
    schedule: Schedule
    best_chain: DualChain
    best_f: float
    removed: list[int] = field(default_factory=list)
    removal_cost: dict[int, float] = field(default_factory=dict)
    bank: OperatorBank = field(default_factory=OperatorBank)
    insertion_stats: InsertionStats = field(default_factory=InsertionStats)

    @property
    def current_f(self) -> float:
        return self.schedule.objective


@dataclass
class AlnsResult:
    chain: DualChain
    schedule: Schedule
    objective: float
    iterations: int
    elapsed_ms: float
    initial_objective: float
    budget_ms: Optional[float]
    log: list[LogRow]
    operators: list[dict]
    insertion_stats: InsertionStats


def initial_solution(
    inst: Instance, *, use_brs: bool = True, stats: Optional[InsertionStats] = None
) -> DualChain:
    """Insert tasks one by one in due-date order at their cheapest feasible slot pair."""
    chain = DualChain.empty(inst.m_plus, inst.m_minus)
    for task in sorted(inst.tasks, key=lambda t: (t.due, t.id)):
        pl = best_insertion(inst, chain, task.id, use_brs=use_brs, stats=stats)
        chain.insert(task.id, pl.carrier_slot, pl.shuttle_slot)
    return chain


def solve(inst: Instance, config: Optional[AlnsConfig] = None) -> AlnsResult:
    config = (config or AlnsConfig()).validate()
    check_instance(inst)
    rng = random.Random(config.seed)
    t0 = time.perf_counter()
    if config.budget_mode == "time":
        budget_ms = config.budget_ms if config.budget_ms is not None else default_budget_ms(inst, config.zeta)
        max_iter = None
    else:
        budget_ms = None
        max_iter = config.iterations

    stats = InsertionStats()
    chain = initial_solution(inst, use_brs=config.use_brs, stats=stats)
    schedule = fdd(inst, chain)
    state = AlnsState(
        inst=inst,
        config=config,
        rng=rng,
        chain=chain,
        schedule=schedule,
        best_chain=chain.copy(),
        best_f=schedule.objective,
        insertion_stats=stats,
    )
    best_schedule = schedule
    initial_f = schedule.objective
    temp = temperature(inst, config.mu)
    count = removal_count(config.phi, inst.n)
    s_best, s_better, s_accept = config.scores
    log: list[LogRow] = []

    it = 0
    while True:
        if max_iter is not None:
            if it >= max_iter:
                break
        elif (time.perf_counter() - t0) * 1000.0 >= budget_ms:
            break
        it += 1
        r_op = select_operator(state.bank, "removal", rng)
        i_op = select_operator(state.bank, "insertion", rng)
        backup = state.chain.copy()
        REMOVALS[r_op](state, count)
        cand_f = insert_greedy(state, i_op)
        cur_f = state.current_f

        ok = accept(cur_f, cand_f, temp, rng)
        if ok:
            state.schedule = fdd(inst, state.chain)
            if cand_f < state.best_f:
                state.best_f = cand_f
                state.best_chain = state.chain.copy()
                best_schedule = state.schedule
                reward(state.bank, r_op, i_op, s_best)
            elif cand_f < cur_f:
                reward(state.bank, r_op, i_op, s_better)
            else:
                reward(state.bank, r_op, i_op, s_accept)
        else:
            state.chain = backup
        state.removal_cost.clear()

        if it % config.kappa == 0:
            update_weights(state.bank, config.rho)
        if config.log:
            log.append(
                LogRow(
                    iteration=it,
                    elapsed_ms=(time.perf_counter() - t0) * 1000.0,
                    removal=r_op,
                    insertion=i_op,
                    current_f=state.current_f,
                    best_f=state.best_f,
                    accepted=ok,
                )
            )

    return AlnsResult(
        chain=state.best_chain,
        schedule=best_schedule,
        objective=state.best_f,
        iterations=it,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        initial_objective=initial_f,
        budget_ms=budget_ms,
        log=log,
        operators=state.bank.summary(),
        insertion_stats=state.insertion_stats,
    )

