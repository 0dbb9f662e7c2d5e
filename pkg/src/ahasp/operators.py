"""Destroy/repair operators, roulette-wheel adaptation and SA acceptance.

Removal operators: RR (random), HCR (highest cost), LDR (longest distance),
LTR (largest tardiness), SR (Shaw relatedness).  Insertion operators differ
only in the order removed tasks are reinserted: GI (random), UGI (earliest
due), CGI (highest cost at removal time).  Every insertion puts the task at
the cheapest feasible (carrier slot, shuttle slot) pair.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

from .chain import DualChain, Side, Slot
from .deadlock import blocked_gaps, positions
from .decode import INFEASIBLE, evaluate
from .errors import ConfigError, ContractError
from .model import Instance

if TYPE_CHECKING:
    from .alns import AlnsState

REMOVAL_OPS = ("RR", "HCR", "LDR", "LTR", "SR")
INSERTION_OPS = ("GI", "UGI", "CGI")


# -- operator bank -------------------------------------------------------------


@dataclass
class OpStat:
    weight: float = 1.0
    score: float = 0.0
    uses: int = 0
    total_uses: int = 0


@dataclass
class OperatorBank:
    removal: dict[str, OpStat] = field(default_factory=lambda: {o: OpStat() for o in REMOVAL_OPS})
    insertion: dict[str, OpStat] = field(default_factory=lambda: {o: OpStat() for o in INSERTION_OPS})

    def category(self, name: str) -> dict[str, OpStat]:
        if name == "removal":
            return self.removal
        if name == "insertion":
            return self.insertion
        raise ConfigError(f"unknown operator category {name!r}")

    def summary(self) -> list[dict]:
        rows = []
        for cat in ("removal", "insertion"):
            for op, st in self.category(cat).items():
                rows.append({"category": cat, "operator": op, "weight": st.weight, "uses": st.total_uses})
        return rows


def select_operator(bank: OperatorBank, category: str, rng: random.Random) -> str:
    """Roulette-wheel draw: ``o`` is picked with probability w_o / sum(w)."""
    ops = bank.category(category)
    if not ops:
        raise ConfigError(f"operator category {category!r} is empty")
    names = list(ops)
    total = math.fsum(ops[o].weight for o in names)
    x = rng.random() * total
    acc = 0.0
    chosen = names[-1]
    for o in names:
        acc += ops[o].weight
        if x < acc:
            chosen = o
            break
    ops[chosen].uses += 1
    ops[chosen].total_uses += 1
    return chosen


def reward(bank: OperatorBank, removal: str, insertion: str, sigma: float) -> None:
    bank.removal[removal].score += sigma
    bank.insertion[insertion].score += sigma


def update_weights(bank: OperatorBank, rho: float) -> OperatorBank:
    """w = (1 - rho) * w + rho * score / uses, then reset the segment counters."""
    for cat in (bank.removal, bank.insertion):
        for st in cat.values():
            if st.uses > 0:
                st.weight = (1 - rho) * st.weight + rho * st.score / st.uses
            st.score = 0.0
            st.uses = 0
    return bank


def accept(current_f: float, candidate_f: float, temperature: float, rng: random.Random) -> bool:
    """Simulated-annealing test at a fixed temperature."""
    if candidate_f <= current_f:
        return True
    if temperature <= 0 or candidate_f == INFEASIBLE:
        return False
    return rng.random() < math.exp(-(candidate_f - current_f) / temperature)


# -- removal -------------------------------------------------------------------


def removal_count(phi: float, n: int) -> int:
    # Round half up; Python's round() would send 2.5 to 2.
    return max(1, int(math.floor(phi * n + 0.5)))


def _take(state: "AlnsState", tasks) -> list[int]:
    costs = state.schedule.task_costs(state.inst.timing.lam)
    out = []
    for t in tasks:
        state.chain.remove(t)
        state.removed.append(t)
        state.removal_cost[t] = costs[t]
        out.append(t)
    return out


def _top_by(state: "AlnsState", count: int, key) -> list[int]:
    placed = sorted(state.chain)
    placed.sort(key=lambda t: -key(t))  # stable: ties keep ascending id
    return placed[: min(count, len(placed))]


def remove_random(state: "AlnsState", count: int) -> list[int]:
    placed = sorted(state.chain)
    return _take(state, state.rng.sample(placed, min(count, len(placed))))


def remove_highest_cost(state: "AlnsState", count: int) -> list[int]:
    lam = state.inst.timing.lam
    pt = state.schedule.per_task
    return _take(state, _top_by(state, count, lambda t: pt[t].cost(lam)))


def remove_longest_distance(state: "AlnsState", count: int) -> list[int]:
    pt = state.schedule.per_task
    return _take(state, _top_by(state, count, lambda t: pt[t].distance))


def remove_largest_tardiness(state: "AlnsState", count: int) -> list[int]:
    pt = state.schedule.per_task
    return _take(state, _top_by(state, count, lambda t: pt[t].tardiness))


def shaw_relatedness(inst: Instance, i: int, j: int, psi: float) -> float:
    a, b = inst.by_id[i], inst.by_id[j]
    d = inst.dist
    return psi * (d[a.source][b.source] + d[a.dest][b.dest]) + (1 - psi) * abs(a.due - b.due)


def remove_shaw(state: "AlnsState", count: int) -> list[int]:
    placed = sorted(state.chain)
    if count < 1 or not placed:
        return []
    ref = state.rng.choice(placed)
    psi = state.config.psi
    others = [t for t in placed if t != ref]
    others.sort(key=lambda t: shaw_relatedness(state.inst, ref, t, psi))
    return _take(state, [ref] + others[: min(count, len(placed)) - 1])


REMOVALS = {
    "RR": remove_random,
    "HCR": remove_highest_cost,
    "LDR": remove_longest_distance,
    "LTR": remove_largest_tardiness,
    "SR": remove_shaw,
}


# -- insertion -----------------------------------------------------------------


@dataclass
class InsertionStats:
    insertions: int = 0
    pairs_total: int = 0
    pairs_evaluated: int = 0
    pairs_blocked: int = 0
    brs_calls: int = 0
    ipp_sum: float = 0.0
    audits: int = 0

    @property
    def mean_ipp(self) -> float:
        return 100.0 * self.ipp_sum / self.insertions if self.insertions else 0.0

    def merge(self, other: "InsertionStats") -> None:
        for f in (
            "insertions",
            "pairs_total",
            "pairs_evaluated",
            "pairs_blocked",
            "brs_calls",
            "ipp_sum",
            "audits",
        ):
            setattr(self, f, getattr(self, f) + getattr(other, f))


@dataclass(frozen=True)
class Placement:
    objective: float
    carrier_slot: Slot
    shuttle_slot: Slot


def best_insertion(
    inst: Instance,
    chain: DualChain,
    task: int,
    *,
    use_brs: bool = True,
    stats: Optional[InsertionStats] = None,
) -> Placement:
    """Cheapest feasible slot pair for ``task``; ``chain`` is left unchanged.

    Pairs are scanned in (carrier, gap, shuttle, gap) order and only a strictly
    better objective replaces the incumbent, so ties go to the
    lexicographically smallest pair.  With ``use_brs`` the shuttle slots that
    BRS marks as deadlocking are skipped without decoding; otherwise every
    pair is decoded and deadlocked ones score infinity.  Both modes return the
    same placement.
    """
    if task in chain:
        raise ContractError(f"task {task} is already placed")
    best_f = INFEASIBLE
    best: Optional[tuple[Slot, Slot]] = None
    s_pos = positions(chain, Side.SHUTTLE) if use_brs else None
    s_slots = chain.slots(Side.SHUTTLE)
    c_slots = chain.slots(Side.CARRIER)
    evaluated = blocked_total = 0
    for cs in c_slots:
        blocked = blocked_gaps(chain, cs, s_pos) if use_brs else ()
        blocked_total += len(blocked)
        for ss in s_slots:
            if blocked and (ss.agv, ss.gap) in blocked:
                continue
            chain.insert(task, cs, ss)
            f = evaluate(inst, chain)
            chain.remove(task)
            evaluated += 1
            if f == INFEASIBLE:
                # Only reachable without BRS: the decoder found the deadlock.
                blocked_total += 1
            elif f < best_f:
                best_f = f
                best = (cs, ss)
    if best is None:
        raise ContractError(f"no feasible slot pair for task {task}")
    if stats is not None:
        total = len(c_slots) * len(s_slots)
        stats.insertions += 1
        stats.pairs_total += total
        stats.pairs_evaluated += evaluated
        stats.pairs_blocked += blocked_total
        if use_brs:
            stats.brs_calls += len(c_slots)
        stats.ipp_sum += blocked_total / total
    return Placement(best_f, best[0], best[1])


def _next_task(state: "AlnsState", rule: str) -> int:
    pool = state.removed
    if rule == "GI":
        return pool[state.rng.randrange(len(pool))]
    if rule == "UGI":
        return min(pool, key=lambda t: (state.inst.by_id[t].due, t))
    if rule == "CGI":
        return min(pool, key=lambda t: (-state.removal_cost.get(t, 0.0), t))
    raise ConfigError(f"unknown insertion rule {rule!r}")


def insert_greedy(state: "AlnsState", rule: str) -> float:
    """Reinsert every removed task; returns the objective of the repaired chain."""
    f = evaluate(state.inst, state.chain)
    while state.removed:
        task = _next_task(state, rule)
        state.removed.remove(task)
        pl = best_insertion(
            state.inst, state.chain, task, use_brs=state.config.use_brs, stats=state.insertion_stats
        )
        if state.config.audit:
            ref = best_insertion(state.inst, state.chain, task, use_brs=not state.config.use_brs)
            state.insertion_stats.audits += 1
            if ref != pl:
                raise ContractError(f"BRS and full-scan insertion disagree for task {task}: {pl} vs {ref}")
        state.chain.insert(task, pl.carrier_slot, pl.shuttle_slot)
        f = pl.objective
        state.removal_cost.pop(task, None)
    return f
