"""Reference solvers: EDDBID dispatching and an exhaustive oracle for tiny instances."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .chain import DualChain
from .deadlock import is_feasible
from .decode import Schedule, append_step, evaluate, fdd
from .errors import SizeLimitError
from .model import Instance, check_instance


def eddbid(inst: Instance) -> tuple[Schedule, DualChain]:
    """Earliest-due-date dispatching with a per-task auction.

    Tasks are taken in nondecreasing due date (ties by id).  Every (carrier,
    shuttle) pair bids the cost of appending the task to both of its route
    tails; appending never touches earlier tasks, so the bid is exactly the
    objective increase.  The lowest bid wins, ties going to the lowest carrier
    and then the lowest shuttle index.
    """
    check_instance(inst)
    lam = inst.timing.lam
    c_tail = [(0.0, p) for p in inst.fleet.carrier_starts]
    s_tail = [(0.0, p) for p in inst.fleet.shuttle_starts]
    chain = DualChain.empty(inst.m_plus, inst.m_minus)
    for task in sorted(inst.tasks, key=lambda t: (t.due, t.id)):
        best = None
        for cr, (pd, pp) in enumerate(c_tail):
            for sr, (qe, qp) in enumerate(s_tail):
                det, done, dist, tard = append_step(inst, pd, pp, qe, qp, task.id)
                bid = lam * dist + (1 - lam) * tard
                if best is None or bid < best[0]:
                    best = (bid, cr, sr, det, done)
        _, cr, sr, det, done = best
        c_tail[cr] = (det, task.dest)
        s_tail[sr] = (done, task.dest)
        chain.carrier_routes[cr].append(task.id)
        chain.shuttle_routes[sr].append(task.id)
    chain = DualChain(chain.carrier_routes, chain.shuttle_routes)
    return fdd(inst, chain), chain


# -- exhaustive oracle ---------------------------------------------------------


@dataclass(frozen=True)
class BruteForceLimits:
    max_tasks: int = 5
    # Upper bound on the number of leaves the chosen strategy may visit.
    max_candidates: int = 5_000_000


@dataclass(frozen=True)
class OracleResult:
    optimal_objective: float
    optimal_chain: DualChain
    enumerated: int


def candidate_count(inst: Instance, strategy: str = "dispatch") -> int:
    n, mp, mm = inst.n, inst.m_plus, inst.m_minus
    if strategy == "dispatch":
        return math.factorial(n) * (mp * mm) ** n
    per_side = lambda m: math.factorial(n) * math.comb(n + m - 1, m - 1)  # noqa: E731
    return per_side(mp) * per_side(mm)


def route_families(tasks: list[int], m: int) -> Iterator[list[list[int]]]:
    """Every way to spread ``tasks`` over ``m`` ordered routes, each exactly once."""
    n = len(tasks)
    for perm in itertools.permutations(tasks):
        for cuts in itertools.combinations_with_replacement(range(n + 1), m - 1):
            bounds = (0,) + cuts + (n,)
            yield [list(perm[bounds[i] : bounds[i + 1]]) for i in range(m)]


def brute_force(
    inst: Instance, limits: Optional[BruteForceLimits] = None, *, strategy: str = "dispatch"
) -> OracleResult:
    """Exact optimum by exhaustive enumeration.

    ``strategy="chains"`` walks every pair of route families, drops deadlocked
    ones with :func:`is_feasible` and decodes the rest.  ``"dispatch"`` (the
    default, far fewer leaves) enumerates every firing sequence instead: at
    each step any unscheduled task may be appended to the tails of any
    (carrier, shuttle) pair.  Every feasible chain has a topological firing
    order, so both walks cover the same set of chains.  Ties in objective go
    to the lexicographically smallest chain, so both strategies agree.
    """
    limits = limits or BruteForceLimits()
    check_instance(inst)
    if inst.n > limits.max_tasks:
        raise SizeLimitError(f"brute force is limited to {limits.max_tasks} tasks, instance has {inst.n}")
    if strategy not in ("dispatch", "chains"):
        raise ValueError(f"unknown strategy {strategy!r}")
    size = candidate_count(inst, strategy)
    if size > limits.max_candidates:
        raise SizeLimitError(
            f"{strategy} enumeration would visit {size} candidates (limit {limits.max_candidates})"
        )
    if strategy == "chains":
        return _by_chains(inst)
    return _by_dispatch(inst)


def _by_chains(inst: Instance) -> OracleResult:
    ids = sorted(inst.task_ids)
    best_f, best_key, best_chain = math.inf, None, None
    count = 0
    shuttle_side = list(route_families(ids, inst.m_minus))
    for cr in route_families(ids, inst.m_plus):
        for sr in shuttle_side:
            chain = DualChain(cr, sr)
            if not is_feasible(chain):
                continue
            count += 1
            f = evaluate(inst, chain)
            key = chain.key()
            if f < best_f or (f == best_f and key < best_key):
                best_f, best_key, best_chain = f, key, chain
    return OracleResult(best_f, best_chain, count)


def _by_dispatch(inst: Instance) -> OracleResult:
    lam = inst.timing.lam
    ids = sorted(inst.task_ids)
    n = len(ids)
    c_tail = [(0.0, p) for p in inst.fleet.carrier_starts]
    s_tail = [(0.0, p) for p in inst.fleet.shuttle_starts]
    c_routes: list[list[int]] = [[] for _ in c_tail]
    s_routes: list[list[int]] = [[] for _ in s_tail]
    dists: list[float] = []
    tards: list[float] = []
    used = [False] * n
    best = [math.inf, None]
    count = 0
    dest = inst.tables.dest

    def leaf():
        nonlocal count
        count += 1
        f = lam * math.fsum(dists) + (1 - lam) * math.fsum(tards)
        if f <= best[0]:
            key = tuple(map(tuple, c_routes)), tuple(map(tuple, s_routes))
            if f < best[0] or key < best[1]:
                best[0], best[1] = f, key

    def rec(depth: int):
        if depth == n:
            leaf()
            return
        for idx in range(n):
            if used[idx]:
                continue
            k = ids[idx]
            used[idx] = True
            for cr in range(len(c_tail)):
                pd, pp = c_tail[cr]
                for sr in range(len(s_tail)):
                    qe, qp = s_tail[sr]
                    det, done, dist, tard = append_step(inst, pd, pp, qe, qp, k)
                    c_tail[cr] = (det, dest[k])
                    s_tail[sr] = (done, dest[k])
                    c_routes[cr].append(k)
                    s_routes[sr].append(k)
                    dists.append(dist)
                    tards.append(tard)
                    rec(depth + 1)
                    tards.pop()
                    dists.pop()
                    s_routes[sr].pop()
                    c_routes[cr].pop()
                    s_tail[sr] = (qe, qp)
                c_tail[cr] = (pd, pp)
            used[idx] = False

    rec(0)
    carrier, shuttle = best[1]
    return OracleResult(best[0], DualChain(carrier, shuttle), count)
