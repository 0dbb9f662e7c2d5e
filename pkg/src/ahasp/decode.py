"""Firing-driven decoding: turn a dual chain into a timed schedule.

Decoding fires the transitions of the solution net one at a time.  When task
``j`` fires, its carrier's previous task ``p`` and its shuttle's previous task
``q`` have already fired, so its timeline follows directly:

    carrier dwells at e_p, drives e_p -> e_q, attaches the shuttle, drives to
    s_j, the shuttle picks up, both drive to e_j, detach, the shuttle handles.

A route head uses a virtual predecessor located at the AGV's start position
with detach/completion time 0.  If the enabled set runs dry before every
transition has fired, the net is deadlocked and the chain is infeasible.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .chain import DualChain
from .errors import RepresentationError
from .model import Instance, TaskSpec, travel_time
from .petri import Marking, SolutionNet

INFEASIBLE = math.inf


@dataclass(frozen=True, slots=True)
class TaskTiming:
    start: float
    attach: float
    detach: float
    completion: float
    wait: float
    distance: float
    tardiness: float

    def cost(self, lam: float) -> float:
        return lam * self.distance + (1 - lam) * self.tardiness


@dataclass(frozen=True)
class Schedule:
    per_task: dict[int, TaskTiming]
    objective: float
    feasible: bool
    firing_order: tuple[int, ...]
    total_distance: float = 0.0
    total_tardiness: float = 0.0

    def task_costs(self, lam: float) -> dict[int, float]:
        return {i: tm.cost(lam) for i, tm in self.per_task.items()}


def leg_distance(inst: Instance, carrier_prev_dest: int, shuttle_prev_dest: int, task: TaskSpec) -> float:
    """Meters the carrier drives for ``task``: to the shuttle, to the source, to the destination."""
    d = inst.dist
    return d[carrier_prev_dest][shuttle_prev_dest] + d[shuttle_prev_dest][task.source] + d[task.source][task.dest]


def carrier_wait(
    inst: Instance,
    shuttle_prev_completion: float,
    carrier_prev_detach: float,
    carrier_prev_dest: int,
    shuttle_prev_dest: int,
) -> float:
    w = shuttle_prev_completion - carrier_prev_detach - travel_time(inst, carrier_prev_dest, shuttle_prev_dest)
    return w if w > 0 else 0.0


def detach_time(
    inst: Instance,
    carrier_prev_detach: float,
    wait: float,
    carrier_prev_dest: int,
    shuttle_prev_dest: int,
    task: TaskSpec,
) -> float:
    tm = inst.timing
    return (
        carrier_prev_detach
        + wait
        + travel_time(inst, carrier_prev_dest, shuttle_prev_dest)
        + tm.attach
        + travel_time(inst, shuttle_prev_dest, task.source)
        + tm.pickup
        + travel_time(inst, task.source, task.dest)
        + tm.detach
    )


def completion_and_tardiness(task: TaskSpec, detach: float) -> tuple[float, float]:
    completion = detach + task.handling
    late = completion - task.due
    return completion, (late if late > 0 else 0.0)


def objective_value(lam: float, distances, tardiness) -> float:
    # fsum is exactly rounded, so the result does not depend on firing order.
    return lam * math.fsum(distances) + (1 - lam) * math.fsum(tardiness)


def check_chain(inst: Instance, chain: DualChain) -> None:
    if chain.m_plus != inst.m_plus or chain.m_minus != inst.m_minus:
        raise RepresentationError(
            f"chain has {chain.m_plus} carrier / {chain.m_minus} shuttle routes, "
            f"instance fleet is {inst.m_plus} / {inst.m_minus}"
        )
    unknown = chain.c_agv.keys() - inst.by_id.keys()
    if unknown:
        raise RepresentationError(f"chain contains unknown tasks {sorted(unknown)}")


def fdd(
    inst: Instance,
    chain: DualChain,
    *,
    rng: Optional[random.Random] = None,
    on_fire: Optional[Callable[[int, Marking], None]] = None,
    counters: Optional[dict] = None,
) -> Schedule:
    """Decode ``chain`` by firing its Petri net.

    Among simultaneously enabled transitions the one whose shuttle has the
    lowest index fires first (there is at most one per shuttle); pass ``rng``
    to pick uniformly at random instead.  The result does not depend on the
    choice because the net is conflict-free.  Partial chains are decoded over
    their placed tasks only.
    """
    check_chain(inst, chain)
    net = SolutionNet(chain)
    starts_c = inst.fleet.carrier_starts
    starts_s = inst.fleet.shuttle_starts
    tm = inst.timing
    by_id = inst.by_id
    if counters is None:
        counters = {}
    counters.setdefault("transitions", 0)
    counters.setdefault("places", 0)

    heads_c = {r[0] for r in chain.carrier_routes if r}
    heads_s = {r[0] for r in chain.shuttle_routes if r}
    ready = sorted(heads_c & heads_s)
    counters["places"] += len(heads_c) + len(heads_s)
    if rng is None:
        heap = [(chain.s_agv[t], t) for t in ready]
        heapq.heapify(heap)
    else:
        pool = list(ready)

    timings: dict[int, TaskTiming] = {}
    order: list[int] = []
    while True:
        if rng is None:
            if not heap:
                break
            _, k = heapq.heappop(heap)
        else:
            if not pool:
                break
            j = rng.randrange(len(pool))
            pool[j], pool[-1] = pool[-1], pool[j]
            k = pool.pop()

        task = by_id[k]
        p = chain.c_prev[k]
        q = chain.s_prev[k]
        if p is None:
            p_detach, p_pos = 0.0, starts_c[chain.c_agv[k]]
        else:
            p_detach, p_pos = timings[p].detach, by_id[p].dest
        if q is None:
            q_done, q_pos = 0.0, starts_s[chain.s_agv[k]]
        else:
            q_done, q_pos = timings[q].completion, by_id[q].dest

        w = carrier_wait(inst, q_done, p_detach, p_pos, q_pos)
        start = p_detach + w
        attach = start + travel_time(inst, p_pos, q_pos)
        detach = detach_time(inst, p_detach, w, p_pos, q_pos, task)
        completion, tardiness = completion_and_tardiness(task, detach)
        timings[k] = TaskTiming(
            start=start,
            attach=attach,
            detach=detach,
            completion=completion,
            wait=w,
            distance=leg_distance(inst, p_pos, q_pos, task),
            tardiness=tardiness,
        )
        order.append(k)
        marking = net.fire(k)
        counters["transitions"] += 1
        if on_fire is not None:
            on_fire(k, marking)

        seen = None
        for place in net.postset(k):
            counters["places"] += 1
            for t in net.place_postset(place):
                if t != seen and net.is_enabled(t):
                    seen = t
                    if rng is None:
                        heapq.heappush(heap, (chain.s_agv[t], t))
                    else:
                        pool.append(t)

    if len(order) < len(chain):
        return Schedule(per_task=timings, objective=INFEASIBLE, feasible=False, firing_order=tuple(order))
    dist = [timings[i].distance for i in order]
    tard = [timings[i].tardiness for i in order]
    return Schedule(
        per_task=timings,
        objective=objective_value(tm.lam, dist, tard),
        feasible=True,
        firing_order=tuple(order),
        total_distance=math.fsum(dist),
        total_tardiness=math.fsum(tard),
    )


def evaluate(inst: Instance, chain: DualChain) -> float:
    """Objective of ``chain`` (or ``INFEASIBLE``); the lean twin of :func:`fdd`.

    Same firing semantics and the same floating-point operation order as
    :func:`fdd`, without building timing records.  Used on the insertion hot
    path where only the objective is needed.
    """
    tb = inst.tables
    tt = tb.tt
    dist = tb.dist
    src = tb.source
    dst = tb.dest
    due = tb.due
    hdl = tb.handling
    tm = inst.timing
    ta, tp, td = tm.attach, tm.pickup, tm.detach
    starts_c = inst.fleet.carrier_starts
    starts_s = inst.fleet.shuttle_starts
    c_prev, c_next, c_agv = chain.c_prev, chain.c_next, chain.c_agv
    s_prev, s_next, s_agv = chain.s_prev, chain.s_next, chain.s_agv

    stack = [r[0] for r in chain.carrier_routes if r and s_prev[r[0]] is None]
    t_det: dict[int, float] = {}
    t_done: dict[int, float] = {}
    dists: list[float] = []
    tards: list[float] = []
    pop = stack.pop
    push = stack.append
    while stack:
        k = pop()
        p = c_prev[k]
        q = s_prev[k]
        if p is None:
            pd = 0.0
            pp = starts_c[c_agv[k]]
        else:
            pd = t_det[p]
            pp = dst[p]
        if q is None:
            qe = 0.0
            qp = starts_s[s_agv[k]]
        else:
            qe = t_done[q]
            qp = dst[q]
        s = src[k]
        e = dst[k]
        t1 = tt[pp][qp]
        w = qe - pd - t1
        if w < 0:
            w = 0.0
        det = pd + w + t1 + ta + tt[qp][s] + tp + tt[s][e] + td
        done = det + hdl[k]
        t_det[k] = det
        t_done[k] = done
        late = done - due[k]
        tards.append(late if late > 0 else 0.0)
        dists.append(dist[pp][qp] + dist[qp][s] + dist[s][e])

        c = c_next[k]
        if c is not None:
            sp = s_prev[c]
            if sp is None or sp in t_done:
                push(c)
        n2 = s_next[k]
        if n2 is not None and n2 != c:
            cp = c_prev[n2]
            if cp is None or cp in t_done:
                push(n2)

    if len(t_done) < len(c_agv):
        return INFEASIBLE
    return objective_value(tm.lam, dists, tards)


def append_step(inst: Instance, pd: float, pp: int, qe: float, qp: int, task: int) -> tuple[float, float, float, float]:
    """Timing of ``task`` given its carrier's (detach, position) and shuttle's (completion, position).

    Returns ``(detach, completion, distance, tardiness)`` computed with exactly
    the same operation order as :func:`evaluate`, so callers that build
    schedules task by task reproduce decoder objectives bit for bit.
    """
    tb = inst.tables
    tt = tb.tt
    tm = inst.timing
    s = tb.source[task]
    e = tb.dest[task]
    t1 = tt[pp][qp]
    w = qe - pd - t1
    if w < 0:
        w = 0.0
    det = pd + w + t1 + tm.attach + tt[qp][s] + tm.pickup + tt[s][e] + tm.detach
    done = det + tb.handling[task]
    late = done - tb.due[task]
    d = tb.dist
    return det, done, d[pp][qp] + d[qp][s] + d[s][e], (late if late > 0 else 0.0)
