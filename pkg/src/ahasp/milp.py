"""Mixed-integer model export in CPLEX LP format.

Variables
---------
``x_r_i_j``  binary; AGV ``r`` (carriers ``1..m+``, shuttles ``m+ + 1 ..``)
             drives from node ``i`` to node ``j``.  Node ``0`` is the AGV's
             own virtual start/end node, other nodes are task ids.
``Td_j``     detach time of task ``j``.
``Te_j``     completion time of task ``j``.
``wt_j``     carrier dwell before task ``j``.
``delta_j``  carrier distance for task ``j``.
``tau_j``    tardiness of task ``j``.

The timing constraints are written for every (carrier predecessor ``p``,
shuttle predecessor ``q``) combination of task ``j`` and relaxed by
``L * (2 - x_p_j - x_q_j)`` when that combination is not selected.  Time
strictly increases along every arc when attach + pick-up + detach > 0, which
rules out subtours.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .chain import DualChain
from .decode import Schedule
from .model import Instance, check_instance


@dataclass
class Constraint:
    name: str
    coefs: dict[str, float]
    sense: str  # "<=", ">=" or "="
    rhs: float


@dataclass
class MilpModel:
    objective: dict[str, float] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    # name -> (lower, upper, is_binary)
    variables: dict[str, tuple[float, float, bool]] = field(default_factory=dict)
    big_l: float = 0.0

    def add_var(self, name: str, lb: float = 0.0, ub: float = math.inf, binary: bool = False) -> str:
        self.variables[name] = (lb, ub, binary)
        return name

    def add(self, name: str, coefs: dict[str, float], sense: str, rhs: float) -> None:
        self.constraints.append(Constraint(name, {k: v for k, v in coefs.items() if v != 0}, sense, rhs))

    @property
    def binaries(self) -> list[str]:
        return [v for v, (_, _, b) in self.variables.items() if b]

    @property
    def continuous(self) -> list[str]:
        return [v for v, (_, _, b) in self.variables.items() if not b]

    def violations(self, values: dict[str, float], tol: float = 1e-6) -> list[str]:
        """Names of constraints (and bounds) that ``values`` breaks."""
        bad = []
        for name, (lb, ub, _) in self.variables.items():
            v = values.get(name, 0.0)
            if v < lb - tol or v > ub + tol:
                bad.append(f"bound:{name}")
        for c in self.constraints:
            lhs = math.fsum(a * values.get(v, 0.0) for v, a in c.coefs.items())
            scale = tol * max(1.0, abs(c.rhs))
            if (c.sense == "<=" and lhs > c.rhs + scale) or (c.sense == ">=" and lhs < c.rhs - scale) or (
                c.sense == "=" and abs(lhs - c.rhs) > scale
            ):
                bad.append(c.name)
        return bad

    def objective_value(self, values: dict[str, float]) -> float:
        return math.fsum(a * values.get(v, 0.0) for v, a in self.objective.items())

    def to_lp(self) -> str:
        out = ["\\ carrier/shuttle scheduling model", f"\\ big L = {_num(self.big_l)}", "Minimize"]
        out.append(" obj:" + _terms(self.objective))
        out.append("Subject To")
        for c in self.constraints:
            op = {"<=": "<=", ">=": ">=", "=": "="}[c.sense]
            out.append(f" {c.name}:{_terms(c.coefs)} {op} {_num(c.rhs)}")
        out.append("Bounds")
        for name, (lb, ub, binary) in self.variables.items():
            if binary:
                continue
            if ub == math.inf:
                out.append(f" {name} >= {_num(lb)}")
            else:
                out.append(f" {_num(lb)} <= {name} <= {_num(ub)}")
        out.append("Binaries")
        bins = self.binaries
        for i in range(0, len(bins), 8):
            out.append(" " + " ".join(bins[i : i + 8]))
        out.append("End")
        return "\n".join(out) + "\n"


def _num(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _terms(coefs: dict[str, float]) -> str:
    parts = []
    for v, a in coefs.items():
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        parts.append(f" {sign} {v}" if mag == 1 else f" {sign} {_num(mag)} {v}")
    return "".join(parts)


def default_big_l(inst: Instance) -> float:
    """A big-M that no relaxed constraint can bind against.

    Every completion time is at most B = sum_j (3 * dmax / v + fixed + h_j),
    and so is every dwell.  The detach constraint relaxed once can need up to
    2B plus one task's own duration, and the distance constraint up to 3 dmax.
    """
    dmax = max(max(row) for row in inst.dist)
    v = inst.timing.velocity
    fixed = inst.timing.fixed
    b = math.fsum(3 * dmax / v + fixed + t.handling for t in inst.tasks)
    return 3 * b + 3 * dmax


def x_name(r: int, i: int, j: int) -> str:
    return f"x_{r}_{i}_{j}"


def build_milp(inst: Instance, big_l: Optional[float] = None) -> MilpModel:
    check_instance(inst)
    L = default_big_l(inst) if big_l is None else float(big_l)
    m = MilpModel(big_l=L)
    ids = sorted(inst.task_ids)
    mp, mm = inst.m_plus, inst.m_minus
    carriers = list(range(1, mp + 1))
    shuttles = list(range(mp + 1, mp + mm + 1))
    d = inst.dist
    v = inst.timing.velocity
    tm = inst.timing
    lam = tm.lam

    for r in carriers + shuttles:
        for j in ids:
            m.add_var(x_name(r, 0, j), 0, 1, True)
        for i in ids:
            for j in ids:
                if i != j:
                    m.add_var(x_name(r, i, j), 0, 1, True)
            m.add_var(x_name(r, i, 0), 0, 1, True)
    for j in ids:
        for prefix in ("Td", "Te", "wt", "delta", "tau"):
            m.add_var(f"{prefix}_{j}")
        m.objective[f"delta_{j}"] = lam
        m.objective[f"tau_{j}"] = 1 - lam

    for side, fleet in (("c", carriers), ("s", shuttles)):
        for j in ids:
            into = {x_name(r, i, j): 1.0 for r in fleet for i in [0] + ids if i != j}
            out = {x_name(r, j, k): 1.0 for r in fleet for k in ids + [0] if k != j}
            m.add(f"in_{side}_{j}", into, "=", 1)
            m.add(f"out_{side}_{j}", out, "=", 1)
        for r in fleet:
            for j in ids:
                flow = {x_name(r, i, j): 1.0 for i in [0] + ids if i != j}
                for k in ids + [0]:
                    if k != j:
                        flow[x_name(r, j, k)] = flow.get(x_name(r, j, k), 0.0) - 1.0
                m.add(f"flow_{r}_{j}", flow, "=", 0)
            m.add(f"start_{r}", {x_name(r, 0, j): 1.0 for j in ids}, "<=", 1)
            ends = {x_name(r, i, 0): 1.0 for i in ids}
            for j in ids:
                ends[x_name(r, 0, j)] = -1.0
            m.add(f"end_{r}", ends, "=", 0)

    # Predecessor options: (label, coefficient map of the selecting arc, time var
    # of the predecessor or None for a virtual start, position).
    def preds(j, fleet, starts, time_prefix):
        opts = []
        for idx, r in enumerate(fleet):
            opts.append((f"o{r}", {x_name(r, 0, j): 1.0}, None, starts[idx]))
        for i in ids:
            if i != j:
                opts.append((str(i), {x_name(r, i, j): 1.0 for r in fleet}, f"{time_prefix}_{i}", inst.by_id[i].dest))
        return opts

    for j in ids:
        task = inst.by_id[j]
        s, e = task.source, task.dest
        for pl, px, ptime, ppos in preds(j, carriers, inst.fleet.carrier_starts, "Td"):
            for ql, qx, qtime, qpos in preds(j, shuttles, inst.fleet.shuttle_starts, "Te"):
                relax = {k: L for k in px}
                for k in qx:
                    relax[k] = relax.get(k, 0.0) + L
                t1 = d[ppos][qpos] / v
                tag = f"{j}_{pl}_{ql}"

                dist = d[ppos][qpos] + d[qpos][s] + d[s][e]
                c = {f"delta_{j}": -1.0}
                c.update(relax)
                # -delta + L*xp + L*xq <= 2L - D
                m.add(f"dist_{tag}", c, "<=", 2 * L - dist)

                c = {f"wt_{j}": -1.0}
                if qtime:
                    c[qtime] = c.get(qtime, 0.0) + 1.0
                if ptime:
                    c[ptime] = c.get(ptime, 0.0) - 1.0
                for k, a in relax.items():
                    c[k] = c.get(k, 0.0) + a
                # Te_q - Td_p - wt_j + L*xp + L*xq <= 2L + t1
                m.add(f"wait_{tag}", c, "<=", 2 * L + t1)

                dur = t1 + tm.attach + d[qpos][s] / v + tm.pickup + d[s][e] / v + tm.detach
                c = {f"Td_{j}": -1.0, f"wt_{j}": 1.0}
                if ptime:
                    c[ptime] = c.get(ptime, 0.0) + 1.0
                for k, a in relax.items():
                    c[k] = c.get(k, 0.0) + a
                # Td_p + wt_j - Td_j + L*xp + L*xq <= 2L - dur
                m.add(f"det_{tag}", c, "<=", 2 * L - dur)
        m.add(f"done_{j}", {f"Te_{j}": 1.0, f"Td_{j}": -1.0}, ">=", task.handling)
        m.add(f"late_{j}", {f"tau_{j}": 1.0, f"Te_{j}": -1.0}, ">=", -task.due)
    return m


def export_milp(inst: Instance, big_l: Optional[float] = None) -> str:
    return build_milp(inst, big_l).to_lp()


def schedule_values(inst: Instance, chain: DualChain, schedule: Schedule) -> dict[str, float]:
    """Variable assignment that encodes a decoded schedule."""
    vals: dict[str, float] = {}
    mp = inst.m_plus
    for routes, offset in ((chain.carrier_routes, 1), (chain.shuttle_routes, mp + 1)):
        for a, route in enumerate(routes):
            if not route:
                continue
            r = a + offset
            nodes = [0] + route + [0]
            for i, j in zip(nodes, nodes[1:]):
                vals[x_name(r, i, j)] = 1.0
    for j, tm in schedule.per_task.items():
        vals[f"Td_{j}"] = tm.detach
        vals[f"Te_{j}"] = tm.completion
        vals[f"wt_{j}"] = tm.wait
        vals[f"delta_{j}"] = tm.distance
        vals[f"tau_{j}"] = tm.tardiness
    return vals


def solve_with_highs(model_text: str) -> float:
    """Optimal objective of an LP-format model via HiGHS (optional dependency)."""
    import os
    import tempfile

    import highspy

    fd, path = tempfile.mkstemp(suffix=".lp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(model_text)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("mip_rel_gap", 0.0)
        h.setOptionValue("mip_abs_gap", 0.0)
        h.readModel(path)
        h.run()
        return h.getInfo().objective_function_value
    finally:
        os.unlink(path)
