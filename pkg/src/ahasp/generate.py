"""Seeded instance generator on a two-row corridor layout.

Positions ``0 .. P-1`` are pasting chambers on the lower row and ``P .. P+C-1``
are curing chambers on the upper row.  Distances are rectilinear: along the
row, plus the corridor width when switching rows.  Task sources are pasting
chambers and destinations curing chambers.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError
from .model import Fleet, Instance, TaskSpec, TimingParams


@dataclass(frozen=True)
class GenSpec:
    n: int
    m_plus: int = 4
    m_minus: int = 8
    positions: int = 30
    tightness: float = 0.7
    seed: int = 0
    spacing: float = 15.0
    corridor: float = 6.0
    handling_range: tuple[float, float] = (30.0, 120.0)
    # Tight due dates fall within slack * (carrier workload per carrier)
    # after the task's earliest possible completion.
    slack: float = 0.2

    def validate(self) -> "GenSpec":
        bad = []
        if self.n < 1:
            bad.append(f"n must be >= 1, got {self.n}")
        if self.m_plus < 1 or self.m_minus < 1:
            bad.append(f"fleets need at least one carrier and one shuttle, got {self.m_plus}/{self.m_minus}")
        if self.positions < 2:
            bad.append(f"positions must be >= 2, got {self.positions}")
        if not 0 <= self.tightness <= 1:
            bad.append(f"tightness must lie in [0, 1], got {self.tightness}")
        if not self.slack >= 0:
            bad.append(f"slack must be >= 0, got {self.slack}")
        if self.spacing <= 0 or self.corridor < 0:
            bad.append("spacing must be > 0 and corridor >= 0")
        lo, hi = self.handling_range
        if not 0 <= lo <= hi:
            bad.append(f"handling_range must satisfy 0 <= lo <= hi, got {self.handling_range}")
        if bad:
            raise ConfigError("invalid generator spec: " + "; ".join(bad))
        return self


def corridor_layout(positions: int, spacing: float = 15.0, corridor: float = 6.0) -> list[tuple[float, float]]:
    pasting = positions // 2
    curing = positions - pasting
    return [(i * spacing, 0.0) for i in range(pasting)] + [(i * spacing, corridor) for i in range(curing)]


def rectilinear(coords: list[tuple[float, float]]) -> list[list[float]]:
    return [[abs(ax - bx) + abs(ay - by) for (bx, by) in coords] for (ax, ay) in coords]


def completion_bound(inst: Instance) -> float:
    """No task of any feasible schedule completes later than this.

    Each task needs at most three maximal legs plus the fixed and handling
    times after both of its predecessors are done, so summing that over all
    tasks bounds every completion time.
    """
    dmax = max(max(row) for row in inst.dist)
    v = inst.timing.velocity
    fixed = inst.timing.fixed
    return math.fsum(3 * dmax / v + fixed + t.handling for t in inst.tasks)


def fleet_starts(positions: int, m: int, seed: int, salt: int) -> tuple[int, ...]:
    # Draws are sequential, so growing m keeps the existing prefix.
    rng = random.Random(f"{seed}:{salt}")
    return tuple(rng.randrange(positions) for _ in range(m))


def generate(spec: GenSpec, timing: Optional[TimingParams] = None) -> Instance:
    spec.validate()
    timing = timing or TimingParams()
    rng = random.Random(spec.seed)
    coords = corridor_layout(spec.positions, spec.spacing, spec.corridor)
    dist = rectilinear(coords)
    pasting = spec.positions // 2
    curing = spec.positions - pasting
    lo, hi = spec.handling_range

    raw = []
    for i in range(1, spec.n + 1):
        s = rng.randrange(pasting) if pasting else 0
        e = pasting + rng.randrange(curing)
        h = round(rng.uniform(lo, hi), 1)
        raw.append((i, s, e, h))

    fleet = Fleet(
        fleet_starts(spec.positions, spec.m_plus, spec.seed, 1),
        fleet_starts(spec.positions, spec.m_minus, spec.seed, 2),
    )
    draft = Instance(
        tasks=[TaskSpec(i, s, e, 0.0, h) for i, s, e, h in raw],
        fleet=fleet,
        dist=dist,
        timing=timing,
    )
    loose = math.ceil(completion_bound(draft))
    v = timing.velocity
    # Carriers are the bottleneck resource: each task occupies one for
    # roughly two legs plus the fixed attach/pick-up/detach time.
    horizon = spec.slack * sum(2 * dist[s][e] / v + timing.fixed for _, s, e, _ in raw) / spec.m_plus
    tasks = []
    for i, s, e, h in raw:
        if rng.random() < spec.tightness:
            earliest = dist[s][e] / v + timing.fixed + h
            due = round(earliest + rng.uniform(0.0, horizon), 1)
        else:
            due = float(loose)
        tasks.append(TaskSpec(i, s, e, due, h))
    name = f"gen-n{spec.n}-c{spec.m_plus}-s{spec.m_minus}-t{spec.tightness:g}-seed{spec.seed}"
    return Instance(tasks=tasks, fleet=fleet, dist=dist, timing=timing, name=name)


def resize_fleet(inst: Instance, m_plus: int, m_minus: int, seed: int = 0) -> Instance:
    """Same tasks and layout with a different fleet size (used by sweeps)."""
    if m_plus < 1 or m_minus < 1:
        raise ConfigError(f"fleets need at least one carrier and one shuttle, got {m_plus}/{m_minus}")
    npos = inst.n_positions
    return inst.with_fleet(fleet_starts(npos, m_plus, seed, 1), fleet_starts(npos, m_minus, seed, 2))
