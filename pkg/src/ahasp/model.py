"""Problem data for the carrier/shuttle scheduling problem.

An :class:`Instance` is immutable once built.  Positions are plain integer
indices into a symmetric distance matrix given in meters; travel times are
derived as distance over velocity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Sequence

from .errors import InstanceError


@dataclass(frozen=True)
class TaskSpec:
    id: int
    source: int
    dest: int
    due: float
    handling: float


@dataclass(frozen=True)
class Fleet:
    carrier_starts: tuple[int, ...]
    shuttle_starts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "carrier_starts", tuple(self.carrier_starts))
        object.__setattr__(self, "shuttle_starts", tuple(self.shuttle_starts))

    @property
    def n_carriers(self) -> int:
        return len(self.carrier_starts)

    @property
    def n_shuttles(self) -> int:
        return len(self.shuttle_starts)


@dataclass(frozen=True)
class TimingParams:
    velocity: float = 1.2
    attach: float = 8.0
    detach: float = 8.0
    pickup: float = 30.0
    lam: float = 0.4

    @property
    def fixed(self) -> float:
        """Attach + pick-up + detach, paid once per task."""
        return self.attach + self.pickup + self.detach


@dataclass(frozen=True)
class _Tables:
    # Flat lookups used by the decoder hot path.
    dist: list[list[float]]
    tt: list[list[float]]
    source: dict[int, int]
    dest: dict[int, int]
    due: dict[int, float]
    handling: dict[int, float]
    # travel(s, e) + attach + pickup + detach, i.e. the part of a task that
    # does not depend on where the carrier and shuttle come from.
    core_time: dict[int, float]
    core_dist: dict[int, float]


@dataclass(frozen=True)
class Instance:
    tasks: tuple[TaskSpec, ...]
    fleet: Fleet
    dist: tuple[tuple[float, ...], ...]
    timing: TimingParams = field(default_factory=TimingParams)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "dist", tuple(tuple(float(x) for x in row) for row in self.dist))

    @property
    def n(self) -> int:
        return len(self.tasks)

    @property
    def m_plus(self) -> int:
        return self.fleet.n_carriers

    @property
    def m_minus(self) -> int:
        return self.fleet.n_shuttles

    @property
    def n_positions(self) -> int:
        return len(self.dist)

    @property
    def task_ids(self) -> list[int]:
        return [t.id for t in self.tasks]

    @cached_property
    def by_id(self) -> dict[int, TaskSpec]:
        return {t.id: t for t in self.tasks}

    def task(self, task_id: int) -> TaskSpec:
        try:
            return self.by_id[task_id]
        except KeyError:
            raise InstanceError(f"unknown task id {task_id}") from None

    @cached_property
    def tables(self) -> _Tables:
        v = self.timing.velocity
        dist = [list(row) for row in self.dist]
        tt = [[d / v for d in row] for row in dist]
        fixed = self.timing.fixed
        return _Tables(
            dist=dist,
            tt=tt,
            source={t.id: t.source for t in self.tasks},
            dest={t.id: t.dest for t in self.tasks},
            due={t.id: t.due for t in self.tasks},
            handling={t.id: t.handling for t in self.tasks},
            core_time={t.id: fixed + tt[t.source][t.dest] for t in self.tasks},
            core_dist={t.id: dist[t.source][t.dest] for t in self.tasks},
        )

    def with_fleet(self, carrier_starts: Sequence[int], shuttle_starts: Sequence[int]) -> "Instance":
        return replace(self, fleet=Fleet(tuple(carrier_starts), tuple(shuttle_starts)))

    def with_timing(self, **changes) -> "Instance":
        return replace(self, timing=replace(self.timing, **changes))


def travel_time(inst: Instance, a: int, b: int) -> float:
    """Seconds needed to drive from position ``a`` to ``b``."""
    npos = inst.n_positions
    if not (0 <= a < npos and 0 <= b < npos):
        raise InstanceError(f"position out of range: ({a}, {b}) with {npos} positions")
    return inst.dist[a][b] / inst.timing.velocity


def validate_instance(inst: Instance) -> list[str]:
    """Return a list of human-readable rule violations (empty when valid)."""
    problems: list[str] = []
    npos = len(inst.dist)

    for r, row in enumerate(inst.dist):
        if len(row) != npos:
            problems.append(f"dist: row {r} has {len(row)} entries, expected {npos} (non-square matrix)")
    if not problems:
        for a in range(npos):
            if inst.dist[a][a] != 0:
                problems.append(f"dist[{a}][{a}]: nonzero diagonal {inst.dist[a][a]}")
            for b in range(npos):
                d = inst.dist[a][b]
                if not math.isfinite(d) or d < 0:
                    problems.append(f"dist[{a}][{b}]: negative or non-finite distance {d}")
                if b > a and d != inst.dist[b][a]:
                    problems.append(
                        f"dist[{a}][{b}]: asymmetric distance ({d} vs dist[{b}][{a}]={inst.dist[b][a]})"
                    )

    def check_pos(label: str, p) -> None:
        if not isinstance(p, int) or isinstance(p, bool) or not 0 <= p < npos:
            problems.append(f"{label}: position {p!r} does not index dist (0..{npos - 1})")

    seen: set[int] = set()
    for k, t in enumerate(inst.tasks):
        label = f"tasks[{k}]"
        if not isinstance(t.id, int) or isinstance(t.id, bool) or t.id < 1:
            problems.append(f"{label}.id: task id must be a positive integer, got {t.id!r}")
        elif t.id in seen:
            problems.append(f"{label}.id: duplicate task id {t.id}")
        seen.add(t.id)
        check_pos(f"{label}.source", t.source)
        check_pos(f"{label}.dest", t.dest)
        if not t.due >= 0:
            problems.append(f"{label}.due: must be >= 0, got {t.due}")
        if not t.handling >= 0:
            problems.append(f"{label}.handling: must be >= 0, got {t.handling}")

    if inst.fleet.n_carriers == 0:
        problems.append("fleet.carrier_starts: empty carrier fleet")
    if inst.fleet.n_shuttles == 0:
        problems.append("fleet.shuttle_starts: empty shuttle fleet")
    for r, p in enumerate(inst.fleet.carrier_starts):
        check_pos(f"fleet.carrier_starts[{r}]", p)
    for r, p in enumerate(inst.fleet.shuttle_starts):
        check_pos(f"fleet.shuttle_starts[{r}]", p)

    tp = inst.timing
    if not tp.velocity > 0:
        problems.append(f"params.velocity: must be > 0, got {tp.velocity}")
    for name in ("attach", "detach", "pickup"):
        if not getattr(tp, name) >= 0:
            problems.append(f"params.{name}: must be >= 0, got {getattr(tp, name)}")
    if not 0 <= tp.lam <= 1:
        problems.append(f"params.lambda: must lie in [0, 1], got {tp.lam}")
    return problems


def check_instance(inst: Instance) -> Instance:
    """Raise :class:`InstanceError` listing every violation, else return ``inst``."""
    problems = validate_instance(inst)
    if problems:
        raise InstanceError("invalid instance:\n  " + "\n  ".join(problems))
    return inst
