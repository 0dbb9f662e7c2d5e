"""Dual-chain solution encoding.

A solution is a pair of route families: one ordered task list per carrier and
one per shuttle.  Every placed task appears exactly once on each side.  Besides
the route lists, :class:`DualChain` keeps predecessor/successor maps for both
sides; those maps are exactly the arc structure of the solution Petri net, and
they are spliced in O(1) on every insert/remove instead of being rebuilt.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Sequence

from .errors import RepresentationError


class Side(str, Enum):
    CARRIER = "+"
    SHUTTLE = "-"

    @property
    def other(self) -> "Side":
        return Side.SHUTTLE if self is Side.CARRIER else Side.CARRIER


@dataclass(frozen=True, order=True)
class Slot:
    """An insertion gap: ``gap`` is the index the new task will occupy."""

    side: Side
    agv: int
    gap: int


class DualChain:
    __slots__ = (
        "carrier_routes",
        "shuttle_routes",
        "c_agv",
        "s_agv",
        "c_prev",
        "c_next",
        "s_prev",
        "s_next",
    )

    def __init__(self, carrier_routes: Sequence[Iterable[int]], shuttle_routes: Sequence[Iterable[int]]):
        self.carrier_routes: list[list[int]] = [list(r) for r in carrier_routes]
        self.shuttle_routes: list[list[int]] = [list(r) for r in shuttle_routes]
        if not self.carrier_routes or not self.shuttle_routes:
            raise RepresentationError("a dual chain needs at least one carrier and one shuttle route")
        self.c_agv, self.c_prev, self.c_next = _link(self.carrier_routes, "carrier")
        self.s_agv, self.s_prev, self.s_next = _link(self.shuttle_routes, "shuttle")
        if self.c_agv.keys() != self.s_agv.keys():
            only_c = sorted(self.c_agv.keys() - self.s_agv.keys())
            only_s = sorted(self.s_agv.keys() - self.c_agv.keys())
            raise RepresentationError(
                f"task sets differ between sides: carrier-only {only_c}, shuttle-only {only_s}"
            )

    # -- construction -------------------------------------------------------

    @classmethod
    def empty(cls, m_plus: int, m_minus: int) -> "DualChain":
        return cls([[] for _ in range(m_plus)], [[] for _ in range(m_minus)])

    @classmethod
    def from_permutation(cls, pi_plus: Sequence[int], pi_minus: Sequence[int]) -> "DualChain":
        """Parse the zero-separated vectors, e.g. ``(0, 5, 4, 2, 0, 6, 1, 3, 7)``."""
        return cls(_split_zeros(pi_plus, "carrier"), _split_zeros(pi_minus, "shuttle"))

    def to_permutation(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        def join(routes):
            out: list[int] = []
            for r in routes:
                out.append(0)
                out.extend(r)
            return tuple(out)

        return join(self.carrier_routes), join(self.shuttle_routes)

    def copy(self) -> "DualChain":
        new = object.__new__(DualChain)
        new.carrier_routes = [r[:] for r in self.carrier_routes]
        new.shuttle_routes = [r[:] for r in self.shuttle_routes]
        new.c_agv = dict(self.c_agv)
        new.s_agv = dict(self.s_agv)
        new.c_prev = dict(self.c_prev)
        new.c_next = dict(self.c_next)
        new.s_prev = dict(self.s_prev)
        new.s_next = dict(self.s_next)
        return new

    # -- queries ------------------------------------------------------------

    @property
    def m_plus(self) -> int:
        return len(self.carrier_routes)

    @property
    def m_minus(self) -> int:
        return len(self.shuttle_routes)

    @property
    def tasks(self) -> set[int]:
        return set(self.c_agv)

    def __len__(self) -> int:
        return len(self.c_agv)

    def __contains__(self, task: int) -> bool:
        return task in self.c_agv

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.c_agv))

    def key(self) -> tuple:
        return tuple(map(tuple, self.carrier_routes)), tuple(map(tuple, self.shuttle_routes))

    def __eq__(self, other) -> bool:
        return isinstance(other, DualChain) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"DualChain(carrier={self.carrier_routes}, shuttle={self.shuttle_routes})"

    def routes(self, side: Side) -> list[list[int]]:
        return self.carrier_routes if side is Side.CARRIER else self.shuttle_routes

    def agv_of(self, side: Side, task: int) -> int:
        return (self.c_agv if side is Side.CARRIER else self.s_agv)[task]

    def prev(self, side: Side, task: int) -> int | None:
        return (self.c_prev if side is Side.CARRIER else self.s_prev)[task]

    def next(self, side: Side, task: int) -> int | None:
        return (self.c_next if side is Side.CARRIER else self.s_next)[task]

    def slots(self, side: Side) -> list[Slot]:
        """Every insertion gap on one side, in (agv, gap) order."""
        return [Slot(side, a, g) for a, r in enumerate(self.routes(side)) for g in range(len(r) + 1)]

    def slot_before(self, side: Side, task: int) -> Slot:
        """The gap immediately before ``task`` on ``side``."""
        agv = self.agv_of(side, task)
        return Slot(side, agv, self.routes(side)[agv].index(task))

    def slot_after(self, side: Side, task: int) -> Slot:
        """The gap immediately after ``task`` on ``side``."""
        agv = self.agv_of(side, task)
        return Slot(side, agv, self.routes(side)[agv].index(task) + 1)

    def neighbors(self, slot: Slot) -> tuple[int | None, int | None]:
        """Tasks on either side of a gap; ``None`` stands for the virtual start/end."""
        route = self._route_for(slot)
        prev = route[slot.gap - 1] if slot.gap > 0 else None
        nxt = route[slot.gap] if slot.gap < len(route) else None
        return prev, nxt

    def _route_for(self, slot: Slot) -> list[int]:
        routes = self.routes(slot.side)
        if not 0 <= slot.agv < len(routes):
            raise RepresentationError(f"{slot}: no such {slot.side.name.lower()} (have {len(routes)})")
        route = routes[slot.agv]
        if not 0 <= slot.gap <= len(route):
            raise RepresentationError(f"{slot}: gap out of range 0..{len(route)}")
        return route

    # -- in-place edits -----------------------------------------------------

    def insert(self, task: int, carrier_slot: Slot, shuttle_slot: Slot) -> None:
        if task in self.c_agv:
            raise RepresentationError(f"task {task} is already placed")
        if carrier_slot.side is not Side.CARRIER or shuttle_slot.side is not Side.SHUTTLE:
            raise RepresentationError("insert needs one carrier-side and one shuttle-side slot")
        croute = self._route_for(carrier_slot)
        sroute = self._route_for(shuttle_slot)
        _splice_in(croute, carrier_slot.gap, task, self.c_prev, self.c_next)
        self.c_agv[task] = carrier_slot.agv
        _splice_in(sroute, shuttle_slot.gap, task, self.s_prev, self.s_next)
        self.s_agv[task] = shuttle_slot.agv

    def remove(self, task: int) -> tuple[Slot, Slot]:
        """Remove ``task`` from both sides; returns the slots it occupied."""
        if task not in self.c_agv:
            raise RepresentationError(f"task {task} is not placed")
        ca = self.c_agv.pop(task)
        sa = self.s_agv.pop(task)
        cg = _splice_out(self.carrier_routes[ca], task, self.c_prev, self.c_next)
        sg = _splice_out(self.shuttle_routes[sa], task, self.s_prev, self.s_next)
        return Slot(Side.CARRIER, ca, cg), Slot(Side.SHUTTLE, sa, sg)


def insert_task(chain: DualChain, task: int, carrier_slot: Slot, shuttle_slot: Slot) -> DualChain:
    out = chain.copy()
    out.insert(task, carrier_slot, shuttle_slot)
    return out


def remove_task(chain: DualChain, task: int) -> DualChain:
    out = chain.copy()
    out.remove(task)
    return out


def _link(routes: list[list[int]], label: str):
    agv: dict[int, int] = {}
    prev: dict[int, int | None] = {}
    nxt: dict[int, int | None] = {}
    for a, route in enumerate(routes):
        p = None
        for t in route:
            if not isinstance(t, int) or isinstance(t, bool) or t < 1:
                raise RepresentationError(f"{label} {a}: task ids must be positive integers, got {t!r}")
            if t in agv:
                raise RepresentationError(f"task {t} appears twice on the {label} side")
            agv[t] = a
            prev[t] = p
            if p is not None:
                nxt[p] = t
            p = t
        if p is not None:
            nxt[p] = None
    return agv, prev, nxt


def _splice_in(route: list[int], gap: int, task: int, prev: dict, nxt: dict) -> None:
    p = route[gap - 1] if gap > 0 else None
    s = route[gap] if gap < len(route) else None
    route.insert(gap, task)
    prev[task] = p
    nxt[task] = s
    if p is not None:
        nxt[p] = task
    if s is not None:
        prev[s] = task


def _splice_out(route: list[int], task: int, prev: dict, nxt: dict) -> int:
    gap = route.index(task)
    del route[gap]
    p = prev.pop(task)
    s = nxt.pop(task)
    if p is not None:
        nxt[p] = s
    if s is not None:
        prev[s] = p
    return gap


def _split_zeros(vec: Sequence[int], label: str) -> list[list[int]]:
    vec = list(vec)
    if not vec or vec[0] != 0:
        raise RepresentationError(f"{label} permutation must start with a 0 separator: {vec}")
    routes: list[list[int]] = []
    for x in vec:
        if x == 0:
            routes.append([])
        else:
            routes[-1].append(x)
    return routes
