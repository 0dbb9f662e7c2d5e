"""Deadlock-based feasibility and bidirectional reachability search (BRS).

A dual chain is feasible exactly when its net can fire every transition once,
i.e. when the coupled precedence relation has no circular wait.  BRS answers a
narrower question cheaply: with a removed task tentatively placed at one gap on
one side, which gaps on the other side would close a cycle?  Those are the gaps
right before an ancestor of the new task and right after a descendant of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .chain import DualChain, Side, Slot
from .errors import ContractError
from .petri import SolutionNet


@dataclass(frozen=True)
class InfeasibleSlots:
    backward: frozenset[Slot]
    forward: frozenset[Slot]

    @property
    def all(self) -> frozenset[Slot]:
        return self.backward | self.forward

    def __len__(self) -> int:
        return len(self.all)


def is_feasible(net: Union[SolutionNet, DualChain], counters: Optional[dict] = None) -> bool:
    """True iff firing from the initial marking reaches the final marking."""
    chain = net.chain if isinstance(net, SolutionNet) else net
    c_prev, c_next = chain.c_prev, chain.c_next
    s_prev, s_next = chain.s_prev, chain.s_next
    stack = [r[0] for r in chain.carrier_routes if r and s_prev[r[0]] is None]
    fired: set[int] = set()
    while stack:
        k = stack.pop()
        fired.add(k)
        c = c_next[k]
        if c is not None:
            sp = s_prev[c]
            if sp is None or sp in fired:
                stack.append(c)
        s = s_next[k]
        if s is not None and s != c:
            cp = c_prev[s]
            if cp is None or cp in fired:
                stack.append(s)
    if counters is not None:
        counters["transitions"] = counters.get("transitions", 0) + len(fired)
    return len(fired) == len(chain)


def positions(chain: DualChain, side: Side) -> dict[int, int]:
    return {t: g for route in chain.routes(side) for g, t in enumerate(route)}


def ancestors(chain: DualChain, task: Optional[int]) -> set[int]:
    """``task`` and every task that must fire before it."""
    return _closure(task, chain.c_prev, chain.s_prev)


def descendants(chain: DualChain, task: Optional[int]) -> set[int]:
    """``task`` and every task that can only fire after it."""
    return _closure(task, chain.c_next, chain.s_next)


def _closure(task, step_c: dict, step_s: dict) -> set[int]:
    if task is None:
        return set()
    seen = {task}
    todo = [task]
    while todo:
        t = todo.pop()
        a = step_c[t]
        if a is not None and a not in seen:
            seen.add(a)
            todo.append(a)
        a = step_s[t]
        if a is not None and a not in seen:
            seen.add(a)
            todo.append(a)
    return seen


def brs(
    chain: DualChain,
    task: int,
    slot: Slot,
    *,
    other_positions: Optional[dict[int, int]] = None,
    counters: Optional[dict] = None,
) -> InfeasibleSlots:
    """Opposite-side gaps that would deadlock once ``task`` sits at ``slot``.

    ``chain`` is the feasible chain without ``task``; ``slot`` is the gap the
    task takes on ``slot.side``.  Each transition is visited at most once per
    search direction.
    """
    if task in chain:
        raise ContractError(f"task {task} is already placed on both sides; BRS needs it unplaced")
    other = slot.side.other
    if other_positions is None:
        other_positions = positions(chain, other)
    agv = chain.s_agv if other is Side.SHUTTLE else chain.c_agv
    pred, succ = chain.neighbors(slot)
    back = ancestors(chain, pred)
    fwd = descendants(chain, succ)
    if counters is not None:
        counters["transitions"] = counters.get("transitions", 0) + len(back) + len(fwd)
    return InfeasibleSlots(
        frozenset(Slot(other, agv[b], other_positions[b]) for b in back),
        frozenset(Slot(other, agv[f], other_positions[f] + 1) for f in fwd),
    )


def blocked_gaps(chain: DualChain, slot: Slot, other_positions: dict[int, int]) -> set[tuple[int, int]]:
    """Hot-path variant of :func:`brs` returning bare ``(agv, gap)`` pairs."""
    agv = chain.s_agv if slot.side is Side.CARRIER else chain.c_agv
    pred, succ = chain.neighbors(slot)
    out = {(agv[b], other_positions[b]) for b in ancestors(chain, pred)}
    out.update((agv[f], other_positions[f] + 1) for f in descendants(chain, succ))
    return out
