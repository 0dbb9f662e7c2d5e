"""The solution Petri net built over a :class:`~ahasp.chain.DualChain`.

Transitions are tasks.  Each task ``i`` owns two input places, ``("+", i)``
(its carrier is ready) and ``("-", i)`` (its shuttle is ready).  Every AGV ``r``
owns a terminal place ``("0", r)`` that receives its token after its last task.
AGV numbers follow the usual convention: carriers are ``1..m+`` and shuttles
``m+ + 1 .. m+ + m-``.

The net does not copy the chain's structure.  Arcs are read straight from the
chain's adjacency maps, so edits made with ``DualChain.insert``/``remove`` are
the incremental net update.  Do not edit the chain while a firing sequence is
in progress; call :meth:`SolutionNet.reset` afterwards instead.
"""
from __future__ import annotations

from typing import Dict, Iterator, Tuple

from .chain import DualChain, Side
from .errors import ContractError, RepresentationError

Place = Tuple[str, int]
Marking = Dict[Place, int]


def terminal_place(chain: DualChain, side: Side, agv: int) -> Place:
    return ("0", agv + 1) if side is Side.CARRIER else ("0", chain.m_plus + agv + 1)


class SolutionNet:
    def __init__(self, chain: DualChain):
        self.chain = chain
        self.marking: Marking = {}
        self.fired: set[int] = set()
        self.reset()

    # -- structure ----------------------------------------------------------

    @property
    def transitions(self) -> list[int]:
        return sorted(self.chain.c_agv)

    @property
    def task_places(self) -> list[Place]:
        ts = self.transitions
        return [("+", i) for i in ts] + [("-", i) for i in ts]

    @property
    def terminal_places(self) -> list[Place]:
        m = self.chain.m_plus + self.chain.m_minus
        return [("0", r) for r in range(1, m + 1)]

    @property
    def places(self) -> list[Place]:
        return self.task_places + self.terminal_places

    def preset(self, t: int) -> tuple[Place, Place]:
        self._check_transition(t)
        return ("+", t), ("-", t)

    def postset(self, t: int) -> tuple[Place, Place]:
        self._check_transition(t)
        ch = self.chain
        c = ch.c_next[t]
        s = ch.s_next[t]
        pc = ("+", c) if c is not None else terminal_place(ch, Side.CARRIER, ch.c_agv[t])
        ps = ("-", s) if s is not None else terminal_place(ch, Side.SHUTTLE, ch.s_agv[t])
        return pc, ps

    def place_preset(self, p: Place) -> set[int]:
        """Transitions feeding place ``p`` (at most one)."""
        kind, idx = p
        ch = self.chain
        if kind == "+":
            prev = ch.c_prev[idx]
            return set() if prev is None else {prev}
        if kind == "-":
            prev = ch.s_prev[idx]
            return set() if prev is None else {prev}
        side, agv = self._terminal_owner(idx)
        route = ch.routes(side)[agv]
        return {route[-1]} if route else set()

    def place_postset(self, p: Place) -> set[int]:
        """Transitions consuming from ``p``; the net is conflict-free so this is 0 or 1."""
        kind, idx = p
        return {idx} if kind in "+-" else set()

    def arcs(self) -> Iterator[tuple]:
        """All arcs as ``(source, target)``; transitions appear as ``("t", i)``."""
        for t in self.transitions:
            for p in self.preset(t):
                yield p, ("t", t)
            for p in self.postset(t):
                yield ("t", t), p

    def _terminal_owner(self, r: int) -> tuple[Side, int]:
        mp = self.chain.m_plus
        if 1 <= r <= mp:
            return Side.CARRIER, r - 1
        if mp < r <= mp + self.chain.m_minus:
            return Side.SHUTTLE, r - mp - 1
        raise RepresentationError(f"no AGV {r}")

    def _check_transition(self, t: int) -> None:
        if t not in self.chain.c_agv:
            raise RepresentationError(f"no transition t{t} in the net")

    # -- marking ------------------------------------------------------------

    def initial_marking(self) -> Marking:
        ch = self.chain
        m: Marking = {}
        for side in (Side.CARRIER, Side.SHUTTLE):
            for agv, route in enumerate(ch.routes(side)):
                # An idle AGV starts (and stays) in its terminal place.
                place = (side.value, route[0]) if route else terminal_place(ch, side, agv)
                m[place] = 1
        return m

    def reset(self) -> None:
        self.marking = self.initial_marking()
        self.fired = set()

    def tokens(self, p: Place) -> int:
        return self.marking.get(p, 0)

    def is_enabled(self, t: int) -> bool:
        return self.marking.get(("+", t), 0) >= 1 and self.marking.get(("-", t), 0) >= 1

    def enabled(self) -> set[int]:
        return {i for (kind, i) in self.marking if kind == "+" and ("-", i) in self.marking}

    def fire(self, t: int) -> Marking:
        self._check_transition(t)
        if t in self.fired:
            raise ContractError(f"t{t} has already fired; each transition fires at most once")
        if not self.is_enabled(t):
            raise ContractError(f"t{t} is not enabled at the current marking")
        m = self.marking
        for p in self.preset(t):
            left = m[p] - 1
            if left:
                m[p] = left
            else:
                del m[p]
        for p in self.postset(t):
            m[p] = m.get(p, 0) + 1
        self.fired.add(t)
        return dict(m)

    def is_final(self) -> bool:
        m = self.marking
        return all(m.get(p, 0) == 1 for p in self.terminal_places) and not any(
            kind != "0" and k > 0 for (kind, _), k in m.items()
        )

    def marked_places(self) -> set[Place]:
        return {p for p, k in self.marking.items() if k > 0}


def build_net(chain: DualChain) -> SolutionNet:
    return SolutionNet(chain)


def enabled(net: SolutionNet) -> set[int]:
    return net.enabled()


def fire(net: SolutionNet, t: int) -> Marking:
    return net.fire(t)


def is_final(net: SolutionNet) -> bool:
    return net.is_final()
