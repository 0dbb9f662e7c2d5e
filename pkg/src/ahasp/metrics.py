"""Benchmark metrics: RPD, BRS acceleration, infeasible-position proportion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .chain import DualChain, Side
from .deadlock import blocked_gaps, positions
from .errors import PairingError


@dataclass(frozen=True)
class RunRecord:
    instance: str
    algorithm: str
    seed: int
    objective: float
    iterations: int = 0
    elapsed_ms: float = 0.0
    with_brs: bool = True
    budget_ms: Optional[float] = None

    def __post_init__(self):
        if not (self.objective >= 0 or self.objective == math.inf):
            raise ValueError(f"objective must be >= 0 or +inf, got {self.objective}")


def rpd(f: float, f_best: float) -> float:
    """Relative percentage deviation of ``f`` from the best known ``f_best``."""
    if not f_best > 0:
        raise ValueError(f"RPD needs a positive reference objective, got {f_best}")
    if f < f_best:
        raise ValueError(f"objective {f} is below the reference {f_best}; the reference must be the minimum")
    return (f - f_best) / f_best * 100.0


def acceleration_metrics(
    with_brs: RunRecord, without_brs: RunRecord, f_best: Optional[float] = None
) -> tuple[float, float]:
    """``(A_R, G_AP)`` for a paired run with and without BRS.

    A_R is the relative gain in completed iterations; G_AP is the RPD of the
    run without BRS minus the RPD of the run with it.  ``f_best`` defaults to
    the better of the two objectives.
    """
    if with_brs.instance != without_brs.instance:
        raise PairingError(f"runs are on different instances: {with_brs.instance!r} vs {without_brs.instance!r}")
    if with_brs.budget_ms != without_brs.budget_ms:
        raise PairingError(f"runs have different budgets: {with_brs.budget_ms} vs {without_brs.budget_ms}")
    if not with_brs.with_brs or without_brs.with_brs:
        raise PairingError("expected one run with BRS and one without, in that order")
    if without_brs.iterations <= 0:
        raise PairingError("the run without BRS completed no iterations")
    a_r = (with_brs.iterations - without_brs.iterations) / without_brs.iterations * 100.0
    if f_best is None:
        f_best = min(with_brs.objective, without_brs.objective)
    g_ap = rpd(without_brs.objective, f_best) - rpd(with_brs.objective, f_best)
    return a_r, g_ap


def blocked_counts(chain: DualChain, task: int) -> list[int]:
    """|L_I^-(eps)| for every carrier-side slot eps, in slot order."""
    if task in chain:
        raise ValueError(f"task {task} must be removed from the chain first")
    s_pos = positions(chain, Side.SHUTTLE)
    return [len(blocked_gaps(chain, cs, s_pos)) for cs in chain.slots(Side.CARRIER)]


def ipp(chain: DualChain, task: int) -> float:
    """Share of (carrier slot, shuttle slot) pairs that would deadlock, in percent."""
    k = len(chain)
    total = (k + chain.m_plus) * (k + chain.m_minus)
    return 100.0 * sum(blocked_counts(chain, task)) / total


def complexity_ratio(n: int, m_plus: int, m_minus: int, blocked: list[int]) -> float:
    """Predicted cost of BRS-pruned insertion relative to a full scan.

    ``n`` is the number of placed tasks and ``blocked`` the per-carrier-slot
    counts from :func:`blocked_counts`.  The BRS calls themselves are charged
    one decode each.
    """
    total = (n + m_plus) * (n + m_minus)
    return 1.0 - (sum(blocked) - (n + m_plus)) / total


def measured_ratio(pairs_evaluated: int, brs_calls: int, pairs_total: int) -> float:
    """Same ratio from raw counters: (decodes + BRS calls) / full-scan decodes."""
    return (pairs_evaluated + brs_calls) / pairs_total
