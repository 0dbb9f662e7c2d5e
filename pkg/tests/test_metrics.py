import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ahasp.chain import DualChain, Side
from ahasp.errors import PairingError
from ahasp.metrics import (
    RunRecord,
    acceleration_metrics,
    blocked_counts,
    complexity_ratio,
    ipp,
    measured_ratio,
    rpd,
)
from ahasp.operators import InsertionStats, best_insertion
from ahasp.generate import GenSpec, generate

from oracles import brute_force_blocked, random_feasible_chain


def test_rpd():
    assert rpd(10.0, 10.0) == 0.0
    assert rpd(15.0, 10.0) == 50.0
    with pytest.raises(ValueError):
        rpd(1.0, 0.0)
    with pytest.raises(ValueError):
        rpd(9.0, 10.0)


@given(st.floats(0.1, 1e6), st.floats(0, 1e6), st.floats(0, 1e6))
def test_rpd_is_increasing(best, a, b):
    lo, hi = sorted((best + a, best + b))
    assert rpd(lo, best) <= rpd(hi, best)


def rec(it, f, brs, inst="x", budget=100.0):
    return RunRecord(inst, "alns", 0, f, iterations=it, with_brs=brs, budget_ms=budget)


def test_acceleration_metrics():
    assert acceleration_metrics(rec(10, 5.0, True), rec(10, 5.0, False)) == (0.0, 0.0)
    a_r, g_ap = acceleration_metrics(rec(20, 10.0, True), rec(10, 12.0, False))
    assert a_r == 100.0 and g_ap == pytest.approx(20.0)
    with pytest.raises(PairingError):
        acceleration_metrics(rec(1, 1.0, True), rec(1, 1.0, False, inst="y"))
    with pytest.raises(PairingError):
        acceleration_metrics(rec(1, 1.0, True), rec(1, 1.0, False, budget=5.0))
    with pytest.raises(PairingError):
        acceleration_metrics(rec(1, 1.0, False), rec(1, 1.0, True))
    with pytest.raises(ValueError):
        rec(1, -1.0, True)


def test_ipp_empty_chain_is_zero():
    assert ipp(DualChain.empty(2, 3), 1) == 0.0


def test_ipp_example_matches_insert_and_check(example_chain):
    total = sum(len(brute_force_blocked(example_chain, 8, cs)) for cs in example_chain.slots(Side.CARRIER))
    assert ipp(example_chain, 8) == 100.0 * total / ((7 + 2) * (7 + 2))
    with pytest.raises(ValueError):
        ipp(example_chain, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_complexity_ratio_matches_counters(seed):
    rng = random.Random(seed)
    inst = generate(GenSpec(n=rng.randint(2, 12), m_plus=rng.randint(1, 3), m_minus=rng.randint(1, 4), seed=seed))
    ch = random_feasible_chain(rng, inst.task_ids, inst.m_plus, inst.m_minus)
    t = rng.choice(inst.task_ids)
    ch.remove(t)
    stats = InsertionStats()
    best_insertion(inst, ch, t, stats=stats)
    k = len(ch)
    predicted = complexity_ratio(k, inst.m_plus, inst.m_minus, blocked_counts(ch, t))
    measured = measured_ratio(stats.pairs_evaluated, stats.brs_calls, stats.pairs_total)
    assert math.isclose(predicted, measured, abs_tol=1e-12)
    assert stats.pairs_evaluated <= stats.pairs_total
