import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ahasp.chain import DualChain
from ahasp.decode import (
    INFEASIBLE,
    carrier_wait,
    completion_and_tardiness,
    detach_time,
    evaluate,
    fdd,
    leg_distance,
)
from ahasp.errors import RepresentationError
from ahasp.generate import GenSpec, generate
from ahasp.model import Fleet, Instance, TaskSpec

from conftest import line_instance
from oracles import random_chain, random_feasible_chain, simulate


def four_points(v=1.2):
    # A=0, B=1, S=2, E=3 with d(A,B)=10, d(B,S)=4, d(S,E)=6.
    pts = [0.0, 10.0, 14.0, 20.0]
    dist = [[abs(a - b) for b in pts] for a in pts]
    inst = Instance(tasks=[TaskSpec(1, 2, 3, 70.0, 20.0)], fleet=Fleet((0,), (1,)), dist=dist)
    return inst.with_timing(velocity=v)


def test_leg_distance():
    inst = four_points()
    t = inst.by_id[1]
    assert leg_distance(inst, 0, 1, t) == 20.0
    assert leg_distance(inst, 1, 1, t) == 10.0
    same = Instance(tasks=[TaskSpec(1, 2, 2, 0.0, 0.0)], fleet=inst.fleet, dist=inst.dist)
    assert leg_distance(same, 2, 2, same.by_id[1]) == 0.0


def test_carrier_wait():
    inst = four_points(v=1.0)
    assert carrier_wait(inst, 100.0, 40.0, 0, 1) == 50.0
    assert carrier_wait(inst, 50.0, 40.0, 0, 1) == 0.0  # exact meeting
    assert carrier_wait(inst, 0.0, 40.0, 0, 1) == 0.0


def test_detach_time():
    inst = four_points(v=1.0)
    t = inst.by_id[1]
    # wait 50, travels 10 + 4 + 6, fixed 46
    assert detach_time(inst, 0.0, 50.0, 0, 1, t) == 50 + 10 + 8 + 4 + 30 + 6 + 8
    zero = Instance(tasks=[TaskSpec(1, 0, 0, 0.0, 0.0)], fleet=Fleet((0,), (0,)), dist=[[0.0]])
    assert detach_time(zero, 0.0, 0.0, 0, 0, zero.by_id[1]) == 46.0


def test_completion_and_tardiness():
    assert completion_and_tardiness(TaskSpec(1, 0, 0, 200.0, 20.0), 100.0) == (120.0, 0.0)
    assert completion_and_tardiness(TaskSpec(1, 0, 0, 90.0, 20.0), 100.0) == (120.0, 30.0)
    assert completion_and_tardiness(TaskSpec(1, 0, 0, 100.0, 0.0), 100.0) == (100.0, 0.0)


def test_single_task_by_hand():
    inst = four_points(v=1.0)
    s = fdd(inst, DualChain([[1]], [[1]]))
    tm = s.per_task[1]
    assert (tm.start, tm.attach) == (0.0, 10.0)
    assert tm.detach == 10 + 8 + 4 + 30 + 6 + 8
    assert tm.completion == tm.detach + 20
    assert tm.tardiness == tm.completion - 70 == 16
    assert s.objective == 0.4 * 20 + 0.6 * tm.tardiness


def test_example_firing_order(example_instance, example_chain):
    seen = []
    s = fdd(example_instance, example_chain, on_fire=lambda t, m: seen.append(t))
    assert s.firing_order == (5, 6, 1, 4, 3, 7, 2) and seen == list(s.firing_order)
    assert s.feasible


def test_cross_wait_is_infeasible():
    inst = line_instance(2, 1, 1)
    s = fdd(inst, DualChain([[1, 2]], [[2, 1]]))
    assert not s.feasible and s.objective == INFEASIBLE
    assert evaluate(inst, DualChain([[1, 2]], [[2, 1]])) == INFEASIBLE


def test_fleet_mismatch_rejected(example_instance):
    with pytest.raises(RepresentationError):
        fdd(example_instance, DualChain([[1]], [[1]]))
    with pytest.raises(RepresentationError):
        fdd(line_instance(2, 1, 1), DualChain([[1, 9]], [[1, 9]]))


def test_partial_and_empty_chain(example_instance):
    assert fdd(example_instance, DualChain.empty(2, 2)).objective == 0.0
    ch = DualChain([[1], []], [[], [1]])
    assert fdd(example_instance, ch).per_task.keys() == {1}


def test_counters_are_linear(example_instance, example_chain):
    c = {}
    fdd(example_instance, example_chain, counters=c)
    assert c["transitions"] == 7
    assert c["places"] == 4 + 2 * 7


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_matches_event_simulation(seed):
    rng = random.Random(seed)
    inst = generate(GenSpec(n=rng.randint(1, 12), m_plus=rng.randint(1, 4), m_minus=rng.randint(1, 6), seed=seed))
    ch = random_feasible_chain(rng, inst.task_ids, inst.m_plus, inst.m_minus)
    s = fdd(inst, ch)
    f, ref = simulate(inst, ch)
    assert math.isclose(s.objective, f, rel_tol=0, abs_tol=1e-9)
    for t, row in ref.items():
        tm = s.per_task[t]
        got = (tm.start, tm.attach, tm.detach, tm.completion, tm.wait, tm.distance, tm.tardiness)
        assert max(abs(a - b) for a, b in zip(got, row)) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_evaluate_is_bit_identical_to_fdd(seed):
    rng = random.Random(seed)
    inst = generate(GenSpec(n=rng.randint(1, 12), m_plus=rng.randint(1, 4), m_minus=rng.randint(1, 6), seed=seed))
    ch = random_chain(rng, inst.task_ids, inst.m_plus, inst.m_minus)
    assert evaluate(inst, ch) == fdd(inst, ch).objective


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_firing_order_does_not_matter(seed):
    rng = random.Random(seed)
    inst = generate(GenSpec(n=rng.randint(2, 12), m_plus=rng.randint(1, 4), m_minus=rng.randint(1, 6), seed=seed))
    ch = random_feasible_chain(rng, inst.task_ids, inst.m_plus, inst.m_minus)
    ref = fdd(inst, ch)
    for k in range(5):
        s = fdd(inst, ch, rng=random.Random(k))
        assert s.per_task == ref.per_task and s.objective == ref.objective
