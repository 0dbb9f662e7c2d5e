import math
import random
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ahasp.alns import AlnsConfig, AlnsState, initial_solution
from ahasp.chain import DualChain, Side, Slot
from ahasp.deadlock import blocked_gaps, positions
from ahasp.decode import evaluate, fdd
from ahasp.errors import ConfigError, ContractError
from ahasp.generate import GenSpec, generate
from ahasp.model import Instance, TaskSpec
from ahasp.operators import (
    REMOVALS,
    InsertionStats,
    OperatorBank,
    OpStat,
    accept,
    best_insertion,
    insert_greedy,
    removal_count,
    reward,
    select_operator,
    shaw_relatedness,
    update_weights,
)

from oracles import random_feasible_chain


def make_state(inst, seed=0, **cfg):
    chain = initial_solution(inst)
    sched = fdd(inst, chain)
    return AlnsState(
        inst=inst,
        config=AlnsConfig(seed=seed, **cfg),
        rng=random.Random(seed),
        chain=chain,
        schedule=sched,
        best_chain=chain.copy(),
        best_f=sched.objective,
    )


@pytest.fixture
def inst10():
    return generate(GenSpec(n=10, m_plus=2, m_minus=3, seed=5))


# -- adaptation ----------------------------------------------------------------


def test_uniform_roulette():
    bank = OperatorBank()
    rng = random.Random(1)
    n = 100_000
    counts = Counter(select_operator(bank, "removal", rng) for _ in range(n))
    chi2 = sum((counts[o] - n / 5) ** 2 / (n / 5) for o in bank.removal)
    assert chi2 < 18.47  # 4 dof, p = 0.001


def test_dominant_weight_is_drawn_most():
    bank = OperatorBank()
    bank.removal["SR"].weight = 0.99 * 4 / 0.01  # 99% of the total
    rng = random.Random(2)
    freq = sum(select_operator(bank, "removal", rng) == "SR" for _ in range(20_000)) / 20_000
    assert abs(freq - 0.99) < 0.005


def test_roulette_replay():
    draws = lambda: [select_operator(OperatorBank(), "insertion", random.Random(7)) for _ in range(5)]  # noqa: E731
    assert draws() == draws()
    with pytest.raises(ConfigError):
        select_operator(OperatorBank(), "bogus", random.Random(0))


def test_weight_update_arithmetic():
    bank = OperatorBank()
    bank.removal["RR"] = OpStat(weight=1.0, score=33.0, uses=1)
    update_weights(bank, 0.1)
    assert math.isclose(bank.removal["RR"].weight, 4.2)
    assert bank.removal["RR"].score == 0 and bank.removal["RR"].uses == 0
    assert bank.removal["HCR"].weight == 1.0  # unused: untouched


def test_rho_zero_freezes_weights():
    bank = OperatorBank()
    reward(bank, "RR", "GI", 33.0)
    bank.removal["RR"].uses = bank.insertion["GI"].uses = 1
    update_weights(bank, 0.0)
    assert all(s.weight == 1.0 for s in list(bank.removal.values()) + list(bank.insertion.values()))


def test_acceptance_rule():
    rng = random.Random(3)
    assert accept(10.0, 9.0, 0.0, rng) and accept(10.0, 10.0, 0.0, rng)
    assert not accept(10.0, 11.0, 0.0, rng)
    assert not accept(10.0, math.inf, 1e9, rng)
    n = 100_000
    freq = sum(accept(0.0, 5.0, 5.0, rng) for _ in range(n)) / n
    assert abs(freq - math.exp(-1)) < 0.006
    assert sum(accept(0.0, 1e6, 5.0, rng) for _ in range(1000)) == 0


# -- removal -------------------------------------------------------------------


def test_removal_count_rounds_half_up():
    assert removal_count(0.3, 5) == 2  # 1.5
    assert removal_count(0.3, 20) == 6
    assert removal_count(0.0, 20) == 1


@pytest.mark.parametrize("op", sorted(REMOVALS))
def test_remove_all_and_none(inst10, op):
    st_ = make_state(inst10)
    assert REMOVALS[op](st_, 0) == []
    assert len(st_.chain) == 10
    out = REMOVALS[op](st_, 10)
    assert sorted(out) == list(range(1, 11))
    assert all(r == [] for r in st_.chain.carrier_routes + st_.chain.shuttle_routes)


@pytest.mark.parametrize("op", sorted(REMOVALS))
def test_removal_replay(inst10, op):
    a, b = make_state(inst10, seed=4), make_state(inst10, seed=4)
    assert REMOVALS[op](a, 3) == REMOVALS[op](b, 3)
    assert a.chain == b.chain


@pytest.mark.parametrize(
    "op, key",
    [
        ("HCR", lambda tm, lam: tm.cost(lam)),
        ("LDR", lambda tm, lam: tm.distance),
        ("LTR", lambda tm, lam: tm.tardiness),
    ],
)
def test_worst_removal_matches_sort(inst10, op, key):
    st_ = make_state(inst10)
    lam = inst10.timing.lam
    pt = st_.schedule.per_task
    want = sorted(pt, key=lambda t: (-key(pt[t], lam), t))[:4]
    assert REMOVALS[op](st_, 4) == want
    assert set(st_.removal_cost) == set(want)


def test_ties_go_to_lowest_id(inst10):
    st_ = make_state(inst10)
    flat = {t: replace(tm, tardiness=0.0) for t, tm in st_.schedule.per_task.items()}
    st_.schedule = replace(st_.schedule, per_task=flat)
    assert REMOVALS["LTR"](st_, 3) == [1, 2, 3]


def test_shaw_relatedness():
    inst = generate(GenSpec(n=4, seed=1))
    a = inst.by_id[1]
    twin = Instance(
        tasks=[a, TaskSpec(2, a.source, a.dest, a.due, 5.0)], fleet=inst.fleet, dist=inst.dist
    )
    assert shaw_relatedness(twin, 1, 2, 0.3) == 0.0
    b = inst.by_id[2]
    d = inst.dist
    assert shaw_relatedness(inst, 1, 2, 1.0) == d[a.source][b.source] + d[a.dest][b.dest]


def test_shaw_matches_ranking(inst10):
    st_ = make_state(inst10, seed=9)
    ref = random.Random(9).choice(sorted(st_.chain))
    others = sorted((t for t in st_.chain if t != ref), key=lambda t: shaw_relatedness(inst10, ref, t, 0.3))
    assert REMOVALS["SR"](st_, 4) == [ref] + others[:3]


# -- insertion -----------------------------------------------------------------


def test_unique_placement():
    inst = generate(GenSpec(n=1, m_plus=1, m_minus=1, seed=0))
    pl = best_insertion(inst, DualChain.empty(1, 1), 1)
    assert (pl.carrier_slot, pl.shuttle_slot) == (Slot(Side.CARRIER, 0, 0), Slot(Side.SHUTTLE, 0, 0))


def test_example_with_brs_scans_three_shuttle_slots(example_instance, example_chain):
    blocked = blocked_gaps(example_chain, Slot(Side.CARRIER, 1, 2), positions(example_chain, Side.SHUTTLE))
    assert len(example_chain.slots(Side.SHUTTLE)) - len(blocked) == 3
    stats = InsertionStats()
    best_insertion(example_instance, example_chain, 8, stats=stats)
    assert stats.pairs_evaluated == stats.pairs_total - stats.pairs_blocked


def test_placed_task_rejected(example_instance, example_chain):
    with pytest.raises(ContractError):
        best_insertion(example_instance, example_chain, 1)


def test_large_fleet_spreads_out():
    inst = generate(GenSpec(n=3, m_plus=3, m_minus=3, seed=2))
    ch = DualChain.empty(3, 3)
    for t in (1, 2, 3):
        pl = best_insertion(inst, ch, t)
        ch.insert(t, pl.carrier_slot, pl.shuttle_slot)
        exhaustive = min(
            evaluate(inst, _with(ch, t, cs, ss)) for cs in _slots_without(ch, t, Side.CARRIER) for ss in _slots_without(ch, t, Side.SHUTTLE)
        )
        assert evaluate(inst, ch) == exhaustive


def _with(ch, t, cs, ss):
    out = ch.copy()
    out.remove(t)
    out.insert(t, cs, ss)
    return out


def _slots_without(ch, t, side):
    tmp = ch.copy()
    tmp.remove(t)
    return tmp.slots(side)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_brs_and_full_scan_agree(seed):
    rng = random.Random(seed)
    inst = generate(GenSpec(n=10, m_plus=rng.randint(1, 3), m_minus=rng.randint(1, 4), seed=seed))
    ch = random_feasible_chain(rng, inst.task_ids, inst.m_plus, inst.m_minus)
    t = rng.choice(inst.task_ids)
    ch.remove(t)
    a_stats, b_stats = InsertionStats(), InsertionStats()
    a = best_insertion(inst, ch, t, use_brs=True, stats=a_stats)
    b = best_insertion(inst, ch, t, use_brs=False, stats=b_stats)
    assert a == b
    assert a_stats.pairs_blocked == b_stats.pairs_blocked
    assert a_stats.pairs_evaluated + a_stats.pairs_blocked == a_stats.pairs_total == b_stats.pairs_evaluated


def test_exhaustive_bound_on_tiny_instance():
    from ahasp.baselines import brute_force

    inst = generate(GenSpec(n=4, m_plus=2, m_minus=2, seed=3))
    assert evaluate(inst, initial_solution(inst)) >= brute_force(inst).optimal_objective


@pytest.mark.parametrize("rule", ["GI", "UGI", "CGI"])
def test_insert_greedy_with_audit(inst10, rule):
    st_ = make_state(inst10, seed=1, audit=True)
    REMOVALS["RR"](st_, 4)
    f = insert_greedy(st_, rule)
    assert len(st_.chain) == 10 and not st_.removed
    assert f == evaluate(inst10, st_.chain)
    assert st_.insertion_stats.audits == 4


def test_insertion_order_rules(inst10):
    st_ = make_state(inst10)
    removed = REMOVALS["HCR"](st_, 3)
    order = []
    from ahasp import operators

    real = operators.best_insertion

    def spy(inst, chain, task, **kw):
        order.append(task)
        return real(inst, chain, task, **kw)

    operators.best_insertion = spy
    try:
        insert_greedy(st_, "UGI")
    finally:
        operators.best_insertion = real
    assert order == sorted(removed, key=lambda t: (inst10.by_id[t].due, t))
    with pytest.raises(ConfigError):
        REMOVALS["RR"](st_, 1)
        insert_greedy(st_, "XYZ")
