from dataclasses import replace

import pytest

from ahasp.alns import AlnsConfig, default_budget_ms, solve, temperature
from ahasp.baselines import brute_force
from ahasp.decode import fdd
from ahasp.errors import ConfigError
from ahasp.generate import GenSpec, generate

ITER = AlnsConfig(budget_mode="iterations", iterations=30)


def test_default_budget():
    inst = generate(GenSpec(n=5))
    assert default_budget_ms(inst) == 3000.0
    assert default_budget_ms(generate(GenSpec(n=20))) == 48_000.0


def test_temperature():
    inst = generate(GenSpec(n=5, m_plus=2, m_minus=2))
    total = sum(inst.dist[t.source][t.dest] for t in inst.tasks)
    assert temperature(inst, 20.0) == pytest.approx(20 * total / (5 * 4))


@pytest.mark.parametrize(
    "change",
    [
        {"phi": 1.5},
        {"kappa": 0},
        {"zeta": 0.0},
        {"scores": (1.0, 2.0)},
        {"budget_mode": "forever"},
        {"budget_ms": -1.0},
        {"iterations": -3},
        {"mu": -1.0},
    ],
)
def test_config_validation(change):
    with pytest.raises(ConfigError):
        replace(AlnsConfig(), **change).validate()


def test_zero_iterations_returns_initial_solution():
    inst = generate(GenSpec(n=8, seed=3))
    res = solve(inst, replace(ITER, iterations=0))
    assert res.iterations == 0 and res.objective == res.initial_objective
    assert res.log == []


def test_seeded_replay_is_bit_identical():
    inst = generate(GenSpec(n=10, m_plus=2, m_minus=4, seed=4))
    a = solve(inst, replace(ITER, seed=11))
    b = solve(inst, replace(ITER, seed=11))
    assert a.objective == b.objective and a.chain == b.chain
    assert [r.best_f for r in a.log] == [r.best_f for r in b.log]


def test_result_is_consistent():
    inst = generate(GenSpec(n=10, m_plus=2, m_minus=4, seed=5))
    res = solve(inst, replace(ITER, seed=2))
    assert res.objective <= res.initial_objective
    assert fdd(inst, res.chain).objective == res.objective == res.schedule.objective
    assert len(res.chain) == inst.n
    best = [r.best_f for r in res.log]
    assert best == sorted(best, reverse=True)
    assert sum(r["uses"] for r in res.operators if r["category"] == "removal") == 30


def test_time_budget_is_respected():
    inst = generate(GenSpec(n=8, m_plus=2, m_minus=2, seed=6))
    res = solve(inst, AlnsConfig(budget_ms=200.0, log=False))
    assert res.budget_ms == 200.0 and res.iterations > 0
    assert res.elapsed_ms < 200.0 + 500.0


def test_audit_mode_runs_clean():
    inst = generate(GenSpec(n=8, m_plus=2, m_minus=3, seed=7))
    res = solve(inst, replace(ITER, iterations=10, audit=True))
    assert res.insertion_stats.audits > 0


def test_no_brs_finds_the_same_trajectory():
    inst = generate(GenSpec(n=8, m_plus=2, m_minus=3, seed=8))
    a = solve(inst, replace(ITER, iterations=15))
    b = solve(inst, replace(ITER, iterations=15, use_brs=False))
    assert a.chain == b.chain and a.objective == b.objective
    assert a.insertion_stats.pairs_evaluated < b.insertion_stats.pairs_evaluated


def test_small_instance_reaches_optimum():
    inst = generate(GenSpec(n=4, m_plus=2, m_minus=2, seed=9))
    res = solve(inst, replace(ITER, iterations=200))
    assert res.objective == brute_force(inst).optimal_objective
