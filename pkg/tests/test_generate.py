import pytest

from ahasp.errors import ConfigError
from ahasp.generate import GenSpec, completion_bound, corridor_layout, fleet_starts, generate, rectilinear, resize_fleet
from ahasp.io import dumps_instance
from ahasp.model import validate_instance


def test_seeded_generation_is_byte_identical():
    assert dumps_instance(generate(GenSpec(n=12, seed=4))) == dumps_instance(generate(GenSpec(n=12, seed=4)))
    assert dumps_instance(generate(GenSpec(n=12, seed=4))) != dumps_instance(generate(GenSpec(n=12, seed=5)))


def test_default_instance_is_valid():
    inst = generate(GenSpec(n=5))
    assert validate_instance(inst) == []
    assert (inst.n, inst.m_plus, inst.m_minus) == (5, 4, 8)
    assert inst.name == "gen-n5-c4-s8-t0.7-seed0"


def test_sources_paste_and_destinations_cure():
    spec = GenSpec(n=40, positions=30, seed=1)
    inst = generate(spec)
    assert all(t.source < 15 <= t.dest < 30 for t in inst.tasks)
    lo, hi = spec.handling_range
    assert all(lo <= t.handling <= hi for t in inst.tasks)


def test_layout_distances():
    coords = corridor_layout(4, spacing=10.0, corridor=3.0)
    d = rectilinear(coords)
    assert d[0][1] == 10.0 and d[0][2] == 3.0 and d[1][2] == 13.0
    assert all(d[a][a] == 0 for a in range(4))


def test_loose_due_dates_are_never_missed():
    inst = generate(GenSpec(n=10, tightness=0.0, seed=2))
    assert all(t.due >= completion_bound(inst) for t in inst.tasks)


def test_fleet_prefix_is_stable():
    assert fleet_starts(30, 6, 3, 1)[:4] == fleet_starts(30, 4, 3, 1)
    inst = generate(GenSpec(n=5, m_plus=2, m_minus=4, seed=3))
    big = resize_fleet(inst, 5, 10, seed=3)
    assert big.tasks == inst.tasks and big.fleet.carrier_starts[:2] == inst.fleet.carrier_starts


@pytest.mark.parametrize(
    "spec",
    [GenSpec(n=0), GenSpec(n=3, m_plus=0), GenSpec(n=3, tightness=2.0), GenSpec(n=3, positions=1), GenSpec(n=3, handling_range=(5, 1))],
)
def test_invalid_specs(spec):
    with pytest.raises(ConfigError):
        generate(spec)
    with pytest.raises(ConfigError):
        resize_fleet(generate(GenSpec(n=2)), 0, 1)
