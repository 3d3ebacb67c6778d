from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from weakest_link.topology import (
    InvalidParameter,
    Route,
    Scenario,
    ScenarioKind,
    generate_random,
    generate_ring,
    validate,
)


def role_counts(scenario):
    src = Counter(r.source for r in scenario.routes)
    dst = Counter(r.destination for r in scenario.routes)
    mid = Counter(n for r in scenario.routes for n in r.intermediates)
    return {n: (src[n], dst[n], mid[n]) for n in range(scenario.num_nodes)}


def test_ring_25_6_layout():
    sc = generate_ring(25, 6)
    assert len(sc.routes) == 25
    assert sc.routes[0].nodes == (0, 1, 2, 3, 4, 5, 6)
    # destination of source i is (i + 6) mod 25
    assert all(r.destination == (r.source + 6) % 25 for r in sc.routes)


def test_minimal_ring():
    sc = generate_ring(3, 1)
    assert [r.nodes for r in sc.routes] == [(0, 1), (1, 2), (2, 0)]
    assert all(r.intermediates == () for r in sc.routes)


def test_ring_node7_intermediate_sources():
    sc = generate_ring(25, 6)
    sources = sorted(r.source for r in sc.routes if 7 in r.intermediates)
    assert sources == [2, 3, 4, 5, 6]


@pytest.mark.parametrize("n,h", [(2, 2), (6, 6), (5, 0)])
def test_ring_rejects_bad_params(n, h):
    with pytest.raises(InvalidParameter):
        generate_ring(n, h)


@given(h=st.integers(1, 9), extra=st.integers(1, 20))
def test_ring_roles(h, extra):
    n = h + extra
    counts = role_counts(generate_ring(n, h))
    assert set(counts.values()) == {(1, 1, h - 1)}


def test_random_empty():
    assert generate_random(100, 0, (3, 4, 5, 6), 42).routes == ()


def test_random_full_scale_mean_forwarders():
    sc = generate_random(100, 1000, (3, 4, 5, 6), 42)
    assert len(sc.routes) == 1000
    assert 4.3 <= sc.mean_forwarders() <= 4.7
    assert validate(sc) == []


def test_random_deterministic():
    a = generate_random(100, 1000, (3, 4, 5, 6), 42)
    b = generate_random(100, 1000, (3, 4, 5, 6), 42)
    assert repr(a.routes).encode() == repr(b.routes).encode()


def test_random_converges_to_distribution_mean():
    sc = generate_random(100, 10_000, (3, 4, 5, 6), 7)
    assert abs(sc.mean_forwarders() - 4.5) <= 0.1


def test_random_weighted_distribution():
    sc = generate_random(20, 200, {2: 1.0, 5: 0.0}, 1)
    assert {r.hop_count - 1 for r in sc.routes} == {2}


def test_random_rejects_long_routes():
    with pytest.raises(InvalidParameter):
        generate_random(6, 10, (3, 4, 5), 0)
    with pytest.raises(InvalidParameter):
        generate_random(2, 1, (0,), 0)


@settings(max_examples=50)
@given(
    n=st.integers(3, 40),
    pairs=st.integers(0, 60),
    fw=st.lists(st.integers(0, 6), min_size=1, max_size=4),
    seed=st.integers(0, 2**32 - 1),
)
def test_random_routes_are_valid(n, pairs, fw, seed):
    if max(fw) + 2 > n:
        with pytest.raises(InvalidParameter):
            generate_random(n, pairs, fw, seed)
        return
    sc = generate_random(n, pairs, fw, seed)
    assert validate(sc) == []
    assert all(r.hop_count - 1 in fw for r in sc.routes)


def test_validate_ring_ok():
    assert validate(generate_ring(25, 6)) == []


def test_validate_duplicate_node():
    sc = Scenario(10, (Route((0, 1, 0)),), ScenarioKind.RANDOM)
    assert [v.kind for v in validate(sc)] == ["duplicate-node"]


def test_validate_unknown_node():
    sc = Scenario(10, (Route((0, 99)),), ScenarioKind.RANDOM)
    assert [v.kind for v in validate(sc)] == ["unknown-node"]


def test_validate_ring_roles_broken():
    ring = generate_ring(6, 2)
    broken = Scenario(6, ring.routes[:-1], ScenarioKind.RING)
    kinds = {v.kind for v in validate(broken)}
    assert kinds == {"ring-roles"}
