import numpy as np
import pytest

from weakest_link.baselines import (
    StrategyKind,
    han_style_update,
    pandana_style_update,
)
from weakest_link.engine import NodeState, PacketOutcome, PunishmentRegistry, StepEvents
from weakest_link.simulation import LearningConfig, Simulation
from weakest_link.topology import Route, Scenario, ScenarioKind, generate_ring


def test_labels_mark_stylized_baselines():
    assert StrategyKind.WEAKEST_LINK.label == "weakest-link"
    assert StrategyKind.HAN_STYLE.label.endswith("(stylized)")
    assert StrategyKind.PANDANA_STYLE.label.endswith("(stylized)")


def test_pandana_never_decreases():
    s = NodeState(alpha=0.5, last_utility=5, current_utility=0)
    assert pandana_style_update(s, 1).alpha == 0.5


def test_pandana_positive_part():
    s = NodeState(alpha=0.5, lam=0.01, last_utility=0, current_utility=2)
    assert pandana_style_update(s, 1).alpha == pytest.approx(0.52)


def test_pandana_epsilon_when_punished():
    s = NodeState(alpha=0.5, epsilon=0.05, punished_until={0: 3}, current_utility=-9)
    assert pandana_style_update(s, 3).alpha == pytest.approx(0.55)


def _han_fixture():
    # node 1 forwards towards 2, 3 and 4 on different routes
    routes = (Route((0, 1, 2)), Route((5, 1, 3)), Route((1, 4)), Route((2, 6, 7)))
    sc = Scenario(8, routes, ScenarioKind.RANDOM)
    states = {n: NodeState(alpha=0.5) for n in range(8)}
    return sc, states


def test_han_defection_punishes_every_successor():
    sc, states = _han_fixture()
    reg = PunishmentRegistry(3)
    refusal = PacketOutcome(sc.routes[0], 1, False, frozenset(), frozenset())
    # node 1 refused (break at position 1), observed by 0
    ev = StepEvents.from_outcomes([refusal])
    han_style_update(states, ev, reg, sc.successors(), step=1)
    assert set(reg.active) == {(0, 1)}
    refusal = PacketOutcome(sc.routes[0], 2, False, frozenset({1}), frozenset())
    # node 2 refused a packet from node 1: node 1 now blocks all its successors
    ev = StepEvents.from_outcomes([refusal])
    han_style_update(states, ev, reg, sc.successors(), step=2)
    assert {(1, 2), (1, 3), (1, 4)} <= set(reg.active)
    assert states[3].alpha == pytest.approx(0.55)


def test_han_without_defection_is_weakest_link_update():
    sc, states = _han_fixture()
    states[6].last_utility, states[6].current_utility = 1.0, 4.0
    reg = PunishmentRegistry(3)
    han_style_update(states, StepEvents(), reg, sc.successors(), step=1)
    assert len(reg) == 0
    assert states[6].alpha == pytest.approx(0.53)
    assert states[0].alpha == 0.5


def test_han_punishment_refusals_propagate():
    sc = generate_ring(9, 4)
    sim = Simulation(sc, learning=LearningConfig(init_alpha=1.0), strategy=StrategyKind.HAN_STYLE)
    sim.registry.punish(4, 5)
    ev = sim.step()
    assert (3, 4) in ev.new_punishments
    assert not ev.notifications


def test_han_ring_collapses():
    series = Simulation(generate_ring(25, 6), strategy=StrategyKind.HAN_STYLE, seed=3).run(2000)
    assert series.final.cum_pdr < 0.10


def test_pandana_trajectories_monotone():
    sim = Simulation(
        generate_ring(25, 6),
        learning=LearningConfig(epsilon=0.005),
        strategy=StrategyKind.PANDANA_STYLE,
        seed=1,
    )
    prev = sim.alpha.copy()
    for _ in range(300):
        sim.step()
        assert np.all(sim.alpha >= prev)
        prev = sim.alpha.copy()
