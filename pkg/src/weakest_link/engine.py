"""Packet forwarding, reward settlement, punishment and the learning update.

These are the per-packet / per-node operations. ``simulation.Simulation``
runs the same rules over all routes at once with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .game import GameParams
from .topology import InvalidParameter, Route


@dataclass
class NodeState:
    alpha: float = 0.0
    last_utility: float = 0.0
    current_utility: float = 0.0
    lam: float = 0.01
    epsilon: float = 0.05
    # punisher -> last step index at which this node is still punished
    punished_until: dict[int, int] = field(default_factory=dict)
    # set when a successor announced a punishment to this node during the step
    notified: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameter(f"alpha must be in [0, 1] (got {self.alpha})")
        if self.lam < 0:
            raise InvalidParameter(f"lambda must be >= 0 (got {self.lam})")
        if not 0.0 < self.epsilon <= 1.0:
            raise InvalidParameter(f"epsilon must be in (0, 1] (got {self.epsilon})")


States = Union[Mapping[int, NodeState], Sequence[NodeState]]


class PunishmentRegistry:
    """Active ``(punisher, punished)`` overrides with the number of steps left.

    A new entry blocks the next ``period`` steps of transmissions. ``tick`` is
    called once per step after that step's transmissions.
    """

    def __init__(self, period: int = 3):
        if period < 1:
            raise InvalidParameter(f"punishment period must be >= 1 (got {period})")
        self.period = period
        self.active: dict[tuple[int, int], int] = {}

    def is_active(self, punisher: int, punished: int) -> bool:
        return (punisher, punished) in self.active

    def punish(self, punisher: int, punished: int) -> None:
        self.active[(punisher, punished)] = self.period

    def tick(self) -> None:
        self.active = {k: r - 1 for k, r in self.active.items() if r > 1}

    def punished_nodes(self) -> set[int]:
        return {b for _, b in self.active}

    def blocked_matrix(self, num_nodes: int) -> np.ndarray:
        m = np.zeros((num_nodes, num_nodes), dtype=bool)
        if self.active:
            a, b = np.array(list(self.active)).T
            m[a, b] = True
        return m

    def __len__(self) -> int:
        return len(self.active)


@dataclass(frozen=True)
class PacketOutcome:
    route: Route
    break_position: int
    delivered: bool
    forwards_performed: frozenset[int]
    punishment_drops: frozenset[tuple[int, int]]

    def refusal(self) -> tuple[int, int, bool] | None:
        """``(observer, refuser, was_override)`` for a break an upstream node can see."""
        b = self.break_position
        if self.delivered or b == 0:
            return None
        nodes = self.route.nodes
        return nodes[b - 1], nodes[b], bool(self.punishment_drops)


@dataclass
class StepEvents:
    outcomes: list[PacketOutcome] = field(default_factory=list)
    # (observer, refuser, was_override) for every visible non-forward this step
    refusals: list[tuple[int, int, bool]] = field(default_factory=list)
    new_punishments: set[tuple[int, int]] = field(default_factory=set)
    notifications: set[tuple[int, int]] = field(default_factory=set)

    @classmethod
    def from_outcomes(cls, outcomes: Iterable[PacketOutcome]) -> "StepEvents":
        outcomes = list(outcomes)
        refusals = [r for r in (o.refusal() for o in outcomes) if r is not None]
        return cls(outcomes=outcomes, refusals=refusals)


def decide_forward(
    node: int,
    next_hop: int,
    state: NodeState,
    registry: PunishmentRegistry,
    rng: np.random.Generator,
    is_source: bool = False,
) -> bool:
    if registry.is_active(node, next_hop):
        return False
    if is_source:
        return True
    return bool(rng.random() < state.alpha)


def transmit_packet(
    route: Route,
    states: States,
    registry: PunishmentRegistry,
    rng: np.random.Generator,
) -> PacketOutcome:
    nodes = route.nodes
    forwards: list[int] = []
    for k in range(route.hop_count):
        holder, nxt = nodes[k], nodes[k + 1]
        if not decide_forward(holder, nxt, states[holder], registry, rng, is_source=k == 0):
            drops = frozenset({(holder, nxt)}) if registry.is_active(holder, nxt) else frozenset()
            return PacketOutcome(route, k, False, frozenset(forwards), drops)
        if k > 0:
            forwards.append(holder)
    return PacketOutcome(route, route.hop_count, True, frozenset(forwards), frozenset())


def chain_gain(params: GameParams, break_position: int) -> float:
    # a refusal at the source collects nothing
    return params.gain_schedule(break_position) if break_position >= 1 else 0.0


def settle_rewards(
    outcome: PacketOutcome, params: GameParams, states: States | None = None
) -> dict[int, float]:
    """Per-node currency deltas for one packet.

    Every node at chain positions ``0..b`` collects the gain of the chain
    that ended at ``b``; each forwarder also pays the forwarding cost.
    """
    b = outcome.break_position
    reward = chain_gain(params, b)
    deltas = {n: reward for n in outcome.route.nodes[: b + 1]}
    for n in outcome.forwards_performed:
        deltas[n] -= params.forwarding_cost
    if states is not None:
        for n, d in deltas.items():
            states[n].current_utility += d
    return deltas


def detect_and_punish(
    events: StepEvents,
    registry: PunishmentRegistry,
    notify: bool = True,
    punish_banking: bool = True,
) -> PunishmentRegistry:
    """Turn the step's visible refusals into punishments.

    A refusal that enforces a punishment is announced to the observer when
    ``notify`` is set and is then not treated as a deviation.
    """
    for observer, refuser, was_override in events.refusals:
        if was_override and notify:
            events.notifications.add((refuser, observer))
            continue
        if not was_override and not punish_banking:
            continue
        registry.punish(observer, refuser)
        events.new_punishments.add((observer, refuser))
    return registry


def mark_notified(states: States, events: StepEvents) -> None:
    for _, notified in events.notifications:
        states[notified].notified = True


def weakest_link_alpha(alpha, delta, punished, lam, epsilon):
    """Utility-proportional update, or an epsilon step up while punished."""
    return np.where(
        punished,
        np.minimum(1.0, alpha + epsilon),
        np.clip(alpha + lam * delta, 0.0, 1.0),
    )


def shield_notified(delta, notified):
    """Drop the negative part of a utility change caused by an announced punishment."""
    return np.where(notified, np.maximum(delta, 0.0), delta)


def _is_punished(state: NodeState, step: int) -> bool:
    punished = any(until >= step for until in state.punished_until.values())
    state.punished_until = {p: u for p, u in state.punished_until.items() if u > step}
    return punished


def _utility_change(state: NodeState, shield: bool) -> float:
    delta = state.current_utility - state.last_utility
    return float(shield_notified(delta, state.notified)) if shield else delta


def _finish_step(state: NodeState, new_alpha) -> NodeState:
    state.alpha = float(new_alpha)
    state.notified = False
    state.last_utility = state.current_utility
    state.current_utility = 0.0
    return state


def apply_learning_update(state: NodeState, step: int, shield: bool = True) -> NodeState:
    """One self-learning step.

    While punished the node raises alpha by ``epsilon``; otherwise alpha moves
    by ``lam`` times the change in realized utility since the previous step.
    With ``shield`` a utility drop in a step where the node was notified of a
    punishment downstream does not lower alpha.
    """
    punished = _is_punished(state, step)
    delta = _utility_change(state, shield)
    return _finish_step(
        state, weakest_link_alpha(state.alpha, delta, punished, state.lam, state.epsilon)
    )
