"""Repeated forwarding game over a whole scenario, one packet per route per step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baselines import StrategyKind, han_style_punish, pandana_alpha
from .engine import (
    PacketOutcome,
    PunishmentRegistry,
    StepEvents,
    detect_and_punish,
    shield_notified,
    weakest_link_alpha,
)
from .game import GameParams
from .metrics import (
    EfficiencyLedger,
    MetricsSeries,
    StepMetrics,
    Totals,
    forwards_per_delivered,
    packet_delivery_rate,
    transmission_efficiency,
)
from .topology import InvalidParameter, Scenario, validate


@dataclass(frozen=True)
class LearningConfig:
    lam: float = 0.01
    epsilon: float = 0.05
    period: int = 3
    init_alpha: float = 0.0
    # False exempts probabilistic non-forwards from punishment
    punish_banking: bool = True
    # a notified node does not read an announced punishment as selfishness
    shield_notified: bool = True
    # no punishment and no learning: alphas stay at init_alpha
    frozen: bool = False

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise InvalidParameter(f"lambda must be >= 0 (got {self.lam})")
        if not 0.0 < self.epsilon <= 1.0:
            raise InvalidParameter(f"epsilon must be in (0, 1] (got {self.epsilon})")
        if self.period < 1:
            raise InvalidParameter(f"punishment period must be >= 1 (got {self.period})")
        if not 0.0 <= self.init_alpha <= 1.0:
            raise InvalidParameter(f"init_alpha must be in [0, 1] (got {self.init_alpha})")


@dataclass
class StepBatch:
    """Array view of one step's packets (one row per route)."""

    break_position: np.ndarray
    delivered: np.ndarray
    override_at_break: np.ndarray
    # (route, position) mask of intermediates that forwarded
    forwarded: np.ndarray


class Simulation:
    def __init__(
        self,
        scenario: Scenario,
        params: GameParams = GameParams(),
        learning: LearningConfig = LearningConfig(),
        strategy: StrategyKind = StrategyKind.WEAKEST_LINK,
        seed: int = 0,
        record_outcomes: bool = False,
    ):
        problems = validate(scenario)
        if problems:
            raise InvalidParameter(f"invalid scenario: {problems[0].detail}")
        self.scenario = scenario
        self.params = params
        self.learning = learning
        self.strategy = StrategyKind(strategy)
        self.record_outcomes = record_outcomes
        self.rng = np.random.default_rng(seed)

        n = scenario.num_nodes
        routes = scenario.routes
        self.hops = np.array([r.hop_count for r in routes], dtype=np.int64)
        self.max_hops = int(self.hops.max()) if len(routes) else 0
        self.nodes = np.zeros((len(routes), self.max_hops + 1), dtype=np.int64)
        for i, r in enumerate(routes):
            self.nodes[i, : len(r)] = r.nodes
        self.positions = np.arange(self.max_hops + 1)
        self.on_route = self.positions[None, :] <= self.hops[:, None]
        self.successors = scenario.successors()
        self.active = np.zeros(n, dtype=bool)
        self.active[scenario.active_nodes()] = True

        self.alpha = np.full(n, learning.init_alpha, dtype=float)
        self.last_utility = np.zeros(n)
        self.current_utility = np.zeros(n)
        self.registry = PunishmentRegistry(learning.period)
        self.totals = Totals()
        self.ledger = EfficiencyLedger.zeros(n)
        self.step_index = 0
        self.series = MetricsSeries(totals=self.totals)

    # -- one step -----------------------------------------------------------

    def transmit(self, draws: np.ndarray | None = None) -> StepBatch:
        """Walk every route once. ``draws[r, k]`` is the uniform used by the holder at position ``k``."""
        P, H = len(self.hops), self.max_hops
        if P == 0:
            empty = np.zeros(0, dtype=np.int64)
            return StepBatch(empty, empty.astype(bool), empty.astype(bool), np.zeros((0, 1), bool))
        holder = self.nodes[:, :H]
        nxt = self.nodes[:, 1:]
        valid = self.positions[None, :H] < self.hops[:, None]
        override = self.registry.blocked_matrix(self.scenario.num_nodes)[holder, nxt] & valid
        if draws is None:
            draws = self.rng.random((P, H))
        willing = draws < self.alpha[holder]
        willing[:, 0] = True
        refuse = valid & (override | ~willing)
        b = np.where(refuse.any(axis=1), refuse.argmax(axis=1), self.hops)
        delivered = b == self.hops
        rows = np.arange(P)
        override_at_break = ~delivered & override[rows, np.minimum(b, H - 1)]
        forwarded = (self.positions[None, :] >= 1) & (self.positions[None, :] < b[:, None])
        return StepBatch(b, delivered, override_at_break, forwarded)

    def settle(self, batch: StepBatch) -> None:
        n = self.scenario.num_nodes
        g, F = self.params.gain_schedule.increment, self.params.forwarding_cost
        b = batch.break_position
        reward = np.where(b >= 1, g * (b - 1), 0.0)
        chain = self.positions[None, :] <= b[:, None]
        rewarded = self.nodes[chain]
        self.current_utility += np.bincount(
            rewarded, weights=np.broadcast_to(reward[:, None], chain.shape)[chain], minlength=n
        )
        fwd_nodes = self.nodes[batch.forwarded]
        fwd_counts = np.bincount(fwd_nodes, minlength=n)
        self.current_utility -= F * fwd_counts

        sources = self.nodes[:, 0]
        self.totals.generated += len(b)
        self.totals.delivered += int(batch.delivered.sum())
        self.totals.forwards += int(fwd_counts.sum())
        self.ledger.own_tx += np.bincount(sources[b >= 1], minlength=n)
        self.ledger.own_delivered_tx += np.bincount(sources[batch.delivered], minlength=n)
        self.ledger.forwards += fwd_counts

    def events(self, batch: StepBatch) -> StepEvents:
        b = batch.break_position
        visible = (b >= 1) & ~batch.delivered
        rows = np.flatnonzero(visible)
        observers = self.nodes[rows, b[rows] - 1].tolist()
        refusers = self.nodes[rows, b[rows]].tolist()
        overrides = batch.override_at_break[rows].tolist()
        ev = StepEvents(refusals=list(zip(observers, refusers, overrides)))
        if self.record_outcomes:
            ev.outcomes = self.outcomes(batch)
        return ev

    def outcomes(self, batch: StepBatch) -> list[PacketOutcome]:
        out = []
        for i, route in enumerate(self.scenario.routes):
            b = int(batch.break_position[i])
            fwd = frozenset(route.nodes[1:b]) if b > 1 else frozenset()
            drops = (
                frozenset({(route.nodes[b], route.nodes[b + 1])})
                if batch.override_at_break[i]
                else frozenset()
            )
            out.append(PacketOutcome(route, b, bool(batch.delivered[i]), fwd, drops))
        return out

    def learn(self, events: StepEvents) -> None:
        lc = self.learning
        if self.strategy is StrategyKind.HAN_STYLE:
            han_style_punish(events, self.registry, self.successors, lc.punish_banking)
        else:
            detect_and_punish(events, self.registry, notify=True, punish_banking=lc.punish_banking)
        punished = np.zeros(self.scenario.num_nodes, dtype=bool)
        punished[list(self.registry.punished_nodes())] = True
        delta = self.current_utility - self.last_utility
        if lc.shield_notified and events.notifications:
            notified = np.zeros(self.scenario.num_nodes, dtype=bool)
            notified[[b for _, b in events.notifications]] = True
            delta = shield_notified(delta, notified)
        rule = pandana_alpha if self.strategy is StrategyKind.PANDANA_STYLE else weakest_link_alpha
        self.alpha = rule(self.alpha, delta, punished, lc.lam, lc.epsilon)

    def step(self) -> StepEvents:
        self.step_index += 1
        batch = self.transmit()
        self.settle(batch)
        # entries in force for this step's transmissions lose one step
        self.registry.tick()
        events = self.events(batch)
        if not self.learning.frozen:
            self.learn(events)
        self.last_utility = self.current_utility
        self.current_utility = np.zeros(self.scenario.num_nodes)
        self.series.per_step.append(self.snapshot())
        return events

    def snapshot(self) -> StepMetrics:
        _, eff = transmission_efficiency(self.ledger)
        alphas = self.alpha[self.active] if self.active.any() else self.alpha
        return StepMetrics(
            step=self.step_index,
            avg_alpha=float(alphas.mean()),
            cum_pdr=packet_delivery_rate(self.totals),
            fwd_per_dlv=forwards_per_delivered(self.totals),
            avg_efficiency=eff,
        )

    def run(self, steps: int) -> MetricsSeries:
        if steps < 1:
            raise InvalidParameter(f"steps must be >= 1 (got {steps})")
        for _ in range(steps):
            self.step()
        return self.series


def run(
    scenario: Scenario,
    params: GameParams,
    learning: LearningConfig,
    steps: int,
    seed: int,
    strategy: StrategyKind = StrategyKind.WEAKEST_LINK,
) -> MetricsSeries:
    return Simulation(scenario, params, learning, strategy, seed).run(steps)
