"""Expected chain utility along a route and a grid-based Nash check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .topology import InvalidParameter, Route, Scenario

Profile = Union[Mapping[int, float], Sequence[float], np.ndarray]


@dataclass(frozen=True)
class GainSchedule:
    """Linear earnings scale: a chain reaching position ``n`` is worth ``increment * (n - 1)``."""

    increment: float = 1.0

    def __post_init__(self) -> None:
        if not self.increment > 0:
            raise InvalidParameter(f"gain increment must be > 0 (got {self.increment})")

    def __call__(self, n: int) -> float:
        if n < 1:
            raise InvalidParameter(f"chain position must be >= 1 (got {n})")
        return self.increment * (n - 1)


@dataclass(frozen=True)
class GameParams:
    forwarding_cost: float = 3.0
    gain_schedule: GainSchedule = field(default_factory=GainSchedule)

    def __post_init__(self) -> None:
        if self.forwarding_cost < 0:
            raise InvalidParameter(f"forwarding cost must be >= 0 (got {self.forwarding_cost})")


def gain(schedule: GainSchedule, n: int) -> float:
    return schedule(n)


def route_utility(route: Route, n: int, profile: Profile, params: GameParams) -> float:
    """Expected utility of the node holding chain position ``n`` on ``route``.

    Evaluated by backward induction from the destination. Position 0 (the
    source) always transmits, so its value equals the position-1 value.
    """
    N = route.hop_count
    if not 0 <= n <= N:
        raise InvalidParameter(f"position {n} outside [0, {N}]")
    C, F = params.gain_schedule, params.forwarding_cost
    u = C(N)
    for k in range(N - 1, max(n, 1) - 1, -1):
        a = float(profile[route.nodes[k]])
        u = (1.0 - a) * C(k) + a * (u - F)
    return u


def total_utility(node: int, scenario: Scenario, profile: Profile, params: GameParams) -> float:
    return sum(
        route_utility(r, r.position(node), profile, params)
        for r in scenario.routes
        if node in r
    )


@dataclass
class NashReport:
    is_nash: bool
    # node -> (deviating alpha, utility gain over the profile)
    best_deviations: dict[int, tuple[float, float]]


def deviation_grid(grid_step: float) -> np.ndarray:
    if not 0 < grid_step <= 0.5:
        raise InvalidParameter(f"grid_step must be in (0, 0.5] (got {grid_step})")
    k = int(np.floor(1.0 / grid_step + 1e-9))
    grid = np.round(np.arange(k + 1) * grid_step, 12)
    if grid[-1] < 1.0:
        grid = np.append(grid, 1.0)
    return grid


def check_nash(
    scenario: Scenario,
    profile: Profile,
    params: GameParams,
    grid_step: float = 0.1,
    tolerance: float = 1e-9,
) -> NashReport:
    """Scan unilateral deviations of every node's forwarding probability on a grid."""
    if tolerance < 0:
        raise InvalidParameter(f"tolerance must be >= 0 (got {tolerance})")
    grid = deviation_grid(grid_step)
    alpha = {n: float(profile[n]) for n in range(scenario.num_nodes)}
    best: dict[int, tuple[float, float]] = {}
    for node in scenario.active_nodes():
        base = total_utility(node, scenario, alpha, params)
        top_a, top_gain = alpha[node], 0.0
        trial = dict(alpha)
        for a in grid:
            trial[node] = float(a)
            improvement = total_utility(node, scenario, trial, params) - base
            if improvement > top_gain:
                top_a, top_gain = float(a), improvement
        if top_gain > tolerance:
            best[node] = (top_a, top_gain)
    return NashReport(is_nash=not best, best_deviations=best)
