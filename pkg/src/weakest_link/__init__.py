"""Repeated-game cooperation enforcement for multi-hop packet forwarding."""

from .baselines import StrategyKind
from .game import GainSchedule, GameParams, check_nash, route_utility, total_utility
from .simulation import LearningConfig, Simulation, run
from .topology import Route, Scenario, ScenarioKind, generate_random, generate_ring, validate

__all__ = [
    "GainSchedule",
    "GameParams",
    "LearningConfig",
    "Route",
    "Scenario",
    "ScenarioKind",
    "Simulation",
    "StrategyKind",
    "check_nash",
    "generate_random",
    "generate_ring",
    "route_utility",
    "run",
    "total_utility",
    "validate",
]
