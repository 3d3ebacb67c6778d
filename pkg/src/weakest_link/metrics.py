"""Delivery, forwarding and transmission-efficiency measurements."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np


@dataclass
class Totals:
    generated: int = 0
    delivered: int = 0
    forwards: int = 0


@dataclass(frozen=True)
class StepMetrics:
    step: int
    avg_alpha: float
    cum_pdr: float
    fwd_per_dlv: Optional[float]
    avg_efficiency: float


@dataclass
class EfficiencyLedger:
    """Per-node transmission counts under unit power per transmission."""

    own_tx: np.ndarray
    own_delivered_tx: np.ndarray
    forwards: np.ndarray

    @classmethod
    def zeros(cls, num_nodes: int) -> "EfficiencyLedger":
        z = lambda: np.zeros(num_nodes, dtype=np.int64)  # noqa: E731
        return cls(z(), z(), z())


@dataclass
class MetricsSeries:
    per_step: list[StepMetrics] = field(default_factory=list)
    totals: Totals = field(default_factory=Totals)

    @property
    def final(self) -> StepMetrics:
        return self.per_step[-1]

    def column(self, name: str) -> np.ndarray:
        return np.array(
            [np.nan if getattr(m, name) is None else getattr(m, name) for m in self.per_step]
        )

    def steps_to_alpha(self, threshold: float) -> Optional[int]:
        """First step whose average alpha reaches ``threshold``, if any."""
        for m in self.per_step:
            if m.avg_alpha >= threshold:
                return m.step
        return None


def packet_delivery_rate(totals: Totals) -> float:
    if totals.generated == 0:
        return 0.0
    return totals.delivered / totals.generated


def forwards_per_delivered(totals: Totals) -> Optional[float]:
    if totals.delivered == 0:
        return None
    return totals.forwards / totals.delivered


def transmission_efficiency(
    ledger: EfficiencyLedger, unit_power: float = 1.0
) -> tuple[np.ndarray, float]:
    """Per-node successful own power over total power, and the network average.

    The average is taken over nodes that spent any power at all.
    """
    spent = (ledger.own_tx + ledger.forwards) * unit_power
    useful = ledger.own_delivered_tx * unit_power
    per_node = np.divide(useful, spent, out=np.zeros(len(spent)), where=spent > 0)
    active = spent > 0
    avg = float(per_node[active].mean()) if active.any() else 0.0
    return per_node, avg


def average_alpha(alphas: Iterable[float]) -> float:
    a = np.asarray(list(alphas) if not isinstance(alphas, np.ndarray) else alphas, dtype=float)
    if a.size == 0:
        raise ValueError("average_alpha needs at least one node")
    return float(a.mean())
