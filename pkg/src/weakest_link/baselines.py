"""Stylized comparison strategies.

These only encode one-line behavioural descriptions of two other learning
schemes; they are not reimplementations of those schemes.

* ``HAN_STYLE``: a node that detects a defection punishes every successor it
  has on any route, and its punishment refusals are not announced, so they
  look like defections to its own predecessor.
* ``PANDANA_STYLE``: forwarding probabilities never decrease.
"""

from __future__ import annotations

from enum import Enum
from typing import Mapping

import numpy as np

from .engine import (
    NodeState,
    PunishmentRegistry,
    StepEvents,
    _finish_step,
    _is_punished,
    _utility_change,
    apply_learning_update,
    detect_and_punish,
)


class StrategyKind(str, Enum):
    WEAKEST_LINK = "weakest-link"
    HAN_STYLE = "han-style"
    PANDANA_STYLE = "pandana-style"

    @property
    def stylized(self) -> bool:
        return self is not StrategyKind.WEAKEST_LINK

    @property
    def label(self) -> str:
        return f"{self.value} (stylized)" if self.stylized else self.value


def pandana_alpha(alpha, delta, punished, lam, epsilon):
    """Positive part of the utility change only; epsilon step while punished."""
    return np.where(
        punished,
        np.minimum(1.0, alpha + epsilon),
        np.minimum(1.0, alpha + lam * np.maximum(0.0, delta)),
    )


def pandana_style_update(state: NodeState, step: int) -> NodeState:
    punished = _is_punished(state, step)
    delta = _utility_change(state, shield=False)
    return _finish_step(
        state, pandana_alpha(state.alpha, delta, punished, state.lam, state.epsilon)
    )


def han_style_punish(
    events: StepEvents,
    registry: PunishmentRegistry,
    successors: Mapping[int, set[int]],
    punish_banking: bool = True,
) -> PunishmentRegistry:
    """Detect without notification, then widen each punishment to all successors."""
    detect_and_punish(events, registry, notify=False, punish_banking=punish_banking)
    for punisher in sorted({a for a, _ in events.new_punishments}):
        for s in sorted(successors.get(punisher, ())):
            registry.punish(punisher, s)
            events.new_punishments.add((punisher, s))
    return registry


def han_style_update(
    states: Mapping[int, NodeState],
    events: StepEvents,
    registry: PunishmentRegistry,
    successors: Mapping[int, set[int]],
    step: int,
) -> PunishmentRegistry:
    """Global punishment followed by the ordinary utility-proportional update."""
    han_style_punish(events, registry, successors)
    for punisher, punished in events.new_punishments:
        until = step + registry.period - 1
        st = states[punished]
        st.punished_until[punisher] = max(st.punished_until.get(punisher, until), until)
    for st in states.values():
        apply_learning_update(st, step)
    return registry
