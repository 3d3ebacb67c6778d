"""Ring and random route sets for the forwarding game."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence, Union

import numpy as np


class InvalidParameter(ValueError):
    pass


class ScenarioKind(str, Enum):
    RING = "ring"
    RANDOM = "random"


@dataclass(frozen=True)
class Route:
    """Ordered node sequence, source first and destination last."""

    nodes: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(int(n) for n in self.nodes))

    @property
    def hop_count(self) -> int:
        return len(self.nodes) - 1

    @property
    def source(self) -> int:
        return self.nodes[0]

    @property
    def destination(self) -> int:
        return self.nodes[-1]

    @property
    def intermediates(self) -> tuple[int, ...]:
        return self.nodes[1:-1]

    def position(self, node: int) -> int:
        return self.nodes.index(node)

    def __contains__(self, node: object) -> bool:
        return node in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class Scenario:
    num_nodes: int
    routes: tuple[Route, ...]
    kind: ScenarioKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "routes", tuple(self.routes))
        object.__setattr__(self, "kind", ScenarioKind(self.kind))

    def active_nodes(self) -> list[int]:
        """Nodes that appear on at least one route, sorted."""
        return sorted({n for r in self.routes for n in r.nodes})

    def successors(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for r in self.routes:
            for a, b in zip(r.nodes, r.nodes[1:]):
                out.setdefault(a, set()).add(b)
        return out

    def mean_forwarders(self) -> float:
        if not self.routes:
            return 0.0
        return float(np.mean([r.hop_count - 1 for r in self.routes]))


def generate_ring(num_nodes: int, hops: int) -> Scenario:
    """One route per node: source ``i`` sends to ``(i + hops) mod num_nodes``."""
    if hops < 1 or num_nodes < hops + 1:
        raise InvalidParameter(
            f"ring needs hops >= 1 and num_nodes >= hops + 1 (got {num_nodes=}, {hops=})"
        )
    routes = tuple(
        Route(tuple((i + k) % num_nodes for k in range(hops + 1))) for i in range(num_nodes)
    )
    return Scenario(num_nodes, routes, ScenarioKind.RING)


ForwarderSpec = Union[Sequence[int], Mapping[int, float]]


def _forwarder_distribution(spec: ForwarderSpec) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(spec, Mapping):
        values = np.array(sorted(spec), dtype=int)
        weights = np.array([spec[v] for v in values], dtype=float)
    else:
        values = np.array(sorted(set(spec)), dtype=int)
        weights = np.ones(len(values))
    if len(values) == 0 or np.any(values < 0) or np.any(weights < 0) or weights.sum() <= 0:
        raise InvalidParameter(f"bad forwarder-count distribution: {spec!r}")
    return values, weights / weights.sum()


def generate_random(
    num_nodes: int,
    num_pairs: int,
    forwarder_counts: ForwarderSpec = (3, 4, 5, 6),
    seed: int = 0,
) -> Scenario:
    """Random routes of distinct nodes.

    The number of forwarders on each route is drawn from ``forwarder_counts``
    (a collection of counts drawn uniformly, or a ``{count: weight}`` mapping),
    then ``count + 2`` distinct nodes are sampled without replacement.
    """
    if num_nodes < 3:
        raise InvalidParameter(f"num_nodes must be >= 3 (got {num_nodes})")
    if num_pairs < 0:
        raise InvalidParameter(f"num_pairs must be >= 0 (got {num_pairs})")
    values, probs = _forwarder_distribution(forwarder_counts)
    longest = int(values[probs > 0].max()) + 2
    if longest > num_nodes:
        raise InvalidParameter(
            f"route of {longest} nodes cannot be drawn from {num_nodes} nodes"
        )
    rng = np.random.default_rng(seed)
    counts = rng.choice(values, size=num_pairs, p=probs)
    routes = tuple(
        Route(tuple(rng.choice(num_nodes, size=int(c) + 2, replace=False))) for c in counts
    )
    return Scenario(num_nodes, routes, ScenarioKind.RANDOM)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    route_index: int | None = None


def validate(scenario: Scenario) -> list[Violation]:
    violations: list[Violation] = []
    for idx, route in enumerate(scenario.routes):
        if route.hop_count < 1:
            violations.append(Violation("short-route", f"route {route.nodes} has no hop", idx))
        dupes = sorted(n for n, c in Counter(route.nodes).items() if c > 1)
        if dupes:
            violations.append(
                Violation("duplicate-node", f"nodes {dupes} repeated in {route.nodes}", idx)
            )
        unknown = sorted({n for n in route.nodes if n < 0 or n >= scenario.num_nodes})
        if unknown:
            violations.append(
                Violation(
                    "unknown-node",
                    f"nodes {unknown} outside 0..{scenario.num_nodes - 1}",
                    idx,
                )
            )
    if scenario.kind is ScenarioKind.RING and not violations:
        violations.extend(_ring_role_violations(scenario))
    return violations


def _ring_role_violations(scenario: Scenario) -> list[Violation]:
    hop_counts = {r.hop_count for r in scenario.routes}
    if len(hop_counts) != 1:
        return [Violation("ring-roles", f"unequal hop counts {sorted(hop_counts)}")]
    hops = hop_counts.pop()
    src = Counter(r.source for r in scenario.routes)
    dst = Counter(r.destination for r in scenario.routes)
    mid = Counter(n for r in scenario.routes for n in r.intermediates)
    out = []
    for node in range(scenario.num_nodes):
        roles = (src[node], dst[node], mid[node])
        if roles != (1, 1, hops - 1):
            out.append(
                Violation(
                    "ring-roles",
                    f"node {node} has (source, destination, intermediate) = {roles}, "
                    f"expected (1, 1, {hops - 1})",
                )
            )
    return out
