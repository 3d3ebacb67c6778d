"""Run configuration, its text format, and the experiment presets.

Config files are flat ``key = value`` lines with dotted section keys::

    # ring scenario, 25 nodes, 6-hop routes
    scenario.kind = ring
    scenario.num_nodes = 25
    scenario.hops = 6
    game.F = 3
    learn.epsilon = 0.05
    run.strategy = weakest-link

Blank lines and ``#`` comments are ignored. Unknown keys are errors. Every
key is optional; see ``KEYS`` for defaults.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable

from .baselines import StrategyKind
from .game import GainSchedule, GameParams
from .simulation import LearningConfig
from .topology import Scenario, ScenarioKind, generate_random, generate_ring

DEFAULT_STEPS = 2000
PANDANA_EPSILON = 0.005


class ConfigError(ValueError):
    pass


class ConfigParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        where = ", ".join(
            part for part in (f"line {line}" if line else "", f"key {key!r}" if key else "") if part
        )
        super().__init__(f"{where}: {message}" if where else message)
        self.line, self.key = line, key


class ConfigValidationError(ConfigError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid config:\n  " + "\n  ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind = ScenarioKind.RING
    num_nodes: int = 25
    hops: int = 6
    num_pairs: int = 1000
    forwarders: tuple[int, ...] = (3, 4, 5, 6)
    seed: int = 42

    def build(self) -> Scenario:
        if self.kind is ScenarioKind.RING:
            return generate_ring(self.num_nodes, self.hops)
        return generate_random(self.num_nodes, self.num_pairs, self.forwarders, self.seed)


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    forwarding_cost: float = 3.0
    gain_increment: float = 1.0
    learning: LearningConfig = field(default_factory=LearningConfig)
    strategy: StrategyKind = StrategyKind.WEAKEST_LINK
    steps: int = DEFAULT_STEPS
    seed: int = 0
    output: str = "run"

    @property
    def game(self) -> GameParams:
        return GameParams(self.forwarding_cost, GainSchedule(self.gain_increment))

    def to_text(self) -> str:
        return emit_config(self)


def _bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    return repr(value) if isinstance(value, float) else str(value)


# key -> (section attribute, field name, parser)
KEYS: dict[str, tuple[str, str, Callable[[str], Any]]] = {
    "scenario.kind": ("scenario", "kind", ScenarioKind),
    "scenario.num_nodes": ("scenario", "num_nodes", int),
    "scenario.hops": ("scenario", "hops", int),
    "scenario.num_pairs": ("scenario", "num_pairs", int),
    "scenario.forwarders": ("scenario", "forwarders", _ints),
    "scenario.seed": ("scenario", "seed", int),
    "game.F": ("", "forwarding_cost", float),
    "game.g": ("", "gain_increment", float),
    "learn.lambda": ("learning", "lam", float),
    "learn.epsilon": ("learning", "epsilon", float),
    "learn.T": ("learning", "period", int),
    "learn.init_alpha": ("learning", "init_alpha", float),
    "learn.punish_banking": ("learning", "punish_banking", _bool),
    "learn.shield_notified": ("learning", "shield_notified", _bool),
    "learn.frozen": ("learning", "frozen", _bool),
    "run.strategy": ("", "strategy", StrategyKind),
    "run.steps": ("", "steps", int),
    "run.seed": ("", "seed", int),
    "run.output": ("", "output", str),
}


def emit_config(config: RunConfig) -> str:
    lines = []
    for key, (section, name, _) in KEYS.items():
        holder = getattr(config, section) if section else config
        lines.append(f"{key} = {_fmt(getattr(holder, name))}")
    return "\n".join(lines) + "\n"


def violations(values: dict[str, Any]) -> list[str]:
    out = []

    def check(cond: bool, msg: str) -> None:
        if not cond:
            out.append(msg)

    g = values.get
    check(g("run.steps", DEFAULT_STEPS) >= 1, "run.steps must be >= 1")
    check(g("game.F", 3.0) >= 0, "game.F must be >= 0")
    check(g("game.g", 1.0) > 0, "game.g must be > 0")
    check(g("learn.T", 3) >= 1, "learn.T must be >= 1")
    check(g("learn.lambda", 0.01) >= 0, "learn.lambda must be >= 0")
    check(0 < g("learn.epsilon", 0.05) <= 1, "learn.epsilon must be in (0, 1]")
    check(0 <= g("learn.init_alpha", 0.0) <= 1, "learn.init_alpha must be in [0, 1]")
    kind = g("scenario.kind", ScenarioKind.RING)
    nodes = g("scenario.num_nodes", 100 if kind is ScenarioKind.RANDOM else 25)
    if kind is ScenarioKind.RING:
        hops = g("scenario.hops", 6)
        check(hops >= 1, "scenario.hops must be >= 1")
        check(nodes >= hops + 1, "scenario.num_nodes must be >= scenario.hops + 1")
    else:
        fw = g("scenario.forwarders", (3, 4, 5, 6))
        check(nodes >= 3, "scenario.num_nodes must be >= 3")
        check(g("scenario.num_pairs", 1000) >= 0, "scenario.num_pairs must be >= 0")
        check(len(fw) > 0 and min(fw) >= 0, "scenario.forwarders must be non-negative counts")
        check(not fw or max(fw) + 2 <= nodes, "longest route exceeds scenario.num_nodes")
    return out


def from_values(values: dict[str, Any], base: RunConfig | None = None) -> RunConfig:
    problems = violations(values)
    if problems:
        raise ConfigValidationError(problems)
    cfg = base or RunConfig()
    sections: dict[str, dict[str, Any]] = {"": {}, "scenario": {}, "learning": {}}
    for key, value in values.items():
        section, name, _ = KEYS[key]
        sections[section][name] = value
    return replace(
        cfg,
        scenario=replace(cfg.scenario, **sections["scenario"]),
        learning=replace(cfg.learning, **sections["learning"]),
        **sections[""],
    )


def parse_text(text: str) -> RunConfig:
    values: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KEYS:
            raise ConfigParseError("unknown key", line=lineno, key=key)
        if key in values:
            raise ConfigParseError("duplicate key", line=lineno, key=key)
        try:
            values[key] = KEYS[key][2](value)
        except ValueError as exc:
            raise ConfigParseError(str(exc), line=lineno, key=key) from None
    if "scenario.num_nodes" not in values and values.get("scenario.kind") is ScenarioKind.RANDOM:
        values["scenario.num_nodes"] = 100
    return from_values(values)


def parse_config(path: str | Path) -> RunConfig:
    return parse_text(Path(path).read_text())


# -- presets ----------------------------------------------------------------

RING = ScenarioSpec(ScenarioKind.RING, num_nodes=25, hops=6)
RANDOM = ScenarioSpec(ScenarioKind.RANDOM, num_nodes=100, num_pairs=1000, seed=42)


def _runs(
    name: str, scenario: ScenarioSpec, init_alpha: float, with_han: bool
) -> list[RunConfig]:
    base = RunConfig(scenario=scenario, learning=LearningConfig(init_alpha=init_alpha))
    runs = []
    for eps in (0.01, 0.05):
        runs.append(
            replace(
                base,
                learning=replace(base.learning, epsilon=eps),
                output=f"{name}/weakest-link-eps{eps}",
            )
        )
    runs.append(
        replace(
            base,
            strategy=StrategyKind.PANDANA_STYLE,
            learning=replace(base.learning, epsilon=PANDANA_EPSILON),
            output=f"{name}/pandana-style",
        )
    )
    if with_han:
        runs.append(replace(base, strategy=StrategyKind.HAN_STYLE, output=f"{name}/han-style"))
    return runs


PRESETS: dict[str, Callable[[], list[RunConfig]]] = {
    "ring-fig2": lambda: _runs("ring-fig2", RING, 0.0, True),
    "random-fig3": lambda: _runs("random-fig3", RANDOM, 0.0, True),
    "ring-table1": lambda: _runs("ring-table1", RING, 0.0, True),
    "random-table2": lambda: _runs("random-table2", RANDOM, 0.0, True),
    "ring-table3": lambda: _runs("ring-table3", RING, 0.5, False),
    "random-table4": lambda: _runs("random-table4", RANDOM, 0.5, False),
}


def preset(name: str) -> list[RunConfig]:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
