"""Scenario files: JSON descriptions of a runnable simulation.

A scenario declares the seed, pacing, topology dimensions, model bindings
(behavior name, communication range, default properties), any global
topology listeners, the initial node placements, and an optional tick limit.

Example:

    {
      "seed": 7,
      "tick_rate": 10,
      "models": {"default": {"behavior": "red-green-v1"}},
      "nodes": [{"x": 100, "y": 100}, {"x": 160, "y": 100}],
      "run_limit": 200
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .behaviors import BEHAVIORS, TOPOLOGY_LISTENERS
from .errors import ConfigError
from .protocol import decode_value
from .topology import DEFAULT_COMM_RANGE, DEFAULT_HEIGHT, DEFAULT_WIDTH


@dataclass
class ModelBinding:
    behavior: Optional[str] = None
    behavior_params: dict = field(default_factory=dict)
    comm_range: float = DEFAULT_COMM_RANGE
    wireless: bool = True
    properties: dict = field(default_factory=dict)


@dataclass
class NodeSpec:
    x: float
    y: float
    model: str = "default"


@dataclass
class ScenarioConfig:
    seed: int = 0
    tick_rate: float = 10.0
    width: float = DEFAULT_WIDTH
    height: float = DEFAULT_HEIGHT
    default_model: str = "default"
    models: dict[str, ModelBinding] = field(default_factory=dict)
    topology_listeners: list[str] = field(default_factory=list)
    nodes: list[NodeSpec] = field(default_factory=list)
    run_limit: Optional[int] = None


def _expect(condition: bool, message: str, location: str) -> None:
    if not condition:
        raise ConfigError(message, location)


def _number(value, location: str) -> float:
    _expect(isinstance(value, (int, float)) and not isinstance(value, bool),
            f"expected a number, got {value!r}", location)
    _expect(math.isfinite(value), f"non-finite number {value!r}", location)
    return float(value)


def _parse_model(name: str, raw, location: str) -> ModelBinding:
    _expect(isinstance(raw, dict), "model binding must be an object", location)
    binding = ModelBinding()
    for key in raw:
        _expect(key in ("behavior", "behavior_params", "comm_range", "wireless", "properties"),
                f"unknown model field {key!r}", f"{location}.{key}")
    if raw.get("behavior") is not None:
        behavior = raw["behavior"]
        _expect(isinstance(behavior, str), "behavior must be a string",
                f"{location}.behavior")
        _expect(behavior in BEHAVIORS,
                f"unknown behavior {behavior!r}; known: {sorted(BEHAVIORS)}",
                f"{location}.behavior")
        binding.behavior = behavior
    if "behavior_params" in raw:
        params = raw["behavior_params"]
        _expect(isinstance(params, dict), "behavior_params must be an object",
                f"{location}.behavior_params")
        binding.behavior_params = dict(params)
    if "comm_range" in raw:
        binding.comm_range = _number(raw["comm_range"], f"{location}.comm_range")
        _expect(binding.comm_range >= 0, "comm_range must be >= 0",
                f"{location}.comm_range")
    if "wireless" in raw:
        _expect(isinstance(raw["wireless"], bool), "wireless must be a boolean",
                f"{location}.wireless")
        binding.wireless = raw["wireless"]
    if "properties" in raw:
        props = raw["properties"]
        _expect(isinstance(props, dict), "properties must be an object",
                f"{location}.properties")
        for key, value in props.items():
            _expect(isinstance(key, str) and key != "", "property keys must be nonempty",
                    f"{location}.properties")
            try:
                binding.properties[key] = decode_value(value)
            except ValueError:
                raise ConfigError(f"bad property value {value!r}",
                                  f"{location}.properties.{key}") from None
    return binding


def parse_scenario(text: str, source: str = "<inline>") -> ScenarioConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}",
                          f"{source}:{exc.lineno}:{exc.colno}") from None
    _expect(isinstance(raw, dict), "scenario must be a JSON object", source)

    known = {"seed", "tick_rate", "width", "height", "default_model", "models",
             "topology_listeners", "nodes", "run_limit"}
    for key in raw:
        _expect(key in known, f"unknown scenario field {key!r}", key)

    config = ScenarioConfig()
    if "seed" in raw:
        _expect(isinstance(raw["seed"], int) and not isinstance(raw["seed"], bool),
                "seed must be an integer", "seed")
        config.seed = raw["seed"]
    if "tick_rate" in raw:
        config.tick_rate = _number(raw["tick_rate"], "tick_rate")
        _expect(config.tick_rate >= 0, "tick_rate must be >= 0", "tick_rate")
    if "width" in raw:
        config.width = _number(raw["width"], "width")
        _expect(config.width > 0, "width must be > 0", "width")
    if "height" in raw:
        config.height = _number(raw["height"], "height")
        _expect(config.height > 0, "height must be > 0", "height")
    if "run_limit" in raw and raw["run_limit"] is not None:
        _expect(isinstance(raw["run_limit"], int) and not isinstance(raw["run_limit"], bool)
                and raw["run_limit"] >= 0, "run_limit must be an integer >= 0", "run_limit")
        config.run_limit = raw["run_limit"]

    models = raw.get("models", {})
    _expect(isinstance(models, dict), "models must be an object", "models")
    for name, binding in models.items():
        _expect(isinstance(name, str) and name != "", "model names must be nonempty",
                "models")
        config.models[name] = _parse_model(name, binding, f"models.{name}")

    if "default_model" in raw:
        _expect(isinstance(raw["default_model"], str), "default_model must be a string",
                "default_model")
        config.default_model = raw["default_model"]
    _expect(config.default_model == "default" or config.default_model in config.models,
            f"default_model {config.default_model!r} is not a declared model",
            "default_model")

    listeners = raw.get("topology_listeners", [])
    _expect(isinstance(listeners, list), "topology_listeners must be a list",
            "topology_listeners")
    for i, name in enumerate(listeners):
        _expect(isinstance(name, str) and name in TOPOLOGY_LISTENERS,
                f"unknown topology listener {name!r}; known: {sorted(TOPOLOGY_LISTENERS)}",
                f"topology_listeners[{i}]")
        config.topology_listeners.append(name)

    nodes = raw.get("nodes", [])
    _expect(isinstance(nodes, list), "nodes must be a list", "nodes")
    for i, spec in enumerate(nodes):
        location = f"nodes[{i}]"
        _expect(isinstance(spec, dict), "node spec must be an object", location)
        for key in spec:
            _expect(key in ("x", "y", "model"), f"unknown node field {key!r}",
                    f"{location}.{key}")
        x = _number(spec.get("x", 0.0), f"{location}.x")
        y = _number(spec.get("y", 0.0), f"{location}.y")
        model = spec.get("model", "default")
        _expect(isinstance(model, str), "model must be a string", f"{location}.model")
        _expect(model == "default" or model in config.models,
                f"node references undeclared model {model!r}", f"{location}.model")
        config.nodes.append(NodeSpec(x, y, model))

    return config


def load_scenario_file(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc}", str(path)) from None
    return parse_scenario(text, source=str(path))
