"""Wire protocol: JSON encoding of events, command validation, and replay.

Messages are JSON objects, one per line over a persistent socket.  Every
server event carries the tick time at which it occurred, and the deltas
between two snapshots replay to exactly the later snapshot.
"""

from __future__ import annotations

import json
import math

from .topology import Point, Topology

EVENT_NAMES = {
    "snapshot", "nodeAdded", "nodeRemoved", "nodeMoved",
    "linkAdded", "linkRemoved", "propertyChanged", "paused", "error",
}

COMMAND_NAMES = {
    "addNode", "moveNode", "removeNode",
    "pause", "resume", "setRate", "snapshot",
}


class CommandError(Exception):
    """A client command that cannot be applied; maps to an error event."""

    def __init__(self, code: str, detail: str):
        self.code = code
        self.detail = detail
        super().__init__(f"{code}: {detail}")


# -- value encoding ------------------------------------------------------

def encode_value(value):
    """PropertyValue -> JSON-compatible value.  Points become {x, y}."""
    if isinstance(value, Point):
        return {"x": value.x, "y": value.y}
    return value


def decode_value(value):
    """JSON value -> PropertyValue.  {x, y} objects become Points."""
    if isinstance(value, dict):
        if set(value) == {"x", "y"} and all(
                isinstance(value[k], (int, float)) for k in ("x", "y")):
            return Point(float(value["x"]), float(value["y"]))
        raise ValueError(f"not a property value: {value!r}")
    return value


def encode_properties(properties: dict) -> dict:
    return {key: encode_value(value) for key, value in properties.items()}


def encode_event_fields(name: str, fields: dict) -> dict:
    if name == "propertyChanged":
        fields = dict(fields, value=encode_value(fields["value"]))
    elif name == "nodeAdded":
        fields = dict(fields, properties=encode_properties(fields["properties"]))
    return fields


def make_event(name: str, time: int, fields: dict) -> dict:
    event = {"ev": name, "time": time}
    event.update(fields)
    return event


def event_line(event: dict) -> str:
    """Canonical single-line serialization (stable key order, no spaces)."""
    return json.dumps(event, sort_keys=True, separators=(",", ":"))


# -- snapshots and replay ----------------------------------------------------

def build_snapshot(topology: Topology, time: int) -> dict:
    nodes = [
        {"id": node.id, "x": node.position.x, "y": node.position.y,
         "properties": encode_properties(node.properties)}
        for node in topology.nodes
    ]
    links = [
        {"a": link.a, "b": link.b, "mode": link.mode}
        for link in sorted(topology.links, key=lambda l: (l.a, l.b, l.mode))
    ]
    return {"ev": "snapshot", "time": time, "nodes": nodes, "links": links}


def state_from_snapshot(snapshot: dict) -> dict:
    """Mutable replay state: {time, nodes: {id: {x, y, properties}}, links}."""
    return {
        "time": snapshot["time"],
        "nodes": {
            n["id"]: {"x": n["x"], "y": n["y"], "properties": dict(n["properties"])}
            for n in snapshot["nodes"]
        },
        "links": {(l["a"], l["b"], l["mode"]) for l in snapshot["links"]},
    }


def apply_event(state: dict, event: dict) -> dict:
    """Advance a replay state by one wire event.  Raises KeyError on a delta
    that references an unknown node (clients resync via snapshot instead)."""
    name = event["ev"]
    if name == "snapshot":
        return state_from_snapshot(event)
    state["time"] = event["time"]
    if name == "nodeAdded":
        state["nodes"][event["id"]] = {
            "x": event["x"], "y": event["y"],
            "properties": dict(event["properties"]),
        }
    elif name == "nodeRemoved":
        del state["nodes"][event["id"]]
        state["links"] = {k for k in state["links"]
                          if event["id"] not in (k[0], k[1])}
    elif name == "nodeMoved":
        node = state["nodes"][event["id"]]
        node["x"], node["y"] = event["x"], event["y"]
    elif name == "linkAdded":
        state["links"].add((event["a"], event["b"], event["mode"]))
    elif name == "linkRemoved":
        state["links"].discard((event["a"], event["b"], event["mode"]))
    elif name == "propertyChanged":
        state["nodes"][event["id"]]["properties"][event["key"]] = event["value"]
    elif name in ("paused", "error"):
        pass
    else:
        raise ValueError(f"unknown event {name!r}")
    return state


def states_equal(a: dict, b: dict) -> bool:
    return (a["nodes"] == b["nodes"] and a["links"] == b["links"]
            and a["time"] == b["time"])


# -- command validation ----------------------------------------------------------

def _require_number(obj: dict, key: str, cmd: str) -> float:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CommandError("badRequest", f"{cmd} needs numeric {key!r}")
    if not math.isfinite(value):
        raise CommandError("invalidGeometry", f"{cmd}: non-finite {key!r}")
    return float(value)


def _require_id(obj: dict, cmd: str) -> int:
    value = obj.get("id")
    if isinstance(value, bool) or not isinstance(value, int):
        raise CommandError("badRequest", f"{cmd} needs integer 'id'")
    return value


def validate_command(obj) -> dict:
    """Normalize a client command object; raises CommandError when malformed."""
    if not isinstance(obj, dict):
        raise CommandError("badRequest", "command must be a JSON object")
    cmd = obj.get("cmd")
    if cmd not in COMMAND_NAMES:
        raise CommandError("badRequest", f"unknown command {cmd!r}")
    if cmd == "addNode":
        out = {"cmd": cmd,
               "x": _require_number(obj, "x", cmd),
               "y": _require_number(obj, "y", cmd)}
        model = obj.get("model")
        if model is not None and not isinstance(model, str):
            raise CommandError("badRequest", "addNode 'model' must be a string")
        if model is not None:
            out["model"] = model
        return out
    if cmd == "moveNode":
        return {"cmd": cmd, "id": _require_id(obj, cmd),
                "x": _require_number(obj, "x", cmd),
                "y": _require_number(obj, "y", cmd)}
    if cmd == "removeNode":
        return {"cmd": cmd, "id": _require_id(obj, cmd)}
    if cmd == "setRate":
        rate = _require_number(obj, "ticksPerSecond", cmd)
        if rate < 0:
            raise CommandError("badRequest", "ticksPerSecond must be >= 0")
        return {"cmd": cmd, "ticksPerSecond": rate}
    return {"cmd": cmd}  # pause / resume / snapshot carry no arguments


def parse_command_line(line: str) -> dict:
    """Parse one wire line into a normalized command."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CommandError("badRequest", f"malformed JSON: {exc.msg}") from None
    return validate_command(obj)
