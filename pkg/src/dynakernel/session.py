"""A running simulation: scenario wiring, tick driving, command handling.

The session owns the topology, clock, mailroom, and RNG, funnels every
external mutation through an ordered command queue drained in tick phase 1,
and streams state deltas (and the trace file) from tick phase 4.  All kernel
mutation happens on one logical execution context; network I/O marshals
into the command queue.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from functools import partial
from pathlib import Path
from typing import Callable, Optional

from . import protocol
from .behaviors import BEHAVIORS, TOPOLOGY_LISTENERS
from .clock import ClockSchedule
from .errors import (
    ConfigError,
    InvalidArgument,
    InvalidGeometry,
    KernelError,
    UnknownModel,
    UnknownNode,
)
from .messaging import Mailroom
from .mobility import Rng
from .protocol import CommandError
from .scenario import ScenarioConfig, load_scenario_file
from .services import NodeServices
from .topology import NodeModel, Point, Topology


class Diagnostics:
    """Counters and isolated-failure records for one session."""

    def __init__(self):
        self.counters: Counter = Counter()
        self.errors: list[dict] = []

    def count(self, name: str, n: int = 1) -> None:
        self.counters[name] += n

    def record_error(self, context: str, exc: BaseException) -> None:
        self.errors.append({"context": context, "error": repr(exc)})
        self.counters["callback_errors"] += 1


class CommandScript:
    """Recorded commands: one JSON object per line, each with an arrival tick.

    Replaying a script through a session reproduces the exact event stream
    a live client would have caused.
    """

    def __init__(self, entries: list[tuple[int, dict]]):
        self.entries = entries
        self._next = 0

    @classmethod
    def from_text(cls, text: str, source: str = "<commands>") -> "CommandScript":
        entries = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON: {exc.msg}", f"{source}:{lineno}") from None
            if not isinstance(obj, dict) or not isinstance(obj.get("tick"), int):
                raise ConfigError("command entries need an integer 'tick'",
                                  f"{source}:{lineno}")
            tick = obj.pop("tick")
            entries.append((tick, obj))
        return cls(entries)

    @classmethod
    def from_path(cls, path) -> "CommandScript":
        path = Path(path)
        return cls.from_text(path.read_text(encoding="utf-8"), source=str(path))

    def due(self, tick: int) -> list[dict]:
        out = []
        while self._next < len(self.entries) and self.entries[self._next][0] <= tick:
            out.append(self.entries[self._next][1])
            self._next += 1
        return out


class Session:
    """Hosts one simulation built from a scenario config."""

    def __init__(self, config: ScenarioConfig, trace_path=None):
        self.config = config
        self.diagnostics = Diagnostics()
        self.rng = Rng(config.seed)
        self.clock = ClockSchedule(error_sink=self.diagnostics.record_error)
        self.topology = Topology(config.width, config.height)
        self.mailroom = Mailroom(self.topology, self.clock, diagnostics=self.diagnostics)
        self.topology.delta_sink = self._on_kernel_event
        self.topology.error_sink = self.diagnostics.record_error
        self.topology.services_factory = self._make_services

        self.paused = True
        self.tick_rate = config.tick_rate
        self.run_limit = config.run_limit

        self._pending: list[tuple[dict, Optional[Callable[[dict], None]]]] = []
        self._clients: list[Callable[[dict], None]] = []
        self._commands: deque = deque()
        self._trace = None
        if trace_path is not None:
            self._trace = open(trace_path, "w", encoding="utf-8")

        self._build()

    # -- construction ------------------------------------------------------

    def _build(self) -> None:
        for name, binding in self.config.models.items():
            factory = None
            if binding.behavior is not None:
                factory = partial(BEHAVIORS[binding.behavior], **binding.behavior_params)
                try:
                    factory()  # fail fast on bad params
                except TypeError as exc:
                    raise ConfigError(f"bad behavior_params for {binding.behavior!r}: {exc}",
                                      f"models.{name}.behavior_params") from None
            self.topology.set_model(name, NodeModel(
                name=name,
                behavior_factory=factory,
                comm_range=binding.comm_range,
                wireless=binding.wireless,
                properties=dict(binding.properties),
            ))
        for listener_name in self.config.topology_listeners:
            self.topology.add_topology_listener(TOPOLOGY_LISTENERS[listener_name]())
        for spec in self.config.nodes:
            self.topology.add_node(Point(spec.x, spec.y), spec.model)
        self._flush()

    def _make_services(self, node) -> NodeServices:
        return NodeServices(node, self.topology, clock=self.clock,
                            mailroom=self.mailroom, rng=self.rng)

    # -- event stream ---------------------------------------------------------

    def _on_kernel_event(self, name: str, fields: dict) -> None:
        wire = protocol.encode_event_fields(name, fields)
        self._pending.append((protocol.make_event(name, self.clock.now, wire), None))

    def _flush(self) -> None:
        pending, self._pending = self._pending, []
        for event, target in pending:
            if target is not None:
                self._send(target, event)
                continue
            if self._trace is not None:
                self._trace.write(protocol.event_line(event) + "\n")
            for client in list(self._clients):
                self._send(client, event)

    def _send(self, sink: Callable[[dict], None], event: dict) -> None:
        try:
            sink(event)
        except Exception as exc:
            self.diagnostics.record_error("client:send", exc)
            if sink in self._clients:
                self._clients.remove(sink)

    def attach_client(self, sink: Callable[[dict], None]) -> None:
        self._clients.append(sink)

    def detach_client(self, sink: Callable[[dict], None]) -> None:
        if sink in self._clients:
            self._clients.remove(sink)

    def snapshot(self) -> dict:
        return protocol.build_snapshot(self.topology, self.clock.now)

    # -- commands ---------------------------------------------------------------

    def enqueue_command(self, command: dict,
                        reply: Optional[Callable[[dict], None]] = None) -> None:
        """Queue a client command; it applies in phase 1 of the next tick
        (or on the next pump when paused)."""
        self._commands.append((command, reply))

    def pump_commands(self) -> None:
        """Apply queued commands outside the tick loop.  Keeps a paused
        session responsive to viewers; time does not advance."""
        self._drain_commands()
        self._flush()

    def _drain_commands(self) -> None:
        while self._commands:
            command, reply = self._commands.popleft()
            self._apply_command(command, reply)

    def _apply_command(self, command: dict, reply) -> None:
        try:
            cmd = protocol.validate_command(command)
            self._dispatch_command(cmd, reply)
        except CommandError as exc:
            self.diagnostics.count("commands_rejected")
            self._reply_error(reply, exc.code, exc.detail)
            return
        self.diagnostics.count("commands_applied")

    def _dispatch_command(self, cmd: dict, reply) -> None:
        name = cmd["cmd"]
        try:
            if name == "addNode":
                model = cmd.get("model", self.config.default_model)
                self.topology.add_node(Point(cmd["x"], cmd["y"]), model)
            elif name == "moveNode":
                self.topology.move_node(cmd["id"], Point(cmd["x"], cmd["y"]))
            elif name == "removeNode":
                self.topology.remove_node(cmd["id"])
            elif name == "pause":
                self.pause()
            elif name == "resume":
                self.resume()
            elif name == "setRate":
                self.tick_rate = cmd["ticksPerSecond"]
            elif name == "snapshot":
                if reply is not None:
                    self._pending.append((self.snapshot(), reply))
        except UnknownNode as exc:
            raise CommandError("unknownNode", str(exc)) from None
        except UnknownModel as exc:
            raise CommandError("unknownModel", str(exc)) from None
        except InvalidGeometry as exc:
            raise CommandError("invalidGeometry", str(exc)) from None
        except KernelError as exc:
            raise CommandError("badRequest", str(exc)) from None

    def _reply_error(self, reply, code: str, detail: str) -> None:
        event = protocol.make_event("error", self.clock.now,
                                    {"code": code, "detail": detail})
        if reply is not None:
            self._pending.append((event, reply))
        else:
            self.diagnostics.record_error("command", CommandError(code, detail))

    # -- tick driving ----------------------------------------------------------------

    def tick_once(self) -> None:
        """Advance exactly one tick through the five fixed phases."""
        self.clock.tick(
            topology=self.topology,
            mailroom=self.mailroom,
            drain_commands=self._drain_commands,
            flush_deltas=self._flush,
        )

    def step(self, k: int) -> None:
        """Advance exactly k ticks synchronously."""
        if not isinstance(k, int) or k < 0:
            raise InvalidArgument(f"step needs an integer k >= 0, got {k!r}")
        for _ in range(k):
            self.tick_once()

    def pause(self) -> None:
        """Stop the run loop.  Idempotent; emits a 'paused' event on the
        running -> paused transition."""
        if self.paused:
            return
        self.paused = True
        self._pending.append((protocol.make_event("paused", self.clock.now, {}), None))
        self._flush()

    def resume(self) -> None:
        self.paused = False

    def run_headless(self, ticks: Optional[int] = None,
                     commands: Optional[CommandScript] = None) -> None:
        """Run synchronously until the tick limit, feeding any recorded
        commands at their arrival ticks."""
        limit = self.run_limit if ticks is None else ticks
        if limit is None:
            raise InvalidArgument("headless run needs a tick limit "
                                  "(run_limit in the scenario or an explicit count)")
        self.resume()
        while not self.paused:
            if self.clock.now >= limit:
                self.pause()
                break
            if commands is not None:
                for command in commands.due(self.clock.now):
                    self.enqueue_command(command)
            self.tick_once()

    def check_run_limit(self) -> None:
        """Auto-pause once the configured run limit is reached."""
        if self.run_limit is not None and not self.paused \
                and self.clock.now >= self.run_limit:
            self.pause()

    def close(self) -> None:
        self._flush()
        if self._trace is not None:
            self._trace.close()
            self._trace = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def load_scenario(path, trace_path=None) -> Session:
    """Build a paused session from a scenario file."""
    return Session(load_scenario_file(path), trace_path=trace_path)
