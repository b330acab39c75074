"""The capability-scoped handle behaviors use to reach the kernel.

A behavior never touches the topology, clock, or mailroom directly; its
services handle routes everything through the simulation loop and records
registrations so they can be torn down when the node is removed.  Tests
restrict the capability set to prove a behavior stays inside its declared
footprint.
"""

from __future__ import annotations

from typing import Optional

from .errors import CapabilityError

ALL_CAPABILITIES = frozenset({"topology", "clock", "messaging", "rng"})


class NodeServices:
    def __init__(self, node, topology, clock=None, mailroom=None, rng=None,
                 capabilities: frozenset = ALL_CAPABILITIES):
        self._node = node
        self._topology = topology
        self._clock = clock
        self._mailroom = mailroom
        self._rng = rng
        self.capabilities = frozenset(capabilities)
        self._clock_callbacks: list = []
        self._message_callbacks: list = []
        self._disposed = False

    @property
    def node(self):
        return self._node

    def _need(self, capability: str, backend, what: str):
        if capability not in self.capabilities:
            raise CapabilityError(f"{what} requires the {capability!r} capability")
        if backend is None:
            raise CapabilityError(f"{what} is unavailable: no {capability} attached")
        return backend

    # -- clock ---------------------------------------------------------

    def add_clock_listener(self, callback, period: int) -> None:
        clock = self._need("clock", self._clock, "add_clock_listener")
        clock.add_listener(callback, period)
        self._clock_callbacks.append(callback)

    def remove_clock_listener(self, callback) -> None:
        clock = self._need("clock", self._clock, "remove_clock_listener")
        clock.remove_listener(callback)
        self._clock_callbacks = [c for c in self._clock_callbacks if c != callback]

    def current_time(self) -> int:
        return self._need("clock", self._clock, "current_time").now

    # -- topology --------------------------------------------------------

    def neighbors(self) -> set[int]:
        self._need("topology", self._topology, "neighbors")
        return self._topology.get_neighbors(self._node.id)

    def set_property(self, key: str, value) -> None:
        self._need("topology", self._topology, "set_property")
        self._topology.set_property(self._node.id, key, value)

    def get_property(self, key: str, default=None):
        self._need("topology", self._topology, "get_property")
        return self._topology.get_property(self._node.id, key, default)

    def subscribe_node_events(self, listener) -> None:
        """Register a listener for this node's own events (links, moves,
        property changes)."""
        self._need("topology", self._topology, "subscribe_node_events")
        self._node.add_node_listener(listener)

    # -- messaging -----------------------------------------------------------

    def send(self, destination, payload) -> None:
        mailroom = self._need("messaging", self._mailroom, "send")
        mailroom.send(self._node.id, destination, payload)

    def add_message_listener(self, callback) -> None:
        self._need("messaging", self._mailroom, "add_message_listener")
        self._node.add_message_listener(callback)
        self._message_callbacks.append(callback)

    # -- randomness --------------------------------------------------------------

    @property
    def rng(self):
        return self._need("rng", self._rng, "rng")

    # -- lifecycle -----------------------------------------------------------------

    def dispose(self) -> None:
        """Tear down every registration this handle made.  Called when the
        owning node leaves the topology."""
        if self._disposed:
            return
        self._disposed = True
        if self._clock is not None:
            for callback in self._clock_callbacks:
                if self._clock.has_listener(callback):
                    self._clock.remove_listener(callback)
        self._clock_callbacks.clear()
        self._message_callbacks.clear()
