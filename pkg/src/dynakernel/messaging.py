"""Neighbor-constrained message passing with one-tick delivery latency.

An envelope sent at tick t is delivered (or dropped) during phase 2 of tick
t+1, never at t and never later.  Recipients are resolved at delivery time:
a broadcast reaches the sender's neighbors as of delivery, a unicast reaches
its target only if the target still exists and currently shares a link with
the sender.  There are no delivery-failure callbacks; drops only show up in
the diagnostics counters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import UnknownNode
from .topology import Point, Topology

#: Destination value meaning "all current neighbors of the sender".
BROADCAST = None

#: Payloads are opaque immutable values; immutability is what makes the
#: pass-by-value contract hold without copying.
PAYLOAD_TYPES = (str, bool, int, float, bytes, Point)


@dataclass(frozen=True)
class Envelope:
    """An in-flight message."""

    sender: int
    destination: Optional[int]  # node id, or BROADCAST (None)
    payload: object
    sent_at: int


class Mailroom:
    """FIFO queue of pending envelopes, drained once per tick."""

    def __init__(self, topology: Topology, clock, diagnostics=None):
        self._topology = topology
        self._clock = clock
        self._pending: list[Envelope] = []
        self.diagnostics = diagnostics

    @property
    def pending(self) -> list[Envelope]:
        return list(self._pending)

    def send(self, sender: int, destination: Optional[int], payload) -> None:
        """Enqueue an envelope; nothing is delivered synchronously.

        An unknown *explicit destination* is not an error here: resolution
        happens at delivery time.
        """
        if not self._topology.has_node(sender):
            raise UnknownNode(f"sender {sender} does not exist")
        if not isinstance(payload, PAYLOAD_TYPES):
            raise TypeError(
                f"unsupported payload type {type(payload).__name__}; "
                f"expected str, bool, int, float, bytes, or Point"
            )
        if isinstance(payload, float) and not math.isfinite(payload):
            raise TypeError("non-finite float payloads are not allowed")
        self._pending.append(Envelope(sender, destination, payload, self._clock.now))

    def deliver_due(self, topology: Optional[Topology] = None) -> int:
        """Deliver every envelope sent before the current tick.  Returns the
        delivery count.  Runs in tick phase 2 only."""
        topology = topology or self._topology
        now = self._clock.now
        due_count = 0
        for envelope in self._pending:
            if envelope.sent_at >= now:
                break  # FIFO: later envelopes are at least as recent
            due_count += 1
        due, self._pending = self._pending[:due_count], self._pending[due_count:]

        delivered = 0
        for envelope in due:
            recipients = self._resolve(topology, envelope)
            if recipients is None:
                self._count("messages_dropped")
                continue
            for node_id in recipients:
                node = topology.node(node_id)
                for listener in list(node.message_listeners):
                    self._run(listener, envelope)
                delivered += 1
        if delivered:
            self._count("messages_delivered", delivered)
        return delivered

    def _resolve(self, topology: Topology, envelope: Envelope) -> Optional[list[int]]:
        """Recipient ids in delivery order, or None for a dropped envelope.

        A broadcast from an isolated node resolves to an empty list; that
        is a successful no-op, not a drop.
        """
        if not topology.has_node(envelope.sender):
            return None
        neighbors = topology.get_neighbors(envelope.sender)
        if envelope.destination is BROADCAST:
            return sorted(neighbors)
        if topology.has_node(envelope.destination) and envelope.destination in neighbors:
            return [envelope.destination]
        return None

    def _run(self, listener, envelope: Envelope) -> None:
        try:
            listener(envelope)
        except Exception as exc:
            if self.diagnostics is None:
                raise
            self.diagnostics.record_error("mailroom:on_message", exc)

    def _count(self, name: str, n: int = 1) -> None:
        if self.diagnostics is not None:
            self.diagnostics.count(name, n)
