"""Reference node behaviors: the Red-Green family.

Every variant enforces the same predicate (a node is "green" when it has at
least one neighbor and "red" otherwise), but each reacts to a different event
source: the clock (v1), connectivity events (v2), HELLO beacons (v3), a
global topology listener (centralized), and the clock again but with random
waypoint movement first (v4).
"""

from __future__ import annotations

from .messaging import BROADCAST
from .mobility import RandomWaypoint


class Behavior:
    """Algorithm attached to a node; every hook is optional.

    Hooks run exclusively on the simulation loop and mutate state only
    through the services handle received in on_attach.
    """

    def on_attach(self, node, services) -> None:
        pass

    def on_clock(self) -> None:
        pass

    def on_message(self, envelope) -> None:
        pass

    def on_link_added(self, link) -> None:
        pass

    def on_link_removed(self, link) -> None:
        pass

    def on_node_moved(self) -> None:
        pass

    def on_property_changed(self, key: str) -> None:
        pass


class RedGreenV1(Behavior):
    """Time-based: poll the neighborhood every `period` ticks."""

    def __init__(self, period: int = 10):
        self._period = period
        self._services = None

    def on_attach(self, node, services) -> None:
        self._services = services
        services.add_clock_listener(self.on_clock, self._period)

    def on_clock(self) -> None:
        if len(self._services.neighbors()) > 0:
            self._services.set_property("color", "green")
        else:
            self._services.set_property("color", "red")


class RedGreenV2(Behavior):
    """Connectivity-based: recolor only when an adjacent link comes or goes."""

    def __init__(self):
        self._services = None

    def on_attach(self, node, services) -> None:
        self._services = services
        services.set_property("color", "red")
        services.subscribe_node_events(self)

    def on_link_added(self, link) -> None:
        self._services.set_property("color", "green")

    def on_link_removed(self, link) -> None:
        if len(self._services.neighbors()) == 0:
            self._services.set_property("color", "red")


class RedGreenV3(Behavior):
    """Beacon-based: broadcast HELLO each period; go red when the last
    reception is older than one period."""

    def __init__(self, period: int = 30):
        self._period = period
        self._last_reception = -period
        self._services = None

    def on_attach(self, node, services) -> None:
        self._services = services
        services.add_clock_listener(self.on_clock, self._period)
        services.add_message_listener(self.on_message)

    def on_clock(self) -> None:
        self._services.send(BROADCAST, "HELLO")
        if self._last_reception < self._services.current_time() - self._period:
            self._services.set_property("color", "red")

    def on_message(self, envelope) -> None:
        self._services.set_property("color", "green")
        self._last_reception = self._services.current_time()


class RedGreenV4(Behavior):
    """v1 plus movement: random-waypoint step first, then the color check."""

    def __init__(self, period: int = 10, step: float = 5.0,
                 width: int = 400, height: int = 300):
        self._period = period
        self._step = step
        self._width = width
        self._height = height
        self._node = None
        self._services = None
        self._walker = None

    def on_attach(self, node, services) -> None:
        self._node = node
        self._services = services
        self._walker = RandomWaypoint(services.rng, width=self._width,
                                      height=self._height, step=self._step)
        self._walker.init(node)
        services.add_clock_listener(self.on_clock, self._period)

    def on_clock(self) -> None:
        self._walker.move(self._node)
        if len(self._services.neighbors()) > 0:
            self._services.set_property("color", "green")
        else:
            self._services.set_property("color", "red")


class RedGreenCentralized:
    """Topology listener recoloring all nodes as the network evolves.

    Not a Behavior: nodes stay inert and a single global entity reacts to
    structural events.
    """

    def on_node_added(self, topology, node) -> None:
        color = "red" if len(topology.get_neighbors(node.id)) == 0 else "green"
        node.set_property("color", color)

    def on_link_added(self, topology, link) -> None:
        for node_id in link.endpoints:
            topology.set_property(node_id, "color", "green")

    def on_link_removed(self, topology, link) -> None:
        for node_id in link.endpoints:
            if len(topology.get_neighbors(node_id)) == 0:
                topology.set_property(node_id, "color", "red")

    def on_node_removed(self, topology, node) -> None:
        pass


#: Behaviors addressable by name from scenario files and the CLI.
BEHAVIORS: dict[str, type] = {
    "red-green-v1": RedGreenV1,
    "red-green-v2": RedGreenV2,
    "red-green-v3": RedGreenV3,
    "red-green-v4": RedGreenV4,
}

#: Topology-level listeners addressable by name from scenario files.
TOPOLOGY_LISTENERS: dict[str, type] = {
    "red-green-centralized": RedGreenCentralized,
}
