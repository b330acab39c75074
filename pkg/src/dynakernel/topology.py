"""Nodes, links, properties, node models, and structural event dispatch.

The topology is the single source of truth for network structure.  Its key
invariant is wireless closure: after every mutating operation returns, a
wireless link (a, b) exists exactly when both nodes are wireless-enabled and
their euclidean distance is at most min(range_a, range_b).  Wired links are
manual and never distance-managed.

Event delivery order on a structural change is fixed for determinism:
the delta sink first, then endpoint node-listeners (lower node id first),
then topology listeners in registration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import (
    DegenerateDirection,
    DuplicateLink,
    InvalidArgument,
    InvalidDistance,
    InvalidGeometry,
    InvalidKey,
    InvalidLink,
    UnknownLink,
    UnknownModel,
    UnknownNode,
)

WIRELESS = "wireless"
WIRED = "wired"

DEFAULT_COMM_RANGE = 100.0
DEFAULT_WIDTH = 800.0
DEFAULT_HEIGHT = 600.0


@dataclass(frozen=True)
class Point:
    """A position in the plane.  Coordinates must be finite."""

    x: float
    y: float

    def __post_init__(self):
        if not isinstance(self.x, (int, float)) or not isinstance(self.y, (int, float)):
            raise InvalidGeometry(f"coordinates must be numbers, got ({self.x!r}, {self.y!r})")
        # normalize ints so a position serializes the same way however built
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidGeometry(f"non-finite coordinates ({self.x}, {self.y})")

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


#: Closed set of value types a node property (or message payload) may carry.
PROPERTY_TYPES = (str, bool, int, float, Point)


def check_property_value(value) -> None:
    """Reject values outside the closed property-value union."""
    if not isinstance(value, PROPERTY_TYPES):
        raise TypeError(
            f"unsupported property value type {type(value).__name__}; "
            f"expected str, bool, int, float, or Point"
        )
    if isinstance(value, float) and not math.isfinite(value):
        raise TypeError("non-finite float property values are not representable")


@dataclass(frozen=True)
class Link:
    """Undirected connection between two nodes.

    Endpoints are normalized so that a < b; link (a, b) and link (b, a) are
    the same object value.  Self-loops are rejected.
    """

    a: int
    b: int
    mode: str = WIRELESS

    def __post_init__(self):
        if self.a == self.b:
            raise InvalidLink(f"self-loop on node {self.a}")
        if self.mode not in (WIRELESS, WIRED):
            raise InvalidLink(f"unknown link mode {self.mode!r}")
        if self.a > self.b:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.a, self.b)

    def other(self, node_id: int) -> int:
        if node_id == self.a:
            return self.b
        if node_id == self.b:
            return self.a
        raise UnknownNode(f"node {node_id} is not an endpoint of {self}")

    def key(self) -> tuple[int, int, str]:
        return (self.a, self.b, self.mode)


@dataclass
class NodeModel:
    """Named prototype cloned when new nodes are created.

    `behavior_factory` is called once per created node and must return a
    fresh behavior instance (or be None for inert nodes).
    """

    name: str
    behavior_factory: Optional[Callable[[], object]] = None
    comm_range: float = DEFAULT_COMM_RANGE
    wireless: bool = True
    properties: dict = field(default_factory=dict)


class Node:
    """A positioned, property-bearing simulation entity.

    Nodes are created through Topology.add_node; position and property
    mutations made while attached are routed through the owning topology so
    events fire.  A detached node (unit tests) mutates locally and silently.
    """

    def __init__(self, node_id: int, position: Point, comm_range: float = DEFAULT_COMM_RANGE,
                 wireless_enabled: bool = True, properties: dict | None = None):
        if comm_range < 0:
            raise InvalidArgument(f"comm_range must be >= 0, got {comm_range}")
        self.id = node_id
        self.position = position
        self.direction = 0.0  # radians from +x toward +y
        self.comm_range = float(comm_range)
        self.wireless_enabled = bool(wireless_enabled)
        self.properties: dict = dict(properties or {})
        self.behavior = None
        self.listeners: list = []          # node-event listeners (behaviors, recorders)
        self.message_listeners: list = []  # callables taking an Envelope
        self._topology: Optional[Topology] = None
        self._services = None

    def __repr__(self):
        return f"Node({self.id} @ ({self.position.x}, {self.position.y}))"

    # -- properties ----------------------------------------------------

    def set_property(self, key: str, value) -> None:
        if self._topology is not None:
            self._topology.set_property(self.id, key, value)
        else:
            _check_property_key(key)
            check_property_value(value)
            self.properties[key] = value

    def get_property(self, key: str, default=None):
        return self.properties.get(key, default)

    def has_property(self, key: str) -> bool:
        return key in self.properties

    # -- listeners -----------------------------------------------------

    def add_node_listener(self, listener) -> None:
        self.listeners.append(listener)

    def remove_node_listener(self, listener) -> None:
        self.listeners.remove(listener)

    def add_message_listener(self, callback) -> None:
        self.message_listeners.append(callback)

    def remove_message_listener(self, callback) -> None:
        self.message_listeners.remove(callback)

    def get_neighbors(self) -> set[int]:
        if self._topology is None:
            return set()
        return self._topology.get_neighbors(self.id)

    # -- movement ------------------------------------------------------

    def set_direction(self, toward: Point) -> None:
        """Face a reference point.  The point itself is not stored."""
        if toward == self.position:
            raise DegenerateDirection(f"node {self.id}: reference point equals position")
        self.direction = math.atan2(toward.y - self.position.y, toward.x - self.position.x)

    def set_direction_angle(self, theta: float) -> None:
        if not math.isfinite(theta):
            raise InvalidGeometry(f"non-finite direction {theta}")
        self.direction = float(theta)

    def move(self, distance: float) -> None:
        """Advance along the current direction.  Position is never clamped."""
        if not (isinstance(distance, (int, float)) and math.isfinite(distance)) or distance < 0:
            raise InvalidDistance(f"bad move distance {distance!r}")
        new_position = Point(
            self.position.x + distance * math.cos(self.direction),
            self.position.y + distance * math.sin(self.direction),
        )
        if self._topology is not None:
            self._topology._apply_position(self, new_position)
        else:
            self.position = new_position

    def distance(self, p: Point) -> float:
        return self.position.distance_to(p)


def _check_property_key(key) -> None:
    if not isinstance(key, str) or key == "":
        raise InvalidKey(f"property key must be a nonempty string, got {key!r}")


class Topology:
    """Container of nodes and links; hub for structural events.

    Single-threaded ownership: all mutation and listener dispatch happen on
    one logical execution context (the simulation loop).
    """

    def __init__(self, width: float = DEFAULT_WIDTH, height: float = DEFAULT_HEIGHT):
        self.width = float(width)
        self.height = float(height)
        self._nodes: dict[int, Node] = {}
        self._links: dict[tuple[int, int, str], Link] = {}
        self._models: dict[str, NodeModel] = {"default": NodeModel("default")}
        self._topology_listeners: list = []
        self._next_id = 0
        # Session hooks.  delta_sink(name, fields) receives every event;
        # error_sink(context, exc) isolates listener failures (without one,
        # listener exceptions propagate); services_factory(node) builds the
        # handle passed to behaviors at attach time.
        self.delta_sink: Optional[Callable[[str, dict], None]] = None
        self.error_sink: Optional[Callable[[str, BaseException], None]] = None
        self.services_factory: Optional[Callable[[Node], object]] = None

    # -- accessors -------------------------------------------------------

    def node(self, node_id: int) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id}") from None

    def has_node(self, node_id: int) -> bool:
        return node_id in self._nodes

    def node_ids(self) -> list[int]:
        return sorted(self._nodes)

    @property
    def nodes(self) -> list[Node]:
        return [self._nodes[i] for i in sorted(self._nodes)]

    @property
    def links(self) -> list[Link]:
        return [self._links[k] for k in sorted(self._links)]

    def link_keys(self) -> set[tuple[int, int, str]]:
        return set(self._links)

    def has_link(self, a: int, b: int, mode: str = WIRELESS) -> bool:
        a, b = (a, b) if a < b else (b, a)
        return (a, b, mode) in self._links

    # -- models ----------------------------------------------------------

    def set_model(self, name: str, model: NodeModel) -> None:
        if not isinstance(name, str) or name == "":
            raise InvalidKey(f"model name must be a nonempty string, got {name!r}")
        for key in model.properties:
            _check_property_key(key)
        self._models[name] = NodeModel(
            name=name,
            behavior_factory=model.behavior_factory,
            comm_range=model.comm_range,
            wireless=model.wireless,
            properties=dict(model.properties),
        )

    def get_model(self, name: str) -> NodeModel:
        try:
            return self._models[name]
        except KeyError:
            raise UnknownModel(f"no model named {name!r}") from None

    def model_names(self) -> list[str]:
        return sorted(self._models)

    # -- listeners ---------------------------------------------------------

    def add_topology_listener(self, listener) -> None:
        self._topology_listeners.append(listener)

    def remove_topology_listener(self, listener) -> None:
        self._topology_listeners.remove(listener)

    # -- node lifecycle ------------------------------------------------------

    def add_node(self, position: Point, model_name: str = "default") -> int:
        """Create a node from a registered model.  Returns the new node id.

        Order of effects: the node and its due wireless links enter the
        structure, nodeAdded fires, the model behavior attaches, then one
        linkAdded fires per new link in ascending peer order.
        """
        if model_name not in self._models:
            raise UnknownModel(f"no model named {model_name!r}")
        if not isinstance(position, Point):
            position = Point(*position)
        model = self._models[model_name]
        node_id = self._next_id
        self._next_id += 1
        node = Node(node_id, position, model.comm_range, model.wireless,
                    dict(model.properties))
        node._topology = self
        self._nodes[node_id] = node

        new_links = []
        for peer_id in sorted(self._nodes):
            if peer_id == node_id:
                continue
            peer = self._nodes[peer_id]
            if self._wireless_due(node, peer):
                link = Link(node_id, peer_id, WIRELESS)
                self._links[link.key()] = link
                new_links.append(link)

        self._emit("nodeAdded", {"id": node_id, "x": position.x, "y": position.y,
                                 "properties": dict(node.properties)})
        for listener in list(self._topology_listeners):
            self._notify(listener, "on_node_added", self, node)

        if model.behavior_factory is not None:
            self._attach_behavior(node, model.behavior_factory)

        for link in new_links:
            self._fire_link_event("linkAdded", link)
        return node_id

    def _attach_behavior(self, node: Node, factory) -> None:
        try:
            behavior = factory()
        except Exception as exc:  # an algorithm bug must not kill the loop
            self._report("behavior:factory", exc)
            return
        node.behavior = behavior
        if self.services_factory is not None:
            services = self.services_factory(node)
        else:
            from .services import NodeServices

            services = NodeServices(node, self)
        node._services = services
        self._guard("behavior:on_attach", behavior.on_attach, node, services)

    def remove_node(self, node_id: int) -> None:
        """Remove a node: incident links first (with events), then the node."""
        node = self.node(node_id)
        incident = sorted(
            (link for link in self._links.values() if node_id in link.endpoints),
            key=Link.key,
        )
        for link in incident:
            del self._links[link.key()]
            self._fire_link_event("linkRemoved", link)
        del self._nodes[node_id]
        self._emit("nodeRemoved", {"id": node_id})
        for listener in list(self._topology_listeners):
            self._notify(listener, "on_node_removed", self, node)
        node._topology = None
        if node._services is not None:
            node._services.dispose()
            node._services = None

    # -- wired links --------------------------------------------------------

    def add_wired_link(self, a: int, b: int) -> None:
        self.node(a)
        self.node(b)
        link = Link(a, b, WIRED)  # raises InvalidLink on self-loop
        if link.key() in self._links:
            raise DuplicateLink(f"wired link {link.endpoints} already exists")
        self._links[link.key()] = link
        self._fire_link_event("linkAdded", link)

    def remove_wired_link(self, a: int, b: int) -> None:
        self.node(a)
        self.node(b)
        link = Link(a, b, WIRED)
        if link.key() not in self._links:
            raise UnknownLink(f"no wired link {link.endpoints}")
        del self._links[link.key()]
        self._fire_link_event("linkRemoved", link)

    # -- queries -------------------------------------------------------------

    def get_neighbors(self, node_id: int) -> set[int]:
        """Ids of all nodes sharing any link (wireless or wired) with node_id."""
        self.node(node_id)
        return {link.other(node_id) for link in self._links.values()
                if node_id in link.endpoints}

    # -- properties ------------------------------------------------------------

    def set_property(self, node_id: int, key: str, value) -> None:
        """Store a property value.  Fires propertyChanged even on equal rewrite."""
        node = self.node(node_id)
        _check_property_key(key)
        check_property_value(value)
        node.properties[key] = value
        self._emit("propertyChanged", {"id": node_id, "key": key, "value": value})
        for listener in list(node.listeners):
            self._notify(listener, "on_property_changed", key)

    def get_property(self, node_id: int, key: str, default=None):
        return self.node(node_id).properties.get(key, default)

    # -- movement ----------------------------------------------------------------

    def move_node(self, node_id: int, position: Point) -> None:
        """Teleport a node (viewer drags arrive as streams of these)."""
        node = self.node(node_id)
        if not isinstance(position, Point):
            position = Point(*position)
        self._apply_position(node, position)

    def _apply_position(self, node: Node, position: Point) -> None:
        node.position = position
        self._emit("nodeMoved", {"id": node.id, "x": position.x, "y": position.y})
        for listener in list(node.listeners):
            self._notify(listener, "on_node_moved")
        self._recompute_wireless(node.id)

    def set_comm_range(self, node_id: int, comm_range: float) -> None:
        if comm_range < 0 or not math.isfinite(comm_range):
            raise InvalidArgument(f"comm_range must be finite and >= 0, got {comm_range}")
        node = self.node(node_id)
        node.comm_range = float(comm_range)
        self._recompute_wireless(node_id)

    def set_wireless_enabled(self, node_id: int, enabled: bool) -> None:
        node = self.node(node_id)
        node.wireless_enabled = bool(enabled)
        self._recompute_wireless(node_id)

    # -- wireless closure ------------------------------------------------------

    @staticmethod
    def _wireless_due(a: Node, b: Node) -> bool:
        return (a.wireless_enabled and b.wireless_enabled
                and a.position.distance_to(b.position) <= min(a.comm_range, b.comm_range))

    def _recompute_wireless(self, node_id: int) -> None:
        """Restore wireless closure over pairs involving one node.

        Internal: runs after every position, range, or wireless-flag change.
        """
        node = self._nodes[node_id]
        for peer_id in sorted(self._nodes):
            if peer_id == node_id:
                continue
            peer = self._nodes[peer_id]
            key = Link(node_id, peer_id, WIRELESS).key()
            due = self._wireless_due(node, peer)
            present = key in self._links
            if due and not present:
                link = Link(node_id, peer_id, WIRELESS)
                self._links[key] = link
                self._fire_link_event("linkAdded", link)
            elif not due and present:
                link = self._links.pop(key)
                self._fire_link_event("linkRemoved", link)

    # -- event plumbing -----------------------------------------------------------

    def _fire_link_event(self, name: str, link: Link) -> None:
        self._emit(name, {"a": link.a, "b": link.b, "mode": link.mode})
        hook = "on_link_added" if name == "linkAdded" else "on_link_removed"
        for endpoint in link.endpoints:  # ascending: Link normalizes a < b
            node = self._nodes.get(endpoint)
            if node is None:
                continue
            for listener in list(node.listeners):
                self._notify(listener, hook, link)
        for listener in list(self._topology_listeners):
            self._notify(listener, hook, self, link)

    def _emit(self, name: str, fields: dict) -> None:
        if self.delta_sink is not None:
            self.delta_sink(name, fields)

    def _notify(self, listener, hook: str, *args) -> None:
        fn = getattr(listener, hook, None)
        if fn is not None:
            self._guard(f"listener:{hook}", fn, *args)

    def _guard(self, context: str, fn, *args) -> None:
        try:
            fn(*args)
        except Exception as exc:
            self._report(context, exc)

    def _report(self, context: str, exc: BaseException) -> None:
        if self.error_sink is None:
            raise exc
        self.error_sink(context, exc)
