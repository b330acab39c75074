"""Deterministic event-driven simulator for distributed algorithms on
dynamic networks: a moving unit-disk topology, a discrete clock, neighbor
messaging, pluggable node behaviors, and a session server for live viewers.
"""

from .behaviors import (
    BEHAVIORS,
    TOPOLOGY_LISTENERS,
    Behavior,
    RedGreenCentralized,
    RedGreenV1,
    RedGreenV2,
    RedGreenV3,
    RedGreenV4,
)
from .clock import ClockSchedule
from .errors import (
    CapabilityError,
    ConfigError,
    DegenerateDirection,
    DuplicateLink,
    InvalidArgument,
    InvalidDistance,
    InvalidGeometry,
    InvalidKey,
    InvalidLink,
    InvalidPeriod,
    KernelError,
    MissingWaypoint,
    UnknownLink,
    UnknownListener,
    UnknownModel,
    UnknownNode,
)
from .messaging import BROADCAST, Envelope, Mailroom
from .mobility import RandomWaypoint, Rng
from .protocol import CommandError, build_snapshot, event_line, make_event
from .scenario import ScenarioConfig, load_scenario_file, parse_scenario
from .services import NodeServices
from .session import CommandScript, Diagnostics, Session, load_scenario
from .tikz import TikzOptions, to_tikz
from .topology import (
    DEFAULT_COMM_RANGE,
    WIRED,
    WIRELESS,
    Link,
    Node,
    NodeModel,
    Point,
    Topology,
)

__all__ = [
    "BEHAVIORS",
    "BROADCAST",
    "Behavior",
    "CapabilityError",
    "ClockSchedule",
    "CommandError",
    "CommandScript",
    "ConfigError",
    "DEFAULT_COMM_RANGE",
    "DegenerateDirection",
    "Diagnostics",
    "DuplicateLink",
    "Envelope",
    "InvalidArgument",
    "InvalidDistance",
    "InvalidGeometry",
    "InvalidKey",
    "InvalidLink",
    "InvalidPeriod",
    "KernelError",
    "Link",
    "Mailroom",
    "MissingWaypoint",
    "Node",
    "NodeModel",
    "NodeServices",
    "Point",
    "RandomWaypoint",
    "RedGreenCentralized",
    "RedGreenV1",
    "RedGreenV2",
    "RedGreenV3",
    "RedGreenV4",
    "Rng",
    "ScenarioConfig",
    "Session",
    "TOPOLOGY_LISTENERS",
    "TikzOptions",
    "Topology",
    "UnknownLink",
    "UnknownListener",
    "UnknownModel",
    "UnknownNode",
    "WIRED",
    "WIRELESS",
    "build_snapshot",
    "event_line",
    "load_scenario",
    "load_scenario_file",
    "make_event",
    "parse_scenario",
    "to_tikz",
]

__version__ = "0.1.0"
