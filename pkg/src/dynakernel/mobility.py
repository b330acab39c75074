"""Movement primitives: seedable RNG and the random-waypoint walker.

Position, direction, and step operations live on Node (they fire topology
events); this module adds the deterministic random stream and the waypoint
model built on top of them.
"""

from __future__ import annotations

import random

from .errors import DegenerateDirection, MissingWaypoint
from .topology import Node, Point

TARGET_PROPERTY = "target"


class Rng:
    """Seedable deterministic pseudo-random stream.

    Backed by MT19937 (CPython's random.Random).  next_int draws via
    rejection sampling over getrandbits, so the integer stream is a fixed
    function of the seed on every platform and Python version.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._mt = random.Random()
        self._mt.seed(self.seed)

    def next_int(self, n: int) -> int:
        """Uniform integer in {0, ..., n-1}."""
        if n < 1:
            raise ValueError(f"next_int needs n >= 1, got {n}")
        bits = (n - 1).bit_length()
        if bits == 0:
            return 0
        value = self._mt.getrandbits(bits)
        while value >= n:
            value = self._mt.getrandbits(bits)
        return value

    def next_float(self) -> float:
        """Uniform float in [0, 1)."""
        return self._mt.random()


class RandomWaypoint:
    """Step-by-step walk toward repeatedly re-drawn random targets.

    Stateless with respect to nodes: the current target is stored in the
    node's own "target" property.  Each move() call faces the target, steps
    a fixed distance, and only then re-draws the target if the node ended
    closer to it than one step.
    """

    def __init__(self, rng: Rng, width: int = 400, height: int = 300, step: float = 5.0):
        self.rng = rng
        self.width = int(width)
        self.height = int(height)
        self.step = float(step)

    def _draw_target(self) -> Point:
        return Point(float(self.rng.next_int(self.width)),
                     float(self.rng.next_int(self.height)))

    def init(self, node: Node) -> None:
        node.set_property(TARGET_PROPERTY, self._draw_target())

    def move(self, node: Node) -> None:
        target = node.get_property(TARGET_PROPERTY)
        if not isinstance(target, Point):
            raise MissingWaypoint(f"node {node.id} has no {TARGET_PROPERTY!r} property")
        try:
            node.set_direction(target)
        except DegenerateDirection:
            pass  # already exactly on target; keep the previous heading
        node.move(self.step)
        if node.distance(target) < self.step:
            node.set_property(TARGET_PROPERTY, self._draw_target())
