"""Serialize a topology snapshot to a Tikz picture.

Output is byte-for-byte deterministic for a given topology and options:
nodes in ascending id, edges sorted by endpoint pair, coordinates divided by
`scale` and rounded to `decimal_places`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument
from .topology import Topology


@dataclass(frozen=True)
class TikzOptions:
    scale: float = 50.0
    node_style: str = "draw,circle,inner sep=2"
    decimal_places: int = 2
    fill_from_color: bool = False  # map the "color" property to a node fill

    def __post_init__(self):
        if not self.scale > 0:
            raise InvalidArgument(f"scale must be > 0, got {self.scale}")
        if self.decimal_places < 0:
            raise InvalidArgument(f"decimal_places must be >= 0, got {self.decimal_places}")


def to_tikz(topology: Topology, options: TikzOptions = TikzOptions()) -> str:
    lines = [
        r"\begin{tikzpicture}[xscale=1,yscale=1]",
        rf"  \tikzstyle{{every node}}=[{options.node_style}]",
    ]
    places = options.decimal_places
    for node in topology.nodes:
        x = node.position.x / options.scale
        y = node.position.y / options.scale
        tag = "node"
        if options.fill_from_color:
            color = node.get_property("color")
            if isinstance(color, str) and color:
                tag = f"node[fill={color}]"
        lines.append(rf"  \path ({x:.{places}f},{y:.{places}f}) {tag} (v{node.id}) {{}};")
    for link in sorted(topology.links, key=lambda l: (l.a, l.b, l.mode)):
        lines.append(rf"  \draw (v{link.a})--(v{link.b});")
    lines.append(r"\end{tikzpicture}")
    return "\n".join(lines) + "\n"
