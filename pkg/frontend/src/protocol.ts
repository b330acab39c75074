/** Wire shapes shared with the simulation server: one JSON object per
 * WebSocket text frame (or per line over TCP), both directions. */

export type LinkMode = "wireless" | "wired";

export interface SnapshotNode {
  id: number;
  x: number;
  y: number;
  properties: Record<string, unknown>;
}

export interface SnapshotLink {
  a: number;
  b: number;
  mode: LinkMode;
}

export type ServerEvent =
  | { ev: "nodeAdded"; time: number; id: number; x: number; y: number;
      properties: Record<string, unknown> }
  | { ev: "nodeRemoved"; time: number; id: number }
  | { ev: "nodeMoved"; time: number; id: number; x: number; y: number }
  | { ev: "linkAdded"; time: number; a: number; b: number; mode: LinkMode }
  | { ev: "linkRemoved"; time: number; a: number; b: number; mode: LinkMode }
  | { ev: "propertyChanged"; time: number; id: number; key: string;
      value: unknown }
  | { ev: "snapshot"; time: number; nodes: SnapshotNode[];
      links: SnapshotLink[] }
  | { ev: "paused"; time: number }
  | { ev: "error"; time: number; code: string; detail: string };

export type Command =
  | { cmd: "addNode"; x: number; y: number; model: string }
  | { cmd: "moveNode"; id: number; x: number; y: number }
  | { cmd: "removeNode"; id: number }
  | { cmd: "pause" }
  | { cmd: "resume" }
  | { cmd: "setRate"; rate: number }
  | { cmd: "snapshot" };
