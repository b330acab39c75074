/** Client-side mirror of the running topology.
 *
 * The viewer never derives simulation facts itself: links and colors arrive
 * as server events and are stored verbatim.  applyEvent is the single write
 * path.  A delta that references a node this mirror has never seen means
 * events were missed (a mid-stream join, a dropped frame); the state is
 * flagged for a snapshot resync instead of guessing, and the offending
 * delta is skipped.
 */

import type { ServerEvent, SnapshotNode } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface NodeView {
  x: number;
  y: number;
  color: string;
}

export interface ViewState {
  nodes: Map<number, NodeView>;
  links: Set<string>;
  time: number;
  status: ConnectionStatus;
  paused: boolean;
  /** Optimistic drag positions, render-only; server events stay authoritative. */
  drags: Map<number, { x: number; y: number }>;
  resyncNeeded: boolean;
  lastError: string | null;
}

/** Fill used when a node has no usable "color" property. */
export const DEFAULT_COLOR = "#8a929c";

export function initialState(): ViewState {
  return {
    nodes: new Map(),
    links: new Set(),
    time: 0,
    status: "connecting",
    paused: true,
    drags: new Map(),
    resyncNeeded: false,
    lastError: null,
  };
}

export function colorOf(value: unknown): string {
  return typeof value === "string" && value !== "" ? value : DEFAULT_COLOR;
}

export function linkKey(a: number, b: number, mode: string): string {
  return `${a}:${b}:${mode}`;
}

function viewOf(node: SnapshotNode): NodeView {
  return { x: node.x, y: node.y, color: colorOf(node.properties["color"]) };
}

export function applyEvent(state: ViewState, ev: ServerEvent): ViewState {
  if (ev.ev === "snapshot") {
    state.nodes = new Map(ev.nodes.map((n) => [n.id, viewOf(n)]));
    state.links = new Set(ev.links.map((l) => linkKey(l.a, l.b, l.mode)));
    state.time = ev.time;
    state.resyncNeeded = false;
    return state;
  }
  if (ev.time > state.time) {
    state.paused = false; // time advanced, so the run is live again
  }
  state.time = ev.time;
  switch (ev.ev) {
    case "nodeAdded":
      state.nodes.set(ev.id, {
        x: ev.x,
        y: ev.y,
        color: colorOf(ev.properties["color"]),
      });
      break;
    case "nodeRemoved": {
      if (!state.nodes.delete(ev.id)) {
        state.resyncNeeded = true;
        break;
      }
      for (const key of [...state.links]) {
        const [a, b] = key.split(":");
        if (a === String(ev.id) || b === String(ev.id)) {
          state.links.delete(key);
        }
      }
      state.drags.delete(ev.id);
      break;
    }
    case "nodeMoved": {
      const node = state.nodes.get(ev.id);
      if (!node) {
        state.resyncNeeded = true;
        break;
      }
      node.x = ev.x;
      node.y = ev.y;
      break;
    }
    case "linkAdded":
      if (!state.nodes.has(ev.a) || !state.nodes.has(ev.b)) {
        state.resyncNeeded = true;
        break;
      }
      state.links.add(linkKey(ev.a, ev.b, ev.mode));
      break;
    case "linkRemoved":
      // removal of an already-absent link is harmless, mirror the server's
      // replay semantics and discard quietly
      if (!state.nodes.has(ev.a) || !state.nodes.has(ev.b)) {
        state.resyncNeeded = true;
        break;
      }
      state.links.delete(linkKey(ev.a, ev.b, ev.mode));
      break;
    case "propertyChanged": {
      const node = state.nodes.get(ev.id);
      if (!node) {
        state.resyncNeeded = true;
        break;
      }
      if (ev.key === "color") {
        node.color = colorOf(ev.value);
      }
      break;
    }
    case "paused":
      state.paused = true;
      break;
    case "error":
      state.lastError = `${ev.code}: ${ev.detail}`;
      break;
  }
  return state;
}

/** Projection used to compare a replayed state against a snapshot. */
export function comparable(state: ViewState): {
  nodes: Record<number, NodeView>;
  links: string[];
  time: number;
} {
  const nodes: Record<number, NodeView> = {};
  for (const [id, view] of state.nodes) {
    nodes[id] = { ...view };
  }
  return { nodes, links: [...state.links].sort(), time: state.time };
}
