/** Gesture-to-command mapping and the drag rate limiter.
 *
 * Exactly three topology edits exist: left-click on empty space adds a
 * node, dragging a node moves it, right-click on a node removes it.
 */

import type { Command } from "./protocol.js";

export type Gesture =
  | { kind: "addClick"; x: number; y: number }
  | { kind: "dragMove"; id: number; x: number; y: number }
  | { kind: "removeClick"; id: number };

export function gestureToCommand(gesture: Gesture): Command {
  switch (gesture.kind) {
    case "addClick":
      return { cmd: "addNode", x: gesture.x, y: gesture.y, model: "default" };
    case "dragMove":
      return { cmd: "moveNode", id: gesture.id, x: gesture.x, y: gesture.y };
    case "removeClick":
      return { cmd: "removeNode", id: gesture.id };
  }
}

/** Caps a drag's moveNode stream at `rate` commands per second.
 *
 * Samples arriving inside the refractory window are held; the newest held
 * sample is released by flush() when the drag ends, so the node always
 * lands exactly where the pointer was released.
 */
export class DragThrottle {
  private lastSent = Number.NEGATIVE_INFINITY;
  private pending: Command | null = null;

  constructor(private readonly rate: number) {
    if (!(rate > 0)) {
      throw new Error(`throttle rate must be positive, got ${rate}`);
    }
  }

  offer(command: Command, nowMs: number): Command | null {
    if (nowMs - this.lastSent >= 1000 / this.rate) {
      this.lastSent = nowMs;
      this.pending = null;
      return command;
    }
    this.pending = command;
    return null;
  }

  flush(): Command | null {
    const held = this.pending;
    this.pending = null;
    return held;
  }
}
