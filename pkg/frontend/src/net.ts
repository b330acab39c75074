/** Socket plumbing between the server and the state mirror.
 *
 * Incoming frames are parsed and fed through applyEvent; commands go out
 * as single JSON frames.  When the state flags a resync, exactly one
 * snapshot request is sent, no matter how many deltas misfire before the
 * snapshot arrives.
 */

import { applyEvent, initialState } from "./state.js";
import type { ViewState } from "./state.js";
import type { Command, ServerEvent } from "./protocol.js";

/** Structural subset of a browser WebSocket, also easy to fake in tests.
 * Handler parameters are typed loosely so a real WebSocket assigns cleanly;
 * receive() only ever touches msg.data. */
export interface SocketLike {
  onopen: ((ev?: any) => void) | null;
  onmessage: ((msg: any) => void) | null;
  onclose: ((ev?: any) => void) | null;
  send(data: string): void;
  close(): void;
}

export class Client {
  readonly state: ViewState = initialState();
  private snapshotInFlight = false;
  private readonly listeners: Array<() => void> = [];

  constructor(private readonly socket: SocketLike) {
    socket.onopen = () => {
      this.state.status = "open";
      this.requestSnapshot(); // initial sync
      this.notify();
    };
    socket.onmessage = (msg) => this.receive(String(msg.data));
    socket.onclose = () => {
      this.state.status = "closed";
      this.notify();
    };
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  send(command: Command): void {
    this.socket.send(JSON.stringify(command));
  }

  private requestSnapshot(): void {
    if (!this.snapshotInFlight) {
      this.snapshotInFlight = true;
      this.send({ cmd: "snapshot" });
    }
  }

  private receive(frame: string): void {
    let ev: ServerEvent;
    try {
      ev = JSON.parse(frame) as ServerEvent;
    } catch {
      return; // not ours to crash on; the server never sends non-JSON
    }
    if (ev.ev === "snapshot") {
      this.snapshotInFlight = false;
    }
    applyEvent(this.state, ev);
    if (this.state.resyncNeeded) {
      this.requestSnapshot();
    }
    this.notify();
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener();
    }
  }
}
