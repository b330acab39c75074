import { describe, expect, it } from "vitest";

import { Client } from "../src/net.js";
import type { SocketLike } from "../src/net.js";

class FakeSocket implements SocketLike {
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((msg: { data: string }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  sent: string[] = [];
  closed = false;

  send(data: string): void {
    this.sent.push(data);
  }

  close(): void {
    this.closed = true;
  }

  deliver(event: object): void {
    this.onmessage?.({ data: JSON.stringify(event) });
  }

  snapshotRequests(): number {
    return this.sent.filter((s) => s === '{"cmd":"snapshot"}').length;
  }
}

function opened(): { socket: FakeSocket; client: Client } {
  const socket = new FakeSocket();
  const client = new Client(socket);
  socket.onopen?.();
  socket.deliver({
    ev: "snapshot",
    time: 0,
    nodes: [{ id: 0, x: 1, y: 2, properties: { color: "red" } }],
    links: [],
  });
  return { socket, client };
}

describe("Client", () => {
  it("requests one snapshot on connect and mirrors it", () => {
    const { socket, client } = opened();
    expect(client.state.status).toBe("open");
    expect(socket.snapshotRequests()).toBe(1);
    expect(client.state.nodes.get(0)).toEqual({ x: 1, y: 2, color: "red" });
  });

  it("sends exactly one resync request however many deltas misfire", () => {
    const { socket, client } = opened();
    socket.deliver({ ev: "nodeMoved", time: 1, id: 7, x: 0, y: 0 });
    socket.deliver({ ev: "nodeMoved", time: 1, id: 8, x: 0, y: 0 });
    socket.deliver({ ev: "propertyChanged", time: 1, id: 9, key: "color",
                     value: "red" });
    expect(client.state.resyncNeeded).toBe(true);
    expect(socket.snapshotRequests()).toBe(2); // connect plus one resync

    socket.deliver({ ev: "snapshot", time: 1, nodes: [], links: [] });
    expect(client.state.resyncNeeded).toBe(false);

    socket.deliver({ ev: "nodeMoved", time: 2, id: 7, x: 0, y: 0 });
    expect(socket.snapshotRequests()).toBe(3); // a fresh miss may ask again
  });

  it("survives a non-JSON frame", () => {
    const { socket, client } = opened();
    socket.onmessage?.({ data: "not json" });
    expect(client.state.nodes.size).toBe(1);
  });

  it("serializes commands as single frames", () => {
    const { socket, client } = opened();
    client.send({ cmd: "removeNode", id: 0 });
    expect(socket.sent).toContain('{"cmd":"removeNode","id":0}');
  });

  it("notifies renderers and reports closure", () => {
    const socket = new FakeSocket();
    const client = new Client(socket);
    let pings = 0;
    client.onChange(() => {
      pings += 1;
    });
    socket.onopen?.();
    socket.deliver({ ev: "paused", time: 0 });
    socket.onclose?.();
    expect(client.state.status).toBe("closed");
    expect(pings).toBeGreaterThanOrEqual(3);
  });
});
