/** Canvas rendering and gesture wiring.
 *
 * World coordinates are topology coordinates 1:1; panning and zooming are a
 * view-side transform only and never touch what gets sent to the server.
 * Left-click on empty space adds a node, dragging a node streams throttled
 * moves with an optimistic overlay, right-click removes a node.
 */

import { DragThrottle, gestureToCommand } from "./commands.js";
import type { Client } from "./net.js";
import { DEFAULT_COLOR } from "./state.js";

const NODE_RADIUS = 9;
const CLICK_SLOP = 3; // px of motion before a press counts as a drag
const CSS_COLOR = /^(#[0-9a-fA-F]{3,8}|[a-zA-Z]+)$/;

export interface Controls {
  pause: HTMLButtonElement;
  resume: HTMLButtonElement;
  rate: HTMLSelectElement;
  status: HTMLElement;
}

interface DragSession {
  id: number;
  moved: boolean;
}

interface PressAt {
  screenX: number;
  screenY: number;
}

export class Viewer {
  private scale = 1;
  private panX = 0;
  private panY = 0;
  private drag: DragSession | null = null;
  private pan: PressAt | null = null;
  private press: PressAt | null = null;
  private throttle: DragThrottle;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly client: Client,
    private readonly controls: Controls,
    movesPerSecond = 10,
  ) {
    this.throttle = new DragThrottle(movesPerSecond);
    client.onChange(() => this.render());
    this.wireCanvas();
    this.wireControls();
    this.render();
  }

  // -- coordinate transforms ------------------------------------------------

  private toWorld(sx: number, sy: number): { x: number; y: number } {
    return { x: (sx - this.panX) / this.scale, y: (sy - this.panY) / this.scale };
  }

  private canvasPoint(ev: MouseEvent): { x: number; y: number } {
    const rect = this.canvas.getBoundingClientRect();
    return { x: ev.clientX - rect.left, y: ev.clientY - rect.top };
  }

  private hitNode(sx: number, sy: number): number | null {
    const w = this.toWorld(sx, sy);
    const reach = (NODE_RADIUS + 2) / this.scale;
    let best: number | null = null;
    let bestDist = Infinity;
    for (const [id, node] of this.client.state.nodes) {
      const pos = this.client.state.drags.get(id) ?? node;
      const d = Math.hypot(pos.x - w.x, pos.y - w.y);
      if (d <= reach && d < bestDist) {
        best = id;
        bestDist = d;
      }
    }
    return best;
  }

  // -- gestures --------------------------------------------------------------

  private wireCanvas(): void {
    this.canvas.addEventListener("mousedown", (ev) => {
      const p = this.canvasPoint(ev);
      if (ev.button === 1) {
        this.pan = { screenX: p.x, screenY: p.y };
        ev.preventDefault();
        return;
      }
      if (ev.button !== 0) return;
      const hit = this.hitNode(p.x, p.y);
      this.press = { screenX: p.x, screenY: p.y };
      this.drag = hit === null ? null : { id: hit, moved: false };
    });

    this.canvas.addEventListener("mousemove", (ev) => {
      const p = this.canvasPoint(ev);
      if (this.pan) {
        this.panX += p.x - this.pan.screenX;
        this.panY += p.y - this.pan.screenY;
        this.pan = { screenX: p.x, screenY: p.y };
        this.render();
        return;
      }
      if (!this.drag || !this.press) return;
      if (!this.drag.moved
          && Math.hypot(p.x - this.press.screenX, p.y - this.press.screenY) < CLICK_SLOP) {
        return;
      }
      this.drag.moved = true;
      const w = this.toWorld(p.x, p.y);
      this.client.state.drags.set(this.drag.id, { x: w.x, y: w.y });
      const command = gestureToCommand(
        { kind: "dragMove", id: this.drag.id, x: w.x, y: w.y });
      const due = this.throttle.offer(command, performance.now());
      if (due) this.client.send(due);
      this.render();
    });

    this.canvas.addEventListener("mouseup", (ev) => {
      if (ev.button === 1) {
        this.pan = null;
        return;
      }
      if (ev.button !== 0) return;
      const p = this.canvasPoint(ev);
      if (this.drag && this.drag.moved) {
        const trailing = this.throttle.flush();
        if (trailing) this.client.send(trailing);
        this.client.state.drags.delete(this.drag.id); // server echo takes over
      } else if (this.drag === null && this.press
                 && Math.hypot(p.x - this.press.screenX, p.y - this.press.screenY) < CLICK_SLOP) {
        const w = this.toWorld(p.x, p.y);
        this.client.send(gestureToCommand({ kind: "addClick", x: w.x, y: w.y }));
      }
      this.drag = null;
      this.press = null;
      this.render();
    });

    this.canvas.addEventListener("contextmenu", (ev) => {
      ev.preventDefault();
      const p = this.canvasPoint(ev);
      const hit = this.hitNode(p.x, p.y);
      if (hit !== null) {
        this.client.send(gestureToCommand({ kind: "removeClick", id: hit }));
      }
    });

    this.canvas.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      const p = this.canvasPoint(ev);
      const factor = Math.exp(-ev.deltaY * 0.001);
      const next = Math.min(4, Math.max(0.25, this.scale * factor));
      // keep the world point under the cursor fixed while zooming
      this.panX = p.x - (next / this.scale) * (p.x - this.panX);
      this.panY = p.y - (next / this.scale) * (p.y - this.panY);
      this.scale = next;
      this.render();
    });
  }

  private wireControls(): void {
    this.controls.pause.addEventListener("click", () => {
      this.client.send({ cmd: "pause" });
    });
    this.controls.resume.addEventListener("click", () => {
      this.client.send({ cmd: "resume" });
      this.client.state.paused = false; // optimistic; deltas confirm
      this.render();
    });
    this.controls.rate.addEventListener("change", () => {
      const rate = Number(this.controls.rate.value);
      if (Number.isFinite(rate)) {
        this.client.send({ cmd: "setRate", rate });
      }
    });
  }

  // -- drawing -----------------------------------------------------------------

  render(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const state = this.client.state;
    ctx.setTransform(1, 0, 0, 1, 0, 0);
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);
    ctx.setTransform(this.scale, 0, 0, this.scale, this.panX, this.panY);

    const place = (id: number) => state.drags.get(id) ?? state.nodes.get(id);

    for (const key of state.links) {
      const [a, b, mode] = key.split(":");
      const pa = place(Number(a));
      const pb = place(Number(b));
      if (!pa || !pb) continue;
      ctx.beginPath();
      ctx.setLineDash(mode === "wired" ? [6 / this.scale, 4 / this.scale] : []);
      ctx.moveTo(pa.x, pa.y);
      ctx.lineTo(pb.x, pb.y);
      ctx.strokeStyle = "#5f6a75";
      ctx.lineWidth = 1.5 / this.scale;
      ctx.stroke();
    }
    ctx.setLineDash([]);

    for (const [id, node] of state.nodes) {
      const pos = place(id) ?? node;
      ctx.beginPath();
      ctx.arc(pos.x, pos.y, NODE_RADIUS / this.scale, 0, Math.PI * 2);
      ctx.fillStyle = CSS_COLOR.test(node.color) ? node.color : DEFAULT_COLOR;
      ctx.fill();
      ctx.strokeStyle = "#1c2127";
      ctx.lineWidth = 1.5 / this.scale;
      ctx.stroke();
      ctx.fillStyle = "#e8eaed";
      ctx.font = `${11 / this.scale}px system-ui, sans-serif`;
      ctx.textAlign = "center";
      ctx.fillText(String(id), pos.x, pos.y - (NODE_RADIUS + 4) / this.scale);
    }

    const bits = [
      state.status,
      state.paused ? "paused" : "running",
      `t=${state.time}`,
      `${state.nodes.size} nodes`,
      `${state.links.size} links`,
    ];
    if (state.lastError) bits.push(state.lastError);
    this.controls.status.textContent = bits.join(" · ");
  }
}
