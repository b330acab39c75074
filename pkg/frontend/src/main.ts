import { Client } from "./net.js";
import type { SocketLike } from "./net.js";
import { Viewer } from "./viewer.js";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

const params = new URLSearchParams(location.search);
// same-origin by default; ?server=host:port points elsewhere
const target = params.get("server") ?? location.host;
const socket: SocketLike = new WebSocket(`ws://${target}/ws`);

const client = new Client(socket);
const canvas = element<HTMLCanvasElement>("view");

function fit(): void {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
  viewer.render();
}

const viewer = new Viewer(canvas, client, {
  pause: element<HTMLButtonElement>("pause"),
  resume: element<HTMLButtonElement>("resume"),
  rate: element<HTMLSelectElement>("rate"),
  status: element<HTMLElement>("status"),
});

window.addEventListener("resize", fit);
fit();
