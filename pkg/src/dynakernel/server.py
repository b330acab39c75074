"""Network front ends for a session.

Two listeners share one session and one event loop:

* a TCP endpoint speaking newline-delimited JSON (one command in per line,
  one event out per line), and
* an optional HTTP endpoint that upgrades to WebSocket for browser viewers
  (same JSON, one message per text frame) and serves static viewer files.

All session mutation goes through the command queue; reader tasks never
touch the topology directly.  The WebSocket support is a deliberately small
subset of RFC 6455: single-frame text messages, ping/pong, close.
"""

from __future__ import annotations

import asyncio
import base64
import hashlib
import struct
from pathlib import Path
from time import perf_counter
from typing import Optional

from . import protocol
from .protocol import CommandError
from .session import Session

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".png": "image/png",
}


class SessionServer:
    """Drives one session and fans its event stream out to clients."""

    def __init__(self, session: Session, static_dir=None):
        self.session = session
        self.static_dir = Path(static_dir) if static_dir else None
        self._servers: list[asyncio.AbstractServer] = []

    # -- run loop -----------------------------------------------------------

    async def run_loop(self) -> None:
        """Tick the session at the configured rate; pump commands while
        paused so viewers stay responsive.  Rate 0 means unpaced."""
        session = self.session
        while True:
            session.check_run_limit()
            if session.paused:
                session.pump_commands()
                await asyncio.sleep(0.02)
                continue
            started = perf_counter()
            session.tick_once()
            rate = session.tick_rate
            if rate and rate > 0:
                await asyncio.sleep(max(0.0, 1.0 / rate - (perf_counter() - started)))
            else:
                await asyncio.sleep(0)

    # -- TCP endpoint ---------------------------------------------------------

    async def start_tcp(self, host: str, port: int) -> asyncio.AbstractServer:
        server = await asyncio.start_server(self._tcp_client, host, port)
        self._servers.append(server)
        return server

    async def _tcp_client(self, reader: asyncio.StreamReader,
                          writer: asyncio.StreamWriter) -> None:
        def sink(event: dict) -> None:
            writer.write(protocol.event_line(event).encode("utf-8") + b"\n")

        self.session.attach_client(sink)
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                text = line.decode("utf-8", errors="replace").strip()
                if not text:
                    continue
                self._handle_command_text(text, sink)
        except (ConnectionResetError, asyncio.IncompleteReadError):
            pass
        finally:
            self.session.detach_client(sink)
            writer.close()

    def _handle_command_text(self, text: str, sink) -> None:
        try:
            command = protocol.parse_command_line(text)
        except CommandError as exc:
            sink(protocol.make_event("error", self.session.clock.now,
                                     {"code": exc.code, "detail": exc.detail}))
            return
        self.session.enqueue_command(command, reply=sink)
        if self.session.paused:
            self.session.pump_commands()

    # -- HTTP / WebSocket endpoint ------------------------------------------

    async def start_ws(self, host: str, port: int) -> asyncio.AbstractServer:
        server = await asyncio.start_server(self._http_client, host, port)
        self._servers.append(server)
        return server

    async def _http_client(self, reader: asyncio.StreamReader,
                           writer: asyncio.StreamWriter) -> None:
        try:
            request = await reader.readuntil(b"\r\n\r\n")
        except (asyncio.IncompleteReadError, asyncio.LimitOverrunError):
            writer.close()
            return
        head = request.decode("latin-1")
        lines = head.split("\r\n")
        try:
            method, path, _ = lines[0].split(" ", 2)
        except ValueError:
            writer.close()
            return
        headers = {}
        for line in lines[1:]:
            if ":" in line:
                k, v = line.split(":", 1)
                headers[k.strip().lower()] = v.strip()

        if headers.get("upgrade", "").lower() == "websocket":
            await self._ws_session(reader, writer, headers)
        elif method == "GET":
            self._serve_static(writer, path)
        else:
            self._http_simple(writer, "405 Method Not Allowed", b"")
        writer.close()

    async def _ws_session(self, reader, writer, headers: dict) -> None:
        key = headers.get("sec-websocket-key")
        if not key:
            self._http_simple(writer, "400 Bad Request", b"missing websocket key")
            return
        accept = base64.b64encode(
            hashlib.sha1((key + _WS_GUID).encode("ascii")).digest()).decode("ascii")
        writer.write(("HTTP/1.1 101 Switching Protocols\r\n"
                      "Upgrade: websocket\r\n"
                      "Connection: Upgrade\r\n"
                      f"Sec-WebSocket-Accept: {accept}\r\n\r\n").encode("ascii"))

        def sink(event: dict) -> None:
            writer.write(_ws_text_frame(protocol.event_line(event)))

        self.session.attach_client(sink)
        try:
            async for message in _ws_messages(reader, writer):
                self._handle_command_text(message, sink)
        except (ConnectionResetError, asyncio.IncompleteReadError):
            pass
        finally:
            self.session.detach_client(sink)

    def _serve_static(self, writer, path: str) -> None:
        if self.static_dir is None:
            self._http_simple(writer, "404 Not Found", b"no static files configured")
            return
        rel = path.split("?", 1)[0].lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        root = self.static_dir.resolve()
        if root not in target.parents and target != root:
            self._http_simple(writer, "403 Forbidden", b"")
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._http_simple(writer, "404 Not Found", b"")
            return
        body = target.read_bytes()
        ctype = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        writer.write((f"HTTP/1.1 200 OK\r\nContent-Type: {ctype}\r\n"
                      f"Content-Length: {len(body)}\r\n"
                      "Connection: close\r\n\r\n").encode("ascii") + body)

    @staticmethod
    def _http_simple(writer, status: str, body: bytes) -> None:
        writer.write((f"HTTP/1.1 {status}\r\nContent-Length: {len(body)}\r\n"
                      "Connection: close\r\n\r\n").encode("ascii") + body)

    async def close(self) -> None:
        for server in self._servers:
            server.close()
            await server.wait_closed()
        self._servers.clear()


# -- RFC 6455 framing (server side, text only) ------------------------------

def _ws_text_frame(text: str) -> bytes:
    payload = text.encode("utf-8")
    n = len(payload)
    if n < 126:
        header = struct.pack("!BB", 0x81, n)
    elif n < 65536:
        header = struct.pack("!BBH", 0x81, 126, n)
    else:
        header = struct.pack("!BBQ", 0x81, 127, n)
    return header + payload


async def _ws_messages(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
    """Yield complete text messages; answer pings; stop on close."""
    buffer = b""
    while True:
        head = await reader.readexactly(2)
        fin = head[0] & 0x80
        opcode = head[0] & 0x0F
        masked = head[1] & 0x80
        length = head[1] & 0x7F
        if length == 126:
            length = struct.unpack("!H", await reader.readexactly(2))[0]
        elif length == 127:
            length = struct.unpack("!Q", await reader.readexactly(8))[0]
        mask = await reader.readexactly(4) if masked else b"\x00" * 4
        payload = await reader.readexactly(length) if length else b""
        if masked:
            payload = bytes(b ^ mask[i % 4] for i, b in enumerate(payload))

        if opcode == 0x8:  # close
            writer.write(struct.pack("!BB", 0x88, 0))
            return
        if opcode == 0x9:  # ping -> pong
            writer.write(struct.pack("!BB", 0x8A, len(payload)) + payload)
            continue
        if opcode in (0x1, 0x0):  # text or continuation
            buffer += payload
            if fin:
                message = buffer.decode("utf-8", errors="replace")
                buffer = b""
                if message.strip():
                    yield message


async def serve(session: Session, tcp: Optional[tuple[str, int]] = None,
                ws: Optional[tuple[str, int]] = None, static_dir=None) -> None:
    """Start the requested listeners and drive the session until cancelled."""
    server = SessionServer(session, static_dir=static_dir)
    if tcp is not None:
        await server.start_tcp(*tcp)
    if ws is not None:
        await server.start_ws(*ws)
    try:
        await server.run_loop()
    finally:
        await server.close()
