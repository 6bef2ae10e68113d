"""Chat relay with inline detection.

Two chatters join a session by id and exchange text frames; every
message runs through the monitor, the original text is relayed to the
counterpart, and YES/SPC findings follow it as alert frames to the same
counterpart (the victim). Frames are JSON objects, one per line on raw
TCP, one per WebSocket message. A counterpart who has not joined yet
gets the backlog on join. Detection failures never hold a message back:
the frame goes out flagged degraded and the alerts are dropped.
"""

from __future__ import annotations

import asyncio
import json
import logging
import time
from dataclasses import dataclass, field

import websockets

from .monitor import ChatMessage, Monitor
from .stores import Stores

log = logging.getLogger(__name__)

NO_SESSION = "NO_SESSION"
SESSION_FULL = "SESSION_FULL"
BAD_FRAME = "BAD_FRAME"


class Peer:
    """One connected client, transport-agnostic."""

    def __init__(self, send_text):
        self._send_text = send_text
        self.session_id: str | None = None
        self.who: str | None = None

    async def send(self, frame: dict) -> None:
        try:
            await self._send_text(json.dumps(frame, ensure_ascii=False))
        except Exception:
            log.debug("dropped frame to %s", self.who, exc_info=True)


@dataclass
class Session:
    session_id: str
    next_seq: int = 1
    peers: dict[str, Peer | None] = field(default_factory=dict)
    backlog: dict[str, list[dict]] = field(default_factory=dict)
    # frames sent before the second party ever joined, tagged by sender
    pending: list[tuple[str, dict]] = field(default_factory=list)
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)

    def counterpart_of(self, who: str) -> str | None:
        for name in self.peers:
            if name != who:
                return name
        return None


class Relay:
    def __init__(self, stores: Stores, monitor: Monitor | None = None):
        self.stores = stores
        self.monitor = monitor or Monitor(stores)
        self.sessions: dict[str, Session] = {}

    # --- frame handling ---------------------------------------------------

    async def handle_frame(self, peer: Peer, raw: str) -> None:
        raw = raw.strip()
        if not raw:
            return
        try:
            frame = json.loads(raw)
            kind = frame["type"]
        except (ValueError, KeyError, TypeError):
            await peer.send({"type": "error", "code": BAD_FRAME})
            return
        if kind == "join":
            await self._join(peer, frame)
        elif kind == "msg":
            await self._message(peer, frame)
        else:
            await peer.send({"type": "error", "code": BAD_FRAME})

    async def _join(self, peer: Peer, frame: dict) -> None:
        session_id = str(frame.get("session", ""))
        who = str(frame.get("who", ""))
        if not session_id or not who:
            await peer.send({"type": "error", "code": BAD_FRAME})
            return
        session = self.sessions.setdefault(session_id, Session(session_id))
        if who not in session.peers and len(session.peers) >= 2:
            await peer.send({"type": "error", "code": SESSION_FULL})
            return
        session.peers[who] = peer
        peer.session_id = session_id
        peer.who = who
        await peer.send({"type": "joined", "session": session_id, "who": who})
        for frame in session.backlog.pop(who, []):
            await peer.send(frame)
        if session.pending:
            keep = []
            for sender, frame in session.pending:
                if sender == who:
                    keep.append((sender, frame))
                else:
                    await peer.send(frame)
            session.pending = keep

    async def _message(self, peer: Peer, frame: dict) -> None:
        if peer.session_id is None or peer.who is None:
            await peer.send({"type": "error", "code": NO_SESSION})
            return
        text = str(frame.get("text", ""))
        if not text.strip():
            await peer.send({"type": "error", "code": BAD_FRAME})
            return
        session = self.sessions[peer.session_id]
        async with session.lock:
            seq = session.next_seq
            session.next_seq += 1
            counterpart = session.counterpart_of(peer.who)
            msg = ChatMessage(
                session_id=session.session_id,
                seq=seq,
                sender=peer.who,
                text=text,
                ts=int(time.time() * 1000),
            )
            result, alerts = self.monitor.process_message(msg, counterpart or "peer")

            out = {"type": "msg", "who": peer.who, "seq": seq, "text": text}
            if result.degraded:
                out["degraded"] = True
            frames = [out]
            for alert in alerts:
                frames.append(
                    {
                        "type": "alert",
                        "seq": seq,
                        "keyword": alert.surface,
                        "stem": alert.keyword,
                        "label": alert.label,
                        "color": alert.color,
                    }
                )
            await self._deliver(session, counterpart, peer.who, frames)

    async def _deliver(
        self, session: Session, who: str | None, sender: str, frames: list[dict]
    ) -> None:
        if who is None:
            session.pending.extend((sender, frame) for frame in frames)
            return
        target = session.peers.get(who)
        if target is None:
            session.backlog.setdefault(who, []).extend(frames)
            return
        for frame in frames:
            await target.send(frame)

    def drop_peer(self, peer: Peer) -> None:
        if peer.session_id is None or peer.who is None:
            return
        session = self.sessions.get(peer.session_id)
        if session and session.peers.get(peer.who) is peer:
            # keep the registration for backlog buffering, lose the pipe
            session.peers[peer.who] = None

    # --- transports ---------------------------------------------------------

    async def _serve_tcp(self, reader, writer) -> None:
        async def send_text(text: str) -> None:
            writer.write(text.encode("utf-8") + b"\n")
            await writer.drain()

        peer = Peer(send_text)
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                await self.handle_frame(peer, line.decode("utf-8", "replace"))
        except ConnectionError:
            pass
        finally:
            self.drop_peer(peer)
            writer.close()

    async def _serve_ws(self, connection) -> None:
        peer = Peer(connection.send)
        try:
            async for message in connection:
                if isinstance(message, bytes):
                    message = message.decode("utf-8", "replace")
                await self.handle_frame(peer, message)
        except websockets.ConnectionClosed:
            pass
        finally:
            self.drop_peer(peer)


@dataclass
class RelayHandles:
    relay: Relay
    tcp_port: int
    ws_port: int
    _tcp_server: object
    _ws_server: object

    async def close(self) -> None:
        self._tcp_server.close()
        await self._tcp_server.wait_closed()
        self._ws_server.close(close_connections=True)
        await self._ws_server.wait_closed()


async def start(
    stores: Stores,
    host: str = "127.0.0.1",
    tcp_port: int = 0,
    ws_port: int = 0,
    monitor: Monitor | None = None,
) -> RelayHandles:
    relay = Relay(stores, monitor)
    tcp_server = await asyncio.start_server(relay._serve_tcp, host, tcp_port)
    actual_tcp = tcp_server.sockets[0].getsockname()[1]
    ws_server = await websockets.serve(relay._serve_ws, host, ws_port)
    actual_ws = next(iter(ws_server.sockets)).getsockname()[1]
    return RelayHandles(relay, actual_tcp, actual_ws, tcp_server, ws_server)


async def serve_forever(
    stores_dir: str,
    host: str = "127.0.0.1",
    tcp_port: int = 9009,
    ws_port: int | None = None,
) -> None:
    with Stores(stores_dir) as stores:
        handles = await start(
            stores,
            host=host,
            tcp_port=tcp_port,
            ws_port=ws_port if ws_port is not None else (tcp_port + 1 if tcp_port else 0),
        )
        print(
            json.dumps(
                {"event": "ready", "tcp_port": handles.tcp_port, "ws_port": handles.ws_port}
            ),
            flush=True,
        )
        try:
            await asyncio.Event().wait()
        finally:
            await handles.close()
