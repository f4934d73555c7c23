"""Length-prefixed TCP endpoint for live clients.

Frames are a 4-byte big-endian payload length followed by UTF-8 JSON.  Each
connection owns one fresh session: the server sends a hello frame (geometry
snapshot plus the session-open narration), then answers every inbound event
with exactly one feedback frame tagged with the event's sequence number.
Sequence numbers must strictly increase and event times must not go
backwards; violations get an error frame and the connection closes.
"""

from __future__ import annotations

import json
import logging
import socket
import struct
import threading

from .config import SessionConfig, build_session, config_hash
from .events import EventError, InputEvent

log = logging.getLogger("charta11y.server")

PROTOCOL_VERSION = 1
_HEADER = struct.Struct(">I")
MAX_FRAME_BYTES = 1 << 22


class ProtocolError(ValueError):
    pass


def send_frame(sock: socket.socket, payload: dict) -> None:
    data = json.dumps(payload, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")
    sock.sendall(_HEADER.pack(len(data)) + data)


def _recv_exact(sock: socket.socket, n: int) -> bytes | None:
    chunks = []
    got = 0
    while got < n:
        chunk = sock.recv(n - got)
        if not chunk:
            return None
        chunks.append(chunk)
        got += len(chunk)
    return b"".join(chunks)


def read_frame(sock: socket.socket) -> dict | None:
    """Read one frame; None on orderly disconnect."""
    header = _recv_exact(sock, _HEADER.size)
    if header is None:
        return None
    (length,) = _HEADER.unpack(header)
    if length > MAX_FRAME_BYTES:
        raise ProtocolError(f"frame of {length} bytes exceeds limit")
    body = _recv_exact(sock, length)
    if body is None:
        return None
    try:
        doc = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"undecodable frame: {exc}") from None
    if not isinstance(doc, dict):
        raise ProtocolError("frame payload must be a JSON object")
    return doc


class EngineServer:
    """One session per connection; sessions run concurrently and share
    nothing."""

    def __init__(self, cfg: SessionConfig, host: str = "127.0.0.1",
                 port: int = 0) -> None:
        self.cfg = cfg
        self.cfg_hash = config_hash(cfg)
        build_session(cfg)  # fail fast on bad config/dataset
        self._listener = socket.create_server((host, port))
        self.host, self.port = self._listener.getsockname()[:2]
        self._stopped = threading.Event()
        self._thread: threading.Thread | None = None

    def serve_forever(self) -> None:
        log.info("listening on %s:%d", self.host, self.port)
        while not self._stopped.is_set():
            try:
                conn, addr = self._listener.accept()
            except OSError:
                break  # listener closed
            log.info("client connected from %s", addr)
            threading.Thread(target=self._serve_client, args=(conn,),
                             daemon=True).start()

    def start_background(self) -> None:
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stopped.set()
        try:
            self._listener.shutdown(socket.SHUT_RDWR)  # wake a blocked accept
        except OSError:
            pass
        self._listener.close()
        if self._thread is not None:
            self._thread.join(timeout=2)

    def _serve_client(self, conn: socket.socket) -> None:
        try:
            with conn:
                self._session_loop(conn)
        except (ConnectionError, OSError) as exc:
            log.info("client connection lost: %s", exc)

    def _session_loop(self, conn: socket.socket) -> None:
        session = build_session(self.cfg)
        send_frame(conn, {
            "type": "hello",
            "protocol_version": PROTOCOL_VERSION,
            "config_hash": self.cfg_hash,
            "snapshot": session.snapshot(),
            "feedback": [fb.to_json() for fb in session.open_feedback()],
        })
        snapshot_key = session.snapshot_key()
        last_seq: int | None = None
        last_time: int | None = None
        while True:
            try:
                msg = read_frame(conn)
            except ProtocolError as exc:
                send_frame(conn, {"type": "error", "message": str(exc)})
                return
            if msg is None:
                return  # client went away; session is discarded
            if msg.get("type") != "event" or "seq" not in msg or "event" not in msg:
                send_frame(conn, {"type": "error",
                                  "message": "expected an event frame"})
                return
            seq = msg["seq"]
            if not isinstance(seq, int) or (last_seq is not None
                                            and seq <= last_seq):
                send_frame(conn, {"type": "error", "seq": seq,
                                  "message": f"stale sequence number {seq!r}"})
                return
            try:
                event = InputEvent.from_json(msg["event"])
            except EventError as exc:
                send_frame(conn, {"type": "error", "seq": seq,
                                  "message": str(exc)})
                return
            if last_time is not None and event.time < last_time:
                send_frame(conn, {"type": "error", "seq": seq,
                                  "message": "event time went backwards"})
                return
            last_seq, last_time = seq, event.time
            feedback = session.dispatch(event)
            response = {"type": "feedback", "seq": seq,
                        "feedback": [fb.to_json() for fb in feedback]}
            new_key = session.snapshot_key()
            if new_key != snapshot_key:
                snapshot_key = new_key
                response["snapshot"] = session.snapshot()
            send_frame(conn, response)


def serve(cfg: SessionConfig, port: int, host: str = "127.0.0.1") -> None:
    """Blocking entry point used by the CLI."""
    server = EngineServer(cfg, host=host, port=port)
    print(f"charta11y engine listening on {server.host}:{server.port}",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.stop()
