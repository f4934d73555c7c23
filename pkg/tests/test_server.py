from __future__ import annotations

import socket
import struct

import pytest

from charta11y.config import config_hash, load_config
from charta11y.events import InputEvent
from charta11y.server import EngineServer, read_frame, send_frame
from charta11y.trace import TraceFile, parse_transcript, replay_trace

HEADER = struct.Struct(">I")


class Client:
    def __init__(self, port):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=5)

    def send(self, payload):
        send_frame(self.sock, payload)

    def send_event(self, seq, event: InputEvent):
        self.send({"type": "event", "seq": seq, "event": event.to_json()})

    def send_raw(self, data: bytes):
        self.sock.sendall(HEADER.pack(len(data)) + data)

    def recv(self):
        return read_frame(self.sock)

    def close(self):
        self.sock.close()


@pytest.fixture
def server(sample_dir):
    cfg = load_config(sample_dir / "penguins.config.json")
    srv = EngineServer(cfg, port=0)
    srv.start_background()
    yield srv
    srv.stop()


@pytest.fixture
def line_server(sample_dir):
    cfg = load_config(sample_dir / "daily_cases.config.json")
    srv = EngineServer(cfg, port=0)
    srv.start_background()
    yield srv
    srv.stop()


class TestProtocol:
    def test_hello_carries_snapshot_and_open_narration(self, server):
        c = Client(server.port)
        hello = c.recv()
        assert hello["type"] == "hello"
        assert hello["protocol_version"] == 1
        assert hello["config_hash"] == server.cfg_hash
        assert hello["snapshot"]["mode"] == "SNF"
        assert len(hello["snapshot"]["points"]) == 45
        assert hello["feedback"][0]["kind"] == "speech"
        c.close()

    def test_zone_touch_speaks_x_axis_area(self, server):
        c = Client(server.port)
        c.recv()
        c.send_event(1, InputEvent("double_tap", 10))
        resp = c.recv()
        assert resp["type"] == "feedback" and resp["seq"] == 1
        assert resp["feedback"][0]["text"] == "X axis area"
        # bottom-left quadrant holds the x axis zone
        c.send_event(2, InputEvent("touch_down", 20, position=(10.0, 790.0)))
        resp = c.recv()
        assert resp["seq"] == 2
        assert resp["feedback"][0]["text"] == "X axis area"
        c.close()

    def test_stale_sequence_number_errors(self, server):
        c = Client(server.port)
        c.recv()
        c.send_event(5, InputEvent("double_tap", 10))
        assert c.recv()["seq"] == 5
        c.send_event(5, InputEvent("double_tap", 20))
        resp = c.recv()
        assert resp["type"] == "error"
        assert "sequence" in resp["message"]
        c.close()

    def test_malformed_frame_errors(self, server):
        c = Client(server.port)
        c.recv()
        c.send_raw(b"this is not json")
        resp = c.recv()
        assert resp["type"] == "error"
        assert c.recv() is None  # connection closed
        c.close()

    def test_bad_event_errors(self, server):
        c = Client(server.port)
        c.recv()
        c.send({"type": "event", "seq": 1,
                "event": {"kind": "teleport", "time": 1}})
        assert c.recv()["type"] == "error"
        c.close()

    def test_time_regression_errors(self, server):
        c = Client(server.port)
        c.recv()
        c.send_event(1, InputEvent("double_tap", 100))
        c.recv()
        c.send_event(2, InputEvent("double_tap", 50))
        assert c.recv()["type"] == "error"
        c.close()

    def test_throttled_move_answers_empty_batch(self, line_server):
        c = Client(line_server.port)
        c.recv()
        c.send_event(1, InputEvent("double_tap_hold_move", 0,
                                   direction="hold"))
        mode = c.recv()
        assert mode["feedback"][0]["kind"] == "mode_announcement"
        c.send_event(2, InputEvent("touch_down", 10, position=(40.0, 400.0)))
        first = c.recv()
        assert any(f["kind"] == "tone" for f in first["feedback"])
        c.send_event(3, InputEvent("touch_move", 20, position=(60.0, 400.0)))
        second = c.recv()
        assert second["feedback"] == []  # inside the throttle window
        c.close()

    def test_snapshot_included_when_layout_changes(self, server):
        c = Client(server.port)
        c.recv()
        c.send_event(1, InputEvent("double_tap", 10))
        resp = c.recv()
        assert "snapshot" in resp
        assert len(resp["snapshot"]["regions"]) == 4
        c.send_event(2, InputEvent("touch_down", 20, position=(10.0, 790.0)))
        resp = c.recv()
        assert "snapshot" not in resp  # same page, nothing moved
        c.close()

    def test_two_concurrent_sessions_independent(self, server):
        a, b = Client(server.port), Client(server.port)
        a.recv(), b.recv()
        a.send_event(1, InputEvent("double_tap", 5))
        assert a.recv()["feedback"][0]["text"] == "X axis area"
        # b still at the overview: a touch repeats the overview text
        b.send_event(1, InputEvent("touch_down", 5, position=(10.0, 10.0)))
        assert "Penguin" in b.recv()["feedback"][0]["text"]
        a.close(), b.close()


class TestServeReplayEquivalence:
    def test_same_feedback_stream(self, sample_dir, server):
        cfg = load_config(sample_dir / "penguins.config.json")
        events = [
            InputEvent("double_tap", 10),
            InputEvent("touch_down", 20, position=(10.0, 790.0)),
            InputEvent("touch_up", 30, position=(10.0, 790.0)),
            InputEvent("double_tap", 40),
            InputEvent("swipe", 50, direction="right"),
            InputEvent("double_tap_hold_move", 60, direction="hold"),
            InputEvent("touch_down", 70, position=(100.0, 300.0)),
            InputEvent("touch_move", 200, position=(160.0, 320.0)),
            InputEvent("touch_up", 300, position=(160.0, 320.0)),
        ]
        trace = TraceFile(config_hash=config_hash(cfg), events=tuple(events))
        _, records = parse_transcript(replay_trace(cfg, trace))
        replay_batches = [[fb.to_json() for fb in rec.feedback]
                          for rec in records]

        c = Client(server.port)
        hello = c.recv()
        live_batches = [hello["feedback"]]
        for seq, event in enumerate(events, start=1):
            c.send_event(seq, event)
            live_batches.append(c.recv()["feedback"])
        c.close()
        assert live_batches == replay_batches
