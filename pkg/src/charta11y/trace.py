"""Trace recording and deterministic replay.

A trace file is a versioned JSON document of input events tied to a config
hash; a transcript is the canonical line-oriented record of every feedback
batch.  Replaying the same trace against the same config always produces
byte-identical transcript text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .config import SessionConfig, build_session, canonical_json, config_hash
from .events import EventError, FeedbackEvent, InputEvent

TRACE_VERSION = 1
TRANSCRIPT_VERSION = 1


class TraceError(ValueError):
    """A trace or transcript document is malformed."""


@dataclass(frozen=True)
class TraceFile:
    config_hash: str
    events: tuple[InputEvent, ...]
    format_version: int = TRACE_VERSION


def trace_to_json(trace: TraceFile) -> dict:
    return {"format_version": trace.format_version,
            "config_hash": trace.config_hash,
            "events": [e.to_json() for e in trace.events]}


def parse_trace(doc: dict) -> TraceFile:
    if not isinstance(doc, dict):
        raise TraceError("trace must be a JSON object")
    if doc.get("format_version") != TRACE_VERSION:
        raise TraceError(
            f"unsupported trace format_version {doc.get('format_version')!r}")
    if "config_hash" not in doc or "events" not in doc:
        raise TraceError("trace requires config_hash and events")
    events = []
    last_time = None
    for i, record in enumerate(doc["events"]):
        try:
            ev = InputEvent.from_json(record)
        except EventError as exc:
            raise TraceError(f"bad event at record {i}: {exc}") from None
        if last_time is not None and ev.time < last_time:
            raise TraceError(f"timestamps decrease at record {i}")
        last_time = ev.time
        events.append(ev)
    return TraceFile(config_hash=str(doc["config_hash"]),
                     events=tuple(events))


def load_trace(path: str | Path) -> TraceFile:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise TraceError(f"cannot read trace {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise TraceError(f"invalid JSON in {path}: {exc}") from None
    return parse_trace(doc)


def save_trace(path: str | Path, trace: TraceFile) -> None:
    Path(path).write_text(
        json.dumps(trace_to_json(trace), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


@dataclass(frozen=True)
class TranscriptRecord:
    input_index: int | None  # None marks the session-open announcement
    feedback: tuple[FeedbackEvent, ...]


def render_transcript(cfg_hash: str,
                      records: list[TranscriptRecord]) -> str:
    """Canonical transcript text: one JSON object per line, sorted keys."""
    lines = [canonical_json({"type": "header",
                             "format_version": TRANSCRIPT_VERSION,
                             "config_hash": cfg_hash})]
    for rec in records:
        lines.append(canonical_json({
            "type": "record",
            "input_index": rec.input_index,
            "feedback": [fb.to_json() for fb in rec.feedback]}))
    return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> tuple[dict, list[TranscriptRecord]]:
    lines = [line for line in text.split("\n") if line]
    if not lines:
        raise TraceError("empty transcript")
    header = json.loads(lines[0])
    if header.get("type") != "header":
        raise TraceError("transcript must start with a header line")
    records = []
    for line in lines[1:]:
        doc = json.loads(line)
        if doc.get("type") != "record":
            raise TraceError("unexpected transcript line")
        records.append(TranscriptRecord(
            input_index=doc["input_index"],
            feedback=tuple(FeedbackEvent.from_json(f)
                           for f in doc["feedback"])))
    return header, records


def run_events(cfg: SessionConfig,
               events: list[InputEvent]) -> list[TranscriptRecord]:
    """Feed events through a fresh session, collecting feedback batches."""
    session = build_session(cfg)
    records = [TranscriptRecord(None, tuple(session.open_feedback()))]
    for i, event in enumerate(events):
        records.append(TranscriptRecord(i, tuple(session.dispatch(event))))
    return records


def replay_trace(cfg: SessionConfig, trace: TraceFile,
                 force: bool = False) -> str:
    """Replay a trace against a config, returning canonical transcript text.

    The trace's config hash must match unless ``force`` is given.
    """
    actual = config_hash(cfg)
    if trace.config_hash != actual and not force:
        raise TraceError(
            f"trace was recorded against config {trace.config_hash[:12]}..., "
            f"given config hashes to {actual[:12]}... (use --force to"
            " override)")
    return render_transcript(actual, run_events(cfg, list(trace.events)))
