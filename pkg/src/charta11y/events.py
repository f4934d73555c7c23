"""Abstract input-event and feedback-event vocabulary.

The engine consumes recognized gestures, not raw multi-touch frames, so any
client that can name a gesture can drive it.  Both event families have a
canonical JSON form used by traces, transcripts, and the wire protocol.
"""

from __future__ import annotations

from dataclasses import dataclass

from .sonification import ToneSpec

TOUCH_DOWN = "touch_down"
TOUCH_MOVE = "touch_move"
TOUCH_UP = "touch_up"
SWIPE = "swipe"
DOUBLE_TAP = "double_tap"
DOUBLE_TAP_HOLD_MOVE = "double_tap_hold_move"
Z_SCRUB = "z_scrub"
ROTOR_ROTATE = "rotor_rotate"
ROTOR_FLICK = "rotor_flick"
PINCH = "pinch"
SPLIT_TAP = "split_tap"
THREE_FINGER_SWIPE = "three_finger_swipe"

EVENT_KINDS = frozenset({
    TOUCH_DOWN, TOUCH_MOVE, TOUCH_UP, SWIPE, DOUBLE_TAP,
    DOUBLE_TAP_HOLD_MOVE, Z_SCRUB, ROTOR_ROTATE, ROTOR_FLICK, PINCH,
    SPLIT_TAP, THREE_FINGER_SWIPE,
})

_DIRECTIONS = {
    SWIPE: {"left", "right", "up", "down"},
    DOUBLE_TAP_HOLD_MOVE: {"left", "right", "up", "down", "hold"},
    ROTOR_ROTATE: {"cw", "ccw"},
    ROTOR_FLICK: {"up", "down"},
    THREE_FINGER_SWIPE: {"left", "right"},
}

_NEEDS_POSITION = {TOUCH_DOWN, TOUCH_MOVE, TOUCH_UP, PINCH, SPLIT_TAP}


class EventError(ValueError):
    """An input event is structurally invalid."""


@dataclass(frozen=True)
class InputEvent:
    kind: str
    time: int
    position: tuple[float, float] | None = None
    direction: str | None = None
    scale: float | None = None

    def validate(self) -> None:
        if self.kind not in EVENT_KINDS:
            raise EventError(f"unknown event kind {self.kind!r}")
        if self.kind in _DIRECTIONS:
            if self.direction not in _DIRECTIONS[self.kind]:
                raise EventError(
                    f"{self.kind} requires a direction in "
                    f"{sorted(_DIRECTIONS[self.kind])}")
        elif self.direction is not None:
            raise EventError(f"{self.kind} takes no direction")
        if self.kind in _NEEDS_POSITION and self.position is None:
            raise EventError(f"{self.kind} requires a position")
        if self.kind == PINCH:
            if self.scale is None or self.scale <= 0:
                raise EventError("pinch requires a positive scale")
        elif self.scale is not None:
            raise EventError(f"{self.kind} takes no scale")
        if self.time < 0:
            raise EventError("event time must be >= 0")

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind, "time": self.time}
        if self.position is not None:
            d["position"] = [self.position[0], self.position[1]]
        if self.direction is not None:
            d["direction"] = self.direction
        if self.scale is not None:
            d["scale"] = self.scale
        return d

    @classmethod
    def from_json(cls, d: dict) -> "InputEvent":
        try:
            pos = d.get("position")
            ev = cls(
                kind=str(d["kind"]),
                time=int(d["time"]),
                position=(float(pos[0]), float(pos[1])) if pos is not None else None,
                direction=d.get("direction"),
                scale=float(d["scale"]) if d.get("scale") is not None else None,
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise EventError(f"malformed input event: {exc}") from None
        ev.validate()
        return ev


FB_SPEECH = "speech"
FB_TONE = "tone"
FB_TONE_SEQUENCE = "tone_sequence"
FB_HAPTIC = "haptic"
FB_MODE = "mode_announcement"


@dataclass(frozen=True)
class FeedbackEvent:
    kind: str
    time: int
    text: str | None = None
    tone: ToneSpec | None = None
    tones: tuple[ToneSpec, ...] | None = None
    pulses: int | None = None

    @classmethod
    def speech(cls, text: str, time: int) -> "FeedbackEvent":
        return cls(FB_SPEECH, time, text=text)

    @classmethod
    def mode(cls, text: str, time: int) -> "FeedbackEvent":
        return cls(FB_MODE, time, text=text)

    @classmethod
    def single_tone(cls, tone: ToneSpec, time: int) -> "FeedbackEvent":
        return cls(FB_TONE, time, tone=tone)

    @classmethod
    def tone_sequence(cls, tones: list[ToneSpec], time: int) -> "FeedbackEvent":
        return cls(FB_TONE_SEQUENCE, time, tones=tuple(tones))

    @classmethod
    def haptic(cls, pulses: int, time: int) -> "FeedbackEvent":
        return cls(FB_HAPTIC, time, pulses=pulses)

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind, "time": self.time}
        if self.kind in (FB_SPEECH, FB_MODE):
            d["text"] = self.text
        elif self.kind == FB_TONE:
            d["tone"] = self.tone.to_json()
        elif self.kind == FB_TONE_SEQUENCE:
            d["tones"] = [t.to_json() for t in self.tones]
        elif self.kind == FB_HAPTIC:
            d["pulses"] = self.pulses
        return d

    @classmethod
    def from_json(cls, d: dict) -> "FeedbackEvent":
        kind, time = str(d["kind"]), int(d["time"])
        if kind in (FB_SPEECH, FB_MODE):
            return cls(kind, time, text=str(d["text"]))
        if kind == FB_TONE:
            return cls(kind, time, tone=ToneSpec.from_json(d["tone"]))
        if kind == FB_TONE_SEQUENCE:
            return cls(kind, time,
                       tones=tuple(ToneSpec.from_json(t) for t in d["tones"]))
        if kind == FB_HAPTIC:
            return cls(kind, time, pulses=int(d["pulses"]))
        raise EventError(f"unknown feedback kind {kind!r}")
