/**
 * Pointer-stream gesture recognizer.
 *
 * Drags become touch_down/touch_move/touch_up (finger reading), quick flicks
 * become swipes, double clicks become double_tap, two-pointer spreads become
 * pinch, and a quick second-finger tap during a drag becomes split_tap.
 * Everything else (rotors, z-scrub, three-finger swipes, rapid-jump holds)
 * comes from the on-screen gesture palette, which calls emit() directly.
 *
 * The recognizer is fully deterministic: it consumes timestamped samples and
 * an explicit tick(now) heartbeat instead of wall-clock timers.
 */

import { InputEvent, SwipeDirection } from "./protocol.js";

export interface PointerSample {
  pointerId: number;
  type: "down" | "move" | "up";
  x: number;
  y: number;
  t: number; // milliseconds
}

// Documented recognizer constants.
export const SWIPE_MIN_SPEED_PX_S = 300; // mean speed that makes a flick
export const FLICK_MAX_MS = 300;         // a flick must finish this fast
export const FLICK_MIN_DIST_PX = 24;
export const TAP_SLOP_PX = 12;
export const TAP_MAX_MS = 250;
export const DOUBLE_TAP_WINDOW_MS = 300;
export const PINCH_EMIT_RATIO = 0.02;    // min |scale-1| between pinch events

type Phase = "idle" | "pending" | "panning" | "pinch_candidate" | "pinching"
  | "draining";

interface PendingTap {
  x: number;
  y: number;
  upT: number;
}

export class GestureRecognizer {
  private phase: Phase = "idle";
  private emit: (event: InputEvent) => void;

  private pointerId = -1;
  private downX = 0;
  private downY = 0;
  private downT = 0;
  private lastX = 0;
  private lastY = 0;
  private moves: PointerSample[] = [];
  private isSecondTap = false;
  private pendingTap: PendingTap | null = null;

  private secondId = -1;
  private secondDownT = 0;
  private secondStart: [number, number] = [0, 0];
  private pinchStartDist = 0;
  private pinchLastEmitDist = 0;
  private firstPos: [number, number] = [0, 0];
  private secondPos: [number, number] = [0, 0];

  constructor(emit: (event: InputEvent) => void) {
    this.emit = emit;
  }

  /** Flush time-based decisions (single taps waiting on a double). */
  tick(now: number): void {
    if (this.pendingTap && now - this.pendingTap.upT > DOUBLE_TAP_WINDOW_MS) {
      const tap = this.pendingTap;
      this.pendingTap = null;
      this.emit({ kind: "touch_down", time: tap.upT,
                  position: [tap.x, tap.y] });
      this.emit({ kind: "touch_up", time: tap.upT,
                  position: [tap.x, tap.y] });
    }
  }

  handle(sample: PointerSample): void {
    switch (this.phase) {
      case "idle":
        if (sample.type === "down") this.beginTouch(sample);
        break;
      case "pending":
        this.handlePending(sample);
        break;
      case "panning":
        this.handlePanning(sample);
        break;
      case "pinch_candidate":
      case "pinching":
        this.handlePinch(sample);
        break;
      case "draining":
        if (sample.type === "up") this.phase = "idle";
        break;
    }
  }

  private beginTouch(sample: PointerSample): void {
    this.pointerId = sample.pointerId;
    this.downX = this.lastX = sample.x;
    this.downY = this.lastY = sample.y;
    this.downT = sample.t;
    this.moves = [];
    this.isSecondTap =
      this.pendingTap !== null &&
      sample.t - this.pendingTap.upT <= DOUBLE_TAP_WINDOW_MS &&
      Math.hypot(sample.x - this.pendingTap.x,
                 sample.y - this.pendingTap.y) <= 2 * TAP_SLOP_PX;
    if (!this.isSecondTap && this.pendingTap) this.tick(sample.t + 1e9);
    this.phase = "pending";
  }

  private handlePending(sample: PointerSample): void {
    if (sample.type === "down" && sample.pointerId !== this.pointerId) {
      // a second finger settles the question: this is direct touch
      this.becomePan();
      this.beginSecondPointer(sample);
      return;
    }
    if (sample.pointerId !== this.pointerId) return;

    if (sample.type === "move") {
      this.moves.push(sample);
      this.lastX = sample.x;
      this.lastY = sample.y;
      const dist = Math.hypot(sample.x - this.downX, sample.y - this.downY);
      const dt = sample.t - this.downT;
      const slowDrag = dist > FLICK_MIN_DIST_PX &&
        (dt > 0 ? (dist / dt) * 1000 : 0) < SWIPE_MIN_SPEED_PX_S;
      if (dt > FLICK_MAX_MS || slowDrag) this.becomePan();
      return;
    }
    if (sample.type === "up") {
      const dt = sample.t - this.downT;
      const dx = sample.x - this.downX;
      const dy = sample.y - this.downY;
      const dist = Math.hypot(dx, dy);
      const speed = dt > 0 ? (dist / dt) * 1000 : Infinity;
      if (dt <= FLICK_MAX_MS && dist >= FLICK_MIN_DIST_PX &&
          speed >= SWIPE_MIN_SPEED_PX_S) {
        this.emit({ kind: "swipe", time: sample.t,
                    direction: this.swipeDirection(dx, dy) });
        this.pendingTap = null;
      } else if (dt <= TAP_MAX_MS && dist <= TAP_SLOP_PX) {
        if (this.isSecondTap) {
          this.pendingTap = null;
          this.emit({ kind: "double_tap", time: sample.t });
        } else {
          this.pendingTap = { x: this.downX, y: this.downY, upT: sample.t };
        }
      } else {
        // slow short drag: replay it as finger reading
        this.becomePan();
        this.emit({ kind: "touch_up", time: sample.t,
                    position: [sample.x, sample.y] });
      }
      this.phase = "idle";
    }
  }

  private becomePan(): void {
    this.emit({ kind: "touch_down", time: this.downT,
                position: [this.downX, this.downY] });
    for (const move of this.moves) {
      this.emit({ kind: "touch_move", time: move.t,
                  position: [move.x, move.y] });
    }
    this.moves = [];
    this.phase = "panning";
  }

  private handlePanning(sample: PointerSample): void {
    if (sample.type === "down" && sample.pointerId !== this.pointerId) {
      this.beginSecondPointer(sample);
      return;
    }
    if (sample.pointerId !== this.pointerId) return;
    if (sample.type === "move") {
      this.lastX = sample.x;
      this.lastY = sample.y;
      this.emit({ kind: "touch_move", time: sample.t,
                  position: [sample.x, sample.y] });
    } else if (sample.type === "up") {
      this.emit({ kind: "touch_up", time: sample.t,
                  position: [sample.x, sample.y] });
      this.phase = "idle";
    }
  }

  private beginSecondPointer(sample: PointerSample): void {
    this.secondId = sample.pointerId;
    this.secondDownT = sample.t;
    this.secondStart = [sample.x, sample.y];
    this.firstPos = [this.lastX, this.lastY];
    this.secondPos = [sample.x, sample.y];
    this.pinchStartDist = Math.hypot(sample.x - this.lastX,
                                     sample.y - this.lastY);
    this.pinchLastEmitDist = this.pinchStartDist;
    this.phase = "pinch_candidate";
  }

  private handlePinch(sample: PointerSample): void {
    if (sample.type === "move") {
      if (sample.pointerId === this.pointerId) {
        this.firstPos = [sample.x, sample.y];
      } else if (sample.pointerId === this.secondId) {
        this.secondPos = [sample.x, sample.y];
      } else {
        return;
      }
      const dist = Math.hypot(this.firstPos[0] - this.secondPos[0],
                              this.firstPos[1] - this.secondPos[1]);
      if (this.phase === "pinch_candidate") {
        const secondMoved = Math.hypot(
          this.secondPos[0] - this.secondStart[0],
          this.secondPos[1] - this.secondStart[1]);
        if (secondMoved > TAP_SLOP_PX ||
            Math.abs(dist - this.pinchStartDist) > TAP_SLOP_PX ||
            sample.t - this.secondDownT > TAP_MAX_MS) {
          this.phase = "pinching";
        } else {
          return;
        }
      }
      if (this.pinchLastEmitDist > 0 && dist > 0) {
        const scale = dist / this.pinchLastEmitDist;
        if (Math.abs(scale - 1) >= PINCH_EMIT_RATIO) {
          const mid: [number, number] = [
            (this.firstPos[0] + this.secondPos[0]) / 2,
            (this.firstPos[1] + this.secondPos[1]) / 2,
          ];
          this.emit({ kind: "pinch", time: sample.t, position: mid, scale });
          this.pinchLastEmitDist = dist;
        }
      }
      return;
    }
    if (sample.type === "up") {
      if (this.phase === "pinch_candidate" &&
          sample.pointerId === this.secondId &&
          sample.t - this.secondDownT <= TAP_MAX_MS) {
        // quick second-finger tap while the first is held: split tap
        this.emit({ kind: "split_tap", time: sample.t,
                    position: [this.lastX, this.lastY] });
        this.phase = "panning";
        return;
      }
      // any pointer lifting ends the pinch: if the primary finger lifted,
      // swallow the leftover pointer; otherwise the pan continues
      this.phase = sample.pointerId === this.pointerId ? "draining" : "panning";
    }
  }

  private swipeDirection(dx: number, dy: number): SwipeDirection {
    if (Math.abs(dx) >= Math.abs(dy)) return dx >= 0 ? "right" : "left";
    return dy >= 0 ? "down" : "up";
  }
}

/** Palette actions: every gesture a mouse cannot perform, as direct events. */
export const PALETTE_ACTIONS: ReadonlyArray<{
  id: string;
  label: string;
  event: Omit<InputEvent, "time">;
}> = [
  { id: "rotor-next", label: "Rotor next",
    event: { kind: "rotor_rotate", direction: "cw" } },
  { id: "rotor-prev", label: "Rotor previous",
    event: { kind: "rotor_rotate", direction: "ccw" } },
  { id: "flick-up", label: "Rotor flick up",
    event: { kind: "rotor_flick", direction: "up" } },
  { id: "flick-down", label: "Rotor flick down",
    event: { kind: "rotor_flick", direction: "down" } },
  { id: "z-scrub", label: "Back (z-scrub)", event: { kind: "z_scrub" } },
  { id: "page-next", label: "Next page",
    event: { kind: "three_finger_swipe", direction: "left" } },
  { id: "page-prev", label: "Previous page",
    event: { kind: "three_finger_swipe", direction: "right" } },
  { id: "jump-x", label: "Jump to X axis",
    event: { kind: "double_tap_hold_move", direction: "down" } },
  { id: "jump-y", label: "Jump to Y axis",
    event: { kind: "double_tap_hold_move", direction: "up" } },
  { id: "jump-data", label: "Jump to data points",
    event: { kind: "double_tap_hold_move", direction: "right" } },
  { id: "jump-filters", label: "Jump to filters",
    event: { kind: "double_tap_hold_move", direction: "left" } },
  { id: "mode-switch", label: "Switch mode",
    event: { kind: "double_tap_hold_move", direction: "hold" } },
];
