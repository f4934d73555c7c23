/**
 * Wire protocol shared with the engine: 4-byte big-endian length prefix,
 * UTF-8 JSON payloads, one feedback frame per event sequence number.
 */

export interface ToneSpec {
  pitch_hz: number;
  duration_ms: number;
  timbre: string;
  gap_after_ms: number;
}

export interface FeedbackEvent {
  kind: "speech" | "tone" | "tone_sequence" | "haptic" | "mode_announcement";
  time: number;
  text?: string;
  tone?: ToneSpec;
  tones?: ToneSpec[];
  pulses?: number;
}

export type SwipeDirection = "left" | "right" | "up" | "down";

export interface InputEvent {
  kind: string;
  time: number;
  position?: [number, number];
  direction?: string;
  scale?: number;
}

export interface SnapshotPoint {
  id: number;
  series: number;
  x: number;
  y: number;
  visible: boolean;
}

export interface SnapshotRegion {
  node: string;
  label: string;
  rect: [number, number, number, number];
  focused: boolean;
}

export interface Snapshot {
  mode: "SNF" | "DTM";
  kind: string;
  title: string;
  x_label: string;
  y_label: string;
  series_names: string[];
  screen: [number, number];
  viewport: [number, number, number, number];
  page: { index: number; count: number };
  sonification_on: boolean;
  active_series: number | null;
  filters: boolean[];
  points: SnapshotPoint[];
  regions: SnapshotRegion[];
}

export interface HelloFrame {
  type: "hello";
  protocol_version: number;
  config_hash: string;
  snapshot: Snapshot;
  feedback: FeedbackEvent[];
}

export interface FeedbackFrame {
  type: "feedback";
  seq: number;
  feedback: FeedbackEvent[];
  snapshot?: Snapshot;
}

export interface ErrorFrame {
  type: "error";
  seq?: number;
  message: string;
}

export type ServerFrame = HelloFrame | FeedbackFrame | ErrorFrame;

export function encodeFrame(payload: unknown): Uint8Array<ArrayBuffer> {
  const body = new TextEncoder().encode(JSON.stringify(payload));
  const out = new Uint8Array(4 + body.length);
  new DataView(out.buffer).setUint32(0, body.length, false);
  out.set(body, 4);
  return out;
}

/** Incremental decoder: feed byte chunks, get complete JSON frames out. */
export class FrameDecoder {
  private buffer = new Uint8Array(0);

  push(chunk: Uint8Array): unknown[] {
    const merged = new Uint8Array(this.buffer.length + chunk.length);
    merged.set(this.buffer, 0);
    merged.set(chunk, this.buffer.length);
    this.buffer = merged;

    const frames: unknown[] = [];
    for (;;) {
      if (this.buffer.length < 4) break;
      const view = new DataView(this.buffer.buffer, this.buffer.byteOffset);
      const length = view.getUint32(0, false);
      if (this.buffer.length < 4 + length) break;
      const body = this.buffer.subarray(4, 4 + length);
      frames.push(JSON.parse(new TextDecoder().decode(body)));
      this.buffer = this.buffer.slice(4 + length);
    }
    return frames;
  }
}

export function eventFrame(seq: number,
                           event: InputEvent): Uint8Array<ArrayBuffer> {
  return encodeFrame({ type: "event", seq, event });
}
