/**
 * Client session: owns the connection, sequence numbers, the transcript
 * log, and the fan-out of feedback to audio/speech/haptic sinks.
 *
 * The UI stays semantically dumb: every behaviour is whatever the engine's
 * feedback says, so a headless run produces the same transcript as a
 * rendered one.
 */

import {
  ErrorFrame, FeedbackEvent, HelloFrame, InputEvent, ServerFrame, Snapshot,
  eventFrame,
} from "./protocol.js";
import { ToneScheduler } from "./audio.js";
import { FrameTransport } from "./transport.js";

export interface SpeechSink {
  speak(text: string): void;
}

export interface HapticSink {
  /** Render n pulses; implementations fall back to visual ticks. */
  pulse(count: number): void;
}

export interface TranscriptEntry {
  inputIndex: number | null; // null marks the session-open batch
  feedback: FeedbackEvent[];
}

export interface SessionSinks {
  audio: ToneScheduler;
  speech: SpeechSink;
  haptic: HapticSink;
  onSnapshot?: (snapshot: Snapshot) => void;
  onTranscript?: (entry: TranscriptEntry) => void;
  onError?: (message: string) => void;
}

interface PendingReply {
  seq: number;
  resolve: (feedback: FeedbackEvent[]) => void;
  reject: (err: Error) => void;
}

export class ClientSession {
  readonly transcript: TranscriptEntry[] = [];
  readonly sentEvents: InputEvent[] = [];
  snapshot: Snapshot | null = null;
  configHash = "";

  private seq = 0;
  private lastSentTime = 0;
  private pending: PendingReply[] = [];
  private helloResolve: ((hello: HelloFrame) => void) | null = null;
  private closed = false;

  constructor(private transport: FrameTransport,
              private sinks: SessionSinks) {
    transport.onFrame((frame) => this.handleFrame(frame));
    transport.onClose(() => this.handleClose());
  }

  /** Wait for the server hello; plays and records the opening narration. */
  start(): Promise<HelloFrame> {
    return new Promise((resolve) => {
      this.helloResolve = (hello) => {
        this.configHash = hello.config_hash;
        this.snapshot = hello.snapshot;
        this.sinks.onSnapshot?.(hello.snapshot);
        this.record(null, hello.feedback);
        this.playAll(hello.feedback);
        resolve(hello);
      };
    });
  }

  /**
   * Send one input event; resolves with the engine's feedback batch.
   * Outgoing event times are clamped to be non-decreasing, matching the
   * protocol contract.
   */
  send(event: InputEvent): Promise<FeedbackEvent[]> {
    if (this.closed) return Promise.reject(new Error("session closed"));
    const time = Math.max(Math.round(event.time), this.lastSentTime);
    this.lastSentTime = time;
    const outgoing: InputEvent = { ...event, time };
    this.seq += 1;
    const seq = this.seq;
    this.sentEvents.push(outgoing);
    this.transport.send(eventFrame(seq, outgoing));
    return new Promise((resolve, reject) => {
      this.pending.push({ seq, resolve, reject });
    });
  }

  close(): void {
    this.closed = true;
    this.transport.close();
  }

  private handleFrame(frame: ServerFrame): void {
    if (frame.type === "hello") {
      this.helloResolve?.(frame);
      this.helloResolve = null;
      return;
    }
    if (frame.type === "error") {
      this.failAll(new Error((frame as ErrorFrame).message));
      this.sinks.onError?.((frame as ErrorFrame).message);
      return;
    }
    const reply = this.pending.shift();
    if (!reply || reply.seq !== frame.seq) {
      this.failAll(new Error(`out-of-order reply for seq ${frame.seq}`));
      return;
    }
    if (frame.snapshot) {
      this.snapshot = frame.snapshot;
      this.sinks.onSnapshot?.(frame.snapshot);
    }
    this.record(reply.seq - 1, frame.feedback);
    this.playAll(frame.feedback);
    reply.resolve(frame.feedback);
  }

  private handleClose(): void {
    this.closed = true;
    this.failAll(new Error("connection closed"));
  }

  private failAll(err: Error): void {
    const waiting = this.pending;
    this.pending = [];
    for (const reply of waiting) reply.reject(err);
  }

  private record(inputIndex: number | null, feedback: FeedbackEvent[]): void {
    const entry = { inputIndex, feedback };
    this.transcript.push(entry);
    this.sinks.onTranscript?.(entry);
  }

  private playAll(feedback: FeedbackEvent[]): void {
    for (const fb of feedback) this.play(fb);
  }

  private play(fb: FeedbackEvent): void {
    switch (fb.kind) {
      case "speech":
      case "mode_announcement":
        this.sinks.speech.speak(fb.text ?? "");
        break;
      case "tone":
        if (fb.tone) this.sinks.audio.playTone(fb.tone);
        break;
      case "tone_sequence":
        if (fb.tones) this.sinks.audio.playSequence(fb.tones);
        break;
      case "haptic":
        this.sinks.haptic.pulse(fb.pulses ?? 0);
        break;
    }
  }
}
