/**
 * Tone scheduling.  The engine sends tone *specifications*; this module
 * turns them into scheduled oscillators.  Sequences are scheduled strictly
 * back to back honoring each tone's trailing gap, and successive batches
 * queue behind one another so nothing ever overlaps.
 */

import { ToneSpec } from "./protocol.js";

export interface AudioBackend {
  /** Current time in seconds (monotonic). */
  now(): number;
  /** Schedule one tone starting at `at` seconds. */
  schedule(tone: ToneSpec, at: number): void;
}

export class ToneScheduler {
  private nextFree = 0;

  constructor(private backend: AudioBackend) {}

  playSequence(tones: ToneSpec[]): void {
    let at = Math.max(this.backend.now(), this.nextFree);
    for (const tone of tones) {
      this.backend.schedule(tone, at);
      at += (tone.duration_ms + tone.gap_after_ms) / 1000;
    }
    this.nextFree = at;
  }

  playTone(tone: ToneSpec): void {
    this.playSequence([tone]);
  }
}

const TIMBRE_WAVES: Record<string, OscillatorType> = {
  default: "sine",
  numb: "square",
  earcon: "triangle",
};

const SERIES_WAVES: OscillatorType[] = ["sine", "triangle", "sawtooth",
                                        "square"];

export function waveForTimbre(timbre: string): OscillatorType {
  if (timbre.startsWith("series_")) {
    const index = Number(timbre.slice("series_".length)) || 0;
    return SERIES_WAVES[index % SERIES_WAVES.length];
  }
  return TIMBRE_WAVES[timbre] ?? "sine";
}

/** Web Audio backend used by the browser build. */
export class WebAudioBackend implements AudioBackend {
  constructor(private ctx: AudioContext) {}

  now(): number {
    return this.ctx.currentTime;
  }

  schedule(tone: ToneSpec, at: number): void {
    const osc = this.ctx.createOscillator();
    const gain = this.ctx.createGain();
    osc.type = waveForTimbre(tone.timbre);
    osc.frequency.setValueAtTime(tone.pitch_hz, at);
    const seconds = tone.duration_ms / 1000;
    const level = tone.timbre === "numb" ? 0.15 : 0.25;
    // short envelope so tones do not click
    gain.gain.setValueAtTime(0, at);
    gain.gain.linearRampToValueAtTime(level, at + 0.005);
    gain.gain.setValueAtTime(level, at + Math.max(seconds - 0.01, 0.005));
    gain.gain.linearRampToValueAtTime(0, at + seconds);
    osc.connect(gain).connect(this.ctx.destination);
    osc.start(at);
    osc.stop(at + seconds);
  }
}
