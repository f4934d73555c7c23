/**
 * Browser entry point: connects to the engine through the bridge's
 * byte-relay WebSocket, wires pointer input through the gesture recognizer,
 * and realizes feedback as Web Audio tones, speech, vibration, and a
 * visible transcript.
 */

import { ToneScheduler, WebAudioBackend } from "./audio.js";
import { GestureRecognizer, PALETTE_ACTIONS, PointerSample } from "./gestures.js";
import { FeedbackEvent } from "./protocol.js";
import { renderSnapshot } from "./render.js";
import { ClientSession, TranscriptEntry } from "./session.js";
import { BrowserSpeech } from "./speech.js";
import { WebSocketTransport } from "./transport.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function describeFeedback(fb: FeedbackEvent): string {
  switch (fb.kind) {
    case "speech":
      return `"${fb.text}"`;
    case "mode_announcement":
      return `[mode] "${fb.text}"`;
    case "tone":
      return `tone ${fb.tone?.pitch_hz.toFixed(0)} Hz (${fb.tone?.timbre})`;
    case "tone_sequence":
      return `tones: ${fb.tones?.map((t) => t.timbre === "numb" ? "·"
        : Math.round(t.pitch_hz)).join(" ")}`;
    case "haptic":
      return `haptic ×${fb.pulses}`;
  }
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("chart");
  const transcriptPane = el<HTMLUListElement>("transcript");
  const banner = el<HTMLDivElement>("banner");
  const palette = el<HTMLDivElement>("palette");
  const connectForm = el<HTMLFormElement>("connect-form");
  const portInput = el<HTMLInputElement>("engine-port");

  let session: ClientSession | null = null;
  let audioCtx: AudioContext | null = null;
  let tickTimer: number | undefined;

  const haptic = {
    pulse(count: number): void {
      if (navigator.vibrate) {
        navigator.vibrate(Array(count).fill(30).flatMap((ms) => [ms, 40]));
      } else {
        banner.textContent = `haptic ${"•".repeat(count)}`;
        setTimeout(() => { banner.textContent = ""; }, 400);
      }
    },
  };

  function appendTranscript(entry: TranscriptEntry): void {
    if (entry.feedback.length === 0) return;
    for (const fb of entry.feedback) {
      const li = document.createElement("li");
      const index = entry.inputIndex === null ? "open" : `#${entry.inputIndex}`;
      li.textContent = `${index} ${describeFeedback(fb)}`;
      transcriptPane.appendChild(li);
    }
    transcriptPane.scrollTop = transcriptPane.scrollHeight;
  }

  async function connect(port: number): Promise<void> {
    session?.close();
    if (tickTimer !== undefined) clearInterval(tickTimer);
    transcriptPane.innerHTML = "";

    audioCtx = audioCtx ?? new AudioContext();
    await audioCtx.resume();
    const speech = new BrowserSpeech();
    if (!speech.available || !audioCtx) {
      banner.textContent = "audio unavailable: visual transcript only";
    }
    const url = `ws://${location.host}/ws?port=${port}`;
    const transport = new WebSocketTransport(new WebSocket(url));
    session = new ClientSession(transport, {
      audio: new ToneScheduler(new WebAudioBackend(audioCtx)),
      speech,
      haptic,
      onSnapshot: (snapshot) => renderSnapshot(canvas, snapshot),
      onTranscript: appendTranscript,
      onError: (message) => { banner.textContent = `engine error: ${message}`; },
    });
    const recognizer = new GestureRecognizer((event) => {
      void session?.send(event).catch(() => undefined);
    });

    const sample = (type: PointerSample["type"]) =>
      (ev: PointerEvent): void => {
        const rect = canvas.getBoundingClientRect();
        const sx = canvas.width / rect.width;
        const sy = canvas.height / rect.height;
        recognizer.handle({
          pointerId: ev.pointerId,
          type,
          x: (ev.clientX - rect.left) * sx,
          y: (ev.clientY - rect.top) * sy,
          t: Math.round(ev.timeStamp),
        });
        ev.preventDefault();
      };
    canvas.onpointerdown = sample("down");
    canvas.onpointermove = (ev) => {
      if (ev.buttons !== 0) sample("move")(ev);
    };
    canvas.onpointerup = sample("up");
    tickTimer = window.setInterval(
      () => recognizer.tick(performance.now()), 60);

    await session.start();
    banner.textContent = `connected (engine ${session.configHash.slice(0, 8)})`;
  }

  for (const action of PALETTE_ACTIONS) {
    const button = document.createElement("button");
    button.id = action.id;
    button.textContent = action.label;
    button.onclick = () => {
      void session?.send({ ...action.event, time: Math.round(performance.now()) })
        .catch(() => undefined);
    };
    palette.appendChild(button);
  }

  connectForm.onsubmit = (ev) => {
    ev.preventDefault();
    void connect(Number(portInput.value)).catch((err: Error) => {
      banner.textContent = `connection failed: ${err.message}`;
    });
  };
}

main();
