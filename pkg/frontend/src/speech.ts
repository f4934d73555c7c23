/** Speech output: platform speech service plus a verbatim transcript pane. */

import { SpeechSink } from "./session.js";

export class BrowserSpeech implements SpeechSink {
  available = typeof speechSynthesis !== "undefined";

  speak(text: string): void {
    if (!this.available) return;
    const utterance = new SpeechSynthesisUtterance(text);
    utterance.rate = 1.1;
    speechSynthesis.cancel();
    speechSynthesis.speak(utterance);
  }
}

export class NullSpeech implements SpeechSink {
  spoken: string[] = [];

  speak(text: string): void {
    this.spoken.push(text);
  }
}
