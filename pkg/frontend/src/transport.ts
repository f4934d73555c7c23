/**
 * Byte-stream transports carrying the framed protocol.  The session only
 * sees this interface; tests and the bridge use TCP (node), the browser
 * build uses a WebSocket relay that passes the same bytes through.
 */

import { FrameDecoder, ServerFrame } from "./protocol.js";

export interface FrameTransport {
  onFrame(handler: (frame: ServerFrame) => void): void;
  onClose(handler: () => void): void;
  send(bytes: Uint8Array<ArrayBuffer>): void;
  close(): void;
}

/** Browser transport over a byte-relay WebSocket (see bridge.ts). */
export class WebSocketTransport implements FrameTransport {
  private decoder = new FrameDecoder();
  private frameHandler: ((frame: ServerFrame) => void) | null = null;
  private closeHandler: (() => void) | null = null;
  private ready: Promise<void>;
  private queue: Uint8Array<ArrayBuffer>[] = [];

  constructor(private ws: WebSocket) {
    ws.binaryType = "arraybuffer";
    this.ready = new Promise((resolve, reject) => {
      ws.addEventListener("open", () => {
        for (const bytes of this.queue) ws.send(bytes);
        this.queue = [];
        resolve();
      });
      ws.addEventListener("error", () => reject(new Error("socket error")));
    });
    ws.addEventListener("message", (msg) => {
      const frames = this.decoder.push(new Uint8Array(msg.data as ArrayBuffer));
      for (const frame of frames) this.frameHandler?.(frame as ServerFrame);
    });
    ws.addEventListener("close", () => this.closeHandler?.());
  }

  onFrame(handler: (frame: ServerFrame) => void): void {
    this.frameHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  send(bytes: Uint8Array<ArrayBuffer>): void {
    if (this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(bytes);
    } else {
      this.queue.push(bytes);
    }
  }

  close(): void {
    this.ws.close();
  }
}
