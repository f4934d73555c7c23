/** Node-only TCP transport (tests, headless drivers, and the bridge). */

import net from "node:net";

import { FrameDecoder, ServerFrame } from "./protocol.js";
import { FrameTransport } from "./transport.js";

export class TcpTransport implements FrameTransport {
  private decoder = new FrameDecoder();
  private frameHandler: ((frame: ServerFrame) => void) | null = null;
  private closeHandler: (() => void) | null = null;

  private constructor(private socket: net.Socket) {
    socket.on("data", (chunk: Buffer) => {
      for (const frame of this.decoder.push(new Uint8Array(chunk))) {
        this.frameHandler?.(frame as ServerFrame);
      }
    });
    socket.on("close", () => this.closeHandler?.());
  }

  static connect(host: string, port: number): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () =>
        resolve(new TcpTransport(socket)),
      );
      socket.on("error", reject);
    });
  }

  onFrame(handler: (frame: ServerFrame) => void): void {
    this.frameHandler = handler;
  }

  onClose(handler: () => void): void {
    this.closeHandler = handler;
  }

  send(bytes: Uint8Array<ArrayBuffer>): void {
    this.socket.write(bytes);
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
