/**
 * Development bridge: serves the static UI and relays WebSocket bytes to
 * the engine's TCP endpoint verbatim (the framing travels through
 * untouched, so the browser speaks the engine's native protocol).
 *
 *   node dist/bridge.js [--port 8080] [--engine-host 127.0.0.1]
 */

import crypto from "node:crypto";
import fs from "node:fs";
import http from "node:http";
import net from "node:net";
import path from "node:path";
import { fileURLToPath } from "node:url";

const WS_MAGIC = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
const ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..");

const MIME: Record<string, string> = {
  ".html": "text/html; charset=utf-8",
  ".js": "text/javascript; charset=utf-8",
  ".map": "application/json",
  ".css": "text/css",
};

function args(): { port: number; engineHost: string } {
  const argv = process.argv.slice(2);
  const get = (flag: string, fallback: string) => {
    const i = argv.indexOf(flag);
    return i >= 0 && argv[i + 1] !== undefined ? argv[i + 1] : fallback;
  };
  return { port: Number(get("--port", "8080")),
           engineHost: get("--engine-host", "127.0.0.1") };
}

function serveStatic(req: http.IncomingMessage,
                     res: http.ServerResponse): void {
  const url = new URL(req.url ?? "/", "http://localhost");
  let rel = url.pathname === "/" ? "/index.html" : url.pathname;
  const file = path.join(ROOT, path.normalize(rel));
  if (!file.startsWith(ROOT) || !fs.existsSync(file)
      || !fs.statSync(file).isFile()) {
    res.writeHead(404).end("not found");
    return;
  }
  res.writeHead(200, {
    "content-type": MIME[path.extname(file)] ?? "application/octet-stream",
  });
  fs.createReadStream(file).pipe(res);
}

/** Minimal server-side WebSocket framing (binary, no extensions). */
function wsEncode(payload: Buffer): Buffer {
  const len = payload.length;
  let header: Buffer;
  if (len < 126) {
    header = Buffer.from([0x82, len]);
  } else if (len < 65536) {
    header = Buffer.alloc(4);
    header[0] = 0x82;
    header[1] = 126;
    header.writeUInt16BE(len, 2);
  } else {
    header = Buffer.alloc(10);
    header[0] = 0x82;
    header[1] = 127;
    header.writeBigUInt64BE(BigInt(len), 2);
  }
  return Buffer.concat([header, payload]);
}

class WsDecoder {
  private buf = Buffer.alloc(0);

  push(chunk: Buffer): { opcode: number; payload: Buffer }[] {
    this.buf = Buffer.concat([this.buf, chunk]);
    const out: { opcode: number; payload: Buffer }[] = [];
    for (;;) {
      if (this.buf.length < 2) break;
      const opcode = this.buf[0] & 0x0f;
      const masked = (this.buf[1] & 0x80) !== 0;
      let len = this.buf[1] & 0x7f;
      let offset = 2;
      if (len === 126) {
        if (this.buf.length < 4) break;
        len = this.buf.readUInt16BE(2);
        offset = 4;
      } else if (len === 127) {
        if (this.buf.length < 10) break;
        len = Number(this.buf.readBigUInt64BE(2));
        offset = 10;
      }
      const maskLen = masked ? 4 : 0;
      if (this.buf.length < offset + maskLen + len) break;
      const mask = this.buf.subarray(offset, offset + maskLen);
      const payload = Buffer.from(
        this.buf.subarray(offset + maskLen, offset + maskLen + len));
      if (masked) {
        for (let i = 0; i < payload.length; i++) payload[i] ^= mask[i % 4];
      }
      this.buf = this.buf.subarray(offset + maskLen + len);
      out.push({ opcode, payload });
    }
    return out;
  }
}

function main(): void {
  const { port, engineHost } = args();
  const server = http.createServer(serveStatic);

  server.on("upgrade", (req, socket) => {
    const url = new URL(req.url ?? "/", "http://localhost");
    if (url.pathname !== "/ws") {
      socket.destroy();
      return;
    }
    const key = req.headers["sec-websocket-key"];
    if (typeof key !== "string") {
      socket.destroy();
      return;
    }
    const accept = crypto.createHash("sha1").update(key + WS_MAGIC)
      .digest("base64");
    socket.write("HTTP/1.1 101 Switching Protocols\r\n" +
                 "Upgrade: websocket\r\nConnection: Upgrade\r\n" +
                 `Sec-WebSocket-Accept: ${accept}\r\n\r\n`);

    const enginePort = Number(url.searchParams.get("port") ?? "9870");
    const engine = net.createConnection({ host: engineHost,
                                          port: enginePort });
    const decoder = new WsDecoder();

    socket.on("data", (chunk: Buffer) => {
      for (const { opcode, payload } of decoder.push(chunk)) {
        if (opcode === 0x8) { // close
          engine.end();
          socket.end();
        } else if (opcode === 0x9) { // ping -> pong
          socket.write(Buffer.concat([Buffer.from([0x8a, payload.length]),
                                      payload]));
        } else if (opcode === 0x2 || opcode === 0x1 || opcode === 0x0) {
          engine.write(payload);
        }
      }
    });
    engine.on("data", (chunk: Buffer) => socket.write(wsEncode(chunk)));
    engine.on("close", () => socket.end());
    engine.on("error", () => socket.end());
    socket.on("close", () => engine.destroy());
    socket.on("error", () => engine.destroy());
  });

  server.listen(port, () => {
    const address = server.address();
    const bound = typeof address === "object" && address ? address.port : port;
    console.log(`ui bridge: http://127.0.0.1:${bound}/ ` +
                `(relaying /ws?port=<engine port> to ${engineHost})`);
  });
}

main();
