/** TCP transport for node-side use: tests, the bridge, batch replay. */

import net from "node:net";

import type { LineTransport } from "./client.js";

export class TcpTransport implements LineTransport {
  private buffer = "";
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  private constructor(private socket: net.Socket) {
    socket.setNoDelay(true);
    socket.on("data", (chunk) => this.feed(chunk.toString("utf8")));
    socket.on("close", () => {
      for (const h of this.closeHandlers) h();
    });
    socket.on("error", () => {
      // the close event follows; handlers fire there
    });
  }

  static connect(host: string, port: number): Promise<TcpTransport> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection({ host, port }, () => {
        resolve(new TcpTransport(socket));
      });
      socket.once("error", reject);
    });
  }

  private feed(text: string): void {
    this.buffer += text;
    let idx: number;
    while ((idx = this.buffer.indexOf("\n")) >= 0) {
      const line = this.buffer.slice(0, idx).trim();
      this.buffer = this.buffer.slice(idx + 1);
      if (!line) continue;
      for (const h of this.lineHandlers) h(line);
    }
  }

  send(line: string): void {
    this.socket.write(line + "\n");
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.socket.end();
  }
}
