/**
 * Request/reply client for the line-delimited JSON step service.
 *
 * The protocol answers every message with exactly one line, so a FIFO
 * of pending promises is all the correlation needed.  An error reply
 * rejects its own request and leaves the session usable, mirroring
 * the service's behavior; a dropped connection rejects everything in
 * flight and flips `connected`, so the UI can show a disconnected
 * state instead of freezing.
 */

import type { FrameInput, StepReply } from "./protocol.js";
import { frameMessage, parseStepReply } from "./protocol.js";

export class ServiceError extends Error {}

/** Anything that can carry newline-delimited text both ways. */
export interface LineTransport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

interface Pending {
  resolve: (reply: Record<string, unknown>) => void;
  reject: (err: Error) => void;
}

export class StepClient {
  private pending: Pending[] = [];
  private closed = false;
  private disconnectHandlers: (() => void)[] = [];

  constructor(private transport: LineTransport) {
    transport.onLine((line) => this.dispatch(line));
    transport.onClose(() => this.handleClose());
  }

  get connected(): boolean {
    return !this.closed;
  }

  onDisconnect(handler: () => void): void {
    this.disconnectHandlers.push(handler);
  }

  private dispatch(line: string): void {
    const next = this.pending.shift();
    if (!next) return;
    let msg: Record<string, unknown>;
    try {
      msg = JSON.parse(line) as Record<string, unknown>;
    } catch {
      next.reject(new ServiceError(`unparseable reply: ${line}`));
      return;
    }
    if (msg.type === "error") {
      next.reject(new ServiceError(String(msg.message)));
    } else {
      next.resolve(msg);
    }
  }

  private handleClose(): void {
    if (this.closed) return;
    this.closed = true;
    const err = new ServiceError("connection closed");
    for (const p of this.pending.splice(0)) p.reject(err);
    for (const h of this.disconnectHandlers) h();
  }

  request(msg: Record<string, unknown>): Promise<Record<string, unknown>> {
    if (this.closed) {
      return Promise.reject(new ServiceError("connection closed"));
    }
    return new Promise((resolve, reject) => {
      this.pending.push({ resolve, reject });
      this.transport.send(JSON.stringify(msg));
    });
  }

  /** Open an engine session; resolves with the effective parameters. */
  async open(params: Record<string, unknown> = {}): Promise<Record<string, unknown>> {
    const reply = await this.request({ type: "open", params });
    return reply.params as Record<string, unknown>;
  }

  async frame(f: FrameInput): Promise<StepReply> {
    return parseStepReply(await this.request(frameMessage(f)));
  }

  async reset(): Promise<void> {
    await this.request({ type: "reset" });
  }

  async calibrate(
    boundary: readonly [number, number][],
    pushes: readonly [number, number][],
  ): Promise<Record<string, unknown>> {
    return this.request({ type: "calibrate", boundary, pushes });
  }

  async close(): Promise<void> {
    if (this.closed) return;
    try {
      await this.request({ type: "close" });
    } finally {
      this.closed = true;
      this.transport.close();
    }
  }
}
