/**
 * Headless playground session.
 *
 * Turns pad samples into engine frames, streams them to the core, and
 * accumulates the display pointer from the returned deltas.  All
 * motion math happens on the core side; this class only does the
 * affine pad-to-engine mapping, timestamp bookkeeping, and recording.
 * Timestamps must strictly increase, so out-of-order frames are
 * impossible by construction.
 */

import type { StepClient } from "./client.js";
import type { FrameInput, RecordedRow, StepReply } from "./protocol.js";
import { trialCsv } from "./protocol.js";

/** Invertible affine map between pad pixels and engine millimetres. */
export class PadMapping {
  constructor(
    readonly mmPerPx: number = 25.4 / 96,
    readonly originPx: { x: number; y: number } = { x: 0, y: 0 },
  ) {
    if (!(mmPerPx > 0)) throw new RangeError("mmPerPx must be positive");
  }

  toMm(xPx: number, yPx: number): { x: number; y: number } {
    return {
      x: (xPx - this.originPx.x) * this.mmPerPx,
      y: (yPx - this.originPx.y) * this.mmPerPx,
    };
  }

  toPx(xMm: number, yMm: number): { x: number; y: number } {
    return {
      x: xMm / this.mmPerPx + this.originPx.x,
      y: yMm / this.mmPerPx + this.originPx.y,
    };
  }
}

export interface SessionOptions {
  mapping?: PadMapping;
  pointerStart?: [number, number];
}

export class PlaygroundSession {
  readonly mapping: PadMapping;
  engineParams: Record<string, unknown> = {};
  rows: RecordedRow[] = [];
  pointerX: number;
  pointerY: number;
  lastReply: StepReply | null = null;
  private lastT = Number.NEGATIVE_INFINITY;

  constructor(private client: StepClient, opts: SessionOptions = {}) {
    this.mapping = opts.mapping ?? new PadMapping();
    [this.pointerX, this.pointerY] = opts.pointerStart ?? [0, 0];
  }

  async open(params: Record<string, unknown> = {}): Promise<void> {
    this.engineParams = await this.client.open(params);
    this.rows = [];
    this.lastReply = null;
    this.lastT = Number.NEGATIVE_INFINITY;
  }

  /** Feed one pad sample in pixels. */
  async padEvent(tS: number, xPx: number, yPx: number, contact: boolean): Promise<StepReply> {
    const mm = this.mapping.toMm(xPx, yPx);
    return this.feedFrame({ tS, xMm: mm.x, yMm: mm.y, contact });
  }

  /** Feed one engine-space frame. */
  async feedFrame(frame: FrameInput): Promise<StepReply> {
    if (frame.tS <= this.lastT) {
      throw new RangeError(`frame timestamp ${frame.tS} not after ${this.lastT}`);
    }
    this.lastT = frame.tS;
    const reply = await this.client.frame(frame);
    this.pointerX += reply.dxMm;
    this.pointerY += reply.dyMm;
    this.lastReply = reply;
    this.rows.push({
      frame,
      pointerX: this.pointerX,
      pointerY: this.pointerY,
      mode: reply.mode,
      penetrationMm: reply.penetrationMm,
    });
    return reply;
  }

  /** Reposition the display pointer (trial starts); recording continues. */
  placePointer(x: number, y: number): void {
    this.pointerX = x;
    this.pointerY = y;
  }

  /** Drop the recording so the next rows start a fresh log. */
  clearRecording(): void {
    this.rows = [];
  }

  exportTrialCsv(meta: Record<string, unknown>): string {
    return trialCsv(this.rows, this.engineParams, meta);
  }

  /**
   * Replay the recorded frames through a fresh engine on the same
   * connection and return the replayed pointer trace accumulated from
   * the given origin.  Resets the engine, so run this while live
   * input is idle.
   */
  async replayRecording(origin: [number, number]): Promise<[number, number][]> {
    const frames = this.rows.map((r) => r.frame);
    await this.client.reset();
    let [px, py] = origin;
    const trace: [number, number][] = [];
    for (const f of frames) {
      const reply = await this.client.frame(f);
      px += reply.dxMm;
      py += reply.dyMm;
      trace.push([px, py]);
    }
    await this.client.reset();
    return trace;
  }
}
