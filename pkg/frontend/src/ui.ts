/**
 * Canvas rendering for the playground page.
 *
 * The pad pane mirrors engine state received over the wire: the zone
 * ring at its configured centre and radius, the exit anchor from the
 * last reply, and an elastic band whose color intensity grows with
 * normalized penetration (the visual stand-in for force feedback).
 * The display pane shows the pointer, the current target, and trial
 * progress.  Nothing in here moves the pointer by itself.
 */

import type { StepReply } from "./protocol.js";
import type { PadMapping } from "./session.js";
import type { TrialSpec } from "./trials.js";

export interface ZoneView {
  centreMm: [number, number];
  radiusMm: number;
  maxPenetrationMm: number;
}

export function zoneViewFromParams(params: Record<string, unknown>): ZoneView {
  const centre = (params.zone_centre as [number, number] | undefined) ?? [0, 0];
  const elastic = (params.elastic as Record<string, unknown> | undefined) ?? {};
  return {
    centreMm: [centre[0], centre[1]],
    radiusMm: Number(params.zone_radius ?? 20),
    maxPenetrationMm: Number(elastic.max_penetration_mm ?? 2),
  };
}

export class PadView {
  private ctx: CanvasRenderingContext2D;

  constructor(private canvas: HTMLCanvasElement, private mapping: PadMapping) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  render(zone: ZoneView, reply: StepReply | null, padPointPx: { x: number; y: number } | null): void {
    const ctx = this.ctx;
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    const centre = this.mapping.toPx(zone.centreMm[0], zone.centreMm[1]);
    const radiusPx = zone.radiusMm / this.mapping.mmPerPx;
    const bandPx = zone.maxPenetrationMm / this.mapping.mmPerPx;
    const pen = reply ? Math.min(reply.penetrationMm / zone.maxPenetrationMm, 1) : 0;

    // elastic band: compression shown as color intensity
    ctx.beginPath();
    ctx.arc(centre.x, centre.y, radiusPx + bandPx, 0, 2 * Math.PI);
    ctx.arc(centre.x, centre.y, radiusPx, 0, 2 * Math.PI, true);
    ctx.fillStyle = `rgba(214, 69, 65, ${0.12 + 0.7 * pen})`;
    ctx.fill();

    // zone ring
    ctx.beginPath();
    ctx.arc(centre.x, centre.y, radiusPx, 0, 2 * Math.PI);
    ctx.strokeStyle = "#3a5a80";
    ctx.lineWidth = 2;
    ctx.stroke();

    // exit anchor from the engine, when in the elastic band
    if (reply && reply.nX !== null && reply.nY !== null) {
      const n = this.mapping.toPx(reply.nX, reply.nY);
      ctx.beginPath();
      ctx.arc(n.x, n.y, 4, 0, 2 * Math.PI);
      ctx.fillStyle = "#d64541";
      ctx.fill();
    }

    // last pad sample
    if (padPointPx) {
      ctx.beginPath();
      ctx.moveTo(padPointPx.x - 6, padPointPx.y);
      ctx.lineTo(padPointPx.x + 6, padPointPx.y);
      ctx.moveTo(padPointPx.x, padPointPx.y - 6);
      ctx.lineTo(padPointPx.x, padPointPx.y + 6);
      ctx.strokeStyle = "#222";
      ctx.lineWidth = 1.5;
      ctx.stroke();
    }
  }
}

export class DisplayView {
  private ctx: CanvasRenderingContext2D;
  private flashUntil = 0;

  /** pxPerMm scales display millimetres onto the canvas. */
  constructor(private canvas: HTMLCanvasElement, private pxPerMm: number) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  flashMiss(): void {
    this.flashUntil = performance.now() + 250;
  }

  render(pointer: [number, number], trial: TrialSpec | null): void {
    const ctx = this.ctx;
    const flashing = performance.now() < this.flashUntil;
    ctx.fillStyle = flashing ? "#fbeaea" : "#fafafa";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);

    const toPx = (x: number, y: number) => ({
      x: this.canvas.width / 2 + x * this.pxPerMm,
      y: this.canvas.height / 2 + y * this.pxPerMm,
    });

    if (trial) {
      const t = toPx(trial.target[0], trial.target[1]);
      ctx.beginPath();
      ctx.arc(t.x, t.y, (trial.width / 2) * this.pxPerMm, 0, 2 * Math.PI);
      ctx.fillStyle = flashing ? "#d64541" : "#7fb069";
      ctx.fill();
    }

    const p = toPx(pointer[0], pointer[1]);
    ctx.beginPath();
    ctx.arc(p.x, p.y, 3, 0, 2 * Math.PI);
    ctx.fillStyle = "#111";
    ctx.fill();
  }
}

export class Readouts {
  constructor(
    private modeEl: HTMLElement,
    private penetrationEl: HTMLElement,
    private progressEl: HTMLElement,
    private statusEl: HTMLElement,
  ) {}

  update(reply: StepReply | null): void {
    this.modeEl.textContent = reply ? reply.mode : "-";
    this.penetrationEl.textContent = reply ? `${reply.penetrationMm.toFixed(2)} mm` : "-";
  }

  progress(done: number, total: number, errors: number): void {
    this.progressEl.textContent = `trial ${Math.min(done + 1, total)}/${total}, errors ${errors}`;
  }

  connection(ok: boolean): void {
    this.statusEl.textContent = ok ? "connected" : "disconnected";
    this.statusEl.className = ok ? "status-ok" : "status-bad";
  }
}
