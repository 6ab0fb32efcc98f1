/**
 * Two-step calibration flow: trace the comfortable rim, then push
 * outward once in each compass sector.
 *
 * All fitting happens on the core service; this class only collects
 * samples, relays them, and keeps the fitted result for preview
 * rendering.  Service rejections (thin coverage, bad pushes) roll the
 * stage back with an inline prompt so the user can keep going.
 */

import { ServiceError, type StepClient } from "./client.js";

export type CalibrationStage = "tracing" | "pushing" | "done";

export interface FittedZone {
  centre: [number, number];
  radius: number;
  rmsResidual: number;
  profileAnglesDeg: number[];
  profileDepthsMm: number[];
}

interface FitReply {
  centre: [number, number];
  radius: number;
  rms_residual: number;
}

interface ProfileReply {
  samples: { angle_deg: number; max_penetration_mm: number }[];
}

export class CalibrationScreen {
  stage: CalibrationStage = "tracing";
  prompt = "trace the edge of your comfortable reach";
  trace: [number, number][] = [];
  pushes: [number, number][] = [];
  fitted: FittedZone | null = null;

  addTracePoint(x: number, y: number): void {
    if (this.stage !== "tracing") throw new Error("not tracing");
    this.trace.push([x, y]);
  }

  beginPushes(): void {
    if (this.stage !== "tracing") throw new Error("tracing already finished");
    this.stage = "pushing";
    this.prompt = "push outward once in each of the eight directions";
  }

  addPush(x: number, y: number): void {
    if (this.stage !== "pushing") throw new Error("not pushing");
    this.pushes.push([x, y]);
  }

  /** Submit the samples; on rejection the stage rolls back. */
  async submit(client: StepClient): Promise<FittedZone> {
    try {
      const reply = await client.calibrate(this.trace, this.pushes);
      const fit = reply.fit as unknown as FitReply;
      const profile = reply.profile as unknown as ProfileReply;
      this.fitted = {
        centre: [fit.centre[0], fit.centre[1]],
        radius: fit.radius,
        rmsResidual: fit.rms_residual,
        profileAnglesDeg: profile.samples.map((s) => s.angle_deg),
        profileDepthsMm: profile.samples.map((s) => s.max_penetration_mm),
      };
      this.stage = "done";
      this.prompt = "calibration complete";
      return this.fitted;
    } catch (e) {
      if (e instanceof ServiceError) {
        this.stage = /cover/i.test(e.message) ? "tracing" : "pushing";
        this.prompt = `${e.message}; keep going`;
      }
      throw e;
    }
  }

  /** Preview polygon: one vertex per sector at rim plus reach depth. */
  profilePolygon(): [number, number][] {
    if (!this.fitted) return [];
    const f = this.fitted;
    return f.profileAnglesDeg.map((deg, i) => {
      const rad = (deg * Math.PI) / 180;
      const r = f.radius + f.profileDepthsMm[i];
      return [f.centre[0] + r * Math.cos(rad), f.centre[1] + r * Math.sin(rad)];
    });
  }
}
