/**
 * Reciprocal target presentation and per-trial logging in the shared
 * trial schema.
 *
 * A selection attempt inside the target ends the trial; a miss is
 * logged and the clock keeps running, so the recorded timing includes
 * the miss.  An aborted trial is exported with an `aborted` mark
 * rather than dropped.
 */

import type { PlaygroundSession } from "./session.js";
import type { StepReply } from "./protocol.js";

export interface TrialSpec {
  index: number;
  start: [number, number];
  target: [number, number];
  distance: number;
  width: number;
}

/** Alternating endpoints across a centre, back and forth. */
export function reciprocalTrials(
  centre: [number, number],
  distance: number,
  width: number,
  count: number,
  headingDeg = 0,
): TrialSpec[] {
  if (!(distance > 0) || !(width > 0) || count <= 0) {
    throw new RangeError("distance, width and count must be positive");
  }
  const rad = (headingDeg * Math.PI) / 180;
  const ux = Math.cos(rad);
  const uy = Math.sin(rad);
  const a: [number, number] = [centre[0] - (distance / 2) * ux, centre[1] - (distance / 2) * uy];
  const b: [number, number] = [centre[0] + (distance / 2) * ux, centre[1] + (distance / 2) * uy];
  const trials: TrialSpec[] = [];
  for (let i = 0; i < count; i++) {
    const [start, target] = i % 2 === 0 ? [a, b] : [b, a];
    trials.push({ index: i, start, target, distance, width });
  }
  return trials;
}

export interface TrialRecord {
  trial: TrialSpec;
  csv: string;
  selectionTimeS: number | null;
  errors: number;
  aborted: boolean;
}

export class TrialRunner {
  records: TrialRecord[] = [];
  errors = 0;
  private active: TrialSpec | null = null;
  private startT: number | null = null;

  constructor(
    private session: PlaygroundSession,
    private condition: Record<string, unknown> = {},
  ) {}

  get current(): TrialSpec | null {
    return this.active;
  }

  begin(trial: TrialSpec): void {
    if (this.active) throw new Error("a trial is already running");
    this.active = trial;
    this.errors = 0;
    this.startT = null;
    this.session.placePointer(trial.start[0], trial.start[1]);
    this.session.clearRecording();
  }

  /** Feed a pad sample during the trial. */
  async step(tS: number, xPx: number, yPx: number, contact: boolean): Promise<StepReply> {
    if (!this.active) throw new Error("no trial running");
    if (this.startT === null) this.startT = tS;
    return this.session.padEvent(tS, xPx, yPx, contact);
  }

  pointerInTarget(): boolean {
    if (!this.active) return false;
    const dx = this.session.pointerX - this.active.target[0];
    const dy = this.session.pointerY - this.active.target[1];
    return Math.hypot(dx, dy) <= this.active.width / 2;
  }

  /** A selection attempt: hit completes the trial, miss is logged. */
  attemptSelection(tS: number): "hit" | "miss" {
    if (!this.active || this.startT === null) throw new Error("no trial running");
    if (this.pointerInTarget()) {
      this.finish(tS - this.startT, false);
      return "hit";
    }
    this.errors += 1;
    return "miss";
  }

  /** Mark the running trial aborted and keep its partial log. */
  abort(): void {
    if (!this.active) throw new Error("no trial running");
    this.finish(null, true);
  }

  private finish(selection: number | null, aborted: boolean): void {
    const trial = this.active as TrialSpec;
    const meta = {
      start: trial.start,
      target: trial.target,
      distance: trial.distance,
      width: trial.width,
      trial_index: trial.index,
      condition: {
        technique: "human",
        transfer: "live",
        distance: trial.distance,
        width: trial.width,
        errors: this.errors,
        aborted,
        ...this.condition,
      },
    };
    this.records.push({
      trial,
      csv: this.session.exportTrialCsv(meta),
      selectionTimeS: selection,
      errors: this.errors,
      aborted,
    });
    this.active = null;
  }
}
