/**
 * Wire and file formats shared with the core service.
 *
 * The playground never computes pointer math itself: it converts UI
 * events into frame messages, collects the replies, and writes the
 * same versioned trial CSV that the offline tooling reads, replays,
 * and aggregates.
 */

export const CSV_FORMAT = "posrate-csv 1";

export const TRIAL_COLUMNS = [
  "t", "x_in", "y_in", "contact", "x_ptr", "y_ptr", "mode",
] as const;

export type Mode = "isotonic" | "elastic";

/** One timestamped input sample in engine coordinates (mm). */
export interface FrameInput {
  tS: number;
  xMm: number;
  yMm: number;
  contact: boolean;
}

/** Engine output for one input frame. */
export interface StepReply {
  dxMm: number;
  dyMm: number;
  mode: Mode;
  penetrationMm: number;
  nX: number | null;
  nY: number | null;
}

export function frameMessage(f: FrameInput): Record<string, unknown> {
  return { type: "frame", t_s: f.tS, x_mm: f.xMm, y_mm: f.yMm, contact: f.contact };
}

export function parseStepReply(msg: Record<string, unknown>): StepReply {
  return {
    dxMm: Number(msg.dx_mm),
    dyMm: Number(msg.dy_mm),
    mode: msg.mode as Mode,
    penetrationMm: Number(msg.penetration_mm),
    nX: msg.n_x == null ? null : Number(msg.n_x),
    nY: msg.n_y == null ? null : Number(msg.n_y),
  };
}

/** One recorded row: the input frame plus the pointer state after it. */
export interface RecordedRow {
  frame: FrameInput;
  pointerX: number;
  pointerY: number;
  mode: Mode;
  penetrationMm: number;
}

/**
 * Format a number the way the reference tooling does: shortest
 * round-trip form, integral floats keeping a trailing ".0".
 */
export function fmtNum(v: number): string {
  if (Number.isInteger(v) && Math.abs(v) < 1e16) {
    return v.toFixed(1);
  }
  return String(v);
}

/** Serialize recorded rows into the versioned trial CSV. */
export function trialCsv(
  rows: readonly RecordedRow[],
  params: Record<string, unknown>,
  meta: Record<string, unknown>,
): string {
  const lines = [
    `# ${CSV_FORMAT} trial`,
    "# params " + JSON.stringify(params),
    "# meta " + JSON.stringify(meta),
    TRIAL_COLUMNS.join(","),
  ];
  for (const row of rows) {
    lines.push([
      fmtNum(row.frame.tS),
      fmtNum(row.frame.xMm),
      fmtNum(row.frame.yMm),
      row.frame.contact ? "1" : "0",
      fmtNum(row.pointerX),
      fmtNum(row.pointerY),
      row.mode,
    ].join(","));
  }
  return lines.join("\n") + "\n";
}
