/** Session, mapping, runner and CSV logic against a scripted fake service. */

import { describe, expect, it } from "vitest";

import { ServiceError, StepClient, type LineTransport } from "../src/client.js";
import { fmtNum, trialCsv, type RecordedRow } from "../src/protocol.js";
import { PadMapping, PlaygroundSession } from "../src/session.js";
import { TrialRunner, reciprocalTrials } from "../src/trials.js";

/** Replies like the real service, with a fixed 1 mm x-step per frame. */
class FakeTransport implements LineTransport {
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];
  sent: string[] = [];
  mute = false;

  send(line: string): void {
    this.sent.push(line);
    if (this.mute) return;
    const msg = JSON.parse(line) as Record<string, unknown>;
    let reply: Record<string, unknown>;
    if (msg.type === "open" || msg.type === "reset") {
      reply = { type: "ready", params: { zone_radius: 20.0 } };
    } else if (msg.type === "frame") {
      reply = {
        type: "frame", dx_mm: 1.0, dy_mm: 0.0, mode: "isotonic",
        penetration_mm: 0.0, n_x: null, n_y: null,
      };
    } else {
      reply = { type: "error", message: `unknown message type '${msg.type}'` };
    }
    queueMicrotask(() => this.emit(JSON.stringify(reply)));
  }

  private emit(line: string): void {
    for (const h of this.lineHandlers) h(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.closeNow();
  }

  closeNow(): void {
    for (const h of this.closeHandlers.splice(0)) h();
  }
}

function freshSession() {
  const transport = new FakeTransport();
  const client = new StepClient(transport);
  const session = new PlaygroundSession(client, {
    mapping: new PadMapping(0.5, { x: 100, y: 100 }),
  });
  return { transport, client, session };
}

describe("PadMapping", () => {
  it("round trips between pixels and millimetres", () => {
    const mapping = new PadMapping(25.4 / 96, { x: 210, y: 160 });
    const mm = mapping.toMm(37.25, 301.5);
    const px = mapping.toPx(mm.x, mm.y);
    expect(px.x).toBeCloseTo(37.25, 9);
    expect(px.y).toBeCloseTo(301.5, 9);
  });

  it("rejects a degenerate scale", () => {
    expect(() => new PadMapping(0)).toThrow(RangeError);
  });
});

describe("fmtNum", () => {
  it("keeps integral floats distinguishable as floats", () => {
    expect(fmtNum(1)).toBe("1.0");
    expect(fmtNum(-3)).toBe("-3.0");
  });

  it("uses shortest round-trip form otherwise", () => {
    expect(fmtNum(0.5)).toBe("0.5");
    expect(fmtNum(0.1 + 0.2)).toBe("0.30000000000000004");
    expect(Number(fmtNum(1e21))).toBe(1e21);
  });
});

describe("PlaygroundSession", () => {
  it("maps pad pixels to engine mm and accumulates the pointer", async () => {
    const { transport, session } = freshSession();
    await session.open();
    await session.padEvent(0.001, 104, 100, true);
    const sent = JSON.parse(transport.sent.at(-1)!) as Record<string, unknown>;
    expect(sent.x_mm).toBeCloseTo(2.0, 12);   // (104 - 100) * 0.5
    expect(sent.y_mm).toBeCloseTo(0.0, 12);
    expect(session.pointerX).toBeCloseTo(1.0, 12);
  });

  it("rejects non-increasing timestamps", async () => {
    const { session } = freshSession();
    await session.open();
    await session.padEvent(0.005, 100, 100, true);
    await expect(session.padEvent(0.005, 101, 100, true)).rejects.toThrow(RangeError);
    await expect(session.padEvent(0.004, 101, 100, true)).rejects.toThrow(RangeError);
  });

  it("rejects pending requests and reports disconnection", async () => {
    const { transport, client, session } = freshSession();
    await session.open();
    let dropped = false;
    client.onDisconnect(() => (dropped = true));
    transport.mute = true;
    const hanging = session.padEvent(0.001, 100, 100, true);
    transport.closeNow();
    await expect(hanging).rejects.toThrow(ServiceError);
    expect(dropped).toBe(true);
    expect(client.connected).toBe(false);
    await expect(session.padEvent(0.002, 100, 100, true)).rejects.toThrow("closed");
  });
});

describe("trial CSV export", () => {
  it("writes the shared schema verbatim", () => {
    const rows: RecordedRow[] = [
      {
        frame: { tS: 0.001, xMm: 1.5, yMm: -2, contact: true },
        pointerX: 3, pointerY: -4, mode: "isotonic", penetrationMm: 0,
      },
      {
        frame: { tS: 0.002, xMm: 1.25, yMm: -2, contact: false },
        pointerX: 3.5, pointerY: -4, mode: "elastic", penetrationMm: 0.25,
      },
    ];
    const text = trialCsv(rows, { zone_radius: 20.0 }, { trial_index: 0 });
    const lines = text.trimEnd().split("\n");
    expect(lines[0]).toBe("# posrate-csv 1 trial");
    expect(lines[1]).toBe('# params {"zone_radius":20}');
    expect(lines[2]).toBe('# meta {"trial_index":0}');
    expect(lines[3]).toBe("t,x_in,y_in,contact,x_ptr,y_ptr,mode");
    expect(lines[4]).toBe("0.001,1.5,-2.0,1,3.0,-4.0,isotonic");
    expect(lines[5]).toBe("0.002,1.25,-2.0,0,3.5,-4.0,elastic");
  });
});

describe("reciprocalTrials", () => {
  it("alternates endpoints at the requested distance", () => {
    const trials = reciprocalTrials([10, -5], 80, 6, 4, 30);
    expect(trials).toHaveLength(4);
    for (const t of trials) {
      const d = Math.hypot(t.target[0] - t.start[0], t.target[1] - t.start[1]);
      expect(d).toBeCloseTo(80, 9);
      expect(t.width).toBe(6);
    }
    expect(trials[0].start).toEqual(trials[1].target);
    expect(trials[0].target).toEqual(trials[1].start);
  });

  it("rejects degenerate geometry", () => {
    expect(() => reciprocalTrials([0, 0], 0, 6, 4)).toThrow(RangeError);
  });
});

describe("TrialRunner", () => {
  it("logs misses, then completes on a hit, timing across the miss", async () => {
    const { session } = freshSession();
    await session.open();
    const runner = new TrialRunner(session, { block: 1 });
    const [trial] = reciprocalTrials([5, 0], 10, 4, 1);   // start (0,0), target (10,0)
    runner.begin(trial);
    expect(session.pointerX).toBe(0);

    let t = 0;
    const stepOnce = async () => {
      t += 0.005;
      await runner.step(t, 100 + t * 1000, 100, true);   // pad x grows; fake adds 1 mm/frame
    };

    await stepOnce();
    expect(runner.attemptSelection(t)).toBe("miss");     // pointer at 1, far from 10
    expect(runner.errors).toBe(1);

    while (!runner.pointerInTarget()) await stepOnce();
    expect(runner.attemptSelection(t)).toBe("hit");
    expect(runner.records).toHaveLength(1);

    const rec = runner.records[0];
    expect(rec.errors).toBe(1);
    expect(rec.aborted).toBe(false);
    // 8 frames to reach |10 - 8| <= 2, timed from the first step
    expect(rec.selectionTimeS).toBeCloseTo(0.035, 9);
    expect(rec.csv).toContain('"errors":1');
    expect(rec.csv).toContain('"block":1');
  });

  it("marks aborted trials instead of dropping them", async () => {
    const { session } = freshSession();
    await session.open();
    const runner = new TrialRunner(session);
    const [trial] = reciprocalTrials([5, 0], 10, 4, 1);
    runner.begin(trial);
    await runner.step(0.005, 101, 100, true);
    runner.abort();
    expect(runner.records).toHaveLength(1);
    expect(runner.records[0].aborted).toBe(true);
    expect(runner.records[0].selectionTimeS).toBeNull();
    expect(runner.records[0].csv).toContain('"aborted":true');
    expect(runner.current).toBeNull();
  });
});
