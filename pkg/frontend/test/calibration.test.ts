/** Calibration flow against the real service, including the error path. */

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceError, StepClient } from "../src/client.js";
import { CalibrationScreen } from "../src/calibration.js";
import { TcpTransport } from "../src/tcp.js";
import { startService, stopService, type RunningService } from "./service.js";

let service: RunningService;

beforeAll(async () => {
  service = await startService();
}, 20000);

afterAll(() => {
  if (service) stopService(service);
});

const CENTRE: [number, number] = [3, -2];
const RADIUS = 18;

function rimPoint(deg: number): [number, number] {
  const rad = (deg * Math.PI) / 180;
  return [CENTRE[0] + RADIUS * Math.cos(rad), CENTRE[1] + RADIUS * Math.sin(rad)];
}

function pushPoint(deg: number, depth: number): [number, number] {
  const rad = (deg * Math.PI) / 180;
  return [
    CENTRE[0] + (RADIUS + depth) * Math.cos(rad),
    CENTRE[1] + (RADIUS + depth) * Math.sin(rad),
  ];
}

async function connect(): Promise<StepClient> {
  return new StepClient(await TcpTransport.connect("127.0.0.1", service.port));
}

describe("CalibrationScreen", () => {
  it("prompts to keep tracing on thin coverage, then fits", async () => {
    const client = await connect();
    const screen = new CalibrationScreen();

    // only a 100 degree arc: the service must reject it
    for (let deg = 0; deg <= 100; deg += 5) {
      const [x, y] = rimPoint(deg);
      screen.addTracePoint(x, y);
    }
    await expect(screen.submit(client)).rejects.toThrow(ServiceError);
    expect(screen.stage).toBe("tracing");
    expect(screen.prompt).toContain("keep going");

    // continue the trace where the user left off
    for (let deg = 105; deg <= 310; deg += 5) {
      const [x, y] = rimPoint(deg);
      screen.addTracePoint(x, y);
    }
    screen.beginPushes();
    expect(screen.stage).toBe("pushing");
    for (let k = 0; k < 8; k++) {
      const [x, y] = pushPoint(45 * k, 1.5 + 0.1 * k);
      screen.addPush(x, y);
    }

    const fitted = await screen.submit(client);
    expect(screen.stage).toBe("done");
    expect(fitted.centre[0]).toBeCloseTo(CENTRE[0], 6);
    expect(fitted.centre[1]).toBeCloseTo(CENTRE[1], 6);
    expect(fitted.radius).toBeCloseTo(RADIUS, 6);
    expect(fitted.rmsResidual).toBeLessThan(1e-6);
    expect(fitted.profileAnglesDeg).toEqual([0, 45, 90, 135, 180, 225, 270, 315]);
    for (let k = 0; k < 8; k++) {
      expect(fitted.profileDepthsMm[k]).toBeCloseTo(1.5 + 0.1 * k, 6);
    }

    // skewed pushes produce a visibly asymmetric preview polygon
    const poly = screen.profilePolygon();
    expect(poly).toHaveLength(8);
    const r0 = Math.hypot(poly[0][0] - CENTRE[0], poly[0][1] - CENTRE[1]);
    const r7 = Math.hypot(poly[7][0] - CENTRE[0], poly[7][1] - CENTRE[1]);
    expect(r0).toBeCloseTo(RADIUS + 1.5, 6);
    expect(r7).toBeCloseTo(RADIUS + 2.2, 6);

    await client.close();
  }, 20000);

  it("guards stage transitions", () => {
    const screen = new CalibrationScreen();
    expect(() => screen.addPush(0, 0)).toThrow("not pushing");
    screen.beginPushes();
    expect(() => screen.addTracePoint(0, 0)).toThrow("not tracing");
    expect(() => screen.beginPushes()).toThrow("already finished");
  });
});
