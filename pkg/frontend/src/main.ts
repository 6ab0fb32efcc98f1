/**
 * Browser entry point: wires the pad canvas, the step client (over
 * the WebSocket bridge), the trial runner, and the calibration
 * screen together.
 */

import { StepClient, type LineTransport } from "./client.js";
import { CalibrationScreen } from "./calibration.js";
import { PadMapping, PlaygroundSession } from "./session.js";
import { TrialRunner, reciprocalTrials, type TrialSpec } from "./trials.js";
import { DisplayView, PadView, Readouts, zoneViewFromParams, type ZoneView } from "./ui.js";

class WebSocketTransport implements LineTransport {
  private lineHandlers: ((line: string) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  constructor(private ws: WebSocket) {
    ws.onmessage = (ev) => {
      for (const h of this.lineHandlers) h(String(ev.data));
    };
    ws.onclose = () => {
      for (const h of this.closeHandlers) h();
    };
  }

  static connect(url: string): Promise<WebSocketTransport> {
    return new Promise((resolve, reject) => {
      const ws = new WebSocket(url);
      ws.onopen = () => resolve(new WebSocketTransport(ws));
      ws.onerror = () => reject(new Error(`cannot reach ${url}`));
    });
  }

  send(line: string): void {
    this.ws.send(line);
  }

  onLine(handler: (line: string) => void): void {
    this.lineHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.ws.close();
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const padCanvas = el<HTMLCanvasElement>("pad");
  const displayCanvas = el<HTMLCanvasElement>("display");
  const readouts = new Readouts(el("mode"), el("penetration"), el("progress"), el("status"));
  const promptEl = el("prompt");
  const dpi = Number((el<HTMLSelectElement>("dpi")).value || "96");

  // pad pixels -> engine mm, origin at the pad centre
  const mapping = new PadMapping(25.4 / dpi, { x: padCanvas.width / 2, y: padCanvas.height / 2 });
  el("unit-note").textContent = `${dpi} px = 25.4 mm`;

  let transport: WebSocketTransport;
  try {
    transport = await WebSocketTransport.connect(`ws://${location.hostname}:8970`);
  } catch (e) {
    readouts.connection(false);
    promptEl.textContent = "bridge unreachable; start it with: npm run bridge";
    throw e;
  }
  const client = new StepClient(transport);
  client.onDisconnect(() => readouts.connection(false));
  readouts.connection(true);

  const session = new PlaygroundSession(client, { mapping });
  await session.open({});
  const zone: ZoneView = zoneViewFromParams(session.engineParams);

  const padView = new PadView(padCanvas, mapping);
  const displayView = new DisplayView(displayCanvas, 2.0);
  const trials: TrialSpec[] = reciprocalTrials([0, 0], 120, 10, 8);
  const runner = new TrialRunner(session, { note: "playground" });
  const calibration = new CalibrationScreen();
  let calibrating = false;
  let lastPad: { x: number; y: number } | null = null;

  runner.begin(trials[0]);
  readouts.progress(0, trials.length, 0);

  const epoch = performance.now();
  const now = () => (performance.now() - epoch) / 1000;

  padCanvas.addEventListener("pointerdown", (ev) => {
    padCanvas.setPointerCapture(ev.pointerId);
  });

  padCanvas.addEventListener("pointermove", (ev) => {
    const rect = padCanvas.getBoundingClientRect();
    const x = ev.clientX - rect.left;
    const y = ev.clientY - rect.top;
    lastPad = { x, y };
    if (calibrating) {
      const mm = mapping.toMm(x, y);
      if (calibration.stage === "tracing" && ev.buttons > 0) {
        calibration.addTracePoint(mm.x, mm.y);
      }
      promptEl.textContent = calibration.prompt;
      return;
    }
    if (!client.connected || !runner.current) return;
    void runner.step(now(), x, y, ev.buttons > 0).catch(() => readouts.connection(false));
  });

  padCanvas.addEventListener("pointerup", (ev) => {
    if (calibrating && calibration.stage === "pushing") {
      const rect = padCanvas.getBoundingClientRect();
      const mm = mapping.toMm(ev.clientX - rect.left, ev.clientY - rect.top);
      calibration.addPush(mm.x, mm.y);
      promptEl.textContent = `${calibration.pushes.length}/8 pushes`;
    }
  });

  const select = () => {
    if (calibrating || !runner.current) return;
    const verdict = runner.attemptSelection(now());
    if (verdict === "miss") {
      displayView.flashMiss();
    } else if (runner.records.length < trials.length) {
      runner.begin(trials[runner.records.length]);
    }
    readouts.progress(runner.records.length, trials.length, runner.errors);
  };
  el("select").addEventListener("click", select);
  document.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") select();
  });

  el("abort").addEventListener("click", () => {
    if (runner.current) {
      runner.abort();
      if (runner.records.length < trials.length) {
        runner.begin(trials[runner.records.length]);
      }
      readouts.progress(runner.records.length, trials.length, runner.errors);
    }
  });

  el("download").addEventListener("click", () => {
    const blob = new Blob(runner.records.map((r) => r.csv), { type: "text/csv" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "playground_trials.csv";
    a.click();
  });

  el("calibrate").addEventListener("click", () => {
    calibrating = !calibrating;
    promptEl.textContent = calibrating ? calibration.prompt : "";
  });
  el("pushes").addEventListener("click", () => {
    if (calibrating && calibration.stage === "tracing") {
      calibration.beginPushes();
      promptEl.textContent = calibration.prompt;
    }
  });
  el("fit").addEventListener("click", () => {
    if (!calibrating) return;
    void calibration
      .submit(client)
      .then((fitted) => {
        promptEl.textContent =
          `fitted r=${fitted.radius.toFixed(1)} mm at ` +
          `(${fitted.centre[0].toFixed(1)}, ${fitted.centre[1].toFixed(1)})`;
      })
      .catch(() => {
        promptEl.textContent = calibration.prompt;
      });
  });

  const draw = () => {
    padView.render(zone, session.lastReply, lastPad);
    displayView.render([session.pointerX, session.pointerY], runner.current);
    readouts.update(session.lastReply);
    requestAnimationFrame(draw);
  };
  draw();
}

void boot();
