/**
 * WebSocket-to-TCP bridge so the browser page can reach the step
 * service: one TCP connection per WebSocket client, lines forwarded
 * verbatim in both directions.
 *
 * Usage: node dist/bridge.js [--listen 8970] [--service 127.0.0.1:8377]
 */

import net from "node:net";
import process from "node:process";
import { WebSocketServer, type WebSocket, type RawData } from "ws";

function arg(name: string, fallback: string): string {
  const i = process.argv.indexOf(`--${name}`);
  return i >= 0 && process.argv[i + 1] ? process.argv[i + 1] : fallback;
}

const listenPort = Number(arg("listen", "8970"));
const [serviceHost, servicePort] = arg("service", "127.0.0.1:8377").split(":");

const wss = new WebSocketServer({ port: listenPort });

wss.on("connection", (ws: WebSocket) => {
  const tcp = net.createConnection({ host: serviceHost, port: Number(servicePort) });
  let buffer = "";
  tcp.on("data", (chunk) => {
    buffer += chunk.toString("utf8");
    let idx: number;
    while ((idx = buffer.indexOf("\n")) >= 0) {
      const line = buffer.slice(0, idx);
      buffer = buffer.slice(idx + 1);
      if (line.trim()) ws.send(line);
    }
  });
  tcp.on("close", () => ws.close());
  tcp.on("error", () => ws.close());
  ws.on("message", (data: RawData) => tcp.write(data.toString() + "\n"));
  ws.on("close", () => tcp.destroy());
});

console.log(
  `bridge listening on ws://127.0.0.1:${listenPort}, ` +
  `forwarding to ${serviceHost}:${servicePort}`,
);
