// Steering panel wiring: group picker -> session -> step/perturb/reshape
// loop, with the event stream driving the canvas and chart.
import { Client, ServiceEvent } from "./api";
import { BUNDLED_GROUPS } from "./bundled";
import { validateGroupText } from "./groups";
import { applyEvent, applyState, initialViewState, ViewState } from "./state";
import { drawOrbit } from "./canvas";
import { drawChart } from "./chart";

const $ = (id: string) => document.getElementById(id)!;

const client = new Client(
  (window as any).VARORBIT_BASE ?? `http://${location.hostname}:8787`,
);

let vs: ViewState = initialViewState();
let running = false;
let stopStream: (() => void) | null = null;
const pending: ServiceEvent[] = [];

function groupText(): string {
  return ($("group-json") as HTMLTextAreaElement).value;
}

function setStatus(msg: string) {
  $("status-line").textContent = msg;
}

function fillPicker() {
  const sel = $("group-picker") as HTMLSelectElement;
  for (const name of Object.keys(BUNDLED_GROUPS)) {
    const opt = document.createElement("option");
    opt.value = name;
    opt.textContent = name;
    sel.appendChild(opt);
  }
  sel.onchange = () => {
    ($("group-json") as HTMLTextAreaElement).value = JSON.stringify(
      BUNDLED_GROUPS[sel.value], null, 2);
    validate();
  };
  sel.onchange(new Event("change") as any);
}

function validate(): boolean {
  const res = validateGroupText(groupText());
  $("group-errors").textContent = res.errors.join("\n");
  if (res.ok && res.group && res.group.d > 2) {
    buildProjectionPicker(res.group.d);
  }
  return res.ok;
}

function buildProjectionPicker(d: number) {
  const sel = $("projection") as HTMLSelectElement;
  sel.innerHTML = "";
  for (let a = 0; a < d; a++) {
    for (let b = a + 1; b < d; b++) {
      const opt = document.createElement("option");
      opt.value = `${a},${b}`;
      opt.textContent = `${"xyzw"[a]}-${"xyzw"[b]}`;
      sel.appendChild(opt);
    }
  }
}

async function createSession() {
  if (!validate()) return;
  const group = JSON.parse(groupText());
  const s = Number(($("s-input") as HTMLInputElement).value);
  const nu = Number(($("nu-input") as HTMLInputElement).value);
  const seed = Number(($("seed-input") as HTMLInputElement).value);
  try {
    const st = await client.createSession(group, { s, nu, seed });
    vs = applyState(initialViewState(), st);
    setStatus(st.warnings.length ? st.warnings.join("; ") : `session ${st.id}`);
    stopStream?.();
    stopStream = client.streamEvents(st.id, (e) => pending.push(e));
  } catch (e) {
    setStatus(`create failed: ${(e as Error).message}`);
  }
}

async function stepLoop() {
  const sid = vs.sessionId;
  if (!sid || running) return;
  running = true;
  $("run-btn").textContent = "pause";
  const chunk = Number(($("chunk-input") as HTMLInputElement).value) || 25;
  while (running) {
    const st = await client.step(sid, chunk);
    vs = applyState(vs, st);
    if (st.state !== "idle") {
      setStatus(`${st.state} (${st.status || "running"}) iter ${st.iteration}`);
      break;
    }
  }
  running = false;
  $("run-btn").textContent = "run";
}

function wireControls() {
  $("create-btn").onclick = createSession;
  $("run-btn").onclick = () => (running ? (running = false) : void stepLoop());
  $("perturb-btn").onclick = async () => {
    if (!vs.sessionId) return;
    const amp = Number(($("amp-input") as HTMLInputElement).value);
    vs = applyState(vs, await client.perturb(vs.sessionId, amp));
  };
  $("reshape-btn").onclick = async () => {
    if (!vs.sessionId) return;
    const s = Number(($("s-input") as HTMLInputElement).value);
    const nu = Number(($("nu-input") as HTMLInputElement).value);
    try {
      vs = applyState(vs, await client.reshape(vs.sessionId, { s, nu: nu || undefined }));
    } catch (e) {
      setStatus(`reshape: ${(e as Error).message}`);
    }
  };
  $("export-btn").onclick = async () => {
    if (!vs.sessionId) return;
    const rec = await client.exportOrbit(vs.sessionId);
    const blob = new Blob([JSON.stringify(rec, null, 1)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "orbit.json";
    a.click();
  };
  ($("projection") as HTMLSelectElement).onchange = (e) => {
    const [a, b] = (e.target as HTMLSelectElement).value.split(",").map(Number);
    vs = { ...vs, projection: [a, b] };
  };
  ($("group-json") as HTMLTextAreaElement).oninput = validate;
}

function frame(tms: number) {
  while (pending.length) vs = applyEvent(vs, pending.shift()!);
  vs = { ...vs, playhead: (tms / 8000) % 1 };
  const orbit = $("orbit") as HTMLCanvasElement;
  drawOrbit(orbit.getContext("2d")!, vs, orbit.width, orbit.height);
  const chart = $("chart") as HTMLCanvasElement;
  drawChart(chart.getContext("2d")!, vs.series, chart.width, chart.height);
  $("readout").textContent =
    `iter ${vs.iteration}  state ${vs.state}  s=${vs.s} nu=${vs.nu}`;
  requestAnimationFrame(frame);
}

fillPicker();
wireControls();
requestAnimationFrame(frame);
