// Thin client for the varorbit steering service. The UI never computes
// physics; everything rendered comes out of these payloads.

export type GroupDef = Record<string, unknown>;

export interface SessionState {
  id: string;
  state: "idle" | "running" | "converged" | "failed";
  status: string;
  n: number;
  d: number;
  l: number;
  group_type: string;
  group_order: number;
  coercive: boolean;
  warnings: string[];
  s: number;
  nu: number;
  iteration: number;
  action: number | null;
  grad_norm: number | null;
  min_distance: number | null;
  coeffs: number[][];
  history: [number, number, number, number][];
  trajectory: number[][][] | null; // per body: list of d-vectors
}

export type ServiceEvent =
  | { type: "progress"; iter: number; action: number; grad_norm: number; min_distance: number }
  | { type: "snapshot"; iter: number; trajectory: number[][][] }
  | { type: "status"; state: string; status?: string; iteration?: number };

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function call<T>(base: string, method: string, path: string, body?: unknown): Promise<T> {
  const resp = await fetch(base + path, {
    method,
    headers: body === undefined ? {} : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const text = await resp.text();
  if (!resp.ok) {
    let detail = text;
    try { detail = JSON.parse(text).detail ?? text; } catch {}
    throw new ApiError(resp.status, String(detail));
  }
  return JSON.parse(text) as T;
}

export class Client {
  constructor(public base: string) {}

  createSession(group: GroupDef, opts: Partial<{ s: number; nu: number; seed: number; amplitude: number }> = {}) {
    return call<SessionState>(this.base, "POST", "/sessions", { group, ...opts });
  }
  getState(id: string) {
    return call<SessionState>(this.base, "GET", `/sessions/${id}`);
  }
  step(id: string, iterations: number) {
    return call<SessionState>(this.base, "POST", `/sessions/${id}/step`, { iterations });
  }
  perturb(id: string, amplitude: number, seed = 0) {
    return call<SessionState>(this.base, "POST", `/sessions/${id}/perturb`, { amplitude, seed });
  }
  reshape(id: string, opts: Partial<{ s: number; nu: number; truncate: boolean }>) {
    return call<SessionState>(this.base, "POST", `/sessions/${id}/reshape`, opts);
  }
  exportOrbit(id: string) {
    return call<Record<string, unknown>>(this.base, "GET", `/sessions/${id}/orbit`);
  }
  deleteSession(id: string) {
    return call<{ deleted: string }>(this.base, "DELETE", `/sessions/${id}`);
  }

  /** Poll the buffered event log (works without EventSource, e.g. in tests). */
  async fetchEvents(id: string, start = 0): Promise<ServiceEvent[]> {
    const resp = await fetch(`${this.base}/sessions/${id}/events?start=${start}&follow=false`);
    if (!resp.ok) throw new ApiError(resp.status, await resp.text());
    return parseSSE(await resp.text());
  }

  /** Live event stream for the browser; returns a disposer. */
  streamEvents(id: string, onEvent: (e: ServiceEvent) => void): () => void {
    const es = new EventSource(`${this.base}/sessions/${id}/events?follow=true&timeout=3600`);
    es.onmessage = (e: MessageEvent) => {
      try { onEvent(JSON.parse(e.data)); } catch {}
    };
    return () => es.close();
  }
}

export function parseSSE(text: string): ServiceEvent[] {
  const out: ServiceEvent[] = [];
  for (const line of text.split("\n")) {
    if (!line.startsWith("data: ")) continue;
    try { out.push(JSON.parse(line.slice(6))); } catch {}
  }
  return out;
}
