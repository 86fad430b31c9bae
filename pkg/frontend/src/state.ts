// View-side state: convergence series, decimation, playhead. Pure
// functions so the unit tests need no DOM.
import type { ServiceEvent, SessionState } from "./api";

export const CHART_CAP = 2000;

export interface ChartPoint {
  iter: number;
  action: number;
  gradNorm: number;
}

export interface ViewState {
  sessionId: string | null;
  trajectory: number[][][] | null; // per body
  playhead: number; // 0..1 fraction of the full period
  series: ChartPoint[];
  n: number;
  d: number;
  s: number;
  nu: number;
  iteration: number;
  state: string;
  projection: [number, number]; // coordinate plane for d > 2
  warnings: string[];
}

export function initialViewState(): ViewState {
  return {
    sessionId: null,
    trajectory: null,
    playhead: 0,
    series: [],
    n: 0,
    d: 2,
    s: 8,
    nu: 0,
    iteration: 0,
    state: "idle",
    projection: [0, 1],
    warnings: [],
  };
}

export function applyState(vs: ViewState, st: SessionState): ViewState {
  const series = st.history.map(([iter, action, gradNorm]) => ({ iter, action, gradNorm }));
  return {
    ...vs,
    sessionId: st.id,
    trajectory: st.trajectory ?? vs.trajectory,
    series: mergeSeries(vs.series, series),
    n: st.n,
    d: st.d,
    s: st.s,
    nu: st.nu,
    iteration: st.iteration,
    state: st.state,
    warnings: st.warnings,
  };
}

export function applyEvent(vs: ViewState, ev: ServiceEvent): ViewState {
  switch (ev.type) {
    case "progress":
      return {
        ...vs,
        iteration: ev.iter,
        series: mergeSeries(vs.series, [
          { iter: ev.iter, action: ev.action, gradNorm: ev.grad_norm },
        ]),
      };
    case "snapshot":
      return { ...vs, trajectory: ev.trajectory, iteration: ev.iter };
    case "status":
      return { ...vs, state: ev.state, iteration: ev.iteration ?? vs.iteration };
    default:
      return vs;
  }
}

/** Append keeping iteration order strictly increasing, then decimate. */
export function mergeSeries(prev: ChartPoint[], next: ChartPoint[]): ChartPoint[] {
  let out = prev;
  for (const p of next) {
    if (out.length && p.iter <= out[out.length - 1].iter) continue;
    if (out === prev) out = prev.slice();
    out.push(p);
  }
  return decimate(out, CHART_CAP);
}

/** Uniform-stride decimation to at most cap points, always keeping the ends. */
export function decimate(points: ChartPoint[], cap: number): ChartPoint[] {
  if (points.length <= cap) return points;
  const out: ChartPoint[] = [];
  const stride = (points.length - 1) / (cap - 1);
  for (let i = 0; i < cap; i++) {
    out.push(points[Math.round(i * stride)]);
  }
  return out;
}

/** Per-body point index for a playhead fraction along the full period. */
export function playheadIndex(trajectory: number[][][], playhead: number): number {
  const m = trajectory[0].length;
  return Math.min(m - 1, Math.max(0, Math.floor(playhead * (m - 1))));
}

/** Index + value of the closest mutual approach over the trajectory. */
export function minDistanceMarker(trajectory: number[][][]): { index: number; dist: number } {
  const n = trajectory.length;
  const m = trajectory[0].length;
  let best = Infinity;
  let at = 0;
  for (let t = 0; t < m; t++) {
    for (let i = 0; i < n; i++) {
      for (let j = i + 1; j < n; j++) {
        let sq = 0;
        for (let c = 0; c < trajectory[i][t].length; c++) {
          const dv = trajectory[i][t][c] - trajectory[j][t][c];
          sq += dv * dv;
        }
        if (sq < best) {
          best = sq;
          at = t;
        }
      }
    }
  }
  return { index: at, dist: Math.sqrt(best) };
}

/** Project a d-vector onto the selected coordinate plane. */
export function project(p: number[], plane: [number, number]): [number, number] {
  return [p[plane[0]] ?? 0, p[plane[1]] ?? 0];
}
