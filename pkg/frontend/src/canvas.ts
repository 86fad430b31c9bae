// Orbit canvas: per-body polylines, playhead dots, min-distance marker.
import { minDistanceMarker, playheadIndex, project, ViewState } from "./state";

const COLORS = ["#4fc3f7", "#ffb74d", "#aed581", "#f06292", "#ba68c8", "#fff176"];

interface Box {
  cx: number;
  cy: number;
  scale: number;
}

function fitBox(traj: number[][][], plane: [number, number], w: number, h: number): Box {
  let lo = Infinity, hi = -Infinity, lo2 = Infinity, hi2 = -Infinity;
  for (const body of traj) {
    for (const p of body) {
      const [x, y] = project(p, plane);
      if (x < lo) lo = x;
      if (x > hi) hi = x;
      if (y < lo2) lo2 = y;
      if (y > hi2) hi2 = y;
    }
  }
  const span = Math.max(hi - lo, hi2 - lo2, 1e-9);
  return {
    cx: (lo + hi) / 2,
    cy: (lo2 + hi2) / 2,
    scale: (0.85 * Math.min(w, h)) / span,
  };
}

export function drawOrbit(ctx: CanvasRenderingContext2D, vs: ViewState, w: number, h: number) {
  ctx.fillStyle = "#101418";
  ctx.fillRect(0, 0, w, h);
  const traj = vs.trajectory;
  if (!traj || !traj.length) {
    ctx.fillStyle = "#8899aa";
    ctx.fillText("no trajectory (asymmetric or colliding path)", 12, 20);
    return;
  }
  const box = fitBox(traj, vs.projection, w, h);
  const toPx = (p: number[]): [number, number] => {
    const [x, y] = project(p, vs.projection);
    return [w / 2 + (x - box.cx) * box.scale, h / 2 - (y - box.cy) * box.scale];
  };

  traj.forEach((body, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length];
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    body.forEach((p, k) => {
      const [x, y] = toPx(p);
      if (k === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  });

  // closest-approach marker
  const marker = minDistanceMarker(traj);
  for (const body of traj) {
    const [x, y] = toPx(body[marker.index]);
    ctx.strokeStyle = "#ff5252";
    ctx.beginPath();
    ctx.arc(x, y, 6, 0, 2 * Math.PI);
    ctx.stroke();
  }

  // playhead
  const idx = playheadIndex(traj, vs.playhead);
  traj.forEach((body, i) => {
    const [x, y] = toPx(body[idx]);
    ctx.fillStyle = COLORS[i % COLORS.length];
    ctx.beginPath();
    ctx.arc(x, y, 4, 0, 2 * Math.PI);
    ctx.fill();
  });

  ctx.fillStyle = "#8899aa";
  ctx.fillText(`min dist ${marker.dist.toFixed(4)}`, 12, h - 12);
}
