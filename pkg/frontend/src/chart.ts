// Log-scale convergence chart for action (relative to its running
// minimum) and gradient norm. Values come straight from the service.
import type { ChartPoint } from "./state";

export interface ChartSeries {
  label: string;
  color: string;
  points: { x: number; y: number }[]; // y > 0, drawn on log axis
}

export function chartSeries(points: ChartPoint[]): ChartSeries[] {
  const floor = Math.min(...points.map((p) => p.action));
  return [
    {
      label: "action - min",
      color: "#4fc3f7",
      points: points
        .map((p) => ({ x: p.iter, y: p.action - floor }))
        .filter((p) => p.y > 0),
    },
    {
      label: "grad norm",
      color: "#ffb74d",
      points: points
        .map((p) => ({ x: p.iter, y: p.gradNorm }))
        .filter((p) => p.y > 0),
    },
  ];
}

export function drawChart(ctx: CanvasRenderingContext2D, points: ChartPoint[], w: number, h: number) {
  ctx.fillStyle = "#101418";
  ctx.fillRect(0, 0, w, h);
  if (points.length < 2) return;
  const series = chartSeries(points).filter((s) => s.points.length > 1);
  if (!series.length) return;
  const xs = series.flatMap((s) => s.points.map((p) => p.x));
  const ys = series.flatMap((s) => s.points.map((p) => Math.log10(p.y)));
  const x0 = Math.min(...xs), x1 = Math.max(...xs, x0 + 1);
  const y0 = Math.min(...ys), y1 = Math.max(...ys, y0 + 1e-9);
  const px = (x: number) => 36 + ((x - x0) / (x1 - x0)) * (w - 46);
  const py = (y: number) => h - 16 - ((y - y0) / (y1 - y0)) * (h - 28);

  ctx.strokeStyle = "#2a3138";
  ctx.fillStyle = "#8899aa";
  ctx.font = "10px monospace";
  for (let e = Math.ceil(y0); e <= Math.floor(y1); e++) {
    ctx.beginPath();
    ctx.moveTo(36, py(e));
    ctx.lineTo(w - 10, py(e));
    ctx.stroke();
    ctx.fillText(`1e${e}`, 2, py(e) + 3);
  }
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.points.forEach((p, i) => {
      const x = px(p.x), y = py(Math.log10(p.y));
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  series.forEach((s, i) => {
    ctx.fillStyle = s.color;
    ctx.fillText(s.label, 40 + i * 110, 12);
  });
}
