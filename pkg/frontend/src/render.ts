/** Canvas rendering of a query result over an optional point overlay. */

import type { EdgeRow, PointRow, QueryResult } from "./api.js";

export interface Bounds {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

export interface Transform {
  scale: number;
  ox: number;
  oy: number;
  height: number;
}

/** Aspect-ratio preserving world-to-screen transform with padding. */
export function fitTransform(
  bounds: Bounds,
  width: number,
  height: number,
  pad = 10,
): Transform {
  const spanX = Math.max(bounds.maxX - bounds.minX, 1e-12);
  const spanY = Math.max(bounds.maxY - bounds.minY, 1e-12);
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const ox = pad + ((width - 2 * pad) - spanX * scale) / 2 - bounds.minX * scale;
  const oy = pad + ((height - 2 * pad) - spanY * scale) / 2 - bounds.minY * scale;
  return { scale, ox, oy, height };
}

export function worldToScreen(t: Transform, x: number, y: number): [number, number] {
  // y grows upward in the data, downward on the canvas
  return [x * t.scale + t.ox, t.height - (y * t.scale + t.oy)];
}

export interface RenderEdge {
  a: number;
  b: number;
  twoSided: boolean;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

/** Collapse the per-side rows into drawable segments; an edge present with
 * both sides (the shape is a single edge thick there) is flagged. */
export function computeRenderEdges(
  result: QueryResult,
  pointsByIndex: Map<number, PointRow>,
): RenderEdge[] {
  const sides = new Map<string, { row: EdgeRow; count: number }>();
  for (const e of result.edges) {
    const key = `${e.a}-${e.b}`;
    const cur = sides.get(key);
    if (cur) cur.count += 1;
    else sides.set(key, { row: e, count: 1 });
  }
  const out: RenderEdge[] = [];
  for (const { row, count } of sides.values()) {
    const p = pointsByIndex.get(row.a);
    const q = pointsByIndex.get(row.b);
    if (!p || !q) continue;
    out.push({
      a: row.a,
      b: row.b,
      twoSided: count === 2,
      x1: p.x,
      y1: p.y,
      x2: q.x,
      y2: q.y,
    });
  }
  out.sort((u, v) => u.a - v.a || u.b - v.b);
  return out;
}

/** The subset of the 2D context the renderer uses; tests substitute a
 * recording fake. */
export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
}

export const EDGE_STYLE = { oneSided: "#111111", twoSided: "#d62828" };

export function drawFrame(
  ctx: Canvas2D,
  width: number,
  height: number,
  transform: Transform,
  edges: RenderEdge[],
  overlay: PointRow[] | null,
): void {
  ctx.clearRect(0, 0, width, height);
  if (overlay) {
    ctx.fillStyle = "#b0c4de";
    for (const p of overlay) {
      const [sx, sy] = worldToScreen(transform, p.x, p.y);
      ctx.beginPath();
      ctx.arc(sx, sy, 1.5, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
  for (const e of edges) {
    ctx.strokeStyle = e.twoSided ? EDGE_STYLE.twoSided : EDGE_STYLE.oneSided;
    ctx.lineWidth = e.twoSided ? 2.5 : 1.5;
    const [x1, y1] = worldToScreen(transform, e.x1, e.y1);
    const [x2, y2] = worldToScreen(transform, e.x2, e.y2);
    ctx.beginPath();
    ctx.moveTo(x1, y1);
    ctx.lineTo(x2, y2);
    ctx.stroke();
  }
}
