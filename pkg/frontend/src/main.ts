/** Wire the sliders, canvas and service client together. */

import { ApiClient, PointRow, QueryResult } from "./api.js";
import {
  AlphaScale,
  QueryScheduler,
  ViewState,
  coupleWindow,
  snapToStride,
} from "./state.js";
import { Bounds, computeRenderEdges, drawFrame, fitTransform } from "./render.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function start() {
  const params = new URLSearchParams(location.search);
  const base = params.get("service") ?? "http://127.0.0.1:8787";
  const client = new ApiClient(base);

  const canvas = el<HTMLCanvasElement>("canvas");
  const ctx = canvas.getContext("2d")!;
  const sliderI = el<HTMLInputElement>("slider-i");
  const sliderJ = el<HTMLInputElement>("slider-j");
  const sliderA = el<HTMLInputElement>("slider-alpha");
  const labels = {
    i: el<HTMLSpanElement>("label-i"),
    j: el<HTMLSpanElement>("label-j"),
    alpha: el<HTMLSpanElement>("label-alpha"),
    status: el<HTMLSpanElement>("status"),
    banner: el<HTMLDivElement>("banner"),
  };
  const overlayBox = el<HTMLInputElement>("overlay");
  const snapBox = el<HTMLInputElement>("snap");

  const meta = await client.meta();
  const scale = new AlphaScale(meta);
  const n = meta.n;
  sliderI.min = "1";
  sliderI.max = String(n - 1);
  sliderI.value = "1";
  sliderJ.min = "2";
  sliderJ.max = String(n);
  sliderJ.value = String(n);
  sliderA.min = "0";
  sliderA.max = String(scale.infinityTick);
  sliderA.value = String(scale.toTick((scale.lo + scale.hi) / 10));
  snapBox.disabled = !meta.stride;
  document.title = `${meta.dataset_name} – temporal alpha-shapes`;

  const allPoints = await client.points(1, n);
  const bounds: Bounds = {
    minX: Math.min(...allPoints.map((p) => p.x)),
    minY: Math.min(...allPoints.map((p) => p.y)),
    maxX: Math.max(...allPoints.map((p) => p.x)),
    maxY: Math.max(...allPoints.map((p) => p.y)),
  };
  const transform = fitTransform(bounds, canvas.width, canvas.height);
  const byIndex = new Map<number, PointRow>(allPoints.map((p) => [p.index, p]));

  const scheduler = new QueryScheduler<ViewState, QueryResult>(
    (s) => client.query(s.i, s.j, scale.toAlpha(s.alphaTick)),
    (s, result) => {
      const edges = computeRenderEdges(result, byIndex);
      const overlay = s.overlayPoints
        ? allPoints.filter((p) => p.index >= s.i && p.index <= s.j)
        : null;
      drawFrame(ctx, canvas.width, canvas.height, transform, edges, overlay);
      labels.banner.hidden = true;
      labels.status.textContent =
        `${result.count} edge sides in ` +
        `${result.elapsed_microseconds.toFixed(0)} us`;
    },
    () => {
      labels.banner.hidden = false; // keep the last good frame
    },
  );

  function currentState(changed: "i" | "j" | "alpha"): ViewState {
    let i = parseInt(sliderI.value, 10);
    let j = parseInt(sliderJ.value, 10);
    const coupled = coupleWindow(i, j, n, changed === "j" ? "j" : "i");
    i = coupled.i;
    j = coupled.j;
    if (snapBox.checked && meta.stride) {
      const snapped = snapToStride(i, j, meta.stride, n);
      i = snapped.i;
      j = snapped.j;
    }
    sliderI.value = String(i);
    sliderJ.value = String(j);
    const alphaTick = parseInt(sliderA.value, 10);
    const alpha = scale.toAlpha(alphaTick);
    labels.i.textContent = String(i);
    labels.j.textContent = String(j);
    labels.alpha.textContent = alpha === Infinity ? "inf" : alpha.toPrecision(4);
    return { i, j, alphaTick, overlayPoints: overlayBox.checked };
  }

  function refresh(changed: "i" | "j" | "alpha") {
    scheduler.request(currentState(changed));
  }

  sliderI.addEventListener("input", () => refresh("i"));
  sliderJ.addEventListener("input", () => refresh("j"));
  sliderA.addEventListener("input", () => refresh("alpha"));
  overlayBox.addEventListener("change", () => refresh("alpha"));
  snapBox.addEventListener("change", () => refresh("i"));
  refresh("alpha");
}

start().catch((e) => {
  const banner = document.getElementById("banner");
  if (banner) {
    banner.hidden = false;
    banner.textContent = `failed to reach the query service: ${e}`;
  }
});
