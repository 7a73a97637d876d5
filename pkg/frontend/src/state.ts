/** View state: slider coupling, the logarithmic alpha scale, and the
 * debounced latest-wins query scheduler. */

import type { Meta } from "./api.js";

export interface ViewState {
  i: number;
  j: number;
  alphaTick: number;
  overlayPoints: boolean;
}

/** Keep i < j when one slider moves by pushing the other along. */
export function coupleWindow(
  i: number,
  j: number,
  n: number,
  changed: "i" | "j",
): { i: number; j: number } {
  i = Math.max(1, Math.min(i, n - 1));
  j = Math.max(2, Math.min(j, n));
  if (i >= j) {
    if (changed === "i") j = i + 1;
    else i = j - 1;
  }
  return { i, j };
}

/** Snap a window to movement-step boundaries: starts at stride*a + 1 and
 * ends at stride*b. */
export function snapToStride(
  i: number,
  j: number,
  stride: number,
  n: number,
): { i: number; j: number } {
  const a = Math.round((i - 1) / stride);
  let b = Math.round(j / stride);
  let si = stride * a + 1;
  let sj = stride * b;
  if (si < 1) si = 1;
  if (sj > n) sj = stride * Math.floor(n / stride);
  if (sj <= si) sj = Math.min(n, si + stride - 1 >= n ? n : stride * (a + 1));
  if (sj <= si) return { i, j };
  return { i: si, j: sj };
}

/**
 * Logarithmic alpha slider. Integer ticks 0..resolution map exponentially
 * from the smallest observed bound up to a margin above the largest finite
 * bound; the final tick is the infinity notch.
 */
export class AlphaScale {
  readonly lo: number;
  readonly hi: number;
  readonly resolution: number;

  constructor(meta: Meta, resolution = 200, margin = 1.5) {
    this.resolution = resolution;
    const lo = meta.alpha_min_observed ?? 1e-3;
    const hiFinite = meta.alpha_max_finite ?? lo * 1e3;
    this.lo = lo;
    this.hi = Math.max(hiFinite * margin, lo * 1.0001);
  }

  get infinityTick(): number {
    return this.resolution;
  }

  toAlpha(tick: number): number {
    if (tick >= this.resolution) return Infinity;
    const t = Math.max(0, tick) / (this.resolution - 1);
    return Math.exp(
      Math.log(this.lo) + t * (Math.log(this.hi) - Math.log(this.lo)),
    );
  }

  toTick(alpha: number): number {
    if (!isFinite(alpha)) return this.resolution;
    const t =
      (Math.log(alpha) - Math.log(this.lo)) /
      (Math.log(this.hi) - Math.log(this.lo));
    return Math.round(Math.max(0, Math.min(1, t)) * (this.resolution - 1));
  }
}

export interface SchedulerTimers {
  set: (fn: () => void, ms: number) => unknown;
  clear: (handle: unknown) => void;
}

/**
 * Debounced single-flight scheduler. Requests overwrite each other while
 * waiting or while a fetch is in flight; a response is applied only when no
 * newer request exists, so the final frame always matches the final state.
 */
export class QueryScheduler<S, R> {
  private latest: S | null = null;
  private generation = 0;
  private flying = false;
  private timer: unknown = null;

  constructor(
    private fetcher: (s: S) => Promise<R>,
    private apply: (s: S, r: R) => void,
    private onError: (e: unknown) => void = () => {},
    private debounceMs = 30,
    private timers: SchedulerTimers = {
      set: (fn, ms) => setTimeout(fn, ms),
      clear: (h) => clearTimeout(h as ReturnType<typeof setTimeout>),
    },
  ) {}

  request(state: S): void {
    this.latest = state;
    this.generation++;
    if (this.timer !== null) this.timers.clear(this.timer);
    this.timer = this.timers.set(() => {
      this.timer = null;
      this.kick();
    }, this.debounceMs);
  }

  get inFlight(): boolean {
    return this.flying;
  }

  private kick(): void {
    if (this.flying || this.latest === null) return;
    const state = this.latest;
    const gen = this.generation;
    this.latest = null;
    this.flying = true;
    this.fetcher(state).then(
      (result) => {
        this.flying = false;
        if (gen === this.generation) this.apply(state, result);
        this.kick();
      },
      (err) => {
        this.flying = false;
        this.onError(err);
        this.kick();
      },
    );
  }
}
