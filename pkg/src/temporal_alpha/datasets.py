"""Dataset construction: CSV ingestion and the follower-swarm generator."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime

import numpy as np

from .geometry import TimedPoint


@dataclass
class Dataset:
    """A cleaned point sequence with strictly increasing timestamps 1..n."""

    name: str
    xs: np.ndarray
    ys: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.xs)

    def to_points(self):
        return [
            TimedPoint(k + 1, float(self.xs[k]), float(self.ys[k]))
            for k in range(self.n)
        ]


def auto_perturb_radius(xs, ys):
    """Default perturbation radius: 1e-7 of the larger canvas extent."""
    ext = max(
        float(np.max(xs) - np.min(xs)),
        float(np.max(ys) - np.min(ys)),
        1.0,
    )
    return 1e-7 * ext


def _perturb(xs, ys, radius, rng):
    ang = rng.uniform(0.0, 2.0 * np.pi, len(xs))
    rad = radius * np.sqrt(rng.uniform(0.0, 1.0, len(xs)))
    return xs + rad * np.cos(ang), ys + rad * np.sin(ang)


def _parse_time(text):
    try:
        return float(text)
    except ValueError:
        return datetime.fromisoformat(text).timestamp()


def ingest_csv(path, dedup=True, perturb_radius=0.0, seed=0, name=None) -> Dataset:
    """Read (t, x, y) rows, sort by time, optionally drop duplicates, and
    re-index timestamps to 1..n.

    The time column may be numeric or ISO-8601; only its ordering matters.
    An optional header row is skipped. Duplicate timestamps and duplicate
    coordinate pairs each keep their first occurrence when ``dedup`` is set.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 3:
                raise ValueError(f"line {lineno}: expected t,x,y got {row!r}")
            try:
                t = _parse_time(row[0].strip())
                x = float(row[1])
                y = float(row[2])
            except (ValueError, TypeError):
                if lineno == 1:
                    continue  # header
                raise ValueError(f"line {lineno}: malformed row {row!r}") from None
            rows.append((t, lineno, x, y))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    rows.sort(key=lambda r: (r[0], r[1]))
    dropped_t = dropped_xy = 0
    if dedup:
        kept = []
        seen_t = set()
        seen_xy = set()
        for t, _, x, y in rows:
            if t in seen_t:
                dropped_t += 1
                continue
            if (x, y) in seen_xy:
                dropped_xy += 1
                continue
            seen_t.add(t)
            seen_xy.add((x, y))
            kept.append((x, y))
    else:
        kept = [(x, y) for _, _, x, y in rows]
    if not kept:
        raise ValueError(f"{path}: no rows left after deduplication")
    xs = np.array([p[0] for p in kept])
    ys = np.array([p[1] for p in kept])
    if perturb_radius:
        rng = np.random.default_rng(seed)
        xs, ys = _perturb(xs, ys, perturb_radius, rng)
    return Dataset(
        name=name or str(path),
        xs=xs,
        ys=ys,
        meta={
            "source": str(path),
            "dropped_duplicate_t": dropped_t,
            "dropped_duplicate_xy": dropped_xy,
            "perturb_radius": perturb_radius,
            "seed": seed,
        },
    )


def gen_swarm(
    followers,
    leaders=2,
    steps=1,
    seed=0,
    canvas=40.0,
    step_length=0.4,
    perturb_radius=None,
) -> Dataset:
    """Simulated particle swarm: followers chase the nearest of the leaders.

    Leaders move on smooth random momentum paths reflected at the canvas
    walls; every movement step emits a copy of every particle, so
    n = (followers + leaders) * steps, with timestamps assigned in
    (step, particle) order. All emitted positions get a small random
    perturbation (default radius 1e-7 of the canvas side).
    """
    if followers < 1 or steps < 1 or leaders < 1:
        raise ValueError("need at least one follower, one leader, one step")
    rng = np.random.default_rng(seed)
    total = followers + leaders
    lead_pos = rng.uniform(0.2 * canvas, 0.8 * canvas, (leaders, 2))
    lead_vel = rng.uniform(-1.0, 1.0, (leaders, 2)) * 0.02 * canvas
    fol_pos = rng.uniform(0.0, canvas, (followers, 2))
    if perturb_radius is None:
        perturb_radius = 1e-7 * canvas

    xs = np.empty(total * steps)
    ys = np.empty(total * steps)
    k = 0
    for _ in range(steps):
        lead_vel += rng.uniform(-1.0, 1.0, (leaders, 2)) * 0.005 * canvas
        speed = np.linalg.norm(lead_vel, axis=1, keepdims=True)
        cap = 0.03 * canvas
        lead_vel = np.where(speed > cap, lead_vel * (cap / speed), lead_vel)
        lead_pos = lead_pos + lead_vel
        for d in range(2):
            over = lead_pos[:, d] > canvas
            under = lead_pos[:, d] < 0.0
            lead_pos[over, d] = 2 * canvas - lead_pos[over, d]
            lead_pos[under, d] = -lead_pos[under, d]
            lead_vel[over | under, d] *= -1.0

        diff = lead_pos[None, :, :] - fol_pos[:, None, :]
        dist = np.linalg.norm(diff, axis=2)
        nearest = np.argmin(dist, axis=1)
        vec = diff[np.arange(followers), nearest]
        norm = np.linalg.norm(vec, axis=1, keepdims=True)
        norm[norm == 0.0] = 1.0
        fol_pos = fol_pos + step_length * vec / norm

        step_x = np.concatenate([lead_pos[:, 0], fol_pos[:, 0]])
        step_y = np.concatenate([lead_pos[:, 1], fol_pos[:, 1]])
        xs[k : k + total] = step_x
        ys[k : k + total] = step_y
        k += total

    xs, ys = _perturb(xs, ys, perturb_radius, rng)
    return Dataset(
        name=f"swarm-{followers}x{leaders}x{steps}",
        xs=xs,
        ys=ys,
        meta={
            "followers": followers,
            "leaders": leaders,
            "steps": steps,
            "seed": seed,
            "canvas": canvas,
            "step_length": step_length,
            "perturb_radius": perturb_radius,
            "stride": total,
        },
    )
