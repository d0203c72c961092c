"""Tracking-area layout, cell and beam membership, and user mobility.

The canonical deployment is a 4x4 grid of base stations at 200 m pitch,
origin-centered, with the tracking area extending half a pitch beyond the
outer sites.  Cells are the nearest-site regions; within a cell, beams tile
the plane as equal-area rings split into azimuth sectors, with the outermost
ring absorbing everything beyond the nominal cell radius so that beam lookup
is total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "BeamTiling",
    "MobilityClass",
    "POPULATION_SHARES",
    "TrackingArea",
    "advance_positions",
    "beam_of",
    "beams_of",
    "build_grid",
    "build_tracking_area",
    "make_beam_tiling",
    "reflect_into",
    "serving_cell",
    "serving_cells",
    "split_population",
    "step_random_walk",
]


class MobilityClass(Enum):
    STATIONARY = "stationary"
    LOW = "low"
    HIGH = "high"

    @property
    def speed_kmh(self) -> float:
        return {"stationary": 0.0, "low": 3.0, "high": 30.0}[self.value]

    @property
    def speed_mps(self) -> float:
        return self.speed_kmh * 1000.0 / 3600.0


POPULATION_SHARES = {
    MobilityClass.STATIONARY: 0.4,
    MobilityClass.LOW: 0.4,
    MobilityClass.HIGH: 0.2,
}


def split_population(total: int) -> dict[MobilityClass, int]:
    """Largest-remainder split of ``total`` users over the mobility mix."""
    if total < 0:
        raise ValueError(f"total must be >= 0, got {total}")
    classes = list(POPULATION_SHARES)
    exact = [POPULATION_SHARES[c] * total for c in classes]
    counts = [math.floor(x) for x in exact]
    leftover = total - sum(counts)
    by_remainder = sorted(range(len(classes)), key=lambda i: exact[i] - counts[i], reverse=True)
    for i in by_remainder[:leftover]:
        counts[i] += 1
    return dict(zip(classes, counts))


@dataclass(frozen=True)
class TrackingArea:
    """Base-station grid plus the rectangle users live in."""

    gnb_positions: np.ndarray  # (n_cells, 2), meters
    grid_shape: tuple[int, int]
    inter_site_distance: float
    bounds: tuple[float, float, float, float]  # xmin, ymin, xmax, ymax

    @property
    def n_cells(self) -> int:
        return len(self.gnb_positions)

    def contains(self, position) -> bool:
        x, y = position
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= x <= xmax and ymin <= y <= ymax


def build_grid(rows: int, cols: int, inter_site_distance: float = 200.0) -> TrackingArea:
    """Grid of sites centered at the origin, indexed row-major from the
    bottom-left corner (site 0 at the minimum x and y)."""
    if rows < 1 or cols < 1:
        raise ValueError("grid must have at least one row and one column")
    if inter_site_distance <= 0:
        raise ValueError("inter_site_distance must be > 0")
    xs = (np.arange(cols) - (cols - 1) / 2.0) * inter_site_distance
    ys = (np.arange(rows) - (rows - 1) / 2.0) * inter_site_distance
    positions = np.array([(x, y) for y in ys for x in xs], dtype=float)
    half = inter_site_distance / 2.0
    bounds = (float(xs[0] - half), float(ys[0] - half), float(xs[-1] + half), float(ys[-1] + half))
    return TrackingArea(
        gnb_positions=positions,
        grid_shape=(rows, cols),
        inter_site_distance=float(inter_site_distance),
        bounds=bounds,
    )


def build_tracking_area() -> TrackingArea:
    """The canonical 16-site deployment: 4x4 grid at 200 m pitch."""
    return build_grid(4, 4, 200.0)


def serving_cell(area: TrackingArea, position) -> int:
    """Index of the nearest site; ties break toward the lowest index."""
    if not area.contains(position):
        raise ValueError(f"position {tuple(position)} outside tracking area bounds {area.bounds}")
    d2 = ((area.gnb_positions - np.asarray(position, dtype=float)) ** 2).sum(axis=1)
    return int(np.argmin(d2))


def serving_cells(area: TrackingArea, positions: np.ndarray) -> np.ndarray:
    """Vectorized nearest-site lookup for an (n, 2) position array."""
    diff = positions[:, None, :] - area.gnb_positions[None, :, :]
    d2 = (diff**2).sum(axis=2)
    return np.argmin(d2, axis=1)


@dataclass(frozen=True)
class BeamTiling:
    """Equal-area ring/sector beam layout around one site.

    Ring outer radii are chosen so each ring's disk share is proportional to
    its sector count, making every beam cover the same area inside the
    nominal radius.  The outermost ring extends to infinity so that points
    past the nominal radius (cell corners) still map to a beam.
    """

    total_beams: int
    sectors_per_ring: tuple[int, ...]
    cell_radius: float
    ring_radii: tuple[float, ...]  # outer radius per ring; last equals cell_radius

    @property
    def rings(self) -> int:
        return len(self.sectors_per_ring)

    @property
    def ring_offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.sectors_per_ring:
            out.append(acc)
            acc += s
        return tuple(out)


def make_beam_tiling(total_beams: int, cell_radius: float = 100.0, rings: int | None = None) -> BeamTiling:
    if total_beams < 1:
        raise ValueError(f"total_beams must be >= 1, got {total_beams}")
    if cell_radius <= 0:
        raise ValueError(f"cell_radius must be > 0, got {cell_radius}")
    if rings is None:
        rings = max(1, round(math.sqrt(total_beams / 4.0)))
    rings = min(rings, total_beams)
    base, rem = divmod(total_beams, rings)
    sectors = [base] * rings
    for i in range(rem):  # outer rings take the extras: more circumference there
        sectors[rings - 1 - i] += 1
    cum = np.cumsum(sectors) / total_beams
    radii = tuple(float(cell_radius * math.sqrt(c)) for c in cum)
    return BeamTiling(
        total_beams=total_beams,
        sectors_per_ring=tuple(sectors),
        cell_radius=float(cell_radius),
        ring_radii=radii,
    )


def beam_of(area: TrackingArea, tiling: BeamTiling, position, gnb: int) -> int:
    """Beam index of a point within the given site's tiling.

    Ring by radial distance (outer ring unbounded), sector by azimuth; stable
    under repeated calls.
    """
    dx = position[0] - area.gnb_positions[gnb, 0]
    dy = position[1] - area.gnb_positions[gnb, 1]
    r = math.hypot(dx, dy)
    ring = int(np.searchsorted(tiling.ring_radii[:-1], r, side="right"))
    sectors = tiling.sectors_per_ring[ring]
    az = math.atan2(dy, dx) % (2.0 * math.pi)
    sector = min(int(az / (2.0 * math.pi / sectors)), sectors - 1)
    return tiling.ring_offsets[ring] + sector


def beams_of(area: TrackingArea, tiling: BeamTiling, positions: np.ndarray, gnbs: np.ndarray) -> np.ndarray:
    """Vectorized beam lookup; ``gnbs`` gives each position's serving site."""
    rel = positions - area.gnb_positions[gnbs]
    r = np.hypot(rel[:, 0], rel[:, 1])
    rings = np.searchsorted(np.asarray(tiling.ring_radii[:-1]), r, side="right")
    sectors = np.asarray(tiling.sectors_per_ring)[rings]
    az = np.arctan2(rel[:, 1], rel[:, 0]) % (2.0 * math.pi)
    sector = np.minimum((az / (2.0 * math.pi / sectors)).astype(np.int64), sectors - 1)
    return np.asarray(tiling.ring_offsets)[rings] + sector


def reflect_into(values: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Fold coordinates back into [lo, hi] by mirror reflection."""
    span = hi - lo
    folded = np.mod(values - lo, 2.0 * span)
    folded = np.where(folded > span, 2.0 * span - folded, folded)
    return lo + folded


def step_random_walk(position, mobility: MobilityClass, dt: float, rng: np.random.Generator,
                     area: TrackingArea):
    """One random-walk step: direction uniform on [0, 2pi), redrawn per step,
    reflected at the tracking-area bounds.  Stationary users do not move."""
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    if mobility is MobilityClass.STATIONARY:
        return (float(position[0]), float(position[1]))
    theta = rng.uniform(0.0, 2.0 * math.pi)
    step = mobility.speed_mps * dt
    x = position[0] + step * math.cos(theta)
    y = position[1] + step * math.sin(theta)
    xmin, ymin, xmax, ymax = area.bounds
    x = float(reflect_into(np.asarray(x), xmin, xmax))
    y = float(reflect_into(np.asarray(y), ymin, ymax))
    return (x, y)


def advance_positions(positions: np.ndarray, step_lengths: np.ndarray,
                      rng: np.random.Generator, area: TrackingArea) -> np.ndarray:
    """Vectorized walk step for all users at once.

    ``step_lengths`` holds each user's speed*dt; zero entries stay put but a
    direction is drawn only for the movers, keeping the stream independent of
    how many users are stationary.
    """
    moving = step_lengths > 0
    out = positions.copy()
    n_moving = int(moving.sum())
    if n_moving:
        theta = rng.uniform(0.0, 2.0 * math.pi, size=n_moving)
        steps = step_lengths[moving]
        out[moving, 0] += steps * np.cos(theta)
        out[moving, 1] += steps * np.sin(theta)
        xmin, ymin, xmax, ymax = area.bounds
        out[moving, 0] = reflect_into(out[moving, 0], xmin, xmax)
        out[moving, 1] = reflect_into(out[moving, 1], ymin, ymax)
    return out
