"""Window approximation by the star-mapped contractive iterated maps.

The acceptance windows solve W_i = union_j union_t (A W_j + t*) with A
the internal contraction; iterating the maps from any seed converges in
Hausdorff distance at the contraction rate.  Clouds are dyadic-grid
snapped point sets: one representation covers intervals, Cantorvals and
fractal hexagons alike, and the occupied-cell count gives the Lebesgue
volume with an explicit one-boundary-layer bracket.

For one-dimensional models the interval hulls of the window components
satisfy the induced endpoint recursion exactly, so hull endpoints are
computed to near machine precision independently of the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import ModelSpec
from .svg import PALETTE, SvgCanvas

__all__ = ["WindowCloud", "seed_clouds", "ifs_step", "iterate_windows",
           "volume", "hull_intervals", "render_windows",
           "box_counting_dimension", "TWISTED_BOUNDARY_DIM",
           "CAP_BOUNDARY_DIM"]

# Documented boundary-dimension constants (read-only diagnostics).
# Twisted silver: log(x_max)/log(1+sqrt2) with x_max the largest root of
# x^3 - 2x^2 - 1; CAP window: log(2+sqrt3)/(2 log tau).
_ROOTS = np.roots([1.0, -2.0, 0.0, -1.0])
TWISTED_BOUNDARY_DIM = float(
    math.log(max(r.real for r in _ROOTS if abs(r.imag) < 1e-12))
    / math.log(1.0 + math.sqrt(2.0)))
CAP_BOUNDARY_DIM = float(
    math.log(2.0 + math.sqrt(3.0)) / (2.0 * math.log((1.0 + math.sqrt(5.0)) / 2.0)))


@dataclass(frozen=True)
class WindowCloud:
    """Per-type grid-snapped clouds in internal space."""

    cells: tuple           # per type: (m, d) int64 array of occupied cells
    cell_size: float
    generation: int

    @property
    def n_types(self) -> int:
        return len(self.cells)

    @property
    def dim(self) -> int:
        return self.cells[0].shape[1]

    def points(self, i: int) -> np.ndarray:
        """Cell-center coordinates of type i."""
        return self.cells[i].astype(float) * self.cell_size


def _star_maps(model: ModelSpec):
    disp = model.require_displacement()
    A = model.int_contraction_matrix
    maps = []
    for i in range(disp.n):
        row = []
        for j in range(disp.n):
            if disp.entries[i][j]:
                row.append(np.array([t.embed_int() for t in disp.entries[i][j]]))
            else:
                row.append(None)
        maps.append(row)
    return A, maps


def default_cell_size(model: ModelSpec, resolution: int | None = None) -> float:
    """Grid resolution: 2^-resolution of a window diameter bound."""
    disp = model.require_displacement()
    A = model.int_contraction_matrix
    contr = float(np.linalg.norm(A, 2))
    tmax = max((float(np.linalg.norm(t.embed_int()))
                for _, _, t in disp.iter_translations()), default=1.0)
    diam_bound = tmax / (1.0 - contr)
    if resolution is None:
        resolution = 10 if model.dim == 1 else 9
    return diam_bound * 2.0 ** (-resolution)


def seed_clouds(model: ModelSpec, cell_size: float | None = None,
                resolution: int | None = None) -> WindowCloud:
    """Single point 0 per type (0 lies in every window closure here)."""
    if cell_size is None:
        cell_size = default_cell_size(model, resolution)
    z = np.zeros((1, model.dim), dtype=np.int64)
    return WindowCloud(tuple(z.copy() for _ in range(model.n_tiles)),
                       float(cell_size), 0)


def ifs_step(cloud: WindowCloud, model: ModelSpec) -> WindowCloud:
    """One application of the star-mapped inflation maps, grid-deduplicated."""
    A, maps = _star_maps(model)
    h = cloud.cell_size
    out = []
    for i in range(cloud.n_types):
        chunks = []
        for j in range(cloud.n_types):
            tstars = maps[i][j]
            if tstars is None or cloud.cells[j].size == 0:
                continue
            pts = cloud.cells[j].astype(float) * h
            mapped = pts @ A.T                      # rows: A @ p
            for t in tstars:
                chunks.append(mapped + t)
        if chunks:
            allpts = np.vstack(chunks)
            snapped = np.unique(np.round(allpts / h).astype(np.int64), axis=0)
        else:
            snapped = np.zeros((0, cloud.dim), dtype=np.int64)
        out.append(snapped)
    return WindowCloud(tuple(out), h, cloud.generation + 1)


def iterate_windows(model: ModelSpec, generations: int,
                    cell_size: float | None = None,
                    resolution: int | None = None) -> WindowCloud:
    cloud = seed_clouds(model, cell_size, resolution)
    for _ in range(generations):
        cloud = ifs_step(cloud, model)
    return cloud


def _cell_keys(cells: np.ndarray):
    """Encode integer cells as sorted unique int64 keys plus the encoding."""
    if cells.shape[1] == 1:
        keys = cells[:, 0].astype(np.int64)
        enc = (np.array([0]), np.array([1], dtype=np.int64))
    else:
        mins = cells.min(axis=0) - 2
        spans = cells.max(axis=0) - mins + 4
        mult = np.array([spans[1], 1], dtype=np.int64)
        keys = (cells[:, 0] - mins[0]) * mult[0] + (cells[:, 1] - mins[1])
        enc = (mins, mult)
    return np.sort(keys), enc


def _interior_mask(cells: np.ndarray) -> np.ndarray:
    """True for occupied cells whose axis neighbors are all occupied."""
    if cells.size == 0:
        return np.zeros(0, dtype=bool)
    d = cells.shape[1]
    keys, (mins, mult) = _cell_keys(cells)
    if d == 1:
        own = cells[:, 0].astype(np.int64)
        offsets = [1, -1]
    else:
        own = (cells[:, 0] - mins[0]) * mult[0] + (cells[:, 1] - mins[1])
        offsets = [mult[0], -mult[0], 1, -1]
    mask = np.ones(len(cells), dtype=bool)
    for off in offsets:
        idx = np.searchsorted(keys, own + off)
        idx = np.clip(idx, 0, len(keys) - 1)
        mask &= keys[idx] == own + off
    return mask


def _boundary_count(cells: np.ndarray) -> int:
    if cells.size == 0:
        return 0
    return int(len(cells) - _interior_mask(cells).sum())


def volume(cloud: WindowCloud, per_type: bool = False):
    """Occupied-cell volume with a one-boundary-layer bracket.

    Returns (value, bracket) with value = occupied cells x cell measure
    and bracket = boundary cells x cell measure.  The occupied count
    systematically overshoots by part of the boundary layer, so
    ``value - bracket/2`` is the better point estimate; this only
    converges usefully when the boundary dimension is well below the
    ambient dimension (silver/CAP windows, not the Cantorvals).
    """
    h = cloud.cell_size
    d = cloud.dim
    cell_vol = h ** d
    if per_type:
        return [(c.shape[0] * cell_vol, _boundary_count(c) * cell_vol)
                for c in cloud.cells]
    union = np.unique(np.vstack([c for c in cloud.cells]), axis=0) \
        if cloud.cells else np.zeros((0, d), np.int64)
    return union.shape[0] * cell_vol, _boundary_count(union) * cell_vol


def interior_cells(cloud: WindowCloud, i: int) -> set:
    """Occupied cells of type i whose axis neighbors are all occupied."""
    cells = cloud.cells[i]
    if cells.size == 0:
        return set()
    return set(map(tuple, cells[_interior_mask(cells)]))


def window_volume_from_patch(model: ModelSpec, steps: int = 12):
    """Total window volume via the point density of an inflation patch.

    Regular model sets equidistribute in their window, so the window
    volume equals point density times the lattice covolume.  The patch
    estimate converges at the inflation rate, which makes this the only
    practical route when the window boundary dimension is close to the
    ambient dimension (the twisted Cantorval windows).
    """
    from .inflation import inflate, seed_patch
    patch = inflate(seed_patch(model), model, steps)
    pos = patch.positions_phys()
    if model.dim == 1:
        xs = pos[:, 0]
        measure = float(xs.max() - xs.min())
        count = len(xs) - 1
    else:
        center = pos.mean(axis=0)
        r = 0.6 * float(np.linalg.norm(pos - center, axis=1).max())
        count = int((np.linalg.norm(pos - center, axis=1) <= r).sum())
        measure = float(np.pi * r * r)
    dens = count / measure
    return dens * model.lattice.covolume


def hull_intervals(model: ModelSpec, steps: int = 80) -> list:
    """Exact-endpoint interval hulls of the window components (1d only).

    The convex hulls of the attractor components satisfy the interval
    recursion induced by the maps; iterating it from [0, 0] converges
    geometrically to the hull endpoints.
    """
    if model.dim != 1:
        raise ValueError("hull intervals only defined for 1d internal space")
    disp = model.require_displacement()
    a = float(model.contraction.embed_phys()[0])
    tstars = [[[float(t.embed_int()[0]) for t in cell] for cell in row]
              for row in disp.entries]
    n = disp.n
    hulls = [(0.0, 0.0)] * n
    for _ in range(steps):
        nxt = []
        for i in range(n):
            lo, hi = math.inf, -math.inf
            for j in range(n):
                for t in tstars[i][j]:
                    e1 = a * hulls[j][0] + t
                    e2 = a * hulls[j][1] + t
                    lo = min(lo, e1, e2)
                    hi = max(hi, e1, e2)
            nxt.append((lo, hi))
        hulls = nxt
    return hulls


def box_counting_dimension(cloud: WindowCloud, levels: int = 4):
    """Optional diagnostic: box-count slope over coarsened grids.

    Convergence is slow; no acceptance threshold is attached to this.
    """
    union = np.unique(np.vstack([c for c in cloud.cells]), axis=0)
    sizes, counts = [], []
    for lev in range(levels):
        factor = 2 ** lev
        coarse = np.unique(union // factor, axis=0)
        sizes.append(cloud.cell_size * factor)
        counts.append(coarse.shape[0])
    logs = np.log(np.array(sizes))
    logn = np.log(np.array(counts, dtype=float))
    slope = np.polyfit(logs, logn, 1)[0]
    return float(-slope)


def render_windows(cloud: WindowCloud, path, model: ModelSpec | None = None,
                   zoom=None) -> None:
    """Per-type colored rendering; intervals as strips in 1d, cells in 2d.

    Orientation classes of one shape share a color (the CAP window shows
    four colored regions).  ``zoom=(lo, hi)`` adds a magnified strip
    below the main 1d plot.
    """
    labels = model.tile_labels if model is not None else None
    ori = model.orientations if model is not None else None
    if cloud.dim == 1:
        _render_1d(cloud, path, labels, zoom)
    else:
        _render_2d(cloud, path, ori)


def _render_1d(cloud, path, labels, zoom):
    h = cloud.cell_size
    pts = [cloud.points(i)[:, 0] if cloud.cells[i].size else np.zeros(0)
           for i in range(cloud.n_types)]
    finite = [p for p in pts if p.size]
    if not finite:
        SvgCanvas((0, 0, 1, 1)).write(path)
        return
    x0 = min(p.min() for p in finite) - h
    x1 = max(p.max() for p in finite) + h
    rows = cloud.n_types + (1 if zoom else 0)
    canvas = SvgCanvas((x0, 0.0, x1, 0.22 * (x1 - x0) * rows), size=900, margin=24)
    band = 0.18 * (x1 - x0)
    for i, p in enumerate(pts):
        y = 0.22 * (x1 - x0) * (cloud.n_types - 1 - i)
        color = PALETTE[i % len(PALETTE)]
        for x in p:
            canvas.rect(x - h / 2, y, h, band, color=color)
        if labels:
            canvas.text(x0, y + band / 2, labels[i])
    if zoom:
        lo, hi = zoom
        y = 0.22 * (x1 - x0) * (rows - 1)
        span = hi - lo
        scale = (x1 - x0) / span if span > 0 else 1.0
        for i, p in enumerate(pts):
            sel = p[(p >= lo) & (p <= hi)]
            color = PALETTE[i % len(PALETTE)]
            sub = band / cloud.n_types
            for x in sel:
                canvas.rect(x0 + (x - lo) * scale, y + i * sub,
                            h * scale, sub, color=color, opacity=0.9)
        canvas.text(x0, y + band, f"zoom [{lo:.6g}, {hi:.6g}]")
    canvas.write(path)


def _render_2d(cloud, path, orientations):
    boxes = [c for c in cloud.cells if c.size]
    if not boxes:
        SvgCanvas((0, 0, 1, 1)).write(path)
        return
    h = cloud.cell_size
    allc = np.vstack(boxes).astype(float) * h
    x0, y0 = allc.min(axis=0) - h
    x1, y1 = allc.max(axis=0) + h
    canvas = SvgCanvas((x0, y0, x1, y1), size=900, margin=24)
    for i in range(cloud.n_types):
        if not cloud.cells[i].size:
            continue
        group = i // orientations if orientations else i
        color = PALETTE[group % len(PALETTE)]
        for x, y in cloud.points(i):
            canvas.rect(x - h / 2, y - h / 2, h, h, color=color, opacity=0.85)
    canvas.write(path)
