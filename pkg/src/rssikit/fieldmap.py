"""Predicted-RSSI lattices over a bounding box, and their exports.

Grids are evaluated at cell centers with the same featurization used for
training; when the model was trained with the distance feature, the
transmitter position is required so each cell's distance can be computed.
Exports: a CSV matrix with a bounds comment, or a binary 8-bit PGM where
the grid's [min, max] maps affinely onto [0, 255] (half-up rounding; a
constant grid maps to all-zero pixels by convention).  Row 0 of the value
matrix is the lowest-latitude row.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import COORD_MODULUS
from .errors import GridError
from .metrics import MetricPair, metric_pair
from .synthfield import FieldModel, eval_field


@dataclass(frozen=True, eq=False)
class HeatmapGrid:
    lat_min_e6: int
    lat_max_e6: int
    lon_min_e6: int
    lon_max_e6: int
    values: np.ndarray  # (rows, cols), row-major, row 0 at lat_min

    def __post_init__(self):
        if self.lat_min_e6 >= self.lat_max_e6 or self.lon_min_e6 >= self.lon_max_e6:
            raise GridError("grid bounds must be ordered")
        if self.values.ndim != 2 or min(self.values.shape) < 2:
            raise GridError("grid needs at least 2 rows and 2 columns")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def bounds(self):
        return (self.lat_min_e6, self.lat_max_e6, self.lon_min_e6, self.lon_max_e6)


def cell_centers(bounds, rows: int, cols: int):
    """Cell-center coordinate vectors (lat, lon) for a rows x cols lattice."""
    lat_min, lat_max, lon_min, lon_max = bounds
    lat_step = (lat_max - lat_min) / rows
    lon_step = (lon_max - lon_min) / cols
    lat = lat_min + (np.arange(rows) + 0.5) * lat_step
    lon = lon_min + (np.arange(cols) + 0.5) * lon_step
    return lat, lon


def _grid_features(bounds, rows, cols, tx_position, use_distance, meters_per_e6):
    lat, lon = cell_centers(bounds, rows, cols)
    glat, glon = np.meshgrid(lat, lon, indexing="ij")
    cols_list = [
        np.mod(glat.ravel(), float(COORD_MODULUS)) / COORD_MODULUS,
        np.mod(glon.ravel(), float(COORD_MODULUS)) / COORD_MODULUS,
    ]
    if use_distance:
        if tx_position is None:
            raise GridError("tx_position is required to compute the distance feature")
        tx_lat, tx_lon = tx_position
        d = np.hypot(glat.ravel() - tx_lat, glon.ravel() - tx_lon) * meters_per_e6
        cols_list.append(d)
    return np.column_stack(cols_list)


def predict_grid(
    model,
    bounds,
    rows: int,
    cols: int,
    tx_position=None,
    use_distance: bool = True,
    meters_per_e6: float = 0.111,
) -> HeatmapGrid:
    """Evaluate a fitted model at every cell center of the lattice."""
    if rows < 2 or cols < 2:
        raise GridError("rows and cols must be >= 2")
    X = _grid_features(bounds, rows, cols, tx_position, use_distance, meters_per_e6)
    values = np.asarray(model.predict(X), dtype=np.float64).reshape(rows, cols)
    return HeatmapGrid(*map(int, bounds), values)


def field_grid(field: FieldModel, bounds, rows: int, cols: int) -> HeatmapGrid:
    """Ground-truth lattice of a synthetic field, without shadowing."""
    if rows < 2 or cols < 2:
        raise GridError("rows and cols must be >= 2")
    lat, lon = cell_centers(bounds, rows, cols)
    glat, glon = np.meshgrid(lat, lon, indexing="ij")
    values = eval_field(field, glat, glon)
    return HeatmapGrid(*map(int, bounds), np.asarray(values, dtype=np.float64))


def to_pgm_bytes(grid: HeatmapGrid) -> bytes:
    """Binary P5, maxval 255; higher RSSI never maps to a darker pixel."""
    v = grid.values
    lo = float(v.min())
    hi = float(v.max())
    if hi > lo:
        scaled = (v - lo) * (255.0 / (hi - lo))
        pixels = np.floor(scaled + 0.5).astype(np.uint8)  # half-up
    else:
        pixels = np.zeros_like(v, dtype=np.uint8)
    header = f"P5\n{grid.cols} {grid.rows}\n255\n".encode("ascii")
    return header + pixels.tobytes()


def export_grid(grid: HeatmapGrid, fmt: str, path) -> None:
    if fmt == "pgm":
        with open(path, "wb") as fh:
            fh.write(to_pgm_bytes(grid))
        return
    if fmt == "csv":
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(
                f"# bounds {grid.lat_min_e6} {grid.lat_max_e6}"
                f" {grid.lon_min_e6} {grid.lon_max_e6}\n"
            )
            for row in grid.values:
                fh.write(",".join(repr(float(x)) for x in row) + "\n")
        return
    raise GridError(f"unknown grid format {fmt!r}")


def load_grid_csv(path) -> HeatmapGrid:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if header[:2] != ["#", "bounds"] or len(header) != 6:
            raise GridError(f"{path}: missing bounds comment")
        bounds = tuple(int(b) for b in header[2:])
        values = [
            [float(c) for c in ln.split(",")] for ln in fh if ln.strip()
        ]
    return HeatmapGrid(*bounds, np.array(values, dtype=np.float64))


def overlay_compare(grid_a: HeatmapGrid, grid_b: HeatmapGrid) -> MetricPair:
    """Cell-wise MAE/MSE between two grids of identical shape and bounds."""
    if grid_a.values.shape != grid_b.values.shape or grid_a.bounds != grid_b.bounds:
        raise GridError("grids differ in shape or bounds")
    return metric_pair(grid_a.values.ravel(), grid_b.values.ravel())
