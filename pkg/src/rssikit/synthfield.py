"""Seeded synthetic RSSI fields.

The measured survey data behind the original experiments is not published,
so experiments here run on a log-distance path-loss field with log-normal
shadowing: rssi(d) = p0 - 10*n*log10(max(d, d0)/d0) + N(0, sigma^2).  The
clamp at d0 avoids the singularity at the transmitter.  A bounded random
walk around the transmitter emulates a person surveying the coverage area.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import GeoSample

# default transmitter location shares the survey-data coordinate scaling;
# it sits well clear of a 10000-unit normalization boundary at radius 150 m
DEFAULT_TX_LAT_E6 = 21005246
DEFAULT_TX_LON_E6 = 105842200


@dataclass(frozen=True)
class FieldModel:
    """Log-distance path-loss field with optional log-normal shadowing.

    meters_per_e6 converts one 1e-6-degree step to meters (a single local
    scale factor; no geodesy).
    """

    tx_lat_e6: int = DEFAULT_TX_LAT_E6
    tx_lon_e6: int = DEFAULT_TX_LON_E6
    p0_db: float = -30.0
    d0_m: float = 1.0
    exponent_n: float = 3.0
    shadow_sigma_db: float = 4.0
    meters_per_e6: float = 0.111

    def __post_init__(self):
        if self.d0_m <= 0 or self.exponent_n <= 0 or self.shadow_sigma_db < 0:
            raise ValueError("require d0_m > 0, exponent_n > 0, shadow_sigma_db >= 0")
        if self.meters_per_e6 <= 0:
            raise ValueError("meters_per_e6 must be positive")


def distance_m(field: FieldModel, lat_e6, lon_e6):
    """Euclidean transmitter distance in meters (scalar or ndarray inputs)."""
    dlat = (np.asarray(lat_e6, dtype=np.float64) - field.tx_lat_e6) * field.meters_per_e6
    dlon = (np.asarray(lon_e6, dtype=np.float64) - field.tx_lon_e6) * field.meters_per_e6
    return np.hypot(dlat, dlon)


def eval_field(field: FieldModel, lat_e6, lon_e6, noise_db=0.0):
    """Field RSSI at a position, plus an optional externally drawn noise term."""
    d = distance_m(field, lat_e6, lon_e6)
    d = np.maximum(d, field.d0_m)
    rssi = field.p0_db - 10.0 * field.exponent_n * np.log10(d / field.d0_m) + noise_db
    if np.ndim(rssi) == 0:
        return float(rssi)
    return rssi


def generate_walk(
    field: FieldModel,
    count: int,
    radius_m: float = 150.0,
    seed: int = 0,
    step_m: float = 5.0,
) -> list[GeoSample]:
    """Sample `count` positions of a bounded random walk around the transmitter.

    The unbounded Gaussian walk is folded radially back into the disc of
    radius_m, which keeps the path continuous while guaranteeing every
    sample stays inside.  Each sample records its true distance (from the
    integer-quantized position) and the field RSSI with shadowing.  The same
    seed reproduces the same samples exactly.
    """
    if count <= 0 or radius_m <= 0:
        raise ValueError("count and radius_m must be positive")
    if radius_m <= 2.0 * field.meters_per_e6:
        raise ValueError("radius_m too small for the coordinate quantum")
    rng = np.random.default_rng(seed)
    steps = rng.normal(0.0, step_m, size=(count, 2))
    noise = rng.normal(0.0, field.shadow_sigma_db, size=count)

    # fold inside a slightly smaller disc so that rounding positions to the
    # integer coordinate grid cannot push a distance past radius_m
    fold_r = radius_m - field.meters_per_e6
    pos = np.cumsum(steps, axis=0)
    r = np.hypot(pos[:, 0], pos[:, 1])
    folded = fold_r - np.abs(fold_r - np.mod(r, 2.0 * fold_r))
    scale = np.where(r > 0.0, folded / np.where(r > 0.0, r, 1.0), 0.0)
    pos = pos * scale[:, None]

    lat = field.tx_lat_e6 + np.rint(pos[:, 0] / field.meters_per_e6).astype(np.int64)
    lon = field.tx_lon_e6 + np.rint(pos[:, 1] / field.meters_per_e6).astype(np.int64)
    d = distance_m(field, lat, lon)
    rssi = eval_field(field, lat, lon) + noise

    return [
        GeoSample(int(lat[i]), int(lon[i]), float(d[i]), float(rssi[i]))
        for i in range(count)
    ]
