"""Measurement data handling: CSV ingest, cleaning, normalization, splits.

A measurement row stores latitude/longitude as non-negative integers scaled
by 1e6 (21.005246 deg -> 21005246), the distance to the transmitter in
meters, and the received signal strength in dB.  Model inputs keep only the
four low-order digits of each scaled coordinate, mapped to [0, 1): over a
campus-sized survey area the high digits never change, so the low digits
carry all the positional information.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import CsvParseError, InvalidCoordinateError, SplitError

CSV_COLUMNS = ("sample", "lat", "lon", "distance", "rssi")

COORD_MODULUS = 10000


@dataclass(frozen=True)
class GeoSample:
    """One measurement row."""

    latitude_e6: int
    longitude_e6: int
    distance_m: float
    rssi_db: float


@dataclass(frozen=True)
class CleanBounds:
    """Validity ranges applied by :func:`clean`."""

    rssi_min_db: float = -130.0
    rssi_max_db: float = 0.0
    coord_min_e6: int = 0
    coord_max_e6: int = 1_000_000_000


@dataclass(frozen=True, eq=False)
class Dataset:
    """Featurized samples ready for model fitting.

    X is (n, d) float64, y is (n,) float64; column order follows
    feature_names.  provenance records where the data came from (file path
    or generator seed string).
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...]
    provenance: str = ""

    def __post_init__(self):
        if self.X.ndim != 2 or self.y.ndim != 1 or self.X.shape[0] != self.y.shape[0]:
            raise SplitError("X must be (n, d) and y (n,) with matching n")
        if self.X.shape[0] == 0:
            raise SplitError("dataset is empty")
        if self.X.shape[1] != len(self.feature_names):
            raise SplitError("feature_names does not match X columns")

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def normalize_coordinate(l: int) -> float:
    """Map a scaled integer coordinate to [0, 1) by keeping its low 4 digits.

    The modulus is taken on the integer, never on a float.
    """
    l = int(l)
    if l < 0:
        raise InvalidCoordinateError(f"negative coordinate: {l}")
    return (l % COORD_MODULUS) / COORD_MODULUS


def featurize(sample: GeoSample, use_distance: bool = True) -> np.ndarray:
    """Model input for one sample: (lat_norm, lon_norm[, distance_m])."""
    lat = normalize_coordinate(sample.latitude_e6)
    lon = normalize_coordinate(sample.longitude_e6)
    if use_distance:
        return np.array([lat, lon, sample.distance_m], dtype=np.float64)
    return np.array([lat, lon], dtype=np.float64)


def feature_names(use_distance: bool = True) -> tuple[str, ...]:
    if use_distance:
        return ("lat_norm", "lon_norm", "distance_m")
    return ("lat_norm", "lon_norm")


def load_csv(path, schema=CSV_COLUMNS) -> list[GeoSample]:
    """Read measurement rows from a CSV file.

    The header must equal `schema` (default: sample,lat,lon,distance,rssi).
    Raises CsvParseError naming the offending line on any malformed content.
    Both LF and CRLF files parse.
    """
    schema = tuple(schema)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise CsvParseError(f"cannot open {path}: {e.strerror}") from e
    samples = []
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvParseError("missing header row", line=1)
        if tuple(h.strip() for h in header) != schema:
            raise CsvParseError(
                f"header {header!r} does not match schema {list(schema)!r}", line=1
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(schema):
                raise CsvParseError(
                    f"expected {len(schema)} columns, got {len(row)}", line=lineno
                )
            try:
                lat = int(row[1])
                lon = int(row[2])
                dist = float(row[3])
                rssi = float(row[4])
            except ValueError as e:
                raise CsvParseError(f"non-numeric cell: {e}", line=lineno) from e
            samples.append(GeoSample(lat, lon, dist, rssi))
    return samples


def write_csv(samples, path) -> None:
    """Write measurement rows in the load_csv format (LF line endings)."""
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(CSV_COLUMNS) + "\n")
        for i, s in enumerate(samples, start=1):
            fh.write(
                f"{i},{s.latitude_e6},{s.longitude_e6},{s.distance_m!r},{s.rssi_db!r}\n"
            )


def clean(samples, bounds: CleanBounds = CleanBounds()):
    """Drop invalid rows; keep original order.

    Removes rows with non-finite values, out-of-bounds RSSI or coordinates,
    negative distances, and exact duplicate (lat, lon, rssi) triples (the
    first occurrence is kept).  Returns (kept, rejected_count).
    """
    kept = []
    seen = set()
    rejected = 0
    for s in samples:
        ok = (
            np.isfinite(s.distance_m)
            and np.isfinite(s.rssi_db)
            and s.distance_m >= 0.0
            and bounds.rssi_min_db <= s.rssi_db <= bounds.rssi_max_db
            and bounds.coord_min_e6 <= s.latitude_e6 <= bounds.coord_max_e6
            and bounds.coord_min_e6 <= s.longitude_e6 <= bounds.coord_max_e6
        )
        key = (s.latitude_e6, s.longitude_e6, s.rssi_db)
        if not ok or key in seen:
            rejected += 1
            continue
        seen.add(key)
        kept.append(s)
    return kept, rejected


def build_dataset(samples, use_distance: bool = True, provenance: str = "") -> Dataset:
    """Featurize a list of GeoSamples into a Dataset."""
    if not samples:
        raise SplitError("no samples to build a dataset from")
    X = np.empty((len(samples), 3 if use_distance else 2), dtype=np.float64)
    y = np.empty(len(samples), dtype=np.float64)
    for i, s in enumerate(samples):
        X[i, 0] = normalize_coordinate(s.latitude_e6)
        X[i, 1] = normalize_coordinate(s.longitude_e6)
        if use_distance:
            X[i, 2] = s.distance_m
        y[i] = s.rssi_db
    return Dataset(X, y, feature_names(use_distance), provenance)


def split(dataset: Dataset, train_count: int, seed: int):
    """Seeded uniform shuffle, first train_count rows to train, rest to test.

    The two halves partition the input exactly and the same seed always
    produces the same partition.
    """
    n = len(dataset)
    if not 0 < train_count < n:
        raise SplitError(f"train_count {train_count} not in (0, {n})")
    perm = np.random.default_rng(seed).permutation(n)
    tr, te = perm[:train_count], perm[train_count:]
    return (
        Dataset(dataset.X[tr], dataset.y[tr], dataset.feature_names, dataset.provenance),
        Dataset(dataset.X[te], dataset.y[te], dataset.feature_names, dataset.provenance),
    )
