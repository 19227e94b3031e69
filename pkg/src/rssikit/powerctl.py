"""Threshold-rule transmit-power controller and its closed-loop simulation.

One control step compares the measured RSSI against a quality band: below
the low threshold the transmitter raises power by a fixed step, above the
high threshold it lowers by the same step, otherwise it holds.  Commands
clamp to the actuator bounds.  The simulation models received power as the
channel's base value plus (tx_power - reference tx power), i.e. power
superposes linearly in dB.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .synthfield import FieldModel, eval_field

RAISE = "raise"
LOWER = "lower"
HOLD = "hold"


@dataclass(frozen=True)
class ControllerConfig:
    low_threshold_db: float = -60.0
    high_threshold_db: float = -40.0
    step_db: float = 1.0
    tx_min_db: float = -10.0
    tx_max_db: float = 30.0
    period_ms: int = 100

    def __post_init__(self):
        if self.low_threshold_db >= self.high_threshold_db:
            raise ValueError("low_threshold_db must be below high_threshold_db")
        if self.tx_min_db >= self.tx_max_db:
            raise ValueError("tx_min_db must be below tx_max_db")
        if self.step_db <= 0 or self.period_ms <= 0:
            raise ValueError("step_db and period_ms must be positive")


def control_step(config: ControllerConfig, measured_rssi_db: float, current_tx_db: float):
    """One controller decision; returns (action, new_tx_db)."""
    if measured_rssi_db < config.low_threshold_db:
        return RAISE, min(current_tx_db + config.step_db, config.tx_max_db)
    if measured_rssi_db > config.high_threshold_db:
        return LOWER, max(current_tx_db - config.step_db, config.tx_min_db)
    return HOLD, current_tx_db


@dataclass(frozen=True, eq=False)
class PowerControlTrace:
    t_ms: np.ndarray
    rssi_db: np.ndarray
    actions: tuple[str, ...]
    tx_db: np.ndarray  # commanded power after each step's action

    def __len__(self) -> int:
        return len(self.actions)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            fh.write("t_ms,rssi_db,action,tx_db\n")
            for t, r, a, p in zip(self.t_ms, self.rssi_db, self.actions, self.tx_db):
                fh.write(f"{int(t)},{float(r)!r},{a},{float(p)!r}\n")


def regressor_channel(model, use_distance=True, tx_position=None, meters_per_e6=0.111):
    """Adapt a fitted regressor into a (lat_e6, lon_e6) -> rssi channel."""
    from .dataset import COORD_MODULUS

    def channel(lat_e6, lon_e6):
        row = [
            (lat_e6 % COORD_MODULUS) / COORD_MODULUS,
            (lon_e6 % COORD_MODULUS) / COORD_MODULUS,
        ]
        if use_distance:
            if tx_position is None:
                raise ValueError("tx_position required for the distance feature")
            d = float(
                np.hypot(lat_e6 - tx_position[0], lon_e6 - tx_position[1])
                * meters_per_e6
            )
            row.append(d)
        return float(model.predict(np.array([row]))[0])

    return channel


def simulate_loop(
    channel,
    walk,
    config: ControllerConfig = ControllerConfig(),
    seed: int = 0,
    tx_start_db: float = 0.0,
    ref_tx_db: float = 0.0,
) -> PowerControlTrace:
    """Run the controller along a walk of (lat_e6, lon_e6) positions.

    channel is a FieldModel (shadowing drawn per step from the seed) or any
    callable (lat_e6, lon_e6) -> base rssi at the reference tx power.  At
    every position the receiver measures base + (tx - ref_tx_db), then the
    controller acts once.  Deterministic for a fixed seed.
    """
    if len(walk) == 0:
        raise ValueError("walk must be non-empty")
    if isinstance(channel, FieldModel):
        field = channel
        rng = np.random.default_rng(seed)

        def base_at(lat, lon):
            noise = rng.normal(0.0, field.shadow_sigma_db)
            return eval_field(field, lat, lon, noise)

    else:
        base_at = channel

    tx = min(max(tx_start_db, config.tx_min_db), config.tx_max_db)
    t_ms = np.empty(len(walk), dtype=np.int64)
    rssi = np.empty(len(walk), dtype=np.float64)
    txs = np.empty(len(walk), dtype=np.float64)
    actions = []
    for k, (lat, lon) in enumerate(walk):
        measured = base_at(lat, lon) + (tx - ref_tx_db)
        action, tx = control_step(config, measured, tx)
        t_ms[k] = k * config.period_ms
        rssi[k] = measured
        txs[k] = tx
        actions.append(action)
    return PowerControlTrace(t_ms, rssi, tuple(actions), txs)
