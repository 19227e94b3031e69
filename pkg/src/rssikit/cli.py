"""Command-line entry point.

Subcommands: gen (synthesize a measurement CSV), train (fit one model and
dump it), tune (grid search with a trials CSV), eval (model comparison
report), heatmap (predicted-RSSI grid export), powersim (power-control
trace), paper-run (one-shot pipeline: 10,000 samples, 4,000/6,000 split,
tune all five families on the full grids, emit report + grids).

Every value can also come from a flat ``key = value`` config file passed
with --config; explicit flags win over the file.  Runs that write artifacts
record their fully resolved configuration alongside the outputs, so any
artifact can be regenerated from its sidecar.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import tuning
from .dataset import (
    CleanBounds,
    build_dataset,
    clean,
    load_csv,
    split,
    write_csv,
)
from .errors import ToolkitError
from .evaluate import MODEL_ORDER, compare_models
from .fieldmap import export_grid, field_grid, overlay_compare, predict_grid
from .models import build_model, load_model, save_model
from .powerctl import ControllerConfig, regressor_channel, simulate_loop
from .synthfield import (
    DEFAULT_TX_LAT_E6,
    DEFAULT_TX_LON_E6,
    FieldModel,
    generate_walk,
)
from .tuning import HyperGrid, default_grid, grid_search, write_trials_csv

TOTAL_SAMPLES = 10_000
TRAIN_SAMPLES = 4_000

_SUBPARSERS: dict[str, argparse.ArgumentParser] = {}


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _add_field_flags(p):
    p.add_argument("--tx-lat", type=int, default=DEFAULT_TX_LAT_E6,
                   help="transmitter latitude (degrees * 1e6)")
    p.add_argument("--tx-lon", type=int, default=DEFAULT_TX_LON_E6,
                   help="transmitter longitude (degrees * 1e6)")
    p.add_argument("--p0", type=float, default=-30.0,
                   help="RSSI at the reference distance (dB)")
    p.add_argument("--d0", type=float, default=1.0, help="reference distance (m)")
    p.add_argument("--exponent", type=float, default=3.0, help="path-loss exponent")
    p.add_argument("--shadow-sigma", type=float, default=4.0,
                   help="shadowing std-dev (dB)")
    p.add_argument("--meters-per-e6", type=float, default=0.111,
                   help="meters per 1e-6 degree")
    p.add_argument("--radius", type=float, default=150.0, help="walk radius (m)")
    p.add_argument("--step-m", type=float, default=5.0, help="walk step std-dev (m)")


def _field_from_args(args) -> FieldModel:
    return FieldModel(
        tx_lat_e6=args.tx_lat,
        tx_lon_e6=args.tx_lon,
        p0_db=args.p0,
        d0_m=args.d0,
        exponent_n=args.exponent,
        shadow_sigma_db=args.shadow_sigma,
        meters_per_e6=args.meters_per_e6,
    )


def _add_data_flags(p):
    p.add_argument("--data", required=True, help="measurement CSV")
    p.add_argument("--use-distance", action=argparse.BooleanOptionalAction,
                   default=True, help="include the distance feature")
    p.add_argument("--rssi-min", type=float, default=-130.0,
                   help="cleaning: lowest acceptable RSSI")
    p.add_argument("--rssi-max", type=float, default=0.0,
                   help="cleaning: highest acceptable RSSI")


def _load_dataset(args):
    samples = load_csv(args.data)
    kept, rejected = clean(
        samples, CleanBounds(rssi_min_db=args.rssi_min, rssi_max_db=args.rssi_max)
    )
    if rejected:
        print(f"cleaning dropped {rejected} row(s)", file=sys.stderr)
    return build_dataset(kept, args.use_distance, provenance=str(args.data))


def _add_hyper_flags(p):
    p.add_argument("--depth", type=int, default=1000, help="tree max depth")
    p.add_argument("--min-split", type=int, default=2,
                   help="min samples to split a node")
    p.add_argument("--min-leaf", type=int, default=1, help="min samples per leaf")
    p.add_argument("--trees", type=int, default=100, help="forest size")
    p.add_argument("--m-features", type=int, default=None,
                   help="features per split (default: half, rounded up)")
    p.add_argument("--bootstrap", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--stages", type=int, default=100, help="boosting stages")
    p.add_argument("--lr", type=float, default=0.1, help="boosting learning rate")
    p.add_argument("--gbt-depth", type=int, default=5, help="boosting tree depth")
    p.add_argument("--svr-c", type=float, default=10.0)
    p.add_argument("--svr-epsilon", type=float, default=0.5)
    p.add_argument("--svr-kernel", choices=("linear", "rbf"), default="rbf")
    p.add_argument("--svr-gamma", type=float, default=None)
    p.add_argument("--svr-tol", type=float, default=1e-3)
    p.add_argument("--svr-max-passes", type=int, default=200)


def _hyper_from_args(kind, args) -> dict:
    if kind == "linear":
        return {}
    if kind == "svr":
        return {
            "c": args.svr_c,
            "epsilon": args.svr_epsilon,
            "kernel": args.svr_kernel,
            "gamma": args.svr_gamma,
            "tol": args.svr_tol,
            "max_passes": args.svr_max_passes,
        }
    tree = {
        "max_depth": args.depth,
        "min_samples_split": args.min_split,
        "min_samples_leaf": args.min_leaf,
    }
    if kind == "tree":
        return tree
    if kind == "forest":
        return {
            **tree,
            "n_trees": args.trees,
            "m_features": args.m_features,
            "bootstrap": args.bootstrap,
        }
    if kind == "gbt":
        return {
            **tree,
            "max_depth": args.gbt_depth,
            "n_stages": args.stages,
            "learning_rate": args.lr,
        }
    raise ToolkitError(f"unknown model kind {kind!r}")


def _add_grid_flags(p):
    p.add_argument("--depths", type=_int_list, default=None,
                   help="comma list overriding the depth grid")
    p.add_argument("--min-splits", type=_int_list, default=None)
    p.add_argument("--min-leaves", type=_int_list, default=None)
    p.add_argument("--n-trees", type=_int_list, default=None,
                   help="comma list overriding the ensemble-size grid")
    p.add_argument("--n-stages", type=_int_list, default=None)
    p.add_argument("--lrs", type=_float_list, default=None)
    p.add_argument("--svr-c-grid", type=_float_list, default=None)
    p.add_argument("--svr-epsilon-grid", type=_float_list, default=None)
    p.add_argument("--val-fraction", type=float, default=0.25,
                   help="holdout fraction of the training set")


def _grid_from_args(kind, args) -> HyperGrid:
    grid = default_grid(kind)
    axes = dict(grid.axes)
    overrides = {
        "max_depth": args.depths,
        "min_samples_split": args.min_splits,
        "min_samples_leaf": args.min_leaves,
        "n_trees": args.n_trees,
        "n_stages": args.n_stages if args.n_stages is not None else args.n_trees,
        "learning_rate": args.lrs,
        "c": args.svr_c_grid,
        "epsilon": args.svr_epsilon_grid,
    }
    for name in list(axes):
        if overrides.get(name) is not None:
            axes[name] = tuple(overrides[name])
    return HyperGrid(kind, axes)


def _resolved_config(args) -> str:
    skip = {"func", "command", "config"}
    lines = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        val = getattr(args, key)
        if isinstance(val, (list, tuple)):
            val = ",".join(str(v) for v in val)
        lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"


def _write_meta(args, path) -> None:
    Path(path).write_text(_resolved_config(args), encoding="utf-8")


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    field = _field_from_args(args)
    samples = generate_walk(field, args.count, args.radius, seed=args.seed,
                            step_m=args.step_m)
    write_csv(samples, args.out)
    _write_meta(args, str(args.out) + ".meta")
    print(f"wrote {len(samples)} samples to {args.out}")
    return 0


def cmd_train(args) -> int:
    data = _load_dataset(args)
    model = build_model(args.model, seed=args.seed, **_hyper_from_args(args.model, args))
    model.fit(data.X, data.y)
    save_model(model, args.out, data.feature_names)
    _write_meta(args, str(args.out) + ".meta")
    from .metrics import mse as _mse

    print(f"{args.model}: fitted on {len(data)} samples, "
          f"training mse {_mse(data.y, model.predict(data.X)):.4f}, saved to {args.out}")
    return 0


def cmd_tune(args) -> int:
    data = _load_dataset(args)
    grid = _grid_from_args(args.model, args)
    result = grid_search(data, grid, args.val_fraction, args.seed)
    write_trials_csv(result, args.out)
    _write_meta(args, str(args.out) + ".meta")
    print(f"{args.model}: {len(result.trials)} trials, "
          f"best val mse {result.best_val_mse:.4f} at {result.best_params}")
    return 0


def cmd_eval(args) -> int:
    data = _load_dataset(args)
    train, test = split(data, args.train_count, args.seed)
    report = compare_models(train, test, seed=args.seed)
    if args.format == "csv":
        text = report.to_csv()
    elif args.format == "json":
        text = report.to_json()
    else:
        text = report.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        _write_meta(args, str(args.out) + ".meta")
        print(f"wrote report to {args.out}")
    else:
        print(text, end="")
    return 0


def cmd_heatmap(args) -> int:
    model, feature_names = load_model(args.model_file)
    use_distance = "distance_m" in feature_names
    explicit = (args.lat_min, args.lat_max, args.lon_min, args.lon_max)
    if any(v is not None for v in explicit):
        if any(v is None for v in explicit):
            raise ToolkitError("give all four of --lat-min/--lat-max/--lon-min/--lon-max")
        bounds = explicit
    elif args.data:
        samples = load_csv(args.data)
        lats = [s.latitude_e6 for s in samples]
        lons = [s.longitude_e6 for s in samples]
        bounds = (min(lats), max(lats), min(lons), max(lons))
    else:
        raise ToolkitError("need either --data or explicit --lat-min/… bounds")
    tx = None
    if args.tx_lat is not None and args.tx_lon is not None:
        tx = (args.tx_lat, args.tx_lon)
    grid = predict_grid(model, bounds, args.rows, args.cols, tx,
                        use_distance, args.meters_per_e6)
    export_grid(grid, args.format, args.out)
    _write_meta(args, str(args.out) + ".meta")
    print(f"wrote {grid.rows}x{grid.cols} {args.format} grid to {args.out}")
    return 0


def cmd_powersim(args) -> int:
    field = _field_from_args(args)
    walk_samples = generate_walk(field, args.steps, args.radius, seed=args.seed,
                                 step_m=args.step_m)
    walk = [(s.latitude_e6, s.longitude_e6) for s in walk_samples]
    if args.model_file:
        model, feature_names = load_model(args.model_file)
        channel = regressor_channel(
            model,
            use_distance="distance_m" in feature_names,
            tx_position=(args.tx_lat, args.tx_lon),
            meters_per_e6=args.meters_per_e6,
        )
    else:
        channel = field
    config = ControllerConfig(
        low_threshold_db=args.low,
        high_threshold_db=args.high,
        step_db=args.step_db,
        tx_min_db=args.tx_min,
        tx_max_db=args.tx_max,
        period_ms=args.period_ms,
    )
    trace = simulate_loop(channel, walk, config, seed=args.seed,
                          tx_start_db=args.tx_start, ref_tx_db=args.ref_tx)
    trace.to_csv(args.out)
    _write_meta(args, str(args.out) + ".meta")
    in_band = np.mean(
        (trace.rssi_db >= config.low_threshold_db)
        & (trace.rssi_db <= config.high_threshold_db)
    )
    print(f"simulated {len(trace)} steps, {in_band:.1%} in band, trace in {args.out}")
    return 0


def cmd_paper_run(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "models").mkdir(exist_ok=True)

    field = _field_from_args(args)
    samples = generate_walk(field, TOTAL_SAMPLES, args.radius, seed=args.seed,
                            step_m=args.step_m)
    write_csv(samples, outdir / "dataset.csv")
    data = build_dataset(samples, args.use_distance,
                         provenance=f"synthetic seed={args.seed}")
    train, test = split(data, TRAIN_SAMPLES, args.seed)

    configs = {}
    for kind in MODEL_ORDER:
        grid = _grid_from_args(kind, args)
        result = grid_search(train, grid, args.val_fraction, args.seed)
        write_trials_csv(result, outdir / f"trials_{kind}.csv")
        configs[kind] = result.best_params
        print(f"tuned {kind}: {len(result.trials)} trials, "
              f"best val mse {result.best_val_mse:.4f} at {result.best_params}")

    report = compare_models(train, test, configs, seed=args.seed)
    (outdir / "report.txt").write_text(report.to_text(), encoding="utf-8")
    (outdir / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    (outdir / "report_metrics.csv").write_text(
        report.to_csv(include_timing=False), encoding="utf-8"
    )

    fitted = {}
    for kind in MODEL_ORDER:
        model = build_model(kind, seed=args.seed, **configs[kind])
        model.fit(train.X, train.y)
        save_model(model, outdir / "models" / f"{kind}.txt", train.feature_names)
        fitted[kind] = model

    lats = [s.latitude_e6 for s in samples]
    lons = [s.longitude_e6 for s in samples]
    bounds = (min(lats), max(lats), min(lons), max(lons))
    truth = field_grid(replace(field, shadow_sigma_db=0.0), bounds, args.rows, args.cols)
    predicted = predict_grid(
        fitted["forest"], bounds, args.rows, args.cols,
        (field.tx_lat_e6, field.tx_lon_e6), args.use_distance, field.meters_per_e6,
    )
    export_grid(truth, "csv", outdir / "grid_truth.csv")
    export_grid(truth, "pgm", outdir / "grid_truth.pgm")
    export_grid(predicted, "csv", outdir / "grid_forest.csv")
    export_grid(predicted, "pgm", outdir / "grid_forest.pgm")
    overlay = overlay_compare(truth, predicted)

    _write_meta(args, outdir / "config.txt")
    print(report.to_text(), end="")
    print(f"forest grid vs noise-free field: mae {overlay.mae_db:.3f} dB "
          f"over {overlay.n} cells")
    print(f"artifacts in {outdir}")
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rssikit",
        description="RSSI prediction toolkit: synthetic fields, five model "
                    "families, coverage grids, transmit-power control.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--seed", type=int, default=0, help="master RNG seed")
        p.add_argument("--config", default=None,
                       help="flat key = value file; flags override it")
        p.set_defaults(func=fn)
        _SUBPARSERS[name] = p
        return p

    p = add("gen", cmd_gen, "synthesize a measurement CSV from a seeded field")
    p.add_argument("--count", type=int, default=TOTAL_SAMPLES)
    _add_field_flags(p)
    p.add_argument("-o", "--out", required=True)

    p = add("train", cmd_train, "fit one model family and dump it to a text file")
    p.add_argument("--model", choices=MODEL_ORDER, required=True)
    _add_data_flags(p)
    _add_hyper_flags(p)
    p.add_argument("-o", "--out", required=True)

    p = add("tune", cmd_tune, "grid-search one family, write a trials CSV")
    p.add_argument("--model", choices=MODEL_ORDER, required=True)
    _add_data_flags(p)
    _add_grid_flags(p)
    p.add_argument("-o", "--out", required=True)

    p = add("eval", cmd_eval, "fit all five families, report test MAE/MSE/latency")
    _add_data_flags(p)
    p.add_argument("--train-count", type=int, default=TRAIN_SAMPLES)
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("-o", "--out", default=None)

    p = add("heatmap", cmd_heatmap, "export a predicted-RSSI grid (csv or pgm)")
    p.add_argument("--model-file", required=True)
    p.add_argument("--data", default=None, help="CSV whose bounding box to cover")
    p.add_argument("--lat-min", type=int, default=None)
    p.add_argument("--lat-max", type=int, default=None)
    p.add_argument("--lon-min", type=int, default=None)
    p.add_argument("--lon-max", type=int, default=None)
    p.add_argument("--rows", type=int, default=60)
    p.add_argument("--cols", type=int, default=60)
    p.add_argument("--tx-lat", type=int, default=None)
    p.add_argument("--tx-lon", type=int, default=None)
    p.add_argument("--meters-per-e6", type=float, default=0.111)
    p.add_argument("--format", choices=("csv", "pgm"), default="csv")
    p.add_argument("-o", "--out", required=True)

    p = add("powersim", cmd_powersim, "closed-loop power-control trace CSV")
    p.add_argument("--steps", type=int, default=600)
    _add_field_flags(p)
    p.add_argument("--model-file", default=None,
                   help="drive the loop from a trained model instead of the field")
    p.add_argument("--low", type=float, default=-60.0)
    p.add_argument("--high", type=float, default=-40.0)
    p.add_argument("--step-db", type=float, default=1.0)
    p.add_argument("--tx-min", type=float, default=-10.0)
    p.add_argument("--tx-max", type=float, default=30.0)
    p.add_argument("--period-ms", type=int, default=100)
    p.add_argument("--tx-start", type=float, default=0.0)
    p.add_argument("--ref-tx", type=float, default=0.0)
    p.add_argument("-o", "--out", required=True)

    p = add("paper-run", cmd_paper_run,
            "one-shot protocol: generate 10,000 samples, split 4,000/6,000, "
            "tune all five families, emit report and coverage grids")
    _add_field_flags(p)
    p.add_argument("--use-distance", action=argparse.BooleanOptionalAction,
                   default=True)
    _add_grid_flags(p)
    p.add_argument("--rows", type=int, default=60)
    p.add_argument("--cols", type=int, default=60)
    p.add_argument("-o", "--out", required=True, help="output directory")

    return parser


def _apply_config_file(args) -> None:
    if not getattr(args, "config", None):
        return
    values = {}
    with open(args.config, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ToolkitError(f"bad config line: {raw.strip()!r}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    sub = _SUBPARSERS[args.command]
    for action in sub._actions:
        if action.dest not in values:
            continue
        raw = values[action.dest]
        # flags given on the command line keep their value; a flag still at
        # its default is overridden by the file
        if getattr(args, action.dest) != action.default:
            continue
        if isinstance(action, argparse.BooleanOptionalAction) or isinstance(
            action, (argparse._StoreTrueAction, argparse._StoreFalseAction)
        ):
            converted = raw.strip().lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            converted = action.type(raw)
        else:
            converted = raw
        setattr(args, action.dest, converted)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        return args.func(args)
    except ToolkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
