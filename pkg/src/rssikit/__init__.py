"""rssikit: learn RSSI from coordinates, compare regression model families,
export coverage grids, and drive a threshold transmit-power controller."""

from ._accel import USING_NUMBA
from .cart import RegressionTree, TreeParams, sdr_split
from .dataset import (
    CleanBounds,
    Dataset,
    GeoSample,
    build_dataset,
    clean,
    featurize,
    load_csv,
    normalize_coordinate,
    split,
    write_csv,
)
from .ensemble import ForestParams, GbtParams, GradientBoosting, RandomForest
from .errors import ToolkitError
from .evaluate import EvaluationReport, compare_models, latency_probe
from .fieldmap import HeatmapGrid, export_grid, field_grid, overlay_compare, predict_grid
from .linreg import LinearRegression
from .metrics import MetricPair, mae, metric_pair, mse
from .models import MODEL_KINDS, build_model, load_model, save_model
from .powerctl import ControllerConfig, PowerControlTrace, control_step, simulate_loop
from .svr import SupportVectorRegression, SvrParams
from .synthfield import FieldModel, eval_field, generate_walk
from .tuning import HyperGrid, TuneResult, default_grid, grid_search

__version__ = "0.1.0"

__all__ = [
    "USING_NUMBA",
    "RegressionTree",
    "TreeParams",
    "sdr_split",
    "CleanBounds",
    "Dataset",
    "GeoSample",
    "build_dataset",
    "clean",
    "featurize",
    "load_csv",
    "normalize_coordinate",
    "split",
    "write_csv",
    "ForestParams",
    "GbtParams",
    "GradientBoosting",
    "RandomForest",
    "ToolkitError",
    "EvaluationReport",
    "compare_models",
    "latency_probe",
    "HeatmapGrid",
    "export_grid",
    "field_grid",
    "overlay_compare",
    "predict_grid",
    "LinearRegression",
    "MetricPair",
    "mae",
    "metric_pair",
    "mse",
    "MODEL_KINDS",
    "build_model",
    "load_model",
    "save_model",
    "ControllerConfig",
    "PowerControlTrace",
    "control_step",
    "simulate_loop",
    "SupportVectorRegression",
    "SvrParams",
    "FieldModel",
    "eval_field",
    "generate_walk",
    "HyperGrid",
    "TuneResult",
    "default_grid",
    "grid_search",
]
