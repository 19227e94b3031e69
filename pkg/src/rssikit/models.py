"""Uniform access to the five model families.

Every model exposes fit(X, y) / predict(X) plus text serialization; this
module maps the family name to a configured instance and reads/writes the
dump files (first line: "rssikit-model <kind>", second line: feature names,
then the family-specific body).
"""

from __future__ import annotations

from .cart import RegressionTree, TreeParams
from .ensemble import ForestParams, GbtParams, GradientBoosting, RandomForest
from .errors import ToolkitError
from .linreg import LinearRegression
from .svr import SupportVectorRegression, SvrParams

MODEL_KINDS = ("linear", "svr", "tree", "forest", "gbt")

_TREE_KEYS = ("max_depth", "min_samples_split", "min_samples_leaf")


def _split_tree_kwargs(hyper: dict):
    """Pop tree stopping rules out of hyper; None when none were given, so
    each family keeps its own default tree."""
    tree_kwargs = {k: hyper.pop(k) for k in _TREE_KEYS if k in hyper}
    return TreeParams(**tree_kwargs) if tree_kwargs else None


def build_model(kind: str, seed: int = 0, **hyper):
    """Construct an unfitted model of the given family.

    hyper holds family hyperparameters by their dataclass field names; tree
    stopping rules apply to tree, forest and gbt alike.
    """
    hyper = dict(hyper)
    if kind == "linear":
        model = LinearRegression()
    elif kind == "svr":
        model = SupportVectorRegression(SvrParams(**hyper), seed=seed)
        hyper = {}
    elif kind == "tree":
        model = RegressionTree(_split_tree_kwargs(hyper) or TreeParams())
    elif kind == "forest":
        tree = _split_tree_kwargs(hyper)
        if tree is not None:
            hyper["tree"] = tree
        model = RandomForest(ForestParams(seed=seed, **hyper))
        hyper = {}
    elif kind == "gbt":
        tree = _split_tree_kwargs(hyper)
        if tree is not None:
            hyper["tree"] = tree
        model = GradientBoosting(GbtParams(seed=seed, **hyper))
        hyper = {}
    else:
        raise ToolkitError(f"unknown model kind {kind!r}")
    if hyper:
        raise ToolkitError(f"unused hyperparameters for {kind}: {sorted(hyper)}")
    return model


_CLASSES = {
    "linear": LinearRegression,
    "svr": SupportVectorRegression,
    "tree": RegressionTree,
    "forest": RandomForest,
    "gbt": GradientBoosting,
}


def model_kind(model) -> str:
    for kind, cls in _CLASSES.items():
        if isinstance(model, cls):
            return kind
    raise ToolkitError(f"not a known model type: {type(model)!r}")


def save_model(model, path, feature_names) -> None:
    kind = model_kind(model)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(f"rssikit-model {kind}\n")
        fh.write("features " + " ".join(feature_names) + "\n")
        fh.write(model.to_text())


def load_model(path):
    """Read a model dump; returns (model, feature_names)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("rssikit-model "):
        raise ToolkitError(f"{path}: not a model dump")
    kind = lines[0].split()[1]
    if kind not in _CLASSES:
        raise ToolkitError(f"{path}: unknown model kind {kind!r}")
    if len(lines) < 2 or not lines[1].startswith("features "):
        raise ToolkitError(f"{path}: missing feature list")
    feature_names = tuple(lines[1].split()[1:])
    model = _CLASSES[kind].from_text("\n".join(lines[2:]))
    # the feature list is authoritative for input dimension
    if hasattr(model, "n_features"):
        model.n_features = len(feature_names)
        for tree in getattr(model, "trees", []) + getattr(model, "stages", []):
            tree.n_features = len(feature_names)
    return model, feature_names
