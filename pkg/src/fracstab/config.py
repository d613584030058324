"""Experiment configuration: strict JSON parsing and round-trip serialization.

Unknown fields are hard errors — a silently ignored typo in a rate name
would invalidate every certificate downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .caputo import FractionalOrder
from .errors import ConfigError, ContractError
from .models import sica, teiv

MODELS = ("sica", "teiv")
FUNCTIONAL_KINDS = ("v0", "v1", "teiv_at_anchor")

_TOP_FIELDS = {
    "model", "params", "orders", "initial_state",
    "t_end", "steps", "functionals", "outputs",
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation/certification experiment."""

    model: str
    params: object            # SicaParams or TeivParams
    orders: tuple             # of FractionalOrder
    initial_state: tuple      # 4 floats
    t_end: float
    steps: int
    functionals: tuple        # subset of FUNCTIONAL_KINDS
    outputs: dict             # label -> path template

    def __post_init__(self):
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if not self.orders:
            raise ConfigError("orders must be non-empty")
        if self.steps < 10:
            raise ConfigError(f"steps must be >= 10, got {self.steps}")
        if not (np.isfinite(self.t_end) and self.t_end > 0):
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if len(self.initial_state) != 4:
            raise ConfigError("initial_state must have 4 components")
        for f in self.functionals:
            if f not in FUNCTIONAL_KINDS:
                raise ConfigError(f"unknown functional kind {f!r}")
            if self.model == "sica" and f == "teiv_at_anchor":
                raise ConfigError("functional 'teiv_at_anchor' requires model 'teiv'")
            if self.model == "teiv" and f in ("v0", "v1"):
                raise ConfigError(f"functional {f!r} requires model 'sica'")


def config_from_dict(doc: dict) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    missing = {"model", "params", "orders", "initial_state", "t_end", "steps"} - set(doc)
    if missing:
        raise ConfigError(f"missing config fields: {sorted(missing)}")

    model = doc["model"]
    try:
        if model == "sica":
            params = sica.params_from_json(doc["params"])
        elif model == "teiv":
            params = teiv.params_from_json(doc["params"])
        else:
            raise ConfigError(f"model must be one of {MODELS}, got {model!r}")
        orders = tuple(FractionalOrder(a) for a in doc["orders"])
    except ContractError as exc:
        raise ConfigError(str(exc)) from exc

    return ExperimentConfig(
        model=model,
        params=params,
        orders=orders,
        initial_state=tuple(float(x) for x in doc["initial_state"]),
        t_end=float(doc["t_end"]),
        steps=int(doc["steps"]),
        functionals=tuple(doc.get("functionals", ())),
        outputs=dict(doc.get("outputs", {})),
    )


def config_to_dict(cfg: ExperimentConfig) -> dict:
    if cfg.model == "sica":
        params = sica.params_to_json(cfg.params)
    else:
        params = teiv.params_to_json(cfg.params)
    return {
        "model": cfg.model,
        "params": params,
        "orders": [o.alpha for o in cfg.orders],
        "initial_state": list(cfg.initial_state),
        "t_end": cfg.t_end,
        "steps": cfg.steps,
        "functionals": list(cfg.functionals),
        "outputs": dict(cfg.outputs),
    }


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: line {exc.lineno}: {exc.msg}") from exc
    return config_from_dict(doc)


def dump_config(cfg: ExperimentConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2)
        fh.write("\n")
