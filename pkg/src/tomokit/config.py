"""Pipeline configuration: JSON schema, loading and defaults."""

import copy
import json

import numpy as np
from jsonschema import Draft202012Validator

from .exceptions import ConfigError
from .grids import PhaseSpaceGrid
from .states import StateSpec
from .thick import WindowSpec

CLI_FAMILIES = ("symplectic", "homodyne", "quadric", "deformed")
PARAM_COUNT = {"symplectic": 2, "homodyne": 1, "quadric": 2, "deformed": 2}

_number = {"type": "number"}
_state = {
    "type": "object",
    "properties": {
        "kind": {"enum": list(StateSpec.KINDS)},
        "alpha": {"oneOf": [_number, {"type": "array", "items": _number,
                                      "minItems": 2, "maxItems": 2}]},
        "n": {"type": "integer", "minimum": 0},
        "nbar": {"type": "number", "minimum": 0},
        "components": {"type": "array", "minItems": 1, "items": {
            "type": "object",
            "properties": {"weight": {"type": "number", "minimum": 0},
                           "state": {"$ref": "#/$defs/state"}},
            "required": ["weight", "state"], "additionalProperties": False}},
    },
    "required": ["kind"],
    "additionalProperties": False,
}
_range = {
    "type": "object",
    "properties": {"min": _number, "max": _number,
                   "step": {"type": "number", "exclusiveMinimum": 0},
                   "count": {"type": "integer", "minimum": 2}},
    "required": ["min", "max"],
    "oneOf": [{"required": ["step"]}, {"required": ["count"]}],
    "additionalProperties": False,
}
_square = {
    "type": "object",
    "properties": {"extent": {"type": "number", "exclusiveMinimum": 0},
                   "count": {"type": "integer", "minimum": 8}},
    "additionalProperties": False,
}
_window = {
    "type": "object",
    "properties": {"kind": {"enum": ["delta", "gaussian", "rect"]},
                   "sigma": {"type": "number", "exclusiveMinimum": 0},
                   "width": {"type": "number", "exclusiveMinimum": 0}},
    "required": ["kind"],
    "additionalProperties": False,
}
_matrix = {"type": "array", "items": {"type": "array", "items": _number}}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {"state": _state},
    "type": "object",
    "properties": {
        "state": {"$ref": "#/$defs/state"},
        "transform": {
            "type": "object",
            "properties": {
                "family": {"enum": list(CLI_FAMILIES)},
                "parameters": {"oneOf": [
                    {"type": "array", "minItems": 1,
                     "items": {"type": "array", "minItems": 1, "items": _number}},
                    {"type": "object",
                     "properties": {"product": {"type": "array", "minItems": 1, "items": _range}},
                     "required": ["product"], "additionalProperties": False}]},
                "grids": {
                    "type": "object",
                    "properties": {"X": _range, "phase_space": _square},
                    "required": ["X"],
                    "additionalProperties": False},
                "quadric": {
                    "type": "object",
                    "properties": {"B": _matrix, "C": {"type": "array", "items": _number},
                                   "shift": {"type": "array", "items": _number}},
                    "required": ["B"],
                    "additionalProperties": False},
                "source": {"enum": ["wigner", "density"]},
            },
            "required": ["family", "parameters", "grids"],
            "additionalProperties": False,
        },
        "window": _window,
        "inversion": {
            "type": "object",
            "properties": {
                "enabled": {"type": "boolean"},
                "target": {"enum": ["wigner", "density"]},
                "output_grid": _square,
                "n_max": {"type": "integer", "minimum": 0},
                "eps": {"type": "number", "minimum": 0},
                "r_max": {"type": "number", "exclusiveMinimum": 0},
                "dr": {"type": "number", "exclusiveMinimum": 0},
            },
            "additionalProperties": False,
        },
        "report": {
            "type": "object",
            "properties": {
                "tolerances": {
                    "type": "object",
                    "properties": {"l2": _number, "fidelity": _number, "residual": _number,
                                   "normalization": _number, "negativity": _number},
                    "additionalProperties": False},
                "paths": {
                    "type": "object",
                    "properties": {"tomogram": {"type": "string"}, "inversion": {"type": "string"},
                                   "report": {"type": "string"}, "gnuplot": {"type": "string"}},
                    "additionalProperties": False},
            },
            "additionalProperties": False,
        },
    },
    "required": ["state", "transform"],
    "additionalProperties": False,
}

DEFAULTS = {
    "phase_space": {"extent": 8.0, "count": 256},
    "inversion": {"enabled": False, "target": "wigner", "output_grid": {"extent": 6.0, "count": 128},
                  "n_max": 12, "eps": 1e-4, "r_max": 8.0, "dr": 0.02},
    "tolerances": {"l2": 1e-2, "fidelity": 0.999, "residual": 1e-3, "normalization": 1e-3,
                   "negativity": 1e-9},
    "paths": {"tomogram": "tomogram.csv", "inversion": "inversion.csv", "report": "report.json",
              "gnuplot": "tomogram.dat"},
}

_validator = Draft202012Validator(SCHEMA)


def validate(config):
    """Raise ConfigError listing every schema violation."""
    errors = sorted(_validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(lines))


def load(path):
    try:
        with open(path) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return resolve(config)


def axis_values(spec):
    lo, hi = float(spec["min"]), float(spec["max"])
    if hi <= lo:
        raise ConfigError(f"range max {hi} must exceed min {lo}")
    if "count" in spec:
        return np.linspace(lo, hi, spec["count"])
    n = int(round((hi - lo) / spec["step"]))
    return lo + np.arange(n + 1) * spec["step"]


def _parameters(spec, family):
    if isinstance(spec, dict):
        axes = [axis_values(r) for r in spec["product"]]
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack([m.ravel() for m in mesh], axis=1)
    else:
        points = np.array(spec, dtype=float)
        if points.ndim != 2:
            raise ConfigError("parameter points must all have the same length")
    if points.shape[1] != PARAM_COUNT[family]:
        raise ConfigError(f"{family} parameter points have {PARAM_COUNT[family]} entries, "
                          f"got {points.shape[1]}")
    return points


def resolve(config):
    """Validate and return a normalized copy with defaults and parsed objects."""
    validate(config)
    cfg = copy.deepcopy(config)
    tr = cfg["transform"]
    try:
        state = StateSpec.from_dict(cfg["state"])
        window = WindowSpec.from_dict(cfg["window"]) if "window" in cfg else None
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"invalid state or window: {exc}") from exc
    family = tr["family"]
    if family == "quadric" and "quadric" not in tr:
        raise ConfigError("the quadric family needs transform.quadric")
    if family == "deformed" and window is not None and window.kind != "delta":
        raise ConfigError("the deformed family has no thick variant")
    ps = {**DEFAULTS["phase_space"], **tr["grids"].get("phase_space", {})}
    inv = copy.deepcopy(DEFAULTS["inversion"])
    inv.update(cfg.get("inversion", {}))
    inv["output_grid"] = {**DEFAULTS["inversion"]["output_grid"], **inv["output_grid"]}
    rep = cfg.get("report", {})
    return {
        "raw": config,
        "state": state,
        "family": family,
        "points": _parameters(tr["parameters"], family),
        "X": axis_values(tr["grids"]["X"]),
        "grid": PhaseSpaceGrid.square(ps["extent"], ps["count"]),
        "quadric": tr.get("quadric"),
        "source": tr.get("source", "wigner"),
        "window": window if window is None or window.kind != "delta" else None,
        "inversion": inv,
        "out_grid": PhaseSpaceGrid.square(inv["output_grid"]["extent"], inv["output_grid"]["count"]),
        "tolerances": {**DEFAULTS["tolerances"], **rep.get("tolerances", {})},
        "paths": {**DEFAULTS["paths"], **rep.get("paths", {})},
    }
