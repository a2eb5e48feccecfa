"""Experiment configuration: a strict, self-describing JSON document.

Unknown keys anywhere in the document are errors, so typos in experiment
settings fail fast instead of silently falling back to defaults. Parsing
fills in all defaults; serializing a parsed config is therefore idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .kernels import KernelConfig
from .mmd import TestConfig
from .simulate import SimConfig, SystemModel
from .sweep import GridSpec
from .systems import DuffingParams, LinearDriftParams, discrete_linear_system, duffing_system, linear_drift_system

MODEL_NAMES = ("linear_drift", "duffing", "discrete_linear")


class ConfigError(ValueError):
    """Raised for malformed or inconsistent experiment configurations."""


def _require_keys(section: dict, allowed: dict, path: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {path or 'top level'}")


def _get(section: dict, key: str, default, path: str, required: bool = False):
    if key not in section:
        if required:
            raise ConfigError(f"missing required key {path}.{key}" if path else f"missing required key {key}")
        return default
    return section[key]


_MODEL_PARAM_KEYS = {
    "linear_drift": {"a_matrix", "forcing", "omega", "sigma_matrix", "c_matrix", "meas_var"},
    "duffing": {"b1", "b2", "meas_var"},
    "discrete_linear": {"a_matrix", "c_matrix", "process_gain", "meas_gain"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Normalized experiment settings with typed accessors."""

    data: dict

    # -- construction ------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(f"config is not valid JSON: {err}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        return cls(cls._normalize(raw))

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())

    def serialize(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    @staticmethod
    def _normalize(raw: dict) -> dict:
        _require_keys(
            raw,
            {k: None for k in ("model", "init", "sim", "samples", "kernel", "test", "grid", "gramian", "output")},
            "",
        )
        out: dict[str, Any] = {}

        model = raw.get("model", {})
        _require_keys(model, {"name": None, "params": None}, "model")
        name = _get(model, "name", None, "model", required=True)
        if name not in MODEL_NAMES:
            raise ConfigError(f"unknown model name {name!r}; available: {', '.join(MODEL_NAMES)}")
        params = _get(model, "params", {}, "model")
        if not isinstance(params, dict):
            raise ConfigError("model.params must be an object")
        unknown = set(params) - _MODEL_PARAM_KEYS[name]
        if unknown:
            raise ConfigError(f"unknown key(s) {sorted(unknown)} in model.params for {name}")
        if name == "discrete_linear":
            for req in ("a_matrix", "c_matrix"):
                if req not in params:
                    raise ConfigError(f"missing required key model.params.{req} for discrete_linear")
        out["model"] = {"name": name, "params": params}

        init = raw.get("init", {})
        _require_keys(init, {"x_a": None, "states": None, "labels": None}, "init")
        out["init"] = {}
        if "x_a" in init:
            out["init"]["x_a"] = [float(v) for v in init["x_a"]]
        if "states" in init:
            out["init"]["states"] = [[float(v) for v in s] for s in init["states"]]
            labels = init.get("labels", [f"set{i}" for i in range(len(out["init"]["states"]))])
            if len(labels) != len(out["init"]["states"]):
                raise ConfigError("init.labels must match init.states in length")
            out["init"]["labels"] = [str(l) for l in labels]
        elif "labels" in init:
            raise ConfigError("init.labels requires init.states")

        sim = raw.get("sim", {})
        _require_keys(sim, {"horizon": None, "dt": None, "seed": None}, "sim")
        out["sim"] = {
            "horizon": float(_get(sim, "horizon", None, "sim", required=True)),
            "dt": float(_get(sim, "dt", None, "sim", required=True)),
            "seed": int(_get(sim, "seed", 0, "sim")),
        }
        try:
            SimConfig(**out["sim"])
        except ValueError as err:
            raise ConfigError(f"sim: {err}") from None

        samples = raw.get("samples", {})
        _require_keys(samples, {"m": None, "n": None}, "samples")
        m = int(_get(samples, "m", 30, "samples"))
        n = int(_get(samples, "n", m, "samples"))
        if m != n:
            raise ConfigError(f"the test requires samples.m == samples.n, got m={m}, n={n}")
        out["samples"] = {"m": m, "n": n}

        kernel = raw.get("kernel", {})
        _require_keys(kernel, {"sigma": None, "bound": None, "subsample": None}, "kernel")
        sigma = _get(kernel, "sigma", "auto", "kernel")
        if sigma != "auto":
            sigma = float(sigma)
            if sigma <= 0:
                raise ConfigError(f"kernel.sigma must be positive or 'auto', got {sigma}")
        out["kernel"] = {
            "sigma": sigma,
            "bound": float(_get(kernel, "bound", 1.0, "kernel")),
            "subsample": int(_get(kernel, "subsample", 200, "kernel")),
        }

        test = raw.get("test", {})
        _require_keys(test, {"alpha": None, "method": None, "n_permutations": None}, "test")
        out["test"] = {
            "alpha": float(_get(test, "alpha", 0.05, "test")),
            "method": str(_get(test, "method", "bootstrap", "test")),
            "n_permutations": int(_get(test, "n_permutations", 1000, "test")),
        }
        try:
            TestConfig(
                alpha=out["test"]["alpha"],
                threshold_method=out["test"]["method"],
                n_permutations=out["test"]["n_permutations"],
            )
        except ValueError as err:
            raise ConfigError(f"test: {err}") from None

        if "grid" in raw:
            grid = raw["grid"]
            _require_keys(grid, {"lower": None, "upper": None, "points": None, "fixed": None, "swept_dims": None}, "grid")
            fixed = grid.get("fixed", {})
            if not isinstance(fixed, dict):
                raise ConfigError("grid.fixed must be an object mapping dimension index to value")
            out["grid"] = {
                "lower": [float(v) for v in _get(grid, "lower", None, "grid", required=True)],
                "upper": [float(v) for v in _get(grid, "upper", None, "grid", required=True)],
                "points": [int(v) for v in _get(grid, "points", None, "grid", required=True)],
                "fixed": {str(k): float(v) for k, v in fixed.items()},
            }
            if "swept_dims" in grid:
                out["grid"]["swept_dims"] = [int(d) for d in grid["swept_dims"]]
            try:
                self_grid = out["grid"]
                GridSpec(
                    lower=tuple(self_grid["lower"]),
                    upper=tuple(self_grid["upper"]),
                    points=tuple(self_grid["points"]),
                    fixed={int(k): v for k, v in self_grid["fixed"].items()},
                    swept_dims=tuple(self_grid["swept_dims"]) if "swept_dims" in self_grid else None,
                )
            except ValueError as err:
                raise ConfigError(f"grid: {err}") from None

        gramian = raw.get("gramian", {})
        _require_keys(gramian, {"epsilon": None}, "gramian")
        eps = float(_get(gramian, "epsilon", 0.1, "gramian"))
        if eps <= 0:
            raise ConfigError(f"gramian.epsilon must be positive, got {eps}")
        out["gramian"] = {"epsilon": eps}

        output = raw.get("output", {})
        _require_keys(output, {"dir": None, "prefix": None}, "output")
        out["output"] = {
            "dir": str(_get(output, "dir", ".", "output")),
            "prefix": str(_get(output, "prefix", "sweep", "output")),
        }
        return out

    # -- typed accessors ----------------------------------------------------

    def build_model(self) -> SystemModel:
        name = self.data["model"]["name"]
        params = self.data["model"]["params"]
        if name == "linear_drift":
            defaults = LinearDriftParams()
            return linear_drift_system(
                LinearDriftParams(
                    a_matrix=tuple(map(tuple, params.get("a_matrix", defaults.a_matrix))),
                    forcing=tuple(params.get("forcing", defaults.forcing)),
                    omega=float(params.get("omega", defaults.omega)),
                    sigma_matrix=tuple(map(tuple, params.get("sigma_matrix", defaults.sigma_matrix))),
                    c_matrix=tuple(map(tuple, params.get("c_matrix", defaults.c_matrix))),
                    meas_var=float(params.get("meas_var", defaults.meas_var)),
                )
            )
        if name == "duffing":
            defaults = DuffingParams()
            return duffing_system(
                DuffingParams(
                    b1=float(params.get("b1", defaults.b1)),
                    b2=float(params.get("b2", defaults.b2)),
                    meas_var=float(params.get("meas_var", defaults.meas_var)),
                )
            )
        return discrete_linear_system(
            np.asarray(params["a_matrix"], dtype=float),
            np.asarray(params["c_matrix"], dtype=float),
            process_gain=None if params.get("process_gain") is None else np.asarray(params["process_gain"], dtype=float),
            meas_gain=None if params.get("meas_gain") is None else np.asarray(params["meas_gain"], dtype=float),
        )

    def sim_config(self, seed_override: int | None = None) -> SimConfig:
        sim = self.data["sim"]
        seed = sim["seed"] if seed_override is None else seed_override
        return SimConfig(horizon=sim["horizon"], dt=sim["dt"], seed=seed)

    def kernel_config(self) -> KernelConfig | None:
        """The fixed kernel settings, or None when sigma is 'auto'."""
        k = self.data["kernel"]
        if k["sigma"] == "auto":
            return None
        return KernelConfig(sigma=k["sigma"], bound=k["bound"])

    def test_config(self, seed_override: int | None = None) -> TestConfig:
        t = self.data["test"]
        seed = self.data["sim"]["seed"] if seed_override is None else seed_override
        return TestConfig(
            alpha=t["alpha"],
            threshold_method=t["method"],
            n_permutations=t["n_permutations"],
            seed=seed,
        )

    def grid_spec(self) -> GridSpec:
        if "grid" not in self.data:
            raise ConfigError("this command requires a grid section in the config")
        g = self.data["grid"]
        return GridSpec(
            lower=tuple(g["lower"]),
            upper=tuple(g["upper"]),
            points=tuple(g["points"]),
            fixed={int(k): v for k, v in g["fixed"].items()},
            swept_dims=tuple(g["swept_dims"]) if "swept_dims" in g else None,
        )

    @property
    def m(self) -> int:
        return self.data["samples"]["m"]

    @property
    def sigma_subsample(self) -> int:
        return self.data["kernel"]["subsample"]

    @property
    def x_a(self) -> list[float]:
        if "x_a" not in self.data["init"]:
            raise ConfigError("this command requires init.x_a in the config")
        return self.data["init"]["x_a"]

    @property
    def states_with_labels(self) -> list[tuple[list[float], str]]:
        init = self.data["init"]
        if "states" in init:
            return list(zip(init["states"], init["labels"]))
        if "x_a" in init:
            return [(init["x_a"], "set0")]
        raise ConfigError("simulate requires init.states (or init.x_a) in the config")

    @property
    def gramian_epsilon(self) -> float:
        return self.data["gramian"]["epsilon"]

    @property
    def output_dir(self) -> str:
        return self.data["output"]["dir"]

    @property
    def output_prefix(self) -> str:
        return self.data["output"]["prefix"]
