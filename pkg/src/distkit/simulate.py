"""Deterministic and stochastic trajectory simulation.

Integration is explicit Euler for the drift and Euler-Maruyama for the
diffusion: x_{t+1} = x_t + f(x_t, t) dt + G(x_t, t) sqrt(dt) w_t with
standard-normal increments w_t. Outputs are measured at every step,
including t = 0, and measurement noise (when present) corrupts every
measurement.

Reproducibility contract
------------------------
Trajectory i of a batch draws all its randomness from the substream
``np.random.SeedSequence((seed, i))``, in a fixed order: first the initial
state (when the initial condition is a sampler), then the process-noise
increments for all steps, then the measurement perturbations for all steps.
A trajectory is therefore bit-identical whether simulated alone or inside a
batch, in any order, serial or parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .trajectories import SampleSet, Trajectory


class SimulationBlowup(RuntimeError):
    """Raised when the state or output leaves the finite floats."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"state became non-finite at step {step}")


@dataclass(frozen=True)
class SimConfig:
    """Time grid and master seed for simulation.

    horizon / dt must be a whole number of steps T; trajectories then carry
    T+1 measurements including the one at t = 0.
    """

    horizon: float
    dt: float
    seed: int = 0

    def __post_init__(self):
        if not (self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.horizon > 0):
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        steps = round(self.horizon / self.dt)
        if steps < 1 or abs(steps * self.dt - self.horizon) > 1e-9 * max(1.0, abs(self.horizon)):
            raise ValueError(f"horizon {self.horizon} is not a whole number of steps of dt {self.dt}")

    @property
    def n_steps(self) -> int:
        return round(self.horizon / self.dt)


@dataclass(frozen=True)
class SystemModel:
    """Continuous-time stochastic system with noisy measurements.

    drift(x, t) -> dx/dt and measurement(x) -> y must accept states with
    leading batch axes when `vectorized` is True (the built-in models do);
    otherwise trajectories are integrated one at a time. diffusion(x, t)
    returns the (n_x, n_w) noise-input matrix (state-independent matrices
    may ignore x), or a batched (..., n_x, n_w) stack; None means no
    process noise. measurement_noise(rng, count) -> (count, n_y) draws
    additive output perturbations. When `additive_noise` is False, the
    measurement map combines state and perturbation itself and is called
    as measurement(x, eps), with eps=None requesting the noise-free output.

    For a trajectory to be bit-identical whether simulated alone or inside
    a batch, vectorized callables must be shape-stable: prefer elementwise
    expressions or np.einsum over BLAS matmul, whose rounding can depend on
    the batch size. The built-in models follow this rule.
    """

    n_x: int
    n_y: int
    drift: Callable
    measurement: Callable
    diffusion: Callable | None = None
    measurement_noise: Callable | None = None
    n_w: int = 0
    additive_noise: bool = True
    vectorized: bool = True
    name: str = ""

    def __post_init__(self):
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError(f"need n_x >= 1 and n_y >= 1, got n_x={self.n_x}, n_y={self.n_y}")
        if self.diffusion is not None and self.n_w < 1:
            raise ValueError("a diffusion map requires n_w >= 1")

    def nominal(self) -> "SystemModel":
        """The same system with process and measurement noise removed."""
        return SystemModel(
            n_x=self.n_x,
            n_y=self.n_y,
            drift=self.drift,
            measurement=self.measurement,
            diffusion=None,
            measurement_noise=None,
            n_w=0,
            additive_noise=self.additive_noise,
            vectorized=self.vectorized,
            name=self.name,
        )


InitialCondition = Union[np.ndarray, Sequence[float], Callable]


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given (seed, key...) address."""
    return np.random.default_rng(np.random.SeedSequence((seed,) + key))


def derive_seeds(seed: int, index: int, count: int = 1) -> list[int]:
    """Derived 64-bit integer seeds for nested substream hierarchies."""
    words = np.random.SeedSequence((seed, index)).generate_state(count, np.uint64)
    return [int(w) for w in words]


def _draw_initial(init: InitialCondition, rng: np.random.Generator, n_x: int) -> np.ndarray:
    x0 = np.asarray(init(rng), dtype=float) if callable(init) else np.asarray(init, dtype=float)
    if x0.shape != (n_x,):
        raise ValueError(f"initial state has shape {x0.shape}, expected ({n_x},)")
    return x0


def _nominal_output(model: SystemModel, states: np.ndarray) -> np.ndarray:
    if model.additive_noise:
        return np.asarray(model.measurement(states), dtype=float)
    return np.asarray(model.measurement(states, None), dtype=float)


def _check_outputs_finite(y: np.ndarray) -> None:
    if np.all(np.isfinite(y)):
        return
    bad = np.argwhere(~np.isfinite(y))
    step = int(bad[0][-2]) if y.ndim >= 2 else int(bad[0][0])
    raise SimulationBlowup(step, f"output became non-finite at step {step}")


def simulate_deterministic(
    model: SystemModel, x0: Sequence[float], sim: SimConfig
) -> tuple[np.ndarray, Trajectory]:
    """Integrate the nominal system and measure its output at every step.

    Returns the state path of shape (T+1, n_x) and the noise-free output
    trajectory. Process noise and measurement noise are ignored entirely.
    Raises SimulationBlowup (with the failing step index) if the state
    leaves the finite floats.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (model.n_x,):
        raise ValueError(f"initial state has shape {x0.shape}, expected ({model.n_x},)")
    steps = sim.n_steps
    states = np.empty((steps + 1, model.n_x))
    states[0] = x0
    x = x0
    for t in range(steps):
        x = x + sim.dt * np.asarray(model.drift(x, t * sim.dt), dtype=float)
        if not np.all(np.isfinite(x)):
            raise SimulationBlowup(t + 1)
        states[t + 1] = x
    if model.vectorized:
        outputs = _nominal_output(model, states)
    else:
        outputs = np.stack([_nominal_output(model, s) for s in states])
    outputs = outputs.reshape(steps + 1, model.n_y)
    _check_outputs_finite(outputs)
    return states, Trajectory(outputs, sim.dt)


def _predraw_noise(model: SystemModel, init, rng, steps):
    """Draw (x0, process increments, measurement perturbations) in the fixed order."""
    x0 = _draw_initial(init, rng, model.n_x)
    w = rng.standard_normal((steps, model.n_w)) if model.diffusion is not None else None
    eps = None
    if model.measurement_noise is not None:
        eps = np.asarray(model.measurement_noise(rng, steps + 1), dtype=float)
        if eps.shape[0] != steps + 1:
            raise ValueError(f"measurement_noise returned {eps.shape[0]} rows, expected {steps + 1}")
    return x0, w, eps


def _measure(model: SystemModel, states: np.ndarray, eps: np.ndarray | None) -> np.ndarray:
    if eps is None:
        return _nominal_output(model, states)
    if model.additive_noise:
        y = np.asarray(model.measurement(states), dtype=float)
        return y.reshape(eps.shape[:-1] + (model.n_y,)) + eps
    return np.asarray(model.measurement(states, eps), dtype=float)


def _integrate_batch(model: SystemModel, x0s: np.ndarray, ws, sim: SimConfig) -> np.ndarray:
    """Euler-Maruyama over a batch of trajectories; returns (m, T+1, n_x)."""
    m = x0s.shape[0]
    steps = sim.n_steps
    states = np.empty((m, steps + 1, model.n_x))
    states[:, 0] = x0s
    sqrt_dt = np.sqrt(sim.dt)
    x = x0s
    for t in range(steps):
        x_next = x + sim.dt * np.asarray(model.drift(x, t * sim.dt), dtype=float)
        if ws is not None:
            g = np.asarray(model.diffusion(x, t * sim.dt), dtype=float)
            if g.ndim == 2:
                x_next = x_next + sqrt_dt * np.einsum("ij,mj->mi", g, ws[:, t])
            else:
                x_next = x_next + sqrt_dt * np.einsum("mij,mj->mi", g, ws[:, t])
        if not np.all(np.isfinite(x_next)):
            raise SimulationBlowup(t + 1)
        states[:, t + 1] = x_next
        x = x_next
    return states


def _integrate_single(model: SystemModel, x0, w, sim: SimConfig) -> np.ndarray:
    steps = sim.n_steps
    states = np.empty((steps + 1, model.n_x))
    states[0] = x0
    sqrt_dt = np.sqrt(sim.dt)
    x = x0
    for t in range(steps):
        x_next = x + sim.dt * np.asarray(model.drift(x, t * sim.dt), dtype=float)
        if w is not None:
            g = np.asarray(model.diffusion(x, t * sim.dt), dtype=float)
            x_next = x_next + sqrt_dt * np.einsum("ij,j->i", g, w[t])
        if not np.all(np.isfinite(x_next)):
            raise SimulationBlowup(t + 1)
        states[t + 1] = x_next
        x = x_next
    return states


def _simulate_one(model: SystemModel, init, sim: SimConfig, rng) -> Trajectory:
    x0, w, eps = _predraw_noise(model, init, rng, sim.n_steps)
    if model.vectorized:
        states = _integrate_batch(model, x0[None], None if w is None else w[None], sim)[0]
    else:
        states = _integrate_single(model, x0, w, sim)
    y = _measure(model, states, eps).reshape(sim.n_steps + 1, model.n_y)
    _check_outputs_finite(y)
    return Trajectory(y, sim.dt)


def simulate_stochastic(
    model: SystemModel, init: InitialCondition, sim: SimConfig, stream: np.random.Generator
) -> Trajectory:
    """Simulate one noisy output trajectory, drawing from the given stream.

    The initial condition may be a state vector (deterministic start) or a
    sampler rng -> state. Noise enters as described in the module docstring;
    with no diffusion and no measurement noise the result coincides exactly
    with the deterministic simulation.
    """
    return _simulate_one(model, init, sim, stream)


def sample_output_set(
    model: SystemModel, init: InitialCondition, m: int, sim: SimConfig, label: str = ""
) -> SampleSet:
    """Simulate m independently reinitialized trajectories.

    Each trajectory draws from its own substream (sim.seed, index), so the
    batch is reproducible and embarrassingly parallel. Vectorized models are
    integrated as one batch; the result is identical either way.
    """
    if m < 1:
        raise ValueError(f"need m >= 1 trajectories, got {m}")
    rngs = [substream(sim.seed, i) for i in range(m)]
    if not model.vectorized:
        return SampleSet(tuple(_simulate_one(model, init, sim, rng) for rng in rngs), label=label)
    steps = sim.n_steps
    x0s = np.empty((m, model.n_x))
    ws = np.empty((m, steps, model.n_w)) if model.diffusion is not None else None
    epss = [] if model.measurement_noise is not None else None
    for i, rng in enumerate(rngs):
        x0, w, eps = _predraw_noise(model, init, rng, steps)
        x0s[i] = x0
        if ws is not None:
            ws[i] = w
        if epss is not None:
            epss.append(eps)
    states = _integrate_batch(model, x0s, ws, sim)
    eps_arr = np.stack(epss) if epss is not None else None
    y = _measure(model, states, eps_arr).reshape(m, steps + 1, model.n_y)
    _check_outputs_finite(y)
    return SampleSet.from_array(y, sim.dt, label=label)
