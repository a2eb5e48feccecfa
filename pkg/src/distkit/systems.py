"""Ready-made system models for distinguishability experiments.

Three families are provided: a planar linear SDE with a sinusoidal forcing
term and a scalar output that blinds one direction, an undamped Duffing
oscillator measured through its conserved energy, and a generic discrete
linear system (to be stepped with dt = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .simulate import SystemModel

_LINEAR_A = ((-2.0, -1.0), (-1.0, -2.0))
_LINEAR_A0 = (3.0, 3.0)
_LINEAR_C = ((-1.0, 1.0),)


@dataclass(frozen=True)
class LinearDriftParams:
    """Planar linear system dX = (A X + A0 sin(omega t)) dt + Sigma dW,
    Y = C X + eps with eps ~ N(0, meas_var).

    The defaults make span{(1, 1)} invariant under A and annihilated by C,
    so states differing along that direction produce identical nominal
    outputs: the class of indistinguishability of x is the line x + span{(1, 1)}.
    """

    a_matrix: tuple = _LINEAR_A
    forcing: tuple = _LINEAR_A0
    omega: float = 2.0
    sigma_matrix: tuple = ((0.1, 0.0), (0.0, 0.1))
    c_matrix: tuple = _LINEAR_C
    meas_var: float = 0.01


@dataclass(frozen=True)
class DuffingParams:
    """Undamped Duffing oscillator dX1 = X2 dt + b1 dW1,
    dX2 = (X1 - X1^3) dt + b2 dW2, measured through the conserved energy
    with additive Gaussian noise of variance meas_var."""

    b1: float = 0.05
    b2: float = 0.05
    meas_var: float = 0.5


def hamiltonian(x: np.ndarray) -> np.ndarray:
    """Conserved energy of the nominal Duffing oscillator.

    h(x) = -x1^2 / 2 + x2^2 / 2 + x1^4 / 4, acting on the last axis.
    """
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    return -0.5 * x1**2 + 0.5 * x2**2 + 0.25 * x1**4


def hamiltonian_gradient(x: np.ndarray) -> np.ndarray:
    """Gradient of the Duffing energy, (x1^3 - x1, x2)."""
    x = np.asarray(x, dtype=float)
    return np.stack([x[..., 0] ** 3 - x[..., 0], x[..., 1]], axis=-1)


def _gaussian_output_noise(std: float, n_y: int):
    if std == 0.0:
        return None

    def sampler(rng, count):
        return std * rng.standard_normal((count, n_y))

    return sampler


def linear_drift_system(params: LinearDriftParams | None = None) -> SystemModel:
    """Build the forced linear SDE model.

    When constructed with the default (A, C), the unobservable direction is
    validated algebraically: A maps (1, 1) into its own span and C
    annihilates it.
    """
    p = params or LinearDriftParams()
    a = np.asarray(p.a_matrix, dtype=float)
    a0 = np.asarray(p.forcing, dtype=float)
    sig = np.asarray(p.sigma_matrix, dtype=float)
    c = np.asarray(p.c_matrix, dtype=float)
    if a.shape != (2, 2) or a0.shape != (2,) or sig.shape != (2, 2) or c.shape != (1, 2):
        raise ValueError("linear drift system expects A (2x2), forcing (2,), Sigma (2x2), C (1x2)")
    if p.meas_var < 0:
        raise ValueError(f"measurement variance must be nonnegative, got {p.meas_var}")
    if np.array_equal(a, np.asarray(_LINEAR_A)) and np.array_equal(c, np.asarray(_LINEAR_C)):
        ones = np.ones(2)
        image = a @ ones
        if abs(image[0] - image[1]) > 1e-12 or abs(float((c @ ones)[0])) > 1e-12:
            raise AssertionError("default (A, C) lost the (1, 1) invariance")

    # einsum keeps batched and single-trajectory arithmetic bit-identical
    def drift(x, t):
        return np.einsum("...j,ij->...i", x, a) + a0 * np.sin(p.omega * t)

    def measurement(x):
        return np.einsum("...j,ij->...i", x, c)

    return SystemModel(
        n_x=2,
        n_y=1,
        drift=drift,
        measurement=measurement,
        diffusion=lambda x, t: sig,
        measurement_noise=_gaussian_output_noise(np.sqrt(p.meas_var), 1),
        n_w=2,
        name="linear_drift",
    )


def duffing_system(params: DuffingParams | None = None) -> SystemModel:
    """Build the stochastic Duffing oscillator measured through its energy."""
    p = params or DuffingParams()
    if p.b1 < 0 or p.b2 < 0 or p.meas_var < 0:
        raise ValueError("diffusion gains and measurement variance must be nonnegative")
    diff = np.diag([p.b1, p.b2]).astype(float)

    def drift(x, t):
        x = np.asarray(x, dtype=float)
        return np.stack([x[..., 1], x[..., 0] - x[..., 0] ** 3], axis=-1)

    def measurement(x):
        return hamiltonian(x)[..., None]

    diffusion = None if (p.b1 == 0.0 and p.b2 == 0.0) else (lambda x, t: diff)
    return SystemModel(
        n_x=2,
        n_y=1,
        drift=drift,
        measurement=measurement,
        diffusion=diffusion,
        measurement_noise=_gaussian_output_noise(np.sqrt(p.meas_var), 1),
        n_w=2 if diffusion is not None else 0,
        name="duffing",
    )


def discrete_linear_system(
    a_matrix, c_matrix, process_gain=None, meas_gain=None
) -> SystemModel:
    """Discrete-time linear system x+ = A x + Q eta, y = C x + R eps.

    eta and eps are standard normal. The model reuses the continuous-time
    integrator with dt = 1 (the drift is A - I), so simulate it with
    SimConfig(horizon=T, dt=1.0).
    """
    a = np.asarray(a_matrix, dtype=float)
    c = np.asarray(c_matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"A must be square, got shape {a.shape}")
    n_x = a.shape[0]
    if c.ndim == 1:
        c = c[None, :]
    if c.shape[1] != n_x:
        raise ValueError(f"C has {c.shape[1]} columns, expected {n_x}")
    n_y = c.shape[0]
    q = None if process_gain is None else np.asarray(process_gain, dtype=float)
    if q is not None and (q.ndim != 2 or q.shape[0] != n_x):
        raise ValueError(f"Q must have {n_x} rows, got shape {None if q is None else q.shape}")
    r = None if meas_gain is None else np.asarray(meas_gain, dtype=float)
    if r is not None and (r.ndim != 2 or r.shape[0] != n_y):
        raise ValueError(f"R must have {n_y} rows, got shape {None if r is None else r.shape}")
    shift = a - np.eye(n_x)

    def drift(x, t):
        return np.einsum("...j,ij->...i", x, shift)

    def measurement(x):
        return np.einsum("...j,ij->...i", x, c)

    noise = None
    if r is not None and np.any(r != 0.0):
        def noise(rng, count):
            return rng.standard_normal((count, r.shape[1])) @ r.T

    return SystemModel(
        n_x=n_x,
        n_y=n_y,
        drift=drift,
        measurement=measurement,
        diffusion=None if q is None or not np.any(q != 0.0) else (lambda x, t: q),
        measurement_noise=noise,
        n_w=0 if q is None or not np.any(q != 0.0) else q.shape[1],
        name="discrete_linear",
    )
