"""Empirical observability Gramian of the nominal system.

The Gramian accumulates output sensitivities to symmetric state
perturbations:

    W_ij = dt / (4 eps^2) * sum_t (y_t^{+i} - y_t^{-i}) . (y_t^{+j} - y_t^{-j}),

where y^{+-i} are nominal output trajectories started from x0 +- eps e_i.
The eigenvector of the smallest eigenvalue is the local direction of weak
unobservability; for systems whose output is conserved along some manifold,
it aligns with the tangent of that manifold.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .simulate import SimConfig, SystemModel, simulate_deterministic

EIGENGAP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GramianResult:
    """Empirical Gramian with its spectral summary.

    eigenvalues are ascending; null_direction is the unit eigenvector of
    the smallest eigenvalue, sign-normalized so its first nonzero component
    is positive. degenerate flags a (near-)tied smallest eigenspace, in
    which case the reported direction is an arbitrary basis pick.
    """

    gramian: np.ndarray
    eigenvalues: np.ndarray
    null_direction: np.ndarray
    epsilon: float
    degenerate: bool = False


def _sign_normalize(v: np.ndarray) -> np.ndarray:
    for comp in v:
        if abs(comp) > 1e-12:
            return v if comp > 0 else -v
    return v


def empirical_gramian(
    model: SystemModel, x0: Sequence[float], epsilon: float, sim: SimConfig
) -> GramianResult:
    """Compute the empirical observability Gramian of the nominal system.

    Noise sources of the model are ignored; each state coordinate is
    perturbed by +-epsilon and the resulting 2 n_x nominal simulations are
    correlated into W. The perturbed simulations are independent of each
    other, so they may be evaluated in any order. Raises SimulationBlowup
    if any perturbed trajectory leaves the finite floats.
    """
    if not (epsilon > 0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    x0 = np.asarray(x0, dtype=float)
    nominal = model.nominal()
    n_x = model.n_x
    diffs = []
    for i in range(n_x):
        offset = np.zeros(n_x)
        offset[i] = epsilon
        _, plus = simulate_deterministic(nominal, x0 + offset, sim)
        _, minus = simulate_deterministic(nominal, x0 - offset, sim)
        diffs.append(plus.values - minus.values)
    w = np.empty((n_x, n_x))
    scale = sim.dt / (4.0 * epsilon**2)
    for i in range(n_x):
        for j in range(i, n_x):
            w[i, j] = scale * float(np.sum(diffs[i] * diffs[j]))
            w[j, i] = w[i, j]
    eigenvalues, eigenvectors = np.linalg.eigh(w)
    null_direction = _sign_normalize(eigenvectors[:, 0].copy())
    degenerate = False
    if n_x >= 2:
        gap = eigenvalues[1] - eigenvalues[0]
        if gap <= EIGENGAP_TOLERANCE * max(1.0, abs(eigenvalues[-1])):
            degenerate = True
            warnings.warn(
                "smallest Gramian eigenvalue is (near-)degenerate; "
                "the null direction is an arbitrary pick from its eigenspace"
            )
    return GramianResult(
        gramian=w,
        eigenvalues=eigenvalues,
        null_direction=null_direction,
        epsilon=float(epsilon),
        degenerate=degenerate,
    )


def tangent_alignment(direction: Sequence[float], x0: Sequence[float], grad: Callable) -> float:
    """Angle in degrees between a direction and the level-set tangent plane.

    The tangent plane at x0 is the hyperplane orthogonal to grad(x0). The
    angle is 0 when the direction lies in the plane and 90 when it is
    parallel to the gradient.
    """
    direction = np.asarray(direction, dtype=float)
    gradient = np.asarray(grad(np.asarray(x0, dtype=float)), dtype=float)
    norm_g = np.linalg.norm(gradient)
    if norm_g == 0:
        raise ValueError(f"gradient vanishes at {x0}; the tangent plane is undefined")
    norm_d = np.linalg.norm(direction)
    if norm_d == 0:
        raise ValueError("direction must be nonzero")
    cos_to_gradient = abs(float(direction @ gradient)) / (norm_d * norm_g)
    return float(np.degrees(np.arcsin(np.clip(cos_to_gradient, 0.0, 1.0))))
