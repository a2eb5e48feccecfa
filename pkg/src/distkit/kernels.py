"""Gaussian kernel on trajectory space, Gram matrices, and bandwidth selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .trajectories import SampleSet, Trajectory, require_comparable


class DegenerateDataError(ValueError):
    """Raised when the data cannot yield a positive kernel bandwidth."""


@dataclass(frozen=True)
class KernelConfig:
    """Gaussian-kernel settings.

    Parameters
    ----------
    sigma : float
        Scalar width of the Gaussian kernel, in the units of the flattened
        output distance. Must be strictly positive.
    bound : float
        Upper bound B on kernel values, used by the test thresholds.
        The Gaussian kernel satisfies 0 < k <= 1, so bound is 1.
    """

    sigma: float
    bound: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not (self.bound > 0):
            raise ValueError(f"kernel bound must be positive, got {self.bound}")


def gaussian_kernel(a: Trajectory, b: Trajectory, cfg: KernelConfig) -> float:
    """Gaussian kernel between two whole output trajectories.

    Computes exp(-||a - b||_F^2 / (2 sigma^2)), where the squared Frobenius
    norm sums squared differences over every time step and output dimension.

    Parameters
    ----------
    a, b : Trajectory
        Trajectories of identical shape and sampling period.
    cfg : KernelConfig
        Kernel settings; only sigma is used.

    Returns
    -------
    float
        Kernel value in (0, 1]; equals 1 exactly when a and b coincide.
    """
    if not a.same_shape(b):
        raise ValueError(f"trajectory shapes differ: {a.values.shape}/dt={a.dt} vs {b.values.shape}/dt={b.dt}")
    diff = a.values - b.values
    sq = float(np.dot(diff.ravel(), diff.ravel()))
    return math.exp(-sq / (2.0 * cfg.sigma**2))


def gram_matrix(a: SampleSet, b: SampleSet, cfg: KernelConfig) -> np.ndarray:
    """Kernel matrix between two sample sets.

    Entry (i, j) is the Gaussian kernel between a.trajectories[i] and
    b.trajectories[j]. When called with the same object for both sets, the
    result is exactly symmetric with a unit diagonal (pairs are computed
    once and mirrored). Entries are independent of each other, so rows may
    be evaluated in any order without changing the result.
    """
    if a is b:
        sq = pdist(a.as_matrix(), "sqeuclidean")
        return np.exp(-squareform(sq) / (2.0 * cfg.sigma**2))
    require_comparable(a, b)
    sq = cdist(a.as_matrix(), b.as_matrix(), "sqeuclidean")
    return np.exp(-sq / (2.0 * cfg.sigma**2))


def pooled_gram_matrix(a: SampleSet, b: SampleSet, cfg: KernelConfig) -> np.ndarray:
    """Symmetric kernel matrix over the concatenation of two sets.

    Rows/columns 0..m-1 belong to `a`, the rest to `b`. Shared by the MMD
    estimator and the permutation null, which resamples splits of the pool.
    """
    require_comparable(a, b)
    pooled = np.vstack([a.as_matrix(), b.as_matrix()])
    sq = pdist(pooled, "sqeuclidean")
    return np.exp(-squareform(sq) / (2.0 * cfg.sigma**2))


def median_pairwise_distance(a: SampleSet, b: SampleSet) -> float:
    """Median Frobenius distance over all unordered pairs of the pooled sets.

    The pool is the union of both sets; every unordered pair of distinct
    members contributes one distance, including pairs within a single set.

    Raises
    ------
    DegenerateDataError
        If the median distance is zero, which would force sigma = 0.
    """
    med = _pooled_median_distance(a, b)
    if med <= 0.0:
        raise DegenerateDataError("median pairwise distance is zero; the pooled trajectories are (mostly) identical")
    return med


def _pooled_median_distance(a: SampleSet, b: SampleSet) -> float:
    require_comparable(a, b)
    pooled = np.vstack([a.as_matrix(), b.as_matrix()])
    if pooled.shape[0] < 2:
        raise ValueError("need at least two trajectories in the union to form a pair")
    return float(np.median(pdist(pooled)))


def lower_quantile(values: Sequence[float], q: float) -> float:
    """Order-statistics quantile without interpolation.

    Returns the sorted value at index ceil(q * n) - 1, clamped to index 0.
    A small epsilon guards against float representation of q * n landing
    just above an integer.
    """
    arr = np.sort(np.asarray(values, dtype=float))
    n = arr.size
    if n == 0:
        raise ValueError("empty value list")
    idx = max(0, math.ceil(q * n - 1e-9) - 1)
    return float(arr[idx])


def sigma_meta_heuristic(pairs: Iterable[tuple[SampleSet, SampleSet]]) -> float:
    """Shared bandwidth for comparing many pairs of sample sets.

    Computes the median pairwise distance of each pair, then returns the
    0.1-quantile (lower convention) of those medians. Pairs near the low end
    of the list are the hardest to tell apart, so the chosen sigma matches
    the noise scale of the data.

    Raises
    ------
    DegenerateDataError
        If the selected quantile is zero (e.g. all medians vanish).
    """
    medians = [_pooled_median_distance(a, b) for a, b in pairs]
    if not medians:
        raise ValueError("sigma_meta_heuristic needs at least one pair of sample sets")
    sigma = lower_quantile(medians, 0.1)
    if sigma <= 0.0:
        raise DegenerateDataError("bandwidth meta-heuristic selected a zero distance; data too degenerate")
    return sigma
