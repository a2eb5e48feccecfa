"""Finite-sample MMD estimation and the two-sample distinguishability test.

The squared maximum mean discrepancy between two output-trajectory
distributions is estimated by the biased V-statistic

    (1/m^2) sum_ij k(A_i, A_j) + (1/n^2) sum_ij k(B_i, B_j)
        - (2/mn) sum_ij k(A_i, B_j).

A test compares mmd_hat = sqrt(max(0, estimate)) against a threshold kappa:
either the closed-form concentration threshold sqrt(2B/m) (1 + sqrt(2 ln 1/a))
or a permutation (bootstrap) quantile of the null distribution. Exceeding
kappa declares the two initial laws distinguishable with confidence 1 - alpha.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .kernels import KernelConfig, lower_quantile, pooled_gram_matrix
from .trajectories import SampleSet, require_comparable

THRESHOLD_METHODS = ("analytic", "bootstrap")


@dataclass(frozen=True)
class TestConfig:
    """Settings of the two-sample test.

    alpha is the acceptable Type-I error; n_permutations and seed only
    matter for the bootstrap threshold. Permutation b of the bootstrap is
    drawn from the substream SeedSequence((seed, b)), so results do not
    depend on evaluation order.
    """

    alpha: float = 0.05
    threshold_method: str = "analytic"
    n_permutations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.threshold_method not in THRESHOLD_METHODS:
            raise ValueError(f"unknown threshold method {self.threshold_method!r}")
        if self.threshold_method == "bootstrap" and self.n_permutations < 100:
            raise ValueError(f"need at least 100 permutations, got {self.n_permutations}")


@dataclass(frozen=True)
class TestResult:
    """Outcome of a two-sample distinguishability test."""

    mmd_hat: float
    mmd_sq_hat: float
    kappa: float
    trigger: bool
    ratio: float
    m: int
    n: int
    alpha: float
    method: str
    degenerate: bool = False


def mmd_squared_biased(a: SampleSet, b: SampleSet, cfg: KernelConfig) -> float:
    """Biased (V-statistic) estimate of the squared MMD between two sets.

    The value is nonnegative up to floating-point rounding; tiny negative
    results are possible and left unclamped (callers that need the root
    clamp at zero). Each of the three kernel-block sums is accumulated with
    exact (fsum) summation, which makes the result independent of trajectory
    order within either set and exactly symmetric in (a, b).
    """
    require_comparable(a, b)
    m, n = a.size, b.size
    k = pooled_gram_matrix(a, b, cfg)
    kaa = math.fsum(k[:m, :m].ravel())
    kbb = math.fsum(k[m:, m:].ravel())
    kab = math.fsum(k[:m, m:].ravel())
    return kaa / m**2 + kbb / n**2 - 2.0 * kab / (m * n)


def analytic_threshold(m: int, bound: float, alpha: float) -> float:
    """Closed-form acceptance-region threshold kappa.

    kappa = sqrt(2B/m) * (1 + sqrt(2 ln(1/alpha))) for a kernel bounded by
    B and m trajectories per set. Decreasing in m, increasing as alpha
    shrinks. alpha = 1 is allowed and gives the degenerate sqrt(2B/m).
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    if not (bound > 0):
        raise ValueError(f"kernel bound must be positive, got {bound}")
    if not (0.0 < alpha <= 1.0):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return math.sqrt(2.0 * bound / m) * (1.0 + math.sqrt(2.0 * math.log(1.0 / alpha)))


def bootstrap_null_statistics(
    a: SampleSet, b: SampleSet, cfg: KernelConfig, tcfg: TestConfig
) -> np.ndarray:
    """MMD values of random half/half splits of the pooled trajectories.

    Pools the 2m trajectories, then for each permutation shuffles the pool
    with its own seed substream, splits it into two halves and evaluates the
    MMD of the split. These are draws from the test's null distribution
    (both halves come from the same pool).
    """
    require_comparable(a, b)
    m, n = a.size, b.size
    if m != n:
        raise ValueError(f"bootstrap requires equally sized sets, got m={m}, n={n}")
    if m < 2:
        raise ValueError(f"bootstrap needs at least 2 trajectories per set, got m={m}")
    k = pooled_gram_matrix(a, b, cfg)
    total = 2 * m
    # sign vector s (+1 first half, -1 second half) turns the three block
    # sums into the quadratic form s K s / m^2, valid because m = n
    signs = np.empty((tcfg.n_permutations, total))
    for perm in range(tcfg.n_permutations):
        rng = np.random.default_rng(np.random.SeedSequence((tcfg.seed, perm)))
        order = rng.permutation(total)
        s = np.empty(total)
        s[order[:m]] = 1.0
        s[order[m:]] = -1.0
        signs[perm] = s
    quad = np.einsum("pi,pi->p", signs @ k, signs) / m**2
    return np.sqrt(np.maximum(quad, 0.0))


def _bootstrap_kappa(a, b, cfg, tcfg):
    null = bootstrap_null_statistics(a, b, cfg, tcfg)
    kappa = lower_quantile(null, 1.0 - tcfg.alpha)
    degenerate = bool(np.all(null == 0.0))
    if degenerate:
        warnings.warn("degenerate pool: all permutation statistics are zero, threshold is 0")
    return kappa, degenerate


def bootstrap_threshold(a: SampleSet, b: SampleSet, cfg: KernelConfig, tcfg: TestConfig) -> float:
    """Permutation estimate of the test threshold kappa.

    Returns the empirical (1 - alpha)-quantile (lower convention) of the
    null statistics from `bootstrap_null_statistics`. Deterministic for a
    fixed tcfg.seed. A pool of identical trajectories yields kappa = 0 and
    a warning, since every split then has zero MMD.
    """
    kappa, _ = _bootstrap_kappa(a, b, cfg, tcfg)
    return kappa


def two_sample_test(a: SampleSet, b: SampleSet, cfg: KernelConfig, tcfg: TestConfig) -> TestResult:
    """Test whether two sample sets come from distinguishable output laws.

    Computes mmd_hat = sqrt(max(0, mmd_squared_biased)) and the threshold
    kappa of the configured method, and triggers when mmd_hat >= kappa.
    A trigger means the two initial distributions are distinguishable with
    confidence at least 1 - alpha. Both sets must have the same size.
    """
    require_comparable(a, b)
    if a.size != b.size:
        raise ValueError(f"the test requires m = n, got m={a.size}, n={b.size}")
    mmd_sq = mmd_squared_biased(a, b, cfg)
    mmd_hat = math.sqrt(max(0.0, mmd_sq))
    degenerate = False
    if tcfg.threshold_method == "analytic":
        kappa = analytic_threshold(a.size, cfg.bound, tcfg.alpha)
    else:
        kappa, degenerate = _bootstrap_kappa(a, b, cfg, tcfg)
    if kappa > 0:
        ratio = mmd_hat / kappa
    else:
        ratio = math.inf if mmd_hat > 0 else 0.0
    return TestResult(
        mmd_hat=mmd_hat,
        mmd_sq_hat=mmd_sq,
        kappa=kappa,
        trigger=mmd_hat >= kappa,
        ratio=ratio,
        m=a.size,
        n=b.size,
        alpha=tcfg.alpha,
        method=tcfg.threshold_method,
        degenerate=degenerate,
    )


def concentration_probability(m: int, n: int, bound: float, epsilon: float) -> float:
    """Upper bound on the probability that the MMD estimate deviates from
    the population value by more than 2(sqrt(B/m) + sqrt(B/n)) + epsilon.

    Evaluates 2 exp(-epsilon^2 / (2B) * mn / (m + n)); symmetric in (m, n)
    and vacuous (= 2) at epsilon = 0.
    """
    if m < 1 or n < 1:
        raise ValueError(f"sample sizes must be at least 1, got m={m}, n={n}")
    if not (bound > 0):
        raise ValueError(f"kernel bound must be positive, got {bound}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be nonnegative, got {epsilon}")
    return 2.0 * math.exp(-(epsilon**2) / (2.0 * bound) * (m * n) / (m + n))


def deviation_envelope(m: int, n: int, bound: float, epsilon: float) -> float:
    """Radius 2(sqrt(B/m) + sqrt(B/n)) + epsilon of the concentration bound."""
    return 2.0 * (math.sqrt(bound / m) + math.sqrt(bound / n)) + epsilon


def min_sample_size(z: float, bound: float, beta: float) -> int:
    """Smallest per-set sample size guaranteeing rejection power 1 - beta.

    For a true population MMD of z > 0, returns the smallest integer m
    strictly greater than

        (B/z^2) * (4 + sqrt(2) + 2 (sqrt(ln 1/beta) + sqrt(ln 2/beta)))^2,

    so that the null is rejected with probability at least 1 - beta.
    """
    if z <= 0:
        raise ValueError("z must be positive; the bound is infinite at z = 0")
    if not (bound > 0):
        raise ValueError(f"kernel bound must be positive, got {bound}")
    if not (0.0 < beta < 1.0):
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    factor = 4.0 + math.sqrt(2.0) + 2.0 * (math.sqrt(math.log(1.0 / beta)) + math.sqrt(math.log(2.0 / beta)))
    return math.floor(bound / z**2 * factor**2) + 1
