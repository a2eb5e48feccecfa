"""Gaussian kernels on whole output trajectories, and picking a bandwidth.

The kernel compares two trajectories through the squared Frobenius norm of
their difference, so a single scalar bandwidth controls how quickly
similarity decays. When many pairs of data sets are compared on a common
scale, the bandwidth must be shared; the meta-heuristic picks the lower
decile of the per-pair median distances.
"""

import numpy as np

from distkit import (
    KernelConfig,
    SampleSet,
    Trajectory,
    gaussian_kernel,
    gram_matrix,
    median_pairwise_distance,
    sigma_meta_heuristic,
)

rng = np.random.default_rng(0)

# two scalar trajectories a unit apart: k = exp(-1 / (2 sigma^2))
a = Trajectory(np.zeros((5, 1)), dt=0.1)
b = Trajectory(np.full((5, 1), 1.0 / np.sqrt(5)), dt=0.1)
for sigma in (0.25, 0.5, 1.0, 2.0):
    print(f"sigma={sigma:4.2f}  k(a,b) = {gaussian_kernel(a, b, KernelConfig(sigma)):.6f}")

# a Gram matrix over a small sample set: symmetric, unit diagonal, PSD
sample = SampleSet.from_array(rng.standard_normal((6, 5, 1)), dt=0.1)
gram = gram_matrix(sample, sample, KernelConfig(1.0))
print("\nGram diagonal:", gram.diagonal())
print("smallest eigenvalue:", np.linalg.eigvalsh(gram).min())

# the median pairwise distance of a pooled pair of sets ...
other = SampleSet.from_array(rng.standard_normal((6, 5, 1)) + 2.0, dt=0.1)
print("\nmedian pairwise distance:", median_pairwise_distance(sample, other))

# ... and the shared bandwidth across many pairs: the 0.1-quantile of the
# per-pair medians, so hard-to-separate pairs set the scale
pairs = []
for shift in np.linspace(0.0, 3.0, 10):
    left = SampleSet.from_array(rng.standard_normal((6, 5, 1)), dt=0.1)
    right = SampleSet.from_array(rng.standard_normal((6, 5, 1)) + shift, dt=0.1)
    pairs.append((left, right))
print("shared sigma over 10 pairs:", sigma_meta_heuristic(pairs))
