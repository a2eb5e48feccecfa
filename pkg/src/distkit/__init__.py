"""Distinguishability analysis of stochastic dynamical systems from data.

The package quantifies how well two initial states (or distributions) of a
noisy dynamical system can be told apart from repeated output measurements:
it estimates the maximum mean discrepancy between output-trajectory
distributions, runs a two-sample test against analytic or bootstrapped
thresholds, sweeps the test over state-space grids to map empirical classes
of indistinguishability, and compares against an empirical observability
Gramian baseline.
"""

from .gramian import GramianResult, empirical_gramian, tangent_alignment
from .kernels import (
    DegenerateDataError,
    KernelConfig,
    gaussian_kernel,
    gram_matrix,
    median_pairwise_distance,
    sigma_meta_heuristic,
)
from .mmd import (
    TestConfig,
    TestResult,
    analytic_threshold,
    bootstrap_threshold,
    concentration_probability,
    min_sample_size,
    mmd_squared_biased,
    two_sample_test,
)
from .simulate import (
    SimConfig,
    SimulationBlowup,
    SystemModel,
    sample_output_set,
    simulate_deterministic,
    simulate_stochastic,
    substream,
)
from .sweep import (
    GridSpec,
    SweepResult,
    class_alignment_metric,
    grid_sweep,
    indistinguishability_class,
    save_sweep_result,
)
from .systems import (
    DuffingParams,
    LinearDriftParams,
    discrete_linear_system,
    duffing_system,
    hamiltonian,
    linear_drift_system,
)
from .trajectories import SampleSet, Trajectory

__version__ = "0.1.0"

__all__ = [
    "DegenerateDataError",
    "DuffingParams",
    "GramianResult",
    "GridSpec",
    "KernelConfig",
    "LinearDriftParams",
    "SampleSet",
    "SimConfig",
    "SimulationBlowup",
    "SweepResult",
    "SystemModel",
    "TestConfig",
    "TestResult",
    "Trajectory",
    "analytic_threshold",
    "bootstrap_threshold",
    "class_alignment_metric",
    "concentration_probability",
    "discrete_linear_system",
    "duffing_system",
    "empirical_gramian",
    "gaussian_kernel",
    "gram_matrix",
    "grid_sweep",
    "hamiltonian",
    "indistinguishability_class",
    "linear_drift_system",
    "median_pairwise_distance",
    "min_sample_size",
    "mmd_squared_biased",
    "sample_output_set",
    "save_sweep_result",
    "sigma_meta_heuristic",
    "simulate_deterministic",
    "simulate_stochastic",
    "substream",
    "tangent_alignment",
    "two_sample_test",
]
