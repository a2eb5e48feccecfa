import numpy as np
import pytest

from distkit.trajectories import SampleSet, Trajectory


def random_sample_set(rng, m, n_steps, n_y, dt=0.1, scale=1.0, label=""):
    values = scale * rng.standard_normal((m, n_steps + 1, n_y))
    return SampleSet.from_array(values, dt, label=label)


def scalar_trajectory(*vals, dt=1.0):
    return Trajectory(np.asarray(vals, dtype=float)[:, None], dt)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
