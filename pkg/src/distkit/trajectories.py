"""Output-trajectory containers shared by all analysis routines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One output path of a dynamical system.

    Parameters
    ----------
    values : np.ndarray
        Measurements of shape (T+1, n_y); row t holds the output at time
        t * dt, including the initial measurement at t = 0.
    dt : float
        Sampling period in seconds (strictly positive).
    """

    values: np.ndarray
    dt: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise ValueError(f"trajectory values must be 2-D (T+1, n_y), got ndim={values.ndim}")
        if values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"trajectory must have at least one step and one output, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("trajectory contains non-finite values")
        if not (self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dt", float(self.dt))

    @property
    def n_steps(self) -> int:
        """Number of integration steps T (the path has T+1 rows)."""
        return self.values.shape[0] - 1

    @property
    def n_y(self) -> int:
        return self.values.shape[1]

    def flat(self) -> np.ndarray:
        """Row-major flattening to a single vector of length (T+1) * n_y."""
        return self.values.ravel()

    def same_shape(self, other: "Trajectory") -> bool:
        return self.values.shape == other.values.shape and self.dt == other.dt


@dataclass(frozen=True, eq=False)
class SampleSet:
    """A collection of independent output trajectories from one initial law.

    All member trajectories must share the same shape and sampling period;
    the set then represents an empirical sample of the output-trajectory
    distribution it was drawn from.
    """

    trajectories: tuple[Trajectory, ...]
    label: str = ""
    _matrix: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        trajs = tuple(self.trajectories)
        if len(trajs) < 1:
            raise ValueError("a sample set needs at least one trajectory")
        first = trajs[0]
        for i, tr in enumerate(trajs):
            if not isinstance(tr, Trajectory):
                raise TypeError(f"member {i} is not a Trajectory")
            if not first.same_shape(tr):
                raise ValueError(
                    f"member {i} has shape {tr.values.shape} / dt {tr.dt}, "
                    f"expected {first.values.shape} / dt {first.dt}"
                )
        object.__setattr__(self, "trajectories", trajs)
        matrix = np.stack([tr.flat() for tr in trajs])
        matrix.setflags(write=False)
        object.__setattr__(self, "_matrix", matrix)

    @classmethod
    def from_array(cls, values: np.ndarray, dt: float, label: str = "") -> "SampleSet":
        """Build a set from an (m, T+1, n_y) or (m, T+1) array."""
        values = np.asarray(values, dtype=float)
        if values.ndim == 2:
            values = values[:, :, None]
        if values.ndim != 3:
            raise ValueError(f"expected (m, T+1, n_y) array, got shape {values.shape}")
        return cls(tuple(Trajectory(v, dt) for v in values), label=label)

    @property
    def size(self) -> int:
        return len(self.trajectories)

    @property
    def n_steps(self) -> int:
        return self.trajectories[0].n_steps

    @property
    def n_y(self) -> int:
        return self.trajectories[0].n_y

    @property
    def dt(self) -> float:
        return self.trajectories[0].dt

    def as_matrix(self) -> np.ndarray:
        """Stacked flattened trajectories, shape (m, (T+1) * n_y)."""
        return self._matrix

    def comparable_with(self, other: "SampleSet") -> bool:
        return self.trajectories[0].same_shape(other.trajectories[0])


def require_comparable(a: SampleSet, b: SampleSet) -> None:
    """Raise ValueError unless the two sets share trajectory shape and dt."""
    ta, tb = a.trajectories[0], b.trajectories[0]
    if ta.values.shape != tb.values.shape:
        raise ValueError(f"sample sets not comparable: shapes {ta.values.shape} vs {tb.values.shape}")
    if ta.dt != tb.dt:
        raise ValueError(f"sample sets not comparable: dt {ta.dt} vs {tb.dt}")
