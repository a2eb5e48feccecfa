"""Distinguishability sweeps over grids of candidate initial states.

A sweep fixes a reference state x_a, draws one reference sample set, and
runs the two-sample test between that set and a freshly simulated set for
every grid point x_b. The record of per-cell MMD values and test outcomes
forms a distinguishability map; the cells where the test does not trigger
are the empirical class of indistinguishability of x_a.

Every value in a sweep derives deterministically from the master seed: the
reference set uses the derived seed at index 0, cell i uses the two seeds
derived at index 1 + i (one for simulation, one for the bootstrap), and the
bandwidth subsample selection uses index 2**48. Cells may therefore be
evaluated in parallel, in any order, with bit-identical results.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .kernels import DegenerateDataError, KernelConfig, lower_quantile, _pooled_median_distance
from .mmd import TestConfig, two_sample_test
from .simulate import SimConfig, SimulationBlowup, SystemModel, derive_seeds, sample_output_set, substream
from .trajectories import SampleSet

_SIGMA_SELECT_INDEX = 2**48


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of initial states.

    lower/upper/points describe the swept dimensions; `fixed` pins the
    remaining state coordinates. By default the swept values fill the state
    coordinates not named in `fixed`, in ascending order; `swept_dims`
    overrides that assignment. Cells are enumerated in row-major order
    (last swept dimension varying fastest).
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    points: tuple[int, ...]
    fixed: Mapping[int, float] | None = None
    swept_dims: tuple[int, ...] | None = None

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        points = tuple(int(p) for p in self.points)
        if not (len(lower) == len(upper) == len(points)) or not lower:
            raise ValueError("lower, upper and points must share a positive length")
        for lo, up, p in zip(lower, upper, points):
            if p < 2:
                raise ValueError(f"need at least 2 points per swept dimension, got {p}")
            if not lo < up:
                raise ValueError(f"lower bound {lo} must be below upper bound {up}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "fixed", dict(self.fixed or {}))
        if self.swept_dims is not None:
            object.__setattr__(self, "swept_dims", tuple(int(d) for d in self.swept_dims))

    @property
    def n_dims(self) -> int:
        return len(self.points)

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.points))

    def axis_values(self, axis: int) -> np.ndarray:
        return np.linspace(self.lower[axis], self.upper[axis], self.points[axis])

    def swept_into(self, n_x: int) -> tuple[int, ...]:
        """State coordinates carrying the swept values."""
        if self.swept_dims is not None:
            dims = self.swept_dims
        else:
            dims = tuple(d for d in range(n_x) if d not in self.fixed)[: self.n_dims]
        if len(dims) != self.n_dims:
            raise ValueError(f"grid sweeps {self.n_dims} dimensions but only {len(dims)} state dims are free")
        if len(set(dims) | set(self.fixed)) != self.n_dims + len(self.fixed):
            raise ValueError("swept and fixed dimensions overlap")
        return dims

    def states(self, n_x: int) -> np.ndarray:
        """All grid states as an (n_cells, n_x) array, in enumeration order."""
        dims = self.swept_into(n_x)
        axes = [self.axis_values(d) for d in range(self.n_dims)]
        out = np.zeros((self.n_cells, n_x))
        for dim, value in self.fixed.items():
            out[:, dim] = value
        mesh = np.meshgrid(*axes, indexing="ij")
        for axis, dim in enumerate(dims):
            out[:, dim] = mesh[axis].ravel()
        return out


@dataclass(frozen=True)
class SweepCell:
    """Test outcome at one grid state."""

    x_b: tuple[float, ...]
    mmd_hat: float
    kappa: float
    ratio: float
    trigger: bool
    status: str = "ok"


@dataclass(frozen=True)
class SweepResult:
    """Full record of a grid sweep; one shared kernel bandwidth for all cells."""

    grid: GridSpec
    x_a: tuple[float, ...]
    sigma: float
    bound: float
    m: int
    n: int
    alpha: float
    method: str
    n_permutations: int
    seed: int
    cells: tuple[SweepCell, ...]
    model_name: str = ""

    def __post_init__(self):
        if len(self.cells) != self.grid.n_cells:
            raise ValueError(f"expected {self.grid.n_cells} cell records, got {len(self.cells)}")


def _cell_sample_set(model, x_b, m, sim, cell_seed, label=""):
    return sample_output_set(model, x_b, m, replace(sim, seed=cell_seed), label=label)


def grid_sweep(
    model: SystemModel,
    x_a: Sequence[float],
    grid: GridSpec,
    m: int,
    sim: SimConfig,
    tcfg: TestConfig,
    kcfg: KernelConfig | None = None,
    sigma_subsample: int = 200,
    threads: int = 1,
) -> SweepResult:
    """Run the two-sample test between x_a and every grid state.

    The reference sample set is generated once and reused for all cells;
    each cell gets a fresh m-trajectory set from its own seed substream.
    With kcfg=None the kernel bandwidth is selected automatically: the
    median pairwise distance of (reference, cell) pools is computed for up
    to `sigma_subsample` cells (all cells when 0) and sigma is the lower
    0.1-quantile of those medians, so every cell shares one bandwidth.
    Cells whose simulation blows up are recorded with an error status
    rather than dropped.
    """
    if m < 2:
        raise ValueError(f"need m >= 2 trajectories per set, got {m}")
    x_a = np.asarray(x_a, dtype=float)
    states = grid.states(model.n_x)
    n_cells = grid.n_cells
    ref_seed = derive_seeds(sim.seed, 0, 1)[0]
    cell_seeds = [derive_seeds(sim.seed, 1 + i, 2) for i in range(n_cells)]
    reference = sample_output_set(model, x_a, m, replace(sim, seed=ref_seed), label="reference")

    if kcfg is None:
        if sigma_subsample and 0 < sigma_subsample < n_cells:
            chooser = substream(sim.seed, _SIGMA_SELECT_INDEX)
            selected = np.sort(chooser.choice(n_cells, size=sigma_subsample, replace=False))
        else:
            selected = np.arange(n_cells)
        medians = []
        for i in selected:
            try:
                cell_set = _cell_sample_set(model, states[i], m, sim, cell_seeds[i][0])
            except SimulationBlowup:
                continue
            medians.append(_pooled_median_distance(reference, cell_set))
        if not medians:
            raise DegenerateDataError("no usable cells for bandwidth selection (all simulations blew up)")
        sigma = lower_quantile(medians, 0.1)
        if sigma <= 0:
            raise DegenerateDataError("bandwidth meta-heuristic selected a zero distance")
        kcfg = KernelConfig(sigma)

    def evaluate(i: int) -> SweepCell:
        x_b = states[i]
        try:
            cell_set = _cell_sample_set(model, x_b, m, sim, cell_seeds[i][0])
            result = two_sample_test(reference, cell_set, kcfg, replace(tcfg, seed=cell_seeds[i][1]))
        except SimulationBlowup as err:
            return SweepCell(
                x_b=tuple(x_b),
                mmd_hat=math.nan,
                kappa=math.nan,
                ratio=math.nan,
                trigger=False,
                status=f"error: {err}",
            )
        return SweepCell(
            x_b=tuple(x_b),
            mmd_hat=result.mmd_hat,
            kappa=result.kappa,
            ratio=result.ratio,
            trigger=result.trigger,
            status="ok",
        )

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cells = tuple(pool.map(evaluate, range(n_cells)))
    else:
        cells = tuple(evaluate(i) for i in range(n_cells))

    return SweepResult(
        grid=grid,
        x_a=tuple(x_a),
        sigma=kcfg.sigma,
        bound=kcfg.bound,
        m=m,
        n=m,
        alpha=tcfg.alpha,
        method=tcfg.threshold_method,
        n_permutations=tcfg.n_permutations,
        seed=sim.seed,
        cells=cells,
        model_name=model.name,
    )


def indistinguishability_class(result: SweepResult) -> list[tuple[float, ...]]:
    """Grid states whose test did not trigger (error cells excluded)."""
    return [cell.x_b for cell in result.cells if cell.status == "ok" and not cell.trigger]


@dataclass(frozen=True)
class ClassAlignment:
    """Summary of a signed predicate over an empirical class of states.

    count = 0 marks an empty class; mean_abs and max_abs are then None.
    """

    count: int
    mean_abs: float | None
    max_abs: float | None


def class_alignment_metric(
    class_points: Sequence[Sequence[float]], predicate: Callable
) -> ClassAlignment:
    """Evaluate how close class points lie to an analytic class.

    The predicate is a signed, distance-like function vanishing on the
    analytic class; the summary reports mean and max of its magnitude.
    """
    values = [abs(float(predicate(np.asarray(p, dtype=float)))) for p in class_points]
    if not values:
        return ClassAlignment(count=0, mean_abs=None, max_abs=None)
    return ClassAlignment(count=len(values), mean_abs=float(np.mean(values)), max_abs=float(max(values)))


def _format_float(x: float) -> str:
    return format(x, ".17g")


def save_sweep_result(result: SweepResult, header_path, table_path) -> None:
    """Write the sweep as a JSON header plus a CSV table.

    The CSV has one row per cell in enumeration order with columns
    x1..xd, mmd_hat, kappa, ratio, trigger, status. Floats are serialized
    with 17 significant digits, so reruns with the same seed produce
    byte-identical files.
    """
    header = {
        "grid": {
            "lower": list(result.grid.lower),
            "upper": list(result.grid.upper),
            "points": list(result.grid.points),
            "fixed": {str(k): v for k, v in result.grid.fixed.items()},
        },
        "x_a": list(result.x_a),
        "sigma": result.sigma,
        "bound": result.bound,
        "m": result.m,
        "n": result.n,
        "alpha": result.alpha,
        "method": result.method,
        "n_permutations": result.n_permutations,
        "seed": result.seed,
        "model": result.model_name,
    }
    with open(header_path, "w", encoding="utf-8") as fh:
        json.dump(header, fh, indent=2, sort_keys=True)
        fh.write("\n")
    n_dims = result.grid.n_dims
    swept = result.grid.swept_into(len(result.x_a)) if result.x_a else tuple(range(n_dims))
    with open(table_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{k + 1}" for k in range(n_dims)] + ["mmd_hat", "kappa", "ratio", "trigger", "status"])
        for cell in result.cells:
            coords = [cell.x_b[d] for d in swept]
            writer.writerow(
                [_format_float(c) for c in coords]
                + [_format_float(cell.mmd_hat), _format_float(cell.kappa), _format_float(cell.ratio)]
                + ["true" if cell.trigger else "false", cell.status]
            )


def save_class_points(points: Sequence[Sequence[float]], path) -> None:
    """Write the empirical class as a JSON list of states."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([list(map(float, p)) for p in points], fh, indent=2)
        fh.write("\n")


def load_sweep_result(header_path, table_path) -> tuple[dict, list[dict]]:
    """Read back the two sweep files as (header dict, list of row dicts)."""
    with open(header_path, encoding="utf-8") as fh:
        header = json.load(fh)
    rows = []
    with open(table_path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {k: v for k, v in row.items()}
            for key in list(parsed):
                if key.startswith("x") and key[1:].isdigit() or key in ("mmd_hat", "kappa", "ratio"):
                    parsed[key] = float(parsed[key])
            parsed["trigger"] = row["trigger"] == "true"
            rows.append(parsed)
    return header, rows
