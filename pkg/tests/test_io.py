import numpy as np
import pytest

from distkit.io import TrajectoryFormatError, load_sample_set_csv, save_sample_set_csv
from distkit.trajectories import SampleSet, Trajectory

from conftest import random_sample_set


class TestRoundTrip:
    def test_values_and_dt_exact(self, rng, tmp_path):
        original = random_sample_set(rng, 5, 7, 3, dt=0.01)
        path = tmp_path / "set.csv"
        save_sample_set_csv(path, original)
        loaded = load_sample_set_csv(path)
        assert loaded.size == original.size
        assert loaded.dt == original.dt
        for a, b in zip(loaded.trajectories, original.trajectories):
            assert np.array_equal(a.values, b.values)

    def test_small_file_shape(self, tmp_path):
        path = tmp_path / "small.csv"
        path.write_text(
            "traj_id,t,y1\n"
            "a,0,1.5\n"
            "a,1,2.5\n"
            "a,2,3.5\n"
            "b,0,0.0\n"
            "b,1,0.5\n"
            "b,2,1.0\n"
        )
        ss = load_sample_set_csv(path)
        assert (ss.size, ss.n_steps, ss.n_y) == (2, 2, 1)
        assert ss.dt == 1.0

    def test_rewrite_is_byte_identical(self, rng, tmp_path):
        original = random_sample_set(rng, 3, 4, 2, dt=0.1)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_sample_set_csv(p1, original)
        save_sample_set_csv(p2, original)
        assert p1.read_bytes() == p2.read_bytes()

    def test_extreme_values_survive(self, tmp_path):
        values = np.array([[1e-300], [1.0 + 2**-52], [12345678901234567.0], [-1e300]])
        original = SampleSet((Trajectory(values, 0.25),))
        path = tmp_path / "extreme.csv"
        save_sample_set_csv(path, original)
        loaded = load_sample_set_csv(path)
        assert np.array_equal(loaded.trajectories[0].values, values)


class TestValidation:
    def test_ragged_trajectory_named(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text(
            "traj_id,t,y1\n"
            "0,0,1.0\n"
            "0,1,2.0\n"
            "bad,0,3.0\n"
        )
        with pytest.raises(TrajectoryFormatError, match="bad"):
            load_sample_set_csv(path)

    def test_missing_columns(self, tmp_path):
        path = tmp_path / "cols.csv"
        path.write_text("time,y1\n0,1.0\n")
        with pytest.raises(TrajectoryFormatError, match="header"):
            load_sample_set_csv(path)

    def test_wrong_output_names(self, tmp_path):
        path = tmp_path / "names.csv"
        path.write_text("traj_id,t,out\n0,0,1.0\n")
        with pytest.raises(TrajectoryFormatError, match="output columns"):
            load_sample_set_csv(path)

    def test_non_numeric_cell_locates_row_and_column(self, tmp_path):
        path = tmp_path / "nan.csv"
        path.write_text(
            "traj_id,t,y1\n"
            "0,0,1.0\n"
            "0,1,oops\n"
        )
        with pytest.raises(TrajectoryFormatError, match=r"nan\.csv:3.*y1.*'oops'"):
            load_sample_set_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(TrajectoryFormatError, match="empty"):
            load_sample_set_csv(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "headeronly.csv"
        path.write_text("traj_id,t,y1\n")
        with pytest.raises(TrajectoryFormatError, match="no data rows"):
            load_sample_set_csv(path)

    def test_misaligned_time_grid(self, tmp_path):
        path = tmp_path / "tgrid.csv"
        path.write_text(
            "traj_id,t,y1\n"
            "0,0,1.0\n"
            "0,1,2.0\n"
            "0,3,3.0\n"
        )
        with pytest.raises(TrajectoryFormatError, match="time grid"):
            load_sample_set_csv(path)
