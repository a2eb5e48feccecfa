import numpy as np
import pytest

from distkit.gramian import GramianResult, empirical_gramian, tangent_alignment
from distkit.simulate import SimConfig, SystemModel
from distkit.systems import duffing_system, hamiltonian_gradient, linear_drift_system


def static_identity_model(scale=1.0):
    return SystemModel(
        n_x=2,
        n_y=2,
        drift=lambda x, t: np.zeros_like(x),
        measurement=lambda x: scale * x,
    )


class TestEmpiricalGramian:
    def test_static_identity_is_isotropic(self):
        sim = SimConfig(1.0, 0.1)
        with pytest.warns(UserWarning, match="degenerate"):
            res = empirical_gramian(static_identity_model(), [0.3, -0.2], 0.1, sim)
        # symmetric finite differences of the identity: W = (T+1) dt I
        expected = (sim.n_steps + 1) * sim.dt
        assert np.allclose(res.gramian, expected * np.eye(2), rtol=1e-12)
        assert res.degenerate

    def test_output_scaling_is_quadratic(self):
        sim = SimConfig(1.0, 0.1)
        with pytest.warns(UserWarning):
            base = empirical_gramian(static_identity_model(1.0), [0.0, 0.0], 0.1, sim)
        with pytest.warns(UserWarning):
            scaled = empirical_gramian(static_identity_model(3.0), [0.0, 0.0], 0.1, sim)
        assert np.allclose(scaled.gramian, 9.0 * base.gramian, rtol=1e-12)

    def test_exactly_symmetric(self):
        model = duffing_system()
        res = empirical_gramian(model, [1.3, -0.4], 0.1, SimConfig(0.5, 0.01))
        assert np.array_equal(res.gramian, res.gramian.T)

    def test_epsilon_invariance_for_linear_dynamics(self):
        # finite differences are exact for linear systems
        model = linear_drift_system()
        sim = SimConfig(1.0, 0.01)
        w1 = empirical_gramian(model, [1.0, 0.5], 0.1, sim).gramian
        w2 = empirical_gramian(model, [1.0, 0.5], 0.05, sim).gramian
        assert np.allclose(w1, w2, rtol=1e-6)

    def test_linear_system_null_direction(self):
        model = linear_drift_system()
        res = empirical_gramian(model, [1.5, 0.5], 0.1, SimConfig(2.0, 0.01))
        assert res.eigenvalues[0] <= 1e-6 * res.eigenvalues[1]
        diag = np.ones(2) / np.sqrt(2)
        angle = np.degrees(np.arccos(np.clip(abs(res.null_direction @ diag), 0, 1)))
        assert angle < 1.0

    def test_duffing_null_direction_tangent_to_level_set(self):
        model = duffing_system()
        res = empirical_gramian(model, [1.0, 1.0], 0.1, SimConfig(1.0, 0.001))
        angle = tangent_alignment(res.null_direction, [1.0, 1.0], hamiltonian_gradient)
        assert angle < 10.0

    def test_sign_convention(self):
        model = linear_drift_system()
        res = empirical_gramian(model, [0.7, -0.1], 0.1, SimConfig(1.0, 0.01))
        first_nonzero = res.null_direction[np.abs(res.null_direction) > 1e-12][0]
        assert first_nonzero > 0

    def test_unit_norm(self):
        res = empirical_gramian(duffing_system(), [0.5, 0.5], 0.1, SimConfig(0.5, 0.01))
        assert np.linalg.norm(res.null_direction) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError, match="epsilon"):
            empirical_gramian(duffing_system(), [1.0, 1.0], 0.0, SimConfig(0.5, 0.01))


class TestTangentAlignment:
    def test_orthogonal_direction_is_zero_degrees(self):
        angle = tangent_alignment([1.0, 0.0], [0.0, 0.0], lambda x: np.array([0.0, 1.0]))
        assert angle == 0.0

    def test_parallel_direction_is_ninety_degrees(self):
        angle = tangent_alignment([0.0, 2.0], [0.0, 0.0], lambda x: np.array([0.0, 1.0]))
        assert angle == pytest.approx(90.0, abs=1e-12)

    def test_diagonal_is_forty_five_degrees(self):
        d = np.ones(2) / np.sqrt(2)
        angle = tangent_alignment(d, [0.0, 0.0], lambda x: np.array([0.0, 1.0]))
        assert angle == pytest.approx(45.0, abs=1e-9)

    def test_zero_gradient_rejected(self):
        with pytest.raises(ValueError, match="gradient vanishes"):
            tangent_alignment([1.0, 0.0], [0.0, 0.0], lambda x: np.zeros(2))
