"""Unit tests for the real linear reformulations."""

import math

import numpy as np
import pytest

from src.phase_only_cs.application.services.reformulation_service import (
    T_HAT_COMPLEX,
    build_complex,
    build_dithered,
    build_linear_cs,
    build_lowrank,
    build_real,
    embed_lowrank,
    extended_signal,
    rescaled_lowrank_truth,
    rescaled_truth,
    residual_phase_consistency,
)
from src.phase_only_cs.application.services.sensing_service import (
    extend_ensemble,
    gen_lowrank_signal,
    gen_sparse_signal,
    measure_lowrank_phases,
    measure_phases,
    measure_phases_dithered,
    sample_dithered_ensemble,
    sample_ensemble,
    sample_lowrank_map,
)
from src.phase_only_cs.domain.exceptions import DimensionMismatchError, ParameterError
from src.phase_only_cs.domain.models import SignalField, SystemCase
from src.phase_only_cs.domain.utilities import KAPPA, embed_vector


def _e1(length):
    e = np.zeros(length)
    e[0] = 1.0
    return e


class TestExactness:
    """A embed(x_star) = e_1 for every sensing case."""

    def test_real_case(self, rng):
        for _ in range(20):
            ens = sample_ensemble(60, 40, rng)
            x = gen_sparse_signal(40, 4, SignalField.REAL, rng)
            system = build_real(measure_phases(ens, x), ens)
            u = rescaled_truth(ens, x).real
            assert np.max(np.abs(system.a @ u - _e1(61))) < 1e-12

    def test_complex_case(self, rng):
        for _ in range(20):
            ens = sample_ensemble(60, 40, rng)
            x = gen_sparse_signal(40, 4, SignalField.COMPLEX, rng)
            system = build_complex(measure_phases(ens, x), ens)
            u = embed_vector(rescaled_truth(ens, x))
            assert np.max(np.abs(system.a @ u - system.rhs)) < 1e-12

    def test_dithered_case(self, rng):
        rho = 1.0 / 3.0
        for _ in range(20):
            dens = sample_dithered_ensemble(60, 40, rho, rng)
            x = gen_sparse_signal(40, 4, SignalField.COMPLEX, rng)
            system = build_dithered(measure_phases_dithered(dens, x), dens)
            x_star = rescaled_truth(extend_ensemble(dens), extended_signal(x, rho))
            assert np.max(np.abs(system.a @ embed_vector(x_star) - _e1(61))) < 1e-12

    def test_lowrank_case(self, rng):
        for _ in range(20):
            lowrank_map = sample_lowrank_map(40, 4, 4, rng)
            x = gen_lowrank_signal(4, 4, 1, rng)
            system = build_lowrank(measure_lowrank_phases(lowrank_map, x), lowrank_map)
            u = embed_lowrank(rescaled_lowrank_truth(lowrank_map, x))
            assert np.max(np.abs(system.forward(u) - system.rhs)) < 1e-12

    def test_linear_cs_case(self, small_ensemble, sparse_signal):
        system = build_linear_cs(small_ensemble, small_ensemble.phi @ sparse_signal)
        assert system.case is SystemCase.LINEAR_CS
        assert system.m == 60
        assert np.allclose(system.a @ embed_vector(sparse_signal), system.rhs, atol=1e-12)


class TestStructure:
    """Shapes, scalings and block structure of the systems."""

    def test_complex_shape_and_metadata(self, small_observation, small_ensemble):
        system = build_complex(small_observation, small_ensemble)
        assert system.a.shape == (61, 80)
        assert system.m == 60
        assert system.t_hat == pytest.approx(math.sqrt(2.0 / 3.0))
        assert system.kappa == KAPPA
        assert "complex-sparse" in system.metadata_line()

    def test_real_shape(self, small_observation, small_ensemble):
        assert build_real(small_observation, small_ensemble).a.shape == (61, 40)

    def test_real_block_of_complex_system(self, small_observation, small_ensemble):
        real = build_real(small_observation, small_ensemble)
        complex_system = build_complex(small_observation, small_ensemble, t_hat=1.0)
        assert np.allclose(complex_system.a[:, :40], real.a, rtol=0, atol=1e-14)

    def test_phase_rows_annihilate_truth(self, small_observation, small_ensemble, sparse_signal):
        system = build_complex(small_observation, small_ensemble)
        assert np.max(np.abs(system.phase_rows @ embed_vector(3.0 * sparse_signal))) < 1e-12

    def test_norm_row_measures_l1(self, small_observation, small_ensemble, sparse_signal):
        system = build_complex(small_observation, small_ensemble)
        expected = np.sum(np.abs(small_ensemble.phi @ sparse_signal)) / (KAPPA * 60)
        assert system.norm_row @ embed_vector(sparse_signal) == pytest.approx(expected, rel=1e-12)

    def test_with_t_hat_rescales_phase_rows_only(self, small_observation, small_ensemble):
        system = build_complex(small_observation, small_ensemble)
        rescaled = system.with_t_hat(1.0)
        assert np.array_equal(rescaled.norm_row, system.norm_row)
        assert np.allclose(rescaled.phase_rows, system.phase_rows / T_HAT_COMPLEX, atol=1e-15)

    def test_system_is_read_only(self, small_observation, small_ensemble):
        system = build_real(small_observation, small_ensemble)
        with pytest.raises(ValueError):
            system.a[0, 0] = 1.0

    def test_scale_of_signal_does_not_matter(self, small_ensemble, sparse_signal):
        a = build_complex(measure_phases(small_ensemble, sparse_signal), small_ensemble).a
        b = build_complex(measure_phases(small_ensemble, 4.0 * sparse_signal), small_ensemble).a
        assert np.allclose(a, b, atol=1e-15)

    def test_dithered_shape(self, rng):
        dens = sample_dithered_ensemble(10, 4, 0.5, rng)
        x = gen_sparse_signal(4, 1, SignalField.COMPLEX, rng)
        system = build_dithered(measure_phases_dithered(dens, x), dens)
        assert system.a.shape == (11, 10)
        assert system.case is SystemCase.DITHERED

    def test_count_mismatch(self, small_ensemble, rng):
        other = sample_ensemble(10, 40, rng)
        obs = measure_phases(other, gen_sparse_signal(40, 2, SignalField.COMPLEX, rng))
        with pytest.raises(DimensionMismatchError):
            build_complex(obs, small_ensemble)

    def test_lowrank_adjoint(self, rng):
        lowrank_map = sample_lowrank_map(15, 3, 4, rng)
        obs = measure_lowrank_phases(lowrank_map, gen_lowrank_signal(3, 4, 1, rng))
        system = build_lowrank(obs, lowrank_map)
        u = rng.standard_normal(system.shape)
        y = rng.standard_normal(16)
        assert np.dot(system.forward(u), y) == pytest.approx(np.sum(u * system.adjoint(y)), rel=1e-10)

    def test_lowrank_gram_is_symmetric(self, rng):
        lowrank_map = sample_lowrank_map(8, 2, 2, rng)
        obs = measure_lowrank_phases(lowrank_map, gen_lowrank_signal(2, 2, 1, rng))
        gram = build_lowrank(obs, lowrank_map).gram()
        assert gram.shape == (9, 9)
        assert np.array_equal(gram, gram.T)


class TestTruthHelpers:
    """Rescaled truths and phase consistency."""

    def test_extended_signal(self):
        assert np.array_equal(extended_signal(np.array([1j, 2.0]), 0.5), np.array([1j, 2.0, 0.5]))

    def test_extended_signal_needs_positive_rho(self):
        with pytest.raises(ParameterError):
            extended_signal(np.ones(2), 0.0)

    def test_rescaled_truth_of_vanishing_measurement(self, small_ensemble):
        with pytest.raises(ParameterError):
            rescaled_truth(small_ensemble, np.zeros(40))

    def test_truth_is_phase_consistent(self, small_ensemble, small_observation, sparse_signal):
        assert residual_phase_consistency(small_ensemble, small_observation, 2.0 * sparse_signal) < 1e-12

    def test_wrong_estimate_is_inconsistent(self, small_ensemble, small_observation, rng):
        other = gen_sparse_signal(40, 4, SignalField.COMPLEX, rng)
        assert residual_phase_consistency(small_ensemble, small_observation, other) > 0.1
