"""Unit tests for the end-to-end recovery pipelines."""

import math

import numpy as np
import pytest

from src.phase_only_cs.application.services.recovery_service import RecoveryService, direction_error
from src.phase_only_cs.application.services.reformulation_service import rescaled_truth
from src.phase_only_cs.application.services.sensing_service import (
    corrupt_phases,
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
from src.phase_only_cs.domain.models import DitheredEnsemble, NoiseModel, SignalField, SolverStatus
from src.phase_only_cs.domain.utilities import make_rng


class TestDirectionError:
    """Test cases for the scale-free error."""

    def test_positive_multiple_has_zero_error(self):
        x = np.array([0.6, 0.8j])
        assert direction_error(5.0 * x, x) == pytest.approx(0.0, abs=1e-15)

    def test_zero_estimate(self):
        assert direction_error(np.zeros(2), np.array([1.0, 0.0])) == 1.0

    def test_opposite_direction_is_two(self):
        x = np.array([1.0, 0.0])
        assert direction_error(-x, x) == pytest.approx(2.0)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            direction_error(np.ones(3), np.ones(2))


class TestRecoveryService:
    """Test cases for the recovery pipelines."""

    @pytest.fixture
    def service(self, tight_options):
        return RecoveryService(options=tight_options)

    def test_complex_sparse_recovery(self, service, small_ensemble, small_observation, sparse_signal):
        outcome = service.recover_sparse(small_ensemble, small_observation, SignalField.COMPLEX, truth=sparse_signal)
        assert outcome.success
        assert outcome.direction_error < 1e-6
        assert outcome.full_error is None
        assert outcome.phase_consistency < 1e-6

    def test_real_sparse_recovery(self, service):
        rng = make_rng(8)
        ens = sample_ensemble(40, 30, rng)
        x = gen_sparse_signal(30, 2, SignalField.REAL, rng)
        outcome = service.recover_sparse(ens, measure_phases(ens, x), "real", truth=x)
        assert outcome.success
        assert np.all(outcome.xhat.imag == 0)

    def test_estimate_is_positive_multiple(self, service, small_ensemble, small_observation, sparse_signal):
        outcome = service.recover_sparse(small_ensemble, small_observation)
        x_star = rescaled_truth(small_ensemble, sparse_signal)
        assert np.linalg.norm(outcome.xhat - x_star) < 1e-6

    def test_without_truth_success_means_converged(self, service, small_ensemble, small_observation):
        outcome = service.recover_sparse(small_ensemble, small_observation)
        assert math.isnan(outcome.direction_error)
        assert outcome.success == outcome.report.converged

    def test_scale_invariance_of_pipeline(self, service, small_ensemble, sparse_signal):
        a = service.recover_sparse(small_ensemble, measure_phases(small_ensemble, sparse_signal))
        b = service.recover_sparse(small_ensemble, measure_phases(small_ensemble, 2.0 * sparse_signal))
        assert np.allclose(a.xhat, b.xhat, atol=1e-12)

    def test_linear_cs_recovers_norm(self, service, small_ensemble, sparse_signal):
        outcome = service.recover_linear_cs(small_ensemble, small_ensemble.phi @ (3.0 * sparse_signal), truth=3.0 * sparse_signal)
        assert outcome.full_error < 1e-5
        assert outcome.error == outcome.full_error
        assert outcome.success

    def test_linear_cs_with_twice_n_measurements_is_exact(self, service):
        rng = make_rng(23)
        ens = sample_ensemble(20, 10, rng)
        x = gen_sparse_signal(10, 2, SignalField.COMPLEX, rng)
        outcome = service.recover_linear_cs(ens, ens.phi @ x, truth=x)
        assert outcome.report.status is SolverStatus.CONVERGED
        assert outcome.full_error < 1e-8

    def test_dithered_recovers_norm(self, service):
        rng = make_rng(21)
        dens = sample_dithered_ensemble(60, 20, 1.0 / 3.0, rng)
        x = gen_sparse_signal(20, 2, SignalField.COMPLEX, rng)
        outcome = service.recover_full_dithered(dens, measure_phases_dithered(dens, x), truth=x)
        assert outcome.failure is None
        assert outcome.full_error < 1e-4
        assert abs(outcome.scale_residue) < 1e-6
        assert outcome.phase_consistency < 1e-5

    def test_dithered_zero_dither_is_degenerate_scale(self, service):
        rng = make_rng(22)
        ens = sample_ensemble(30, 10, rng)
        dens = DitheredEnsemble(ens, np.zeros(30, dtype=np.complex128), 1.0 / 3.0)
        x = gen_sparse_signal(10, 2, SignalField.COMPLEX, rng)
        outcome = service.recover_full_dithered(dens, measure_phases_dithered(dens, x), truth=x)
        assert outcome.failure == "degenerate-scale"
        assert not outcome.success
        assert np.all(outcome.xhat == 0)

    def test_noisy_zero_noise_matches_noiseless(self, service, small_ensemble, small_observation, sparse_signal):
        noisy = corrupt_phases(small_observation, 0.0, NoiseModel.DISK, make_rng(1))
        relaxed = service.recover_noisy(small_ensemble, noisy, 0.0, truth=sparse_signal)
        exact = service.recover_sparse(small_ensemble, small_observation, truth=sparse_signal)
        assert np.linalg.norm(relaxed.xhat - exact.xhat) < 1e-6
        assert relaxed.full_error < 1e-6

    def test_noisy_error_scales_with_noise(self, service, small_ensemble, small_observation, sparse_signal):
        noisy = corrupt_phases(small_observation, 0.05, NoiseModel.DISK, make_rng(2))
        outcome = service.recover_noisy(small_ensemble, noisy, 0.05, truth=sparse_signal)
        assert outcome.report.converged
        assert outcome.full_error < 10 * 0.05

    def test_noisy_negative_tau0(self, service, small_ensemble, small_observation):
        with pytest.raises(ParameterError):
            service.recover_noisy(small_ensemble, small_observation, -1.0)

    def test_lowrank_recovery(self, service):
        rng = make_rng(4)
        lowrank_map = sample_lowrank_map(80, 4, 4, rng)
        x = gen_lowrank_signal(4, 4, 1, rng)
        outcome = service.recover_lowrank(lowrank_map, measure_lowrank_phases(lowrank_map, x), truth=x)
        assert outcome.xhat.shape == (4, 4)
        assert outcome.success
        singular = np.linalg.svd(outcome.xhat, compute_uv=False)
        assert np.sum(singular > 1e-6 * singular[0]) <= 2

    def test_threshold_must_be_positive(self):
        with pytest.raises(ParameterError):
            RecoveryService(threshold=0.0)

    def test_outcome_to_dict(self, service, small_ensemble, small_observation, sparse_signal):
        data = service.recover_sparse(small_ensemble, small_observation, truth=sparse_signal).to_dict()
        assert data["success"] is True
        assert data["report"]["status"] == "converged"
