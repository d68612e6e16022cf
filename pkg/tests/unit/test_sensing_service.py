"""Unit tests for signal generation and phase-only measurement."""

import math

import numpy as np
import pytest

from src.phase_only_cs.application.services.sensing_service import (
    corrupt_phases,
    extend_ensemble,
    gen_lowrank_signal,
    gen_sparse_signal,
    measure_lowrank_phases,
    measure_phases,
    measure_phases_dithered,
    quantize_phases,
    sample_dither,
    sample_dithered_ensemble,
    sample_ensemble,
    sample_lowrank_map,
)
from src.phase_only_cs.domain.exceptions import DimensionMismatchError, ParameterError
from src.phase_only_cs.domain.models import NoiseModel, PhaseObservation, SignalField
from src.phase_only_cs.domain.utilities import make_rng


class TestSignals:
    """Test cases for ground-truth generation."""

    def test_sparse_signal_is_unit_and_s_sparse(self, rng):
        x = gen_sparse_signal(80, 3, SignalField.COMPLEX, rng)
        assert np.count_nonzero(x) == 3
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)

    def test_real_field_has_no_imaginary_part(self, rng):
        x = gen_sparse_signal(20, 5, "real", rng)
        assert np.all(x.imag == 0)

    def test_s_equal_n(self, rng):
        assert np.count_nonzero(gen_sparse_signal(6, 6, SignalField.COMPLEX, rng)) == 6

    def test_s_above_n_rejected(self, rng):
        with pytest.raises(ParameterError):
            gen_sparse_signal(4, 5, SignalField.COMPLEX, rng)

    def test_support_is_uniform(self):
        # Each index is in the support with probability s/n = 1/4
        rng = make_rng(3)
        hits = np.zeros(8)
        for _ in range(4000):
            hits += gen_sparse_signal(8, 2, SignalField.REAL, rng) != 0
        assert np.all(np.abs(hits / 4000 - 0.25) < 0.03)

    def test_lowrank_signal_rank_and_norm(self, rng):
        x = gen_lowrank_signal(6, 5, 2, rng)
        assert np.linalg.matrix_rank(x) == 2
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)

    def test_lowrank_rank_too_large(self, rng):
        with pytest.raises(ParameterError):
            gen_lowrank_signal(3, 2, 3, rng)


class TestMeasurement:
    """Test cases for measuring phases."""

    def test_phases_are_unit_modulus(self, small_observation):
        assert np.allclose(np.abs(small_observation.z), 1.0, atol=1e-12)
        assert not small_observation.corrupted

    def test_scale_invariance(self, small_ensemble, sparse_signal):
        a = measure_phases(small_ensemble, sparse_signal).z
        b = measure_phases(small_ensemble, 7.25 * sparse_signal).z
        assert np.allclose(a, b, atol=1e-15)

    def test_dimension_mismatch(self, small_ensemble):
        with pytest.raises(DimensionMismatchError):
            measure_phases(small_ensemble, np.ones(3))

    def test_zero_signal_gives_zero_phases(self, small_ensemble):
        assert np.all(measure_phases(small_ensemble, np.zeros(40)).z == 0)

    def test_dithered_phases(self, rng):
        dens = sample_dithered_ensemble(30, 10, 1.0 / 3.0, rng)
        x = gen_sparse_signal(10, 2, SignalField.COMPLEX, rng)
        z = measure_phases_dithered(dens, x).z
        expected = dens.base.phi @ x + dens.dither
        assert np.allclose(z, expected / np.abs(expected))

    def test_lowrank_phases(self, rng):
        lowrank_map = sample_lowrank_map(12, 3, 4, rng)
        x = gen_lowrank_signal(3, 4, 1, rng)
        z = measure_lowrank_phases(lowrank_map, x).z
        values = np.array([np.trace(atom.conj().T @ x) for atom in lowrank_map.atoms])
        assert np.allclose(z, values / np.abs(values))


class TestDither:
    """Test cases for the dithered ensemble."""

    def test_dither_variance(self):
        tau = sample_dither(20000, 0.5, make_rng(11))
        assert np.var(tau.real) == pytest.approx(0.25, rel=0.05)
        assert np.var(tau.imag) == pytest.approx(0.25, rel=0.05)

    def test_extend_ensemble_last_column(self, rng):
        dens = sample_dithered_ensemble(5, 3, 0.25, rng)
        extended = extend_ensemble(dens)
        assert extended.phi.shape == (5, 4)
        assert np.allclose(extended.phi[:, -1], dens.dither / 0.25)

    def test_extended_signal_reproduces_dithered_measurement(self, rng):
        dens = sample_dithered_ensemble(8, 3, 0.5, rng)
        x = gen_sparse_signal(3, 2, SignalField.COMPLEX, rng)
        extended = extend_ensemble(dens).phi @ np.concatenate([x, [0.5]])
        assert np.allclose(extended, dens.base.phi @ x + dens.dither)


class TestNoise:
    """Test cases for bounded phase noise and quantization."""

    @pytest.mark.parametrize("model", [NoiseModel.DISK, NoiseModel.PHASE_JITTER])
    def test_noise_respects_bound(self, small_observation, rng, model):
        noisy = corrupt_phases(small_observation, 0.1, model, rng)
        assert np.max(np.abs(noisy.z - small_observation.z)) <= 0.1 + 1e-15
        assert noisy.corrupted
        assert noisy.noise_bound == 0.1

    def test_jitter_keeps_unit_modulus(self, small_observation, rng):
        noisy = corrupt_phases(small_observation, 0.3, "phase-jitter", rng)
        assert np.allclose(np.abs(noisy.z), 1.0)

    def test_zero_noise_is_exact_copy(self, small_observation, rng):
        noisy = corrupt_phases(small_observation, 0.0, NoiseModel.DISK, rng)
        assert np.array_equal(noisy.z, small_observation.z)
        assert noisy.corrupted

    def test_negative_tau0(self, small_observation, rng):
        with pytest.raises(ParameterError):
            corrupt_phases(small_observation, -0.1, NoiseModel.DISK, rng)

    def test_corrupting_twice_rejected(self, small_observation, rng):
        noisy = corrupt_phases(small_observation, 0.1, NoiseModel.DISK, rng)
        with pytest.raises(ParameterError):
            corrupt_phases(noisy, 0.1, NoiseModel.DISK, rng)

    @pytest.mark.parametrize("bits", [1, 3, 6])
    def test_quantization_bound(self, small_observation, bits):
        quantized = quantize_phases(small_observation, bits)
        bound = 2.0 * math.sin(math.pi / 2 ** bits / 2.0)
        assert quantized.noise_bound == pytest.approx(bound)
        assert np.max(np.abs(quantized.z - small_observation.z)) <= bound + 1e-12
        assert np.allclose(np.abs(quantized.z), 1.0)

    def test_quantization_keeps_zeros(self):
        obs = PhaseObservation(np.array([0.0, 1.0, 1j]))
        assert quantize_phases(obs, 2).z[0] == 0

    def test_quantization_needs_a_bit(self, small_observation):
        with pytest.raises(ParameterError):
            quantize_phases(small_observation, 0)


class TestEnsembles:
    """Test cases for ensemble sampling."""

    def test_same_seed_same_ensemble(self):
        a = sample_ensemble(4, 3, make_rng(9)).phi
        b = sample_ensemble(4, 3, make_rng(9)).phi
        assert np.array_equal(a, b)

    def test_lowrank_map_shape(self, rng):
        lowrank_map = sample_lowrank_map(10, 3, 2, rng)
        assert lowrank_map.m == 10
        assert lowrank_map.shape == (3, 2)
