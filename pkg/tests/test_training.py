"""Training loop: loss bookkeeping, freezing, divergence guard, and the
benchmark signal constructors."""

import math

import numpy as np
import pytest

from conftest import random_network
from siren_harmonics.errors import TrainingDivergedError, ValidationError
from siren_harmonics.model import FreezeMask, SinusoidalNetwork, evaluate
from siren_harmonics.training import (
    SampleSet,
    TrainOptions,
    fit,
    l2_error,
    loss_history_to_csv,
    make_square_wave,
    make_twelve_sines,
    mse,
    sample_set_from_csv,
    sample_set_to_csv,
)


def constant_net(value: float) -> SinusoidalNetwork:
    return SinusoidalNetwork(
        omega=[1.0],
        phi=[0.0],
        hidden_matrix=[[0.5]],
        hidden_bias=[0.0],
        linear_weights=[0.0],
        linear_bias=value,
    )


class TestSampleSet:
    def test_out_of_domain_rejected(self):
        with pytest.raises(ValidationError):
            SampleSet(xs=[0.0, 2.0], ys=[1.0, 1.0], domain=(-1.0, 1.0))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            SampleSet(xs=[0.0, 0.5], ys=[1.0], domain=(-1.0, 1.0))

    def test_csv_round_trip(self):
        data = SampleSet(xs=[-0.5, 0.5], ys=[0.25, -0.125], domain=(-1.0, 1.0))
        loaded = sample_set_from_csv(sample_set_to_csv(data), domain=(-1.0, 1.0))
        np.testing.assert_array_equal(loaded.xs, data.xs)
        np.testing.assert_array_equal(loaded.ys, data.ys)


class TestLoss:
    def test_exact_reproduction_gives_zero(self):
        net = constant_net(0.7)
        data = SampleSet(xs=np.linspace(-1, 1, 9), ys=np.full(9, 0.7), domain=(-1, 1))
        assert mse(net, data) == 0.0

    def test_constant_zero_net_against_ones(self):
        net = constant_net(0.0)
        data = SampleSet(xs=np.linspace(-1, 1, 50), ys=np.ones(50), domain=(-1, 1))
        assert mse(net, data) == pytest.approx(1.0, abs=1e-15)

    def test_matches_two_pass_summation_oracle(self, rng):
        net = random_network(rng, 3)
        xs = rng.uniform(-1, 1, 257)
        ys = rng.normal(0, 1, 257)
        data = SampleSet(xs=xs, ys=ys, domain=(-1, 1))
        residuals = [evaluate(net, float(x)) - y for x, y in zip(xs, ys)]
        oracle = math.fsum(r * r for r in residuals) / len(residuals)
        assert mse(net, data) == pytest.approx(oracle, abs=1e-12)

    def test_l2_error_scales_with_domain_length(self):
        net = constant_net(0.0)
        data = SampleSet(xs=np.linspace(-1, 1, 32), ys=np.ones(32), domain=(-1, 1))
        assert l2_error(net, data) == pytest.approx(math.sqrt(2.0), abs=1e-12)


class TestFit:
    def test_zero_steps_returns_input_unchanged(self, rng):
        net = random_network(rng, 2)
        data = SampleSet(xs=np.linspace(-1, 1, 64), ys=np.zeros(64), domain=(-1, 1))
        trained, history = fit(net, data, TrainOptions(steps=0))
        assert trained == net
        assert history.shape == (1, 2)

    def test_history_length_and_monotone_start(self, rng):
        net = random_network(rng, 2)
        xs = np.linspace(-1, 1, 128)
        data = SampleSet(xs=xs, ys=np.sin(3 * xs), domain=(-1, 1))
        trained, history = fit(net, data, TrainOptions(steps=200, learning_rate=1e-2))
        assert history.shape == (201, 2)
        assert np.all(np.isfinite(history))
        assert history[-1, 0] < history[0, 0]
        np.testing.assert_allclose(history[:, 1], np.sqrt(history[:, 0] * 2.0))
        assert mse(trained, data) == pytest.approx(history[-1, 0], rel=1e-12)

    def test_frozen_entries_are_bit_identical(self, rng):
        net = random_network(rng, 3)
        xs = np.linspace(-1, 1, 64)
        data = SampleSet(xs=xs, ys=np.cos(2 * xs), domain=(-1, 1))
        mask = FreezeMask.groups(3, omega=True, hidden_bias=True)
        trained, _ = fit(net, data, TrainOptions(steps=60, freeze=mask))
        assert np.array_equal(trained.omega, net.omega)
        assert np.array_equal(trained.hidden_bias, net.hidden_bias)
        assert not np.array_equal(trained.linear_weights, net.linear_weights)

    def test_per_entry_freezing(self, rng):
        net = random_network(rng, 2)
        xs = np.linspace(-1, 1, 64)
        data = SampleSet(xs=xs, ys=np.cos(2 * xs), domain=(-1, 1))
        mask = FreezeMask.none(2)
        mask.hidden_matrix[0, 1] = True
        trained, _ = fit(net, data, TrainOptions(steps=40))
        frozen, _ = fit(net, data, TrainOptions(steps=40, freeze=mask))
        assert frozen.hidden_matrix[0, 1] == net.hidden_matrix[0, 1]
        assert trained.hidden_matrix[0, 1] != net.hidden_matrix[0, 1]

    def test_zero_gradient_is_a_fixed_point(self):
        """A net already reproducing the data exactly does not move."""
        net = constant_net(0.25)
        data = SampleSet(xs=np.linspace(-1, 1, 16), ys=np.full(16, 0.25), domain=(-1, 1))
        trained, history = fit(net, data, TrainOptions(steps=5))
        assert trained == net
        assert np.all(history[:, 0] == 0.0)

    def test_divergence_guard_raises(self, rng):
        net = random_network(rng, 2)
        xs = np.linspace(-1, 1, 32)
        data = SampleSet(xs=xs, ys=np.sin(xs), domain=(-1, 1))
        with pytest.raises(TrainingDivergedError, match="diverged"):
            fit(net, data, TrainOptions(steps=4000, learning_rate=1e7))

    def test_option_validation(self):
        with pytest.raises(ValidationError):
            TrainOptions(steps=-1)
        with pytest.raises(ValidationError):
            TrainOptions(learning_rate=0.0)
        with pytest.raises(ValidationError):
            TrainOptions(adam_beta1=1.0)

    def test_output_bias_is_redundant_for_fitting(self, rng):
        """The zero-frequency harmonic already supplies a constant, so
        freezing the output bias at zero costs nothing measurable."""
        xs = np.linspace(-1, 1, 256)
        data = SampleSet(xs=xs, ys=0.4 + np.sin(3 * xs), domain=(-1, 1))
        net = random_network(rng, 3).with_updates(linear_bias=0.0)
        opts_free = TrainOptions(steps=3000, learning_rate=1e-2)
        opts_pinned = TrainOptions(
            steps=3000, learning_rate=1e-2, freeze=FreezeMask.groups(3, linear_bias=True)
        )
        _, hist_free = fit(net, data, opts_free)
        trained, hist_pinned = fit(net, data, opts_pinned)
        assert trained.linear_bias == 0.0
        assert hist_pinned[-1, 0] < 1e-3
        assert hist_pinned[-1, 0] < 10 * max(hist_free[-1, 0], 1e-6)

    def test_periodicity_held_at_every_checkpoint(self):
        """Frozen periodic first layer: the period survives training,
        checked after each of several training segments."""
        from siren_harmonics.initialization import PeriodicInitSpec, periodic_init
        from siren_harmonics.verification import periodicity_residual

        data = make_square_wave(0.02, grid_points=256)
        net = periodic_init(PeriodicInitSpec(2.0, (1, 3, 5, 7, 9)), seed=1)
        mask = FreezeMask.groups(5, omega=True)
        for _ in range(3):
            net, _ = fit(net, data, TrainOptions(steps=150, freeze=mask))
            assert periodicity_residual(net, 2.0) < 1e-9

    def test_loss_csv_format(self, rng):
        net = random_network(rng, 1)
        data = SampleSet(xs=np.linspace(-1, 1, 16), ys=np.zeros(16), domain=(-1, 1))
        _, history = fit(net, data, TrainOptions(steps=3))
        lines = loss_history_to_csv(history).strip().splitlines()
        assert lines[0] == "step;mse;l2"
        assert len(lines) == 5
        assert lines[1].startswith("0;")


class TestTwelveSines:
    def test_variant_one_frequencies(self):
        target, _ = make_twelve_sines(1)
        assert sorted(target.frequencies.tolist()) == [float(v) for v in range(3, 27, 2)]

    def test_variant_one_amplitude_profile(self):
        target, _ = make_twelve_sines(1)
        amps = np.sort(target.amplitudes)[::-1]
        assert amps[0] == pytest.approx(1.0)
        assert amps[-1] == pytest.approx(0.005)
        ratios = amps[1:] / amps[:-1]
        np.testing.assert_allclose(ratios, ratios[0])  # geometric decay

    def test_variant_two_frequencies(self):
        target, _ = make_twelve_sines(2)
        expected = [(2 * k + 1) * 2 * math.pi for k in range(1, 13)]
        np.testing.assert_allclose(sorted(target.frequencies.tolist()), expected)

    def test_variant_two_mass_sits_on_top_frequency(self):
        target, _ = make_twelve_sines(2)
        assert target.frequencies[0] == pytest.approx(46 * math.pi)
        assert target.amplitudes[0] == pytest.approx(1.0)

    def test_variant_three_boosts_mid_band(self):
        t2, _ = make_twelve_sines(2)
        t3, _ = make_twelve_sines(3)
        by_freq2 = dict(zip(t2.frequencies, t2.amplitudes))
        by_freq3 = dict(zip(t3.frequencies, t3.amplitudes))
        for base in (11, 13):
            f = base * 2 * math.pi
            assert by_freq3[f] > 10 * by_freq2[f]

    def test_samples_match_target_sum(self):
        """SampleSet values vs an independent per-point summation."""
        for variant in (1, 2, 3):
            target, data = make_twelve_sines(variant)
            for idx in (0, 100, 555, 1023):
                x = data.xs[idx]
                expected = math.fsum(
                    a * math.sin(f * x)
                    for f, a in zip(target.frequencies, target.amplitudes)
                )
                assert data.ys[idx] == pytest.approx(expected, abs=1e-12)

    def test_unknown_variant(self):
        with pytest.raises(ValidationError):
            make_twelve_sines(4)


class TestSquareWave:
    def test_plateau_values(self):
        data = make_square_wave(0.0, grid_points=9)
        by_x = dict(zip(data.xs, data.ys))
        assert by_x[-0.5] == 0.5
        assert by_x[0.5] == -0.5

    def test_exclusion_zone(self):
        data = make_square_wave(0.02)
        assert np.all(np.abs(data.xs) >= 0.02)
        assert np.all(np.abs(data.xs - 1.0) >= 0.02)
        assert np.all(np.abs(data.xs + 1.0) >= 0.02)

    def test_delta_validation(self):
        with pytest.raises(ValidationError):
            make_square_wave(0.5)
        with pytest.raises(ValidationError):
            make_square_wave(-0.1)
