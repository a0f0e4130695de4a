"""First-kind Bessel kernel: fast route vs quadrature oracle, symmetry,
recurrence and ratio properties the amplitude sorting relies on."""

import math

import numpy as np
import pytest

from siren_harmonics.bessel import (
    ARGUMENT_GUARD,
    bessel_j,
    bessel_j_quadrature,
    bessel_j_table,
    j0_j1_crossing,
)
from siren_harmonics.errors import DomainError

# Frozen from the quadrature oracle (panel count doubled until two
# successive composite-Simpson estimates agreed to 1e-12).
J1_AT_1 = 0.4400505857449336
J2_AT_1 = 0.11490348493190045


class TestBesselJ:
    def test_power_series_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0

    def test_nonzero_orders_vanish_at_zero(self):
        for k in (1, 2, 3, 7, -3):
            assert bessel_j(k, 0.0) == 0.0

    def test_order_one_frozen_oracle_value(self):
        assert bessel_j(1, 1.0) == pytest.approx(J1_AT_1, abs=1e-13)

    def test_negative_order_symmetry(self):
        assert bessel_j(-1, 0.5) == -bessel_j(1, 0.5)
        assert bessel_j(-2, 0.5) == bessel_j(2, 0.5)

    def test_negative_argument_symmetry(self):
        for k in range(0, 6):
            assert bessel_j(k, -1.3) == (-1.0) ** k * bessel_j(k, 1.3)

    def test_out_of_regime_argument_rejected(self):
        with pytest.raises(DomainError, match="regime"):
            bessel_j(0, ARGUMENT_GUARD + 1.0)
        with pytest.raises(DomainError):
            bessel_j(0, math.inf)
        with pytest.raises(DomainError):
            bessel_j(0, math.nan)

    def test_magnitude_never_exceeds_one(self, rng):
        for _ in range(300):
            k = int(rng.integers(-20, 21))
            a = float(rng.uniform(-ARGUMENT_GUARD, ARGUMENT_GUARD))
            assert abs(bessel_j(k, a)) <= 1.0

    def test_huge_order_underflows_to_zero(self):
        assert bessel_j(600, 2.0) == 0.0

    def test_table_matches_scalar_route(self):
        table = bessel_j_table(8, 1.7)
        for k in range(9):
            assert table[k] == bessel_j(k, 1.7)


class TestQuadratureOracle:
    def test_order_zero_at_zero(self):
        assert bessel_j_quadrature(0, 0.0) == pytest.approx(1.0, abs=1e-14)

    def test_order_two_frozen_value(self):
        assert bessel_j_quadrature(2, 1.0) == pytest.approx(J2_AT_1, abs=1e-12)

    def test_small_amplitude_bound(self):
        # |J_5(0.5)| < (0.25)^5 / 5!
        assert abs(bessel_j_quadrature(5, 0.5)) < 0.25**5 / 120.0

    def test_agreement_on_lattice(self):
        for k in range(-10, 11):
            for a in np.linspace(-2.5, 2.5, 11):
                assert bessel_j(k, float(a)) == pytest.approx(
                    bessel_j_quadrature(k, float(a)), abs=1e-10
                )

    def test_agreement_at_large_arguments(self):
        # the recurrence route past the series cutoff stays on the oracle
        for a in (9.0, 15.0, 40.0, 64.0):
            for k in range(0, 9):
                assert bessel_j(k, a) == pytest.approx(
                    bessel_j_quadrature(k, a), abs=1e-10
                )


class TestClassicalProperties:
    def test_three_term_recurrence(self):
        """(2k/a) J_k = J_{k-1} + J_{k+1} within 1e-9 on the small-argument grid."""
        for k in range(1, 11):
            for a in np.arange(0.1, 2.05, 0.1):
                lhs = 2 * k / a * bessel_j(k, float(a))
                rhs = bessel_j(k - 1, float(a)) + bessel_j(k + 1, float(a))
                assert abs(lhs - rhs) < 1e-9

    def test_ratio_bounds(self):
        """a/(2k+2) < J_{k+1}/J_k < a/(2k+1) for k > 0, 0 < a <= pi/2."""
        for k in range(1, 10):
            for a in np.linspace(0.1, math.pi / 2, 15):
                ratio = bessel_j(k + 1, float(a)) / bessel_j(k, float(a))
                assert a / (2 * k + 2) < ratio < a / (2 * k + 1)

    def test_monotone_ordering_in_order(self):
        """|J_k| > |J_l| for |k| < |l| (both nonzero) when 0 < |a| <= 1.5."""
        for a in np.concatenate([np.arange(0.25, 1.51, 0.25), -np.arange(0.25, 1.51, 0.25)]):
            mags = [abs(bessel_j(k, float(a))) for k in range(1, 9)]
            assert all(x > y for x, y in zip(mags, mags[1:]))
            for k in range(1, 9):
                assert abs(bessel_j(-k, float(a))) == mags[k - 1]

    def test_j0_dominates_j1_up_to_one(self):
        for a in np.linspace(0.05, 1.0, 20):
            assert bessel_j(0, float(a)) > bessel_j(1, float(a))

    def test_j0_j1_crossing_location(self):
        x = j0_j1_crossing()
        assert x == pytest.approx(1.4347, abs=5e-4)
        assert bessel_j(0, x - 1e-6) > bessel_j(1, x - 1e-6)
        assert bessel_j(0, x + 1e-6) < bessel_j(1, x + 1e-6)
