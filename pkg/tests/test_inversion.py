import math

import numpy as np
import pytest

from renewinv import (
    ConstantLST,
    DomainError,
    ExponentialDecayLST,
    l_star,
    lattice_index,
    LatticeFunction,
    m2_lattice,
    post_widder,
    ScaledLST,
    stehfest2,
    SumLST,
)
from renewinv.transforms import TransformOracle


class LinearRampLST(TransformOracle):
    """Oracle for g(u) = u, with transform 1/t^2 and weights (k+1)/t^2."""

    def weights(self, t, k_max):
        self._require_valid_point(t, k_max)
        return (np.arange(k_max + 1) + 1.0) / (t * t)


def tf_oracle(p):
    return SumLST(ConstantLST(1.0), ScaledLST(-(1.0 - p), ExponentialDecayLST(p)))


def tf_exact(p, u):
    return 1.0 - (1.0 - p) * math.exp(-p * u)


class TestLatticeIndex:
    def test_exact_products(self):
        assert lattice_index(5.0, 0.8) == (4, 0.0)
        assert lattice_index(5.0, 2.0) == (10, 0.0)

    def test_snaps_from_below(self):
        # 3 * (1/3) rounds to 0.999... in binary; must land on index 1
        assert lattice_index(3.0, 1.0 / 3.0) == (1, 0.0)

    def test_true_fraction(self):
        k, frac = lattice_index(5.0, 0.9)
        assert k == 4 and frac == pytest.approx(0.5, rel=1e-12)


class TestLStar:
    @pytest.mark.parametrize("t,u", [(1.0, 0.0), (5.0, 0.8), (5.0, 7.3), (10.0, 40.0)])
    def test_constant_function(self, t, u):
        assert l_star(ConstantLST(1.0), t, u) == pytest.approx(1.0, rel=1e-14)

    def test_exponential_closed_form(self):
        # L*_t exp(-a u) = (t/(t+a))**([tu]+1)
        a, t = 0.1, 5.0
        for u in [0.0, 0.8, 1.0, 3.33, 17.2]:
            k = lattice_index(t, u)[0]
            expected = (t / (t + a)) ** (k + 1)
            assert l_star(ExponentialDecayLST(a), t, u) == pytest.approx(expected, rel=1e-13)
        assert l_star(ExponentialDecayLST(a), t, 0.8) == pytest.approx(
            (5.0 / 5.1) ** 5, rel=1e-14
        )

    def test_linear_ramp_mean_identity(self):
        # the operator returns the mean ([tu]+1)/t of the underlying gamma
        for t, u in [(5.0, 0.8), (2.0, 3.1), (10.0, 0.05)]:
            k = lattice_index(t, u)[0]
            assert l_star(LinearRampLST(), t, u) == pytest.approx((k + 1) / t, rel=1e-13)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            l_star(ConstantLST(1.0), 5.0, -0.1)
        with pytest.raises(DomainError):
            l_star(ConstantLST(1.0), 0.0, 1.0)

    def test_cdf_image_is_a_cdf(self):
        # for a CDF source the operator value is itself a distribution
        # function on the lattice: within [0, 1] and nondecreasing in u
        from renewinv import Component, CumulativeLST, GammaMixture, GammaMixtureLST

        mix = GammaMixture((Component(0.5, 1.0, 1.0), Component(0.5, 1.5, 1.0)))
        oracle = CumulativeLST(GammaMixtureLST(mix))
        t = 5.0
        values = [l_star(oracle, t, k / t) for k in range(0, 120)]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(b >= a - 1e-14 for a, b in zip(values, values[1:]))


class TestM2Lattice:
    def test_constant_is_reproduced_exactly(self):
        lattice = m2_lattice(ConstantLST(2.5), 5.0, 20, 2.5)
        assert np.allclose(lattice.values, 2.5, rtol=1e-14)

    def test_test_function_value_at_one(self):
        # 2 (1 - 0.9 (10/10.1)**10) - (1 - 0.9 (5/5.1)**5) at t=5, k=5
        oracle = tf_oracle(0.1)
        lattice = m2_lattice(oracle, 5.0, 5, 0.1)
        expected = 2.0 * (1.0 - 0.9 * (10.0 / 10.1) ** 10) - (1.0 - 0.9 * (5.0 / 5.1) ** 5)
        assert lattice.values[5] == pytest.approx(expected, rel=1e-13)
        assert expected == pytest.approx(0.185641, abs=5e-7)

    def test_first_lattice_point_bookkeeping(self):
        oracle = tf_oracle(0.1)
        t = 5.0
        lattice = m2_lattice(oracle, t, 3, 0.1)
        expected = 2.0 * l_star(oracle, 2.0 * t, 1.0 / (2.0 * t)) - l_star(oracle, t, 0.0)
        assert lattice.values[1] == pytest.approx(expected, rel=1e-14)

    def test_origin_uses_supplied_value(self):
        lattice = m2_lattice(tf_oracle(0.1), 5.0, 2, 0.123)
        assert lattice.values[0] == 0.123

    def test_needs_positive_truncation(self):
        with pytest.raises(DomainError):
            m2_lattice(ConstantLST(1.0), 5.0, 0, 1.0)

    @pytest.mark.parametrize("t", [5.0, 10.0])
    def test_acceleration_beats_plain_operator(self, t):
        oracle = tf_oracle(0.1)
        K = int(40 * t)
        lattice = m2_lattice(oracle, t, K, 0.1)
        err_m2 = max(
            abs(lattice.values[k] - tf_exact(0.1, k / t)) for k in range(K + 1)
        )
        err_l = max(
            abs(l_star(oracle, t, k / t) - tf_exact(0.1, k / t)) for k in range(K + 1)
        )
        assert err_m2 <= err_l

    def test_empirical_order_near_two(self):
        oracle = tf_oracle(0.1)
        errs = {}
        for t in (5.0, 10.0):
            K = int(40 * t)
            lattice = m2_lattice(oracle, t, K, 0.1)
            errs[t] = max(
                abs(lattice.values[k] - tf_exact(0.1, k / t)) for k in range(K + 1)
            )
        assert 1.6 <= math.log2(errs[5.0] / errs[10.0]) <= 2.6


class TestLatticeFunction:
    def test_lattice_points_bit_exact(self):
        values = np.array([0.0, 0.25, 0.5, 0.9])
        f = LatticeFunction(4.0, values)
        for k in range(4):
            assert f(k / 4.0) == values[k]

    def test_midpoint_is_neighbor_mean(self):
        values = np.array([0.0, 1.0, 0.2])
        f = LatticeFunction(2.0, values)
        assert f(0.25) == pytest.approx(0.5, rel=1e-12)
        assert f(0.75) == pytest.approx(0.6, rel=1e-12)

    def test_general_interpolation(self):
        f = LatticeFunction(5.0, np.array([1.0, 2.0]))
        # u = 0.13: frac = 0.65
        assert f(0.13) == pytest.approx(0.35 * 1.0 + 0.65 * 2.0, rel=1e-12)

    def test_no_extrapolation(self):
        f = LatticeFunction(5.0, np.array([1.0, 2.0]))
        with pytest.raises(DomainError):
            f(0.2 + 1e-6)
        with pytest.raises(DomainError):
            f(-0.01)
        assert f(0.2) == 2.0

    def test_values_are_immutable(self):
        f = LatticeFunction(1.0, np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            f.values[0] = 5.0


class TestPostWidder:
    def test_constant(self):
        for n in [1, 3, 10]:
            assert post_widder(ConstantLST(1.0), n, 2.0) == pytest.approx(1.0, rel=1e-14)

    def test_exponential_closed_form(self):
        # W_n exp(-a u) = (1 + a u / n)**(-n)
        a = 1.0
        for n, u in [(1, 0.5), (10, 1.0), (64, 3.0)]:
            expected = (1.0 + a * u / n) ** (-n)
            assert post_widder(ExponentialDecayLST(a), n, u) == pytest.approx(expected, rel=1e-13)
        assert post_widder(ExponentialDecayLST(1.0), 10, 1.0) == pytest.approx(
            1.1**-10, rel=1e-14
        )

    def test_converges_to_target(self):
        val = post_widder(ExponentialDecayLST(1.0), 10_000, 1.0)
        assert abs(val - math.exp(-1.0)) < 1e-3

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            post_widder(ConstantLST(1.0), 0, 1.0)
        with pytest.raises(DomainError):
            post_widder(ConstantLST(1.0), 3, 0.0)


class TestStehfest2:
    def test_constant(self):
        assert stehfest2(ConstantLST(4.2), 5, 1.0) == pytest.approx(4.2, rel=1e-14)

    def test_exponential_composition(self):
        a, n, u = 1.0, 5, 10.0
        expected = 2.0 * (1.0 + a * u / (2 * n)) ** (-2 * n) - (1.0 + a * u / n) ** (-n)
        assert stehfest2(ExponentialDecayLST(a), n, u) == pytest.approx(expected, rel=1e-13)

    def test_test_function_composition(self):
        p, n, u = 0.1, 5, 10.0
        expected = 2.0 * (1.0 - 0.9 * (1.0 + p * u / (2 * n)) ** (-2 * n)) - (
            1.0 - 0.9 * (1.0 + p * u / n) ** (-n)
        )
        assert stehfest2(tf_oracle(p), n, u) == pytest.approx(expected, rel=1e-13)
