import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from aalpha_pm.graph import PartitionSpec, extremal_graph, family_g5
from aalpha_pm.spectra import a_alpha, full_spectrum, quotient_b1, quotient_b5, quotient_spectrum, spectral_radius
from aalpha_pm.thresholds import (
    ADJACENCY_N6_THRESHOLD,
    CubicPoly,
    HypothesisError,
    adjacency_cubic,
    closed_form_g5_max,
    f_alpha,
    g5_root,
    largest_real_root,
    min_even_order,
    order_meets_hypothesis,
    phi_b5_coeffs,
    psi_eval,
    signless_laplacian_cubic,
    theorem_cubic,
    threshold,
)

from .conftest import alphas

GRID_ALPHAS = [k / 10 for k in range(10)] + [1 / 8, 1 / 4, 1 / 2, 11 / 16, 2 / 3, 3 / 4, 9 / 10]
GRID_ORDERS = list(range(6, 42, 2))


def numpy_largest_root(coeffs):
    roots = np.roots(coeffs)
    return max(r.real for r in roots if abs(r.imag) < 1e-7)


class TestTheoremCubic:
    @pytest.mark.parametrize("n", range(4, 42, 2))
    def test_alpha_zero_reduction(self, n):
        assert theorem_cubic(n, 0).coeffs == adjacency_cubic(n).coeffs

    def test_n10_alpha0(self):
        assert theorem_cubic(10, 0).coeffs == (1, -6, -9, 12)

    @pytest.mark.parametrize("n", range(10, 42, 2))
    def test_alpha_half_scaled(self, n):
        # p(y/2) * 8 is the signless Laplacian cubic in y
        p = theorem_cubic(n, 0.5)
        scaled = (p.c3, 2 * p.c2, 4 * p.c1, 8 * p.c0)
        assert np.allclose(scaled, signless_laplacian_cubic(n).coeffs, rtol=0, atol=1e-9)

    @pytest.mark.parametrize("n", GRID_ORDERS)
    @pytest.mark.parametrize("alpha", GRID_ALPHAS)
    def test_equals_phi_b5_at_s1(self, n, alpha):
        assert np.allclose(theorem_cubic(n, alpha).coeffs, phi_b5_coeffs(n, 1, alpha).coeffs, rtol=0, atol=1e-12)


class TestPhiB5:
    @given(st.integers(2, 25), st.data(), alphas)
    @settings(max_examples=100, deadline=None)
    def test_matches_quotient_charpoly(self, half, data, alpha):
        n = 2 * half
        s = data.draw(st.integers(1, half - 1))
        expected = np.poly(quotient_b5(n, s, alpha).entries)
        got = phi_b5_coeffs(n, s, alpha).coeffs
        assert np.allclose(got, expected, rtol=1e-10, atol=1e-8)

    def test_n10_s1_alpha0(self):
        assert np.allclose(np.poly(quotient_b5(10, 1, 0).entries), phi_b5_coeffs(10, 1, 0).coeffs)

    @pytest.mark.parametrize("n", GRID_ORDERS)
    @pytest.mark.parametrize("alpha", GRID_ALPHAS)
    def test_value_at_n_minus_3(self, n, alpha):
        value = phi_b5_coeffs(n, 1, alpha)(n - 3)
        assert value == pytest.approx(2 * (alpha - 1) * ((n - 5) * alpha + 1), abs=1e-9)
        assert value < 0

    def test_range(self):
        with pytest.raises(ValueError):
            phi_b5_coeffs(10, 5, 0.1)

    @given(st.integers(3, 20), st.data(), alphas)
    @settings(max_examples=60, deadline=None)
    def test_g5_root_matches_graph(self, half, data, alpha):
        n = 2 * half
        s = data.draw(st.integers(1, half - 1))
        rho = float(np.linalg.eigvalsh(a_alpha(family_g5(n, s), alpha))[-1])
        assert g5_root(n, s, alpha) == pytest.approx(rho, abs=1e-9)


class TestPsi:
    @st.composite
    @staticmethod
    def odd_specs(draw):
        s = draw(st.integers(1, 5))
        parts = sorted(draw(st.lists(st.integers(0, 4), min_size=2, max_size=7)), reverse=True)
        return PartitionSpec(s, tuple(2 * p + 1 for p in parts))

    @given(odd_specs(), alphas)
    @settings(max_examples=80, deadline=None)
    def test_vanishes_on_quotient_spectrum(self, spec, alpha):
        values = quotient_spectrum(quotient_b1(spec, spec.n, alpha))
        for lam in values:
            scale = (abs(lam) + spec.n) ** (spec.q + 1)
            assert abs(psi_eval(spec, spec.n, alpha, lam)) <= 1e-11 * scale

    @given(odd_specs(), alphas, st.floats(-20, 40))
    @settings(max_examples=80, deadline=None)
    def test_is_characteristic_polynomial(self, spec, alpha, x):
        coeffs = np.poly(quotient_b1(spec, spec.n, alpha).entries)
        scale = (abs(x) + spec.n) ** (spec.q + 1)
        assert psi_eval(spec, spec.n, alpha, x) == pytest.approx(np.polyval(coeffs, x), abs=1e-10 * scale)

    @pytest.mark.parametrize("n", [10, 16, 24])
    @pytest.mark.parametrize("alpha", [0, 0.4, 0.85])
    def test_shares_largest_root_with_theorem_cubic(self, n, alpha):
        spec = PartitionSpec(1, (n - 3, 1, 1))
        root = threshold(n, alpha, force=True)
        assert abs(psi_eval(spec, n, alpha, root)) < 1e-8 * n**4
        assert quotient_spectrum(quotient_b1(spec, n, alpha))[0] == pytest.approx(root, abs=1e-9)

    @given(odd_specs(), alphas, st.data())
    @settings(max_examples=80, deadline=None)
    def test_moving_two_vertices_to_largest_part(self, spec, alpha, data):
        candidates = [j for j in range(1, spec.q) if spec.parts[j] >= 3]
        if not candidates:
            return
        j = data.draw(st.sampled_from(candidates))
        parts = list(spec.parts)
        parts[0] += 2
        parts[j] -= 2
        moved = PartitionSpec(spec.s, tuple(sorted(parts, reverse=True)))
        rho1 = quotient_spectrum(quotient_b1(spec, spec.n, alpha))[0]
        assert psi_eval(moved, spec.n, alpha, rho1) < 0


class TestLargestRealRoot:
    def test_extremal_cubic(self):
        p = CubicPoly(1, -6, -9, 12)
        assert p(7) == -2 and p(7.1) > 0
        root = largest_real_root(p, 7, 9)
        assert 7.0 < root < 7.1
        assert abs(p(root)) <= 1e-11 * root**3

    def test_degenerate_quadratic(self):
        root = largest_real_root(CubicPoly(0, 1, -1, -8), 0, 10)
        assert root == pytest.approx((1 + math.sqrt(33)) / 2, abs=1e-12)
        assert root == pytest.approx(3.3723, abs=1e-4)

    def test_factored(self):
        p = CubicPoly(1, -6, 11, -6)
        assert largest_real_root(p, 2.5, 10) == pytest.approx(3, abs=1e-12)

    def test_picks_largest_of_three_in_bracket(self):
        p = CubicPoly(1, -6, 11, -6)
        assert largest_real_root(p, 0, 10) == pytest.approx(3, abs=1e-12)

    def test_bad_bracket(self):
        with pytest.raises(ValueError, match="straddle"):
            largest_real_root(CubicPoly(1, -6, 11, -6), 4, 10)

    @given(st.lists(st.floats(-50, 50), min_size=3, max_size=3))
    @settings(max_examples=100, deadline=None)
    def test_random_factored(self, roots):
        roots = sorted(roots)
        # a tangent root has no sign change; only simple largest roots are in scope
        assume(roots[-1] - roots[-2] > 1e-3)
        c = np.poly(roots)
        p = CubicPoly(*c)
        top = roots[-1]
        got = largest_real_root(p, -60, 60)
        assert abs(p(got)) <= 1e-11 * max(1, abs(got)) ** 3 + 1e-9
        assert got == pytest.approx(top, abs=1e-6)


class TestThreshold:
    @pytest.mark.parametrize("alpha", GRID_ALPHAS)
    def test_in_open_interval(self, alpha):
        for n in range(min_even_order(alpha), 60, 2):
            t = threshold(n, alpha)
            assert n - 3 < t < n - 1

    def test_n10_alpha0(self):
        assert threshold(10, 0) == pytest.approx(numpy_largest_root([1, -6, -9, 12]), abs=1e-12)

    @pytest.mark.parametrize("n", range(10, 42, 2))
    def test_signless_laplacian(self, n):
        assert 2 * threshold(n, 0.5) == pytest.approx(numpy_largest_root(signless_laplacian_cubic(n).coeffs), abs=1e-8)

    @pytest.mark.parametrize("n, alpha", [(10, 0), (14, 0.6), (26, 0.8), (40, 0.3), (50, Fraction(9, 10))])
    def test_matches_extremal_radius(self, n, alpha):
        assert threshold(n, alpha) == pytest.approx(spectral_radius(a_alpha(extremal_graph(n), alpha)).radius, abs=1e-9)

    def test_refuses_below_f(self):
        with pytest.raises(HypothesisError):
            threshold(8, 0.2)
        with pytest.raises(HypothesisError):
            threshold(11, 0.2)
        assert threshold(8, 0.2, force=True) > 5

    def test_small_forced(self):
        assert threshold(4, 0, force=True) == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_n6_special_value(self):
        assert ADJACENCY_N6_THRESHOLD == pytest.approx(closed_form_g5_max(6, 0), abs=1e-12)


class TestFAlpha:
    @pytest.mark.parametrize("alpha, expected", [(0.3, 10), (0, 10), (0.5, 10), (0.6, 14), (2 / 3, 14)])
    def test_piecewise(self, alpha, expected):
        assert f_alpha(alpha) == expected

    def test_third_branch(self):
        assert f_alpha(0.8) == pytest.approx(25)
        assert f_alpha(Fraction(4, 5)) == 25
        assert f_alpha(Fraction(2, 3)) == 14
        assert f_alpha(Fraction(3, 4)) == 20

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            f_alpha(1.0)

    def test_order_gate(self):
        assert order_meets_hypothesis(26, 0.8)
        assert not order_meets_hypothesis(24, 0.8)
        assert order_meets_hypothesis(50, 0.9)  # 5/(1-0.9) rounds to 50.000000000000014
        assert min_even_order(0.8) == 26 and min_even_order(0.3) == 10 and min_even_order(0.75) == 20


class TestClosedForm:
    def test_star(self):
        assert closed_form_g5_max(4, 0) == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_n10(self):
        assert closed_form_g5_max(10, 0) == pytest.approx((6 + math.sqrt(420)) / 4, abs=1e-12)

    @pytest.mark.parametrize("n", [4, 8, 12, 20, 30])
    @pytest.mark.parametrize("alpha", [0, 0.25, 0.5, 0.9])
    def test_matches_eigensolver(self, n, alpha):
        g = family_g5(n, n // 2 - 1)
        value = closed_form_g5_max(n, alpha)
        assert value == pytest.approx(full_spectrum(a_alpha(g, alpha))[0], abs=1e-9)
        assert value >= min(g.degrees()) - 1e-12
