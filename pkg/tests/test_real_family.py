"""Tests for weights, transforms, empirical sums, and density formulas."""

import math
from fractions import Fraction

import numpy as np
import pytest

from murmurlab import arith, real_family as rf

BUMP = rf.bump_weight(1, 2)
BUMP_NEG = rf.bump_weight(-2, -1)
INDICATOR = rf.indicator_weight(1, 2)


class TestWeights:
    def test_bump_examples(self):
        assert BUMP(1.5) == pytest.approx(math.exp(-1))
        assert BUMP(1.0) == 0.0
        assert BUMP(2.0) == 0.0
        assert rf.indicator_weight(-2, -1)(-1.5) == 1.0

    def test_nonnegative_and_support(self):
        x = np.linspace(-3, 3, 1201)
        for w in (BUMP, BUMP_NEG, INDICATOR):
            v = w(x)
            assert (v >= 0).all()
            lo, hi = w.support
            outside = (x <= lo) | (x >= hi)
            assert (v[outside] == 0).all()

    def test_negative_bump_mirrors_positive(self):
        # exp(-1/(1-4(-x-1.5)^2)) on (-2,-1)
        for x in (-1.9, -1.5, -1.2):
            assert BUMP_NEG(x) == pytest.approx(BUMP(-x), abs=1e-15)

    def test_tabulated(self):
        w = rf.tabulated_weight([0.0, 1.0, 2.0], [0.0, 2.0, 0.0])
        assert w(0.5) == pytest.approx(1.0)
        assert w(-0.1) == 0.0
        with pytest.raises(ValueError):
            rf.tabulated_weight([0, 1], [1.0, -1.0])

    def test_radius(self):
        assert BUMP_NEG.radius == 2.0
        assert BUMP.radius == 2.0


class TestTildeTransform:
    def test_indicator_values(self):
        assert rf.tilde_transform(INDICATOR, 0.0) == pytest.approx(1.0, abs=1e-10)
        assert rf.tilde_transform(INDICATOR, 0.5) == pytest.approx(
            -2 / math.pi, abs=1e-10
        )

    def test_bump_mass_against_trapezoid_oracle(self):
        x = np.linspace(1, 2, 10_000_001)
        oracle = float(np.trapezoid(BUMP(x), x))
        assert rf.tilde_transform(BUMP, 0.0) == pytest.approx(oracle, abs=1e-9)

    def test_matches_adaptive_simpson(self):
        for w in (BUMP, INDICATOR, BUMP_NEG):
            for xi in (0.0, 0.37, 2.5, -1.2, 11.0):
                gl = rf.tilde_transform(w, xi)
                simpson = rf.tilde_transform_simpson(w, xi)
                assert gl == pytest.approx(simpson, abs=5e-10), (w.kind, xi)

    def test_linearity(self):
        rng = np.random.default_rng(5)
        xi = rng.uniform(-4, 4, size=8)
        va = rf.tilde_transform(BUMP, xi)
        vb = rf.tilde_transform(INDICATOR, xi)
        for al, be in [(2.0, 3.0), (-1.5, 0.25)]:
            mixed = al * va + be * vb
            # the transform is an integral, hence linear in the weight
            direct = np.array(
                [
                    al * rf.tilde_transform(BUMP, float(x))
                    + be * rf.tilde_transform(INDICATOR, float(x))
                    for x in xi
                ]
            )
            assert np.allclose(mixed, direct, atol=1e-9)

    def test_closed_form_indicator(self):
        xi = np.array([-2.3, -0.5, 0.0, 0.2, 1.7, 9.4])
        closed = rf._indicator_tilde(INDICATOR, xi)
        quad = rf.tilde_transform(INDICATOR, xi)
        assert np.allclose(closed, quad, atol=1e-10)

    def test_zero_frequency_is_weight_mass(self):
        for w in (BUMP, BUMP_NEG, INDICATOR):
            mass = rf.tilde_transform(w, 0.0)
            grid_free = rf.tilde_transform_simpson(w, 0.0)
            assert mass == pytest.approx(grid_free, abs=1e-10)


class TestTransformGrid:
    def test_grid_matches_quadrature(self):
        grid = rf.transform_grid(BUMP)
        rng = np.random.default_rng(11)
        xi = np.sort(rng.uniform(0, grid.cutoff * 0.9, size=40))
        direct = rf.tilde_transform(BUMP, xi)
        interp = grid.tilde(xi)
        assert np.max(np.abs(direct - interp)) < 1e-9

    def test_envelope_cutoff_is_real(self):
        grid = rf.transform_grid(BUMP)
        assert 50 < grid.cutoff < 2000
        tail = rf.tilde_transform(BUMP, grid.cutoff + 1.0)
        assert abs(tail) < 1e-12

    def test_negative_support_grid(self):
        grid = rf.transform_grid(BUMP_NEG)
        xi = np.array([0.0, 0.4, 3.3])
        assert np.allclose(grid.tilde(xi), rf.tilde_transform(BUMP_NEG, xi), atol=1e-9)

    def test_rejects_sharp(self):
        with pytest.raises(ValueError):
            rf.TransformGrid(INDICATOR, rf.DEFAULT_POLICY)

    def test_half_cos_transform_against_collapsed_kernel(self):
        # independent identity: HF(xi) = int Phi(x) cos(pi xi^2/(2x)) / sqrt(x) dx
        # for support in R_{>0} (Fresnel reduction of the double integral)
        grid = rf.transform_grid(BUMP)
        glx, glw = np.polynomial.legendre.leggauss(12)
        edges = np.linspace(1, 2, 2001)
        mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * (edges[1:] - edges[:-1])
        nodes = (mid[:, None] + half[:, None] * glx[None, :]).ravel()
        wts = (half[:, None] * glw[None, :]).ravel()
        fw = BUMP(nodes) * wts / np.sqrt(nodes)
        for xi in (0.0, 0.8, 2.0, 5.0):
            kernel = float(np.cos(np.pi * xi * xi / (2 * nodes)) @ fw)
            mine = float(grid.half_cos_transform(np.array([xi]))[0])
            assert mine == pytest.approx(kernel, abs=1e-10)


class TestEmpiricalAverage:
    def test_tiny_oracle(self):
        for (y, X, d, w, var) in [
            (1.0, 50, 0.6, BUMP, "eight_d"),
            (1.0, 50, 0.6, BUMP, "dagger"),
            (1.2, 40, 0.7, BUMP_NEG, "eight_d"),
            (0.9, 60, 0.5, INDICATOR, "eight_d"),
        ]:
            fast = rf.empirical_average(y, X, d, w, var)
            naive = rf.empirical_average_naive(y, X, d, w, var)
            assert fast == pytest.approx(naive, abs=1e-12)

    def test_result_is_real_float(self):
        v = rf.empirical_average(1.0, 200, 0.6, BUMP, "eight_d")
        assert isinstance(v, float)

    def test_negative_support_selects_odd_characters(self):
        X = 100
        d = rf._odd_squarefree_in(BUMP_NEG.a * X, BUMP_NEG.b * X)
        d = d[BUMP_NEG(d / X) > 0]
        assert (d < 0).all()  # no d > 0 term survives the weight
        for dd in d[:: max(1, len(d) // 10)]:
            assert arith.kronecker_symbol(8 * int(dd), -1) == -1  # chi_8d odd

    def test_positive_support_selects_even_characters(self):
        X = 100
        d = rf._odd_squarefree_in(BUMP.a * X, BUMP.b * X)
        d = d[BUMP(d / X) > 0]
        assert (d > 0).all()
        for dd in d[:: max(1, len(d) // 10)]:
            assert arith.kronecker_symbol(8 * int(dd), -1) == 1

    def test_window_start_must_exceed_two(self):
        with pytest.raises(ValueError):
            rf.empirical_average(0.01, 100, 0.6, BUMP)

    def test_thread_count_invariance(self):
        a = rf.empirical_average(1.0, 3000, 0.6, BUMP, "eight_d", threads=1)
        b = rf.empirical_average(1.0, 3000, 0.6, BUMP, "eight_d", threads=3)
        assert a == b


class TestDoubleAverage:
    def test_consistency_with_empirical(self):
        y, X, delta = 1.0, 10_000, 0.6
        res = rf.double_average(y, X, delta, BUMP)
        emp = rf.empirical_average(y, X, delta, BUMP, "eight_d")
        rebuilt = (
            res.value
            * res.weight_mass
            * res.prime_count
            * math.log(X)
            / X**delta
        )
        assert rebuilt == pytest.approx(emp, abs=1e-9)

    def test_weight_mass_near_density_constant(self):
        X = 100_000
        res = rf.double_average(1.0, X, 0.6, BUMP)
        mass_limit = 4 / math.pi**2 * rf.tilde_transform(BUMP, 0.0)
        assert abs(res.weight_mass - mass_limit) <= 0.003

    def test_empty_prime_window_rejected(self):
        # [X + something tiny]: no prime in [1.19*24, ...] window of width ~1
        with pytest.raises(ValueError):
            rf.double_average(1.0, 24, 0.01, BUMP)


class TestBCoefficients:
    def test_exact_values(self):
        assert rf.b_coefficient(1) == 1
        assert rf.b_coefficient(2, "eight_d") == 0
        assert rf.b_coefficient(2, "dagger") == 1
        assert rf.b_coefficient(3) == Fraction(2, 3)
        assert rf.b_coefficient(15) == Fraction(8, 15)
        for k in range(1, 8):
            assert rf.b_coefficient(2**k, "dagger") == 1

    def test_prime_powers(self):
        for p in (3, 5, 7, 11):
            for k in (1, 2, 3):
                expected = Fraction(p - 1, p)
                assert rf.b_coefficient(p**k, "eight_d") == expected
                assert rf.b_coefficient(p**k, "dagger") == expected

    def test_multiplicative_on_coprime(self):
        pairs = [(3, 5), (9, 25), (7, 16), (15, 49)]
        for m, n in pairs:
            assert rf.b_coefficient(m * n, "dagger") == rf.b_coefficient(
                m, "dagger"
            ) * rf.b_coefficient(n, "dagger")

    def test_divisor_sum_definition(self):
        for n in range(1, 200):
            direct = sum(
                Fraction(arith.mobius(a), a)
                for a in range(1, n + 1, 2)
                if n % a == 0
            )
            assert rf.b_coefficient(n, "dagger") == direct

    def test_sieved_array(self):
        b = rf._b_array(500)
        for n in range(1, 501):
            assert b[n] == pytest.approx(float(rf.b_coefficient(n, "dagger")))


class TestDensities:
    def test_primal_first_term_argument(self):
        # with a_max = 1 the double sum is (1/2) sum_m (-1)^m T(m^2/(2y));
        # its first term uses T(1/(2y))
        y = 1.0
        pol = rf.TruncationPolicy(a_max=1)
        got = rf.density_primal(y, BUMP, "eight_d", pol).value
        grid = rf.transform_grid(BUMP, pol)
        m = np.arange(1, int(math.ceil(math.sqrt(grid.cutoff * 2 * y))) + 2)
        direct = 0.5 * math.fsum(
            (-1) ** int(mm) * rf.tilde_transform(BUMP, mm * mm / (2 * y))
            for mm in m
        )
        assert got == pytest.approx(direct, abs=1e-9)
        assert abs(rf.tilde_transform(BUMP, 1 / (2 * y)) - rf.tilde_transform(BUMP, 0.5)) == 0

    def test_primal_dual_agreement_spot(self):
        pol = rf.TruncationPolicy(a_max=2000)
        for y in (0.25, 1.0):
            pv = rf.density_primal(y, BUMP, "eight_d", pol)
            dv = rf.density_dual(y, BUMP, "eight_d", pol)
            assert abs(pv.value - dv) < 2e-6

    def test_dual_limit_at_large_y(self):
        grid = rf.transform_grid(BUMP)
        target = -rf.TWO_OVER_PI2 * grid.tilde0
        got = rf.density_dual(1e4, BUMP, "eight_d")
        assert abs(got - target) <= 1e-3 * abs(target)
        got = rf.density_dual(1e4, BUMP, "dagger")
        assert abs(got - target) <= 1e-3 * abs(target)

    def test_dual_rejects_sharp(self):
        with pytest.raises(ValueError):
            rf.density_dual(1.0, INDICATOR)

    def test_primal_accepts_sharp_with_error_estimate(self):
        res = rf.density_primal(1.0, INDICATOR, "eight_d")
        assert np.isfinite(res.value)
        assert res.error_estimate >= 1e-3

    def test_negative_y_rejected(self):
        with pytest.raises(ValueError):
            rf.density_dual(-1.0, BUMP)
        with pytest.raises(ValueError):
            rf.density_primal(0.0, BUMP)


class TestPartialSums:
    def test_examples(self):
        assert rf.character_prime_partial_sum(1, 10) == 3
        assert rf.character_prime_partial_sum(5, 10) == -2
        assert rf.character_prime_partial_sum(7, 2.5) == 0

    def test_matches_direct(self):
        for k in (-8, 3, 12):
            direct = sum(
                arith.kronecker_symbol(k, p) for p in arith.primes_in_interval(3, 200)
            )
            assert rf.character_prime_partial_sum(k, 200) == direct


class TestPoissonIdentity:
    def test_examples(self):
        r = rf.poisson_identity_check(3, 50, 3, BUMP)
        assert abs(r.lhs - r.rhs) <= 1e-8
        r = rf.poisson_identity_check(5, 40, 1, BUMP_NEG)
        assert abs(r.lhs - r.rhs) <= 1e-8

    def test_a_equals_one_reduces_lhs(self):
        # with A = 1 the inner coefficient is mu(1) = 1 for every d
        X, p = 30, 7
        r = rf.poisson_identity_check(p, X, 1, BUMP)
        d = rf._odd_squarefree_in(-2 * X, 2 * X)
        # all odd d, not only squarefree ones
        d_all = np.concatenate(
            [np.arange(-2 * X + 1, 0, 2), np.arange(1, 2 * X + 1, 2)]
        )
        lhs_direct = (
            math.fsum(
                float(BUMP(dd / X)) * arith.kronecker_symbol(int(dd), p)
                for dd in d_all
            )
            * math.sqrt(p)
            / X
        )
        assert r.lhs == pytest.approx(lhs_direct, abs=1e-12)

    def test_rejects_sharp_weight(self):
        with pytest.raises(ValueError):
            rf.poisson_identity_check(3, 50, 3, INDICATOR)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            rf.poisson_identity_check(4, 50, 3, BUMP)
        with pytest.raises(ValueError):
            rf.poisson_identity_check(3, 50, 50, BUMP)  # A > sqrt(beta X)
