"""Tests for Dirichlet character groups, Gauss sums, and families."""

import math
from math import gcd

import numpy as np
import pytest

from murmurlab import arith, characters as ch


class TestGroupStructure:
    def test_mod5_is_cyclic_order4_gen2(self):
        g = ch.character_group(5)
        assert g.orders == (4,)
        assert [c.generator for c in g.components] == [2]

    def test_mod1_trivial(self):
        g = ch.character_group(1)
        assert g.characters() == [()]
        assert g.evaluate((), 7) == 1
        assert g.conductor(()) == 1
        assert g.parity(()) == 1

    def test_mod8_two_c2_components(self):
        g = ch.character_group(8)
        assert g.orders == (2, 2)
        assert [c.generator for c in g.components] == [7, 5]  # -1 and 5

    def test_orders_multiply_to_phi(self):
        for N in range(1, 200):
            g = ch.CharacterGroup(N)
            assert math.prod(g.orders) == arith.euler_phi(N)
            assert len(g.characters()) == g.phi

    def test_generator_images_are_exact_roots_of_unity(self):
        for N in (5, 7, 9, 16, 24, 40, 45):
            g = ch.character_group(N)
            for chi in g.characters():
                for comp, j in zip(g.components, chi):
                    w = ch._crt_unit(comp.generator, comp.modulus, N)
                    expected = np.exp(2j * np.pi * j / comp.order)
                    assert abs(g.evaluate(chi, w) - expected) < 1e-12

    def test_bound_rejected(self):
        with pytest.raises(ValueError):
            ch.CharacterGroup(ch.BRUTE_FORCE_BOUND + 1)


class TestEvaluation:
    def test_generator_image(self):
        g = ch.character_group(5)
        chi = (1,)
        assert abs(g.evaluate(chi, 2) - 1j) < 1e-15

    def test_non_unit_is_zero(self):
        g = ch.character_group(5)
        for chi in g.characters():
            assert g.evaluate(chi, 10) == 0

    def test_quadratic_at_minus_one(self):
        g = ch.character_group(5)
        quad = next(c for c in g.characters() if g.character_order(c) == 2)
        assert abs(g.evaluate(quad, -1) - 1) < 1e-15

    def test_complete_multiplicativity(self):
        for N in (5, 9, 12, 16, 21):
            g = ch.character_group(N)
            rng = np.random.default_rng(7)
            for chi in g.characters():
                for _ in range(12):
                    a, b = rng.integers(-40, 40, size=2)
                    lhs = g.evaluate(chi, int(a) * int(b))
                    rhs = g.evaluate(chi, int(a)) * g.evaluate(chi, int(b))
                    assert abs(lhs - rhs) < 1e-12

    def test_values_at_many_matches_pointwise(self):
        g = ch.character_group(45)
        a = np.arange(-10, 60)
        vals = g.values_at_many(a)
        for i, chi in enumerate(g.characters()):
            for k, x in enumerate(a):
                assert abs(vals[i, k] - g.evaluate(chi, int(x))) < 1e-12


class TestParity:
    def test_examples(self):
        g5 = ch.character_group(5)
        quad = next(c for c in g5.characters() if g5.character_order(c) == 2)
        assert g5.parity(quad) == 1
        g3 = ch.character_group(3)
        nontriv = next(c for c in g3.characters() if c != g3.principal)
        assert g3.parity(nontriv) == -1
        for N in (1, 4, 7, 12):
            g = ch.character_group(N)
            assert g.parity(g.principal) == 1

    def test_parities_all_consistent(self):
        for N in (3, 8, 15, 40):
            g = ch.character_group(N)
            bulk = g.parities_all()
            for i, chi in enumerate(g.characters()):
                assert bulk[i] == g.parity(chi)


class TestConductor:
    def test_examples(self):
        g5 = ch.character_group(5)
        assert g5.conductor(g5.principal) == 1
        g9 = ch.character_group(9)
        # the order-2 character mod 9 is induced from mod 3
        quad = next(c for c in g9.characters() if g9.character_order(c) == 2)
        assert g9.conductor(quad) == 3
        g8 = ch.character_group(8)
        conds = sorted(g8.conductor(c) for c in g8.characters())
        assert conds == [1, 4, 8, 8]

    def test_bulk_matches_pointwise(self):
        for N in (9, 16, 24, 45, 90):
            g = ch.character_group(N)
            bulk = g.conductors_all()
            for i, chi in enumerate(g.characters()):
                assert bulk[i] == g.conductor(chi)

    def test_conductor_divides_modulus_and_counts(self):
        for N in range(1, 120):
            g = ch.CharacterGroup(N)
            conds = g.conductors_all()
            assert all(N % int(d) == 0 for d in conds)
            assert int(np.sum(conds == N)) == ch.count_primitive(N)


class TestGaussSums:
    def test_quadratic_values(self):
        g5 = ch.character_group(5)
        quad = next(c for c in g5.characters() if g5.character_order(c) == 2)
        assert abs(g5.gauss_sum(quad) - math.sqrt(5)) < 1e-12
        g3 = ch.character_group(3)
        quad3 = next(c for c in g3.characters() if g3.character_order(c) == 2)
        assert abs(g3.gauss_sum(quad3) - 1j * math.sqrt(3)) < 1e-12

    def test_order4_modulus(self):
        g5 = ch.character_group(5)
        assert abs(abs(g5.gauss_sum((1,))) - math.sqrt(5)) < 1e-12

    def test_bulk_matches_single(self):
        for N in (5, 8, 9, 15, 36):
            g = ch.character_group(N)
            bulk = g.gauss_sums_all()
            for i, chi in enumerate(g.characters()):
                assert abs(bulk[i] - g.gauss_sum(chi)) < 1e-11

    def test_primitive_modulus_and_inverse_relation(self):
        for N in [n for n in range(1, 80) if n % 4 != 2]:
            g = ch.character_group(N)
            tau = g.gauss_sums_all()
            primitive = g.conductors_all() == N
            parities = g.parities_all()
            chars = g.characters()
            for i in np.flatnonzero(primitive):
                assert abs(abs(tau[i]) - math.sqrt(N)) < 1e-10
                jbar = chars.index(g.conjugate_index(chars[i]))
                lhs = 1 / tau[i]
                rhs = parities[i] / N * tau[jbar]
                assert abs(lhs - rhs) < 1e-10


class TestImprimitiveGaussSum:
    def test_shared_factor_gives_zero(self):
        g9 = ch.character_group(9)
        quad9 = next(c for c in g9.characters() if g9.character_order(c) == 2)
        g3 = ch.character_group(3)
        quad3 = next(c for c in g3.characters() if g3.character_order(c) == 2)
        val = ch.imprimitive_gauss_sum(g9, quad9, g3, quad3)
        assert val == 0

    def test_mod15_example(self):
        g15 = ch.character_group(15)
        g3 = ch.character_group(3)
        quad3 = next(c for c in g3.characters() if g3.character_order(c) == 2)
        sub, chi15 = None, None
        for chi in g15.characters():
            sub_g, chi1 = ch.restrict_to_conductor(g15, chi)
            if sub_g.N == 3 and chi1 == quad3:
                chi15 = chi
        formula = ch.imprimitive_gauss_sum(g15, chi15, g3, quad3)
        # mu(5) * conj(chi1(5)) * tau(conj(chi1)); chi1(5) = (5 mod 3 = 2 / 3) = -1
        expected = (-1) * (-1) * g3.gauss_sum(quad3)
        assert abs(formula - expected) < 1e-12
        # and it matches the direct O(N) sum of tau(conj(chi))
        direct = g15.gauss_sum(g15.conjugate_index(chi15))
        assert abs(formula - direct) < 1e-12

    def test_primitive_specialization_is_identity(self):
        g5 = ch.character_group(5)
        chi = (1,)
        val = ch.imprimitive_gauss_sum(g5, chi, g5, chi)
        assert abs(val - g5.gauss_sum(g5.conjugate_index(chi))) < 1e-12

    def test_formula_matches_direct_sum_sample(self):
        for N in (12, 45, 63, 80):
            g = ch.character_group(N)
            conds = g.conductors_all()
            chars = g.characters()
            for i in np.flatnonzero((conds > 1) & (conds < N)):
                chi = chars[i]
                sub, chi1 = ch.restrict_to_conductor(g, chi)
                formula = ch.imprimitive_gauss_sum(g, chi, sub, chi1)
                direct = g.gauss_sum(g.conjugate_index(chi))
                assert abs(formula - direct) < 1e-10, (N, chi)

    def test_rejections(self):
        g9 = ch.character_group(9)
        g5 = ch.character_group(5)
        with pytest.raises(ValueError):
            ch.imprimitive_gauss_sum(g9, (3,), g5, (1,))  # 5 does not divide 9
        g3 = ch.character_group(3)
        with pytest.raises(ValueError):
            # principal mod 3 is not primitive
            ch.imprimitive_gauss_sum(g9, (3,), g3, (0,))
        with pytest.raises(ValueError):
            # (1,) mod 9 is primitive, not induced by the quadratic mod 3
            ch.imprimitive_gauss_sum(g9, (1,), g3, (1,))


class TestTwistedQuadratic:
    def test_k_zero(self):
        for p in (3, 5, 7, 11):
            tau, g = ch.twisted_quadratic_gauss_sum(0, p)
            assert tau == 0 and g == 0

    def test_examples(self):
        tau1, _ = ch.twisted_quadratic_gauss_sum(1, 5)
        assert abs(tau1 - math.sqrt(5)) < 1e-12
        _, g2 = ch.twisted_quadratic_gauss_sum(2, 5)
        assert abs(g2 - (-math.sqrt(5))) < 1e-12

    def test_identities_small(self):
        for p in (3, 5, 7, 13):
            for k in range(-2 * p, 2 * p + 1):
                tau, g = ch.twisted_quadratic_gauss_sum(k, p)
                assert abs(g - arith.kronecker_symbol(k, p) * math.sqrt(p)) < 1e-11
                eps = arith.kronecker_symbol(-1, p)
                pref = (1 + 1j) / 2 + eps * (1 - 1j) / 2
                assert abs(tau - pref * g) < 1e-11

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            ch.twisted_quadratic_gauss_sum(1, 2)
        with pytest.raises(ValueError):
            ch.twisted_quadratic_gauss_sum(1, 15)


class TestFamilies:
    def test_examples(self):
        g5 = ch.character_group(5)
        dplus = g5.enumerate_family("D+")
        assert len(dplus) == 1 and g5.character_order(dplus[0]) == 2
        assert ch.character_group(6).enumerate_family("D+") == []
        assert len(g5.enumerate_family("D-")) == 2

    def test_d_empty_iff_2_mod_4(self):
        for N in range(1, 200):
            g = ch.CharacterGroup(N)
            empty = not (g.enumerate_family("D+") or g.enumerate_family("D-"))
            if N == 1:
                assert empty  # principal excluded from D by convention
            else:
                assert empty == (N % 4 == 2)

    def test_partition(self):
        for N in range(1, 120):
            g = ch.CharacterGroup(N)
            masks = [g.family_mask(f) for f in ("D+", "D-", "I+", "I-")]
            total = np.zeros(g.phi, dtype=int)
            for m in masks:
                total += m.astype(int)
            total[0] += 1  # principal
            assert (total == 1).all(), N

    def test_quadratic_subfamily(self):
        for N in (5, 8, 12, 21, 40):
            g = ch.character_group(N)
            for s in ("+", "-"):
                q = set(g.enumerate_family("Q" + s))
                d = set(g.enumerate_family("D" + s))
                assert q <= d
                assert all(g.character_order(c) == 2 for c in q)

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError):
            ch.character_group(5).family_mask("X+")


class TestCountPrimitive:
    def test_examples(self):
        assert ch.count_primitive(1) == 1
        assert ch.count_primitive(8) == 2
        assert ch.count_primitive(7) == 5

    def test_agrees_with_conductor_scan(self):
        for N in range(1, 301):
            g = ch.CharacterGroup(N)
            assert ch.count_primitive(N) == int(np.sum(g.conductors_all() == N)), N

    def test_agrees_on_sampled_larger_moduli(self):
        rng = np.random.default_rng(20260810)
        sample = set(rng.integers(301, 10_001, size=12).tolist())
        sample |= {512, 2048, 3 * 5 * 7 * 11, 9973, 5040}
        for N in sorted(sample):
            g = ch.CharacterGroup(int(N))
            assert ch.count_primitive(int(N)) == int(
                np.sum(g.conductors_all() == N)
            ), N


class TestNormalizedSums:
    def test_examples(self):
        v = ch.normalized_character_sum(5, 2, "D+")
        assert abs(v - (-1 / math.sqrt(5))) < 1e-12
        vm = ch.normalized_character_sum(5, 2, "D-")
        expected = -1j * (4 / 5) * math.sin(4 * math.pi / 5)
        assert abs(vm - expected) < 1e-12
        assert ch.normalized_character_sum(6, 5, "D+") == 0

    def test_closed_form_examples(self):
        v = ch.closed_form_primitive_sum(5, 2, 1)
        assert abs(v - ((4 / 5) * math.cos(4 * math.pi / 5) + 1 / 5)) < 1e-15
        v = ch.closed_form_primitive_sum(5, 2, -1)
        assert abs(v - (-1j * (4 / 5) * math.sin(4 * math.pi / 5))) < 1e-15
        v = ch.closed_form_primitive_sum(3, 2, -1)
        assert abs(v - 1j * (2 / 3) * (math.sqrt(3) / 2)) < 1e-15

    def test_closed_form_rejects_composite(self):
        with pytest.raises(ValueError):
            ch.closed_form_primitive_sum(9, 2, 1)
        with pytest.raises(ValueError):
            ch.closed_form_primitive_sum(5, 5, 1)

    def test_closed_matches_enumeration_sample(self):
        for N in (7, 11, 23, 53, 101):
            for p in arith.primes_in_interval(2, N - 1):
                for parity, fam in ((1, "D+"), (-1, "D-")):
                    brute = ch.normalized_character_sum(N, p, fam)
                    closed = ch.closed_form_primitive_sum(N, p, parity)
                    assert abs(brute - closed) < 1e-10, (N, p, fam)


class TestAdditiveCharacterLemma:
    """cos/sin of 2*pi*p/N as normalized sums of tau(conj(chi)) chi(p)."""

    @pytest.mark.parametrize("N", [3, 5, 7, 9, 12, 15, 16, 45, 101])
    def test_identity(self, N):
        g = ch.character_group(N)
        tau = g.gauss_sums_all()
        chars = g.characters()
        conj_perm = np.array(
            [chars.index(g.conjugate_index(c)) for c in chars], dtype=int
        )
        tau_bar = tau[conj_perm]
        parities = g.parities_all()
        phi = g.phi
        even = parities == 1
        even[0] = False  # principal handled by its Gauss sum mu(N)
        odd = parities == -1
        for p in arith.primes_in_interval(2, 3 * N):
            if gcd(p, N) != 1:
                continue
            vals = g.values_at(p)
            lhs_cos = math.cos(2 * math.pi * p / N)
            rhs_cos = (
                arith.mobius(N) + np.sum(tau_bar[even] * vals[even])
            ) / phi
            # tau(conj(chi0)) = mu(N); the paper's "-1" constant is its
            # prime-modulus special case
            assert abs(lhs_cos - rhs_cos) < 1e-10, (N, p)
            lhs_sin = math.sin(2 * math.pi * p / N)
            rhs_sin = -1j / phi * np.sum(tau_bar[odd] * vals[odd])
            assert abs(lhs_sin - rhs_sin) < 1e-10, (N, p)
