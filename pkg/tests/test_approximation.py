import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vilenkin.approximation import (
    ModulusProfile,
    NPolicy,
    approximation_error,
    convergence_table,
    gen_constant,
    gen_indicator,
    gen_lacunary,
    gen_random,
    lp_norm,
    modulus,
    modulus_profile,
    modulus_profiles,
    parse_exponent,
    parse_function,
    parse_n_policy,
    theorem_bound,
)
from vilenkin.cesaro import cesaro_numbers, partial_sum
from vilenkin.errors import BadExponent, LevelOutOfRange, OracleCapExceeded, OutOfRange, SpecParseError
from vilenkin.group import parse_radices, point_from_label
from vilenkin.transform import (
    StepFunction,
    character_rows,
    character_samples,
    forward,
    forward_naive,
    inverse,
    translate,
)

from conftest import random_values
from oracles import modulus_brute

INF = math.inf


class TestNorms:
    @pytest.mark.parametrize("p", [1, 1.5, 2, 3, INF])
    def test_constant_and_characters(self, p):
        s = parse_radices("2,3,2,3")
        assert lp_norm(gen_constant(1.0, s), p) == pytest.approx(1.0, abs=1e-15)
        for j in (1, 7, 35):
            assert lp_norm(character_samples(s, j), p) == pytest.approx(1.0, abs=1e-14)

    def test_indicator_of_I1(self):
        s = parse_radices("2,3,2")
        f = gen_indicator(1, 0, s)
        assert lp_norm(f, 1) == 0.5

    def test_bad_exponent(self):
        s = parse_radices("2,2")
        with pytest.raises(BadExponent):
            lp_norm(gen_constant(1.0, s), 0.5)
        with pytest.raises(BadExponent):
            parse_exponent("half")

    def test_parse(self):
        assert parse_exponent("inf") == INF
        assert parse_exponent(" 2 ") == 2.0
        assert parse_exponent(3) == 3.0

    @given(st.floats(1.0, 6.0))
    @settings(max_examples=30, deadline=None)
    def test_monotone_in_p(self, p):
        s = parse_radices("3,2,3")
        f = gen_random(5, 3, s)
        assert lp_norm(f, 1) <= lp_norm(f, p) + 1e-12 <= lp_norm(f, INF) + 2e-12


class TestModulus:
    @pytest.mark.parametrize("p", [1, 2, INF])
    def test_constant(self, p):
        prof = modulus_profile(gen_constant(2.0, parse_radices("2,3,2,3")), p)
        assert np.all(prof.omegas == 0)

    def test_rademacher(self):
        s = parse_radices("2^5")
        f = character_samples(s, 1)
        assert modulus(f, 1, INF) == pytest.approx(0.0, abs=1e-15)
        assert modulus(f, 0, INF) == pytest.approx(2.0, abs=1e-15)

    @pytest.mark.parametrize("radices", ["2,3,2,3", "3,2,3,2", "2,5,3", "2^6"])
    @pytest.mark.parametrize("p", [1, 2, 3.5, INF])
    def test_matches_brute_force(self, rng, radices, p):
        s = parse_radices(radices)
        f = StepFunction(s, random_values(rng, s.size))
        prof = modulus_profile(f, p)
        for r in range(s.level + 1):
            assert prof[r] == pytest.approx(modulus_brute(f, r, p), rel=1e-12, abs=1e-14)

    def test_profiles_share_sweep(self, rng):
        s = parse_radices("2,3,4,3")
        f = StepFunction(s, random_values(rng, s.size))
        many = modulus_profiles(f, [1, 2, 3.0, INF])
        for p, prof in many.items():
            np.testing.assert_array_equal(prof.omegas, modulus_profile(f, p).omegas)

    @pytest.mark.parametrize("p", [1, 2, INF])
    def test_nonincreasing_and_bounded(self, p):
        s = parse_radices("2^9")
        for f in (gen_lacunary(0.7, s), gen_indicator(4, 3, s), gen_random(1, 6, s)):
            om = modulus_profile(f, p).omegas
            assert np.all(np.diff(om) <= 1e-15)
            assert np.all(om >= 0) and np.all(om <= 2 * lp_norm(f, p) + 1e-12)

    @pytest.mark.parametrize("p", [1, 2, INF])
    def test_partial_sum_within_modulus(self, p):
        s = parse_radices("2,3,2,3,2")
        for f in (gen_lacunary(0.6, s), gen_indicator(3, 5, s), gen_random(9, 5, s)):
            om = modulus_profile(f, p)
            spec = forward(f)
            for r in range(s.level + 1):
                gap = lp_norm(f - partial_sum(spec, s.cumulative[r]), p)
                assert gap <= om[r] + 1e-12

    def test_errors(self):
        s = parse_radices("2^4")
        f = gen_random(0, 4, s)
        with pytest.raises(LevelOutOfRange):
            modulus(f, 5, 1)
        with pytest.raises(OracleCapExceeded):
            modulus_profile(f, 1, cap=8)


class TestBound:
    def test_zero_profile(self):
        s = parse_radices("2^6")
        prof = ModulusProfile(s, INF, np.zeros(7))
        assert theorem_bound(prof, 3, 0.5) == 0.0

    def test_walsh_k2(self):
        s = parse_radices("2^6")
        om = np.array([1.3, 0.7, 0.4, 0.2, 0.1, 0.05, 0.0])
        prof = ModulusProfile(s, INF, om)
        assert theorem_bound(prof, 2, 0.5) == pytest.approx(2 * 0.7 + 0.25 * 1.3, rel=1e-15)

    def test_hand_sum(self):
        s = parse_radices("2^13")
        prof = modulus_profile(gen_lacunary(0.9, s), INF)
        om = prof.omegas
        hand = 32**0.5 * om[4] + om[0] / 32 + 2 * om[1] / 32 + 4 * om[2] / 32 + 8 * om[3] / 32
        assert abs(theorem_bound(prof, 5, 0.5) - hand) <= 1e-14

    def test_range(self):
        s = parse_radices("2^4")
        prof = ModulusProfile(s, INF, np.zeros(5))
        for k in (0, 1, 5):
            with pytest.raises(LevelOutOfRange):
                theorem_bound(prof, k, 0.5)
        with pytest.raises(OutOfRange):
            theorem_bound(prof, 2, 1.0)


class TestError:
    @pytest.mark.parametrize("p", [1, 2, INF])
    def test_constant(self, p):
        s = parse_radices("2,3,2,3")
        for n in (0, 5, 35):
            assert approximation_error(gen_constant(1 - 2j, s), n, 0.4, p) < 1e-13

    @pytest.mark.parametrize("p", [1, 2, INF])
    def test_single_character(self, p):
        s = parse_radices("2,3,2,3")
        alpha = 0.5
        A = cesaro_numbers(-alpha, 35).values
        for j, n in ((3, 3), (3, 10), (14, 30)):
            expected = abs(A[n - j] / A[n] - 1)
            got = approximation_error(character_samples(s, j), n, alpha, p)
            assert got == pytest.approx(expected, rel=1e-12)

    def test_naive_pipeline(self):
        s = parse_radices("(2,3)^4")  # M_N = 1296
        f = gen_random(77, s.level, s)
        n, alpha = 500, 0.35
        coeffs = forward_naive(f).coeffs
        A = cesaro_numbers(-alpha, n).values
        w = np.zeros(s.size)
        w[: n + 1] = A[n::-1] / A[n]
        mean = (w * coeffs) @ character_rows(s, np.arange(s.size))
        for p in (1, 2, INF):
            ref = lp_norm(StepFunction(s, mean - f.values), p)
            assert abs(approximation_error(f, n, alpha, p) - ref) <= 1e-10

    def test_translation_invariant(self, rng):
        s = parse_radices("3,2,4,2")
        f = StepFunction(s, random_values(rng, s.size))
        for _ in range(5):
            h = point_from_label(s, int(rng.integers(s.size)))
            for p in (1, 2, INF):
                a = approximation_error(f, 20, 0.6, p)
                b = approximation_error(translate(f, h), 20, 0.6, p)
                assert abs(a - b) <= 1e-10


class TestConvergence:
    def test_constant(self):
        s = parse_radices("2^8")
        rows = convergence_table(gen_constant(1.0, s), 0.5, INF, range(2, 8))
        assert all(r.error < 1e-13 and r.bound == 0 and r.ratio is None for r in rows)

    def test_lacunary_walsh(self):
        s = parse_radices("2^13")
        rows = convergence_table(gen_lacunary(0.9, s), 0.5, INF, range(3, 13))
        ratios = [r.ratio for r in rows]
        assert max(ratios) / min(ratios) <= 10
        errors = [r.error for r in rows if r.k >= 4]
        assert all(b < a for a, b in zip(errors, errors[1:]))

    def test_rows_respect_levels(self):
        s = parse_radices("2,3,2,3,2")
        f = gen_random(4, 5, s)
        for policy in ("mk", "mk1", "random:3"):
            rows = convergence_table(f, 0.3, 2, [2, 3, 4], policy)
            for r in rows:
                assert s.cumulative[r.k] <= r.n < s.cumulative[r.k + 1]
                assert r.error >= 0 and r.bound > 0

    def test_random_policy_deterministic(self):
        s = parse_radices("2^10")
        assert NPolicy("random", 5).choose(s, range(2, 9)) == NPolicy("random", 5).choose(s, range(2, 9))

    def test_range(self):
        s = parse_radices("2^6")
        with pytest.raises(LevelOutOfRange):
            convergence_table(gen_random(1, 6, s), 0.5, 1, [1, 2])
        with pytest.raises(LevelOutOfRange):
            convergence_table(gen_random(1, 6, s), 0.5, 1, [6])

    def test_policy_parse(self):
        assert parse_n_policy("mk") == NPolicy("mk")
        assert parse_n_policy("random:seed=9") == NPolicy("random", 9)
        with pytest.raises(SpecParseError):
            parse_n_policy("middle")


class TestGenerators:
    def test_lacunary_spectrum(self):
        s = parse_radices("2,3,2,3")
        c = forward(gen_lacunary(0.9, s)).coeffs
        expected = np.zeros(s.size)
        for j in range(s.level):
            expected[s.cumulative[j]] = s.cumulative[j] ** -0.9
        np.testing.assert_allclose(c, expected, atol=1e-14)

    def test_lacunary_decay(self):
        s = parse_radices("2^13")
        beta = 0.9
        om = modulus_profile(gen_lacunary(beta, s), INF).omegas[: s.level]
        slope = np.polyfit(np.log(np.array(s.cumulative[: s.level], float)), np.log(om), 1)[0]
        assert -beta - 0.15 <= slope <= -beta + 0.15

    def test_lacunary_boundary_envelope(self):
        # beta = 1: record the observed constant, nothing asserted about its value
        s = parse_radices("2^10")
        om = modulus_profile(gen_lacunary(1.0, s), INF).omegas
        env = [om[r] * s.cumulative[r] / (r + 1) for r in range(s.level)]
        assert all(math.isfinite(e) for e in env)

    def test_lacunary_beta_range(self):
        with pytest.raises(OutOfRange):
            gen_lacunary(1.5, parse_radices("2^3"))

    def test_indicator(self):
        s = parse_radices("2,3,2,3")
        for r in range(s.level + 1):
            f = gen_indicator(r, s.cumulative[r] - 1, s)
            assert lp_norm(f, 1) == pytest.approx(1 / s.cumulative[r])
            prof = modulus_profile(f, 1)
            for j in range(s.level + 1):
                expected = 0.0 if j >= r else 2 / s.cumulative[r]
                assert prof[j] == pytest.approx(expected, abs=1e-15)

    def test_indicator_range(self):
        s = parse_radices("2,3")
        with pytest.raises(OutOfRange):
            gen_indicator(1, 2, s)

    def test_random(self):
        s = parse_radices("3,2,3,2")
        assert np.array_equal(gen_random(8, 2, s).values, gen_random(8, 2, s).values)
        prof = modulus_profile(gen_random(8, 2, s), INF)
        assert np.all(prof.omegas[2:] == 0) and prof[1] > 0
        f = gen_random(8, 4, s)
        assert np.max(np.abs(inverse(forward(f)).values - f.values)) < 1e-10

    def test_parse_function(self):
        assert str(parse_function("lacunary:beta=0.9")) == "lacunary:beta=0.9"
        spec = parse_function("indicator:r=2,label=1")
        assert spec.kind == "indicator" and spec.params == {"r": "2", "label": "1"}
        with pytest.raises(SpecParseError):
            parse_function("sawtooth")
        with pytest.raises(SpecParseError):
            parse_function("random:seed")
