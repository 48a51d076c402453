import math

import numpy as np
import pytest

import oracles
from hypwalk import brownian, halfplane
from hypwalk.lattice import point_of_word, reduce_word, word_from_str
from hypwalk.walk import (
    GreenEstimate,
    MeasureFamily,
    WalkError,
    adaptedness_deviation,
    green,
    harmonicity_defect,
    is_nondegenerate,
    martin_k,
    step_sample,
)

SRW = MeasureFamily.uniform_generators()


class TestMeasureFamily:
    def test_validation(self):
        with pytest.raises(WalkError):
            MeasureFamily({(1,): 0.5, (2,): 0.6})
        with pytest.raises(WalkError):
            MeasureFamily({(1,): -0.1, (2,): 1.1})

    def test_words_reduced(self):
        mu = MeasureFamily({(1, -1, 2): 1.0})
        assert list(mu.base) == [(2,)]

    def test_uniform_flag(self):
        assert SRW.is_uniform_generators
        assert not MeasureFamily({(1,): 0.5, (-1,): 0.5}).is_uniform_generators

    def test_json_roundtrip(self):
        mu = MeasureFamily({(1,): 0.25, (2, 2): 0.75})
        assert MeasureFamily.from_json_rows(mu.json_rows()).base == mu.base

    def test_sample_frequencies(self, rng):
        mu = MeasureFamily({(1,): 0.4, (-1,): 0.3, (2,): 0.2, (-2,): 0.1})
        n = 100000
        counts = {}
        for _ in range(n):
            w = mu.sample(rng)
            counts[w] = counts.get(w, 0) + 1
        for w, p in mu.base.items():
            se = math.sqrt(p * (1 - p) / n)
            assert abs(counts[w] / n - p) <= 3 * se


class TestStepSample:
    def test_delta_measure(self, rng):
        mu = MeasureFamily({(1,): 1.0})
        assert step_sample(mu, (), rng) == (1,)

    def test_reduction_on_step(self, rng):
        mu = MeasureFamily({(-1,): 1.0})
        assert step_sample(mu, (1,), rng) == ()

    def test_inverse_probability(self, rng):
        hits = sum(step_sample(SRW, (1,), rng) == () for _ in range(20000))
        assert abs(hits / 20000 - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / 20000)


class TestGreen:
    def test_tree_values_against_catalan_oracle(self):
        for level, N in ((0, 60), (1, 60), (0, 24), (2, 40)):
            target = () if level == 0 else (1,) * level
            mine = green(SRW, (), target, N).value
            assert mine == pytest.approx(oracles.catalan_green(level, N), abs=1e-12)

    def test_closed_form_limits(self):
        for level, target in ((0, ()), (1, (1,)), (2, (2, 1))):
            assert green(SRW, (), target, 70).value == pytest.approx(
                oracles.tree_green_exact(level), abs=1e-6)

    def test_monotone_in_horizon(self):
        vals = [green(SRW, (), (), N).value for N in (10, 20, 40, 60)]
        assert all(vals[i] < vals[i + 1] for i in range(len(vals) - 1))

    def test_equivariance_exact(self):
        for x in [(1,), (2, -1), (1, 2, 1)]:
            assert green(SRW, x, x, 30).value == green(SRW, (), (), 30).value

    def test_dp_matches_path_enumeration(self):
        mu = MeasureFamily({(1,): 0.4, (-1,): 0.2, (2,): 0.25, (-2,): 0.15})
        laws = oracles.path_enumeration_distribution(mu.base, 6)
        for target in [(), (1,), (1, 2), (2, 2, 2)]:
            expect = sum(law.get(target, 0.0) for law in laws)
            assert green(mu, (), target, 6).value == pytest.approx(expect, abs=1e-13)

    def test_sphere_average_matches_dp_oracle(self):
        # the sphere-averaged fast path against brute-force path enumeration
        laws = oracles.path_enumeration_distribution(SRW.base, 8)
        for target in [(), (1,), (-2, 1)]:
            expect = sum(law.get(target, 0.0) for law in laws)
            assert green(SRW, (), target, 8).value == pytest.approx(expect, abs=1e-13)

    def test_green_markov_identity(self):
        # sum_y mu(y) g_N(y, z) = g_{N+1}(x, z) - delta_{xz}
        mu = MeasureFamily({(1,): 0.5, (-2,): 0.5})
        for x, z in [((), ()), ((), (1,)), ((2,), (2,))]:
            N = 6
            lhs = sum(p * green(mu, reduce_word(x + w), z, N).value
                      for w, p in mu.base.items())
            rhs = green(mu, x, z, N + 1).value - (1.0 if x == z else 0.0)
            assert lhs == pytest.approx(rhs, abs=1e-13)

    def test_symmetric_measure_transpose(self):
        mu = MeasureFamily({(1,): 0.3, (-1,): 0.3, (2,): 0.2, (-2,): 0.2})
        for w in [(1,), (1, 2), (2, -1)]:
            winv = tuple(-g for g in reversed(w))
            assert green(mu, (), w, 10).value == pytest.approx(
                green(mu, (), winv, 10).value, abs=1e-13)

    def test_bad_horizon(self):
        with pytest.raises(WalkError):
            green(SRW, (), (), -1)

    def test_estimate_fields(self):
        est = green(SRW, (), (), 10)
        assert isinstance(est, GreenEstimate)
        assert est.method == "sphere-average"
        assert est.pruned_mass == 0.0


class TestMartinKernel:
    def test_base_normalization(self):
        for y in [(1,), (2, 2)]:
            assert martin_k(SRW, (), y, 40) == 1.0

    def test_tree_value(self):
        assert martin_k(SRW, (1,), (1,), 40) == pytest.approx(3.0, abs=1e-3)

    def test_zero_denominator_raises(self):
        mu = MeasureFamily({(1,): 1.0})
        with pytest.raises(WalkError, match="horizon"):
            martin_k(mu, (), (2,), 10)


class TestHarmonicityDefect:
    def test_uniform_generator_value(self, gamma2):
        xi = halfplane.boundary_point(math.inf)
        assert harmonicity_defect(SRW, xi, (), gamma2) == pytest.approx(-0.4, abs=1e-12)

    def test_degenerate_translation_measure(self, gamma2):
        xi = halfplane.boundary_point(math.inf)
        mu = MeasureFamily({(1,): 0.5, (-1,): 0.5})
        assert harmonicity_defect(mu, xi, (), gamma2) == pytest.approx(0.0, abs=1e-12)

    def test_strictly_negative_at_minimizers(self, gamma2, rng):
        xi = halfplane.boundary_point(math.inf)
        orbit = gamma2.orbit(N=4)
        minimizers, _ = gamma2.busemann_min_over_orbit(xi, orbit)
        mu = MeasureFamily({(1,): 0.3, (-1,): 0.2, (2,): 0.25, (-2,): 0.15, (1, 2): 0.1})
        for w in minimizers:
            assert harmonicity_defect(mu, xi, w, gamma2) < -1e-6


class TestAdaptedness:
    def test_base_pair_contributes_zero(self, gamma2):
        assert adaptedness_deviation(SRW, [((), (1,))], 40, gamma2) == pytest.approx(
            abs(1.0 - 1.0), abs=1e-12)

    def test_srw_not_adapted(self, gamma2):
        words = [w for w in map(tuple, [[1], [2], [1, 2], [2, -1], [1, 1, 1]])]
        pairs = [(x, y) for x in [(), (1,)] for y in words if y != x]
        dev = adaptedness_deviation(SRW, pairs, 40, gamma2)
        assert dev > 0.1

    def test_regression_value(self, gamma2):
        # frozen from the sphere-average evaluation over all word pairs <= 3
        from hypwalk.lattice import words_of_length_upto

        words = words_of_length_upto(3)
        pairs = [(x, y) for x in words for y in words if y and y != x]
        dev = adaptedness_deviation(SRW, pairs, 40, gamma2)
        assert dev == pytest.approx(25.302650154499265, rel=1e-9)

    def test_identity_target_rejected(self, gamma2):
        with pytest.raises(WalkError):
            adaptedness_deviation(SRW, [((), ())], 10, gamma2)


class TestNondegeneracy:
    def test_uniform_generators(self):
        rep = is_nondegenerate(SRW, 4)
        assert rep.nondegenerate and rep.group_generates

    def test_point_mass_at_identity(self):
        rep = is_nondegenerate(MeasureFamily({(): 1.0}), 6)
        assert not rep.nondegenerate and not rep.group_generates

    def test_positive_generators_only(self):
        # {a, b} generates the group but not the semigroup
        rep = is_nondegenerate(MeasureFamily({(1,): 0.5, (2,): 0.5}), 6)
        assert not rep.nondegenerate
        assert rep.group_generates
