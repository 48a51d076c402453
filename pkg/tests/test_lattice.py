import math

import numpy as np
import pytest

import oracles
from hypwalk import halfplane
from hypwalk.boundary import busemann
from hypwalk.lattice import (
    Gamma2,
    Horoball,
    IsometryH2,
    WordError,
    evaluate,
    group_fixture,
    inverse_word,
    point_of_word,
    reduce_word,
    word_from_str,
    word_to_str,
    words_of_length_upto,
)


class TestWords:
    def test_reduce_examples(self):
        assert reduce_word((1, -1)) == ()
        assert reduce_word((1, 2, -2, 1)) == (1, 1)

    def test_reduce_idempotent(self, rng):
        for _ in range(200):
            w = tuple(rng.choice([1, -1, 2, -2], size=rng.integers(0, 12)))
            assert reduce_word(reduce_word(w)) == reduce_word(w)

    def test_str_roundtrip(self):
        for w in [(), (1,), (1, 1, 1), (-2, -2), (1, -2, 1, -2), (2,) * 40 + (1,)]:
            assert word_from_str(word_to_str(w)) == reduce_word(w)
        assert word_to_str((1, 1, 1)) == "a^3"
        assert word_to_str((1, -2)) == "ab^-1"
        assert word_from_str("a^-3b^2") == (-1, -1, -1, 2, 2)
        assert word_from_str("e") == ()

    def test_str_rejects_garbage(self):
        with pytest.raises(WordError):
            word_from_str("xyz")
        with pytest.raises(WordError):
            word_from_str("a^")


class TestEvaluate:
    def test_identity(self):
        assert evaluate(()).m == ((1, 0), (0, 1))

    def test_generator_matrices(self):
        assert evaluate((1,)).m == ((1, 2), (0, 1))
        assert evaluate((2,)).m == ((1, 0), (2, 1))

    def test_product_example(self):
        assert evaluate((1, 2)).m == ((5, 2), (2, 1))

    def test_homomorphism_random(self, rng):
        for _ in range(1000):
            u = tuple(rng.choice([1, -1, 2, -2], size=rng.integers(0, 8)))
            v = tuple(rng.choice([1, -1, 2, -2], size=rng.integers(0, 8)))
            lhs = evaluate(reduce_word(u + v)).m
            rhs = (evaluate(u) @ evaluate(v)).m
            assert lhs == rhs  # exact integer equality

    def test_det_one(self, rng):
        for _ in range(50):
            w = tuple(rng.choice([1, -1, 2, -2], size=6))
            assert evaluate(reduce_word(w)).det() == 1


class TestOrbit:
    def test_sizes(self, gamma2):
        for N in (0, 1, 2, 3):
            orbit = gamma2.orbit(N=N)
            assert len(orbit) == 2 * 3**N - 1

    def test_depth_one_points(self, gamma2):
        orbit = gamma2.orbit(N=1)
        expected = [1j, 2 + 1j, -2 + 1j, (2 + 1j) / 5, (-2 + 1j) / 5]
        assert np.allclose(orbit.points, expected, atol=1e-12)

    def test_free_action_no_duplicates(self, gamma2):
        orbit = gamma2.orbit(N=4)
        pts = orbit.points
        min_sep = math.inf
        for i in range(len(pts)):
            d2 = np.abs(pts - pts[i]) ** 2 / (2 * pts.imag * pts[i].imag)
            d2[i] = math.inf
            min_sep = min(min_sep, d2.min())
        assert min_sep > 1e-6

    def test_min_separation_constant(self, gamma2):
        assert gamma2.min_separation() == pytest.approx(math.acosh(3.0), abs=1e-12)

    def test_point_of_word_blocks(self, gamma2):
        # long parabolic runs evaluate without overflow
        z = point_of_word((1,) * 1000)
        assert z == pytest.approx(2000 + 1j)
        w = (2,) * 500 + (1,)
        m = evaluate(w)
        assert point_of_word(w) == pytest.approx(m.apply(1j), abs=1e-9)


class TestCellReduction:
    def test_against_brute_force(self, gamma2, rng):
        ball = oracles.brute_orbit_ball(12.0)
        for trial in range(120):
            kind = trial % 4
            if kind == 0:
                z = complex(rng.uniform(-3, 3), math.exp(rng.uniform(math.log(0.05), math.log(3))))
            elif kind == 1:
                z = complex(rng.uniform(-1e-3, 1e-3), math.exp(rng.uniform(math.log(1e-5), -5)))
            elif kind == 2:
                z = complex(1 + rng.uniform(-2e-3, 2e-3), math.exp(rng.uniform(math.log(1e-5), -5)))
            else:
                z = complex(rng.uniform(-2, 2), math.exp(rng.uniform(0.5, 5)))
            zr, w, d = gamma2.reduce_point(z)
            d_brute, _ = oracles.brute_nearest(ball, zr)
            assert d_brute >= d - 1e-9  # no enumerated site beats the cell center

    def test_word_tracks_position(self, gamma2, rng):
        for _ in range(40):
            z = complex(rng.uniform(-4, 4), math.exp(rng.uniform(-3, 2)))
            zr, w, d = gamma2.reduce_point(z)
            back = evaluate(w).apply(zr)
            assert back == pytest.approx(z, abs=1e-8 * max(1.0, abs(z)))


class TestBusemannMin:
    def test_cusp_minimizers(self, gamma2):
        xi = halfplane.boundary_point(math.inf)
        orbit = gamma2.orbit(N=6)
        words, vmin = gamma2.busemann_min_over_orbit(xi, orbit)
        assert vmin == pytest.approx(0.0, abs=1e-12)
        assert sorted(words) == sorted(
            [()] + [(1,) * n for n in range(1, 7)] + [(-1,) * n for n in range(1, 7)]
        )

    def test_single_point_orbit(self, gamma2):
        xi = halfplane.boundary_point(0.5)
        orbit = gamma2.orbit(N=0)
        words, vmin = gamma2.busemann_min_over_orbit(xi, orbit)
        assert words == [()]
        assert vmin == pytest.approx(busemann(halfplane.to_point(1j), xi), abs=1e-12)

    def test_generic_boundary_single_minimizer(self, gamma2):
        xi = halfplane.boundary_point(math.sqrt(2) - 0.1)  # irrational-ish direction
        orbit = gamma2.orbit(N=5)
        words, vmin = gamma2.busemann_min_over_orbit(xi, orbit)
        assert len(words) == 1


class TestHoroballs:
    def test_unit_horoball_precisely_invariant(self, gamma2):
        B = Horoball.at_infinity(1.0)
        rep = gamma2.horoball_precisely_invariant(B, N=8)
        assert rep.invariant
        assert rep.checked_words == 2 * 3**8 - 1

    def test_large_horoball_violated_by_b(self, gamma2):
        B = Horoball.at_infinity(0.1)
        rep = gamma2.horoball_precisely_invariant(B, N=4)
        assert not rep.invariant
        assert rep.witness == (2,)

    def test_translations_fix_exactly(self, gamma2):
        B = Horoball.at_infinity(1.0)
        for w in [(1,), (-1,), (1, 1, 1)]:
            gB = gamma2.horoball_image(B, w)
            assert gamma2.horoballs_equal(gB, B)

    def test_image_levels(self, gamma2):
        # b maps the horoball at infinity to one at 1/2 tangent from below
        B = Horoball.at_infinity(1.0)
        gB = gamma2.horoball_image(B, (2,))
        assert not gamma2.horoballs_equal(gB, B)
        assert not gamma2.horoballs_intersect(gB, B)


class TestLimitSet:
    def test_depth_zero_gap(self, gamma2):
        angles, gap = gamma2.limit_set_directions(gamma2.orbit(N=0))
        assert gap == pytest.approx(2 * math.pi)
        assert len(angles) == 0

    def test_gap_monotone(self, gamma2):
        gaps = [gamma2.limit_set_directions(gamma2.orbit(N=n))[1] for n in (1, 2, 3, 4)]
        assert all(gaps[i + 1] <= gaps[i] + 1e-12 for i in range(3))

    def test_depth_eight_gap(self, gamma2):
        _, gap = gamma2.limit_set_directions(gamma2.orbit(N=8))
        assert gap <= 0.35


class TestEquivariance:
    def test_busemann_cocycle_under_group(self, gamma2, rng):
        origin = gamma2.origin_point()
        for w in [(1,), (2,), (1, -2), (2, 2, 1)]:
            U = halfplane.sl2_to_isometry(evaluate(w).m)
            theta = rng.uniform(0, 2 * math.pi)
            xi = halfplane.boundary_point_angle(theta)
            gxi = halfplane.apply_isometry3(U, xi, origin)
            shifts = []
            for _ in range(8):
                z = complex(rng.uniform(-2, 2), math.exp(rng.uniform(-1, 1)))
                gz = evaluate(w).apply(z)
                shifts.append(busemann(halfplane.to_point(gz), gxi)
                              - busemann(halfplane.to_point(z), xi))
            assert max(shifts) - min(shifts) <= 1e-9

    def test_isometry_matrix_preserves_form(self, gamma2):
        J = np.diag([1.0, 1.0, -1.0])
        for w in [(1,), (2,), (1, 2, -1), (2, -1, 2, 2)]:
            U = halfplane.sl2_to_isometry(evaluate(w).m)
            assert np.allclose(U.T @ J @ U, J, atol=1e-9)


def test_orbit_ball_complete_against_brute(gamma2):
    mine = {w for w, _ in gamma2.orbit_ball(6.0)}
    brute = {w for w, _ in oracles.brute_orbit_ball(6.0, slack=6.0)}
    assert mine == brute


def test_group_fixture_registry():
    assert group_fixture("gamma2") is group_fixture("gamma2")
    with pytest.raises(WordError):
        group_fixture("psl3")
