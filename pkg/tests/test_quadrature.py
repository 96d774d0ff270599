import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinobs import (
    SphericalGrid,
    convergence_report,
    default_grid,
    gaussian_state,
    hydrogenic_state,
    integrate_vector,
    make_coupled_state,
    make_grid,
    pairwise_sum,
    sample_densities,
)
from spinobs.checks import moment_of_curl_gap
from spinobs.quadrature import integrate

GROUND = hydrogenic_state([(1, 0, 0, "up")])


def constant_z(pts):
    out = np.zeros_like(pts)
    out[:, 2] = 1.0
    return out


class TestGrid:
    def test_default_ground_state(self):
        assert default_grid(GROUND) == make_grid(25.0, 80, 16, 16)

    def test_default_n3(self):
        assert default_grid(hydrogenic_state([(3, 2, 1, "up")])).r_max == 225.0

    def test_default_higher_l(self):
        g = default_grid(hydrogenic_state([(6, 5, 5, "up")], Z=2.0))
        assert (g.r_max, g.n_theta, g.n_phi) == (450.0, 26, 18)

    def test_default_gaussian(self):
        assert default_grid(gaussian_state(1.0)).r_max == 12.0
        g = default_grid(gaussian_state(1.0, center=(3.0, 4.0, 0.0), momentum=(0.0, 0.0, 2.0)))
        assert g.r_max == 17.0
        assert g.n_phi >= 8 * 2.0 * 17.0

    @given(r_max=st.floats(0.1, 1000), n_r=st.integers(1, 60), n_t=st.integers(1, 40), n_p=st.integers(1, 40))
    @settings(max_examples=60, deadline=None)
    def test_weights_integrate_ball(self, r_max, n_r, n_t, n_p):
        g = make_grid(r_max, max(n_r, 2), n_t, n_p)
        assert np.all(g.weights > 0)
        assert pairwise_sum(g.weights) == pytest.approx(4 * math.pi / 3 * r_max**3, rel=1e-9)

    def test_interior_nodes(self):
        g = make_grid(10.0, 31, 17, 16)
        r, _ = g.radial_nodes
        th, _ = g.polar_nodes
        assert np.all(r > 0) and np.all(th > 0) and np.all(th < math.pi)

    def test_rejects_bad_sizes(self):
        with pytest.raises(ValueError):
            SphericalGrid(1.0, 0, 4, 4)
        with pytest.raises(ValueError):
            SphericalGrid(-1.0, 4, 4, 4)

    def test_refined(self):
        assert make_grid(5.0, 80, 16, 16).refined() == make_grid(5.0, 120, 24, 24)
        assert make_grid(5.0, 7, 3, 5).refined() == make_grid(5.0, 11, 5, 8)


class TestIntegrate:
    @pytest.mark.parametrize("grid", [make_grid(25.0, 80, 16, 16), make_grid(3.0, 17, 9, 11)])
    def test_constant_field(self, grid):
        val = integrate_vector(constant_z, grid)
        assert val[:2].tolist() == [0.0, 0.0]
        assert val[2] == pytest.approx(4 * math.pi / 3 * grid.r_max**3, rel=1e-9)

    def test_odd_field(self):
        g = make_grid(25.0, 80, 16, 16)
        assert np.max(np.abs(integrate_vector(lambda p: p, g))) < 1e-12 * g.r_max**4

    def test_odd_field_unit_ball(self):
        assert np.max(np.abs(integrate_vector(lambda p: p, make_grid(1.0, 40, 16, 16)))) < 1e-12

    def test_moment_of_curl_ground_state(self):
        def field(pts):
            s = sample_densities(GROUND, pts)
            return np.cross(pts, s.curl_magnetization)

        assert np.allclose(integrate_vector(field, default_grid(GROUND)), [0, 0, 2], atol=1e-8)

    @pytest.mark.parametrize("state", [
        hydrogenic_state([(2, 1, 1, "up")]),
        make_coupled_state(2, 1, 0.5, -0.5),
        hydrogenic_state([(3, 2, 1, "up", 1.0), (3, 2, 1, "down", 1j)]),
        gaussian_state(1.0, spinor=(1.0, 1.0)),
    ])
    def test_moment_of_curl_identity(self, state):
        assert moment_of_curl_gap(state) < 1e-8

    def test_shape_check(self):
        with pytest.raises(ValueError):
            integrate_vector(lambda p: p[:, :2], make_grid(1.0, 4, 4, 4))

    def test_non_finite_integrand_rejected(self):
        with pytest.raises(FloatingPointError):
            integrate(lambda p: np.full(len(p), np.nan), make_grid(1.0, 4, 4, 4))

    @pytest.mark.parametrize("workers", [2, 3, 8])
    def test_bit_identical_across_workers(self, workers):
        state = make_coupled_state(3, 2, 1.5, 0.5)
        g = default_grid(state)

        def field(pts):
            return np.cross(pts, sample_densities(state, pts).momentum_density)

        assert integrate_vector(field, g, workers=1).tobytes() == integrate_vector(field, g, workers=workers).tobytes()

    def test_env_var_workers(self, monkeypatch):
        g = default_grid(GROUND)
        base = integrate_vector(lambda p: np.cross(p, sample_densities(GROUND, p).mass_current), g)
        monkeypatch.setenv("SPINOBS_THREADS", "4")
        again = integrate_vector(lambda p: np.cross(p, sample_densities(GROUND, p).mass_current), g)
        assert base.tobytes() == again.tobytes()


class TestPairwiseSum:
    @given(st.lists(st.floats(-1e6, 1e6), min_size=0, max_size=300))
    def test_matches_fsum(self, xs):
        got = pairwise_sum(np.array(xs, dtype=float))
        assert got == pytest.approx(math.fsum(xs), abs=1e-6)

    def test_fixed_tree(self):
        assert pairwise_sum(np.array([1.0, 2.0, 3.0])) == 6.0
        # ((1e16 + 1) + (-1e16 + 1)) under the tree, versus left-to-right 1
        assert pairwise_sum(np.array([1e16, 1.0, -1e16, 1.0])) == 0.0


class TestConvergence:
    def test_norm_of_ground_state(self):
        def field(p):
            return sample_densities(GROUND, p).rho

        val, est = convergence_report(field, default_grid(GROUND))
        assert val == pytest.approx(1.0, abs=1e-12)
        assert est <= 1e-10

    def test_x_cross_g_ground_state(self):
        def field(p):
            s = sample_densities(GROUND, p)
            return np.cross(p, s.momentum_density)

        val, est = convergence_report(field, default_grid(GROUND))
        assert est <= 1e-8
        assert val[2] == pytest.approx(0.5, abs=1e-10)

    def test_coarse_grid_flagged(self):
        state = hydrogenic_state([(3, 1, 1, "up")])
        g = default_grid(state)
        coarse = make_grid(g.r_max, 8, g.n_theta, g.n_phi)

        def field(p):
            return sample_densities(state, p).rho

        _, est = convergence_report(field, coarse)
        assert est > 1e-4

    def test_doubling_rmax_negligible(self):
        def field(p):
            return np.cross(p, sample_densities(GROUND, p).momentum_density)

        a = integrate_vector(field, make_grid(25.0, 80, 16, 16))
        b = integrate_vector(field, make_grid(50.0, 160, 16, 16))
        assert np.max(np.abs(a - b)) < 1e-12
