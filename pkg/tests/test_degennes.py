import numpy as np
import pytest

import dgl1d
from dgl1d import degennes, errors, kernel
from dgl1d.kernel import GridSpec

XI_SET = (0.0, 0.5, 0.7681836531391657, 1.0, 1.33, 1.5, 2.0)


def fd_oracle_mu1(xi, t_max, n):
    """Standalone second-order Neumann discretization, independent of the
    module's own builder (no safeguarded solver, no extrapolation)."""
    t, h = np.linspace(0.0, t_max, n, retstep=True)
    d = 2.0 / h**2 + (t - xi) ** 2
    e = np.full(n - 2, -1.0 / h**2)
    e[0] = -np.sqrt(2.0) / h**2
    import scipy.linalg
    return scipy.linalg.eigh_tridiagonal(
        d[:-1], e, select="i", select_range=(0, 0), eigvals_only=True)[0]


class TestSpectralAnchors:
    @pytest.mark.parametrize("j,xi,expected", [
        (1, 0.0, 1.0), (2, 0.0, 5.0), (2, 1.0, 3.0), (3, np.sqrt(2.5), 5.0)])
    def test_neumann(self, j, xi, expected):
        assert degennes._mu_value(j, xi) == pytest.approx(expected, abs=1e-9)
        r = degennes.mu(j, xi, method="finite_difference")
        assert r.mu == pytest.approx(expected, abs=1e-4)

    @pytest.mark.parametrize("j,expected", [(1, 3.0), (2, 7.0)])
    def test_dirichlet_at_zero(self, j, expected):
        assert degennes.dirichlet_mu(j, 0.0) == pytest.approx(expected, abs=1e-4)

    def test_dirichlet_large_offset(self):
        val = degennes.dirichlet_mu(1, 4.0)
        assert 1.0 < val < 3.0
        assert val == pytest.approx(1.0, abs=1e-3)

    def test_dirichlet_decreasing(self):
        vals = [degennes.dirichlet_mu(1, xi) for xi in (0.0, 0.5, 1.0, 2.0, 3.0)]
        assert np.all(np.diff(vals) < 0)


class TestDualMethod:
    @pytest.mark.parametrize("j", [1, 2])
    def test_agreement(self, j):
        for xi in XI_SET:
            a = degennes._mu_value(j, xi)
            b = degennes.mu(j, xi, method="finite_difference").mu
            assert abs(a - b) <= 1e-6, (j, xi, a, b)

    def test_fd_oracle_at_minimum(self):
        # low-level oracle run before trusting the main build
        a = fd_oracle_mu1(0.7681, 12.7681, 8001)
        assert a == pytest.approx(0.5901, abs=1e-3)
        assert degennes._mu_value(1, 0.7681) == pytest.approx(0.59010612, abs=1e-6)


class TestEigenResult:
    @pytest.mark.parametrize("method", ["characteristic", "finite_difference"])
    @pytest.mark.parametrize("j,xi", [(1, 0.7), (2, 1.3)])
    def test_invariants(self, method, j, xi):
        r = degennes.mu(j, xi, method=method)
        w = r.grid.weights()
        assert np.dot(w, r.u * r.u) == pytest.approx(1.0, abs=1e-8)
        assert r.u[0] > 0
        h = r.grid.h
        one_sided = (-3.0 * r.u[0] + 4.0 * r.u[1] - r.u[2]) / (2.0 * h)
        du = np.gradient(r.u, h, edge_order=2)
        norm_du = np.sqrt(np.dot(w, du * du))
        assert abs(one_sided) <= 1e-5 * norm_du

    def test_strict_ordering(self):
        for xi in (0.0, 0.8, 1.6):
            vals = [degennes._mu_value(j, xi) for j in (1, 2, 3)]
            assert vals[0] < vals[1] < vals[2]

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            degennes.mu(4, 0.0)
        with pytest.raises(ValueError):
            degennes.mu(1, 11.0)
        with pytest.raises(ValueError):
            degennes.mu(1, 0.0, method="shooting")


class TestDerivative:
    def test_zero_at_minimum(self, constants):
        assert degennes.mu_prime(1, constants.xi0) == pytest.approx(0.0, abs=1e-6)

    def test_sign_at_origin(self):
        # value is -(u(0))^2 < 0 since the eigenvalue exceeds the offset square
        val = degennes.mu_prime(1, 0.0)
        assert val < 0
        # ground state at zero offset is sqrt(2) pi^{-1/4} exp(-t^2/2)
        assert val == pytest.approx(-2.0 / np.sqrt(np.pi), abs=1e-6)

    def test_boundary_formula_oracle(self):
        r = degennes.mu(2, 0.5)
        expected = (0.25 - r.mu) * r.u0() ** 2
        assert degennes.mu_prime(2, 0.5) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("j,xi", [(1, 0.0), (1, 0.5), (1, 1.2), (2, 0.5), (2, 1.3)])
    def test_three_way_agreement(self, j, xi):
        dh = degennes.mu_prime(j, xi)
        fh = degennes.mu_prime_moment(j, xi)
        eps = 5e-6
        fd = (degennes._mu_value(j, xi + eps) - degennes._mu_value(j, xi - eps)) / (2 * eps)
        assert abs(dh - fh) <= 1e-6
        assert abs(dh - fd) <= 1e-5
        assert abs(fh - fd) <= 1e-5

    def test_single_sign_change_of_mu1_prime(self):
        xs = np.linspace(0.0, 2.0, 41)
        signs = np.sign([degennes.mu_prime(1, float(x)) for x in xs])
        flips = np.sum(np.abs(np.diff(signs)) > 0)
        assert flips == 1


class TestUniversalConstants:
    def test_theta0(self, constants):
        assert constants.theta0 == pytest.approx(0.59, abs=0.005)
        assert constants.theta0 == pytest.approx(constants.xi0 ** 2, abs=1e-12)
        assert 0.5 < constants.theta0 < 1.0
        # the located root is the bottom of the first eigenvalue curve
        assert degennes._mu_value(1, constants.xi0) == pytest.approx(
            constants.theta0, abs=1e-8)

    def test_higher_minima(self, constants):
        assert constants.xi0_2 == pytest.approx(1.62, abs=0.01)
        assert constants.mu2_min == pytest.approx(2.64, abs=0.01)
        assert constants.xi0_3 == pytest.approx(2.16, abs=0.01)
        assert constants.mu3_min == pytest.approx(4.65, abs=0.01)
        assert degennes._mu_value(2, constants.xi0_2) == pytest.approx(
            constants.mu2_min, abs=1e-9)

    def test_crossing_points(self, constants):
        assert constants.xihat2 == pytest.approx(1.0, abs=1e-8)
        assert constants.xihat3 == pytest.approx(np.sqrt(2.5), abs=1e-8)

    def test_minimizer_windows(self, constants):
        for j, xi0j in ((2, constants.xi0_2), (3, constants.xi0_3)):
            assert 0.0 < xi0j < np.sqrt(2 * j - 1)

    def test_quartic_norm(self, constants):
        assert constants.u1_l4_fourth == pytest.approx(0.584, abs=0.002)
        limit = 4.0 / (9.0 * constants.xi0)
        assert limit == pytest.approx(0.579, abs=0.002)
        assert constants.u1_l4_fourth >= limit


class TestAnalyticBounds:
    def test_all_pass(self):
        reports = degennes.analytic_lower_bounds()
        assert reports and all(r.passed for r in reports)

    def test_bound_values(self, constants):
        assert 2.0 ** 3.5 / 3.0 ** 1.5 == pytest.approx(2.18, abs=0.01)
        s17 = np.sqrt(17.0)
        xi3_lb = np.sqrt(5) * (2 + np.sqrt(26 - 6 * s17)) / (30 - 6 * s17) ** 0.75
        assert xi3_lb == pytest.approx(2.01, abs=0.01)
        assert (13.0 - 3.0 * s17) / 2.0 == pytest.approx(0.32, abs=0.01)
        mu3_lb = 5 * (2 + np.sqrt(26 - 6 * s17)) ** 2 / (30 - 6 * s17) ** 1.5
        assert mu3_lb == pytest.approx(4.04, abs=0.01)
        assert constants.mu2_min >= 2.0 ** 3.5 / 3.0 ** 1.5
        assert constants.xi0_3 >= xi3_lb
        assert constants.mu3_min >= mu3_lb


class TestVirial:
    def test_at_minimum(self, constants):
        v = degennes.virial_check(1, constants.xi0)
        half = 0.5 * constants.theta0
        assert v.kinetic == pytest.approx(half, abs=1e-6)
        assert v.potential == pytest.approx(half, abs=1e-6)

    def test_at_origin(self):
        v = degennes.virial_check(1, 0.0)
        assert v.kinetic == pytest.approx(0.5, abs=1e-6)
        assert v.potential == pytest.approx(0.5, abs=1e-6)

    def test_excited_state(self):
        v = degennes.virial_check(2, 1.3)
        assert abs(v.margins[0]) <= 1e-6
        assert abs(v.margins[1]) <= 1e-6


class TestAsymptotics:
    def test_decay_in_offset(self):
        checks = {xi: degennes.asymptotic_check(float(xi)) for xi in (3, 4, 5, 6)}
        for xi in (3, 4, 5):
            assert checks[xi + 1].sup_deviation < checks[xi].sup_deviation
            assert checks[xi + 1].mu_gap < checks[xi].mu_gap

    def test_fd_gap_at_5(self):
        r = degennes.mu(1, 5.0, method="finite_difference")
        assert abs(r.mu - 1.0) < 1e-6

    def test_l2_distance_at_6(self):
        assert degennes.asymptotic_check(6.0).l2_deviation < 1e-5

    def test_regime_validation(self):
        with pytest.raises(ValueError):
            degennes.asymptotic_check(2.0)


class TestLevelInterval:
    def test_interval_at_08(self, constants):
        xi1, xi2 = degennes.mu1_level_interval(0.8)
        assert xi1 < constants.xi0 < xi2
        assert xi2 == pytest.approx(1.496, abs=2e-3)
        assert degennes._mu_value(1, xi1) == pytest.approx(0.8, abs=1e-9)

    def test_unbounded_at_one(self):
        xi1, xi2 = degennes.mu1_level_interval(1.0)
        assert xi1 == pytest.approx(0.0, abs=1e-8)
        assert np.isinf(xi2)


class TestMonotonicity:
    def test_mu2_decreasing_before_minimum(self, constants):
        xs = np.linspace(0.0, constants.xi0_2, 17)
        vals = [degennes._mu_value(2, float(x)) for x in xs]
        assert np.all(np.diff(vals) < 0)

    def test_mu2_prime_below_line(self):
        # needed for the numerator monotonicity in the grid certification
        for x in np.linspace(0.0, 1.0, 11):
            assert degennes.mu_prime(2, float(x)) < 2.0 * (float(x) - 1.0)
