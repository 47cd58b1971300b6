import math

import numpy as np
import pytest
from scipy.integrate import quad

from equilag.elliptic import complete_K, incomplete_J, jacobi


def oracle_J(theta: float, k: float) -> float:
    """Direct adaptive quadrature of the defining integral."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # epsabs is at the roundoff floor
        val, err = quad(
            lambda a: 1.0 / math.sqrt(1.0 - (k * math.sin(a)) ** 2),
            0.0,
            theta,
            epsabs=1e-14,
            epsrel=1e-14,
            limit=400,
        )
    assert err < 1e-13
    return val


class TestCompleteK:
    def test_circular_limit(self):
        assert complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)

    def test_against_quadrature(self):
        assert abs(complete_K(0.5) - oracle_J(math.pi / 2, 0.5)) < 1e-12

    def test_strictly_increasing(self):
        ks = np.linspace(0.0, 0.99, 50)
        vals = [complete_K(k) for k in ks]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[0] >= math.pi / 2 - 1e-15

    @pytest.mark.parametrize("k", [1.0, 1.5, -0.1, float("nan")])
    def test_domain_errors(self, k):
        with pytest.raises(ValueError):
            complete_K(k)


class TestIncompleteJ:
    def test_trivial_values(self):
        assert incomplete_J(math.pi / 2, 0.0) == pytest.approx(math.pi / 2, abs=1e-14)
        assert incomplete_J(0.0, 0.7) == 0.0

    def test_against_quadrature(self):
        assert abs(incomplete_J(math.pi / 4, 0.5) - oracle_J(math.pi / 4, 0.5)) < 1e-12

    @pytest.mark.filterwarnings("ignore::UserWarning")
    def test_random_against_quadrature(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            theta = rng.uniform(-4.0, 4.0)
            k = rng.uniform(0.0, 0.99)
            assert abs(incomplete_J(theta, k) - oracle_J(theta, k)) < 1e-11

    def test_complete_consistency(self):
        for k in (0.1, 0.5, 0.9, 0.99):
            assert abs(incomplete_J(math.pi / 2, k) - complete_K(k)) < 1e-13

    def test_odd(self):
        for theta in (0.2, 1.1, 2.9):
            assert incomplete_J(-theta, 0.6) == pytest.approx(
                -incomplete_J(theta, 0.6), abs=1e-13
            )

    def test_quasi_periodicity(self):
        k = 0.6
        twoK = 2.0 * complete_K(k)
        for theta in (-1.0, 0.3, 1.2):
            assert incomplete_J(theta + math.pi, k) == pytest.approx(
                incomplete_J(theta, k) + twoK, abs=1e-12
            )

    def test_domain_error(self):
        with pytest.raises(ValueError):
            incomplete_J(0.3, 1.0)


class TestJacobi:
    def test_origin(self):
        assert jacobi(0.0, 0.5) == (0.0, 1.0, 1.0)

    def test_circular_limit(self):
        sn, cn, dn = jacobi(1.0, 0.0)
        assert sn == pytest.approx(math.sin(1.0), abs=1e-15)
        assert cn == pytest.approx(math.cos(1.0), abs=1e-15)
        assert dn == 1.0

    def test_hyperbolic_limit(self):
        sn, cn, dn = jacobi(0.5, 1.0)
        assert sn == pytest.approx(math.tanh(0.5), abs=1e-15)
        assert cn == pytest.approx(1.0 / math.cosh(0.5), abs=1e-15)
        assert dn == pytest.approx(1.0 / math.cosh(0.5), abs=1e-15)

    def test_quarter_period(self):
        k = 0.5
        sn, cn, dn = jacobi(complete_K(k), k)
        assert sn == pytest.approx(1.0, abs=1e-12)
        assert cn == pytest.approx(0.0, abs=1e-12)
        assert dn == pytest.approx(math.sqrt(1.0 - k * k), abs=1e-12)

    def test_pythagorean_identities(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            k = rng.uniform(0.0, 0.999)
            z = rng.uniform(-30.0, 30.0)
            sn, cn, dn = jacobi(z, k)
            assert abs(sn * sn + cn * cn - 1.0) < 1e-12
            assert abs(k * k * sn * sn + dn * dn - 1.0) < 1e-12
            assert abs(sn) <= 1.0 + 1e-15
            assert dn >= math.sqrt(1.0 - k * k) - 1e-12

    def test_derivatives_by_finite_differences(self):
        rng = np.random.default_rng(11)
        h = 1e-5
        for _ in range(50):
            k = rng.uniform(0.05, 0.95)
            z = rng.uniform(-5.0, 5.0)
            sp = jacobi(z + h, k)
            sm = jacobi(z - h, k)
            sn, cn, dn = jacobi(z, k)
            assert (sp.sn - sm.sn) / (2 * h) == pytest.approx(cn * dn, abs=1e-6)
            assert (sp.cn - sm.cn) / (2 * h) == pytest.approx(-sn * dn, abs=1e-6)
            assert (sp.dn - sm.dn) / (2 * h) == pytest.approx(-k * k * sn * cn, abs=1e-6)

    def test_inverts_incomplete_J(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            theta = rng.uniform(-math.pi / 2 + 0.01, math.pi / 2 - 0.01)
            k = rng.uniform(0.0, 0.95)
            assert jacobi(incomplete_J(theta, k), k).sn == pytest.approx(
                math.sin(theta), abs=1e-10
            )

    def test_periodicity_4K(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            k = rng.uniform(0.05, 0.95)
            z = rng.uniform(-10.0, 10.0)
            K4 = 4.0 * complete_K(k)
            a = jacobi(z, k)
            b = jacobi(z + K4, k)
            assert np.allclose(a, b, atol=1e-10)

    def test_dn_periodicity_2K(self):
        k = 0.7
        twoK = 2.0 * complete_K(k)
        for z in (-1.3, 0.2, 2.7):
            assert jacobi(z + twoK, k).dn == pytest.approx(jacobi(z, k).dn, abs=1e-11)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            jacobi(0.3, 1.2)
        with pytest.raises(ValueError):
            jacobi(float("inf"), 0.5)

    def test_accuracy_against_scipy(self):
        # independent reference implementation as oracle; target ~1e-13
        # for k <= 0.999 per the module contract
        from scipy import special

        rng = np.random.default_rng(19)
        worst = 0.0
        for _ in range(500):
            k = rng.uniform(0.0, 0.999)
            z = rng.uniform(-20.0, 20.0)
            sn, cn, dn = jacobi(z, k)
            so, co, do, _ = special.ellipj(z, k * k)
            worst = max(worst, abs(sn - so), abs(cn - co), abs(dn - do))
        assert worst < 1e-12
