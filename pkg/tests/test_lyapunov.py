import numpy as np
import pytest

from delaycert import LyapunovData, validate_lyapunov


def test_ex1_constants_pass(ex1):
    report = validate_lyapunov(ex1.lyap, ex1.rhs, sample_count=100_000)
    assert report.passed(tol=1e-9)


def test_ex2_constants_pass(ex2):
    report = validate_lyapunov(ex2.lyap, ex2.rhs, sample_count=100_000)
    assert report.passed(tol=1e-9)


def test_ex2_k2_formula(ex2):
    # sqrt((1 + zeta*mu)^2 + (1 + zeta)^2) at zeta = 0.1, mu = 3
    assert ex2.lyap.k2 == pytest.approx(np.sqrt(2.9), rel=1e-12)
    assert ex2.lyap.k2 == pytest.approx(1.7029386, rel=1e-7)


def test_overclaimed_decay_rate_fails(ex1):
    # true max decay rate for V = x^2 is 2*|alpha1 + alpha2| = 1
    bad = LyapunovData.from_terms(1, 2.0, k0=1.0, k1=1.0, k2=2.0, k3=2.0,
                                  w=3.0, terms=[{"coeff": 1.0, "exponents": [2]}])
    report = validate_lyapunov(bad, ex1.rhs, sample_count=5000)
    assert not report.passed()
    assert report.decay == pytest.approx(2.0 / 3.0, rel=1e-6)


def test_decay_violation_is_one_dimensional_max(ex1):
    # the decay inequality is an equality for ex1, so the violation is ~0
    report = validate_lyapunov(ex1.lyap, ex1.rhs, sample_count=2000)
    assert abs(report.decay) < 1e-12


def test_gradient_and_hessian_evaluation(ex2):
    x = np.array([0.7, -0.4])
    zeta, mu = 0.1, 3.0
    g_expected = np.array([x[0] ** 3 + 3 * zeta * x[0] ** 2 * x[1],
                           x[1] ** 3 + zeta * x[0] ** 3])
    np.testing.assert_allclose(ex2.lyap.gradient(x), g_expected, rtol=1e-12)
    h_expected = np.array([
        [3 * x[0] ** 2 + 6 * zeta * x[0] * x[1], 3 * zeta * x[0] ** 2],
        [3 * zeta * x[0] ** 2, 3 * x[1] ** 2]])
    np.testing.assert_allclose(ex2.lyap.hessian(x), h_expected, rtol=1e-12)


def test_callable_with_finite_differences(ex1):
    lyap = LyapunovData.from_callable(lambda x: float(x[0] ** 2), gamma=2.0,
                                      k0=1.0, k1=1.0, k2=2.0, k3=2.0, w=1.0)
    assert lyap.fd_derivatives
    assert lyap.gradient(np.array([0.5]))[0] == pytest.approx(1.0, rel=1e-8)
    assert lyap.hessian(np.array([0.5]))[0, 0] == pytest.approx(2.0, rel=1e-4)
    report = validate_lyapunov(lyap, ex1.rhs, sample_count=1000)
    assert report.passed(tol=1e-4)  # finite-difference noise only


def test_constant_ordering_enforced():
    with pytest.raises(ValueError, match="k0 <= k1"):
        LyapunovData.from_terms(1, 2.0, k0=2.0, k1=1.0, k2=2.0, k3=2.0, w=1.0,
                                terms=[{"coeff": 1.0, "exponents": [2]}])
