import numpy as np
import pytest
from hypothesis import given, assume, settings
from hypothesis import strategies as st

from delaycert import (GrowthConstants, HomogeneousRHS,
                       estimate_growth_constants, growth_bound_violation,
                       homogeneity_defect)


def test_eval_ex1_point(ex1):
    # f(x, y) = -x^3 + 0.5*y^3 at x = y = 1
    assert ex1.rhs([1.0], [1.0])[0] == pytest.approx(-0.5, rel=1e-15)


def test_eval_zero_is_zero(ex1, ex2):
    assert np.all(ex1.rhs([0.0], [0.0]) == 0.0)
    assert np.all(ex2.rhs([0.0, 0.0], [0.0, 0.0]) == 0.0)


def test_eval_ex2_hand_value(ex2):
    # (x2^3, -x1^3 - y2^3) at x = (1, 1), y = (0, 1)
    np.testing.assert_allclose(ex2.rhs([1.0, 1.0], [0.0, 1.0]), [1.0, -2.0],
                               rtol=1e-15)


def test_eval_dimension_mismatch(ex2):
    with pytest.raises(ValueError, match="dimension"):
        ex2.rhs([1.0], [0.0, 1.0])


def test_homogeneity_defect_exact_cases(ex1, ex2):
    assert homogeneity_defect(ex1.rhs, 2.0, [1.0], [1.0]) < 1e-14
    assert homogeneity_defect(ex1.rhs, 1.0, [0.3], [-0.2]) == 0.0
    assert homogeneity_defect(ex2.rhs, 0.5, [1.0, 0.0], [0.0, 1.0]) < 1e-16


@st.composite
def random_cubic_system(draw):
    n = draw(st.integers(min_value=1, max_value=2))
    n_terms = draw(st.integers(min_value=1, max_value=4))
    terms = []
    for _ in range(n_terms):
        exps = [0] * (2 * n)
        for _ in range(3):  # total degree exactly 3
            exps[draw(st.integers(0, 2 * n - 1))] += 1
        terms.append({
            "target": draw(st.integers(0, n - 1)),
            "coeff": draw(st.floats(-5, 5, allow_nan=False)),
            "x_exponents": exps[:n],
            "y_exponents": exps[n:],
        })
    return HomogeneousRHS.from_terms(n, 3.0, 1.0, terms)


@settings(max_examples=100, deadline=None)
@given(rhs=random_cubic_system(),
       c=st.floats(0.01, 100.0),
       data=st.data())
def test_homogeneity_defect_property(rhs, c, data):
    x = np.array(data.draw(st.lists(st.floats(-3, 3), min_size=rhs.n,
                                    max_size=rhs.n)))
    y = np.array(data.draw(st.lists(st.floats(-3, 3), min_size=rhs.n,
                                    max_size=rhs.n)))
    fnorm = np.linalg.norm(rhs(x, y))
    assume(fnorm > 1e-9)  # the relative bound needs a generic point
    assert homogeneity_defect(rhs, c, x, y) <= 1e-9 * (1 + c ** rhs.mu) * fnorm


def _dense_grid_oracle_m_ex1(rhs):
    # brute force over |x|^3 + |y|^3 = 1: x = s1*t^(1/3), y = s2*(1-t)^(1/3)
    t = np.linspace(0.0, 1.0, 20001)
    best = 0.0
    for s1 in (-1.0, 1.0):
        for s2 in (-1.0, 1.0):
            x = s1 * t ** (1 / 3)
            y = s2 * (1 - t) ** (1 / 3)
            vals = np.abs(-x ** 3 + 0.5 * y ** 3)
            best = max(best, vals.max())
    return best


def test_growth_constants_ex1_sampled_vs_oracle(ex1):
    oracle = _dense_grid_oracle_m_ex1(ex1.rhs)
    assert oracle == pytest.approx(1.0, rel=1e-9)
    gc = estimate_growth_constants(ex1.rhs, sample_count=10_000, seed=0)
    assert oracle <= gc.m <= 1.05 * oracle * (1 + 1e-12)
    # partial-derivative multipliers approach the analytic 3 and 1.5
    assert gc.m1 == pytest.approx(3.0 * 1.05, rel=2e-2)
    assert gc.m2 == pytest.approx(1.5 * 1.05, rel=2e-2)


def test_growth_constants_ex2_sampled(ex2):
    gc = estimate_growth_constants(ex2.rhs, sample_count=10_000, seed=0)
    # the analytic m = sqrt(2) is conservative; the sampled sup is 1
    assert gc.m <= np.sqrt(2) * 1.05
    assert gc.m >= 0.95
    assert gc.m1 <= 3.0 * 1.05 * (1 + 1e-12)
    assert gc.m2 <= 3.0 * 1.05 * (1 + 1e-12)


def test_growth_monotone_in_safety(ex1):
    low = estimate_growth_constants(ex1.rhs, sample_count=2000, safety=1.05, seed=3)
    high = estimate_growth_constants(ex1.rhs, sample_count=2000, safety=1.10, seed=3)
    assert high.m > low.m and high.m1 > low.m1 and high.m2 > low.m2


def test_growth_certifies_fresh_samples(ex1, ex2):
    for bundle in (ex1, ex2):
        gc = estimate_growth_constants(bundle.rhs, sample_count=4000, seed=0)
        assert growth_bound_violation(bundle.rhs, gc, sample_count=4000,
                                      seed=99) <= 0.0


def test_growth_requires_enough_samples(ex1):
    with pytest.raises(ValueError, match="at least 1000"):
        estimate_growth_constants(ex1.rhs, sample_count=10)


def test_callable_rhs_finite_difference_flag():
    f = lambda x, y: np.array([-x[0] ** 3 + 0.5 * y[0] ** 3])
    rhs = HomogeneousRHS.from_callable(f, n=1, mu=3.0, h=10.0)
    assert rhs.fd_partials
    with pytest.raises(ValueError, match="finite differences disabled"):
        estimate_growth_constants(rhs, finite_differences=False)
    gc = estimate_growth_constants(rhs, sample_count=1000)
    assert gc.m1 == pytest.approx(3.0 * 1.05, rel=5e-2)


def test_term_degree_validation():
    with pytest.raises(ValueError, match="total degree"):
        HomogeneousRHS.from_terms(1, 3.0, 1.0, [
            {"target": 0, "coeff": 1.0, "x_exponents": [2], "y_exponents": [0]}])


def test_json_roundtrip(ex2):
    spec = ex2.rhs.to_dict()
    rhs = HomogeneousRHS.from_dict(spec)
    x, y = np.array([0.3, -0.7]), np.array([0.1, 0.2])
    np.testing.assert_array_equal(rhs(x, y), ex2.rhs(x, y))


def test_growth_constants_positive():
    with pytest.raises(ValueError):
        GrowthConstants(m=0.0, m1=1.0, m2=1.0)
