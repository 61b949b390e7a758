import numpy as np
import pytest

from delaycert import ExampleSpec, build_example
from delaycert.examples import TABLE_PRESETS


def test_ex1_canonical_constants(ex1):
    assert ex1.lyap.w == pytest.approx(1.0)
    assert (ex1.lyap.k0, ex1.lyap.k1, ex1.lyap.k2, ex1.lyap.k3) == (1, 1, 2, 2)
    assert (ex1.growth.m, ex1.growth.m1, ex1.growth.m2) == (1.0, 3.0, 1.5)
    assert ex1.rhs.h == 10.0 and ex1.rhs.mu == 3.0


def test_ex2_canonical_constants(ex2):
    # eta = min{0.1, 0.6, 0.054545...} and w = eta / 4
    assert ex2.lyap.w == pytest.approx(0.0545454545 / 4.0, rel=1e-8)
    assert ex2.lyap.w == pytest.approx(0.0136, rel=3e-3)
    assert ex2.lyap.k0 == pytest.approx(0.075)
    assert ex2.lyap.k1 == pytest.approx(0.35)
    assert ex2.lyap.k3 == pytest.approx(3.9)
    assert ex2.growth.m == pytest.approx(np.sqrt(2.0))
    assert ex2.growth.m1 == ex2.growth.m2 == 3.0
    assert ex2.lyap.gamma == 4.0


def test_ex1_stability_invariant():
    with pytest.raises(ValueError, match="alpha1 \\+ alpha2"):
        ExampleSpec("ex1", alpha1=1.0, alpha2=-0.5)
    spec = ExampleSpec("ex1", alpha1=-2.0, alpha2=1.0, h=5.0)
    bundle = build_example(spec)
    assert bundle.lyap.w == pytest.approx(2.0)
    assert bundle.growth.m == 2.0


def test_ex2_zeta_range():
    with pytest.raises(ValueError, match="zeta"):
        ExampleSpec("ex2", zeta=0.25)
    with pytest.raises(ValueError, match="zeta"):
        ExampleSpec("ex2", zeta=0.0)
    with pytest.raises(ValueError, match="mu > 2"):
        ExampleSpec("ex2", mu=1.5)


def test_ex2_lyapunov_value(ex2):
    x = np.array([4.8e-4, 4.8e-4])
    expected = 0.25 * (x[0] ** 4 + x[1] ** 4) + 0.1 * x[0] ** 3 * x[1]
    assert ex2.lyap.value(x) == pytest.approx(expected, rel=1e-14)


def test_presets_cover_examples():
    assert set(TABLE_PRESETS) == {"table1", "table2", "table3"}
    assert TABLE_PRESETS["table2"].phi_constant == (0.009,)
    assert TABLE_PRESETS["table3"].phi_constant == (4.8e-4, 4.8e-4)


def test_unknown_example_rejected():
    with pytest.raises(ValueError):
        ExampleSpec("ex3")
