import pytest

from delaycert import ExampleSpec, WeightSplit, build_example
from delaycert.krasovskii import krasovskii_certificate
from delaycert.razumikhin import razumikhin_certificate


@pytest.fixture(scope="session")
def ex1():
    return build_example(ExampleSpec("ex1"))


@pytest.fixture(scope="session")
def ex2():
    return build_example(ExampleSpec("ex2"))


@pytest.fixture(scope="session")
def lr_t1(ex1):
    # attraction-region run: delta defaults to just below delta_max
    return razumikhin_certificate(ex1.lyap, ex1.growth, 10.0, 3.0, alpha=2.0)


@pytest.fixture(scope="session")
def lr_t2(ex1):
    return razumikhin_certificate(ex1.lyap, ex1.growth, 10.0, 3.0, alpha=2.0,
                                  delta=0.01)


@pytest.fixture(scope="session")
def lr_t3(ex2):
    return razumikhin_certificate(ex2.lyap, ex2.growth, 1.0, 3.0, alpha=2.0,
                                  delta=0.001)


@pytest.fixture(scope="session")
def lk_t1(ex1):
    w = WeightSplit.from_rate(ex1.lyap.w, 10.0, w1=0.05, w2=0.07)
    return krasovskii_certificate(ex1.rhs, ex1.lyap, ex1.growth, weights=w,
                                  chi=0.32, delta=0.1011)


@pytest.fixture(scope="session")
def lk_t2(ex1):
    w = WeightSplit.from_rate(ex1.lyap.w, 10.0, w1=0.5, w2=0.017)
    return krasovskii_certificate(ex1.rhs, ex1.lyap, ex1.growth, weights=w,
                                  chi=0.015, delta=0.01)


@pytest.fixture(scope="session")
def lk_t3(ex2):
    w = WeightSplit.from_rate(ex2.lyap.w, 1.0, w1=0.0092, w2=0.0022)
    return krasovskii_certificate(ex2.rhs, ex2.lyap, ex2.growth, weights=w,
                                  chi=0.39, delta=0.001)
