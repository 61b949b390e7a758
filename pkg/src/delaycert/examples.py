"""Registry of the two benchmark systems and their table parameter presets.

ex1: scalar x'(t) = alpha1*x^3(t) + alpha2*x^3(t-h) with alpha1 + alpha2 < 0,
     V = x^2 (analytic constants are exact).
ex2: planar x1' = x2^mu, x2' = -x1^mu - x2^mu(t-h) with mu = 3 and the
     quartic V = (x1^4 + x2^4)/4 + zeta*x1^3*x2; constants follow the
     closed-form expressions in terms of zeta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .lyapunov import LyapunovData
from .systems import GrowthConstants, HomogeneousRHS


class SystemBundle(NamedTuple):
    rhs: HomogeneousRHS
    lyap: LyapunovData
    growth: GrowthConstants


@dataclass(frozen=True)
class ExampleSpec:
    """Benchmark identifier plus parameter overrides."""

    name: str
    alpha1: float = -1.0     # ex1 only
    alpha2: float = 0.5      # ex1 only
    zeta: float = 0.1        # ex2 only
    mu: float = 3.0
    h: Optional[float] = None

    def __post_init__(self):
        if self.name not in ("ex1", "ex2"):
            raise ValueError("example must be 'ex1' or 'ex2'")
        if self.name == "ex1":
            if not self.alpha1 + self.alpha2 < 0:
                raise ValueError("ex1 requires alpha1 + alpha2 < 0")
            if float(self.mu) != int(self.mu) or int(self.mu) % 2 == 0 \
                    or int(self.mu) < 3:
                raise ValueError("ex1 requires an odd integer degree mu >= 3")
        else:
            if not self.mu > 2:
                raise ValueError("ex2 requires mu > 2")
            zcap = min(1.0 / (self.mu + 1.0), 4.0 / (self.mu + 1.0) ** 2)
            if not 0 < self.zeta < zcap:
                raise ValueError(f"ex2 requires 0 < zeta < {zcap:.6g}")
        if self.h is None:
            object.__setattr__(self, "h", 10.0 if self.name == "ex1" else 1.0)
        if self.h <= 0:
            raise ValueError("delay must be positive")


def build_example(spec: ExampleSpec) -> SystemBundle:
    """Canonical (rhs, lyapunov, growth) with the analytic constant values."""
    if spec.name == "ex1":
        return _build_ex1(spec)
    return _build_ex2(spec)


def _build_ex1(spec):
    mu = float(spec.mu)
    rhs = HomogeneousRHS.from_terms(1, mu, spec.h, [
        {"target": 0, "coeff": spec.alpha1, "x_exponents": [mu], "y_exponents": [0]},
        {"target": 0, "coeff": spec.alpha2, "x_exponents": [0], "y_exponents": [mu]},
    ])
    w = -2.0 * (spec.alpha1 + spec.alpha2)
    lyap = LyapunovData.from_terms(1, 2.0, k0=1.0, k1=1.0, k2=2.0, k3=2.0, w=w,
                                   terms=[{"coeff": 1.0, "exponents": [2]}])
    growth = GrowthConstants(m=max(abs(spec.alpha1), abs(spec.alpha2)),
                             m1=mu * abs(spec.alpha1), m2=mu * abs(spec.alpha2))
    return SystemBundle(rhs=rhs, lyap=lyap, growth=growth)


def _build_ex2(spec):
    mu, zeta = float(spec.mu), float(spec.zeta)
    rhs = HomogeneousRHS.from_terms(2, mu, spec.h, [
        {"target": 0, "coeff": 1.0, "x_exponents": [0, mu], "y_exponents": [0, 0]},
        {"target": 1, "coeff": -1.0, "x_exponents": [mu, 0], "y_exponents": [0, 0]},
        {"target": 1, "coeff": -1.0, "x_exponents": [0, 0], "y_exponents": [0, mu]},
    ])
    eta = min(zeta, 1.0 - zeta * (mu + 1.0),
              (zeta / (1.0 + zeta)) * (1.0 - zeta * (1.0 + mu) ** 2 / 4.0))
    w = eta / 2.0 ** (mu - 1.0)
    gamma = mu + 1.0
    lyap = LyapunovData.from_terms(
        2, gamma,
        k0=0.5 ** ((mu - 1.0) / 2.0) * (1.0 / (mu + 1.0) - zeta),
        k1=1.0 / (mu + 1.0) + zeta,
        k2=((1.0 + zeta * mu) ** 2 + (1.0 + zeta) ** 2) ** 0.5,
        k3=mu * (1.0 + zeta * mu),
        w=w,
        terms=[{"coeff": 1.0 / (mu + 1.0), "exponents": [mu + 1.0, 0.0]},
               {"coeff": 1.0 / (mu + 1.0), "exponents": [0.0, mu + 1.0]},
               {"coeff": zeta, "exponents": [mu, 1.0]}])
    growth = GrowthConstants(m=2.0 ** 0.5, m1=mu, m2=mu)
    return SystemBundle(rhs=rhs, lyap=lyap, growth=growth)


@dataclass(frozen=True)
class TablePreset:
    """Parameter sets reproducing one benchmark table."""

    example: ExampleSpec
    lr: dict = field(default_factory=dict)   # alpha, delta (None = delta_max default)
    lk: dict = field(default_factory=dict)   # chi, w1, w2, delta
    phi_constant: tuple = ()                 # benchmark initial history


TABLE_PRESETS = {
    "table1": TablePreset(
        example=ExampleSpec("ex1"),
        lr={"alpha": 2.0, "delta": None},
        lk={"chi": 0.32, "w1": 0.05, "w2": 0.07, "delta": 0.1011},
        phi_constant=(0.009,)),
    "table2": TablePreset(
        example=ExampleSpec("ex1"),
        lr={"alpha": 2.0, "delta": 0.01},
        lk={"chi": 0.015, "w1": 0.5, "w2": 0.017, "delta": 0.01},
        phi_constant=(0.009,)),
    "table3": TablePreset(
        example=ExampleSpec("ex2"),
        lr={"alpha": 2.0, "delta": 0.001},
        lk={"chi": 0.39, "w1": 0.0092, "w2": 0.0022, "delta": 0.001},
        phi_constant=(4.8e-4, 4.8e-4)),
}


def example_bundle(name: str) -> SystemBundle:
    return build_example(ExampleSpec(name))


__all__ = ["ExampleSpec", "SystemBundle", "build_example", "example_bundle",
           "TablePreset", "TABLE_PRESETS"]
