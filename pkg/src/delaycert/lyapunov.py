"""Delay-free Lyapunov functions V(x) and their constant bundles.

V is homogeneous of degree gamma >= 2 and comes with positive constants

    k0*||x||^gamma <= V(x) <= k1*||x||^gamma,
    grad V(x)' f(x, x) <= -w*||x||^(gamma+mu-1),
    ||grad V(x)|| <= k2*||x||^(gamma-1),   ||hess V(x)|| <= k3*||x||^(gamma-2).

`validate_lyapunov` measures the worst violation of each inequality on a
unit-shell sample (homogeneity extends the check to every radius).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.stats import norm, qmc

from ._poly import PolynomialScalarField
from .systems import HomogeneousRHS

_FD_STEP = 1e-6


@dataclass(frozen=True, eq=False)
class LyapunovData:
    """Lyapunov function with gradient/Hessian access and its constants."""

    gamma: float
    k0: float
    k1: float
    k2: float
    k3: float
    w: float
    _v: Callable = None
    _grad: Optional[Callable] = None
    _hess: Optional[Callable] = None
    terms: Optional[tuple] = None
    fd_derivatives: bool = False

    def __post_init__(self):
        if self.gamma < 2:
            raise ValueError("homogeneity degree gamma must be >= 2")
        if min(self.k0, self.k1, self.k2, self.k3, self.w) <= 0:
            raise ValueError("Lyapunov constants must be positive")
        if self.k0 > self.k1:
            raise ValueError("k0 <= k1 is required")

    @classmethod
    def from_terms(cls, n, gamma, k0, k1, k2, k3, w, terms):
        coeffs, exps = [], []
        for t in terms:
            coeffs.append(float(t["coeff"]))
            e = tuple(float(v) for v in t["exponents"])
            if len(e) != n:
                raise ValueError("exponent multi-index length must equal n")
            if abs(sum(e) - gamma) > 1e-9 * max(1.0, gamma):
                raise ValueError(
                    f"term of total degree {sum(e)} in a function of degree {gamma}")
            exps.append(e)
        poly = PolynomialScalarField(n, coeffs, exps)
        return cls(gamma=float(gamma), k0=float(k0), k1=float(k1),
                   k2=float(k2), k3=float(k3), w=float(w),
                   _v=poly, _grad=poly.gradient, _hess=poly.hessian,
                   terms=tuple(zip(coeffs, exps)), fd_derivatives=False)

    @classmethod
    def from_callable(cls, v, gamma, k0, k1, k2, k3, w, grad=None, hess=None):
        fd = grad is None or hess is None
        return cls(gamma=float(gamma), k0=float(k0), k1=float(k1),
                   k2=float(k2), k3=float(k3), w=float(w),
                   _v=v, _grad=grad, _hess=hess, terms=None, fd_derivatives=fd)

    @classmethod
    def from_dict(cls, n, spec):
        """Ingest the `lyapunov` JSON block ({gamma, k0..k3, w, terms})."""
        return cls.from_terms(n, spec["gamma"], spec["k0"], spec["k1"],
                              spec["k2"], spec["k3"], spec["w"], spec["terms"])

    # -- evaluation --------------------------------------------------------

    def value(self, x):
        return float(self._v(np.asarray(x, dtype=float)))

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        if self._grad is not None:
            return np.asarray(self._grad(x), dtype=float).reshape(x.shape)
        step = _FD_STEP * (1.0 + np.linalg.norm(x))
        g = np.empty_like(x)
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = step
            g[j] = (self.value(x + e) - self.value(x - e)) / (2 * step)
        return g

    def hessian(self, x):
        x = np.asarray(x, dtype=float)
        if self._hess is not None:
            return np.asarray(self._hess(x), dtype=float).reshape(x.size, x.size)
        step = _FD_STEP * (1.0 + np.linalg.norm(x))
        H = np.empty((x.size, x.size))
        for j in range(x.size):
            e = np.zeros_like(x)
            e[j] = step
            H[:, j] = (self.gradient(x + e) - self.gradient(x - e)) / (2 * step)
        return 0.5 * (H + H.T)

    def value_batch(self, X):
        if isinstance(self._v, PolynomialScalarField):
            return self._v.batch(X)
        return np.array([self.value(x) for x in X])

    def gradient_batch(self, X):
        if isinstance(self._v, PolynomialScalarField):
            return self._v.gradient_batch(X)
        return np.stack([self.gradient(x) for x in X])

    def hessian_batch(self, X):
        if isinstance(self._v, PolynomialScalarField):
            return self._v.hessian_batch(X)
        return np.stack([self.hessian(x) for x in X])

    def to_dict(self):
        d = {"gamma": self.gamma, "k0": self.k0, "k1": self.k1,
             "k2": self.k2, "k3": self.k3, "w": self.w}
        if self.terms is not None:
            d["terms"] = [{"coeff": c, "exponents": list(e)} for c, e in self.terms]
        return d


@dataclass(frozen=True)
class LyapunovValidation:
    """Largest normalised violation of each Lyapunov inequality on the shell.

    Violations are (lhs - rhs) / rhs-scale; nonpositive means satisfied.
    """

    lower: float
    upper: float
    decay: float
    gradient: float
    hessian: float

    def passed(self, tol: float = 1e-9) -> bool:
        return max(self.lower, self.upper, self.decay,
                   self.gradient, self.hessian) <= tol

    def to_dict(self):
        return {"lower": self.lower, "upper": self.upper, "decay": self.decay,
                "gradient": self.gradient, "hessian": self.hessian}


def unit_shell_samples(n, sample_count, seed=0):
    import warnings
    sob = qmc.Sobol(d=n, scramble=True, seed=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # non-power-of-2 draw
        u = sob.random(sample_count)
    z = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    nz = np.linalg.norm(z, axis=1, keepdims=True)
    nz[nz == 0] = 1.0
    return z / nz


def validate_lyapunov(lyap: LyapunovData, rhs: HomogeneousRHS,
                      sample_count: int = 10_000, seed: int = 0) -> LyapunovValidation:
    """Check the five Lyapunov inequalities at unit-shell sample points.

    Violations are data, not errors; use `.passed()` to gate.
    """
    X = unit_shell_samples(rhs.n, sample_count, seed=seed)
    V = lyap.value_batch(X)
    G = lyap.gradient_batch(X)
    H = lyap.hessian_batch(X)
    decay_lhs = np.einsum("ij,ij->i", G, rhs.batch(X, X))

    lower = float((lyap.k0 - V).max()) / lyap.k0
    upper = float((V - lyap.k1).max()) / lyap.k1
    decay = float((decay_lhs + lyap.w).max()) / lyap.w
    grad = float((np.linalg.norm(G, axis=1) - lyap.k2).max()) / lyap.k2
    if rhs.n == 1:
        hess = float((np.abs(H[:, 0, 0]) - lyap.k3).max()) / lyap.k3
    else:
        hess = float((np.linalg.svd(H, compute_uv=False)[:, 0] - lyap.k3).max()) / lyap.k3
    return LyapunovValidation(lower=lower, upper=upper, decay=decay,
                              gradient=grad, hessian=hess)


__all__ = ["LyapunovData", "LyapunovValidation", "validate_lyapunov",
           "unit_shell_samples"]
