"""Homogeneous delay systems x'(t) = f(x(t), x(t-h)) and their growth constants.

A right-hand side of homogeneity degree mu > 1 satisfies
f(c*x, c*y) = c^mu * f(x, y) for all c > 0 and admits bounds

    ||f(x, y)||      <= m  * (||x||^mu     + ||y||^mu),
    ||df/dx (x, y)|| <= m1 * (||x||^(mu-1) + ||y||^(mu-1)),
    ||df/dy (x, y)|| <= m2 * (||x||^(mu-1) + ||y||^(mu-1)).

The multipliers (m, m1, m2) are estimated by sampling the compact set
||x||^mu + ||y||^mu = 1 quasi-randomly and inflating the observed maxima
by a safety factor (sampling maxima underestimate true suprema).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.stats import norm, qmc

from ._poly import PolynomialVectorField, signed_power

_FD_STEP = 1e-6  # central-difference step scale for smooth polynomial-like f


@dataclass(frozen=True, eq=False)
class HomogeneousRHS:
    """Evaluable right-hand side of a homogeneous time-delay system.

    Attributes
    ----------
    n : state dimension
    mu : homogeneity degree (> 1)
    h : constant delay (>= 0, time units)
    terms : declarative polynomial terms, or None for a bare callable
    fd_partials : True when Jacobians fall back to finite differences
    """

    n: int
    mu: float
    h: float
    _f: Callable = None
    _jac_x: Optional[Callable] = None
    _jac_y: Optional[Callable] = None
    terms: Optional[tuple] = None
    fd_partials: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be a positive integer")
        if not self.mu > 1:
            raise ValueError("homogeneity degree must exceed 1")
        if self.h < 0:
            raise ValueError("delay must be nonnegative")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, n, mu, h, terms):
        """Build from declarative terms [{target, coeff, x_exponents, y_exponents}].

        Every term must have total degree exactly mu.
        """
        norm_terms = []
        for t in terms:
            tgt = int(t["target"])
            if not 0 <= tgt < n:
                raise ValueError(f"term target {tgt} outside 0..{n - 1}")
            xe = tuple(float(v) for v in t.get("x_exponents", [0.0] * n))
            ye = tuple(float(v) for v in t.get("y_exponents", [0.0] * n))
            if len(xe) != n or len(ye) != n:
                raise ValueError("exponent multi-index length must equal n")
            total = sum(xe) + sum(ye)
            if abs(total - mu) > 1e-9 * max(1.0, mu):
                raise ValueError(
                    f"term of total degree {total} in a system of degree {mu}")
            norm_terms.append((float(t["coeff"]), tgt, xe, ye))
        poly = _poly_from_terms(n, norm_terms)
        return cls(n=n, mu=float(mu), h=float(h), _f=poly,
                   _jac_x=poly.jac_x, _jac_y=poly.jac_y,
                   terms=tuple(norm_terms), fd_partials=False)

    @classmethod
    def from_callable(cls, f, n, mu, h, jac_x=None, jac_y=None):
        fd = jac_x is None or jac_y is None
        return cls(n=n, mu=float(mu), h=float(h), _f=f,
                   _jac_x=jac_x, _jac_y=jac_y, terms=None, fd_partials=fd)

    @classmethod
    def from_dict(cls, spec):
        """Ingest the JSON system document ({n, mu, h, terms, ...})."""
        return cls.from_terms(int(spec["n"]), float(spec["mu"]),
                              float(spec["h"]), spec["terms"])

    # -- evaluation --------------------------------------------------------

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if x.shape[0] != self.n or y.shape[0] != self.n:
            raise ValueError(
                f"dimension mismatch: expected {self.n}, got {x.shape[0]}/{y.shape[0]}")
        return np.asarray(self._f(x, y), dtype=float).reshape(self.n)

    def batch(self, X, Y):
        if isinstance(self._f, PolynomialVectorField):
            return self._f.batch(X, Y)
        return np.stack([self(x, y) for x, y in zip(X, Y)])

    def jac_x(self, x, y):
        if self._jac_x is not None:
            return np.asarray(self._jac_x(x, y), dtype=float).reshape(self.n, self.n)
        return self._fd_jac(x, y, wrt="x")

    def jac_y(self, x, y):
        if self._jac_y is not None:
            return np.asarray(self._jac_y(x, y), dtype=float).reshape(self.n, self.n)
        return self._fd_jac(x, y, wrt="y")

    def jac_x_batch(self, X, Y):
        if isinstance(self._f, PolynomialVectorField):
            return self._f.jac_x_batch(X, Y)
        return np.stack([self.jac_x(x, y) for x, y in zip(X, Y)])

    def jac_y_batch(self, X, Y):
        if isinstance(self._f, PolynomialVectorField):
            return self._f.jac_y_batch(X, Y)
        return np.stack([self.jac_y(x, y) for x, y in zip(X, Y)])

    def _fd_jac(self, x, y, wrt):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        base = x if wrt == "x" else y
        step = _FD_STEP * (1.0 + np.linalg.norm(base))
        J = np.empty((self.n, self.n))
        for j in range(self.n):
            e = np.zeros(self.n)
            e[j] = step
            if wrt == "x":
                J[:, j] = (self(x + e, y) - self(x - e, y)) / (2 * step)
            else:
                J[:, j] = (self(x, y + e) - self(x, y - e)) / (2 * step)
        return J

    def kernel_arrays(self):
        """Term arrays for the compiled integrator, or None if not declarative."""
        if self.terms is None:
            return None
        coeffs = np.array([t[0] for t in self.terms])
        targets = np.array([t[1] for t in self.terms], dtype=np.int64)
        xexp = np.array([t[2] for t in self.terms], dtype=float)
        yexp = np.array([t[3] for t in self.terms], dtype=float)
        return coeffs, targets, xexp, yexp

    def to_dict(self):
        if self.terms is None:
            raise ValueError("only declarative systems serialize to JSON")
        return {
            "n": self.n, "mu": self.mu, "h": self.h,
            "terms": [{"target": t, "coeff": c,
                       "x_exponents": list(xe), "y_exponents": list(ye)}
                      for c, t, xe, ye in self.terms],
        }


def _poly_from_terms(n, norm_terms):
    return PolynomialVectorField(
        n,
        [t[0] for t in norm_terms],
        [t[1] for t in norm_terms],
        [t[2] for t in norm_terms],
        [t[3] for t in norm_terms],
    )


@dataclass(frozen=True)
class GrowthConstants:
    """Norm-growth multipliers (m, m1, m2) of a homogeneous right-hand side."""

    m: float
    m1: float
    m2: float

    def __post_init__(self):
        if min(self.m, self.m1, self.m2) <= 0:
            raise ValueError("growth constants must be positive")

    def to_dict(self):
        return {"m": self.m, "m1": self.m1, "m2": self.m2}


def homogeneity_defect(rhs: HomogeneousRHS, c: float, x, y) -> float:
    """||f(c*x, c*y) - c^mu * f(x, y)||; zero for exact homogeneity."""
    if not c > 0:
        raise ValueError("scaling factor must be positive")
    return float(np.linalg.norm(rhs(c * np.asarray(x, dtype=float),
                                    c * np.asarray(y, dtype=float))
                                - c ** rhs.mu * rhs(x, y)))


def constraint_set_samples(rhs: HomogeneousRHS, sample_count: int, seed: int = 0):
    """Quasi-random points of the set ||x||^mu + ||y||^mu = 1."""
    import warnings
    sob = qmc.Sobol(d=2 * rhs.n, scramble=True, seed=seed)
    with warnings.catch_warnings():
        # non-power-of-2 draws lose the balance property; harmless here,
        # the observed maxima are inflated by a safety factor anyway
        warnings.simplefilter("ignore", UserWarning)
        u = sob.random(sample_count)
    z = norm.ppf(np.clip(u, 1e-12, 1 - 1e-12))
    nz = np.linalg.norm(z, axis=1, keepdims=True)
    nz[nz == 0] = 1.0
    z /= nz
    X, Y = z[:, :rhs.n], z[:, rhs.n:]
    nx = np.linalg.norm(X, axis=1)
    ny = np.linalg.norm(Y, axis=1)
    scale = (nx ** rhs.mu + ny ** rhs.mu) ** (-1.0 / rhs.mu)
    return X * scale[:, None], Y * scale[:, None]


def estimate_growth_constants(rhs: HomogeneousRHS, sample_count: int = 10_000,
                              safety: float = 1.05, seed: int = 0,
                              finite_differences: bool = True) -> GrowthConstants:
    """Sample (m, m1, m2) on the constraint set, inflated by `safety`.

    Parameters
    ----------
    sample_count : number of quasi-random sample points (>= 1000)
    safety : inflation applied to observed maxima
    finite_differences : allow finite-difference Jacobians when analytic
        partials are absent; if False in that situation, raises.
    """
    if sample_count < 1000:
        raise ValueError("sample_count must be at least 1000")
    if rhs.fd_partials and not finite_differences:
        raise ValueError("partials unavailable and finite differences disabled")
    X, Y = constraint_set_samples(rhs, sample_count, seed=seed)
    fn = np.linalg.norm(rhs.batch(X, Y), axis=1)
    m = safety * float(fn.max())

    denom = (np.linalg.norm(X, axis=1) ** (rhs.mu - 1)
             + np.linalg.norm(Y, axis=1) ** (rhs.mu - 1))
    jx = _spectral_norms(rhs.jac_x_batch(X, Y))
    jy = _spectral_norms(rhs.jac_y_batch(X, Y))
    m1 = safety * float((jx / denom).max())
    m2 = safety * float((jy / denom).max())
    return GrowthConstants(m=m, m1=m1, m2=m2)


def growth_bound_violation(rhs: HomogeneousRHS, constants: GrowthConstants,
                           sample_count: int = 2000, seed: int = 1) -> float:
    """Largest normalised violation of the three growth bounds on fresh samples.

    Nonpositive return certifies the bounds on the sample set.
    """
    X, Y = constraint_set_samples(rhs, sample_count, seed=seed)
    fn = np.linalg.norm(rhs.batch(X, Y), axis=1)
    v = float((fn - constants.m).max()) / constants.m
    denom = (np.linalg.norm(X, axis=1) ** (rhs.mu - 1)
             + np.linalg.norm(Y, axis=1) ** (rhs.mu - 1))
    jx = _spectral_norms(rhs.jac_x_batch(X, Y))
    jy = _spectral_norms(rhs.jac_y_batch(X, Y))
    v = max(v, float((jx / denom - constants.m1).max()) / constants.m1)
    v = max(v, float((jy / denom - constants.m2).max()) / constants.m2)
    return v


def _spectral_norms(mats):
    return np.linalg.svd(mats, compute_uv=False)[:, 0]


__all__ = [
    "HomogeneousRHS", "GrowthConstants", "homogeneity_defect",
    "estimate_growth_constants", "growth_bound_violation",
    "constraint_set_samples", "signed_power",
]
