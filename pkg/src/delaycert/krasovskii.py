"""Krasovskii-type functional certificate for homogeneous delay systems.

The functional

    v(phi) = V(phi(0)) + grad V(phi(0))' * int_{-h}^0 f(phi(0), phi(s)) ds
             + int_{-h}^0 (w1 + (h+s)*w2) ||phi(s)||^(gamma+mu-1) ds

is sandwiched between power-type bounds (constants a1, a2 below; b, b1, b2
and the pointwise constant beta above) and decays along solutions at rate
c; chaining the bounds through the power-sum inequality (constant L1)
yields dv/dt <= -L2 * v^((gamma+mu-1)/gamma) and an algebraic envelope.

Scalar equations x' = alpha1*x^mu + alpha2*x^mu(t-h) with odd integer mu
use a modified functional (the delayed term absorbed into the square) with
its own constant formulas, which are less conservative.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from ._poly import signed_power
from .envelope import EstimateCurve
from .history import HistorySegment
from .integrator import Trajectory
from .lyapunov import LyapunovData
from .razumikhin import InfeasibleCertificateError
from .roots import bisect_increasing
from .systems import GrowthConstants, HomogeneousRHS


@dataclass(frozen=True)
class WeightSplit:
    """Positive split w0 = w - w1 - h*w2 > 0 of the delay-free decay rate."""

    w0: float
    w1: float
    w2: float

    def __post_init__(self):
        if min(self.w0, self.w1, self.w2) <= 0:
            raise InfeasibleCertificateError(
                "weight split requires w0, w1, w2 > 0 (w1 + h*w2 < w)")

    @classmethod
    def from_rate(cls, w, h, w1=None, w2=None):
        """Defaults (w1, w2) = (w/2, w/(4h)) leaving w0 = w/4."""
        if w1 is None:
            w1 = 0.5 * w
        if w2 is None:
            w2 = 0.25 * w / h if h > 0 else 0.25 * w
        return cls(w0=w - w1 - h * w2, w1=w1, w2=w2)

    def to_dict(self):
        return {"w0": self.w0, "w1": self.w1, "w2": self.w2}


@dataclass(frozen=True)
class KrasovskiiCertificate:
    """Constant bundle of the functional route (general or scalar path).

    `radius` is the certified attraction radius, (c1, c2) the envelope
    constants, (c1_term, c2_term) the two derivative-decay candidates whose
    minimum is c, L1/L2 the power-sum and decay-rate constants.
    """

    scalar: bool
    chi: float
    delta: float
    weights: WeightSplit
    delta_cap_lower: float      # H1: admissible-delta cap from the lower bound
    delta_cap_deriv: float      # H2: admissible-delta cap from the derivative
    a1: float
    a2: float
    b1: float
    b2: float
    b: float
    beta: float
    L: float
    c1_term: float
    c2_term: float
    c: float
    L1: float
    L2: float
    radius: float
    c1: float
    c2: float
    mu: float
    gamma: float
    h: float

    @property
    def envelope(self) -> EstimateCurve:
        return EstimateCurve(c1=self.c1, c2=self.c2, mu=self.mu)

    def to_dict(self):
        d = {"method": "krasovskii-scalar" if self.scalar else "krasovskii-general",
             "chi": self.chi, "delta": self.delta,
             "H1": self.delta_cap_lower, "H2": self.delta_cap_deriv,
             "a1": self.a1, "a2": self.a2, "b1": self.b1, "b2": self.b2,
             "b": self.b, "beta": self.beta, "L": self.L,
             "c1_term": self.c1_term, "c2_term": self.c2_term, "c": self.c,
             "L1": self.L1, "L2": self.L2, "radius": self.radius,
             "c1": self.c1, "c2": self.c2,
             "mu": self.mu, "gamma": self.gamma, "h": self.h}
        d.update(self.weights.to_dict())
        return d


# -- power-sum inequality constants -----------------------------------------

def power_sum_constant(p: float, q: float, h: float) -> float:
    """L1 = (2*max{1,h})^(p/q-1) in (u^q + int u^q)^(p/q) <= L1*(u^p + int u^p)."""
    if not p > q or q < 1:
        raise ValueError("requires p > q >= 1")
    return (2.0 * max(1.0, h)) ** (p / q - 1.0)


def power_sum_constant_even(k: int, h: float) -> float:
    """Scalar even-power variant L1 = 2^(k-2)*(1+h)^(k-1), integer k >= 2."""
    if k != int(k) or k < 2:
        raise ValueError("requires an integer k >= 2")
    return 2.0 ** (int(k) - 2) * (1.0 + h) ** (int(k) - 1)


# -- constant pipelines ------------------------------------------------------

@dataclass(frozen=True)
class _PathConstants:
    H1: float
    H2: float
    a1: float
    a2: float
    b1: float
    b2: float
    b: float
    beta: float
    L: float
    c1_term: float
    c2_term: float
    c: float


def general_constants(lyap: LyapunovData, growth: GrowthConstants, h: float,
                      mu: float, chi: float, delta: float,
                      weights: WeightSplit) -> _PathConstants:
    """Exact constant formulas of the general (vector) path.

    Raises InfeasibleCertificateError when a1, a2 or c fails positivity or
    delta is not below min(H1, H2) for this (chi, delta, weights).
    """
    if chi <= 0:
        raise ValueError("chi must be positive")
    k0, k1, k2, k3, g = lyap.k0, lyap.k1, lyap.k2, lyap.k3, lyap.gamma
    m, m1, m2 = growth.m, growth.m1, growth.m2
    lower_coeff = h * k2 * m * (1.0 + chi ** (-2.0 * mu))
    H1 = (k0 / lower_coeff) ** (1.0 / (mu - 1.0))
    a1 = k0 - lower_coeff * delta ** (mu - 1.0)
    a2 = weights.w1 - k2 * m * chi ** (2.0 * (g - 1.0))
    b1 = k1 + 2.0 * h * m * k2 * delta ** (mu - 1.0)
    b2 = (m * k2 + weights.w1 + h * weights.w2) * delta ** (mu - 1.0)
    beta = (2.0 * k2 * m + weights.w1 + h * weights.w2) * h
    L = m * m1 * k2 + m * m * k3
    c1_term = weights.w0 - 4.0 * h * L * delta ** (mu - 1.0)
    c2_term = weights.w2 - 2.0 * L * delta ** (mu - 1.0)
    H2 = min(weights.w0 / (4.0 * h * L), weights.w1 / (2.0 * h * L),
             weights.w2 / (2.0 * L)) ** (1.0 / (mu - 1.0))
    return _check_constants(delta, H1, H2, a1, a2, b1, b2, beta, L,
                            c1_term, c2_term)


def scalar_constants(alpha1: float, alpha2: float, w: float, h: float,
                     mu: float, chi: float, delta: float,
                     weights: WeightSplit) -> _PathConstants:
    """Constant formulas of the scalar path x' = alpha1*x^mu + alpha2*y^mu."""
    if chi <= 0:
        raise ValueError("chi must be positive")
    aa2 = abs(alpha2)
    if h > 0 and aa2 > 0 and chi >= (1.0 / (h * aa2)) ** 0.5:
        raise InfeasibleCertificateError(
            f"chi must stay below (1/(h*|alpha2|))^(1/2) = {(1.0 / (h * aa2)) ** 0.5:.6g}")
    L = aa2 * abs(alpha1 + alpha2)
    H1 = (weights.w1 * chi ** 2 / aa2) ** (1.0 / (mu - 1.0))
    H2 = min(weights.w0 / (h * L), weights.w2 / L) ** (1.0 / (mu - 1.0))
    a1 = 1.0 - chi ** 2 * h * aa2
    a2 = weights.w1 - aa2 * chi ** (-2.0) * delta ** (mu - 1.0)
    b1 = 1.0 + aa2 * h
    b2 = (aa2 * (1.0 + aa2 * h) * delta ** (mu - 1.0)
          + weights.w1 + h * weights.w2) * delta ** (mu - 1.0)
    beta = (2.0 * aa2 + alpha2 ** 2 * h * delta ** (mu - 1.0)
            + weights.w1 + h * weights.w2) * h
    c1_term = weights.w0 - h * L * delta ** (mu - 1.0)
    c2_term = weights.w2 - L * delta ** (mu - 1.0)
    return _check_constants(delta, H1, H2, a1, a2, b1, b2, beta, L,
                            c1_term, c2_term)


def _check_constants(delta, H1, H2, a1, a2, b1, b2, beta, L, c1_term, c2_term):
    if not 0 < delta < min(H1, H2):
        raise InfeasibleCertificateError(
            f"delta={delta:.6g} must lie in (0, min(H1, H2)) = "
            f"(0, {min(H1, H2):.6g})")
    c = min(c1_term, c2_term)
    if a1 <= 0 or a2 <= 0 or c <= 0:
        raise InfeasibleCertificateError(
            f"positivity failed: a1={a1:.6g}, a2={a2:.6g}, c={c:.6g}")
    return _PathConstants(H1=H1, H2=H2, a1=a1, a2=a2, b1=b1, b2=b2,
                          b=max(b1, b2), beta=beta, L=L,
                          c1_term=c1_term, c2_term=c2_term, c=c)


def attraction_radius(k1_coeff: float, beta: float, a1: float, delta: float,
                      gamma: float, mu: float) -> float:
    """Unique positive root of k1*r^gamma + beta*r^(gamma+mu-1) = a1*delta^gamma.

    The scalar path passes k1_coeff=1, gamma=2.
    """
    target = a1 * delta ** gamma
    upper = (target / k1_coeff) ** (1.0 / gamma)
    return bisect_increasing(
        lambda r: k1_coeff * r ** gamma + beta * r ** (gamma + mu - 1.0),
        target, upper)


def scalar_coefficients(rhs: HomogeneousRHS) -> tuple[float, float]:
    """(alpha1, alpha2) of a declarative scalar x' = alpha1*x^mu + alpha2*y^mu."""
    if rhs.n != 1 or rhs.terms is None:
        raise ValueError("scalar path needs a declarative one-dimensional system")
    alpha1 = alpha2 = 0.0
    for coeff, _tgt, xe, ye in rhs.terms:
        if xe[0] == rhs.mu and ye[0] == 0.0:
            alpha1 += coeff
        elif xe[0] == 0.0 and ye[0] == rhs.mu:
            alpha2 += coeff
        else:
            raise ValueError("scalar path needs pure x^mu and y^mu terms")
    return alpha1, alpha2


def scalar_path_applicable(rhs: HomogeneousRHS) -> bool:
    """Scalar path needs n = 1, odd integer mu >= 3 and the two-term form."""
    if rhs.n != 1 or rhs.terms is None:
        return False
    if float(rhs.mu) != int(rhs.mu) or int(rhs.mu) < 3 or int(rhs.mu) % 2 == 0:
        return False
    try:
        scalar_coefficients(rhs)
    except ValueError:
        return False
    return True


def krasovskii_certificate(rhs: HomogeneousRHS, lyap: LyapunovData,
                           growth: Optional[GrowthConstants] = None,
                           weights: Optional[WeightSplit] = None,
                           chi: Optional[float] = None,
                           delta: Optional[float] = None,
                           path: str = "auto") -> KrasovskiiCertificate:
    """Build the certificate; the scalar path is auto-selected when applicable.

    Defaults: weights = (w/2, w/(4h)); chi chosen so that a2 = w1/2; delta
    just below min(H1, H2).  All defaults are overridable.
    """
    h, mu = rhs.h, rhs.mu
    if path == "auto":
        scalar = scalar_path_applicable(rhs)
    elif path in ("scalar", "krasovskii-scalar"):
        if not scalar_path_applicable(rhs):
            raise ValueError("scalar path requires n=1 and odd integer mu >= 3")
        scalar = True
    elif path in ("general", "krasovskii-general"):
        scalar = False
    else:
        raise ValueError(f"unknown path {path!r}")

    if weights is None:
        weights = WeightSplit.from_rate(lyap.w, h)

    if scalar:
        alpha1, alpha2 = scalar_coefficients(rhs)
        gamma_eff, k1_eff = 2.0, 1.0
        chi_cap = (1.0 / (h * abs(alpha2))) ** 0.5 if h * abs(alpha2) > 0 else np.inf

        def build(chi_, delta_):
            return scalar_constants(alpha1, alpha2, lyap.w, h, mu, chi_,
                                    delta_, weights)

        if chi is None:
            if delta is not None:
                # a2 = w1/2  =>  chi^2 = 2*|alpha2|*delta^(mu-1)/w1
                chi = min((2.0 * abs(alpha2) * delta ** (mu - 1.0)
                           / weights.w1) ** 0.5, (1.0 - 1e-6) * chi_cap)
            else:
                chi = 0.5 * chi_cap if np.isfinite(chi_cap) else 1.0
    else:
        if growth is None:
            raise ValueError("the general path requires growth constants")
        gamma_eff, k1_eff = lyap.gamma, lyap.k1

        def build(chi_, delta_):
            return general_constants(lyap, growth, h, mu, chi_, delta_, weights)

        if chi is None:
            # a2 = w1/2  =>  chi^(2(gamma-1)) = w1/(2*k2*m)
            chi = (weights.w1 / (2.0 * lyap.k2 * growth.m)) \
                ** (1.0 / (2.0 * (lyap.gamma - 1.0)))

    if delta is None:
        probe = build(chi, 1e-300)  # H1/H2 do not depend on delta
        delta = (1.0 - 1e-6) * min(probe.H1, probe.H2)
    cs = build(chi, delta)
    radius = attraction_radius(k1_eff, cs.beta, cs.a1, delta, gamma_eff, mu)
    if scalar:
        L1 = power_sum_constant_even(int((mu + 1) // 2), h)
    else:
        L1 = power_sum_constant(gamma_eff + mu - 1.0, gamma_eff, h)
    L2 = cs.c / (cs.b ** ((gamma_eff + mu - 1.0) / gamma_eff) * L1)
    c1, c2 = _envelope(scalar, cs, radius, k1_eff, gamma_eff, mu, h)
    return KrasovskiiCertificate(
        scalar=scalar, chi=chi, delta=delta, weights=weights,
        delta_cap_lower=cs.H1, delta_cap_deriv=cs.H2, a1=cs.a1, a2=cs.a2,
        b1=cs.b1, b2=cs.b2, b=cs.b, beta=cs.beta, L=cs.L,
        c1_term=cs.c1_term, c2_term=cs.c2_term, c=cs.c, L1=L1, L2=L2,
        radius=radius, c1=c1, c2=c2, mu=mu, gamma=gamma_eff, h=h)


def _envelope(scalar, cs, radius, k1_eff, gamma, mu, h):
    top = k1_eff + cs.beta * radius ** (mu - 1.0)
    if scalar:
        c1 = (top / cs.a1) ** 0.5
        c2 = (cs.c * (mu - 1.0) / cs.b) \
            * (top / (2.0 * cs.b * (1.0 + h))) ** ((mu - 1.0) / 2.0)
    else:
        c1 = (top / cs.a1) ** (1.0 / gamma)
        c2 = (cs.c / cs.b) * ((mu - 1.0) / gamma) \
            * (top / (2.0 * cs.b * max(1.0, h))) ** ((mu - 1.0) / gamma)
    return c1, c2


# -- functional evaluation ---------------------------------------------------

def functional_value(phi: HistorySegment, lyap: LyapunovData,
                     rhs: HomogeneousRHS, weights: WeightSplit,
                     delta: Optional[float] = None,
                     scalar: Optional[bool] = None) -> float:
    """v(phi) by composite Simpson quadrature on the history grid.

    Outside a certificate's delta-ball the value is still computed but a
    warning is issued (the bounds only hold inside).
    """
    if phi.n_intervals < 4:
        raise ValueError("history grid too coarse for quadrature")
    if delta is not None and phi.sup_norm > delta:
        warnings.warn("history sup norm exceeds the certificate delta; "
                      "functional bounds are not guaranteed", stacklevel=2)
    if scalar is None:
        scalar = scalar_path_applicable(rhs)
    h = phi.h
    theta = phi.theta
    weight = weights.w1 + (h + theta) * weights.w2
    if scalar:
        _, alpha2 = scalar_coefficients(rhs)
        u = phi.values[:, 0]
        head = (u[-1] + alpha2 * simpson(signed_power(u, rhs.mu), x=theta)) ** 2
        tail = simpson(weight * signed_power(u, rhs.mu + 1.0), x=theta)
        return float(head + tail)
    x0 = phi.values[-1]
    fvals = rhs.batch(np.tile(x0, (len(theta), 1)), phi.values)
    head = lyap.value(x0) + lyap.gradient(x0) @ simpson(fvals, x=theta, axis=0)
    norms = np.linalg.norm(phi.values, axis=1)
    tail = simpson(weight * norms ** (lyap.gamma + rhs.mu - 1.0), x=theta)
    return float(head + tail)


@dataclass(frozen=True)
class FunctionalTrace:
    """v(x_t) along a trajectory with its numeric derivative and decay bounds.

    `bound_integral` is -c*(||x(t)||^p + int ||x(t+s)||^p ds); `bound_power`
    is -L2*v^((gamma+mu-1)/gamma).  Both should dominate `derivative` up to
    quadrature slack.
    """

    times: np.ndarray
    values: np.ndarray
    derivative: np.ndarray
    bound_integral: np.ndarray
    bound_power: np.ndarray


def functional_derivative_trace(traj: Trajectory, cert: KrasovskiiCertificate,
                                lyap: LyapunovData, rhs: HomogeneousRHS,
                                times=None, n_samples: int = 60
                                ) -> FunctionalTrace:
    """Sample v(x_t), its central-difference derivative and the decay bounds.

    Sample times must keep the whole window [t-h, t] on the trajectory and
    inside the certificate's delta-ball.
    """
    if not traj.full:
        raise ValueError("functional traces need full trajectory storage")
    dt = traj.step
    m = int(round(traj.h / dt))
    if times is None:
        lo, hi = m + 1, int(round(traj.T / dt)) - 1
        idx = np.unique(np.linspace(lo, hi, min(n_samples, hi - lo + 1)
                                    ).astype(int))
    else:
        idx = np.unique([int(round(t / dt)) for t in np.atleast_1d(times)])
    p = lyap.gamma + rhs.mu - 1.0 if not cert.scalar else rhs.mu + 1.0

    def v_at(i):
        return functional_value(traj.window(i * dt), lyap, rhs, cert.weights,
                                scalar=cert.scalar)

    values = np.empty(len(idx))
    deriv = np.empty(len(idx))
    bound_int = np.empty(len(idx))
    for j, i in enumerate(idx):
        win = traj.window(i * dt)
        if win.sup_norm > cert.delta * (1 + 1e-12):
            raise ValueError(f"window at t={i * dt:.6g} leaves the delta-ball")
        values[j] = functional_value(win, lyap, rhs, cert.weights,
                                     scalar=cert.scalar)
        deriv[j] = (v_at(i + 1) - v_at(i - 1)) / (2.0 * dt)
        norms = np.linalg.norm(win.values, axis=1)
        bound_int[j] = -cert.c * (norms[-1] ** p
                                  + simpson(norms ** p, x=win.theta))
    gamma = cert.gamma
    bound_pow = -cert.L2 * values ** ((gamma + rhs.mu - 1.0) / gamma)
    return FunctionalTrace(times=idx * dt, values=values, derivative=deriv,
                           bound_integral=bound_int, bound_power=bound_pow)


__all__ = [
    "WeightSplit", "KrasovskiiCertificate", "krasovskii_certificate",
    "general_constants", "scalar_constants", "attraction_radius",
    "power_sum_constant", "power_sum_constant_even", "functional_value",
    "FunctionalTrace", "functional_derivative_trace", "scalar_coefficients",
    "scalar_path_applicable", "InfeasibleCertificateError",
]
