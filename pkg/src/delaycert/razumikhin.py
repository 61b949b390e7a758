"""Razumikhin-type stability certificate for homogeneous delay systems.

The delay-free Lyapunov function V decays along solutions that satisfy the
comparison predicate V(x(xi)) < alpha*V(x(t)) on [t-2h, t]; bookkeeping of
the constants yields an attraction radius and an algebraic-decay envelope:

    k4    delay-correction coefficient; decay margin k5 = w - k4*delta^(mu-1)
    delta_max = (w/k4)^(1/(mu-1)), the largest usable delta
    kappa = (k0/k1)^(1/gamma); gain = short-horizon inflation factor
    radius: unique root of r + m*h*r^mu = kappa*delta/gain
    rho   : decay rate of the scalar comparison equation z' = -rho*z^p
    amp/rate (A/B) -> envelope constants (c1, c2)
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import EstimateCurve
from .lyapunov import LyapunovData
from .roots import bisect_increasing
from .systems import GrowthConstants

RHO_MARGIN = 1e-3  # rho is placed at (1 - margin) times its feasibility cap


class InfeasibleCertificateError(RuntimeError):
    """Requested parameters violate a positivity or admissibility condition."""


@dataclass(frozen=True)
class RazumikhinCertificate:
    """Constant bundle (alpha, delta, ..., c1, c2) of the Razumikhin route.

    Fields mirror the certificate JSON: `radius` is the certified
    attraction radius, `amp`/`rate` the pre-envelope constants A and B,
    (c1, c2) the envelope constants, `rho_cap` the differential-inequality
    bound on rho.
    """

    alpha: float
    delta: float
    delta_max: float
    k4: float
    k5: float
    kappa: float
    gain: float
    radius: float
    rho_cap: float
    rho: float
    amp: float
    rate: float
    c1: float
    c2: float
    mu: float
    gamma: float
    h: float

    @property
    def envelope(self) -> EstimateCurve:
        return EstimateCurve(c1=self.c1, c2=self.c2, mu=self.mu)

    def to_dict(self):
        return {
            "method": "razumikhin",
            "alpha": self.alpha, "delta": self.delta, "delta_max": self.delta_max,
            "k4": self.k4, "k5": self.k5, "kappa": self.kappa, "gain": self.gain,
            "radius": self.radius, "rho_cap": self.rho_cap, "rho": self.rho,
            "amp": self.amp, "rate": self.rate, "c1": self.c1, "c2": self.c2,
            "mu": self.mu, "gamma": self.gamma, "h": self.h,
        }


def delay_correction(lyap: LyapunovData, growth: GrowthConstants, h: float,
                     mu: float, alpha: float) -> tuple[float, float]:
    """(k4, delta_max): mean-value delay correction and the largest usable delta.

    In the delay-free limit h = 0 the correction vanishes and any delta is
    admissible (delta_max = inf).
    """
    if not alpha > 1:
        raise ValueError("the comparison margin alpha must exceed 1")
    r = alpha * lyap.k1 / lyap.k0
    k4 = (2.0 * h * growth.m * growth.m2 * lyap.k2
          * r ** (mu / lyap.gamma) * (1.0 + r ** ((mu - 1.0) / lyap.gamma)))
    if k4 == 0.0:
        return 0.0, np.inf
    if k4 < 0:
        raise InfeasibleCertificateError("negative delay correction")
    return k4, (lyap.w / k4) ** (1.0 / (mu - 1.0))


def decay_margin(w: float, k4: float, delta: float, mu: float) -> float:
    """k5 = w - k4*delta^(mu-1); positive only below delta_max."""
    k5 = w - k4 * delta ** (mu - 1.0)
    if k5 <= 0:
        raise InfeasibleCertificateError(
            f"delta={delta:.6g} is not below delta_max={(w / k4) ** (1 / (mu - 1)):.6g}")
    return k5


def contraction_gain(lyap: LyapunovData, growth: GrowthConstants, h: float,
                     mu: float, delta: float) -> tuple[float, float]:
    """(kappa, gain): norm-equivalence ratio and short-horizon inflation."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    kappa = (lyap.k0 / lyap.k1) ** (1.0 / lyap.gamma)
    gain = (1.0 + (mu - 1.0) * growth.m * h * (kappa * delta) ** (mu - 1.0)) \
        ** (1.0 / (mu - 1.0))
    return kappa, gain


def attraction_radius(m: float, h: float, mu: float, kappa: float,
                      gain: float, delta: float) -> float:
    """Unique positive root of r + m*h*r^mu = kappa*delta/gain."""
    target = kappa * delta / gain
    return bisect_increasing(lambda r: r + m * h * r ** mu, target, target)


def rate_caps(lyap, h, mu, alpha, delta, k5, gain, radius):
    """Feasibility caps on the comparison rate rho (all must stay strict)."""
    e = (mu - 1.0) / lyap.gamma
    cap1 = k5 * lyap.k1 ** (-(lyap.gamma + mu - 1.0) / lyap.gamma)
    cap2 = (alpha ** e - 1.0) / (2.0 * h * e * lyap.k0 ** e * delta ** (mu - 1.0)) \
        if h > 0 else np.inf
    cap3 = 1.0 / (e * lyap.k1 ** e * gain ** (mu - 1.0) * h * radius ** (mu - 1.0)) \
        if h > 0 else np.inf
    return cap1, cap2, cap3


def rho_admissible(lyap, h, mu, alpha, delta, k5, gain, radius, rho) -> bool:
    """Check the three conditions 0 < rho < rho_cap and the two delay caps."""
    cap1, cap2, cap3 = rate_caps(lyap, h, mu, alpha, delta, k5, gain, radius)
    return 0.0 < rho < cap1 and rho < cap2 and rho < cap3


def select_rho(lyap, h, mu, alpha, delta, k5, gain, radius,
               margin: float = RHO_MARGIN) -> float:
    """rho = (1 - margin) * min of the three feasibility caps."""
    caps = rate_caps(lyap, h, mu, alpha, delta, k5, gain, radius)
    rho = (1.0 - margin) * min(caps)
    if rho <= 0 or not rho_admissible(lyap, h, mu, alpha, delta, k5, gain,
                                      radius, rho):
        raise InfeasibleCertificateError("no admissible comparison rate")
    return rho


def envelope_constants(lyap, growth, h, mu, delta, kappa, gain, radius, rho):
    """(amp, rate, c1, c2); amp equals delta/radius by the root identity."""
    e = (mu - 1.0) / lyap.gamma
    amp = gain * (1.0 + growth.m * h * radius ** (mu - 1.0)) / kappa
    rate = rho * e * lyap.k1 ** e \
        * (gain * (1.0 + growth.m * h * radius ** (mu - 1.0))) ** (mu - 1.0)
    den = 1.0 - rate * h * radius ** (mu - 1.0)
    if den <= 0:
        raise InfeasibleCertificateError(
            "rate condition violated: 1 - B*h*radius^(mu-1) <= 0")
    c1 = amp / den ** (1.0 / (mu - 1.0))
    c2 = rate / den
    return amp, rate, c1, c2


def short_time_bound(phi_norm: float, m: float, h: float, mu: float,
                     gain: float) -> float:
    """Bound gain*(||phi||_h + m*h*||phi||_h^mu) on ||x(t)|| for t in [0, h]."""
    return gain * (phi_norm + m * h * phi_norm ** mu)


def comparison_solution(z0: float, rho: float, gamma: float, mu: float, t,
                        h: float = 0.0):
    """Closed form of z' = -rho*z^((gamma+mu-1)/gamma), z(h) = z0, for t >= h."""
    if z0 < 0:
        raise ValueError("initial value must be nonnegative")
    t = np.asarray(t, dtype=float)
    if np.any(t < h - 1e-12):
        raise ValueError("comparison solution is defined for t >= h")
    e = (mu - 1.0) / gamma
    return z0 * (1.0 + rho * e * z0 ** e * (t - h)) ** (-gamma / (mu - 1.0))


def comparison_initial_value(lyap, gain, phi_norm, m, h, mu) -> float:
    """z0 = k1*gain^gamma*(||phi||_h + m*h*||phi||_h^mu)^gamma dominating V(x(h))."""
    return lyap.k1 * gain ** lyap.gamma * (phi_norm + m * h * phi_norm ** mu) \
        ** lyap.gamma


def razumikhin_certificate(lyap: LyapunovData, growth: GrowthConstants,
                           h: float, mu: float, alpha: float = 2.0,
                           delta: float = None, rho: float = None
                           ) -> RazumikhinCertificate:
    """Build the full certificate; delta defaults to delta_max*(1 - 1e-6).

    An explicit rho is validated against all three admissibility
    conditions; by default rho sits at (1 - 1e-3) times its cap.
    """
    k4, delta_max = delay_correction(lyap, growth, h, mu, alpha)
    if delta is None:
        if not np.isfinite(delta_max):
            raise ValueError("delta is required when the delay correction "
                             "vanishes (h = 0)")
        delta = delta_max * (1.0 - 1e-6)
    if not 0 < delta < delta_max:
        raise InfeasibleCertificateError(
            f"delta must lie in (0, {delta_max:.6g}), got {delta:.6g}")
    k5 = decay_margin(lyap.w, k4, delta, mu)
    kappa, gain = contraction_gain(lyap, growth, h, mu, delta)
    radius = attraction_radius(growth.m, h, mu, kappa, gain, delta)
    caps = rate_caps(lyap, h, mu, alpha, delta, k5, gain, radius)
    if rho is None:
        rho = select_rho(lyap, h, mu, alpha, delta, k5, gain, radius)
    elif not rho_admissible(lyap, h, mu, alpha, delta, k5, gain, radius, rho):
        raise InfeasibleCertificateError(f"rho={rho:.6g} is not admissible")
    amp, rate, c1, c2 = envelope_constants(lyap, growth, h, mu, delta, kappa,
                                           gain, radius, rho)
    return RazumikhinCertificate(
        alpha=alpha, delta=delta, delta_max=delta_max, k4=k4, k5=k5,
        kappa=kappa, gain=gain, radius=radius, rho_cap=caps[0], rho=rho,
        amp=amp, rate=rate, c1=c1, c2=c2, mu=mu, gamma=lyap.gamma, h=h)


__all__ = [
    "RazumikhinCertificate", "InfeasibleCertificateError",
    "razumikhin_certificate", "delay_correction", "decay_margin",
    "contraction_gain", "attraction_radius", "rate_caps", "rho_admissible",
    "select_rho", "envelope_constants", "short_time_bound",
    "comparison_solution", "comparison_initial_value",
]
