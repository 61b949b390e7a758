"""Side-by-side comparison of the two certificate routes at equal delta.

Produces both certificates, the limiting-rate constant that the comparison
rate approaches when the delay caps are slack, per-decade envelope
verdicts, and (optionally) a simulated trajectory checked against both
envelopes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .examples import SystemBundle
from .history import HistorySegment
from .integrator import default_step, integrate
from .krasovskii import KrasovskiiCertificate, WeightSplit, krasovskii_certificate
from .razumikhin import RazumikhinCertificate, razumikhin_certificate


@dataclass(frozen=True)
class ComparisonReport:
    """Both certificates at the same working radius delta, plus diagnostics.

    `rate_limit` is the small-delta limit of the envelope rate constant
    (the decay-margin form of B); `ratios` carries the decay/scale ratios
    (k5/k1 vs c/b, k0/k1 vs a1/b) driving the small-delta comparison.
    """

    delta: float
    lr: RazumikhinCertificate
    lk: KrasovskiiCertificate
    rate_limit: float                  # B-tilde
    ratios: dict
    identity_residuals: dict
    decades: tuple = ()
    samples: Optional[dict] = field(default=None, repr=False)
    lr_dominates: Optional[bool] = None
    lk_dominates: Optional[bool] = None

    def to_dict(self):
        d = {"delta": self.delta, "razumikhin": self.lr.to_dict(),
             "krasovskii": self.lk.to_dict(), "rate_limit": self.rate_limit,
             "ratios": self.ratios, "identity_residuals": self.identity_residuals,
             "decades": [{"t": t, "tighter": v} for t, v in self.decades]}
        if self.lr_dominates is not None:
            d["lr_envelope_dominates"] = self.lr_dominates
            d["lk_envelope_dominates"] = self.lk_dominates
        return d


def rate_limit_constant(lr: RazumikhinCertificate, lyap) -> float:
    """(k5/k1)*((mu-1)/gamma)*(k0/k1)^((mu-1)/gamma)*(delta/radius)^(mu-1)."""
    e = (lr.mu - 1.0) / lr.gamma
    return (lr.k5 / lyap.k1) * e * (lyap.k0 / lyap.k1) ** e \
        * (lr.delta / lr.radius) ** (lr.mu - 1.0)


def compare(bundle: SystemBundle, delta: float, lk_params: dict = None,
            alpha: float = 2.0, phi: HistorySegment = None,
            T: float = None, step: float = None,
            n_samples: int = 400) -> ComparisonReport:
    """Build both certificates at the same delta and compare envelopes.

    When an initial history is given, the system is simulated over [0, T]
    (default 1e4*h) and both envelopes are checked for domination at every
    output node.
    """
    rhs, lyap, growth = bundle
    lk_params = dict(lk_params or {})
    lr = razumikhin_certificate(lyap, growth, rhs.h, rhs.mu, alpha=alpha,
                                delta=delta)
    weights = None
    if "w1" in lk_params or "w2" in lk_params:
        weights = WeightSplit.from_rate(lyap.w, rhs.h, w1=lk_params.pop("w1", None),
                                        w2=lk_params.pop("w2", None))
    lk = krasovskii_certificate(rhs, lyap, growth, weights=weights,
                                delta=delta, **lk_params)
    ratios = {
        "k5_over_k1": lr.k5 / lyap.k1,
        "c_over_b": lk.c / lk.b,
        "k0_over_k1": lyap.k0 / lyap.k1,
        "a1_over_b": lk.a1 / lk.b,
    }
    residuals = {
        "lr_amp_radius": abs(lr.amp * lr.radius - delta) / delta,
        "lk_c1_radius": abs(lk.c1 * lk.radius - delta) / delta,
    }

    horizon = T if T is not None else 1e4 * rhs.h
    pn = phi.sup_norm if phi is not None else min(lr.radius, lk.radius) * 0.9
    decades = []
    t_dec = rhs.h
    while t_dec <= horizon:
        lr_v = lr.envelope.evaluate(t_dec, pn)
        lk_v = lk.envelope.evaluate(t_dec, pn)
        decades.append((t_dec, "razumikhin" if lr_v < lk_v else "krasovskii"))
        t_dec *= 10.0

    samples = lr_dom = lk_dom = None
    if phi is not None:
        traj = integrate(rhs, phi, horizon, step=step, output=n_samples)
        norms = traj.norms()
        lr_env = lr.envelope.evaluate(traj.times, pn)
        lk_env = lk.envelope.evaluate(traj.times, pn)
        samples = {"t": traj.times, "norm": norms,
                   "razumikhin_envelope": lr_env, "krasovskii_envelope": lk_env}
        lr_dom = bool(np.all(norms <= lr_env))
        lk_dom = bool(np.all(norms <= lk_env))
    return ComparisonReport(delta=delta, lr=lr, lk=lk,
                            rate_limit=rate_limit_constant(lr, lyap),
                            ratios=ratios, identity_residuals=residuals,
                            decades=tuple(decades), samples=samples,
                            lr_dominates=lr_dom, lk_dominates=lk_dom)


def emit_figure_data(bundle: SystemBundle, lr: RazumikhinCertificate,
                     lk: KrasovskiiCertificate, phi: HistorySegment,
                     T: float, path, step: float = None,
                     n_samples: int = 2000):
    """CSV of t, ||x(t)|| and both envelopes on log-spaced output nodes.

    Errors when the history lies outside both certified regions; a history
    covered by only one certificate is emitted with a warning (only that
    envelope is guaranteed).  Columns are bit-stable for a fixed step.
    """
    import warnings
    rhs = bundle.rhs
    if phi.sup_norm >= max(lr.radius, lk.radius):
        raise ValueError(
            f"history sup norm {phi.sup_norm:.6g} is outside both certified "
            f"regions (radii {lr.radius:.6g}, {lk.radius:.6g})")
    if phi.sup_norm >= min(lr.radius, lk.radius):
        warnings.warn(
            f"history sup norm {phi.sup_norm:.6g} is certified by only one "
            f"region (radii {lr.radius:.6g}, {lk.radius:.6g})", stacklevel=2)
    if step is None:
        step = default_step(rhs.h)
    traj = integrate(rhs, phi, T, step=step, output=n_samples)
    pn = phi.sup_norm
    norms = traj.norms()
    lr_env = lr.envelope.evaluate(traj.times, pn)
    lk_env = lk.envelope.evaluate(traj.times, pn)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["t", "norm", "razumikhin_envelope", "krasovskii_envelope"])
        for row in zip(traj.times, norms, lr_env, lk_env):
            wr.writerow([format(v, ".17g") for v in row])
    return traj.times, norms, lr_env, lk_env


__all__ = ["ComparisonReport", "compare", "emit_figure_data",
           "rate_limit_constant"]
