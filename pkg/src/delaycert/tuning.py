"""Free-parameter search maximizing the certified radius or envelope quality.

The certificate constants depend on tunable weights (chi, w1, w2, delta for
the functional route; alpha, delta for the comparison route).  `tune` runs
a coarse grid scan (10 points per axis) followed by a bounded Nelder-Mead
refinement from the best grid point; infeasible parameter sets score -inf
instead of raising, so the search surface stays total.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize

from .examples import SystemBundle
from .krasovskii import WeightSplit, krasovskii_certificate
from .razumikhin import InfeasibleCertificateError, razumikhin_certificate

TARGETS = ("max_radius", "min_c1", "max_c2")
METHODS = ("razumikhin", "krasovskii-general", "krasovskii-scalar")
GRID_POINTS_PER_AXIS = 10
GRID_BUDGET_SHARE = 0.8   # grid scan never consumes more than this share


class NoFeasibleCandidateError(RuntimeError):
    """The search budget produced no feasible certificate."""


@dataclass(frozen=True)
class TuningProblem:
    """Search specification: target metric, method, box bounds, budget."""

    system: SystemBundle
    target: str = "max_radius"
    method: str = "krasovskii-scalar"
    bounds: dict = field(default_factory=dict)   # param -> (lo, hi)
    budget: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if not self.bounds:
            object.__setattr__(self, "bounds",
                               default_bounds(self.method, self.system))
        for name, (lo, hi) in self.bounds.items():
            if not (lo <= hi):
                raise ValueError(f"empty bound for {name}")
            if name != "alpha" and lo <= 0:
                raise ValueError(f"{name} must stay positive")

    @property
    def param_names(self):
        return tuple(sorted(self.bounds))


def default_bounds(method: str, system: SystemBundle) -> dict:
    """Feasibility-respecting boxes for the tunable parameters."""
    rhs, lyap, growth = system
    if method == "razumikhin":
        from .razumikhin import delay_correction
        _, dmax = delay_correction(lyap, growth, rhs.h, rhs.mu, alpha=1.05)
        return {"alpha": (1.05, 4.0), "delta": (1e-4 * dmax, dmax * 0.999999)}
    w, h = lyap.w, rhs.h
    if method == "krasovskii-scalar":
        from .krasovskii import scalar_coefficients
        _, alpha2 = scalar_coefficients(rhs)
        chi_cap = (1.0 / (h * abs(alpha2))) ** 0.5
        # largest H1 over the box bounds the useful delta range
        dmax = (0.98 * w * (0.98 * chi_cap) ** 2 / abs(alpha2)) \
            ** (1.0 / (rhs.mu - 1.0))
        return {"chi": (0.02 * chi_cap, 0.98 * chi_cap),
                "w1": (0.02 * w, 0.98 * w),
                "w2": (0.02 * w / h, 0.98 * w / h),
                "delta": (1e-4 * dmax, dmax)}
    chi_cap = (0.98 * w / (lyap.k2 * growth.m)) ** (1.0 / (2.0 * (lyap.gamma - 1.0)))
    dmax = (lyap.k0 / (h * lyap.k2 * growth.m)) ** (1.0 / (rhs.mu - 1.0))
    return {"chi": (0.02 * chi_cap, 0.98 * chi_cap),
            "w1": (0.02 * w, 0.98 * w),
            "w2": (0.02 * w / h, 0.98 * w / h),
            "delta": (1e-4 * dmax, dmax)}


def _build_certificate(problem: TuningProblem, params: dict):
    rhs, lyap, growth = problem.system
    if problem.method == "razumikhin":
        return razumikhin_certificate(lyap, growth, rhs.h, rhs.mu,
                                      alpha=params.get("alpha", 2.0),
                                      delta=params["delta"])
    weights = WeightSplit.from_rate(lyap.w, rhs.h, w1=params.get("w1"),
                                    w2=params.get("w2"))
    path = "scalar" if problem.method == "krasovskii-scalar" else "general"
    return krasovskii_certificate(rhs, lyap, growth, weights=weights,
                                  chi=params.get("chi"), delta=params["delta"],
                                  path=path)


def _metric(problem: TuningProblem, cert) -> float:
    if problem.target == "max_radius":
        return cert.radius
    if problem.target == "min_c1":
        return -cert.c1
    return cert.c2


def evaluate_candidate(problem: TuningProblem, params: dict) -> float:
    """Score of one parameter set; -inf when the certificate is infeasible."""
    for name, value in params.items():
        lo, hi = problem.bounds[name]
        if not lo <= value <= hi:
            return -np.inf
    try:
        cert = _build_certificate(problem, params)
    except (InfeasibleCertificateError, ValueError):
        return -np.inf
    return _metric(problem, cert)


@dataclass(frozen=True)
class TuningResult:
    params: dict
    score: float
    certificate: object
    evaluations: int

    def to_dict(self):
        return {"params": self.params, "score": self.score,
                "evaluations": self.evaluations,
                "certificate": self.certificate.to_dict()}


def tune(problem: TuningProblem) -> TuningResult:
    """Grid scan plus simplex refinement; deterministic for a fixed seed."""
    names = problem.param_names
    axes = [np.linspace(problem.bounds[n][0], problem.bounds[n][1],
                        GRID_POINTS_PER_AXIS) for n in names]
    mesh = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    grid_cap = max(1, int(GRID_BUDGET_SHARE * problem.budget))
    if len(mesh) > grid_cap:
        rng = np.random.default_rng(problem.seed)
        mesh = mesh[rng.permutation(len(mesh))[:grid_cap]]

    evaluations = 0
    best_score, best_x = -np.inf, None
    for row in mesh:
        if evaluations >= problem.budget:
            break
        score = evaluate_candidate(problem, dict(zip(names, row)))
        evaluations += 1
        if score > best_score:
            best_score, best_x = score, row

    remaining = problem.budget - evaluations
    if best_x is not None and np.isfinite(best_score) and remaining > len(names):
        counter = [0]

        def objective(x):
            counter[0] += 1
            return -evaluate_candidate(problem, dict(zip(names, x)))

        res = optimize.minimize(
            objective, best_x, method="Nelder-Mead",
            bounds=optimize.Bounds(*zip(*(problem.bounds[n] for n in names))),
            options={"maxfev": remaining, "xatol": 1e-10, "fatol": 1e-12})
        evaluations += counter[0]
        if np.isfinite(res.fun) and -res.fun > best_score:
            best_score, best_x = -res.fun, res.x

    if best_x is None or not np.isfinite(best_score):
        raise NoFeasibleCandidateError(
            f"no feasible candidate within {problem.budget} evaluations")
    params = dict(zip(names, (float(v) for v in best_x)))
    cert = _build_certificate(problem, params)
    return TuningResult(params=params, score=best_score, certificate=cert,
                        evaluations=evaluations)


__all__ = ["TuningProblem", "TuningResult", "tune", "evaluate_candidate",
           "default_bounds", "NoFeasibleCandidateError", "TARGETS", "METHODS"]
