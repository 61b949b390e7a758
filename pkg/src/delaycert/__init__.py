"""Stability certificates, attraction regions and solution envelopes for
homogeneous time-delay systems x'(t) = f(x(t), x(t-h)) of degree mu > 1.

Two certificate routes are provided, both seeded by a Lyapunov function of
the delay-free system: a comparison-condition route (`razumikhin`) and a
functional route (`krasovskii`).  Each yields an attraction radius and an
algebraic-decay envelope c1*||phi||_h*(1 + c2*||phi||_h^(mu-1)*t)^(-1/(mu-1));
a fixed-step RK4 integrator with dense history validates the envelopes
against simulated trajectories.
"""
from .envelope import EstimateCurve
from .examples import ExampleSpec, SystemBundle, TABLE_PRESETS, build_example
from .history import HistorySegment, random_history
from .integrator import (BlowUpError, Trajectory, integrate, lyapunov_trace,
                         sup_norm_window)
from .krasovskii import (FunctionalTrace, InfeasibleCertificateError,
                         KrasovskiiCertificate, WeightSplit,
                         functional_derivative_trace, functional_value,
                         krasovskii_certificate, power_sum_constant,
                         power_sum_constant_even)
from .lyapunov import LyapunovData, LyapunovValidation, validate_lyapunov
from .razumikhin import (RazumikhinCertificate, comparison_initial_value,
                         comparison_solution, razumikhin_certificate,
                         short_time_bound)
from .systems import (GrowthConstants, HomogeneousRHS,
                      estimate_growth_constants, growth_bound_violation,
                      homogeneity_defect)
from .tuning import TuningProblem, TuningResult, tune

__version__ = "0.1.0"

__all__ = [
    "BlowUpError", "EstimateCurve", "ExampleSpec", "FunctionalTrace",
    "GrowthConstants", "HistorySegment", "HomogeneousRHS",
    "InfeasibleCertificateError", "KrasovskiiCertificate", "LyapunovData",
    "LyapunovValidation", "RazumikhinCertificate", "SystemBundle",
    "TABLE_PRESETS", "Trajectory", "TuningProblem", "TuningResult",
    "WeightSplit", "build_example", "comparison_initial_value",
    "comparison_solution", "estimate_growth_constants",
    "functional_derivative_trace", "functional_value",
    "growth_bound_violation", "homogeneity_defect", "integrate",
    "krasovskii_certificate", "lyapunov_trace", "power_sum_constant",
    "power_sum_constant_even", "random_history", "razumikhin_certificate",
    "short_time_bound", "sup_norm_window", "tune", "validate_lyapunov",
]
