"""Algebraic-decay solution envelopes c1*||phi||_h * (1 + c2*||phi||_h^(mu-1)*t)^(-1/(mu-1))."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EstimateCurve:
    """Envelope of the solution norm for initial histories of a given sup norm."""

    c1: float
    c2: float
    mu: float

    def evaluate(self, t, phi_norm: float):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise ValueError("envelope is defined for t >= 0")
        p = float(phi_norm)
        return self.c1 * p * (1.0 + self.c2 * p ** (self.mu - 1.0) * t) \
            ** (-1.0 / (self.mu - 1.0))

    __call__ = evaluate

    def to_dict(self):
        return {"c1": self.c1, "c2": self.c2, "mu": self.mu}


__all__ = ["EstimateCurve"]
