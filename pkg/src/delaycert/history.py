"""Initial-history segments on [-h, 0] with cubic-Hermite dense output."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class HistorySegment:
    """Dense initial function phi on [-h, 0].

    Stores node values and node derivatives on a uniform grid; evaluation
    between nodes is cubic Hermite, which reproduces node values exactly.
    The cached sup norm is the max state norm over nodes and midpoints.
    """

    h: float
    theta: np.ndarray          # uniform grid -h = theta_0 < ... < theta_N = 0
    values: np.ndarray         # (N+1, n)
    derivs: np.ndarray         # (N+1, n)
    sup_norm: float = field(init=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        if values.shape[0] != theta.shape[0]:
            values = values.T
        derivs = np.atleast_2d(np.asarray(self.derivs, dtype=float))
        if derivs.shape[0] != theta.shape[0]:
            derivs = derivs.T
        N = theta.shape[0] - 1
        if N < 4:
            raise ValueError("history grid too coarse: need at least 4 intervals")
        if self.h <= 0:
            raise ValueError("history requires a positive delay")
        if abs(theta[0] + self.h) > 1e-12 * self.h or abs(theta[-1]) > 1e-12 * self.h:
            raise ValueError("grid must span [-h, 0]")
        steps = np.diff(theta)
        if np.max(np.abs(steps - steps[0])) > 1e-12 * self.h:
            raise ValueError("history grid must be uniform")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "derivs", derivs)
        mids = self.evaluate(theta[:-1] + 0.5 * steps[0])
        sup = max(np.linalg.norm(values, axis=1).max(),
                  np.linalg.norm(mids, axis=1).max())
        object.__setattr__(self, "sup_norm", float(sup))

    @property
    def n(self) -> int:
        return self.values.shape[1]

    @property
    def n_intervals(self) -> int:
        return self.theta.shape[0] - 1

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, h, n_nodes: int = 129):
        v = np.atleast_1d(np.asarray(value, dtype=float))
        theta = np.linspace(-h, 0.0, n_nodes)
        vals = np.tile(v, (n_nodes, 1))
        return cls(h=float(h), theta=theta, values=vals, derivs=np.zeros_like(vals))

    @classmethod
    def from_callable(cls, fn, h, n_nodes: int = 257, derivative=None):
        theta = np.linspace(-h, 0.0, n_nodes)
        vals = np.stack([np.atleast_1d(np.asarray(fn(t), dtype=float)) for t in theta])
        if derivative is not None:
            der = np.stack([np.atleast_1d(np.asarray(derivative(t), dtype=float))
                            for t in theta])
        else:
            eps = 1e-6 * max(h, 1.0)
            der = np.stack([
                (np.atleast_1d(fn(min(t + eps, 0.0))) -
                 np.atleast_1d(fn(max(t - eps, -h))))
                / ((min(t + eps, 0.0)) - (max(t - eps, -h)))
                for t in theta])
        return cls(h=float(h), theta=theta, values=vals, derivs=der)

    @classmethod
    def from_samples(cls, theta, values, h=None, derivs=None):
        theta = np.asarray(theta, dtype=float)
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if values.shape[0] != theta.shape[0]:
            values = values.T
        if h is None:
            h = -theta[0]
        if derivs is None:
            derivs = np.gradient(values, theta, axis=0, edge_order=2)
        return cls(h=float(h), theta=theta, values=values, derivs=derivs)

    @classmethod
    def from_dict(cls, spec, h=None):
        """History JSON: {"constant": [..]} or {"samples": {"theta": [...], "values": [[..]]}}."""
        if "constant" in spec:
            if h is None:
                raise ValueError("constant history requires the delay h")
            return cls.constant(spec["constant"], h)
        if "samples" in spec:
            s = spec["samples"]
            return cls.from_samples(s["theta"], s["values"], h=h,
                                    derivs=s.get("derivatives"))
        raise ValueError("history spec needs a 'constant' or 'samples' field")

    # -- dense evaluation ----------------------------------------------------

    def evaluate(self, t):
        """Cubic-Hermite dense value(s) at t in [-h, 0]."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        dt = self.theta[1] - self.theta[0]
        k = np.clip(((t - self.theta[0]) / dt).astype(int), 0, self.n_intervals - 1)
        s = (t - self.theta[k]) / dt
        s = s[:, None]
        h00 = 2 * s ** 3 - 3 * s ** 2 + 1
        h10 = s ** 3 - 2 * s ** 2 + s
        h01 = -2 * s ** 3 + 3 * s ** 2
        h11 = s ** 3 - s ** 2
        out = (h00 * self.values[k] + dt * h10 * self.derivs[k]
               + h01 * self.values[k + 1] + dt * h11 * self.derivs[k + 1])
        return out[0] if scalar else out

    def to_dict(self):
        return {"samples": {"theta": self.theta.tolist(),
                            "values": self.values.tolist(),
                            "derivatives": self.derivs.tolist()}}


def random_history(h, n, sup_norm, seed, n_nodes: int = 257, modes: int = 4):
    """Smooth random Fourier history scaled to the requested sup norm."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(modes + 1, n))
    b = rng.normal(size=(modes, n))

    def phi(t):
        out = np.broadcast_to(a[0], np.shape(t) + (n,)).copy() \
            if np.ndim(t) else a[0].copy()
        for j in range(1, modes + 1):
            c = np.cos(j * np.pi * np.asarray(t) / h)
            s = np.sin(j * np.pi * np.asarray(t) / h)
            out = out + np.multiply.outer(c, a[j]) + np.multiply.outer(s, b[j - 1])
        return out

    def dphi(t):
        out = np.zeros(np.shape(t) + (n,)) if np.ndim(t) else np.zeros(n)
        for j in range(1, modes + 1):
            wj = j * np.pi / h
            c = np.cos(wj * np.asarray(t))
            s = np.sin(wj * np.asarray(t))
            out = out + np.multiply.outer(-wj * s, a[j]) + np.multiply.outer(wj * c, b[j - 1])
        return out

    seg = HistorySegment.from_callable(phi, h, n_nodes=n_nodes, derivative=dphi)
    scale = sup_norm / seg.sup_norm
    return HistorySegment(h=h, theta=seg.theta, values=seg.values * scale,
                          derivs=seg.derivs * scale)


__all__ = ["HistorySegment", "random_history"]
