"""Fixed-step RK4 integration of homogeneous delay systems (method of steps).

The step divides the delay exactly, so delayed node lookups land on grid
nodes of the stored previous window; half-step lookups use cubic-Hermite
midpoints, matching the integrator's fourth order.  Long horizons store a
log-thinned set of output nodes plus the active delay window instead of
the full grid.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .history import HistorySegment
from .systems import HomogeneousRHS

FULL_STORE_LIMIT = 2_000_000     # max node count kept as a dense grid
DEFAULT_THINNED_OUTPUTS = 2000
GUARD_FACTOR = 1e6               # blow-up abort at 1e6*(1+||phi||_h)


class BlowUpError(RuntimeError):
    """Solution norm exceeded the finite-escape guard."""

    def __init__(self, t, norm_bound):
        super().__init__(f"solution norm exceeded {norm_bound:.3g} at t={t:.6g}; "
                         "initial history is outside the attraction region")
        self.t = t


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Solution of the delay system on [-h, T].

    `times`/`states`/`derivs` hold the stored output nodes (every grid node
    when `full`, a thinned subset otherwise).  The generating history and
    the final delay window are always retained.
    """

    rhs: HomogeneousRHS
    history: HistorySegment
    step: float
    T: float
    times: np.ndarray
    states: np.ndarray
    derivs: Optional[np.ndarray]
    full: bool
    final_window: HistorySegment = field(repr=False, default=None)

    @property
    def h(self) -> float:
        return self.rhs.h

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def evaluate(self, t):
        """Dense solution value(s); needs full storage for t > 0."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        if t.min() < -self.h - 1e-12 or t.max() > self.T + 1e-12:
            raise ValueError("evaluation time outside [-h, T]")
        out = np.empty((t.shape[0], self.rhs.n))
        neg = t < 0
        if np.any(neg):
            out[neg] = self.history.evaluate(t[neg])
        pos = ~neg
        if np.any(pos):
            if not self.full:
                raise ValueError("dense evaluation requires full storage")
            out[pos] = _hermite(t[pos], self.step, self.times, self.states, self.derivs)
        return out[0] if scalar else out

    def window(self, t) -> HistorySegment:
        """Restriction of the solution to [t-h, t] as a history segment."""
        if t < 0 or t > self.T + 1e-12:
            raise ValueError("window time outside [0, T]")
        if not self.full:
            if abs(t - self.T) <= 1e-9 * max(self.T, 1.0):
                return self.final_window
            raise ValueError("thinned trajectory only retains the final window")
        m = int(round(self.h / self.step))
        i1 = int(round(t / self.step))
        if abs(i1 * self.step - t) > 1e-9 * max(self.h, 1.0):
            raise ValueError("window time must lie on the step grid")
        grid = (np.arange(i1 - m, i1 + 1)) * self.step
        vals = np.empty((m + 1, self.rhs.n))
        ders = np.empty((m + 1, self.rhs.n))
        for k, tk in enumerate(grid):
            if tk < 0:
                vals[k] = self.history.evaluate(tk)
                ders[k] = _hermite_deriv(tk, self.history)
            else:
                vals[k] = self.states[int(round(tk / self.step))]
                ders[k] = self.derivs[int(round(tk / self.step))]
        return HistorySegment(h=self.h, theta=grid - t, values=vals, derivs=ders)

    def to_csv(self, path, lyap=None):
        """Columns t, x_1..x_n, norm, V (V blank without a Lyapunov function)."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t"] + [f"x_{i + 1}" for i in range(self.rhs.n)]
                        + ["norm", "V"])
            norms = self.norms()
            for i, t in enumerate(self.times):
                row = [_g17(t)] + [_g17(v) for v in self.states[i]] + [_g17(norms[i])]
                row.append(_g17(lyap.value(self.states[i])) if lyap is not None else "")
                wr.writerow(row)


def _g17(v):
    return format(float(v), ".17g")


def _hermite(t, dt, times, states, derivs):
    k = np.clip((t / dt).astype(int), 0, len(times) - 2)
    s = ((t - times[k]) / dt)[:, None]
    h00 = 2 * s ** 3 - 3 * s ** 2 + 1
    h10 = s ** 3 - 2 * s ** 2 + s
    h01 = -2 * s ** 3 + 3 * s ** 2
    h11 = s ** 3 - s ** 2
    return (h00 * states[k] + dt * h10 * derivs[k]
            + h01 * states[k + 1] + dt * h11 * derivs[k + 1])


def _hermite_deriv(t, seg: HistorySegment):
    eps = 1e-7 * seg.h
    lo, hi = max(t - eps, -seg.h), min(t + eps, 0.0)
    return (seg.evaluate(hi) - seg.evaluate(lo)) / (hi - lo)


def default_step(h: float) -> float:
    """h/1000 capped at 0.01, adjusted to divide h exactly."""
    s = min(h / 1000.0, 0.01)
    return h / int(round(h / s))


def integrate(rhs: HomogeneousRHS, history: HistorySegment, T: float,
              step: Optional[float] = None, output="auto",
              guard_factor: float = GUARD_FACTOR) -> Trajectory:
    """Integrate x'(t) = f(x(t), x(t-h)) from the given history over [0, T].

    Parameters
    ----------
    step : RK4 step; must divide h exactly (default h/1000 capped at 0.01).
    output : "auto" stores the full grid up to FULL_STORE_LIMIT nodes and
        log-thins beyond; "full" forces dense storage; an integer requests
        that many log-spaced output nodes; an array gives output times.

    Raises
    ------
    BlowUpError when ||x(t)|| exceeds guard_factor*(1+||phi||_h); degree
    mu > 1 systems can escape in finite time outside the attraction region.
    """
    if T < 0:
        raise ValueError("horizon T must be nonnegative")
    if rhs.h <= 0:
        raise ValueError("integration requires a positive delay")
    if history.n != rhs.n:
        raise ValueError("history dimension does not match the system")
    if step is None:
        step = default_step(rhs.h)
    m = int(round(rhs.h / step))
    if m < 1 or abs(m * step - rhs.h) > 8 * np.finfo(float).eps * rhs.h:
        raise ValueError(f"step {step} does not divide the delay {rhs.h}")
    nsteps = int(round(T / step))

    # delayed reads during the first window come from the history interpolant
    tg = np.arange(m + 1) * step - rhs.h
    y0nodes = history.evaluate(tg)
    y0mid = history.evaluate(tg[:-1] + 0.5 * step)
    x0 = history.evaluate(0.0)

    full = _wants_full(output, nsteps)
    out_idx = _output_indices(output, nsteps, m, full, step)
    guard = guard_factor * (1.0 + history.sup_norm)

    arrays = rhs.kernel_arrays()
    if arrays is not None:
        from . import _kernels
        out_states = np.empty((out_idx.shape[0], rhs.n))
        if full:
            full_states = np.empty((nsteps + 1, rhs.n))
            full_derivs = np.empty((nsteps + 1, rhs.n))
        else:
            full_states = np.empty((1, 1))
            full_derivs = np.empty((1, 1))
        status, reached, xprev, dprev, xcur, dcur, fill = _kernels.rk4_delay(
            *arrays, step, m, nsteps, np.ascontiguousarray(x0, dtype=float),
            np.ascontiguousarray(y0nodes), np.ascontiguousarray(y0mid),
            out_idx, out_states, full, full_states, full_derivs, guard)
    else:
        status, reached, out_states, xprev, dprev, xcur, dcur, fill, \
            full_states, full_derivs = _python_rk4(
                rhs, step, m, nsteps, x0, y0nodes, y0mid, out_idx, full, guard)

    if status != 0:
        raise BlowUpError(reached * step, guard)

    if full:
        times = np.arange(nsteps + 1) * step
        states, derivs = full_states, full_derivs
    else:
        times = out_idx * step
        states, derivs = out_states, None

    fw = _final_window(rhs, history, step, m, nsteps, xprev, dprev, xcur, dcur,
                       full, states, derivs)
    return Trajectory(rhs=rhs, history=history, step=step, T=nsteps * step,
                      times=times, states=states, derivs=derivs, full=full,
                      final_window=fw)


def _wants_full(output, nsteps):
    if isinstance(output, str):
        if output == "full":
            return True
        if output == "auto":
            return nsteps + 1 <= FULL_STORE_LIMIT
        raise ValueError(f"unknown output mode {output!r}")
    return False


def _output_indices(output, nsteps, m, full, step):
    if full:
        return np.empty(0, dtype=np.int64)
    if isinstance(output, (int, np.integer)):
        count = int(output)
    elif isinstance(output, str):
        count = DEFAULT_THINNED_OUTPUTS
    else:
        idx = np.round(np.asarray(output, dtype=float) / step).astype(np.int64)
        idx = np.clip(idx, 0, nsteps)
        return np.unique(np.concatenate([[0], idx, [nsteps]]))
    geo = np.geomspace(1, max(nsteps, 1), count).astype(np.int64)
    lin = np.arange(0, min(nsteps, 10 * m) + 1, max(1, m // 10), dtype=np.int64)
    return np.unique(np.concatenate([[0], lin, geo, [nsteps]]))


def _python_rk4(rhs, dt, m, nsteps, x0, y0nodes, y0mid, out_idx, full, guard):
    """Reference stepping path for non-declarative systems."""
    n = rhs.n
    x = np.array(x0, dtype=float)
    xprev = np.zeros((m + 1, n))
    dprev = np.zeros((m + 1, n))
    xcur = np.zeros((m + 1, n))
    dcur = np.zeros((m + 1, n))
    out_states = np.empty((out_idx.shape[0], n))
    full_states = np.empty((nsteps + 1, n)) if full else None
    full_derivs = np.empty((nsteps + 1, n)) if full else None
    nout = 0
    while nout < len(out_idx) and out_idx[nout] == 0:
        out_states[nout] = x
        nout += 1
    if full:
        full_states[0] = x
    first = True
    i = il = 0
    xcur[0] = x
    while i < nsteps:
        if first:
            ylo, ym, yhi = y0nodes[il], y0mid[il], y0nodes[il + 1]
        else:
            ylo, yhi = xprev[il], xprev[il + 1]
            ym = 0.5 * (xprev[il] + xprev[il + 1]) + 0.125 * dt * (dprev[il] - dprev[il + 1])
        k1 = rhs(x, ylo)
        dcur[il] = k1
        if full:
            full_derivs[i] = k1
        k2 = rhs(x + 0.5 * dt * k1, ym)
        k3 = rhs(x + 0.5 * dt * k2, ym)
        k4 = rhs(x + dt * k3, yhi)
        x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        i += 1
        il += 1
        xcur[il] = x
        if full:
            full_states[i] = x
        if x @ x > guard * guard:
            return 1, i, out_states, xprev, dprev, xcur, dcur, il, full_states, full_derivs
        while nout < len(out_idx) and out_idx[nout] == i:
            out_states[nout] = x
            nout += 1
        if il == m and i < nsteps:
            dcur[m] = rhs(x, y0nodes[m] if first else xprev[m])
            xprev[:] = xcur
            dprev[:] = dcur
            il = 0
            xcur[0] = x
            first = False
    dcur[il] = rhs(x, y0nodes[il] if first else xprev[il])
    if full:
        full_derivs[nsteps] = dcur[il]
    return 0, nsteps, out_states, xprev, dprev, xcur, dcur, il, full_states, full_derivs


def _final_window(rhs, history, step, m, nsteps, xprev, dprev, xcur, dcur,
                  full, states, derivs):
    grid = np.arange(nsteps - m, nsteps + 1)
    vals = np.empty((m + 1, rhs.n))
    ders = np.empty((m + 1, rhs.n))
    ws = nsteps - (nsteps % m if nsteps % m else (m if nsteps else 0))
    for k, gi in enumerate(grid):
        if gi < 0:
            vals[k] = history.evaluate(gi * step)
            ders[k] = _hermite_deriv(gi * step, history)
        elif full:
            vals[k], ders[k] = states[gi], derivs[gi]
        elif gi >= ws:
            vals[k], ders[k] = xcur[gi - ws], dcur[gi - ws]
        else:
            vals[k], ders[k] = xprev[gi - ws + m], dprev[gi - ws + m]
    return HistorySegment(h=rhs.h, theta=(grid - nsteps) * step,
                          values=vals, derivs=ders)


def sup_norm_window(traj: Trajectory, t: float) -> float:
    """||x_t||_h: max state norm over [t-h, t] on nodes and midpoints."""
    if t < 0 or t > traj.T + 1e-12:
        raise ValueError("window time outside [0, T]")
    if traj.full:
        dt = traj.step
        m = int(round(traj.h / dt))
        i1 = int(round(t / dt))
        pts = np.concatenate([(np.arange(i1 - m, i1 + 1)) * dt + (t - i1 * dt),
                              (np.arange(i1 - m, i1) + 0.5) * dt + (t - i1 * dt)])
        pts = np.clip(pts, -traj.h, traj.T)
        return float(np.linalg.norm(traj.evaluate(pts), axis=1).max())
    return traj.window(t).sup_norm


def lyapunov_trace(traj: Trajectory, lyap) -> tuple[np.ndarray, np.ndarray]:
    """V(x(t)) at every stored output node."""
    return traj.times, lyap.value_batch(traj.states)


__all__ = ["Trajectory", "integrate", "sup_norm_window", "lyapunov_trace",
           "BlowUpError", "default_step", "FULL_STORE_LIMIT"]
