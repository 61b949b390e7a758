"""Compiled RK4 stepping kernels for declarative polynomial systems.

Delayed arguments are read from the stored previous delay window: node
lookups are exact because the step divides the delay; half-step lookups
use the cubic-Hermite midpoint of the previous window.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _poly_eval(coeffs, targets, xexp, yexp, x, y, out):
    n = out.shape[0]
    for i in range(n):
        out[i] = 0.0
    for t in range(coeffs.shape[0]):
        v = coeffs[t]
        for j in range(n):
            e = xexp[t, j]
            if e != 0.0:
                ei = int(e)
                if e == ei:
                    b = x[j]
                    p = 1.0
                    for _ in range(ei):
                        p *= b
                    v *= p
                else:
                    b = x[j]
                    if b >= 0.0:
                        v *= b ** e
                    else:
                        v *= -((-b) ** e)
            e = yexp[t, j]
            if e != 0.0:
                ei = int(e)
                if e == ei:
                    b = y[j]
                    p = 1.0
                    for _ in range(ei):
                        p *= b
                    v *= p
                else:
                    b = y[j]
                    if b >= 0.0:
                        v *= b ** e
                    else:
                        v *= -((-b) ** e)
        out[targets[t]] += v


@njit(cache=True)
def rk4_delay(coeffs, targets, xexp, yexp, dt, m, nsteps, x0,
              y0nodes, y0mid, out_idx, out_states, store_all,
              full_states, full_derivs, guard):
    """Fixed-step RK4 over [0, nsteps*dt] for x'(t) = f(x(t), x(t-h)), m = h/dt.

    Returns (status, step_reached, xprev, dprev, xcur, dcur, fill):
    status 0 = completed, 1 = norm guard exceeded at step_reached.
    xcur/dcur hold the active window nodes 0..fill (global steps
    win_start..win_start+fill); xprev/dprev the previous full window.
    """
    n = x0.shape[0]
    x = x0.copy()
    xprev = np.zeros((m + 1, n))
    dprev = np.zeros((m + 1, n))
    xcur = np.zeros((m + 1, n))
    dcur = np.zeros((m + 1, n))
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    xs = np.empty(n)
    ymid = np.empty(n)
    nout = 0
    while nout < out_idx.shape[0] and out_idx[nout] == 0:
        for j in range(n):
            out_states[nout, j] = x[j]
        nout += 1
    if store_all:
        for j in range(n):
            full_states[0, j] = x[j]
    first_window = True
    i = 0
    il = 0
    for j in range(n):
        xcur[0, j] = x[j]
    while i < nsteps:
        if first_window:
            ylo = y0nodes[il]
            ym = y0mid[il]
            yhi = y0nodes[il + 1]
        else:
            ylo = xprev[il]
            yhi = xprev[il + 1]
            for j in range(n):
                ymid[j] = 0.5 * (xprev[il, j] + xprev[il + 1, j]) \
                    + 0.125 * dt * (dprev[il, j] - dprev[il + 1, j])
            ym = ymid
        _poly_eval(coeffs, targets, xexp, yexp, x, ylo, k1)
        for j in range(n):
            dcur[il, j] = k1[j]
        if store_all:
            for j in range(n):
                full_derivs[i, j] = k1[j]
        for j in range(n):
            xs[j] = x[j] + 0.5 * dt * k1[j]
        _poly_eval(coeffs, targets, xexp, yexp, xs, ym, k2)
        for j in range(n):
            xs[j] = x[j] + 0.5 * dt * k2[j]
        _poly_eval(coeffs, targets, xexp, yexp, xs, ym, k3)
        for j in range(n):
            xs[j] = x[j] + dt * k3[j]
        _poly_eval(coeffs, targets, xexp, yexp, xs, yhi, k4)
        for j in range(n):
            x[j] = x[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        i += 1
        il += 1
        for j in range(n):
            xcur[il, j] = x[j]
        if store_all:
            for j in range(n):
                full_states[i, j] = x[j]
        s = 0.0
        for j in range(n):
            s += x[j] * x[j]
        if s > guard * guard:
            return 1, i, xprev, dprev, xcur, dcur, il
        while nout < out_idx.shape[0] and out_idx[nout] == i:
            for j in range(n):
                out_states[nout, j] = x[j]
            nout += 1
        if il == m and i < nsteps:
            if first_window:
                _poly_eval(coeffs, targets, xexp, yexp, x, y0nodes[m], k1)
            else:
                _poly_eval(coeffs, targets, xexp, yexp, x, xprev[m], k1)
            for j in range(n):
                dcur[m, j] = k1[j]
            xprev[:] = xcur
            dprev[:] = dcur
            il = 0
            for j in range(n):
                xcur[0, j] = x[j]
            first_window = False
    # derivative at the final node
    if first_window:
        _poly_eval(coeffs, targets, xexp, yexp, x, y0nodes[il], k1)
    else:
        _poly_eval(coeffs, targets, xexp, yexp, x, xprev[il], k1)
    for j in range(n):
        dcur[il, j] = k1[j]
    if store_all:
        for j in range(n):
            full_derivs[nsteps, j] = k1[j]
    return 0, nsteps, xprev, dprev, xcur, dcur, il
