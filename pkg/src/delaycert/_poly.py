"""Polynomial vector/scalar fields with term-list representation.

Terms are (coefficient, exponent multi-index) records.  Non-integer
exponents are evaluated sign-preservingly, sign(v)*|v|**e, which is the
real-valued branch for odd-over-odd rational powers; integer exponents
use the ordinary power.
"""
from __future__ import annotations

import numpy as np


def signed_power(v, e):
    """v**e for integer e, sign(v)*|v|**e otherwise (elementwise)."""
    v = np.asarray(v, dtype=float)
    if float(e) == int(e):
        return v ** int(e)
    return np.sign(v) * np.abs(v) ** e


def _signed_power_d1(v, e):
    # d/dv of signed_power(v, e)
    v = np.asarray(v, dtype=float)
    if float(e) == int(e):
        return int(e) * v ** (int(e) - 1) if int(e) != 0 else np.zeros_like(v)
    return e * np.abs(v) ** (e - 1.0)


def _signed_power_d2(v, e):
    v = np.asarray(v, dtype=float)
    if float(e) == int(e):
        ei = int(e)
        if ei < 2:
            return np.zeros_like(v)
        return ei * (ei - 1) * v ** (ei - 2)
    return e * (e - 1.0) * np.sign(v) * np.abs(v) ** (e - 2.0)


class PolynomialVectorField:
    """f(x, y) = sum of coeff * prod_j x_j^exj * prod_j y_j^eyj per component."""

    def __init__(self, n, coeffs, targets, xexp, yexp):
        self.n = int(n)
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.targets = np.asarray(targets, dtype=np.int64)
        self.xexp = np.asarray(xexp, dtype=float).reshape(len(self.coeffs), n)
        self.yexp = np.asarray(yexp, dtype=float).reshape(len(self.coeffs), n)

    def __call__(self, x, y):
        return self.batch(np.atleast_2d(x), np.atleast_2d(y))[0]

    def batch(self, X, Y):
        """Evaluate on stacked points; X, Y of shape (N, n) -> (N, n)."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        out = np.zeros((X.shape[0], self.n))
        for c, t, ex, ey in zip(self.coeffs, self.targets, self.xexp, self.yexp):
            term = np.full(X.shape[0], c)
            for j in range(self.n):
                if ex[j] != 0.0:
                    term = term * signed_power(X[:, j], ex[j])
                if ey[j] != 0.0:
                    term = term * signed_power(Y[:, j], ey[j])
            out[:, t] += term
        return out

    def _jac_batch(self, X, Y, wrt):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        N = X.shape[0]
        J = np.zeros((N, self.n, self.n))
        for c, t, ex, ey in zip(self.coeffs, self.targets, self.xexp, self.yexp):
            base_e, other_e = (ex, ey) if wrt == "x" else (ey, ex)
            base_v, other_v = (X, Y) if wrt == "x" else (Y, X)
            for k in range(self.n):
                if base_e[k] == 0.0:
                    continue
                term = np.full(N, c) * _signed_power_d1(base_v[:, k], base_e[k])
                for j in range(self.n):
                    if j != k and base_e[j] != 0.0:
                        term = term * signed_power(base_v[:, j], base_e[j])
                    if other_e[j] != 0.0:
                        term = term * signed_power(other_v[:, j], other_e[j])
                J[:, t, k] += term
        return J

    def jac_x_batch(self, X, Y):
        return self._jac_batch(X, Y, "x")

    def jac_y_batch(self, X, Y):
        return self._jac_batch(X, Y, "y")

    def jac_x(self, x, y):
        return self.jac_x_batch(np.atleast_2d(x), np.atleast_2d(y))[0]

    def jac_y(self, x, y):
        return self.jac_y_batch(np.atleast_2d(x), np.atleast_2d(y))[0]


class PolynomialScalarField:
    """V(x) = sum of coeff * prod_j x_j^ej, with gradient and Hessian."""

    def __init__(self, n, coeffs, exps):
        self.n = int(n)
        self.coeffs = np.asarray(coeffs, dtype=float)
        self.exps = np.asarray(exps, dtype=float).reshape(len(self.coeffs), n)

    def __call__(self, x):
        return float(self.batch(np.atleast_2d(x))[0])

    def batch(self, X):
        X = np.asarray(X, dtype=float)
        out = np.zeros(X.shape[0])
        for c, ex in zip(self.coeffs, self.exps):
            term = np.full(X.shape[0], c)
            for j in range(self.n):
                if ex[j] != 0.0:
                    term = term * signed_power(X[:, j], ex[j])
            out += term
        return out

    def gradient_batch(self, X):
        X = np.asarray(X, dtype=float)
        N = X.shape[0]
        G = np.zeros((N, self.n))
        for c, ex in zip(self.coeffs, self.exps):
            for k in range(self.n):
                if ex[k] == 0.0:
                    continue
                term = np.full(N, c) * _signed_power_d1(X[:, k], ex[k])
                for j in range(self.n):
                    if j != k and ex[j] != 0.0:
                        term = term * signed_power(X[:, j], ex[j])
                G[:, k] += term
        return G

    def hessian_batch(self, X):
        X = np.asarray(X, dtype=float)
        N = X.shape[0]
        H = np.zeros((N, self.n, self.n))
        for c, ex in zip(self.coeffs, self.exps):
            for k in range(self.n):
                if ex[k] == 0.0:
                    continue
                for l in range(self.n):
                    if k == l:
                        term = np.full(N, c) * _signed_power_d2(X[:, k], ex[k])
                        for j in range(self.n):
                            if j != k and ex[j] != 0.0:
                                term = term * signed_power(X[:, j], ex[j])
                    else:
                        if ex[l] == 0.0:
                            continue
                        term = (np.full(N, c)
                                * _signed_power_d1(X[:, k], ex[k])
                                * _signed_power_d1(X[:, l], ex[l]))
                        for j in range(self.n):
                            if j not in (k, l) and ex[j] != 0.0:
                                term = term * signed_power(X[:, j], ex[j])
                    H[:, k, l] += term
        return H

    def gradient(self, x):
        return self.gradient_batch(np.atleast_2d(x))[0]

    def hessian(self, x):
        return self.hessian_batch(np.atleast_2d(x))[0]
