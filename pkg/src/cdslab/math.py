"""Shared math utilities: sample moments from running sums and delta-method errors."""

from __future__ import annotations

import math

import numpy as np


def row_products(x: np.ndarray) -> np.ndarray:
    """Sum over rows of x_a * x_b for every column pair, shape (d, d).

    Computed column pair by column pair with pairwise summation, so the
    result does not depend on BLAS threading.
    """
    d = x.shape[1]
    out = np.empty((d, d))
    for a in range(d):
        for b in range(a, d):
            out[a, b] = out[b, a] = np.sum(x[:, a] * x[:, b])
    return out


def sample_mean_cov(n: int, total: np.ndarray, outer: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sample mean and unbiased covariance from n, sum(x) and sum(x x^T)."""
    mean = total / n
    if n < 2:
        return mean, np.zeros_like(outer)
    cov = (outer - n * np.outer(mean, mean)) / (n - 1)
    diag = np.diag_indices_from(cov)
    cov[diag] = np.clip(cov[diag], 0.0, None)
    return mean, cov


def gradient_se(grad: np.ndarray, cov: np.ndarray, n: int) -> float:
    """Standard error of a smooth function of sample means: sqrt(g^T C g / n)."""
    var = float(grad @ cov @ grad)
    return math.sqrt(max(var, 0.0) / n)


def ratio_gradient(m1: float, m2: float) -> np.ndarray:
    """Gradient of m1 / m2 with respect to (m1, m2)."""
    return np.array([1.0 / m2, -m1 / m2**2])


def ratio_se(m1: float, m2: float, var1: float, var2: float, cov12: float, n: int) -> float:
    """Delta-method standard error of mean1 / mean2.

    (1/sqrt(n)) sqrt(var1/m2^2 - 2 m1 cov12/m2^3 + m1^2 var2/m2^4)
    """
    cov = np.array([[var1, cov12], [cov12, var2]])
    return gradient_se(ratio_gradient(m1, m2), cov, n)
