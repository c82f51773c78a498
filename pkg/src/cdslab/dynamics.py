"""Coefficient functionals of the firm-value SDE.

sigma(x, t) = diag(base_vol_i * (1 + a_i * min(alpha(t), max_jumps))) @ A with
A @ A.T = correlation, so sigma @ sigma.T = diag @ correlation @ diag and
nondegeneracy is decided by the correlation matrix and base vols alone.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.linalg.lapack import dpotrf

from cdslab.domain import MarketModel

logger = logging.getLogger(__name__)


class CholeskyError(ValueError):
    """Correlation matrix is not positive definite."""

    def __init__(self, minor: int):
        self.minor = minor
        super().__init__(f"correlation matrix is not positive definite (leading minor {minor} fails)")


def chol_factor(correlation) -> np.ndarray:
    """Lower-triangular A with A @ A.T == correlation.

    Raises:
        ValueError: If the matrix is not square and symmetric.
        CholeskyError: If it is not positive definite; ``minor`` is the
            1-based order of the first failing leading minor.
    """
    rho = np.asarray(correlation, dtype=np.float64)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"correlation must be square, got shape {rho.shape}")
    if not np.allclose(rho, rho.T, rtol=0.0, atol=1e-14):
        raise ValueError("correlation matrix is not symmetric")
    factor, info = dpotrf(rho, lower=1, clean=1)
    if info > 0:
        raise CholeskyError(int(info))
    if info < 0:
        raise ValueError(f"LAPACK dpotrf rejected argument {-info}")
    return np.tril(factor)


def psd_factor(correlation) -> np.ndarray:
    """Square root of a positive semidefinite matrix via its eigendecomposition.

    Used only for deliberately degenerate models (perfect correlation);
    the result is not triangular.
    """
    rho = np.asarray(correlation, dtype=np.float64)
    eigvals, eigvecs = np.linalg.eigh((rho + rho.T) / 2)
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def correlation_factor(model: MarketModel, *, allow_singular: bool = False) -> np.ndarray:
    """Factor used by the engine: Cholesky, or a PSD root when explicitly allowed."""
    try:
        return chol_factor(model.correlation)
    except CholeskyError:
        if not allow_singular:
            raise
        logger.warning("correlation is not positive definite; using PSD square root (unsafe model)")
        return psd_factor(model.correlation)


def vol_scale(model: MarketModel, alpha) -> np.ndarray:
    """Per-name volatility base_vol_i * (1 + a_i * min(alpha, max_jumps)).

    ``alpha`` may be a scalar or an array of default counts; the result has
    a trailing axis of length k + 1.
    """
    capped = np.minimum(np.asarray(alpha, dtype=np.float64), model.max_jumps)
    return model.base_vol * (1.0 + np.multiply.outer(capped, model.jump_coeff))


def instantaneous_sigma(model: MarketModel, alpha, factor: np.ndarray | None = None) -> np.ndarray:
    """Volatility matrix sigma_n = diag(vol_scale) A for a running default count.

    An array of counts gives one matrix per entry, shape (..., k + 1, k + 1).
    """
    if factor is None:
        factor = chol_factor(model.correlation)
    return vol_scale(model, alpha)[..., :, None] * factor


def nondegeneracy_floor(model: MarketModel) -> float:
    """lambda = min(base_vol)^2 * lambda_min(correlation)."""
    lam = float(np.linalg.eigvalsh(model.correlation)[0])
    return float(np.min(model.base_vol)) ** 2 * lam
