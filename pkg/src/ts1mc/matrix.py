"""Transformed Schatten-1 penalty on matrices and its SVD thresholding map.

The penalty of a matrix is the scalar TL1 penalty summed over its singular
values.  Its proximal operator factors through the SVD: threshold each
singular value with the scalar operator and reassemble.  Partial traces and
Ky Fan norms are provided because the trace inequality tr_k(X) <= ||X||_Fk
is what makes the spectral reduction exact, and tests exercise it directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import svd as _svd

from .scalar import h_lambda, make_threshold_params, rho_a

__all__ = [
    "SvdFactors",
    "compute_svd",
    "singular_values",
    "numerical_rank",
    "ts1_penalty",
    "threshold_spectrum",
    "ts1_prox_matrix",
    "shrinkage_identity",
    "partial_trace",
    "ky_fan_norm",
]

# Singular values below this are treated as zero when counting rank.
RANK_FLOOR = 1e-12


@dataclass(frozen=True)
class SvdFactors:
    """Economy SVD ``u @ diag(sigma) @ v.T`` with sigma nonincreasing."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.T


def compute_svd(x: np.ndarray) -> SvdFactors:
    """Economy SVD with singular values enforced nonincreasing."""
    u, sigma, vt = _svd(np.asarray(x, dtype=float), full_matrices=False,
                        lapack_driver="gesdd")
    order = np.argsort(sigma)[::-1]
    if not np.array_equal(order, np.arange(sigma.size)):
        u, sigma, vt = u[:, order], sigma[order], vt[order]
    return SvdFactors(u=u, sigma=sigma, v=vt.T)


def singular_values(x: np.ndarray) -> np.ndarray:
    """Singular values of ``x`` in nonincreasing order."""
    sigma = _svd(np.asarray(x, dtype=float), compute_uv=False)
    return np.sort(sigma)[::-1]


def numerical_rank(sigma: np.ndarray, floor: float = RANK_FLOOR) -> int:
    """Number of singular values above the noise floor."""
    return int(np.sum(np.asarray(sigma) > floor))


def ts1_penalty(sigma, a: float) -> float:
    """Sum of rho_a over a vector of singular values.

    Parameters
    ----------
    sigma : array_like
        Nonnegative singular values (any order).
    a : float
        Positive shape parameter.
    """
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma < 0):
        raise ValueError("singular values must be nonnegative")
    return float(np.sum(rho_a(sigma, a)))


def threshold_spectrum(sigma, a, lambda_mu, t, keep_boundary=False):
    """Apply the scalar thresholding map entrywise to a spectrum.

    Values strictly above ``t`` map to ``h_lambda``; the rest map to zero.
    With ``keep_boundary`` values equal to ``t`` also map through
    ``h_lambda`` — at a super-critical threshold both branches minimize
    the prox objective, and iterative schemes whose threshold lands
    exactly on a singular value need the surviving selection.
    """
    sigma = np.asarray(sigma, dtype=float)
    keep = sigma >= t if keep_boundary else sigma > t
    out = np.zeros_like(sigma)
    if np.any(keep):
        out[keep] = h_lambda(sigma[keep], a, lambda_mu)
    return out


def ts1_prox_matrix(y: np.ndarray, a: float, lambda_mu: float) -> np.ndarray:
    """Global minimizer of (1/2)||X - Y||_F^2 + lambda_mu * T(X).

    Computes the SVD of ``y`` and thresholds its singular values with the
    scalar operator; the rank of the result is the number of singular
    values strictly above the active threshold.
    """
    params = make_threshold_params(a, lambda_mu)
    f = compute_svd(y)
    g = threshold_spectrum(f.sigma, a, lambda_mu, params.t)
    return (f.u * g) @ f.v.T


def shrinkage_identity(m: int, n: int, k: int) -> np.ndarray:
    """m x n matrix with ones on the first k diagonal entries."""
    if not 1 <= k <= min(m, n):
        raise IndexError(f"k={k} out of range for dims ({m}, {n})")
    out = np.zeros((m, n))
    out[np.arange(k), np.arange(k)] = 1.0
    return out


def partial_trace(x: np.ndarray, k: int) -> float:
    """Sum of the first k diagonal entries of ``x``."""
    x = np.asarray(x)
    if not 1 <= k <= min(x.shape):
        raise IndexError(f"k={k} out of range for shape {x.shape}")
    return float(np.trace(x[:k, :k]))


def ky_fan_norm(sigma, k: int) -> float:
    """Sum of the k largest singular values."""
    sigma = np.asarray(sigma, dtype=float)
    if not 1 <= k <= sigma.size:
        raise IndexError(f"k={k} out of range for {sigma.size} singular values")
    return float(np.sum(np.sort(sigma)[::-1][:k]))
