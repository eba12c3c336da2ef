"""Entry-sampling measurement operator, gradient-step map and objectives.

The measurement operator reads a fixed set of matrix entries; its adjoint
scatters a vector back onto those entries.  Since each measurement reads
one distinct entry, the operator norm is exactly 1, so any step size
mu in (0, 1) keeps the surrogate objective a majorizer of mu times the
penalized objective.  The operator interface (apply / adjoint / norm
bound) is kept minimal so other linear measurement maps can slot in; only
entry sampling is implemented here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrix import singular_values, ts1_penalty

__all__ = [
    "SamplingOperator",
    "ObjectiveContext",
    "estimate_operator_norm",
]


@dataclass(frozen=True)
class SamplingOperator:
    """Reads entries (rows[k], cols[k]) of an m x n matrix, in order."""

    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.intp)
        cols = np.asarray(self.cols, dtype=np.intp)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        m, n = self.shape
        if rows.size == 0:
            raise ValueError("sampling operator needs at least one observation")
        if rows.size != cols.size:
            raise ValueError("rows and cols must have equal length")
        if rows.min() < 0 or rows.max() >= m or cols.min() < 0 or cols.max() >= n:
            raise ValueError("observation indices out of bounds")
        flat = rows * n + cols
        if np.unique(flat).size != flat.size:
            raise ValueError("duplicate observation indices")

    @classmethod
    def from_flat(cls, shape: tuple[int, int], flat_indices) -> "SamplingOperator":
        rows, cols = np.unravel_index(np.asarray(flat_indices, dtype=np.intp), shape)
        return cls(shape=shape, rows=rows, cols=cols)

    @property
    def p(self) -> int:
        """Number of observed entries."""
        return int(self.rows.size)

    @property
    def norm_bound(self) -> float:
        """Exact operator norm: each measurement reads one distinct entry."""
        return 1.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Observed entries of ``x`` in operator order."""
        x = np.asarray(x)
        if x.shape != self.shape:
            raise ValueError(f"expected shape {self.shape}, got {x.shape}")
        return x[self.rows, self.cols]

    def adjoint(self, v: np.ndarray) -> np.ndarray:
        """Matrix with ``v`` scattered onto the observed entries."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.p,):
            raise ValueError(f"expected vector of length {self.p}, got {v.shape}")
        out = np.zeros(self.shape)
        out[self.rows, self.cols] = v
        return out

    def mask(self) -> np.ndarray:
        """Boolean matrix, True on observed entries."""
        out = np.zeros(self.shape, dtype=bool)
        out[self.rows, self.cols] = True
        return out


@dataclass(frozen=True)
class ObjectiveContext:
    """Measurement operator, data and penalty parameters for one problem.

    Accepts mu in (0, 1/norm_bound^2], i.e. (0, 1] for entry sampling; the
    closure point mu = 1 is the exact data fill.  Surrogate domination
    holds strictly only below the bound, which the solvers enforce.
    """

    op: SamplingOperator
    b: np.ndarray
    lam: float
    mu: float
    a: float

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        object.__setattr__(self, "b", b)
        if b.shape != (self.op.p,):
            raise ValueError("data vector length does not match the operator")
        bound = self.op.norm_bound ** -2
        if not 0.0 < self.mu <= bound:
            raise ValueError(f"mu must lie in (0, {bound}], got {self.mu}")
        if self.lam < 0 or self.a <= 0:
            raise ValueError("lam must be nonnegative and a positive")

    def b_mu_step(self, z: np.ndarray) -> np.ndarray:
        """Gradient step Z + mu A*(b - A(Z)) toward data consistency.

        Unobserved entries pass through unchanged; an observed entry
        becomes (1 - mu) Z_ij + mu b_ij.
        """
        out = np.array(z, dtype=float, copy=True)
        op = self.op
        out[op.rows, op.cols] += self.mu * (self.b - out[op.rows, op.cols])
        return out

    def c_lambda(self, x: np.ndarray) -> float:
        """Penalized objective (1/2)||A(X) - b||^2 + lam * T(X)."""
        resid = self.op.apply(x) - self.b
        return float(0.5 * np.dot(resid, resid)
                     + self.lam * ts1_penalty(singular_values(x), self.a))

    def c_lambda_mu(self, x: np.ndarray, z: np.ndarray) -> float:
        """Surrogate mu {C_lam(X) - (1/2)||A(X) - A(Z)||^2} + (1/2)||X - Z||_F^2.

        Coincides with mu * C_lam(X) at X = Z and dominates it whenever
        mu is below the inverse squared operator norm.
        """
        dx = self.op.apply(x) - self.op.apply(z)
        return float(self.mu * (self.c_lambda(x) - 0.5 * np.dot(dx, dx))
                     + 0.5 * np.sum((np.asarray(x) - np.asarray(z)) ** 2))


def estimate_operator_norm(op, n_iter: int = 50, seed: int = 0) -> float:
    """Power-iteration estimate of ||A||_2 for operators without a closed form.

    For the entry-sampling operator this converges to 1; it exists as a
    fallback for future operator types.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(op.shape)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(n_iter):
        y = op.adjoint(op.apply(x))
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        est = np.sqrt(nrm)
        x = y / nrm
    return float(est)
