"""Iterative thresholding solvers for TS1-regularized matrix completion.

All schemes iterate the fixed-point map X <- G(B_mu(X)): a gradient step
toward data consistency followed by singular-value thresholding.  They
differ in how the threshold parameters are chosen each iteration:

* ``ts1-it``   — fixed (lam, a) supplied by the caller; the basic scheme.
* ``ts1-s1``   — semi-adaptive: ``a`` fixed, ``lam`` selected each step
  from the spectrum of the gradient-step matrix so the threshold lands
  between the working rank's singular value and the next one.
* ``ts1-s2``   — fully adaptive: the penalty weight and ``a`` are both
  derived from the spectrum, pinned at the critical pairing where the two
  candidate thresholds coincide.
* ``nuclear``  — soft-thresholding of singular values at a fixed level;
  a plain nuclear-norm baseline for comparisons.

The working rank is either supplied (known-rank mode) or maintained by a
one-shot eigengap estimator that may lower an overestimate once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .matrix import (compute_svd, singular_values, threshold_spectrum,
                     ts1_prox_matrix)
from .problems import MaskedMatrix
from .sampling import ObjectiveContext
from .scalar import ThresholdRegime, make_threshold_params

__all__ = [
    "Algorithm",
    "KnownRank",
    "RankEstimate",
    "SolverConfig",
    "IterationRecord",
    "SolveReport",
    "solve",
    "ts1_it_step",
    "nuclear_baseline_step",
    "ts1_s1_select_lambda",
    "ts1_s2_select_params",
    "estimate_rank",
    "eigengap_from_sigma",
    "resolve_a",
]

# Floor on the product lam * mu when the working spectrum tail is exactly
# zero; keeps the prox well defined without altering the iterate visibly.
LAMBDA_MU_FLOOR = 1e-12

# Floor on eigenvalue quotient denominators; quotients whose denominator
# needed flooring are excluded from the eigengap statistics.
EIGENVALUE_FLOOR = 1e-30

# Dominance level the eigengap statistic must exceed (strictly) to adjust.
TAU_THRESHOLD = 10.0

# Shape parameter used once the rank estimate has been pinned down; the
# known-rank-optimal choice.
KNOWN_RANK_DEFAULT_A = 1.0


class Algorithm(str, enum.Enum):
    TS1_IT = "ts1-it"
    TS1_S1 = "ts1-s1"
    TS1_S2 = "ts1-s2"
    NUCLEAR = "nuclear"


@dataclass(frozen=True)
class KnownRank:
    r: int


@dataclass(frozen=True)
class RankEstimate:
    k: int
    r_min: int = 1


@dataclass(frozen=True)
class SolverConfig:
    """Algorithm choice and iteration parameters.

    ``a`` is consumed by ts1-it and ts1-s1 (ts1-s2 adapts it); ``lam`` by
    ts1-it and nuclear.  Leaving ``a`` unset applies the empirical policy:
    1 for known rank; for rank estimation 1000 when the freedom ratio is
    below 0.6, otherwise 10.  In rank-estimation mode ts1-s1 switches to
    the known-rank value a = 1 after the one permitted adjustment.
    """

    algorithm: Algorithm
    rank: KnownRank | RankEstimate | None = None
    mu: float = 0.99
    a: float | None = None
    lam: float | None = None
    tol: float = 1e-6
    max_iters: int = 5000


class IterationRecord(NamedTuple):
    residual: float
    lambda_mu: float
    a: float
    t: float
    rank: int


@dataclass(frozen=True)
class SolveReport:
    x_opt: np.ndarray
    iterations: int
    converged: bool
    final_residual: float
    history: list[IterationRecord]
    algorithm: Algorithm
    rank_estimate: int | None = None
    rank_adjusted: bool = False
    tau: float = 0.0

    @property
    def final_params(self) -> IterationRecord:
        return self.history[-1]


class S1Selection(NamedTuple):
    lambda_n: float
    t_n: float
    regime: ThresholdRegime


class S2Selection(NamedTuple):
    lambda_mu: float
    a_n: float
    t_n: float


def ts1_s1_select_lambda(sigma_b, r: int, mu: float, a: float) -> S1Selection:
    """Per-step penalty weight for the semi-adaptive scheme.

    With sigma_b the spectrum of the gradient-step matrix, the candidate
    weights are lam1 = a sigma_{r+1} / (mu (a+1)) and
    lam2 = (a + 2 sigma_r)^2 / (8 (a+1) mu).  lam1 is used while it stays
    below the critical value a^2/(2(a+1)mu), putting the threshold at
    t2* = sigma_{r+1}; beyond that lam2 applies and the threshold is
    t3* = sigma_r (both identities are exact, so the thresholds are
    computed directly from the spectrum).
    """
    sigma_b = np.asarray(sigma_b, dtype=float)
    if r + 1 > sigma_b.size:
        raise IndexError(f"need sigma_{r + 1}, have {sigma_b.size} singular values")
    s_r1 = float(sigma_b[r])
    lam1 = a * s_r1 / (mu * (a + 1.0))
    if lam1 <= a * a / (2.0 * (a + 1.0) * mu):
        if lam1 * mu < LAMBDA_MU_FLOOR:
            lam1 = LAMBDA_MU_FLOOR / mu
            t = make_threshold_params(a, lam1 * mu).t
        else:
            t = s_r1
        return S1Selection(lambda_n=lam1, t_n=t, regime=ThresholdRegime.SUB_CRITICAL)
    s_r = float(sigma_b[r - 1])
    lam2 = (a + 2.0 * s_r) ** 2 / (8.0 * (a + 1.0) * mu)
    return S1Selection(lambda_n=lam2, t_n=s_r, regime=ThresholdRegime.SUPER_CRITICAL)


def ts1_s2_select_params(sigma_b, r: int, mu: float) -> S2Selection:
    """Per-step penalty weight and shape for the fully adaptive scheme.

    The product lambda*mu is set to 2 sigma_{r+1}^2 / (1 + 2 sigma_{r+1})
    and ``a`` to the value making that weight exactly critical, so the two
    candidate thresholds coincide at t = sigma_{r+1} (an exact identity;
    the threshold is taken from the spectrum directly).
    """
    sigma_b = np.asarray(sigma_b, dtype=float)
    if r + 1 > sigma_b.size:
        raise IndexError(f"need sigma_{r + 1}, have {sigma_b.size} singular values")
    s_r1 = float(sigma_b[r])
    lambda_mu = 2.0 * s_r1 * s_r1 / (1.0 + 2.0 * s_r1)
    if lambda_mu < LAMBDA_MU_FLOOR:
        lambda_mu = LAMBDA_MU_FLOOR
        root = np.sqrt(lambda_mu * lambda_mu + 2.0 * lambda_mu)
        return S2Selection(lambda_mu=lambda_mu, a_n=lambda_mu + root,
                           t_n=lambda_mu / 2.0 + root / 2.0)
    root = np.sqrt(lambda_mu * lambda_mu + 2.0 * lambda_mu)
    return S2Selection(lambda_mu=lambda_mu, a_n=lambda_mu + root, t_n=s_r1)


def eigengap_from_sigma(sigma, k: int, r_min: int = 1,
                        floor: float = EIGENVALUE_FLOOR) -> tuple[int, bool, float]:
    """Rank-decreasing eigengap test on a nonincreasing spectrum.

    Forms the eigenvalues lam_i = sigma_i^2 for i = r_min .. k+1 and their
    consecutive quotients.  Quotients whose denominator fell below
    ``floor`` are dropped (exact-zero tails would otherwise win
    spuriously).  Returns (k_new, adjusted, tau): the index of the largest
    quotient becomes the new estimate when its dominance statistic tau
    strictly exceeds 10.
    """
    sigma = np.asarray(sigma, dtype=float)
    if not 1 <= r_min < k <= sigma.size - 1:
        raise IndexError(f"need r_min < k <= {sigma.size - 1}, got r_min={r_min} k={k}")
    lam = sigma ** 2
    num = lam[r_min - 1:k]
    den = lam[r_min:k + 1]
    valid = den >= floor
    if int(valid.sum()) < 2:
        return k, False, 0.0
    quotients = num[valid] / den[valid]
    indices = np.arange(r_min, k + 1)[valid]
    j = int(np.argmax(quotients))
    others = np.delete(quotients, j)
    tau = float(quotients.size * quotients[j] / np.sum(others))
    if tau > TAU_THRESHOLD:
        return int(indices[j]), True, tau
    return k, False, tau


def estimate_rank(x: np.ndarray, k: int, r_min: int = 1) -> tuple[int, bool, float]:
    """Eigengap test on the eigenvalues of X^T X (see eigengap_from_sigma)."""
    return eigengap_from_sigma(singular_values(x), k, r_min)


def ts1_it_step(x: np.ndarray, ctx: ObjectiveContext) -> np.ndarray:
    """One basic iteration: TS1 prox of the gradient step at fixed (lam, a)."""
    return ts1_prox_matrix(ctx.b_mu_step(x), ctx.a, ctx.lam * ctx.mu)


def nuclear_baseline_step(x: np.ndarray, ctx: ObjectiveContext) -> np.ndarray:
    """One baseline iteration: soft-threshold singular values by lam * mu."""
    f = compute_svd(ctx.b_mu_step(x))
    g = np.maximum(f.sigma - ctx.lam * ctx.mu, 0.0)
    return (f.u * g) @ f.v.T


def resolve_a(config: SolverConfig, problem: MaskedMatrix) -> float:
    """Shape parameter for ts1-s1/ts1-it, applying the policy when unset."""
    if config.a is not None:
        return config.a
    if isinstance(config.rank, RankEstimate):
        fr = problem.descriptors.fr if problem.descriptors is not None else None
        if fr is None:
            return 10.0
        return 1000.0 if fr < 0.6 else 10.0
    return KNOWN_RANK_DEFAULT_A


def _validate(problem: MaskedMatrix, config: SolverConfig) -> None:
    m, n = problem.shape
    if not 0.0 < config.mu < problem.op.norm_bound ** -2:
        raise ValueError(f"mu must lie in (0, {problem.op.norm_bound ** -2})")
    if config.tol <= 0 or config.max_iters < 1:
        raise ValueError("tol must be positive and max_iters at least 1")
    alg = config.algorithm
    if alg in (Algorithm.TS1_S1, Algorithm.TS1_S2):
        if isinstance(config.rank, KnownRank):
            if not 1 <= config.rank.r < min(m, n):
                raise ValueError(f"known rank {config.rank.r} out of range")
        elif isinstance(config.rank, RankEstimate):
            if not 1 <= config.rank.r_min < config.rank.k <= min(m, n) - 1:
                raise ValueError(
                    f"rank estimate needs 1 <= r_min < K <= {min(m, n) - 1}")
        else:
            raise ValueError(f"{alg.value} requires a rank input")
    if alg in (Algorithm.TS1_IT, Algorithm.NUCLEAR) and config.lam is None:
        raise ValueError(f"{alg.value} requires a fixed lam")


def solve(problem: MaskedMatrix, config: SolverConfig) -> SolveReport:
    """Run the configured scheme from the observed-entry fill matrix.

    Stops when ||X_{n+1} - X_n||_F / max(||X_n||_F, 1) <= tol or after
    ``max_iters`` iterations.  One SVD of the gradient-step matrix is
    computed per iteration and shared by the parameter selection, the
    eigengap estimator and the thresholding itself.
    """
    _validate(problem, config)
    alg = config.algorithm
    mu = config.mu
    op = problem.op
    b = problem.values
    x = problem.observed_fill()

    adaptive = alg in (Algorithm.TS1_S1, Algorithm.TS1_S2)
    estimating = adaptive and isinstance(config.rank, RankEstimate)
    r_work = (config.rank.r if isinstance(config.rank, KnownRank)
              else config.rank.k if estimating else 0)
    adjusted = False
    tau = 0.0
    a_fixed = resolve_a(config, problem) if alg in (Algorithm.TS1_IT,
                                                    Algorithm.TS1_S1) else 0.0
    if alg == Algorithm.TS1_IT:
        fixed = make_threshold_params(a_fixed, config.lam * mu)

    history: list[IterationRecord] = []
    residual = np.inf
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        y = np.array(x, copy=True)
        y[op.rows, op.cols] += mu * (b - y[op.rows, op.cols])
        f = compute_svd(y)
        sig = f.sigma

        if estimating and not adjusted:
            r_work, adjusted, tau = eigengap_from_sigma(
                sig, r_work, config.rank.r_min)
            if adjusted and alg == Algorithm.TS1_S1 and config.a is None:
                a_fixed = KNOWN_RANK_DEFAULT_A

        if alg == Algorithm.TS1_IT:
            lambda_mu, a_n, t_n = config.lam * mu, a_fixed, fixed.t
            g = threshold_spectrum(sig, a_n, lambda_mu, t_n)
        elif alg == Algorithm.TS1_S1:
            sel = ts1_s1_select_lambda(sig, r_work, mu, a_fixed)
            lambda_mu, a_n, t_n = sel.lambda_n * mu, a_fixed, sel.t_n
            g = threshold_spectrum(
                sig, a_n, lambda_mu, t_n,
                keep_boundary=sel.regime is ThresholdRegime.SUPER_CRITICAL)
        elif alg == Algorithm.TS1_S2:
            sel = ts1_s2_select_params(sig, r_work, mu)
            lambda_mu, a_n, t_n = sel.lambda_mu, sel.a_n, sel.t_n
            g = threshold_spectrum(sig, a_n, lambda_mu, t_n)
        else:
            lambda_mu, a_n, t_n = config.lam * mu, 0.0, config.lam * mu
            g = np.maximum(sig - lambda_mu, 0.0)

        x_next = (f.u * g) @ f.v.T
        residual = float(np.linalg.norm(x_next - x)
                         / max(np.linalg.norm(x), 1.0))
        history.append(IterationRecord(residual=residual, lambda_mu=lambda_mu,
                                       a=a_n, t=t_n,
                                       rank=r_work if adaptive
                                       else int(np.count_nonzero(g))))
        x = x_next
        if residual <= config.tol:
            converged = True
            break

    return SolveReport(x_opt=x, iterations=it, converged=converged,
                       final_residual=residual, history=history, algorithm=alg,
                       rank_estimate=r_work if adaptive else None,
                       rank_adjusted=adjusted, tau=tau)
