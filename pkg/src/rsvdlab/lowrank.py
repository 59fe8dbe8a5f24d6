"""Randomized low-rank approximation, plain and filter-accelerated.

The sketch-project scheme: draw a Gaussian test matrix Omega with k columns,
form Y = chi(A) Omega, orthonormalize Y = Q R, and return A_hat = Q (Q^T A).
The squared approximation error is computed through the projection identity
||A - A_hat||_F^2 = ||A||_F^2 - ||Q^T A||_F^2, which avoids materializing
the residual in sweep loops; tests cross-check it against the direct form.

Two validation oracles accompany the algorithms: a least-squares
reconstruction that must coincide with the projected output whenever the
sketch has full column rank, and a diagnostic bound on the least-squares
solution norm.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .filters import IDENTITY, FilterSpec, apply_filter_sketch
from .kernels import (
    RankDeficiencyError,
    RngStream,
    as_matrix,
    frobenius_sq,
    gaussian_matrix,
    thin_qr,
)

__all__ = [
    "ApproxResult",
    "NormCheckReport",
    "rsvd",
    "rsvd_filtered",
    "approximate_with_sketch",
    "least_squares_oracle",
    "solution_norm_check",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ApproxResult:
    """Rank-k approximation A_hat = Q (Q^T A) and its squared error."""

    Q: np.ndarray
    QtA: np.ndarray
    k: int
    err_sq: float

    @property
    def A_hat(self) -> np.ndarray:
        return self.Q @ self.QtA


def approximate_with_sketch(
    A, Omega, spec: FilterSpec = IDENTITY
) -> ApproxResult:
    """Rank-k approximation of A from an explicit d x k test matrix."""
    A = as_matrix(A, "A")
    Omega = as_matrix(Omega, "Omega")
    Y = apply_filter_sketch(A, Omega, spec)
    Q, _ = thin_qr(Y)
    QtA = Q.T @ A
    err_sq = frobenius_sq(A) - frobenius_sq(QtA)
    return ApproxResult(Q=Q, QtA=QtA, k=Omega.shape[1], err_sq=max(err_sq, 0.0))


def rsvd(A, k: int, rng: RngStream) -> ApproxResult:
    """Randomized rank-k approximation with a fresh Gaussian sketch."""
    return rsvd_filtered(A, k, IDENTITY, rng)


def rsvd_filtered(A, k: int, spec: FilterSpec, rng: RngStream) -> ApproxResult:
    """Randomized rank-k approximation with a filtered sketch Y = chi(A) Omega.

    The projection step always uses the unfiltered A; the filter only shapes
    the subspace the sketch lands in. Requires 1 <= k <= rank(A): a sketch
    that comes out rank deficient (which happens exactly when k exceeds the
    rank, up to a probability-zero event) raises RankDeficiencyError rather
    than silently truncating.
    """
    A = as_matrix(A, "A")
    n, d = A.shape
    if not 1 <= k <= min(n, d):
        raise ValueError(f"need 1 <= k <= min(n, d) = {min(n, d)}, got k={k}")
    Omega = gaussian_matrix(d, k, rng)
    return approximate_with_sketch(A, Omega, spec)


def least_squares_oracle(A, Omega, spec: FilterSpec = IDENTITY) -> np.ndarray:
    """Best approximation of A in the column space of Y = chi(A) Omega.

    Solves min_B ||A - Y B||_F^2 by a rank-revealing least-squares path (no
    normal equations) and returns Y B*. Whenever Y has full column rank this
    equals the projected output Q Q^T A, which is what the tests pin.
    """
    A = as_matrix(A, "A")
    Omega = as_matrix(Omega, "Omega")
    Y = apply_filter_sketch(A, Omega, spec)
    B, _, rank, _ = np.linalg.lstsq(Y, A, rcond=None)
    if rank < Y.shape[1]:
        raise RankDeficiencyError(
            f"sketch has rank {rank} < k = {Y.shape[1]}; oracle undefined"
        )
    return Y @ B


@dataclass(frozen=True)
class NormCheckReport:
    """Observed least-squares solution norm against its probabilistic bound."""

    b_norm: float
    bound: float
    kappa: float
    held: bool


def solution_norm_check(A, Omega, k: int) -> NormCheckReport:
    """Diagnostic: ||B*||_2 against 2 kappa(A) / (sqrt(d) - sqrt(k)).

    The bound fails only on an exponentially rare sketch, so a violation is
    logged, not fatal. d = k is rejected since the bound degenerates.
    """
    A = as_matrix(A, "A")
    Omega = as_matrix(Omega, "Omega")
    d = A.shape[1]
    if Omega.shape != (d, k):
        raise ValueError(f"Omega must be {d}x{k}, got {Omega.shape}")
    if k >= d:
        raise ValueError(f"norm bound needs k < d, got k={k}, d={d}")
    Y = A @ Omega
    B, _, rank, _ = np.linalg.lstsq(Y, A, rcond=None)
    if rank < k:
        raise RankDeficiencyError(f"sketch has rank {rank} < k = {k}")
    s = np.linalg.svd(A, compute_uv=False)
    kappa = float(s[0] / s[-1]) if s[-1] > 0 else math.inf
    bound = 2.0 / (math.sqrt(d) - math.sqrt(k)) * kappa
    b_norm = float(np.linalg.norm(B, 2))
    held = b_norm <= bound
    if not held:
        logger.warning(
            "solution norm bound violated: ||B*|| = %.6g > %.6g", b_norm, bound
        )
    return NormCheckReport(b_norm=b_norm, bound=bound, kappa=kappa, held=held)
