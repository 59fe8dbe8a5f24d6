"""Dense linear-algebra substrate: seeded Gaussian sampling, thin QR, SVD
and squared Frobenius norms.

Everything downstream consumes matrices only through these kernels. All
arithmetic is float64. Random sampling uses numpy's PCG64 generator with
ziggurat normal draws: a fixed seed reproduces the identical stream within
one installed build (bit-exactness across numpy releases is not promised).
QR is LAPACK's Householder factorization; SVD is LAPACK's divide-and-conquer
routine.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "RngStream",
    "RankDeficiencyError",
    "make_rng",
    "as_matrix",
    "gaussian_matrix",
    "thin_qr",
    "svd",
    "frobenius_sq",
]

RngStream = np.random.Generator

# |R[j,j]| at or below this fraction of ||Y||_F flags a rank-deficient sketch.
RANK_TOL = 1e-12


class RankDeficiencyError(ValueError):
    """A factor that must have full column rank does not."""


def make_rng(seed: int) -> RngStream:
    """Fresh generator for a 64-bit seed; identical seed, identical stream."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.default_rng(seed)


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Validate and return a finite 2-D float64 array."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {A.shape}")
    if not np.isfinite(A).all():
        raise ValueError(f"{name} contains non-finite entries")
    return A


def gaussian_matrix(rows: int, cols: int, rng: RngStream) -> np.ndarray:
    """rows x cols matrix of i.i.d. standard normal draws from rng."""
    if rows < 1 or cols < 1:
        raise ValueError(f"dimensions must be positive, got {rows}x{cols}")
    return rng.standard_normal((rows, cols))


def thin_qr(Y) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR of an n x k matrix with n >= k: Y = Q R, Q orthonormal columns.

    Raises RankDeficiencyError when a diagonal entry of R falls to or below
    RANK_TOL * ||Y||_F, which signals that the sketch does not have full
    column rank.
    """
    Y = as_matrix(Y, "Y")
    n, k = Y.shape
    if n < k:
        raise ValueError(f"thin_qr needs n >= k, got {n}x{k}")
    Q, R = np.linalg.qr(Y, mode="reduced")
    small = np.abs(np.diagonal(R)) <= RANK_TOL * np.linalg.norm(Y)
    if small.any():
        j = int(np.argmax(small))
        raise RankDeficiencyError(
            f"rank-deficient input: |R[{j},{j}]| <= {RANK_TOL:g} * ||Y||_F"
        )
    return Q, R


def svd(A) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD: A = U diag(sigma) V with sigma descending and V V^T = I.

    The right factor is returned row-orthonormal (m x d), so the three
    returns multiply back to A directly.
    """
    A = as_matrix(A, "A")
    try:
        U, s, V = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"SVD did not converge: {exc}") from exc
    return U, s, V


def frobenius_sq(A) -> float:
    """Sum of squared entries, ||A||_F^2."""
    A = as_matrix(A, "A")
    return float(np.vdot(A, A))
