"""Singular-value ensembles and synthesis of random test matrices with a
prescribed spectrum."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import RngStream, as_matrix, gaussian_matrix, thin_qr

__all__ = [
    "SpectralProfile",
    "SyntheticMatrix",
    "ProfileParseError",
    "uniform_profile",
    "bilevel_profile",
    "powerlaw_profile",
    "load_profile",
    "synthesize_matrix",
]


class ProfileParseError(ValueError):
    """A profile file could not be parsed."""


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Ordered positive singular values sigma_1 >= ... >= sigma_m > 0.

    Zeros are excluded by construction, so m is the rank of any matrix
    carrying this spectrum.
    """

    sigmas: np.ndarray

    def __post_init__(self):
        arr = np.array(self.sigmas, dtype=np.float64).ravel()
        if arr.size < 1:
            raise ValueError("profile needs at least one singular value")
        if not np.isfinite(arr).all():
            raise ValueError("singular values must be finite")
        if (arr <= 0).any():
            raise ValueError("singular values must be strictly positive")
        if (np.diff(arr) > 0).any():
            raise ValueError("singular values must be non-increasing")
        arr.setflags(write=False)
        object.__setattr__(self, "sigmas", arr)

    @property
    def m(self) -> int:
        return int(self.sigmas.size)

    def energy(self) -> float:
        """Total squared spectrum, sum of sigma_j^2."""
        return float(np.sum(self.sigmas**2))


@dataclass(frozen=True, eq=False)
class SyntheticMatrix:
    """A materialized A = U diag(sigma) V with orthonormal U columns and V rows."""

    A: np.ndarray
    U: np.ndarray
    V: np.ndarray
    profile: SpectralProfile


def uniform_profile(s: float, m: int) -> SpectralProfile:
    """m copies of a single level s; the universal hand-checkable spectrum."""
    if s <= 0:
        raise ValueError(f"level must be positive, got {s}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return SpectralProfile(np.full(m, float(s)))


def bilevel_profile(r: int, m: int, a: float, b: float) -> SpectralProfile:
    """r values at level a followed by m - r values at level b, a > b > 0."""
    if not 1 <= r < m:
        raise ValueError(f"need 1 <= r < m, got r={r}, m={m}")
    if not a > b > 0:
        raise ValueError(f"need a > b > 0, got a={a}, b={b}")
    sig = np.empty(m)
    sig[:r] = a
    sig[r:] = b
    return SpectralProfile(sig)


def powerlaw_profile(alpha: float, m: int) -> SpectralProfile:
    """sigma_i = i^(-alpha) for i = 1..m.

    alpha > 1/2 is required so that the squared spectrum is summable as
    m grows; the asymptotic formulas downstream all assume it.
    """
    if not alpha > 0.5:
        raise ValueError(f"alpha must exceed 0.5, got {alpha}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    return SpectralProfile(np.arange(1, m + 1, dtype=np.float64) ** (-float(alpha)))


def load_profile(path) -> SpectralProfile:
    """Read a profile file: one positive decimal per line, '#' comments ignored.

    Values are sorted non-increasing (every downstream quantity is a
    symmetric function of the spectrum, so input order is irrelevant).
    """
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError:
                raise ProfileParseError(
                    f"{path}: line {lineno}: not a number: {text!r}"
                ) from None
            if not np.isfinite(value) or value <= 0:
                raise ProfileParseError(
                    f"{path}: line {lineno}: singular values must be positive, got {text}"
                )
            values.append(value)
    if not values:
        raise ProfileParseError(f"{path}: no singular values found")
    values.sort(reverse=True)
    return SpectralProfile(np.array(values))


def synthesize_matrix(
    profile: SpectralProfile, n: int, d: int, rng: RngStream
) -> SyntheticMatrix:
    """Random n x d matrix with exactly the given singular values.

    U comes from the thin QR of an n x m Gaussian, V from the (transposed)
    thin QR of a d x m Gaussian, drawn in that order from rng.
    """
    m = profile.m
    if m > min(n, d):
        raise ValueError(f"profile rank m={m} exceeds min(n, d)={min(n, d)}")
    U, _ = thin_qr(gaussian_matrix(n, m, rng))
    Vq, _ = thin_qr(gaussian_matrix(d, m, rng))
    V = Vq.T
    A = (U * profile.sigmas) @ V
    return SyntheticMatrix(A=as_matrix(A, "A"), U=U, V=V, profile=profile)
