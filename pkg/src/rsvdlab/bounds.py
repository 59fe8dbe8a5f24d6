"""Deterministic lower and upper bounds on the predicted approximation error.

The floor is the optimal rank-k error, the tail sum of squared singular
values. Two families of upper bounds are parameterized by a free index
r < k: the classical oversampling bound (1 + r/(k-r-1)) * tail(r), and the
sharper prefactor C(k, r, m) = (m-k) k / ((m-r)(k-r)) applied to the same
tail, which sandwiches the fixed-point prediction from above. A filtered
variant splits the bound into a head term damped by the filter and the
bare tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import FilterSpec
from .predict import _log_chi_sq
from .spectra import SpectralProfile

__all__ = [
    "BoundReport",
    "eckart_young_lower",
    "halko_tropp_upper",
    "prop1_upper",
    "prop1_best",
    "prop2_upper",
    "bound_report",
]


def _tail(profile: SpectralProfile, j: int) -> float:
    return float(np.sum(profile.sigmas[j:] ** 2))


def _prefactor(k: int, r: int, m: int) -> float:
    return (m - k) * k / ((m - r) * (k - r))


def eckart_young_lower(profile: SpectralProfile, k: int) -> float:
    """Optimal rank-k squared error: sum_{j>k} sigma_j^2. The unbeatable floor."""
    if not 0 <= k <= profile.m:
        raise ValueError(f"need 0 <= k <= m = {profile.m}, got k={k}")
    return _tail(profile, k)


def halko_tropp_upper(profile: SpectralProfile, k: int, r: int) -> float:
    """Classical oversampling bound (1 + r/(k-r-1)) * sum_{j>r} sigma_j^2."""
    if not 0 <= r < k - 1:
        raise ValueError(f"need 0 <= r < k - 1, got r={r}, k={k}")
    if k > profile.m:
        raise ValueError(f"need k <= m = {profile.m}, got k={k}")
    return (1.0 + r / (k - r - 1)) * _tail(profile, r)


def prop1_upper(profile: SpectralProfile, k: int, r: int) -> float:
    """Sharper upper bound C(k, r, m) * sum_{j>r} sigma_j^2."""
    m = profile.m
    if not 0 <= r < k <= m:
        raise ValueError(f"need 0 <= r < k <= m = {m}, got r={r}, k={k}")
    return _prefactor(k, r, m) * _tail(profile, r)


def prop1_best(profile: SpectralProfile, k: int) -> tuple[float, int]:
    """Minimum of prop1_upper over r in {0, ..., k-1}, with the best r."""
    m = profile.m
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m = {m}, got k={k}")
    s2 = profile.sigmas**2
    rs = np.arange(k)
    tails = float(np.sum(s2)) - np.concatenate(([0.0], np.cumsum(s2[: k - 1])))
    values = (m - k) * k / ((m - rs) * (k - rs)) * tails
    best = int(np.argmin(values))
    return float(values[best]), best


def _logsumexp(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        return -math.inf
    top = float(np.max(finite))
    return top + math.log(float(np.sum(np.exp(finite - top))))


def prop2_upper(profile: SpectralProfile, k: int, r: int, spec: FilterSpec) -> float:
    """Filtered upper bound:

        sum_{j>r} sigma_j^2
          + (C/k) * sum_{j<=r} sigma_j^2/chi(sigma_j)^2 * sum_{j>r} chi(sigma_j)^2.

    The two chi-dependent sums are combined in log space, so power filters
    of high degree neither overflow nor underflow even when each sum alone
    would. The filter must not vanish on the head indices j <= r.
    """
    m = profile.m
    if not 0 <= r < k <= m:
        raise ValueError(f"need 0 <= r < k <= m = {m}, got r={r}, k={k}")
    base = _tail(profile, r)
    if r == 0:
        return base
    t, zero = _log_chi_sq(spec, profile.sigmas)
    if zero[:r].any():
        raise ValueError(f"filter {spec} vanishes on a head singular value")
    C = _prefactor(k, r, m)
    if C == 0.0:
        return base
    head = _logsumexp(2.0 * np.log(profile.sigmas[:r]) - t[:r])
    tail = _logsumexp(t[r:])
    if tail == -math.inf:
        return base
    log_term = math.log(C / k) + head + tail
    term = math.exp(log_term) if log_term < 709.0 else math.inf
    return base + term


@dataclass(frozen=True)
class BoundReport:
    """All applicable bounds at one (k, r, filter) choice.

    prop1 and halko_tropp are present when r was given (halko_tropp needs
    r < k - 1); prop2 needs both r and a filter. prop1_best is the scanned
    minimum over r with its argmin.
    """

    k: int
    r: int | None
    m: int
    lower: float
    prop1: float | None
    prop1_best: float
    prop1_best_r: int
    halko_tropp: float | None
    prop2: float | None


def bound_report(
    profile: SpectralProfile,
    k: int,
    r: int | None = None,
    spec: FilterSpec | None = None,
) -> BoundReport:
    """Assemble every bound that the given arguments allow."""
    lower = eckart_young_lower(profile, k)
    best_value, best_r = prop1_best(profile, k)
    prop1 = halko = prop2 = None
    if r is not None:
        prop1 = prop1_upper(profile, k, r)
        if r < k - 1:
            halko = halko_tropp_upper(profile, k, r)
        if spec is not None:
            prop2 = prop2_upper(profile, k, r, spec)
    return BoundReport(
        k=k,
        r=r,
        m=profile.m,
        lower=lower,
        prop1=prop1,
        prop1_best=best_value,
        prop1_best_r=best_r,
        halko_tropp=halko,
        prop2=prop2,
    )
