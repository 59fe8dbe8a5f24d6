"""Asymptotic expected-error predictions for randomized low-rank approximation.

For a Gaussian sketch with k columns applied to a matrix whose nonzero
singular values are sigma_1 >= ... >= sigma_m, the expected squared-Frobenius
approximation error converges (as the dimensions grow) to the unique
theta_tilde > 0 solving

    sum_j sigma_j^2 / (theta_tilde + k sigma_j^2) = 1.

With a spectral filter chi the prediction becomes a two-stage fixed point:
theta0 > 0 solves

    sum_j 1 / (1 + theta0 chi(sigma_j)^2) = m - k,

and then theta_tilde = sum_j sigma_j^2 / (1 + theta0 chi(sigma_j)^2). Both
left-hand sides are strictly decreasing, so a guaranteed bracket plus
bisection finds the root; the filtered stage is solved in log(theta0) space
with saturating sigmoids, so power filters of arbitrary degree stay finite.

Closed forms for the two benchmark ensembles are provided alongside the
generic solvers and must agree with them to solver accuracy:

* bilevel (r values at level a, m - r at level b): theta_tilde is the
  positive root of a quadratic, and the filtered theta0 has an analogous
  closed form;
* power law (sigma_i = i^(-alpha)): theta_tilde ~ k (k sinc(pi/(2 alpha)))
  ^(-2 alpha) up to a 1 + O(1/k) correction, and the infinite-degree filter
  floor is the plain tail sum of squared singular values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import FilterSpec, eval_filter
from .spectra import SpectralProfile

__all__ = [
    "Prediction",
    "FixedPointError",
    "solve_theta_tilde",
    "solve_filtered",
    "bilevel_closed_form",
    "bilevel_filtered_theta0",
    "powerlaw_asymptotic",
    "powerlaw_filtered_limit",
]

# Bisection runs to this relative bracket width (or the floating-point floor,
# whichever is reached first), capped in iterations; the independently
# re-summed residual must then clear RESIDUAL_TOL times the equation scale.
_REL_WIDTH = 1e-14
_MAX_BISECT = 200
_MAX_BRACKET = 1200
RESIDUAL_TOL = 1e-10

_LOG2 = math.log(2.0)


class FixedPointError(RuntimeError):
    """The fixed-point equation is infeasible or did not converge."""


@dataclass(frozen=True)
class Prediction:
    """A solved error prediction with solver diagnostics.

    theta_tilde is the predicted expected squared-Frobenius error. theta0 is
    the auxiliary variable of the filtered fixed point (None on the
    unfiltered path; it can saturate to inf for extreme filter degrees while
    theta_tilde stays finite). residual is the defect of the defining
    equation re-evaluated with exact compensated summation: dimensionless
    for the unfiltered equation, in counts (scale m) for the filtered one.
    """

    theta_tilde: float
    theta0: float | None
    residual: float
    iterations: int


def _fsum(values: np.ndarray, extra: float = 0.0) -> float:
    # exact compensated total, independent of numpy's pairwise accumulation
    return math.fsum(np.asarray(values, dtype=np.float64).tolist() + [extra])


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # 1 / (1 + exp(-z)) without overflow at either tail
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def solve_theta_tilde(profile: SpectralProfile, k: int) -> Prediction:
    """Unique theta_tilde > 0 with sum_j sigma_j^2/(theta_tilde + k sigma_j^2) = 1.

    The left side f is strictly decreasing with f(0+) = m/k >= 1 and
    f(sum sigma^2) < 1, so [0, sum sigma^2] brackets the root. k = m short
    circuits to exactly 0.
    """
    m = profile.m
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m = {m}, got k={k}")
    if k == m:
        return Prediction(theta_tilde=0.0, theta0=None, residual=0.0, iterations=0)
    s2 = profile.sigmas**2
    lo, hi = 0.0, float(np.sum(s2))
    evals = 0
    while hi - lo > _REL_WIDTH * hi and evals < _MAX_BISECT:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        evals += 1
        if float(np.sum(s2 / (mid + k * s2))) > 1.0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    residual = _fsum(s2 / (root + k * s2), -1.0)
    if abs(residual) > RESIDUAL_TOL:
        raise FixedPointError(
            f"fixed point did not converge: residual {residual:.3e} after {evals} steps"
        )
    return Prediction(theta_tilde=root, theta0=None, residual=residual, iterations=evals)


def _log_chi_sq(spec: FilterSpec, sigmas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-value log(chi(sigma)^2) plus the mask of chi zeros (log = -inf there)."""
    if spec.power_q is not None:
        return (4.0 * spec.power_q + 2.0) * np.log(sigmas), np.zeros(sigmas.size, bool)
    vals = np.asarray(eval_filter(spec, sigmas), dtype=np.float64)
    zero = vals == 0.0
    t = np.full(sigmas.size, -np.inf)
    t[~zero] = 2.0 * np.log(np.abs(vals[~zero]))
    return t, zero


def solve_filtered(profile: SpectralProfile, k: int, spec: FilterSpec) -> Prediction:
    """Filtered prediction: solve for theta0, then sum for theta_tilde.

    Works in u = log(theta0): each summand 1/(1 + theta0 chi(sigma_j)^2) is
    a sigmoid of -(u + log chi(sigma_j)^2), which saturates cleanly, so
    power filters with huge degree never overflow. The bracket is found by
    factor-2 stepping of theta0 from 1. A finite root requires strictly more
    than k singular values with chi(sigma_j) != 0.
    """
    m = profile.m
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m = {m}, got k={k}")
    if k == m:
        return Prediction(theta_tilde=0.0, theta0=math.inf, residual=0.0, iterations=0)
    t, zero = _log_chi_sq(spec, profile.sigmas)
    n_zero = int(zero.sum())
    if m - n_zero <= k:
        raise FixedPointError(
            f"filter {spec} vanishes on {n_zero} of {m} singular values; "
            f"more than k={k} nonzero values are needed for a finite fixed point"
        )
    s2 = profile.sigmas**2
    tn = t[~zero]
    target = float(m - k)

    def g(u: float) -> float:
        return n_zero + float(np.sum(_sigmoid(-(u + tn))))

    evals = 1
    g0 = g(0.0)
    if g0 > target:
        u_lo, u_hi = 0.0, _LOG2
        while True:
            evals += 1
            if g(u_hi) <= target:
                break
            u_lo, u_hi = u_hi, u_hi + _LOG2
            if evals > _MAX_BRACKET:
                raise FixedPointError(f"could not bracket theta0 for filter {spec}")
    elif g0 < target:
        u_lo, u_hi = -_LOG2, 0.0
        while True:
            evals += 1
            if g(u_lo) >= target:
                break
            u_lo, u_hi = u_lo - _LOG2, u_lo
            if evals > _MAX_BRACKET:
                raise FixedPointError(f"could not bracket theta0 for filter {spec}")
    else:
        u_lo = u_hi = 0.0
    steps = 0
    while u_hi - u_lo > _REL_WIDTH and steps < _MAX_BISECT:
        mid = 0.5 * (u_lo + u_hi)
        if mid <= u_lo or mid >= u_hi:
            break
        steps += 1
        if g(mid) > target:
            u_lo = mid
        else:
            u_hi = mid
    evals += steps
    u = 0.5 * (u_lo + u_hi)
    weights = _sigmoid(-(u + tn))
    theta_tilde = _fsum(s2[zero], 0.0) + _fsum(s2[~zero] * weights, 0.0)
    residual = _fsum(weights, n_zero - target)
    if abs(residual) > RESIDUAL_TOL * m:
        raise FixedPointError(
            f"filtered fixed point did not converge: residual {residual:.3e}"
        )
    theta0 = math.exp(u) if u < 709.0 else math.inf
    return Prediction(
        theta_tilde=theta_tilde, theta0=theta0, residual=residual, iterations=evals
    )


def bilevel_closed_form(r: int, m: int, a: float, b: float, k: int) -> float:
    """theta_tilde for the bilevel spectrum, in closed form.

    Positive root of theta^2 + theta((k-r)a^2 + (k+r-m)b^2) - k(m-k)a^2 b^2,
    evaluated in the cancellation-free branch. a = b is accepted (the formula
    degenerates gracefully to the uniform answer (m-k) s^2).
    """
    if not 1 <= r < m:
        raise ValueError(f"need 1 <= r < m, got r={r}, m={m}")
    if not a >= b > 0:
        raise ValueError(f"need a >= b > 0, got a={a}, b={b}")
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m = {m}, got k={k}")
    D = (r - k) * a * a + (m - r - k) * b * b
    E = 4.0 * k * (m - k) * a * a * b * b
    disc = math.sqrt(D * D + E)
    if D >= 0:
        return 0.5 * (D + disc)
    # (D + disc)/2 == E / (2 (disc - D)): stable when the root is near zero
    return 0.5 * E / (disc - D)


def bilevel_filtered_theta0(
    r: int, m: int, a: float, b: float, k: int, spec: FilterSpec
) -> float:
    """Closed-form theta0 for a filtered bilevel spectrum.

    Positive root of the quadratic obtained by clearing denominators in
    r/(1 + theta0 X) + (m-r)/(1 + theta0 Y) = m - k with X = chi(a)^2 and
    Y = chi(b)^2. Must match solve_filtered's theta0 to solver accuracy.
    """
    if not 1 <= r < m:
        raise ValueError(f"need 1 <= r < m, got r={r}, m={m}")
    if not a >= b > 0:
        raise ValueError(f"need a >= b > 0, got a={a}, b={b}")
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m = {m}, got k={k}")
    X = eval_filter(spec, a) ** 2
    Y = eval_filter(spec, b) ** 2
    if X == 0.0 or Y == 0.0:
        raise ValueError(f"filter {spec} vanishes at a spectrum level")
    G = (k - r) * X + (k + r - m) * Y
    F = 4.0 * k * (m - k) * X * Y
    disc = math.sqrt(G * G + F)
    if G >= 0:
        return (G + disc) / (2.0 * (m - k) * X * Y)
    # (G + disc) == F / (disc - G); the X Y factors cancel
    return 2.0 * k / (disc - G)


def powerlaw_asymptotic(alpha: float, k: int) -> float:
    """Large-k theta_tilde for sigma_i = i^(-alpha):

        theta_tilde ~ k * (k * sinc(pi / (2 alpha)))^(-2 alpha),

    with sinc(x) = sin(x)/x, accurate up to a 1 + O(1/k) factor. Requires
    alpha > 1/2 (at alpha = 1/2 the sinc argument hits pi and the formula
    degenerates).
    """
    if not alpha > 0.5:
        raise ValueError(f"alpha must exceed 0.5, got {alpha}")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    x = math.pi / (2.0 * alpha)
    sinc = math.sin(x) / x
    return k * (k * sinc) ** (-2.0 * alpha)


def powerlaw_filtered_limit(alpha: float, k: int, m: int) -> float:
    """Infinite-degree filter floor for the power law: sum_{i=k+1}^m i^(-2 alpha).

    Summed from i = m downward (ascending magnitude) for accuracy. k = m
    gives the empty sum, 0.
    """
    if not alpha > 0.5:
        raise ValueError(f"alpha must exceed 0.5, got {alpha}")
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m = {m}, got k={k}")
    idx = np.arange(m, k, -1, dtype=np.float64)
    return float(np.sum(idx ** (-2.0 * alpha)))
