"""Odd polynomial spectral filters.

A filter chi(x) = sum_j c_j x^(2j-1) acts on a matrix through its singular
values. Three views of the same object live here: scalar evaluation (feeds
the error predictors), log-squared evaluation (stays finite for power
filters of very high degree), and sketch-side application Y = chi(A) Omega
computed incrementally without ever forming chi(A).

The power-iteration filter x^(2q+1), i.e. Y = (A A^T)^q A Omega, is kept as
its own variant: its iterates are re-orthonormalized between power steps
(only the range of Y matters downstream, and a thin QR preserves it while
keeping every factorization well conditioned at any degree), and its log
form is evaluated directly as (4q+2) log x, so arbitrary degrees never
overflow. General odd polynomials are evaluated in linear space and report
overflow instead; at extreme degree use power filters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import as_matrix, thin_qr

__all__ = [
    "FilterSpec",
    "IDENTITY",
    "power_filter",
    "poly_filter",
    "parse_filter",
    "eval_filter",
    "eval_filter_log_sq",
    "apply_filter_sketch",
]


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """An odd polynomial chi(x) = sum_j coeffs[j-1] * x^(2j-1).

    power_q is set when the filter was built as x^(2q+1); it selects the
    stabilized application path and the exact log-space evaluation.
    Equality is canonical: it compares coefficients only, so power_filter(0),
    poly_filter([1]) and IDENTITY are all equal.
    """

    coeffs: tuple[float, ...]
    power_q: int | None = None

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("filter needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise ValueError("filter coefficients must be finite")
        if coeffs[-1] == 0.0:
            raise ValueError("leading filter coefficient must be nonzero")
        object.__setattr__(self, "coeffs", coeffs)

    def __eq__(self, other):
        if not isinstance(other, FilterSpec):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        if self.coeffs == (1.0,):
            return "identity"
        if self.power_q is not None:
            return f"power:{self.power_q}"
        return "poly:" + ",".join(f"{c:g}" for c in self.coeffs)


IDENTITY = FilterSpec((1.0,))


def power_filter(q: int) -> FilterSpec:
    """chi(x) = x^(2q+1), the q-step power-iteration filter."""
    q = int(q)
    if q < 0:
        raise ValueError(f"power filter needs q >= 0, got {q}")
    return FilterSpec((0.0,) * q + (1.0,), power_q=q)


def poly_filter(coeffs) -> FilterSpec:
    """General odd polynomial from its coefficients c_1..c_p."""
    return FilterSpec(tuple(coeffs))


def parse_filter(text: str) -> FilterSpec:
    """Parse 'identity', 'power:q' or 'poly:c1,c2,...,cp'."""
    text = text.strip()
    if text == "identity":
        return IDENTITY
    if text.startswith("power:"):
        body = text[len("power:") :]
        try:
            q = int(body)
        except ValueError:
            raise ValueError(f"bad power filter degree: {body!r}") from None
        return power_filter(q)
    if text.startswith("poly:"):
        body = text[len("poly:") :]
        try:
            coeffs = [float(part) for part in body.split(",") if part != ""]
        except ValueError:
            raise ValueError(f"bad polynomial coefficients: {body!r}") from None
        if not coeffs:
            raise ValueError("poly filter needs at least one coefficient")
        return poly_filter(coeffs)
    raise ValueError(f"unknown filter syntax: {text!r}")


def _eval_poly(coeffs, x: np.ndarray) -> np.ndarray:
    # Horner in x^2: chi(x) = x * (c_1 + c_2 x^2 + ... + c_p x^(2p-2))
    y = x * x
    acc = np.zeros_like(x)
    for c in reversed(coeffs):
        acc = acc * y + c
    return x * acc

def eval_filter(spec: FilterSpec, x):
    """chi(x) elementwise for x >= 0; scalars in, scalar out.

    Raises OverflowError when the polynomial value is not representable.
    """
    arr = np.asarray(x, dtype=np.float64)
    if (arr < 0).any():
        raise ValueError("filter argument must be nonnegative")
    with np.errstate(over="ignore", invalid="ignore"):
        out = _eval_poly(spec.coeffs, arr)
    if not np.isfinite(out).all():
        raise OverflowError(f"filter {spec} overflowed; use power:q for high degrees")
    return float(out) if np.ndim(x) == 0 else out


def eval_filter_log_sq(spec: FilterSpec, x):
    """log(chi(x)^2) for x > 0, exact in log space for power filters.

    For a power filter this is (4q+2) log x, finite for any degree. For a
    general polynomial the value is computed from chi(x) itself, so overflow
    propagates; chi(x) = 0 is a domain error.
    """
    arr = np.asarray(x, dtype=np.float64)
    if (arr <= 0).any():
        raise ValueError("log-squared filter needs x > 0")
    if spec.power_q is not None:
        out = (4.0 * spec.power_q + 2.0) * np.log(arr)
    else:
        vals = np.asarray(eval_filter(spec, arr), dtype=np.float64)
        if (vals == 0).any():
            raise ValueError(f"filter {spec} vanishes at some x; log-square undefined")
        out = 2.0 * np.log(np.abs(vals))
    return float(out) if np.ndim(x) == 0 else out


def apply_filter_sketch(A, Omega, spec: FilterSpec = IDENTITY) -> np.ndarray:
    """Y = chi(A) Omega without forming chi(A).

    Maintains Z = (A A^T)^(j-1) A Omega and accumulates Y = sum_j c_j Z,
    one n x d x k product pair per power step. Power-filter iterates are
    stabilized with a thin QR between steps: right-multiplying by R^{-1}
    leaves range(Y) unchanged (which is all the projection downstream uses)
    and keeps iterates representable at any degree, while a genuinely
    rank-deficient sketch is still reported from the first factorization.
    General polynomials are computed literally, since the coefficients
    would mix with the discarded triangular factors, and overflow in an
    intermediate is reported instead.
    """
    A = as_matrix(A, "A")
    Omega = as_matrix(Omega, "Omega")
    if A.shape[1] != Omega.shape[0]:
        raise ValueError(
            f"shape mismatch: A is {A.shape}, Omega is {Omega.shape}"
        )
    Z = A @ Omega
    if spec.power_q is not None:
        for _ in range(spec.power_q):
            Q, _ = thin_qr(Z)
            Z = A @ (A.T @ Q)
        return Z
    Y = spec.coeffs[0] * Z
    for c in spec.coeffs[1:]:
        with np.errstate(over="ignore", invalid="ignore"):
            Z = A @ (A.T @ Z)
        if not np.isfinite(Z).all():
            raise OverflowError(f"filter {spec} overflowed in an intermediate product")
        with np.errstate(over="ignore", invalid="ignore"):
            Y = Y + c * Z
    if not np.isfinite(Y).all():
        raise OverflowError(f"filter {spec} overflowed while accumulating the sketch")
    return Y
