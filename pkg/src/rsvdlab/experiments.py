"""Monte-Carlo sweep harness with index-derived seeding and plot-ready tables.

Every random object in a sweep is seeded by a splitmix-style hash of
(base_seed, k, stage, trial), never by execution order, so results are
byte-reproducible no matter how cells are scheduled. Within one (k, trial)
pair all filters see the same matrix and the same test matrix (common random
numbers), which makes filter curves directly comparable trial by trial.

Tables serialize to a whitespace-separated ``.dat`` text format with header

    k q0 ... q{F-1} qpred0 ... qpred{F-1} lwbnd upbnd

one row per sketch size: empirical means per filter, fixed-point predictions
per filter, then the tail-sum floor and the scanned upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import eckart_young_lower, prop1_best
from .filters import FilterSpec, parse_filter
from .kernels import gaussian_matrix, make_rng
from .lowrank import approximate_with_sketch
from .predict import solve_filtered
from .spectra import (
    SpectralProfile,
    SyntheticMatrix,
    bilevel_profile,
    load_profile,
    powerlaw_profile,
    synthesize_matrix,
)

__all__ = [
    "ExperimentConfig",
    "SweepTable",
    "ExperimentError",
    "ConfigError",
    "derive_seed",
    "run_trial",
    "run_sweep",
    "emit_dat",
    "read_dat",
    "parse_config",
    "load_config",
]


class ExperimentError(RuntimeError):
    """A trial failed; the message carries (k, filter, trial) context."""


class ConfigError(ValueError):
    """A sweep configuration file is malformed."""


_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15

# Stage tags fold into the filter_index slot of derive_seed. Filters consume
# no randomness of their own, so nonnegative indices stay free for them.
_STAGE_SKETCH = -1
_STAGE_MATRIX = -2


def _mix64(z: int) -> int:
    # splitmix64 finalizer: bijective avalanche on 64 bits
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(base: int, k: int, filter_index: int, trial_index: int) -> int:
    """Deterministic 64-bit seed for one sweep cell.

    Chains a splitmix64 avalanche over the fields, so the map is bijective
    in the last absorbed field for any fixed prefix: distinct trial indices
    give distinct seeds.
    """
    z = base & _MASK
    for part in (k, filter_index, trial_index):
        z = _mix64((z + _GAMMA + (part & _MASK)) & _MASK)
    return z


@dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: an ensemble, a k-grid, a filter list, and trial counts.

    resample_matrix=True draws a fresh matrix per (k, trial); False shares a
    single matrix across all trials and all k. The sketch is always fresh
    per (k, trial) and shared across filters.
    """

    profile: SpectralProfile
    n: int
    d: int
    k_grid: tuple[int, ...]
    filters: tuple[FilterSpec, ...]
    trials: int
    base_seed: int
    resample_matrix: bool = True
    out_path: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        object.__setattr__(self, "filters", tuple(self.filters))
        if not self.k_grid:
            raise ValueError("k_grid must be non-empty")
        if any(b <= a for a, b in zip(self.k_grid, self.k_grid[1:])):
            raise ValueError("k_grid must be strictly increasing")
        if not self.filters:
            raise ValueError("filters must be non-empty")
        m = self.profile.m
        if not (max(self.k_grid) <= m <= min(self.n, self.d)):
            raise ValueError(
                f"need max(k_grid) <= m <= min(n, d); got max k={max(self.k_grid)}, "
                f"m={m}, min(n, d)={min(self.n, self.d)}"
            )
        if min(self.k_grid) < 1:
            raise ValueError("k values must be positive")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.base_seed < 2**64:
            raise ValueError("base_seed must be a 64-bit unsigned integer")


def _trial_matrix(cfg: ExperimentConfig, k: int, trial_index: int) -> SyntheticMatrix:
    if cfg.resample_matrix:
        seed = derive_seed(cfg.base_seed, k, _STAGE_MATRIX, trial_index)
    else:
        seed = derive_seed(cfg.base_seed, 0, _STAGE_MATRIX, 0)
    return synthesize_matrix(cfg.profile, cfg.n, cfg.d, make_rng(seed))


def _trial_omega(cfg: ExperimentConfig, k: int, trial_index: int) -> np.ndarray:
    seed = derive_seed(cfg.base_seed, k, _STAGE_SKETCH, trial_index)
    return gaussian_matrix(cfg.d, k, make_rng(seed))


def run_trial(cfg: ExperimentConfig, k: int, spec: FilterSpec, trial_index: int) -> float:
    """Squared error of one seeded trial; identical inputs, identical output."""
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    A = _trial_matrix(cfg, k, trial_index)
    Omega = _trial_omega(cfg, k, trial_index)
    try:
        return approximate_with_sketch(A.A, Omega, spec).err_sq
    except Exception as exc:
        raise ExperimentError(
            f"trial failed at k={k}, filter={spec}, trial={trial_index}: {exc}"
        ) from exc


@dataclass(frozen=True)
class SweepTable:
    """Aggregated sweep results.

    mean, stderr and prediction are (len(k_grid), len(filters)) arrays;
    lower and upper are per-k columns; errors keeps the raw per-trial values
    with shape (k, filter, trial). stderr is the sample standard deviation
    over trials divided by sqrt(trials) (zero when trials == 1).
    """

    k_grid: tuple[int, ...]
    filters: tuple[FilterSpec, ...]
    mean: np.ndarray
    stderr: np.ndarray
    prediction: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    errors: np.ndarray


def run_sweep(cfg: ExperimentConfig) -> SweepTable:
    """Run every (k, filter, trial) cell and attach predictions and bounds."""
    nk, nf, nt = len(cfg.k_grid), len(cfg.filters), cfg.trials
    errors = np.zeros((nk, nf, nt))
    shared = None if cfg.resample_matrix else _trial_matrix(cfg, 0, 0)
    for ki, k in enumerate(cfg.k_grid):
        for trial in range(nt):
            A = shared if shared is not None else _trial_matrix(cfg, k, trial)
            Omega = _trial_omega(cfg, k, trial)
            for fi, spec in enumerate(cfg.filters):
                try:
                    errors[ki, fi, trial] = approximate_with_sketch(
                        A.A, Omega, spec
                    ).err_sq
                except Exception as exc:
                    raise ExperimentError(
                        f"trial failed at k={k}, filter={spec}, trial={trial}: {exc}"
                    ) from exc
    mean = errors.mean(axis=2)
    if nt > 1:
        stderr = errors.std(axis=2, ddof=1) / math.sqrt(nt)
    else:
        stderr = np.zeros((nk, nf))
    prediction = np.zeros((nk, nf))
    lower = np.zeros(nk)
    upper = np.zeros(nk)
    for ki, k in enumerate(cfg.k_grid):
        lower[ki] = eckart_young_lower(cfg.profile, k)
        upper[ki] = prop1_best(cfg.profile, k)[0]
        for fi, spec in enumerate(cfg.filters):
            prediction[ki, fi] = solve_filtered(cfg.profile, k, spec).theta_tilde
    # floor check gets the same numerical slack as the per-trial invariant
    slack = 1e-6 * cfg.profile.energy()
    bad = mean < lower[:, None] - 3.0 * stderr - slack
    if bad.any():
        ki, fi = map(int, np.argwhere(bad)[0])
        raise ExperimentError(
            f"empirical mean fell below the rank floor at k={cfg.k_grid[ki]}, "
            f"filter={cfg.filters[fi]}; the error computation is broken"
        )
    return SweepTable(
        k_grid=cfg.k_grid,
        filters=cfg.filters,
        mean=mean,
        stderr=stderr,
        prediction=prediction,
        lower=lower,
        upper=upper,
        errors=errors,
    )


def _fmt(value: float) -> str:
    return format(float(value), ".10g")


def emit_dat(table: SweepTable, path) -> None:
    """Write the plot-ready table; byte-deterministic for a given table."""
    nf = len(table.filters)
    header = (
        ["k"]
        + [f"q{i}" for i in range(nf)]
        + [f"qpred{i}" for i in range(nf)]
        + ["lwbnd", "upbnd"]
    )
    lines = [" ".join(header)]
    for ki, k in enumerate(table.k_grid):
        row = [str(int(k))]
        row += [_fmt(v) for v in table.mean[ki]]
        row += [_fmt(v) for v in table.prediction[ki]]
        row += [_fmt(table.lower[ki]), _fmt(table.upper[ki])]
        lines.append(" ".join(row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dat(path) -> tuple[list[str], np.ndarray]:
    """Read a table written by emit_dat: (column names, rows-by-columns array)."""
    text = Path(path).read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty table")
    names = lines[0].split()
    data = np.array([[float(v) for v in line.split()] for line in lines[1:]])
    if data.size and data.shape[1] != len(names):
        raise ValueError(f"{path}: row width does not match header")
    return names, data


_ENSEMBLE_KEYS = {
    "bilevel": {"r", "m", "a", "b"},
    "powerlaw": {"alpha", "m"},
    "file": {"profile_path"},
}
_COMMON_KEYS = {
    "ensemble",
    "n",
    "d",
    "k_grid",
    "filters",
    "trials",
    "seed",
    "resample_matrix",
    "out",
}
_ALL_KEYS = _COMMON_KEYS | {"r", "m", "a", "b", "alpha", "profile_path"}


def _split_filters(text: str) -> tuple[FilterSpec, ...]:
    # poly coefficients contain commas, so regroup: a token opens a new
    # filter iff it looks like one; bare numbers extend a preceding poly.
    groups: list[str] = []
    for token in (t.strip() for t in text.split(",")):
        if token == "identity" or token.startswith(("power:", "poly:")):
            groups.append(token)
        elif groups and groups[-1].startswith("poly:"):
            groups[-1] += "," + token
        else:
            raise ValueError(f"unexpected filter token: {token!r}")
    if not groups:
        raise ValueError("no filters given")
    return tuple(parse_filter(g) for g in groups)


def parse_config(text: str, base_dir=".") -> ExperimentConfig:
    """Parse the flat key = value sweep-configuration grammar.

    Exactly one 'key = value' per line; blank lines and '#' comments are
    skipped; unknown keys and keys that do not belong to the chosen ensemble
    are errors. profile_path is resolved against base_dir.
    """
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key: {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key: {key!r}")
        pairs[key] = value

    def need(key: str) -> str:
        if key not in pairs:
            raise ConfigError(f"missing key: {key!r}")
        return pairs.pop(key)

    def parse_int(key: str, value: str) -> int:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"key {key!r}: expected an integer, got {value!r}") from None

    def parse_float(key: str, value: str) -> float:
        try:
            return float(value)
        except ValueError:
            raise ConfigError(f"key {key!r}: expected a number, got {value!r}") from None

    ensemble = need("ensemble")
    if ensemble not in _ENSEMBLE_KEYS:
        raise ConfigError(
            f"key 'ensemble': expected one of {sorted(_ENSEMBLE_KEYS)}, got {ensemble!r}"
        )
    try:
        if ensemble == "bilevel":
            profile = bilevel_profile(
                parse_int("r", need("r")),
                parse_int("m", need("m")),
                parse_float("a", need("a")),
                parse_float("b", need("b")),
            )
        elif ensemble == "powerlaw":
            profile = powerlaw_profile(
                parse_float("alpha", need("alpha")), parse_int("m", need("m"))
            )
        else:
            profile = load_profile(Path(base_dir) / need("profile_path"))
    except ConfigError:
        raise
    except (ValueError, OSError) as exc:
        raise ConfigError(f"bad ensemble: {exc}") from exc

    n = parse_int("n", need("n"))
    d = parse_int("d", need("d"))
    try:
        k_grid = tuple(parse_int("k_grid", v) for v in need("k_grid").split(","))
        filters = _split_filters(need("filters"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"key 'filters': {exc}") from exc
    trials = parse_int("trials", need("trials"))
    seed = parse_int("seed", need("seed"))
    resample = True
    if "resample_matrix" in pairs:
        value = pairs.pop("resample_matrix").lower()
        if value not in ("true", "false"):
            raise ConfigError(
                f"key 'resample_matrix': expected true or false, got {value!r}"
            )
        resample = value == "true"
    out = need("out")
    if pairs:
        extra = ", ".join(sorted(pairs))
        raise ConfigError(f"keys not allowed for ensemble {ensemble!r}: {extra}")
    try:
        return ExperimentConfig(
            profile=profile,
            n=n,
            d=d,
            k_grid=k_grid,
            filters=filters,
            trials=trials,
            base_seed=seed,
            resample_matrix=resample,
            out_path=out,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    """Read and parse a sweep configuration file."""
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), base_dir=path.parent)
