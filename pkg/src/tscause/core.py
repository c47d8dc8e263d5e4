"""Time-series container, standardization, Pearson correlation and a
segment-drift stationarity diagnostic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstantSeries, LengthMismatch, NonFinite, TooShort


@dataclass(frozen=True)
class TimeSeries:
    """A named, uniformly sampled real-valued series.

    ``values`` is stored as a read-only float64 array. Missing values are
    rejected on construction.
    """

    name: str
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).ravel()
        if not np.all(np.isfinite(v)):
            raise NonFinite(f"series {self.name!r} contains NaN or Inf")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return len(self)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def values_of(x) -> np.ndarray:
    """Return the float array behind a TimeSeries or array-like."""
    if isinstance(x, TimeSeries):
        return x.values
    v = np.asarray(x, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise NonFinite("input contains NaN or Inf")
    return v


def name_of(x, default: str) -> str:
    return x.name if isinstance(x, TimeSeries) else default


def _check_pair(x, y):
    a, b = values_of(x), values_of(y)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths differ: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def standardize(x) -> TimeSeries:
    """Zero mean, unit sample standard deviation (n-1 divisor)."""
    v = values_of(x)
    if v.shape[0] < 2:
        raise TooShort("need at least 2 samples")
    sd = v.std(ddof=1)
    if sd == 0:
        raise ConstantSeries("cannot standardize a constant series")
    z = (v - v.mean()) / sd
    # second centering pass removes the rounding residue of the first
    z -= z.mean()
    return TimeSeries(name_of(x, "x"), z)


@dataclass(frozen=True)
class CorrelationResult:
    rho: float
    n: int


def pearson_correlation(x, y) -> CorrelationResult:
    """Pearson correlation coefficient of two equal-length series.

    The computation is arranged so that swapping the arguments gives a
    bit-identical result.
    """
    a, b = _check_pair(x, y)
    n = a.shape[0]
    if n < 2:
        raise TooShort("need at least 2 samples")
    da = a - a.mean()
    db = b - b.mean()
    saa = float(np.dot(da, da))
    sbb = float(np.dot(db, db))
    if saa == 0 or sbb == 0:
        raise ConstantSeries("correlation undefined for a constant series")
    sab = float(np.dot(da, db))
    # sqrt(saa)*sqrt(sbb) is symmetric under swap since float * commutes
    rho = sab / (np.sqrt(saa) * np.sqrt(sbb))
    return CorrelationResult(rho=float(np.clip(rho, -1.0, 1.0)), n=n)


@dataclass(frozen=True)
class StationarityReport:
    n_segments: int
    segment_means: tuple
    segment_variances: tuple
    max_mean_drift: float
    max_variance_ratio: float
    passed: bool
    degenerate: bool = False


def stationarity_check(x, n_segments: int = 4, mean_tol: float = 0.5,
                       var_tol: float = 2.0) -> StationarityReport:
    """Heuristic weak-stationarity diagnostic.

    The series is cut into ``n_segments`` contiguous blocks (the remainder
    goes to the last block). The spread of block means is measured in units
    of the pooled within-block standard deviation, and the spread of block
    variances as a max/min ratio. This is a screening tool, not a unit-root
    test.
    """
    v = values_of(x)
    n = v.shape[0]
    if n_segments < 2 or n < 2 * n_segments:
        raise TooShort(f"need n >= 2*n_segments with n_segments >= 2 (n={n})")
    size = n // n_segments
    bounds = [i * size for i in range(n_segments)] + [n]
    segs = [v[bounds[i]:bounds[i + 1]] for i in range(n_segments)]
    means = np.array([s.mean() for s in segs])
    variances = np.array([s.var(ddof=1) for s in segs])
    pooled_sd = np.sqrt(variances.mean())
    spread = means.max() - means.min()
    if pooled_sd == 0 or variances.min() == 0:
        drift = 0.0 if spread == 0 else np.inf
        return StationarityReport(n_segments, tuple(means), tuple(variances),
                                  float(drift), np.inf, False, degenerate=True)
    drift = spread / pooled_sd
    ratio = variances.max() / variances.min()
    passed = bool(drift <= mean_tol and ratio <= var_tol)
    return StationarityReport(n_segments, tuple(means), tuple(variances),
                              float(drift), float(ratio), passed)
