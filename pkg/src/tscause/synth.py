"""Synthetic systems with known causal structure.

Every generator is deterministic in its seed, discards a 500-sample
burn-in and can decimate its output (keep every ``downsample``-th sample)
to mimic coarse sampling of a faster process.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import TimeSeries
from .errors import Diverged, TooShort, Unstable

BURN_IN = 500
TENT_PEAK = 0.65


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    strength: float


@dataclass(frozen=True)
class SyntheticDataset:
    series: tuple
    truth: tuple  # of Edge
    params: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def names(self):
        return [s.name for s in self.series]

    def has_edge(self, source: str, target: str) -> bool:
        return any(e.source == source and e.target == target for e in self.truth)


def _check_n(n, minimum=100):
    if n < minimum:
        raise TooShort(f"need n >= {minimum}")


def _total(n, downsample):
    if downsample < 1:
        raise ValueError("downsample must be >= 1")
    return BURN_IN + n * downsample


def _finish(arrays, downsample):
    return [a[BURN_IN:][::downsample] for a in arrays]


def gen_coupled_ar(n: int = 2000, c: float = 0.8, a_x: float = 0.5, a_y: float = 0.5,
                   noise_sd: float = 1.0, seed: int = 0, downsample: int = 1) -> SyntheticDataset:
    """x(t) = a_x x(t-1) + e_x;  y(t) = a_y y(t-1) + c x(t-1) + e_y."""
    if abs(a_x) >= 1 or abs(a_y) >= 1:
        raise Unstable("AR coefficients must satisfy |a| < 1")
    _check_n(n)
    total = _total(n, downsample)
    rng = np.random.default_rng(seed)
    ex = rng.normal(0.0, noise_sd, total)
    ey = rng.normal(0.0, noise_sd, total)
    x = np.zeros(total)
    y = np.zeros(total)
    for t in range(1, total):
        x[t] = a_x * x[t - 1] + ex[t]
        y[t] = a_y * y[t - 1] + c * x[t - 1] + ey[t]
    x, y = _finish([x, y], downsample)
    truth = (Edge("x", "y", c),) if c != 0 else ()
    return SyntheticDataset(
        (TimeSeries("x", x), TimeSeries("y", y)), truth,
        dict(system="coupled_ar", n=n, c=c, a_x=a_x, a_y=a_y, noise_sd=noise_sd,
             seed=seed, downsample=downsample),
    )


def skew_tent(u):
    return np.where(u < TENT_PEAK, u / TENT_PEAK, (1.0 - u) / (1.0 - TENT_PEAK))


def gen_coupled_maps(n: int = 3000, c_xy: float = 0.4, c_yx: float = 0.0, r_x: float = TENT_PEAK,
                     r_y: float = TENT_PEAK, seed: int = 0, downsample: int = 1) -> SyntheticDataset:
    """Two skew-tent maps with diffusive coupling, wrapped modulo 1.

    x(t+1) = f(x) + c_yx (y - x);  y(t+1) = g(y) + c_xy (x - y).
    ``c_xy`` is the strength of x -> y. ``r_x``/``r_y`` set the tent peaks.
    """
    for r in (r_x, r_y):
        if not 0 < r < 1:
            raise ValueError("tent peak must lie in (0, 1)")
    _check_n(n)
    total = _total(n, downsample)
    rng = np.random.default_rng(seed)
    x = np.empty(total)
    y = np.empty(total)
    x[0], y[0] = rng.random(2)
    with np.errstate(invalid="ignore", over="ignore"):
        for t in range(total - 1):
            xt, yt = x[t], y[t]
            fx = xt / r_x if xt < r_x else (1.0 - xt) / (1.0 - r_x)
            gy = yt / r_y if yt < r_y else (1.0 - yt) / (1.0 - r_y)
            x[t + 1] = (fx + c_yx * (yt - xt)) % 1.0
            y[t + 1] = (gy + c_xy * (xt - yt)) % 1.0
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))
            and x.min() >= 0 and y.min() >= 0 and x.max() <= 1 and y.max() <= 1):
        raise Diverged("map trajectory left [0, 1]")
    x, y = _finish([x, y], downsample)
    truth = tuple(e for e in (Edge("x", "y", c_xy), Edge("y", "x", c_yx)) if e.strength != 0)
    return SyntheticDataset(
        (TimeSeries("x", x), TimeSeries("y", y)), truth,
        dict(system="coupled_maps", n=n, c_xy=c_xy, c_yx=c_yx, r_x=r_x, r_y=r_y,
             seed=seed, downsample=downsample),
    )


def gen_confounded(n: int = 2000, lag_x: int = 0, lag_y: int = 0, noise_sd: float = 0.1,
                   seed: int = 0, a_z: float = 0.8, downsample: int = 1) -> SyntheticDataset:
    """Common driver z (AR(1), unit innovations) feeding x and y:
    x(t) = z(t - lag_x) + e,  y(t) = z(t - lag_y) + e'.  No x <-> y edge."""
    if abs(a_z) >= 1:
        raise Unstable("driver AR coefficient must satisfy |a_z| < 1")
    if lag_x < 0 or lag_y < 0:
        raise ValueError("lags must be non-negative")
    _check_n(n, 100 + max(lag_x, lag_y))
    total = _total(n, downsample)
    rng = np.random.default_rng(seed)
    ez = rng.normal(0.0, 1.0, total)
    ex = rng.normal(0.0, noise_sd, total)
    ey = rng.normal(0.0, noise_sd, total)
    z = np.zeros(total)
    for t in range(1, total):
        z[t] = a_z * z[t - 1] + ez[t]
    # lags reach back into the burn-in, never before t = 0
    t = np.arange(total)
    x = z[np.maximum(t - lag_x, 0)] + ex
    y = z[np.maximum(t - lag_y, 0)] + ey
    z, x, y = _finish([z, x, y], downsample)
    return SyntheticDataset(
        (TimeSeries("z", z), TimeSeries("x", x), TimeSeries("y", y)),
        (Edge("z", "x", 1.0), Edge("z", "y", 1.0)),
        dict(system="confounded", n=n, lag_x=lag_x, lag_y=lag_y, noise_sd=noise_sd,
             a_z=a_z, seed=seed, downsample=downsample),
    )


def gen_lagged_copy(n: int = 10000, seed: int = 0) -> SyntheticDataset:
    """Binary i.i.d. source j and target i with i(t+1) = j(t); i(0) random."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    j = rng.integers(0, 2, n)
    i = np.empty(n, dtype=np.int64)
    i[0] = rng.integers(0, 2)
    i[1:] = j[:-1]
    return SyntheticDataset(
        (TimeSeries("j", j), TimeSeries("i", i)), (Edge("j", "i", 1.0),),
        dict(system="lagged_copy", n=n, seed=seed),
    )
