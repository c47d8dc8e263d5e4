"""Surrogate series and add-one permutation p-values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import TimeSeries, values_of
from .errors import TooShort

KINDS = ("shuffle", "circular_shift")


@dataclass(frozen=True)
class SurrogateSpec:
    kind: str = "shuffle"
    n_surrogates: int = 99
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"surrogate kind must be one of {KINDS}")
        if self.n_surrogates < 19:
            raise ValueError("need at least 19 surrogates")


@dataclass(frozen=True)
class SignificanceResult:
    observed: float
    null_values: np.ndarray
    p_value: float
    significant: bool
    alpha: float


def surrogate_rng(seed: int, index: int) -> np.random.Generator:
    # (seed, index) goes through SeedSequence so nearby master seeds do not
    # share surrogate streams
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])


def make_surrogate(x, spec: SurrogateSpec, index: int):
    """Surrogate number ``index`` of ``x``; deterministic in (spec.seed, index).

    Returns a TimeSeries for TimeSeries input and an array otherwise.
    """
    is_ts = isinstance(x, TimeSeries)
    v = x.values if is_ts else np.asarray(x)
    n = v.shape[0]
    if n < 2:
        raise TooShort("surrogates need at least 2 samples")
    rng = surrogate_rng(spec.seed, index)
    if spec.kind == "shuffle":
        out = v[rng.permutation(n)]
    else:
        out = np.roll(v, int(rng.integers(1, n)))
    return TimeSeries(x.name, out) if is_ts else out


def add_one_p_value(observed: float, null_values, tail: str = "right") -> float:
    null = np.asarray(null_values, dtype=float)
    if tail == "abs":
        observed, null = abs(observed), np.abs(null)
    elif tail != "right":
        raise ValueError("tail must be 'right' or 'abs'")
    return (1 + int(np.sum(null >= observed))) / (1 + null.shape[0])


def significance_test(measure: Callable, x, y, spec: SurrogateSpec, alpha: float = 0.05,
                      tail: str = "right") -> SignificanceResult:
    """Permutation test of the directed score ``measure(x, y)`` (x -> y).

    Only the source ``x`` is randomized; the target keeps its own structure.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    observed = float(measure(x, y))
    null = np.array([float(measure(make_surrogate(x, spec, i), y))
                     for i in range(spec.n_surrogates)])
    p = add_one_p_value(observed, null, tail)
    return SignificanceResult(observed, null, p, bool(p <= alpha), alpha)
