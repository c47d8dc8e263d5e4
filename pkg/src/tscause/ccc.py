"""Compression-Complexity Causality.

For each window, with past blocks ``Y_past``, ``X_past`` of length ``L``
and the current block ``dY`` of length ``w``:

    CC(dY | Y_past)         = ETC(Y_past + dY) - ETC(Y_past)
    CC(dY | Y_past, X_past) = ETC(Y_past + dY, X_past + dY) - ETC(Y_past, X_past)
    CCC                     = CC(dY | Y_past) - CC(dY | Y_past, X_past)

``+`` is concatenation and the two-argument ETC is the ETC of the paired
sequence. ETC terms are raw pass counts. The series score is the plain
mean over windows that slide by ``delta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .core import values_of
from .errors import LengthMismatch, TooShort
from .symbolic import DEFAULT_BINS, SymbolSequence, _nsrps_passes, etc_count, pair_code, symbolize


@dataclass(frozen=True)
class CccParams:
    L: int = 100
    w: int = 15
    delta: int = 50
    bins: int = DEFAULT_BINS

    def __post_init__(self):
        if self.L < 2 or self.w < 1 or self.delta < 1:
            raise ValueError("need L >= 2, w >= 1, delta >= 1")
        if self.bins < 2:
            raise ValueError("need bins >= 2")


@dataclass(frozen=True)
class CccResult:
    ccc: float
    window_values: np.ndarray
    n_windows: int


def _parts(s):
    if isinstance(s, SymbolSequence):
        return s.symbols, s.alphabet
    a = np.asarray(s, dtype=np.int64)
    return a, int(a.max()) + 1 if a.size else 1


def cc_self(dy, y_past) -> int:
    """Extra ETC effort for ``dy`` given the target's own past."""
    d, _ = _parts(dy)
    yp, _ = _parts(y_past)
    if d.size == 0 or yp.size == 0:
        raise TooShort("blocks must be non-empty")
    return etc_count(np.concatenate([yp, d])) - etc_count(yp)


def cc_joint(dy, y_past, x_past) -> int:
    """Extra joint ETC effort for ``dy`` given both pasts; ``dy`` is appended
    on both coordinates."""
    d, d_alpha = _parts(dy)
    yp, _ = _parts(y_past)
    xp, x_alpha = _parts(x_past)
    if yp.shape != xp.shape:
        raise LengthMismatch("y_past and x_past must have equal length")
    if d.size == 0 or yp.size == 0:
        raise TooShort("blocks must be non-empty")
    base = max(x_alpha, d_alpha)
    full = pair_code(np.concatenate([yp, d]), np.concatenate([xp, d]), base)
    past = pair_code(yp, xp, base)
    return etc_count(full) - etc_count(past)


@numba.njit(cache=True)
def _window_values(xs, ys, base, L, w, delta):
    n = ys.shape[0]
    n_win = (n - L - w) // delta + 1
    out = np.empty(n_win)
    for k in range(n_win):
        t = k * delta
        y_full = ys[t:t + L + w]
        joint_full = y_full * base
        joint_full[:L] += xs[t:t + L]
        joint_full[L:] += ys[t + L:t + L + w]
        self_cc = _nsrps_passes(y_full) - _nsrps_passes(ys[t:t + L])
        joint_cc = _nsrps_passes(joint_full) - _nsrps_passes(joint_full[:L].copy())
        out[k] = self_cc - joint_cc
    return out


def ccc_symbols(xs: np.ndarray, ys: np.ndarray, params: CccParams, base: int) -> CccResult:
    """CCC x -> y on pre-symbolized integer arrays with joint code base ``base``."""
    vals = _window_values(np.ascontiguousarray(xs, dtype=np.int64),
                          np.ascontiguousarray(ys, dtype=np.int64),
                          base, params.L, params.w, params.delta)
    # math.fsum-free fixed-order mean keeps results bit-reproducible
    return CccResult(float(np.mean(vals)), vals, vals.shape[0])


def ccc_pair(x, y, params: CccParams | None = None) -> CccResult:
    """Averaged CCC from ``x`` to ``y``.

    Both series are symbolized once over their full range; windows start at
    0, delta, 2*delta, ... while ``t + L + w <= n``.
    """
    params = params or CccParams()
    xv, yv = values_of(x), values_of(y)
    if xv.shape != yv.shape:
        raise LengthMismatch(f"lengths differ: {xv.shape[0]} vs {yv.shape[0]}")
    if xv.shape[0] < params.L + params.w:
        raise TooShort(f"need n >= L + w (n={xv.shape[0]})")
    xs = symbolize(xv, params.bins).symbols
    ys = symbolize(yv, params.bins).symbols
    return ccc_symbols(xs, ys, params, params.bins)
