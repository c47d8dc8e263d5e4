"""Plug-in transfer entropy on symbol sequences.

TE(J -> I) = sum p(i+, i^k, j^l) log2[ p(i+ | i^k, j^l) / p(i+ | i^k) ]

with all probabilities taken as raw empirical frequencies over the aligned
(next target state, target history, source history) triples. This is the
conditional-probability form; it is zero when the counts factorize and is
never negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, TooShort
from .surrogate import SurrogateSpec, make_surrogate
from .symbolic import DEFAULT_BINS, SymbolSequence, symbolize


@dataclass(frozen=True)
class TeConfig:
    k: int = 1
    l: int = 1
    bins: int = DEFAULT_BINS

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("history lengths k and l must be >= 1")
        if self.bins < 2:
            raise ValueError("bins must be >= 2")


@dataclass(frozen=True)
class TeResult:
    te_bits: float
    n_triples: int
    effective_te_bits: float | None = None
    surrogate_mean: float | None = None
    surrogate_sd: float | None = None


def _as_symbols(s) -> tuple[np.ndarray, int]:
    if isinstance(s, SymbolSequence):
        return s.symbols, s.alphabet
    arr = np.asarray(s, dtype=np.int64).ravel()
    return arr, int(arr.max()) + 1


def _history_code(seq: np.ndarray, alphabet: int, depth: int, start: int, stop: int):
    """Integer code of (seq[t], seq[t-1], ..., seq[t-depth+1]) for t in [start, stop)."""
    code = np.zeros(stop - start, dtype=np.int64)
    for d in range(depth):
        code = code * alphabet + seq[start - d:stop - d]
    return code


def triples(target, source, k: int = 1, l: int = 1):
    """Aligned integer codes ``(next, target_history, source_history)`` plus
    the sizes of the three code spaces."""
    i_seq, i_alpha = _as_symbols(target)
    j_seq, j_alpha = _as_symbols(source)
    if i_seq.shape != j_seq.shape:
        raise LengthMismatch(f"lengths differ: {i_seq.shape[0]} vs {j_seq.shape[0]}")
    n = i_seq.shape[0]
    h = max(k, l)
    if n <= h + 1:
        raise TooShort(f"need length > max(k, l) + 1 (n={n})")
    start, stop = h - 1, n - 1
    nxt = i_seq[start + 1:stop + 1]
    ik = _history_code(i_seq, i_alpha, k, start, stop)
    jl = _history_code(j_seq, j_alpha, l, start, stop)
    return (nxt, ik, jl), (i_alpha, i_alpha ** k, j_alpha ** l)


def _joint(cols, sizes):
    code = np.zeros_like(cols[0])
    for c, size in zip(cols, sizes):
        code = code * size + c
    return code


def _counts(cols, sizes):
    _, inverse, counts = np.unique(_joint(cols, sizes), return_inverse=True, return_counts=True)
    return inverse.ravel(), counts


def transfer_entropy(target, source, cfg: TeConfig | None = None) -> TeResult:
    """Transfer entropy from ``source`` to ``target`` in bits."""
    cfg = cfg or TeConfig()
    (nxt, ik, jl), (a, sk, sl) = triples(target, source, cfg.k, cfg.l)
    m = nxt.shape[0]
    inv_xyz, c_xyz = _counts((nxt, ik, jl), (a, sk, sl))
    inv_yz, c_yz = _counts((ik, jl), (sk, sl))
    inv_xy, c_xy = _counts((nxt, ik), (a, sk))
    inv_y, c_y = _counts((ik,), (sk,))
    # one representative row per occupied (next, hist_i, hist_j) cell
    _, rep = np.unique(inv_xyz, return_index=True)
    n_xyz = c_xyz.astype(float)
    n_yz = c_yz[inv_yz[rep]].astype(float)
    n_xy = c_xy[inv_xy[rep]].astype(float)
    n_y = c_y[inv_y[rep]].astype(float)
    # p(x|y,z) / p(x|y) = n_xyz * n_y / (n_yz * n_xy)
    te = float(np.sum(n_xyz / m * np.log2(n_xyz * n_y / (n_yz * n_xy))))
    return TeResult(te_bits=te, n_triples=m)


def _entropy(counts: np.ndarray) -> float:
    p = counts / counts.sum()
    return float(-np.sum(p * np.log2(p)))


def transfer_entropy_entropies(target, source, cfg: TeConfig | None = None) -> float:
    """TE via H(i+, i^k) - H(i^k) - H(i+, i^k, j^l) + H(i^k, j^l)."""
    cfg = cfg or TeConfig()
    (nxt, ik, jl), (a, sk, sl) = triples(target, source, cfg.k, cfg.l)
    return (_entropy(_counts((nxt, ik), (a, sk))[1]) - _entropy(_counts((ik,), (sk,))[1])
            - _entropy(_counts((nxt, ik, jl), (a, sk, sl))[1])
            + _entropy(_counts((ik, jl), (sk, sl))[1]))


def effective_te(target, source, cfg: TeConfig | None = None, n_surrogates: int = 100,
                 seed: int = 0) -> TeResult:
    """TE minus the mean TE over source-shuffled surrogates.

    Shuffling the source keeps its symbol frequencies and removes any
    coupling, so the surrogate mean estimates the small-sample bias.
    """
    if n_surrogates < 19:
        raise ValueError("effective TE needs at least 19 surrogates")
    cfg = cfg or TeConfig()
    raw = transfer_entropy(target, source, cfg)
    j_seq, j_alpha = _as_symbols(source)
    spec = SurrogateSpec("shuffle", n_surrogates, seed)
    null = np.array([
        transfer_entropy(target, SymbolSequence(make_surrogate(j_seq, spec, i), j_alpha), cfg).te_bits
        for i in range(n_surrogates)
    ])
    mean = float(null.mean())
    return TeResult(te_bits=raw.te_bits, n_triples=raw.n_triples,
                    effective_te_bits=raw.te_bits - mean, surrogate_mean=mean,
                    surrogate_sd=float(null.std(ddof=1)))


def te_series(target, source, cfg: TeConfig | None = None) -> TeResult:
    """Symbolize two real-valued series with ``cfg.bins`` bins and return TE."""
    cfg = cfg or TeConfig()
    return transfer_entropy(symbolize(target, cfg.bins), symbolize(source, cfg.bins), cfg)
