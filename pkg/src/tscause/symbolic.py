"""Equal-width symbolization and Effort-to-Compress (ETC).

ETC counts the passes of non-sequential recursive pair substitution
(NSRPS) needed to reduce a symbol sequence to a single repeated symbol.
Each pass:

* counts every adjacent pair, non-overlapping, scanning left to right
  (so ``[1, 1, 1]`` holds one ``(1, 1)``);
* picks the most frequent pair, breaking ties by leftmost first occurrence;
* replaces its non-overlapping occurrences, left to right, with a fresh
  symbol ``max + 1``.

Passes stop when the sequence is homogeneous or has length 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .core import values_of
from .errors import BadAlphabet, ConstantSeries, LengthMismatch, TooShort

DEFAULT_BINS = 4


@dataclass(frozen=True)
class SymbolSequence:
    symbols: np.ndarray
    alphabet: int

    def __post_init__(self):
        s = np.array(self.symbols, dtype=np.int64, copy=True).ravel()
        if self.alphabet < 1:
            raise BadAlphabet("alphabet size must be positive")
        if s.size and (s.min() < 0 or s.max() >= self.alphabet):
            raise BadAlphabet(f"symbols must lie in [0, {self.alphabet})")
        s.setflags(write=False)
        object.__setattr__(self, "symbols", s)

    def __len__(self):
        return self.symbols.shape[0]

    @classmethod
    def of(cls, symbols) -> "SymbolSequence":
        """Wrap raw integer symbols, inferring the alphabet as max + 1."""
        s = np.asarray(symbols, dtype=np.int64).ravel()
        return cls(s, int(s.max()) + 1 if s.size else 1)


@dataclass(frozen=True)
class EtcResult:
    iterations: int
    length: int

    @property
    def normalized(self) -> float:
        return self.iterations / (self.length - 1) if self.length > 1 else 0.0


def symbolize(x, bins: int = DEFAULT_BINS) -> SymbolSequence:
    """Map samples to ``bins`` equal-width bins over [min, max].

    Bins are half-open ``[lo, hi)`` except the top one, which is closed so
    the maximum lands in bin ``bins - 1``.
    """
    if bins < 2:
        raise BadAlphabet("need at least 2 bins")
    v = values_of(x)
    lo, hi = v.min(), v.max()
    if lo == hi:
        raise ConstantSeries("cannot symbolize a constant series")
    sym = np.floor((v - lo) / (hi - lo) * bins).astype(np.int64)
    np.clip(sym, 0, bins - 1, out=sym)
    return SymbolSequence(sym, bins)


@numba.njit(cache=True)
def _is_homogeneous(s, n):
    for i in range(1, n):
        if s[i] != s[0]:
            return False
    return True


@numba.njit(cache=True)
def _substitute(s, n, a, b, new):
    j = 0
    i = 0
    while i < n:
        if i + 1 < n and s[i] == a and s[i + 1] == b:
            s[j] = new
            i += 2
        else:
            s[j] = s[i]
            i += 1
        j += 1
    return j


@numba.njit(cache=True)
def _passes_dense(s, n, width):
    # pair (a, b) lives at a * width + b; width bounds every symbol that can
    # appear, since each pass adds exactly one new symbol
    counts = np.zeros(width * width, dtype=np.int64)
    last = np.empty(width * width, dtype=np.int64)
    first = np.empty(width * width, dtype=np.int64)
    passes = 0
    while n > 1 and not _is_homogeneous(s, n):
        best_code = -1
        best_count = 0
        best_first = n
        for i in range(n - 1):
            a = s[i]
            b = s[i + 1]
            code = a * width + b
            c = counts[code]
            if c == 0:
                counts[code] = 1
                last[code] = i
                first[code] = i
                c = 1
            elif a != b or i >= last[code] + 2:
                c += 1
                counts[code] = c
                last[code] = i
            else:
                continue
            if c > best_count or (c == best_count and first[code] < best_first):
                best_count = c
                best_code = code
                best_first = first[code]
        for i in range(n - 1):
            counts[s[i] * width + s[i + 1]] = 0
        top = s[0]
        for i in range(1, n):
            if s[i] > top:
                top = s[i]
        a = best_code // width
        n = _substitute(s, n, a, best_code - a * width, top + 1)
        passes += 1
    return passes


@numba.njit(cache=True)
def _passes_sorted(s, n):
    passes = 0
    codes = np.empty(max(n - 1, 1), dtype=np.int64)
    while n > 1 and not _is_homogeneous(s, n):
        top = s[0]
        for i in range(1, n):
            if s[i] > top:
                top = s[i]
        base = top + 1
        m = n - 1
        for i in range(m):
            codes[i] = s[i] * base + s[i + 1]
        order = np.argsort(codes[:m], kind="mergesort")
        best_code = -1
        best_count = -1
        best_first = n
        g = 0
        while g < m:
            code = codes[order[g]]
            a = code // base
            b = code - a * base
            cnt = 0
            last = -2
            h = g
            while h < m and codes[order[h]] == code:
                pos = order[h]
                if a != b or pos >= last + 2:
                    cnt += 1
                    last = pos
                h += 1
            # mergesort is stable, so order[g] is the first occurrence
            if cnt > best_count or (cnt == best_count and order[g] < best_first):
                best_count = cnt
                best_code = code
                best_first = order[g]
            g = h
        a = best_code // base
        n = _substitute(s, n, a, best_code - a * base, top + 1)
        passes += 1
    return passes


@numba.njit(cache=True)
def _nsrps_passes(seq):
    s = seq.copy()
    n = s.shape[0]
    if n < 2:
        return 0
    width = s.max() + n
    if width <= 2048:
        return _passes_dense(s, n, width)
    return _passes_sorted(s, n)


def etc_count(symbols) -> int:
    """Raw NSRPS pass count for an integer array."""
    s = np.ascontiguousarray(symbols, dtype=np.int64)
    if s.shape[0] <= 1:
        return 0
    return int(_nsrps_passes(s))


def _symbols(s) -> np.ndarray:
    return s.symbols if isinstance(s, SymbolSequence) else np.asarray(s, dtype=np.int64)


def etc(s) -> EtcResult:
    """Effort-to-Compress of a symbol sequence."""
    arr = _symbols(s)
    if arr.shape[0] < 1:
        raise TooShort("ETC needs a non-empty sequence")
    return EtcResult(etc_count(arr), arr.shape[0])


def pair_code(a, b, b_alphabet: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) * b_alphabet + np.asarray(b, dtype=np.int64)


def etc_joint(a, b) -> EtcResult:
    """ETC of the paired sequence ``(a_i, b_i)``, recoded as ``a_i * B_b + b_i``."""
    aa, bb = _symbols(a), _symbols(b)
    if aa.shape != bb.shape:
        raise LengthMismatch(f"lengths differ: {aa.shape[0]} vs {bb.shape[0]}")
    if aa.shape[0] < 1:
        raise TooShort("ETC needs a non-empty sequence")
    b_alpha = b.alphabet if isinstance(b, SymbolSequence) else int(bb.max()) + 1
    return EtcResult(etc_count(pair_code(aa, bb, b_alpha)), aa.shape[0])
