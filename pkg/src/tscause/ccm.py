"""Convergent cross mapping.

Cause x -> y is inferred when states of ``x`` can be recovered from the
delay embedding of ``y`` and that recovery improves as the library of
embedded points grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import spearmanr

from .core import ConstantSeries, pearson_correlation, values_of
from .errors import BadEmbedding, DegenerateLibrary, LengthMismatch, TooShort


@dataclass(frozen=True)
class Manifold:
    E: int
    tau: int
    points: np.ndarray  # (n_points, E); column k holds lag k*tau
    origin_index: np.ndarray  # time index of each point's leading coordinate

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class CrossMapResult:
    skill: float
    library_length: int
    n_predictions: int
    defined: bool = True


@dataclass(frozen=True)
class ConvergenceCurve:
    library_lengths: tuple
    mean_skill: tuple
    n_subsamples: int
    converged: bool


@dataclass(frozen=True)
class CcmResult:
    """Both cross-map directions for a pair (x, y).

    ``x_to_y`` estimates x from the manifold of y, which is the evidence
    for x -> y; ``y_to_x`` is the reverse.
    """

    x_to_y: ConvergenceCurve
    y_to_x: ConvergenceCurve


def delay_embed(y, E: int = 3, tau: int = 1) -> Manifold:
    """Points (y_t, y_{t-tau}, ..., y_{t-(E-1)tau}) for every valid t."""
    if E < 1 or tau < 1:
        raise BadEmbedding("E and tau must be >= 1")
    v = values_of(y)
    n = v.shape[0]
    span = (E - 1) * tau
    if n <= span + 1:
        raise TooShort(f"need n > (E-1)*tau + 1 (n={n})")
    t = np.arange(span, n)
    points = np.column_stack([v[t - k * tau] for k in range(E)])
    return Manifold(E, tau, points, t)


def simplex_weights(dist: np.ndarray) -> np.ndarray:
    """Exponential neighbor weights exp(-d/d_min), normalized per row.

    ``dist`` rows are sorted ascending. A row with d_min == 0 splits its
    weight evenly across the zero-distance neighbors.
    """
    dist = np.atleast_2d(dist)
    dmin = dist[:, :1]
    zero = dmin[:, 0] == 0
    w = np.empty_like(dist)
    safe = np.where(zero[:, None], 1.0, dmin)
    with np.errstate(over="ignore"):  # d/d_min -> inf gives weight 0, as intended
        w[~zero] = np.exp(-dist[~zero] / safe[~zero])
    w[zero] = (dist[zero] == 0).astype(float)
    return w / w.sum(axis=1, keepdims=True)


def nearest_neighbors(library: np.ndarray, lib_index: np.ndarray, queries: np.ndarray,
                      k: int, exclude: np.ndarray | None = None):
    """k nearest library points for each query, ties broken by lower time index.

    ``lib_index`` holds the time index of each library row. When ``exclude``
    is given, query q never returns the library row whose time index equals
    ``exclude[q]``. Returns (distances, library row positions), each
    (n_queries, k), sorted ascending by (distance, time index).
    """
    order = np.argsort(lib_index, kind="stable")
    library, lib_index = library[order], lib_index[order]
    n_q = queries.shape[0]
    kq = min(k + 2, library.shape[0])
    d, j = cKDTree(library).query(queries, k=kq)
    d, j = d.reshape(n_q, kq), j.reshape(n_q, kq)
    if exclude is not None:
        own = lib_index[j] == exclude[:, None]
        d = np.where(own, np.inf, d)
        perm = np.argsort(d, axis=1, kind="stable")
        d, j = np.take_along_axis(d, perm, 1), np.take_along_axis(j, perm, 1)
    if kq > k:
        # the tree's order is exact unless distances tie among the first
        # k + 1; rescan those rows exhaustively
        bad = np.any(d[:, 1:k + 1] == d[:, :k], axis=1) | ~np.isfinite(d[:, k - 1])
    else:
        bad = np.ones(n_q, dtype=bool)
    d, j = d[:, :k].copy(), j[:, :k].copy()
    for q in np.flatnonzero(bad):
        d[q], j[q] = _scan(library, lib_index, queries[q], k,
                           None if exclude is None else exclude[q])
    return d, order[j]


def _scan(library, lib_index, query, k, exclude):
    dist = np.sqrt(np.sum((library - query) ** 2, axis=1))
    if exclude is not None:
        dist = np.where(lib_index == exclude, np.inf, dist)
    # library is sorted by time index, so a stable sort breaks ties by time
    idx = np.argsort(dist, kind="stable")[:k]
    return dist[idx], idx


def cross_map_skill(target, manifold: Manifold, L: int, seed: int = 0) -> CrossMapResult:
    """Estimate ``target`` from ``manifold`` using a random library of L points.

    Neighbors are the E+1 nearest library points. Every point outside the
    library is predicted; when the library is the whole manifold each point
    is predicted leave-one-out from the others.
    """
    x = values_of(target)
    n_pts = len(manifold)
    k = manifold.E + 1
    if manifold.origin_index.max() >= x.shape[0]:
        raise LengthMismatch("target is shorter than the manifold's time span")
    if L < manifold.E + 2 or L > n_pts:
        raise TooShort(f"library length must be in [E+2, {n_pts}] (got {L})")
    rng = np.random.default_rng(seed)
    lib = np.sort(rng.choice(n_pts, size=L, replace=False))
    lib_pts = manifold.points[lib]
    if np.all(lib_pts == lib_pts[0]):
        raise DegenerateLibrary("all library points are identical")
    times = manifold.origin_index
    if L == n_pts:
        pred = lib
        exclude = times[pred]
    else:
        mask = np.ones(n_pts, dtype=bool)
        mask[lib] = False
        pred = np.flatnonzero(mask)
        exclude = None
    dist, nb = nearest_neighbors(lib_pts, times[lib], manifold.points[pred], k, exclude)
    w = simplex_weights(dist)
    estimate = np.sum(w * x[times[lib][nb]], axis=1)
    truth = x[times[pred]]
    try:
        skill = pearson_correlation(truth, estimate).rho
        defined = True
    except ConstantSeries:
        skill, defined = float("nan"), False
    return CrossMapResult(skill, L, pred.shape[0], defined)


def _curve(target, manifold, lengths, n_subsamples, conv_margin, seed, direction):
    means = []
    for li, L in enumerate(lengths):
        skills = [cross_map_skill(target, manifold, L,
                                  _sub_seed(seed, direction, li, s)).skill
                  for s in range(n_subsamples)]
        skills = np.asarray(skills)
        means.append(float(np.nanmean(skills)) if np.any(np.isfinite(skills)) else float("nan"))
    converged = False
    if len(lengths) >= 2 and np.all(np.isfinite(means)):
        gain = means[-1] - means[0]
        rank = spearmanr(lengths, means).statistic
        converged = bool(gain > conv_margin and np.isfinite(rank) and rank > 0)
    return ConvergenceCurve(tuple(int(v) for v in lengths), tuple(means), n_subsamples, converged)


def _sub_seed(seed, direction, li, s):
    return int(np.random.SeedSequence([int(seed), direction, li, s]).generate_state(1)[0])


DEFAULT_LENGTHS = (10, 25, 50, 100, 200, 400, 800)


def ccm_convergence(x, y, E: int = 3, tau: int = 1, lengths=DEFAULT_LENGTHS,
                    n_subsamples: int = 5, conv_margin: float = 0.1,
                    seed: int = 0) -> CcmResult:
    """Cross-map skill versus library length, both directions.

    Convergence for a direction means the mean skill at the largest library
    beats the smallest by more than ``conv_margin`` and rises with L in the
    Spearman sense.
    """
    xv, yv = values_of(x), values_of(y)
    if xv.shape != yv.shape:
        raise LengthMismatch(f"lengths differ: {xv.shape[0]} vs {yv.shape[0]}")
    lengths = [int(v) for v in lengths]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise ValueError("library lengths must be strictly increasing")
    if n_subsamples < 5:
        raise ValueError("need at least 5 library subsamples per length")
    mx, my = delay_embed(xv, E, tau), delay_embed(yv, E, tau)
    if lengths[-1] > len(my):
        raise TooShort(f"largest library {lengths[-1]} exceeds {len(my)} manifold points")
    return CcmResult(
        x_to_y=_curve(xv, my, lengths, n_subsamples, conv_margin, seed, 0),
        y_to_x=_curve(yv, mx, lengths, n_subsamples, conv_margin, seed, 1),
    )
