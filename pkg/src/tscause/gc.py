"""Granger causality from nested least-squares autoregressions.

The score is the log ratio of residual variances of the Y-only model and
the model that also sees lagged X. Significance comes from the classical
F-test on the same residual sums of squares.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .core import name_of, stationarity_check, values_of
from .errors import LengthMismatch, SingularDesign, TooShort

RANK_TOL = 1e-10
PERFECT_FIT_TOL = 1e-20


@dataclass(frozen=True)
class ModelFit:
    kind: str  # "restricted" | "unrestricted"
    order: int
    coeffs_self: np.ndarray
    coeffs_cross: np.ndarray
    intercept: float
    residuals: np.ndarray
    resid_variance: float
    n_eff: int

    @property
    def rss(self) -> float:
        return float(np.dot(self.residuals, self.residuals))


@dataclass(frozen=True)
class GcResult:
    source: str
    target: str
    order: int
    f_stat: float
    p_value: float
    n_eff: int
    stationarity_warning: bool = False
    alpha: float | None = None
    significant: bool | None = None


def lagged_design(y, x, p: int, start: int | None = None):
    """Target vector and regressor blocks for a lag-``p`` autoregression.

    Rows cover t = start..n-1 (0-based); ``start`` defaults to ``p``.
    Returns ``(target, own_lags, cross_lags)``, with ``cross_lags`` None
    when ``x`` is None. Column ``k`` of each block holds lag ``k+1``.
    """
    yv = values_of(y)
    n = yv.shape[0]
    start = p if start is None else start
    target = yv[start:]
    own = np.column_stack([yv[start - k:n - k] for k in range(1, p + 1)])
    cross = None
    if x is not None:
        xv = values_of(x)
        cross = np.column_stack([xv[start - k:n - k] for k in range(1, p + 1)])
    return target, own, cross


def ols(design: np.ndarray, target: np.ndarray):
    """Least squares by Householder QR with a rank check.

    Columns are scaled to unit norm before factorization so the rank test
    does not depend on the units of the inputs.
    """
    norms = np.linalg.norm(design, axis=0)
    if np.any(norms == 0):
        raise SingularDesign("all-zero regressor column")
    q, r = np.linalg.qr(design / norms)
    diag = np.abs(np.diag(r))
    if diag.min() <= RANK_TOL * diag.max():
        raise SingularDesign("regressors are collinear")
    beta = np.linalg.solve(r, q.T @ target) / norms
    resid = target - design @ beta
    return beta, resid


def _fit(target, own, cross, p):
    m = target.shape[0]
    cols = [np.ones(m), own] if cross is None else [np.ones(m), own, cross]
    beta, resid = ols(np.column_stack(cols), target)
    return ModelFit(
        kind="restricted" if cross is None else "unrestricted",
        order=p,
        coeffs_self=beta[1:p + 1],
        coeffs_cross=beta[p + 1:] if cross is not None else np.empty(0),
        intercept=float(beta[0]),
        residuals=resid,
        resid_variance=float(np.dot(resid, resid) / m),
        n_eff=m,
    )


def fit_restricted(y, p: int) -> ModelFit:
    """Regress y(t) on an intercept and y(t-1)..y(t-p)."""
    n = values_of(y).shape[0]
    if p < 1 or n <= 2 * p + 2:
        raise TooShort(f"need p >= 1 and n > 2p+2 (n={n}, p={p})")
    target, own, _ = lagged_design(y, None, p)
    return _fit(target, own, None, p)


def fit_unrestricted(y, x, p: int) -> ModelFit:
    """Regress y(t) on an intercept, y(t-1)..y(t-p) and x(t-1)..x(t-p)."""
    yv, xv = values_of(y), values_of(x)
    if yv.shape != xv.shape:
        raise LengthMismatch(f"lengths differ: {yv.shape[0]} vs {xv.shape[0]}")
    n = yv.shape[0]
    if p < 1 or n <= 3 * p + 2:
        raise TooShort(f"need p >= 1 and n > 3p+2 (n={n}, p={p})")
    target, own, cross = lagged_design(yv, xv, p)
    return _fit(target, own, cross, p)


def granger_f(y, x, p: int) -> GcResult:
    """Granger score for x -> y at lag order ``p``.

    ``f_stat`` is ln(var_restricted / var_unrestricted) with MLE variances,
    so it is never negative. ``p_value`` is from the finite-sample F-test
    with (p, n_eff - 2p - 1) degrees of freedom.
    """
    unres = fit_unrestricted(y, x, p)
    res = fit_restricted(y, p)
    rss_u, rss_r = unres.rss, res.rss
    m = unres.n_eff
    df2 = m - 2 * p - 1
    target = values_of(y)[p:]
    # residuals at rounding level count as an exact fit
    floor = PERFECT_FIT_TOL * float(np.sum((target - target.mean()) ** 2))
    if rss_u <= floor:
        if rss_r <= floor:
            f_stat, p_value = 0.0, 1.0
        else:
            f_stat, p_value = math.inf, 0.0
    else:
        f_stat = math.log(res.resid_variance / unres.resid_variance)
        fval = max(rss_r - rss_u, 0.0) / p / (rss_u / df2)
        p_value = float(stats.f.sf(fval, p, df2))
    return GcResult(
        source=name_of(x, "x"), target=name_of(y, "y"), order=p,
        f_stat=f_stat, p_value=p_value, n_eff=m,
    )


def select_order(y, x, p_max: int, criterion: str = "bic") -> int:
    """Lag order in 1..p_max minimizing AIC or BIC of the unrestricted model.

    Every candidate is fit on the same rows t = p_max..n-1 so the criteria
    are comparable. Ties go to the smaller order.
    """
    if criterion not in ("aic", "bic"):
        raise ValueError(f"unknown criterion {criterion!r}")
    yv, xv = values_of(y), values_of(x)
    if yv.shape != xv.shape:
        raise LengthMismatch(f"lengths differ: {yv.shape[0]} vs {xv.shape[0]}")
    n = yv.shape[0]
    if p_max < 1 or n <= 3 * p_max + 2:
        raise TooShort(f"need p_max >= 1 and n > 3*p_max+2 (n={n})")
    best_p, best_ic = 1, math.inf
    for p in range(1, p_max + 1):
        target, own, cross = lagged_design(yv, xv, p, start=p_max)
        fit = _fit(target, own, cross, p)
        m = fit.n_eff
        k = 2 * p + 1
        penalty = k * math.log(m) if criterion == "bic" else 2 * k
        ic = m * math.log(fit.resid_variance) + penalty if fit.resid_variance > 0 else -math.inf
        if ic < best_ic:
            best_p, best_ic = p, ic
    return best_p


def default_order_max(n: int) -> int:
    return max(1, min(10, n // 20, (n - 3) // 3))


def gc_test(y, x, p="auto", alpha: float = 0.05, criterion: str = "bic",
            p_max: int | None = None) -> GcResult:
    """Full Granger pipeline for x -> y: stationarity screen, order
    selection when ``p == "auto"``, score and decision at ``alpha``."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    n = values_of(y).shape[0]
    flag = False
    for s in (y, x):
        try:
            flag |= not stationarity_check(s).passed
        except TooShort:
            pass
    if flag:
        warnings.warn("input fails the stationarity screen; Granger result may be unreliable",
                      stacklevel=2)
    if p == "auto":
        p = select_order(y, x, p_max or default_order_max(n), criterion)
    r = granger_f(y, x, int(p))
    return GcResult(
        source=r.source, target=r.target, order=r.order, f_stat=r.f_stat,
        p_value=r.p_value, n_eff=r.n_eff, stationarity_warning=flag,
        alpha=alpha, significant=bool(r.p_value <= alpha),
    )
