"""Decay-based membership diagnostics for coefficient families.

The weighted decay seminorm of a coefficient family T is

    p_hat_{w,h}(T) = sup_xi ||T_xi||_HS * exp((1/h) w(sqrt(lambda_xi))),

finite exactly when T lies in the (w, h) decay class.  Membership at *some* h
is decided by a single parameter value (the decay classes form a regular
inductive family in h), so a point estimate of the critical h suffices: we
regress log ||T_xi||_HS against -w(sqrt(lambda_xi)) and report h* = -1/slope.

``fit_weight_from_decay`` runs the explicit construction that manufactures a
weight from super-polynomial decay: with C_n = sup_xi ||T_xi||_HS (1+lambda)^n,

    g(t) = max_{n <= t} [ n log(1+t) - log C_n ]

is superlogarithmic as soon as every C_n is finite, and the defining
inequality ||T_xi||_HS <= C_n (1+lambda_xi)^{-n} transfers to the returned
tabulated weight by construction.  On a truncated dual the C_n are only
trustworthy while the sup is attained away from the largest lambda, so n is
capped accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EstimationError, InsufficientDataError, ParameterError
from .fourier import FourierCoefficients
from .weights import WeightFunction, eval_weight, tabulated_weight

_ZERO_FLOOR = 1e-300


def decay_seminorm(T: FourierCoefficients, w: WeightFunction, h: float) -> float:
    """sup_xi ||T_xi||_HS e^{(1/h) w(sqrt(lambda_xi))} over the truncated dual.

    Computed in log space; a sup beyond double range is reported as +inf.
    """
    if h <= 0:
        raise DomainError("h must be positive")
    best = -np.inf
    for xi, norm in T.hs_norms().items():
        if norm <= 0.0:
            continue
        best = max(best, np.log(norm) + eval_weight(w, np.sqrt(xi.casimir)) / h)
    if best == -np.inf:
        return 0.0
    with np.errstate(over="ignore"):
        return float(np.exp(best))


@dataclass
class DecayReport:
    weight: WeightFunction
    h_values: np.ndarray
    seminorm_values: np.ndarray   # p_hat_{w,h}(T) along h_values
    h_star: float                 # +inf when the coefficients do not decay in w
    slope: float
    intercept: float
    residual: float               # rms residual of the regression
    sqrt_lambda: np.ndarray
    log_hsnorm: np.ndarray
    fitted: np.ndarray
    h_star_low: float             # refit on the lower half of the spectrum
    h_star_high: float            # refit on the upper half
    super_omega: bool             # h* drifts toward 0: decays faster than e^{-w/h} for all h


def _usable_points(T: FourierCoefficients, rel_floor: float = 1e-13):
    """Coefficient norms usable for regression.

    Besides the hard zero floor, entries below ``rel_floor`` times the largest
    norm are dropped: transforms of sampled functions carry an additive
    roundoff floor around 1e-16 that would otherwise flatten the decay tail
    and bias every fit.
    """
    lams, norms = [], []
    for xi, norm in T.hs_norms().items():
        if norm > _ZERO_FLOOR:
            lams.append(xi.casimir)
            norms.append(norm)
    lams, norms = np.array(lams), np.array(norms)
    if len(norms):
        keep = norms > rel_floor * np.max(norms)
        lams, norms = lams[keep], norms[keep]
    return lams, norms


def _fit_inv_h(wvals: np.ndarray, y: np.ndarray):
    design = np.stack([np.ones_like(wvals), -wvals], axis=1)
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(sol[0]), float(sol[1]), design @ sol


def _h_from_slope(inv_h: float) -> float:
    return 1.0 / inv_h if inv_h > 1e-12 else np.inf


def estimate_critical_h(T: FourierCoefficients, w: WeightFunction) -> DecayReport:
    """Least-squares fit log||T_xi|| ~ c - (1/h*) w(sqrt(lambda_xi)).

    A refit on the lower and upper halves of the spectrum detects super-w
    decay: when the upper-half h* keeps shrinking the coefficients decay
    faster than e^{-w/h} for every h.
    """
    lams, norms = _usable_points(T)
    if len(norms) < 8:
        raise InsufficientDataError("need at least 8 nonzero coefficients")
    if len(np.unique(lams)) < 2:
        raise InsufficientDataError("need at least 2 distinct eigenvalues")
    wvals = eval_weight(w, np.sqrt(lams))
    y = np.log(norms)
    intercept, inv_h, fitted = _fit_inv_h(wvals, y)
    residual = float(np.sqrt(np.mean((y - fitted) ** 2)))
    h_star = _h_from_slope(inv_h)
    h_values = (h_star if np.isfinite(h_star) else 1.0) * np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    seminorms = np.array([decay_seminorm(T, w, h) for h in h_values])
    median = np.median(lams)
    low, high = lams <= median, lams > median
    h_low = h_high = h_star
    if np.count_nonzero(low) >= 3 and len(np.unique(lams[low])) >= 2:
        h_low = _h_from_slope(_fit_inv_h(wvals[low], y[low])[1])
    if np.count_nonzero(high) >= 3 and len(np.unique(lams[high])) >= 2:
        h_high = _h_from_slope(_fit_inv_h(wvals[high], y[high])[1])
    super_omega = bool(
        np.isfinite(h_low) and np.isfinite(h_high) and h_high < 0.6 * h_low
    )
    return DecayReport(
        weight=w, h_values=h_values, seminorm_values=seminorms, h_star=float(h_star),
        slope=float(-inv_h), intercept=float(intercept), residual=residual,
        sqrt_lambda=np.sqrt(lams), log_hsnorm=y, fitted=fitted,
        h_star_low=float(h_low), h_star_high=float(h_high), super_omega=super_omega,
    )


def fit_weight_from_decay(T: FourierCoefficients, grid_points: int = 512,
                          n_cap: int = 64) -> WeightFunction:
    """Manufacture a tabulated weight from super-polynomially decaying T.

    Raises when the coefficients do not decay past the first polynomial order
    within the truncation.
    """
    # no relative floor here: the cap on n below already keeps truncation and
    # roundoff artifacts out of the constants C_n
    lams, norms = _usable_points(T, rel_floor=0.0)
    if len(norms) == 0:
        raise ParameterError("cannot fit a weight to identically zero coefficients")
    lam_max = float(np.max(lams))
    min_norm = float(np.min(norms))
    if lam_max <= 0.0:
        # a single block at the trivial representation: C_n is constant
        n_max = 8
    else:
        n_max = int(np.floor(-np.log(min_norm) / np.log1p(lam_max)))
        if n_max < 1:
            raise ParameterError(
                "coefficients do not decay polynomially within the truncated dual"
            )
    n_max = min(n_max, n_cap)
    ns = np.arange(0, n_max + 1)
    # log C_n = max_xi [log||T|| + n log(1+lambda)]
    log_c = np.max(np.log(norms)[None, :] + ns[:, None] * np.log1p(lams)[None, :], axis=1)
    t_max = float(np.sqrt(1.0 + lam_max)) if lam_max > 0 else float(n_max + 2)
    # a knot at exactly t = 1 pins the normalization point
    ts = np.unique(np.concatenate([np.linspace(0.0, max(t_max, 2.0), grid_points), [1.0]]))
    terms = ns[None, :] * np.log1p(ts)[:, None] - log_c[None, :]
    feasible = ns[None, :] <= np.maximum(ts, 0.0)[:, None]
    feasible[:, 0] = True  # n = 0 always admissible
    g = np.max(np.where(feasible, terms, -np.inf), axis=1)
    # normalize so the weight vanishes on [0, 1] (shift absorbs into the constant)
    shift = max(0.0, float(g[np.searchsorted(ts, 1.0)]))
    vals = np.maximum(0.0, g - shift)
    return tabulated_weight(list(zip(ts, vals)))


def gevrey_order_estimate(T: FourierCoefficients) -> float:
    """Exponent s of the decay law ||T_xi||_HS ~ A exp(-c lambda^(s/2)).

    Profiles s over a grid, solving -log||T|| ~ C + c (sqrt(lambda))^s by least
    squares for each candidate and keeping the best residual.  (A plain
    regression of log(-log||T||) on log sqrt(lambda) is the C = 0 special
    case; the amplitude constant of compactly supported bumps biases it low
    at desk-scale band limits, so the profiled form is used throughout.)
    Values of s above 1 indicate decay outside the weight-function range.
    """
    lams, norms = _usable_points(T)
    mask = (norms < 1.0) & (lams > 1.0)
    if np.count_nonzero(mask) < 3:
        raise EstimationError("too few decaying coefficients for an order fit")
    x = np.sqrt(lams[mask])
    y = -np.log(norms[mask])
    # decay classes are sup-defined, so fit the norm envelope: per log-bin in
    # sqrt(lambda), keep the largest norm (smallest y); this irons out the
    # oscillation near-zeros of compactly supported functions
    if len(x) > 24:
        bins = np.geomspace(float(np.min(x)), float(np.max(x)) * (1 + 1e-9), 25)
        bx, by = [], []
        for lo, hi in zip(bins[:-1], bins[1:]):
            sel = (x >= lo) & (x < hi)
            if sel.any():
                i = np.argmin(y[sel])
                bx.append(x[sel][i])
                by.append(y[sel][i])
        x, y = np.array(bx), np.array(by)
    best_s, best_res = None, np.inf
    for s in np.arange(0.05, 4.0 + 1e-9, 0.005):
        design = np.stack([np.ones_like(x), x**s], axis=1)
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        if coef[1] <= 0:
            continue
        res = float(np.sum((y - design @ coef) ** 2))
        if res < best_res:
            best_s, best_res = float(s), res
    if best_s is None:
        raise EstimationError("no decaying power law fits the coefficients")
    return best_s
