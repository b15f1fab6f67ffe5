"""Laplace-Beltrami calculus on the truncated dual.

The Laplacian acts on coefficients by F(Lap f)(xi) = -lambda_xi F(f)(xi), so
powers Lap^j are computed spectrally (exact on the truncated dual) and never
by repeated differencing.  The finite-difference routine below exists only to
validate the eigenvalue normalization: with the orthonormal Lie-algebra bases
chosen in the groups module, second differences of matrix coefficients must
reproduce -lambda_xi exactly in the step-size limit.

Seminorms: p_j(f) = max_{i <= j} sup |Lap^i f| and the weighted family

    p_{w,h}(f) = sup_j sup |Lap^j f| * exp(-(1/h) phi*(2 j h)),

whose factor 2 reflects that the Laplacian has degree two.  The two-sided
coefficient estimates checked by ``iterates_vs_decay_check`` are

    ||F f(xi)||_HS  <= C1 inf_j (1+lambda)^(n-j) sup|Lap^j f|,
    sup|Lap^j f|    <= C2 sup_xi (1+lambda)^(j+n) ||F f(xi)||_HS,

with n = dim G; the reported constants are the smallest ones valid across the
truncated dual (empirical, the equivalence itself is qualitative).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .fourier import FourierCoefficients, GridFunction, forward, inverse
from .groups import DualIndex
from .weights import WeightFunction, young_conjugate


def apply_laplacian(T: FourierCoefficients) -> FourierCoefficients:
    """Multiply each coefficient block by -lambda_xi."""
    return T.map_entries(lambda xi, t: -xi.casimir * t)


def laplacian_fd_defect(group, xi: DualIndex, x, step: float = 1e-3) -> float:
    """max_ij |Lap_fd xi_ij(x) + lambda_xi xi_ij(x)| via second differences.

    Lap f(x) ~ sum_k [f(x exp(t X_k)) - 2 f(x) + f(x exp(-t X_k))] / t^2 over
    the orthonormal Lie-algebra basis {X_k}.
    """
    if not 1e-4 <= step <= 1e-1:
        raise DomainError("step must lie in [1e-4, 1e-1]")
    center = group.irrep_matrix(xi, x)
    acc = np.zeros_like(center)
    for k in range(group.dim):
        for sign in (+1.0, -1.0):
            y = group.multiply(x, group.exp_step(k, sign * step))
            acc += group.irrep_matrix(xi, y)
        acc -= 2.0 * center
    lap = acc / step**2
    return float(np.max(np.abs(lap + xi.casimir * center)))


def iterate_supnorms(f: GridFunction, j_max: int) -> np.ndarray:
    """[ sup|Lap^j f| for j = 0..j_max ], computed spectrally.

    Overflowing entries are reported as +inf, not raised.
    """
    T = forward(f)
    out = np.zeros(j_max + 1)
    cur = T
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(j_max + 1):
            vals = inverse(cur, f.grid).values
            sup = np.max(np.abs(vals)) if vals.size else 0.0
            out[j] = np.inf if not np.isfinite(sup) else sup
            if j < j_max:
                cur = apply_laplacian(cur)
    return out


@dataclass
class SeminormReport:
    """sup_j of the weighted Laplacian iterates, with the full term table."""

    weight: WeightFunction
    h: float
    js: np.ndarray
    supnorms: np.ndarray
    weighted_terms: np.ndarray
    value: float
    argmax_j: int
    saturated: bool  # some iterate overflowed before the early stop


def iterate_seminorm(f: GridFunction, w: WeightFunction, h: float,
                     j_max: int = 40) -> SeminormReport:
    """p_{w,h}(f) = sup_j sup|Lap^j f| exp(-(1/h) phi*(2jh)) over j = 0..j_max.

    Stops early once three successive weighted terms drop below 1e-3 of the
    running sup (the weighted sequence eventually decreases for band-limited f
    because phi*(t)/t -> infinity).
    """
    if h <= 0:
        raise DomainError("h must be positive")
    T = forward(f)
    supnorms = []
    weighted = []
    cur = T
    best = 0.0
    argmax = 0
    saturated = False
    below = 0
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(j_max + 1):
            vals = inverse(cur, f.grid).values
            sup = float(np.max(np.abs(vals))) if vals.size else 0.0
            if not np.isfinite(sup):
                sup = np.inf
                saturated = True
            supnorms.append(sup)
            term = sup * np.exp(-young_conjugate(w, h, 2.0 * j))
            weighted.append(term)
            if term > best:
                best, argmax = term, j
            below = below + 1 if term < 1e-3 * max(best, 1e-300) else 0
            if below >= 3 or saturated:
                break
            if j < j_max:
                cur = apply_laplacian(cur)
    supnorms = np.array(supnorms)
    weighted = np.array(weighted)
    return SeminormReport(
        weight=w, h=h, js=np.arange(len(supnorms)), supnorms=supnorms,
        weighted_terms=weighted, value=float(best) if not saturated else np.inf,
        argmax_j=argmax, saturated=saturated,
    )


@dataclass
class IteratesDecayReport:
    """Fitted constants of the two-sided iterate/decay estimates."""

    c1: float  # coefficient decay from iterate growth
    c2: float  # iterate growth from coefficient decay
    consistent: bool
    seminorm_function_side: float     # p_{w,h}(f)
    seminorm_coefficient_side: float  # sup_xi ||F f(xi)||_HS e^{w(sqrt(lambda))/h}


def iterates_vs_decay_check(f: GridFunction, w: WeightFunction, h: float,
                            j_max: int = 24) -> IteratesDecayReport:
    """Empirical constants for the iterate/decay inequalities plus the
    weighted-seminorm shadow on both sides of the transform."""
    from .classify import decay_seminorm  # local import avoids a cycle

    n = f.group.dim
    T = forward(f)
    sup = iterate_supnorms(f, j_max)
    finite = np.isfinite(sup) & (sup > 0)
    js = np.arange(j_max + 1)[finite]
    log_sup = np.log(sup[finite])
    hs = T.hs_norms()
    c1 = 0.0
    for xi, norm in hs.items():
        if norm <= 0:
            continue
        # inf_j (1+lambda)^(n-j) sup_j, in logs
        bound = np.min((n - js) * np.log1p(xi.casimir) + log_sup)
        c1 = max(c1, float(np.exp(np.log(norm) - bound)))
    c2 = 0.0
    log_norms = {xi: np.log(v) for xi, v in hs.items() if v > 0}
    if log_norms:
        for j, ls in zip(js, log_sup):
            bound = max(lv + (j + n) * np.log1p(xi.casimir) for xi, lv in log_norms.items())
            c2 = max(c2, float(np.exp(ls - bound)))
    func_side = iterate_seminorm(f, w, h).value
    coef_side = decay_seminorm(T, w, h)
    consistent = bool(np.isfinite(c1) and np.isfinite(c2))
    return IteratesDecayReport(
        c1=c1, c2=c2, consistent=consistent,
        seminorm_function_side=func_side, seminorm_coefficient_side=coef_side,
    )
