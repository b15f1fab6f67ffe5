"""Strong factorization of functions and vectors, global and supported.

Global factorization.  Given f with coefficients T and parameters h' > h,
the multipliers

    C_xi = exp((1/h') w(sqrt(lambda_xi)))

define g through F(g)(xi) = C_xi^-1 Id and f' through F(f')(xi) = C_xi T_xi.
Then F(g * f')(xi) = C_xi^-1 C_xi T_xi = T_xi, so f = g * f' exactly on the
truncated dual, and the decay transfers with the weaker exponent:

    ||F(f')(xi)||_HS e^{(1/h - 1/h') w(sqrt(lambda))} = ||T_xi||_HS e^{(1/h) w}
                                                   <= p_hat_{w,h}(T).

One g factors a whole family at once (bounded strong factorization); the
vector form applies this to the orbit map gamma_v(x) = pi(x) v of a
finite-dimensional representation, where evaluating f'_v at the identity
yields v_tilde with gamma_{v_tilde} = f'_v and v = Pi(g_check) v_tilde,
g_check(x) = g(x^-1).

Supported factorization (torus(1), non-quasianalytic weights).  The inverse
transform Phi of (e^{-w(sqrt(lambda))/(2h')} Id) is split by a bump partition
of unity into k pieces psi_j, each supported in a translate of W = (-d/2, d/2)
with W + W inside V = (-d, d).  Then

    g = sum_j psi_j^* * psi_j          (supported in V),
    S_xi = F(g)(xi) = sum_j F(psi_j)(xi)^dagger F(psi_j)(xi),

is Hermitian positive definite with smallest eigenvalue

    mu_xi >= e^{-(1/h') w(sqrt(lambda_xi))} / k

by Cauchy-Schwarz, because the pieces sum back to Phi.  The bound holds for
the quadrature coefficients verbatim (the pieces sum to Phi exactly on the
grid), so it is checkable to roundoff even though the pieces themselves are
not band-limited.  Dividing, f' = F^-1(S_xi^-1 F(f)(xi)) gives f = g * f'
with g supported in V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classify import decay_seminorm
from .errors import (
    ConditioningError,
    CoverageError,
    DomainError,
    ParameterError,
    QuasianalyticError,
)
from .fourier import (
    FourierCoefficients,
    GridFunction,
    compose,
    forward,
    inverse,
)
from .groups import DualIndex, QuadratureGrid, Torus
from .weights import WeightFunction, eval_weight


# ---------------------------------------------------------------------------
# finite-dimensional representations and orbit maps
# ---------------------------------------------------------------------------


class FiniteRep:
    """A finite-dimensional unitary representation: block-diagonal irreps in a
    fixed unitary basis (identity by default)."""

    def __init__(self, group, blocks, basis: np.ndarray | None = None):
        self.group = group
        self.blocks = list(blocks)
        self.total_dim = sum(xi.dim for xi in self.blocks)
        if basis is None:
            basis = np.eye(self.total_dim, dtype=complex)
        basis = np.asarray(basis, dtype=complex)
        if basis.shape != (self.total_dim, self.total_dim):
            raise ParameterError("basis must be m x m with m the total block dimension")
        self.basis = basis

    @classmethod
    def from_labels(cls, group, labels, bandlimit_hint: int = 64, basis=None) -> "FiniteRep":
        index = {xi.label: xi for xi in group.enumerate_dual(bandlimit_hint)}
        try:
            blocks = [index[lab] for lab in labels]
        except KeyError as exc:
            raise ParameterError(f"unknown dual label {exc.args[0]!r}") from exc
        return cls(group, blocks, basis=basis)

    @property
    def bandlimit(self) -> int:
        """Smallest L whose dual contains every block."""
        best = 1
        for xi in self.blocks:
            if isinstance(self.group, Torus):
                best = max(best, max(abs(k) for k in xi.label) or 1)
            else:
                best = max(best, (xi.label + 1) // 2, 1)
        return best

    def evaluate(self, x) -> np.ndarray:
        """pi(x) as an m x m unitary matrix."""
        return self.evaluate_at(np.asarray(x, float)[None, :])[0]

    def evaluate_at(self, points: np.ndarray) -> np.ndarray:
        """pi at a batch of elements: (n, m, m)."""
        pts = np.atleast_2d(points)
        n = len(pts)
        out = np.zeros((n, self.total_dim, self.total_dim), dtype=complex)
        offset = 0
        for xi in self.blocks:
            out[:, offset:offset + xi.dim, offset:offset + xi.dim] = (
                self.group.irrep_matrices(xi, pts)
            )
            offset += xi.dim
        if not np.allclose(self.basis, np.eye(self.total_dim)):
            out = np.einsum("ab,nbc,dc->nad", self.basis, out, self.basis.conj())
        return out

    def table(self, grid: QuadratureGrid) -> np.ndarray:
        key = ("rep_table", tuple(xi.label for xi in self.blocks),
               hash(self.basis.tobytes()))
        if key not in grid._cache:
            grid._cache[key] = self.evaluate_at(grid.nodes)
        return grid._cache[key]


def orbit_map(rep: FiniteRep, v, grid: QuadratureGrid | None = None) -> GridFunction:
    """The orbit gamma_v(x) = pi(x) v sampled on a Haar grid."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.total_dim,):
        raise ParameterError(f"vector must have length {rep.total_dim}")
    if grid is None:
        grid = rep.group.haar_quadrature(rep.bandlimit)
    values = rep.table(grid) @ v
    return GridFunction(rep.group, grid, values, value_dim=rep.total_dim,
                        bandlimit=grid.bandlimit)


def induced_action(rep: FiniteRep, chi: GridFunction, v) -> np.ndarray:
    """Pi(chi) v = sum_nodes weight chi(x) pi(x) v.

    The block restriction of Pi(chi) equals F(chi)(xi) in the rep's basis.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.total_dim,):
        raise ParameterError(f"vector must have length {rep.total_dim}")
    if chi.value_dim != 1:
        raise ParameterError("the acting function must be scalar-valued")
    table = rep.table(chi.grid)
    wchi = chi.grid.weights * chi.scalar_values
    return np.einsum("n,nab,b->a", wchi, table, v, optimize=True)


# ---------------------------------------------------------------------------
# global strong factorization
# ---------------------------------------------------------------------------


@dataclass
class FactorizationResult:
    g: FourierCoefficients                    # scalar; F(g)(xi) = C_xi^-1 Id
    f_prime: FourierCoefficients              # F(f')(xi) = C_xi F(f)(xi)
    multipliers: dict[DualIndex, float]
    weight: WeightFunction
    h: float
    h_prime: float
    residual: float                           # sup |f - g * f'|
    transfer_margins: dict[DualIndex, float]  # p_hat_{w,h}(f) - per-xi transferred norm
    source_seminorm: float                    # p_hat_{w,h}(F f)
    h_effective: float                        # 1 / (1/h - 1/h')

    @property
    def min_transfer_margin(self) -> float:
        return min(self.transfer_margins.values()) if self.transfer_margins else 0.0

    @property
    def min_transfer_margin_relative(self) -> float:
        """Worst margin relative to the source seminorm (roundoff-scaled)."""
        return self.min_transfer_margin / max(self.source_seminorm, 1e-300)


def _multipliers(group, bandlimit: int, w: WeightFunction, h_prime: float):
    out = {}
    for xi in group.enumerate_dual(bandlimit):
        out[xi] = float(np.exp(eval_weight(w, np.sqrt(xi.casimir)) / h_prime))
    return out


def strong_factorize(f: GridFunction, w: WeightFunction, h: float,
                     h_prime: float | None = None) -> FactorizationResult:
    """Factor f = g * f' with multipliers C_xi = e^{w(sqrt(lambda))/h'}.

    Exact on the truncated dual; the decay of f' is certified at the weaker
    exponent 1/h - 1/h' via the per-xi transfer margins.
    """
    if h <= 0:
        raise ParameterError("h must be positive")
    if h_prime is None:
        h_prime = 2.0 * h
    if h_prime <= h:
        raise ParameterError("h' must exceed h")
    T = forward(f)
    mult = _multipliers(f.group, T.bandlimit, w, h_prime)
    g_hat = FourierCoefficients(
        f.group, T.bandlimit, 1,
        {xi: (np.eye(xi.dim, dtype=complex) / c)[None, :, :] for xi, c in mult.items()},
    )
    fprime_hat = T.map_entries(lambda xi, t: mult[xi] * t)
    recombined = inverse(compose(g_hat, fprime_hat), f.grid)
    residual = float(np.max(np.abs(recombined.values - f.values)))
    h_eff = 1.0 / (1.0 / h - 1.0 / h_prime)
    source = decay_seminorm(T, w, h)
    margins = {}
    for xi, norm in fprime_hat.hs_norms().items():
        lhs = norm * float(np.exp(eval_weight(w, np.sqrt(xi.casimir)) / h_eff))
        margins[xi] = source - lhs
    return FactorizationResult(
        g=g_hat, f_prime=fprime_hat, multipliers=mult, weight=w, h=h,
        h_prime=h_prime, residual=residual, transfer_margins=margins,
        source_seminorm=source, h_effective=h_eff,
    )


@dataclass
class BoundedFactorizationResult:
    g: FourierCoefficients
    f_primes: list[FourierCoefficients]
    multipliers: dict[DualIndex, float]
    residuals: list[float]
    family_seminorm: float   # sup_i p_hat_{w, h_eff}(f'_i): the image family is bounded
    h_effective: float


def bounded_factorize_set(fs, w: WeightFunction, h: float,
                          h_prime: float | None = None) -> BoundedFactorizationResult:
    """One g factors every member of the family: f_i = g * f'_i."""
    fs = list(fs)
    if not fs:
        raise ParameterError("the family must be non-empty")
    L = fs[0].bandlimit
    for f in fs:
        if f.bandlimit != L or f.group != fs[0].group:
            raise ParameterError("family members must share a group and band limit")
    results = [strong_factorize(f, w, h, h_prime) for f in fs]
    h_eff = results[0].h_effective
    family = max(decay_seminorm(r.f_prime, w, h_eff) for r in results)
    return BoundedFactorizationResult(
        g=results[0].g,
        f_primes=[r.f_prime for r in results],
        multipliers=results[0].multipliers,
        residuals=[r.residual for r in results],
        family_seminorm=family,
        h_effective=h_eff,
    )


@dataclass
class VectorFactorizationResult:
    g_check: GridFunction          # x |-> g(x^-1)
    v_tilde: np.ndarray            # f'_v(e) = sum_xi d_xi C_xi Tr[F gamma_v(xi)]
    action_residual: float         # max |v - Pi(g_check) v_tilde|
    orbit_residual: float          # sup |gamma_{v_tilde} - f'_v|
    factorization: FactorizationResult


def _value_at_identity(T: FourierCoefficients) -> np.ndarray:
    """f(e) = sum_xi d_xi Tr[T_xi] per slice (xi(e) = Id)."""
    out = np.zeros(T.value_dim, dtype=complex)
    for xi, t in T.entries.items():
        out += xi.dim * np.trace(t, axis1=1, axis2=2)
    return out


def factorize_vector(rep: FiniteRep, v, w: WeightFunction, h: float,
                     h_prime: float | None = None) -> VectorFactorizationResult:
    """Factor v = Pi(g_check) v_tilde through the orbit map of a finite rep."""
    v = np.asarray(v, dtype=complex)
    if v.shape != (rep.total_dim,):
        raise ParameterError(f"vector must have length {rep.total_dim}")
    gamma = orbit_map(rep, v)
    res = strong_factorize(gamma, w, h, h_prime)
    v_tilde = _value_at_identity(res.f_prime)
    g_grid = inverse(res.g, gamma.grid)
    g_check = GridFunction(rep.group, gamma.grid,
                           g_grid.values[gamma.grid.inversion_permutation],
                           value_dim=1, bandlimit=g_grid.bandlimit)
    recovered = induced_action(rep, g_check, v_tilde)
    action_residual = float(np.max(np.abs(recovered - v)))
    orbit_tilde = orbit_map(rep, v_tilde, gamma.grid)
    fprime_grid = inverse(res.f_prime, gamma.grid)
    orbit_residual = float(np.max(np.abs(orbit_tilde.values - fprime_grid.values)))
    return VectorFactorizationResult(
        g_check=g_check, v_tilde=v_tilde, action_residual=action_residual,
        orbit_residual=orbit_residual, factorization=res,
    )


# ---------------------------------------------------------------------------
# compactly supported factorization on the circle
# ---------------------------------------------------------------------------


def _circle_distance(x, center: float) -> np.ndarray:
    return np.abs(np.mod(np.asarray(x, float) - center + np.pi, 2 * np.pi) - np.pi)


def gevrey_bump(s: float, center: float, halfwidth: float,
                grid: QuadratureGrid) -> GridFunction:
    """Compactly supported Gevrey-order-s bump on the circle:

        x |-> exp(-(1 - ((x-center)/halfwidth)^2)^(-1/(s-1)))  inside,  0 outside.
    """
    if s <= 1.0:
        raise QuasianalyticError(
            "bump order s must exceed 1 (quasianalytic classes have no "
            "compactly supported members)"
        )
    if not isinstance(grid.group, Torus) or grid.group.d != 1:
        raise DomainError("bumps are implemented on torus(1)")
    if not 0.0 < halfwidth < np.pi:
        raise DomainError("halfwidth must lie in (0, pi)")
    r = _circle_distance(grid.nodes[:, 0], center) / halfwidth
    vals = np.zeros(grid.size)
    inside = r < 1.0
    with np.errstate(over="ignore", divide="ignore"):
        vals[inside] = np.exp(-((1.0 - r[inside] ** 2) ** (-1.0 / (s - 1.0))))
    return GridFunction(grid.group, grid, vals.astype(complex), value_dim=1)


def default_piece_count(delta: float) -> int:
    """Pieces used when k is unspecified: spacing delta/2 plus one for overlap."""
    return int(np.ceil(2 * np.pi / (delta / 2.0))) + 1


def bump_partition_of_unity(delta: float, k_pieces: int, bump_order: float,
                            grid: QuadratureGrid) -> list[GridFunction]:
    """k bumps chi_j with sum_j chi_j = 1, each supported in a translate of
    W = (-delta/2, delta/2); raises when k translates cannot cover the circle."""
    if delta <= 0 or delta >= np.pi:
        raise DomainError("the support parameter delta must lie in (0, pi)")
    spacing = 2 * np.pi / k_pieces
    if spacing >= delta:
        raise CoverageError(
            f"{k_pieces} pieces of width delta = {delta:g} cannot cover the "
            f"circle; need k > 2*pi/delta = {2 * np.pi / delta:.2f}"
        )
    halfwidth = delta / 2.0
    centers = spacing * np.arange(k_pieces)
    bumps = [gevrey_bump(bump_order, c, halfwidth, grid) for c in centers]
    total = np.sum([b.values[:, 0].real for b in bumps], axis=0)
    if np.min(total) <= 0:
        raise CoverageError("bump pieces leave part of the circle uncovered")
    return [
        GridFunction(grid.group, grid, b.values[:, 0] / total, value_dim=1)
        for b in bumps
    ]


def build_partition(delta: float, k_pieces: int, bump_order: float,
                    w: WeightFunction, h_prime: float,
                    grid: QuadratureGrid) -> list[GridFunction]:
    """Pieces psi_j = chi_j * Phi with Phi = F^-1(e^{-w(sqrt(lambda))/(2h')} Id).

    The pieces sum back to Phi exactly on the grid and each vanishes outside
    its translate of W.
    """
    if h_prime <= 0:
        raise ParameterError("h' must be positive")
    chis = bump_partition_of_unity(delta, k_pieces, bump_order, grid)
    half_decay = FourierCoefficients(
        grid.group, grid.bandlimit, 1,
        {
            xi: (np.exp(-eval_weight(w, np.sqrt(xi.casimir)) / (2 * h_prime))
                 * np.eye(xi.dim, dtype=complex))[None, :, :]
            for xi in grid.group.enumerate_dual(grid.bandlimit)
        },
    )
    phi = inverse(half_decay, grid)
    return [
        GridFunction(grid.group, grid, chi.values[:, 0] * phi.values[:, 0], value_dim=1)
        for chi in chis
    ]


@dataclass
class SupportedFactorizationResult:
    g: GridFunction
    support_delta: float
    S: dict[DualIndex, np.ndarray]    # Hermitian PSD blocks F(g)(xi)
    mu: dict[DualIndex, float]        # smallest eigenvalues
    mu_bounds: dict[DualIndex, float] # e^{-w(sqrt(lambda))/h'}/k
    f_prime: FourierCoefficients
    k: int
    residual: float
    outside_support_mass: float       # sup |g| outside V
    weight: WeightFunction
    h: float
    h_prime: float


def supported_factorize(f: GridFunction, delta: float, w: WeightFunction,
                        h: float, h_prime: float | None = None,
                        k: int | None = None, bump_order: float = 2.0,
                        mu_floor: float = 1e-13) -> SupportedFactorizationResult:
    """Factor f = g * f' with g supported in V = (-delta, delta) on torus(1)."""
    if not isinstance(f.group, Torus) or f.group.d != 1:
        raise DomainError("supported factorization is implemented on torus(1)")
    if not w.satisfies_beta0:
        raise QuasianalyticError(
            "supported factorization needs a non-quasianalytic weight "
            "(satisfies_beta0)"
        )
    if h <= 0:
        raise ParameterError("h must be positive")
    if h_prime is None:
        h_prime = 2.0 * h
    if h_prime <= h:
        raise ParameterError("h' must exceed h")
    if k is None:
        k = default_piece_count(delta)
    grid = f.grid
    psis = build_partition(delta, k, bump_order, w, h_prime, grid)
    psi_hats = [forward(p) for p in psis]
    duals = f.group.enumerate_dual(grid.bandlimit)
    S: dict[DualIndex, np.ndarray] = {}
    mu: dict[DualIndex, float] = {}
    bounds: dict[DualIndex, float] = {}
    for xi in duals:
        s = np.zeros((xi.dim, xi.dim), dtype=complex)
        for ph in psi_hats:
            a = ph.entries[xi][0]
            s += a.conj().T @ a
        S[xi] = s
        mu[xi] = float(np.min(np.linalg.eigvalsh(s)))
        bounds[xi] = float(np.exp(-eval_weight(w, np.sqrt(xi.casimir)) / h_prime)) / k
        if mu[xi] < mu_floor:
            raise ConditioningError(
                f"S block at xi = {xi.label} is numerically singular "
                f"(mu = {mu[xi]:.3e})", xi=xi,
            )
    T = forward(f)
    fprime_entries = {
        xi: np.einsum("ab,vbc->vac", np.linalg.inv(S[xi]), T.entries[xi])
        for xi in duals
    }
    fprime_hat = FourierCoefficients(f.group, grid.bandlimit, f.value_dim, fprime_entries)
    S_hat = FourierCoefficients(
        f.group, grid.bandlimit, 1, {xi: S[xi][None, :, :] for xi in duals}
    )
    g_grid = inverse(S_hat, grid)
    recombined = inverse(compose(S_hat, fprime_hat), grid)
    residual = float(np.max(np.abs(recombined.values - f.values)))
    outside = _circle_distance(grid.nodes[:, 0], 0.0) >= delta
    g_abs = np.abs(g_grid.values[:, 0])
    outside_mass = float(np.max(g_abs[outside])) if outside.any() else 0.0
    return SupportedFactorizationResult(
        g=g_grid, support_delta=delta, S=S, mu=mu, mu_bounds=bounds,
        f_prime=fprime_hat, k=k, residual=residual,
        outside_support_mass=outside_mass, weight=w, h=h, h_prime=h_prime,
    )
