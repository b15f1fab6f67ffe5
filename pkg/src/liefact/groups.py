"""Concrete compact groups: the torus T^d (d = 1, 2) and SU(2).

Each group provides its unitary dual with dimensions and Casimir eigenvalues,
unitary matrix coefficients, group element arithmetic in explicit coordinates,
and a Haar quadrature exact on band-limited integrands.

Coordinates and normalizations
------------------------------
* Torus: angle vectors with period 2*pi per axis.  The character labeled by
  k in Z^d is x |-> exp(-i k.x), so the forward transform of exp(3ix) on T^1
  is supported at k = 3 (the classical Fourier coefficient indexing).
  Casimir eigenvalue |k|^2.
* SU(2): ZYZ Euler angles (alpha, beta, gamma) with beta in [0, pi]; the
  alpha/gamma phases are 4*pi-periodic (half-integer spins).  The irrep with
  label 2l has dimension 2l+1, Casimir eigenvalue l(l+1), and its matrix is
  the Wigner-D matrix; at 2l = 1 it is the defining 2x2 matrix.  Elements
  compose through the defining representation (unit quaternions as 2x2
  unitaries), which keeps the ZYZ extraction stable at beta in {0, pi}.

The bi-invariant metric is normalized so those Casimir values are exactly the
(-Laplacian) eigenvalues; finite-difference checks in the spectral module pin
this down.  Haar quadratures are normalized to total mass 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from ._wigner import wigner_d_matrices, wigner_D_single
from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class DualIndex:
    """One unitary-equivalence class: label, dimension, Casimir eigenvalue."""

    label: tuple[int, ...] | int   # k-vector (torus) or 2l (su2)
    dim: int
    casimir: float


class QuadratureGrid:
    """Nodes and weights of a Haar quadrature, exact to a declared band limit.

    Products of two matrix coefficients within ``bandlimit`` are integrated
    exactly (up to roundoff); the weights sum to 1.
    """

    def __init__(self, group, bandlimit: int, nodes: np.ndarray, weights: np.ndarray, axes: dict):
        self.group = group
        self.bandlimit = int(bandlimit)
        self.nodes = nodes
        self.weights = weights
        self.axes = axes
        self._cache: dict = {}

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def inversion_permutation(self) -> np.ndarray:
        """Permutation p with nodes[p[i]] = nodes[i]^-1 (exact on these grids)."""
        if "inv_perm" not in self._cache:
            self._cache["inv_perm"] = self.group._inversion_permutation(self)
        return self._cache["inv_perm"]

    def __repr__(self):
        return f"QuadratureGrid({self.group.spec_string()}, L={self.bandlimit}, {self.size} nodes)"


@dataclass(frozen=True)
class Torus:
    """The d-torus, d in {1, 2}."""

    d: int

    def __post_init__(self):
        if self.d not in (1, 2):
            raise DomainError("torus dimension must be 1 or 2")

    @property
    def dim(self) -> int:
        return self.d

    @property
    def coord_dim(self) -> int:
        return self.d

    def spec_string(self) -> str:
        return f"t{self.d}"

    # -- dual -----------------------------------------------------------

    def enumerate_dual(self, bandlimit: int) -> list[DualIndex]:
        return list(_torus_dual(self, int(bandlimit)))

    # -- elements ---------------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.zeros(self.d)

    def multiply(self, x, y) -> np.ndarray:
        return np.mod(np.asarray(x, float) + np.asarray(y, float), 2 * np.pi)

    def inverse_element(self, x) -> np.ndarray:
        return np.mod(-np.asarray(x, float), 2 * np.pi)

    def exp_step(self, k: int, t: float) -> np.ndarray:
        out = np.zeros(self.d)
        out[k] = t
        return out

    def random_element(self, rng) -> np.ndarray:
        return rng.uniform(0, 2 * np.pi, self.d)

    def validate_coords(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.d:
            raise DomainError(f"torus({self.d}) coordinates need {self.d} angles")
        return x

    # -- matrix coefficients ----------------------------------------------

    def irrep_matrix(self, xi: DualIndex, x) -> np.ndarray:
        return self.irrep_matrices(xi, np.asarray(x, float)[None, :])[0]

    def irrep_matrices(self, xi: DualIndex, points: np.ndarray) -> np.ndarray:
        pts = self.validate_coords(points)
        k = np.asarray(xi.label, dtype=float)
        phases = np.exp(-1j * pts @ k)
        return phases[:, None, None]

    # -- quadrature ---------------------------------------------------------

    def haar_quadrature(self, bandlimit: int) -> QuadratureGrid:
        return _torus_quadrature(self, int(bandlimit))

    def _inversion_permutation(self, grid: QuadratureGrid) -> np.ndarray:
        n = grid.axes["points_per_axis"]
        neg = (-np.arange(n)) % n
        if self.d == 1:
            return neg
        flat = np.arange(n * n)
        return neg[flat // n] * n + neg[flat % n]


@lru_cache(maxsize=None)
def _torus_dual(group: Torus, bandlimit: int) -> tuple[DualIndex, ...]:
    if bandlimit < 1:
        raise DomainError("band limit must be >= 1")
    rng = range(-bandlimit, bandlimit + 1)
    if group.d == 1:
        labels = [(k,) for k in rng]
    else:
        labels = [(k1, k2) for k1 in rng for k2 in rng]
    return tuple(
        DualIndex(label=lab, dim=1, casimir=float(sum(k * k for k in lab)))
        for lab in labels
    )


@lru_cache(maxsize=None)
def _torus_quadrature(group: Torus, bandlimit: int) -> QuadratureGrid:
    if bandlimit < 1:
        raise DomainError("band limit must be >= 1")
    n = 2 * bandlimit + 2
    axis = 2 * np.pi * np.arange(n) / n
    if group.d == 1:
        nodes = axis[:, None]
    else:
        a, b = np.meshgrid(axis, axis, indexing="ij")
        nodes = np.stack([a.ravel(), b.ravel()], axis=1)
    weights = np.full(len(nodes), 1.0 / n**group.d)
    return QuadratureGrid(group, bandlimit, nodes, weights, {"points_per_axis": n, "axis": axis})


@dataclass(frozen=True)
class SU2:
    """The group SU(2) in ZYZ Euler coordinates."""

    @property
    def dim(self) -> int:
        return 3

    @property
    def coord_dim(self) -> int:
        return 3

    def spec_string(self) -> str:
        return "su2"

    # -- dual -----------------------------------------------------------

    def enumerate_dual(self, bandlimit: int) -> list[DualIndex]:
        return list(_su2_dual(self, int(bandlimit)))

    # -- elements ---------------------------------------------------------

    def identity(self) -> np.ndarray:
        return np.zeros(3)

    def defining_matrix(self, x) -> np.ndarray:
        """The element as its defining 2x2 unitary (the unit quaternion)."""
        a, b, g = self.validate_coords(x)
        ch, sh = math.cos(b / 2), math.sin(b / 2)
        return np.array(
            [
                [ch * np.exp(-0.5j * (a + g)), -sh * np.exp(-0.5j * (a - g))],
                [sh * np.exp(0.5j * (a - g)), ch * np.exp(0.5j * (a + g))],
            ]
        )

    def coords_from_matrix(self, u: np.ndarray) -> np.ndarray:
        """ZYZ angles of a 2x2 SU(2) matrix; beta in [0, pi], phases in [0, 4pi)."""
        ch = abs(u[0, 0])
        sh = abs(u[1, 0])
        beta = 2.0 * math.atan2(sh, ch)
        if sh < 1e-300:
            # beta = 0: only alpha + gamma matters
            s = -2.0 * np.angle(u[0, 0])
            alpha, gamma = s, 0.0
        elif ch < 1e-300:
            # beta = pi: only alpha - gamma matters
            d = 2.0 * np.angle(u[1, 0])
            alpha, gamma = d, 0.0
        else:
            s = -2.0 * np.angle(u[0, 0])  # alpha + gamma (mod 4pi)
            d = 2.0 * np.angle(u[1, 0])   # alpha - gamma (mod 4pi)
            alpha = 0.5 * (s + d)
            gamma = 0.5 * (s - d)
        return np.array([alpha % (4 * np.pi), beta, gamma % (4 * np.pi)])

    def coords_from_matrices(self, us: np.ndarray) -> np.ndarray:
        """Batched ZYZ extraction for an (n, 2, 2) array of SU(2) matrices."""
        ch = np.abs(us[:, 0, 0])
        sh = np.abs(us[:, 1, 0])
        beta = 2.0 * np.arctan2(sh, ch)
        s = -2.0 * np.angle(us[:, 0, 0])
        d = 2.0 * np.angle(us[:, 1, 0])
        alpha = 0.5 * (s + d)
        gamma = 0.5 * (s - d)
        # degenerate axes: merge the free phase into alpha
        top = sh < 1e-300
        bot = ch < 1e-300
        alpha = np.where(top, s, np.where(bot, d, alpha))
        gamma = np.where(top | bot, 0.0, gamma)
        return np.stack([alpha % (4 * np.pi), beta, gamma % (4 * np.pi)], axis=1)

    def multiply(self, x, y) -> np.ndarray:
        return self.coords_from_matrix(self.defining_matrix(x) @ self.defining_matrix(y))

    def inverse_element(self, x) -> np.ndarray:
        return self.coords_from_matrix(self.defining_matrix(x).conj().T)

    def exp_step(self, k: int, t: float) -> np.ndarray:
        """exp(t X_k) for the orthonormal basis X_k = -i sigma_k / 2.

        This normalization makes the induced -Laplacian eigenvalue l(l+1).
        """
        sigma = [
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, -1j], [1j, 0]]),
            np.array([[1, 0], [0, -1]], dtype=complex),
        ][k]
        u = math.cos(t / 2) * np.eye(2) - 1j * math.sin(t / 2) * sigma
        return self.coords_from_matrix(u)

    def random_element(self, rng) -> np.ndarray:
        q = rng.standard_normal(4)
        q /= np.linalg.norm(q)
        u = np.array(
            [[q[0] + 1j * q[3], q[2] + 1j * q[1]], [-q[2] + 1j * q[1], q[0] - 1j * q[3]]]
        )
        return self.coords_from_matrix(u)

    def validate_coords(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != 3:
            raise DomainError("su2 coordinates are ZYZ triples (alpha, beta, gamma)")
        beta = x[..., 1]
        if np.any(beta < -1e-12) or np.any(beta > np.pi + 1e-12):
            raise DomainError("beta must lie in [0, pi]")
        return x

    # -- matrix coefficients ----------------------------------------------

    def irrep_matrix(self, xi: DualIndex, x) -> np.ndarray:
        a, b, g = self.validate_coords(x)
        return wigner_D_single(xi.label, a, b, g)

    def irrep_matrices(self, xi: DualIndex, points: np.ndarray) -> np.ndarray:
        pts = self.validate_coords(np.atleast_2d(points))
        two_l = xi.label
        d = wigner_d_matrices(two_l, pts[:, 1])[two_l]
        two_ms = np.arange(two_l, -two_l - 1, -2)
        left = np.exp(-0.5j * np.outer(pts[:, 0], two_ms))
        right = np.exp(-0.5j * np.outer(pts[:, 2], two_ms))
        return left[:, :, None] * d * right[:, None, :]

    # -- quadrature ---------------------------------------------------------

    def haar_quadrature(self, bandlimit: int) -> QuadratureGrid:
        return _su2_quadrature(self, int(bandlimit))

    def _inversion_permutation(self, grid: QuadratureGrid) -> np.ndarray:
        # (alpha_a, beta_b, gamma_c)^-1 = (pi - gamma_c, beta_b, -pi - alpha_a);
        # with B even both phase coordinates land back on the uniform grid
        # (spacing 2pi/B, and pi = (B/2) grid steps).
        B = grid.axes["B"]
        two_b = 2 * B
        a_idx, b_idx, c_idx = np.meshgrid(
            np.arange(two_b), np.arange(B), np.arange(two_b), indexing="ij"
        )
        a_new = (B // 2 - c_idx) % two_b
        c_new = (-B // 2 - a_idx) % two_b
        return ((a_new * B + b_idx) * two_b + c_new).reshape(-1)


@lru_cache(maxsize=None)
def _su2_dual(group: SU2, bandlimit: int) -> tuple[DualIndex, ...]:
    if bandlimit < 1:
        raise DomainError("band limit must be >= 1")
    return tuple(
        DualIndex(label=two_l, dim=two_l + 1, casimir=two_l * (two_l + 2) / 4.0)
        for two_l in range(2 * bandlimit + 1)
    )


@lru_cache(maxsize=None)
def _su2_quadrature(group: SU2, bandlimit: int) -> QuadratureGrid:
    if bandlimit < 1:
        raise DomainError("band limit must be >= 1")
    B = 2 * bandlimit + 2
    # alpha, gamma uniform over [0, 4pi) so half-integer phases are resolved;
    # the grid double-covers the group, which the normalized weights absorb
    phases = 2 * np.pi * np.arange(2 * B) / B
    u, w = np.polynomial.legendre.leggauss(B)
    betas = np.arccos(u)
    a = np.repeat(phases, B * 2 * B)
    b = np.tile(np.repeat(betas, 2 * B), 2 * B)
    g = np.tile(phases, 2 * B * B)
    nodes = np.stack([a, b, g], axis=1)
    weights = np.tile(np.repeat(w / 2.0, 2 * B), 2 * B) / (2 * B) ** 2
    axes = {"alphas": phases, "beta_u": u, "beta_w": w, "gammas": phases, "B": B}
    return QuadratureGrid(group, bandlimit, nodes, weights, axes)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def parse_group_spec(spec: str):
    if spec == "t1":
        return Torus(1)
    if spec == "t2":
        return Torus(2)
    if spec == "su2":
        return SU2()
    raise ParameterError(f"unrecognized group spec {spec!r} (expected t1, t2 or su2)")


def enumerate_dual(group, bandlimit: int) -> list[DualIndex]:
    return group.enumerate_dual(bandlimit)


def matrix_coefficients(group, xi: DualIndex, x) -> np.ndarray:
    """The unitary matrix xi(x)."""
    return group.irrep_matrix(xi, x)


def haar_quadrature(group, bandlimit: int) -> QuadratureGrid:
    return group.haar_quadrature(bandlimit)


def weyl_summability(group, alpha: float, bandlimit: int) -> np.ndarray:
    """Partial sums S(L') = sum_{dual up to L'} d^2 (1+lambda)^(-alpha), L' = 1..L.

    For alpha = dim G the increments shrink geometrically; at alpha = dim G / 2
    they do not (the Weyl-law summability threshold).
    """
    if bandlimit < 1:
        raise DomainError("band limit must be >= 1")
    sums = np.zeros(bandlimit)
    prev: set = set()
    total = 0.0
    for lprime in range(1, bandlimit + 1):
        for xi in group.enumerate_dual(lprime):
            if xi.label in prev:
                continue
            prev.add(xi.label)
            total += xi.dim**2 * (1.0 + xi.casimir) ** (-alpha)
        sums[lprime - 1] = total
    return sums
