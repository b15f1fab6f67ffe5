"""Built-in test signals with closed-form coefficient laws.

The Poisson family e^{-t sqrt(lambda)} and heat family e^{-t lambda} make CLI
demos and classification tests self-verifying; the coefficients are
synthesized so the reported Hilbert-Schmidt norms follow the law exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .fourier import FourierCoefficients, GridFunction, inverse
from .groups import QuadratureGrid


def synth_coefficients(group, bandlimit: int, hs_norm_fn) -> FourierCoefficients:
    """Scalar coefficients Id * hs_norm_fn(lambda)/sqrt(d), so that
    ||T_xi||_HS = hs_norm_fn(lambda_xi) exactly."""
    entries = {}
    for xi in group.enumerate_dual(bandlimit):
        scale = float(hs_norm_fn(xi.casimir)) / np.sqrt(xi.dim)
        entries[xi] = (scale * np.eye(xi.dim, dtype=complex))[None, :, :]
    return FourierCoefficients(group, bandlimit, 1, entries)


def poisson_coefficients(group, bandlimit: int, t: float) -> FourierCoefficients:
    """||T_xi||_HS = exp(-t sqrt(lambda_xi)); on T^1 this is exp(-t |k|)."""
    if t <= 0:
        raise ParameterError("poisson parameter t must be positive")
    return synth_coefficients(group, bandlimit, lambda lam: np.exp(-t * np.sqrt(lam)))


def heat_coefficients(group, bandlimit: int, t: float) -> FourierCoefficients:
    """||T_xi||_HS = exp(-t lambda_xi)."""
    if t <= 0:
        raise ParameterError("heat parameter t must be positive")
    return synth_coefficients(group, bandlimit, lambda lam: np.exp(-t * lam))


def reproducing_kernel(group, bandlimit: int) -> FourierCoefficients:
    """T_xi = Id for every xi within the band limit (truncated delta)."""
    entries = {
        xi: np.eye(xi.dim, dtype=complex)[None, :, :]
        for xi in group.enumerate_dual(bandlimit)
    }
    return FourierCoefficients(group, bandlimit, 1, entries)


def poisson_function(group, grid: QuadratureGrid, t: float) -> GridFunction:
    return inverse(poisson_coefficients(group, grid.bandlimit, t), grid)


def heat_function(group, grid: QuadratureGrid, t: float) -> GridFunction:
    return inverse(heat_coefficients(group, grid.bandlimit, t), grid)


def random_bandlimited(group, grid: QuadratureGrid, rng, value_dim: int = 1,
                       decay: float = 0.3) -> GridFunction:
    """Random band-limited function with mildly decaying random coefficients."""
    entries = {}
    for xi in group.enumerate_dual(grid.bandlimit):
        shape = (value_dim, xi.dim, xi.dim)
        t = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        entries[xi] = t * np.exp(-decay * np.sqrt(xi.casimir)) / xi.dim
    T = FourierCoefficients(group, grid.bandlimit, value_dim, entries)
    return inverse(T, grid)


def parse_builtin_spec(spec: str):
    """Parse "poisson:t", "heat:t" or "bump:s:halfwidth" into (name, params)."""
    parts = spec.split(":")
    name = parts[0]
    if name == "poisson" and len(parts) == 2:
        return ("poisson", (float(parts[1]),))
    if name == "heat" and len(parts) == 2:
        return ("heat", (float(parts[1]),))
    if name == "bump" and len(parts) == 3:
        return ("bump", (float(parts[1]), float(parts[2])))
    raise ParameterError(f"unrecognized builtin spec {spec!r}")
