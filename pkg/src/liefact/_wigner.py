"""Wigner small-d matrices by three-term recursion in l.

Conventions: d^l_{m'm}(beta) = <l m'| exp(-i beta J_y) |l m>, rows and columns
ordered by decreasing magnetic index m = l, l-1, ..., -l, so that the 2l = 1
matrix is

    [[ cos(b/2), -sin(b/2)],
     [ sin(b/2),  cos(b/2)]]

and D^l(alpha, beta, gamma) = diag(e^{-i m' alpha}) d^l(beta) diag(e^{-i m gamma})
restricts at 2l = 1 to the defining SU(2) matrix.

For each fixed (m', m) the series l = l0, l0+1, ... with l0 = max(|m'|, |m|)
satisfies the recurrence

    l sqrt(((l+1)^2-m'^2)((l+1)^2-m^2)) d^{l+1}
        = (2l+1) (l(l+1) u - m' m) d^l
          - (l+1) sqrt((l^2-m'^2)(l^2-m^2)) d^{l-1},        u = cos(beta),

whose d^{l0-1} coefficient vanishes, so the closed-form boundary value at l0
is the only seed needed.  The boundary values are evaluated in log space
(binomial square roots up to l ~ 500 without overflow); the recursion is
stable upward in l well past l = 128.
"""

from __future__ import annotations

import numpy as np

_LOG_FACT_CACHE = np.zeros(1)


def _log_factorials(n: int) -> np.ndarray:
    global _LOG_FACT_CACHE
    if len(_LOG_FACT_CACHE) <= n:
        m = max(n + 1, 2 * len(_LOG_FACT_CACHE))
        _LOG_FACT_CACHE = np.concatenate([[0.0], np.cumsum(np.log(np.arange(1, m, dtype=float)))])
    return _LOG_FACT_CACHE


def _seed(two_l0: int, two_m: int, two_n: int, cos_half, sin_half):
    """d^{l0}_{mn} at l0 = max(|m|,|n|), via the boundary closed forms."""
    lf = _log_factorials(two_l0 + 1)
    if abs(two_m) >= abs(two_n):
        # m = +-l0
        log_binom = 0.5 * (lf[two_l0] - lf[(two_l0 + two_n) // 2] - lf[(two_l0 - two_n) // 2])
        if two_m == two_l0:
            p, q, sign = (two_l0 + two_n) // 2, (two_l0 - two_n) // 2, (-1.0) ** ((two_l0 - two_n) // 2)
        else:
            p, q, sign = (two_l0 - two_n) // 2, (two_l0 + two_n) // 2, 1.0
    else:
        # n = +-l0
        log_binom = 0.5 * (lf[two_l0] - lf[(two_l0 + two_m) // 2] - lf[(two_l0 - two_m) // 2])
        if two_n == two_l0:
            p, q, sign = (two_l0 + two_m) // 2, (two_l0 - two_m) // 2, 1.0
        else:
            p, q, sign = (two_l0 - two_m) // 2, (two_l0 + two_m) // 2, (-1.0) ** ((two_l0 + two_m) // 2)
    return sign * np.exp(log_binom) * np.power(cos_half, p) * np.power(sin_half, q)


def wigner_d_matrices(two_l_max: int, beta) -> list[np.ndarray]:
    """All small-d matrices up to 2l = two_l_max on a batch of angles.

    Returns a list indexed by two_l; entry two_l has shape (len(beta), 2l+1, 2l+1)
    with axes ordered (angle, row m' = l..-l, column m = l..-l).
    """
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    nb = len(beta)
    u = np.cos(beta)
    ch = np.cos(beta / 2.0)
    sh = np.sin(beta / 2.0)
    mats = [np.zeros((nb, two_l + 1, two_l + 1)) for two_l in range(two_l_max + 1)]
    for two_m in range(-two_l_max, two_l_max + 1):
        for two_n in range(-two_l_max, two_l_max + 1):
            if (two_m - two_n) % 2 != 0:
                continue
            # |2m|, |2n| and 2l share parity, so the seed level is admissible
            two_l0 = max(abs(two_m), abs(two_n))
            m = two_m / 2.0
            n = two_n / 2.0
            prev = np.zeros(nb)
            cur = _seed(two_l0, two_m, two_n, ch, sh)
            for two_l in range(two_l0, two_l_max + 1, 2):
                l = two_l / 2.0
                i = int(l - m)  # row index, m' decreasing from l
                j = int(l - n)
                mats[two_l][:, i, j] = cur
                if two_l + 2 > two_l_max:
                    break
                if two_l == 0:
                    # degenerate first step of the (0,0) series: d^1_00 = cos(beta)
                    cur, prev = u * cur, cur
                    continue
                a = (2 * l + 1) * (l * (l + 1) * u - m * n)
                b = (l + 1) * np.sqrt((l * l - m * m) * (l * l - n * n))
                c = l * np.sqrt(((l + 1) ** 2 - m * m) * ((l + 1) ** 2 - n * n))
                cur, prev = (a * cur - b * prev) / c, cur
    return mats


def wigner_D_single(two_l: int, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """D^l(alpha, beta, gamma) at one point (complex (2l+1, 2l+1) matrix)."""
    d = wigner_d_matrices(two_l, np.array([beta]))[two_l][0]
    two_ms = np.arange(two_l, -two_l - 1, -2)
    left = np.exp(-0.5j * two_ms * alpha)
    right = np.exp(-0.5j * two_ms * gamma)
    return left[:, None] * d * right[None, :]
