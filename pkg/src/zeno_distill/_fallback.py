"""Pure numpy versions of the oracle's inner loops.

Matrix elements <m|D(alpha)|n> are built from the generalized Laguerre
recurrence along each diagonal k = m - n:

    f_n = sqrt(n!/(n+k)!) |alpha|^k exp(-|alpha|^2/2) L_n^(k)(|alpha|^2)

which stays bounded by 1 where the usual column recurrence blows up for
|alpha| of a few units.  Lower triangle: f * u^k with u = alpha/|alpha|;
upper triangle (m = n - k): f * (-conj(u))^k.
"""
from __future__ import annotations

import numpy as np
from scipy.special import gammaln


def _diagonal_factors(mods: np.ndarray, dim: int) -> np.ndarray:
    """f[j, k, n] for node moduli ``mods[j]``, diagonals k, positions n (n + k < dim)."""
    q = mods.size
    x = mods ** 2
    k = np.arange(dim, dtype=float)
    f = np.zeros((q, dim, dim))
    logm = np.log(np.where(mods > 0, mods, 1.0))
    f0 = np.exp(k[None, :] * logm[:, None] - 0.5 * gammaln(k + 1.0)[None, :] - 0.5 * x[:, None])
    f0[mods == 0.0, :] = 0.0
    f0[mods == 0.0, 0] = 1.0
    f[:, :, 0] = f0
    if dim > 1:
        f[:, :, 1] = f0 * np.sqrt(1.0 / (1.0 + k))[None, :] * (1.0 + k[None, :] - x[:, None])
    for n in range(2, dim):
        c1 = np.sqrt(n / (n + k))
        c2 = np.sqrt(n * (n - 1.0) / ((n + k) * (n + k - 1.0)))
        f[:, :, n] = ((2 * n - 1 + k[None, :] - x[:, None]) * c1 * f[:, :, n - 1]
                      - (n - 1 + k[None, :]) * c2 * f[:, :, n - 2]) / n
    return f


def _assemble(f: np.ndarray, phases: np.ndarray, coeffs: np.ndarray, dim: int) -> np.ndarray:
    k = np.arange(dim)
    lo_ph = phases[:, None] ** k[None, :]            # u^k
    up_ph = (-np.conj(phases))[:, None] ** k[None, :]  # (-u*)^k
    out = np.zeros((dim, dim), dtype=complex)
    for kk in range(dim):
        n = np.arange(dim - kk)
        fk = f[:, kk, : dim - kk]
        out[n + kk, n] = (coeffs * lo_ph[:, kk]) @ fk
        if kk:
            out[n, n + kk] = (coeffs * up_ph[:, kk]) @ fk
    return out


def displacement_elements(alpha: complex, dim: int) -> np.ndarray:
    """Leading dim x dim block of the (infinite) displacement operator D(alpha)."""
    a = complex(alpha)
    mod = abs(a)
    f = _diagonal_factors(np.array([mod]), dim)
    u = a / mod if mod else 1.0 + 0j
    return _assemble(f, np.array([u]), np.array([1.0 + 0j]), dim)


def projected_sum(beta: complex, p_nodes: np.ndarray, coeffs: np.ndarray, dim: int) -> np.ndarray:
    """sum_j coeffs[j] * D(p_nodes[j] * beta), leading dim x dim block."""
    beta = complex(beta)
    p = np.asarray(p_nodes, dtype=float)
    c = np.asarray(coeffs, dtype=complex)
    amps = p * beta
    mods = np.abs(amps)
    safe = np.where(mods > 0, mods, 1.0)
    phases = np.where(mods > 0, amps / safe, 1.0 + 0j)
    f = _diagonal_factors(mods, dim)
    return _assemble(f, phases, c, dim)
