"""Brute-force reference in a truncated number basis.

Nothing here uses the N-step closed forms: the projected kernel V is built
by integrating the fixed-momentum propagator over the probe's momentum
distribution, and observables come from iterating rho -> V rho V+.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.special import gammaln

from . import _backend
from .errors import GapTooSmall, QuadratureNotConverged, TruncationTooSmall
from .free import coupling_amplitude
from .params import SystemParams, free_phase_coefficient
from .quadrature import normal_rule

DEFAULT_DIM = 80
PROPAGATOR_DIM = 120
DEFAULT_P_ORDER = 64
UNITARITY_TOL = 1e-8
LEAK_LEVELS = 10
LEAK_TOL = 1e-8
QUAD_TOL = 1e-8
GAP_TOL = 1e-10


@dataclass(frozen=True)
class FockVector:
    """Truncated state vector with the norm that did not fit in the basis."""

    entries: np.ndarray
    tail: float

    @property
    def dim(self) -> int:
        return self.entries.size


def ladder_matrices(dim: int) -> tuple[np.ndarray, np.ndarray]:
    if dim < 2:
        raise ValueError("dimension must be >= 2")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    return a, a.conj().T


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def _capture_defect(U: np.ndarray, cols: int, keep: int) -> float:
    """max over the first ``cols`` columns of |1 - norm of the image in rows < keep|."""
    captured = np.sum(np.abs(U[:keep, :cols]) ** 2, axis=0)
    return float(np.abs(1.0 - captured).max())


def _gate(U: np.ndarray, what: str, interior: int | None, tol: float) -> None:
    dim = U.shape[0]
    cols = dim // 4 if interior is None else interior
    keep = dim - 10
    if cols < 1 or keep < 1:
        return
    defect = _capture_defect(U, cols, keep)
    if defect > tol:
        raise TruncationTooSmall(
            f"{what}: the leading {cols} columns lose {defect:.2e} of their norm above "
            f"level {keep} (tol {tol:.0e}, D={dim})")


def displacement_matrix(alpha: complex, dim: int, method: str = "elements",
                        check: bool = True, interior: int | None = None,
                        tol: float = UNITARITY_TOL) -> np.ndarray:
    """D(alpha) = exp(alpha a+ - alpha* a) truncated to ``dim`` levels.

    ``method="elements"`` returns the exact matrix elements of the infinite
    operator (Laguerre recurrence); ``method="expm"`` exponentiates the
    truncated generator.  With ``check`` the images of the leading
    ``interior`` columns (the states in play, default D // 4) must keep all
    but ``tol`` of their norm below the top 10 levels.
    """
    if method == "elements":
        U = _backend.displacement_elements(complex(alpha), dim)
    elif method == "expm":
        a, ad = ladder_matrices(dim)
        U = sla.expm(alpha * ad - np.conj(alpha) * a)
    else:
        raise ValueError(f"unknown method {method!r}")
    if check:
        _gate(U, f"D({alpha})", interior, tol)
    return U


def squeeze_matrix(xi: complex, dim: int, check: bool = True,
                   interior: int | None = None, tol: float = UNITARITY_TOL) -> np.ndarray:
    """S(xi) = exp[(xi* a^2 - xi a+^2) / 2] from the truncated generator."""
    a, ad = ladder_matrices(dim)
    U = sla.expm(0.5 * (np.conj(xi) * (a @ a) - xi * (ad @ ad)))
    if check:
        _gate(U, f"S({xi})", interior, tol)
    return U


def coherent_vector(alpha: complex, dim: int) -> FockVector:
    n = np.arange(dim)
    alpha = complex(alpha)
    if alpha == 0:
        c = (n == 0).astype(complex)
    else:
        logmag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0)
        c = np.exp(logmag + 1j * n * np.angle(alpha))
    return FockVector(c, max(0.0, 1.0 - float(np.vdot(c, c).real)))


def squeezed_vacuum_vector(xi: complex, dim: int) -> FockVector:
    """S(xi)|0>: only even levels, c_{2j} = sqrt((2j)!)/j! (-e^{i phi} tanh r / 2)^j / sqrt(cosh r)."""
    r, phi = abs(xi), float(np.angle(xi))
    c = np.zeros(dim, dtype=complex)
    j = np.arange((dim + 1) // 2)
    m = 2 * j
    t = math.tanh(r)
    if t == 0:
        c[0] = 1.0
    else:
        logmag = 0.5 * gammaln(m + 1.0) - gammaln(j + 1.0) + j * math.log(t / 2.0) - 0.5 * math.log(math.cosh(r))
        c[m] = np.exp(logmag) * (-np.exp(1j * phi)) ** j
    return FockVector(c, max(0.0, 1.0 - float(np.vdot(c, c).real)))


def squeezed_coherent_vector(alpha: complex, xi: complex, dim: int, pad: int = 40) -> FockVector:
    """D(alpha) S(xi)|0>, displaced in a padded basis then truncated."""
    big = dim + pad
    v = displacement_matrix(alpha, big, check=False) @ squeezed_vacuum_vector(xi, big).entries
    c = v[:dim].copy()
    return FockVector(c, max(0.0, 1.0 - float(np.vdot(c, c).real)))


def coherent_density(alpha: complex, dim: int) -> np.ndarray:
    c = coherent_vector(alpha, dim).entries
    return np.outer(c, c.conj())


def thermal_density(nbar: float, dim: int, center: complex = 0j) -> np.ndarray:
    n = np.arange(dim)
    p = np.exp(n * math.log(nbar / (1.0 + nbar))) / (1.0 + nbar)
    rho = np.diag(p).astype(complex)
    if center != 0:
        Dm = displacement_matrix(center, dim, check=False)
        rho = Dm @ rho @ Dm.conj().T
    return rho


def u_p_factored(params: SystemParams, p_bar: float, t_bar: float, dim: int = PROPAGATOR_DIM,
                 check: bool = True, interior: int | None = None) -> np.ndarray:
    """Propagator at fixed probe momentum as phase x number rotation x displacement."""
    c = free_phase_coefficient(t_bar, params.g_bar) if t_bar else 1.0
    phase = np.exp(-0.5j * p_bar ** 2 * t_bar * c)
    rot = np.exp(-1j * t_bar * (np.arange(dim) + 0.5))
    Dm = displacement_matrix(p_bar * coupling_amplitude(params.g_bar, t_bar), dim,
                             check=check, interior=interior)
    return phase * rot[:, None] * Dm


def fixed_momentum_hamiltonian(params: SystemParams, p_bar: float, dim: int) -> np.ndarray:
    """p^2/2 + (a+a + 1/2) + g p (a + a+), truncated."""
    n = np.arange(dim, dtype=float)
    off = params.g_bar * p_bar * np.sqrt(n[1:])
    H = np.diag(n + 0.5 + 0.5 * p_bar ** 2) + np.diag(off, 1) + np.diag(off, -1)
    return H.astype(complex)


def default_padding(params: SystemParams, p_bar: float, dim: int) -> int:
    """Extra working levels so that displacing the top retained level still fits."""
    b = abs(p_bar) * 2.0 * params.g_bar  # |p g_t| <= 2 g |p|
    return int(math.ceil(b * b + 6.0 * b * math.sqrt(dim) + 40))


def u_p_exact(params: SystemParams, p_bar: float, t_bar: float, dim: int = PROPAGATOR_DIM,
              pad: int | None = None, check: bool = True,
              interior: int | None = None) -> np.ndarray:
    """exp(-i t H_p) from diagonalizing the truncated Hamiltonian.

    The diagonalization runs in ``dim + pad`` levels and the result is cut
    back to ``dim``, so the retained block is not polluted by the cutoff.
    """
    if pad is None:
        pad = default_padding(params, p_bar, dim)
    H = fixed_momentum_hamiltonian(params, p_bar, dim + pad)
    E, Q = np.linalg.eigh(H)
    U = (Q * np.exp(-1j * t_bar * E)[None, :]) @ Q.conj().T
    U = np.ascontiguousarray(U[:dim, :dim])
    if check:
        _gate(U, f"U_p({p_bar}, {t_bar})", interior, UNITARITY_TOL)
    return U


def _v_sum(params: SystemParams, dim: int, order: int) -> np.ndarray:
    tau = params.tau_bar
    p, w = normal_rule(order, params.dp_bar)
    c = free_phase_coefficient(tau, params.g_bar)
    coeffs = w * np.exp(-0.5j * p ** 2 * tau * c)
    S = _backend.projected_sum(coupling_amplitude(params.g_bar, tau), p, coeffs, dim)
    rot = np.exp(-1j * tau * (np.arange(dim) + 0.5))
    return rot[:, None] * S


def projected_v_matrix(params: SystemParams, dim: int = DEFAULT_DIM,
                       p_quad_order: int = DEFAULT_P_ORDER, check: bool = True,
                       gate_dim: int | None = None, tol: float = QUAD_TOL) -> np.ndarray:
    """V = <Phi0| U(tau) |Phi0> by Gauss-Hermite quadrature over the probe momentum.

    With ``check`` the rule is repeated at twice the order and the leading
    ``gate_dim`` block (default min(D // 2, 40), the levels occupied at
    reference-figure scales) must agree entrywise to ``tol``.
    """
    V = _v_sum(params, dim, p_quad_order)
    if check:
        block = min(dim // 2, 40) if gate_dim is None else gate_dim
        V2 = _v_sum(params, dim, 2 * p_quad_order)
        err = float(np.abs(V2[:block, :block] - V[:block, :block]).max())
        if err > tol:
            raise QuadratureNotConverged(
                f"V changed by {err:.2e} on order doubling {p_quad_order}->"
                f"{2 * p_quad_order} (leading {block} levels)")
    return V


@dataclass(frozen=True)
class OracleRecord:
    N: int
    P: float
    logP: float
    fidelity: float
    mean_quanta: float
    leakage: float


def oracle_series(V: np.ndarray, rho0: np.ndarray, n_max: int, target: np.ndarray | None = None,
                  leak_levels: int = LEAK_LEVELS, leak_tol: float = LEAK_TOL,
                  check: bool = True) -> list[OracleRecord]:
    """Records for N = 0..n_max of rho_N = V^N rho0 V^N+ / P(N tau).

    The state is renormalized every step and ln P accumulated, so P may
    underflow without losing the conditional state.
    """
    dim = V.shape[0]
    nvec = np.arange(dim, dtype=float)
    Vh = V.conj().T
    rho = np.array(rho0, dtype=complex)
    tr0 = float(np.trace(rho).real)
    rho = rho / tr0
    logP = 0.0
    out = []
    for N in range(n_max + 1):
        if N:
            rho = V @ rho @ Vh
            tr = float(np.trace(rho).real)
            logP += math.log(tr)
            rho /= tr
        diag = np.real(np.diag(rho))
        leak = float(diag[-leak_levels:].sum())
        if check and leak > leak_tol:
            raise TruncationTooSmall(
                f"occupation {leak:.2e} in the top {leak_levels} of {dim} levels after {N} steps")
        fid = float(np.real(np.vdot(target, rho @ target))) if target is not None else math.nan
        out.append(OracleRecord(N, math.exp(logP), logP, fid, float(diag @ nvec), leak))
    return out


def oracle_observables(V: np.ndarray, rho0: np.ndarray, N: int,
                       target: np.ndarray | None = None, **kw) -> tuple[float, float, float]:
    rec = oracle_series(V, rho0, N, target, **kw)[-1]
    return rec.P, rec.fidelity, rec.mean_quanta


@dataclass(frozen=True)
class DominantMode:
    eigenvalue: complex
    vector: np.ndarray
    gap: float
    second: complex


def dominant_mode(V: np.ndarray, gap_tol: float = GAP_TOL) -> DominantMode:
    """Largest-modulus eigenpair of V; the vector has unit norm."""
    ev, vecs = np.linalg.eig(V)
    order = np.argsort(-np.abs(ev), kind="stable")
    mu1, mu2 = ev[order[0]], ev[order[1]]
    gap = float(abs(mu1) - abs(mu2))
    if gap < gap_tol:
        raise GapTooSmall(f"|mu1| - |mu2| = {gap:.2e} < {gap_tol:.0e}")
    v = vecs[:, order[0]]
    v = v / np.linalg.norm(v)
    return DominantMode(complex(mu1), v, gap, complex(mu2))


def interior_norm(A: np.ndarray, block: int) -> float:
    """Spectral norm of the leading block x block submatrix."""
    return float(np.linalg.norm(A[:block, :block], 2))
