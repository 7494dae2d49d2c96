"""N-step closed forms for repeated projections.

V**N = M**N exp(-zeta_N a+^2/2) exp(-kappa_N (n + 1/2)) exp(-zeta_N a^2/2)

The hyperbolic functions of N log(lambda) in the textbook form overflow for
large N.  Everything here is rewritten in x = lambda**(2N), which decays
because |lambda| < 1, and the growing part of kappa_N is carried as the
explicit additive term -N log(lambda).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .params import ProjectedKernel


@dataclass(frozen=True)
class StepClosure:
    kernel: ProjectedKernel
    n_steps: int
    zeta_N: complex
    kappa_N: complex
    r_N: float
    phi_N: float

    @property
    def xi_N(self) -> complex:
        return self.r_N * cmath.exp(1j * self.phi_N)

    @property
    def cosh2_r(self) -> float:
        # cosh^2 r = 1 / (1 - tanh^2 r)
        return 1.0 / (1.0 - abs(self.zeta_N) ** 2)

    @property
    def log_cosh_r(self) -> float:
        return -0.5 * math.log1p(-abs(self.zeta_N) ** 2)


@dataclass(frozen=True)
class AmplitudeImage:
    """Image of a coherent amplitude: V**N |alpha> = exp(logM_N) |alpha_N, xi_N>.

    Both fields are complex scalars or arrays matching the input amplitude.
    """

    alpha_N: complex | np.ndarray
    logM_N: complex | np.ndarray

    @property
    def log_prob(self):
        return 2.0 * np.real(self.logM_N)


def _decay(kernel: ProjectedKernel, N: int) -> complex:
    # lambda**(2N); underflows cleanly to 0 for huge N
    z = 2.0 * N * kernel.log_lam
    if z.real < -745.0:
        return 0j
    return cmath.exp(z)


def step_closure(kernel: ProjectedKernel, N: int) -> StepClosure:
    """Parameters of the factorized V**N."""
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    kernel.require_distilling()
    G, qt, w = kernel.G, kernel.q_tilde, kernel.sqrt_q2m1
    x = _decay(kernel, N)
    # coth(N L) = (1 + x) / (x - 1)
    zeta_N = G / (G * qt - w * (1.0 + x) / (x - 1.0))
    bracket = 0.5 * (1.0 + x) - (G * qt / w) * 0.5 * (x - 1.0)
    kappa_N = -N * kernel.log_lam + cmath.log(bracket)
    return StepClosure(
        kernel=kernel,
        n_steps=N,
        zeta_N=zeta_N,
        kappa_N=kappa_N,
        r_N=math.atanh(abs(zeta_N)),
        phi_N=cmath.phase(zeta_N),
    )


def zeta_gap(kernel: ProjectedKernel, N: int) -> complex:
    """zeta_N - zeta in a form that keeps full relative precision.

    zeta_N - zeta = 2 G w x / ((x - 1) (G q_tilde - w coth) (G q_tilde + w)).
    """
    G, qt, w = kernel.G, kernel.q_tilde, kernel.sqrt_q2m1
    x = _decay(kernel, N)
    coth_term = w * (1.0 + x) / (x - 1.0)
    return 2.0 * G * w * x / ((x - 1.0) * (G * qt - coth_term) * (G * qt + w))


def propagate_amplitude(closure: StepClosure, alpha) -> AmplitudeImage:
    """Coherent amplitude and log prefactor after N projections.

    ``alpha`` may be a complex scalar or an array of amplitudes.
    """
    kernel = closure.kernel
    N = closure.n_steps
    zN, kN = closure.zeta_N, closure.kappa_N
    c2 = closure.cosh2_r
    a = np.asarray(alpha, dtype=complex)

    e_k = _safe_exp(-kN)
    e_kc = e_k.conjugate()
    e_2k = _safe_exp(-2.0 * kN)
    e_2rk = math.exp(-2.0 * kN.real) if -2.0 * kN.real > -745.0 else 0.0

    alpha_N = (a * e_k - a.conj() * zN * e_kc) * c2
    quad = (np.abs(a) ** 2 * (1.0 - e_2rk * c2)
            + a * a * (zN + zN.conjugate() * e_2k * c2))
    logM_N = N * cmath.log(kernel.M) + 0.5 * closure.log_cosh_r - 0.5 * (kN + quad)
    if a.ndim == 0:
        return AmplitudeImage(complex(alpha_N), complex(logM_N))
    return AmplitudeImage(alpha_N, logM_N)


def _safe_exp(z: complex) -> complex:
    if z.real < -745.0:
        return 0j
    return cmath.exp(z)


def closed_form_matrix(closure: StepClosure, dim: int) -> np.ndarray:
    """<m|V**N|n> for m, n < dim from the factorized form.

    exp(-zeta a+^2/2) is lower triangular in the number basis, so the
    truncation is exact: no levels above ``dim`` contribute.
    """
    zN, kN = closure.zeta_N, closure.kappa_N
    m = np.arange(dim)[:, None]
    k = np.arange(dim)[None, :]
    j2 = m - k
    valid = (j2 >= 0) & (j2 % 2 == 0)
    j = np.where(valid, j2 // 2, 0)
    if zN == 0:
        A = np.eye(dim, dtype=complex)
    else:
        logA = (j * cmath.log(zN / -2.0) - gammaln(j + 1.0)
                + 0.5 * (gammaln(m + 1.0) - gammaln(k + 1.0)))
        A = np.where(valid, np.exp(np.where(valid, logA, 0.0)), 0.0)
    diag = np.exp(closure.n_steps * cmath.log(closure.kernel.M) - kN * (np.arange(dim) + 0.5))
    return (A * diag[None, :]) @ A.T
