"""Observables for a field mode that starts in a coherent state |alpha0>.

After N confirmations of the probe the field is the pure squeezed coherent
state |alpha_N, xi_N> and the survival probability is |M_N(alpha0)|^2.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import RegimeError
from .iterates import StepClosure, propagate_amplitude, step_closure
from .params import ProjectedKernel, SystemParams, derive_kernel, target_squeeze


@dataclass(frozen=True)
class SqueezedCoherentLabel:
    """|alpha, xi> = D(alpha) S(xi) |0>, with S(xi) = exp[(xi* a^2 - xi a+^2)/2]."""

    alpha: complex
    xi: complex

    @property
    def mean_quanta(self) -> float:
        return math.sinh(abs(self.xi)) ** 2 + abs(self.alpha) ** 2


@dataclass(frozen=True)
class DistillRecord:
    N: int
    logP: float
    fidelity: float
    mean_quanta: float
    state: SqueezedCoherentLabel

    @property
    def P(self) -> float:
        return math.exp(self.logP)


def squeezed_overlap_sq(r, phi, r_N, phi_N, alpha_N):
    """|<xi| alpha_N, xi_N>|^2 for a squeezed vacuum |xi> = S(r e^{i phi})|0>.

    Vectorized over ``alpha_N``.  The displacement phase theta_N = arg(alpha_N)
    is irrelevant when alpha_N = 0 (np.angle returns 0 there).
    """
    alpha_N = np.asarray(alpha_N, dtype=complex)
    theta = np.angle(alpha_N)
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    chN, shN = math.cosh(2 * r_N), math.sinh(2 * r_N)
    den = 1.0 + ch * chN - sh * shN * math.cos(phi - phi_N)
    num = ch + chN + sh * np.cos(phi - 2 * theta) + shN * np.cos(phi_N - 2 * theta)
    out = np.exp(-np.abs(alpha_N) ** 2 * num / den) * math.sqrt(2.0 / den)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _image(kernel: ProjectedKernel, alpha0: complex, N: int):
    closure = step_closure(kernel, N)
    return closure, propagate_amplitude(closure, complex(alpha0))


def survival_log_prob(kernel: ProjectedKernel, alpha0: complex, N: int) -> float:
    """ln P(N tau): log-probability that all N measurements confirm the probe."""
    _, img = _image(kernel, alpha0, N)
    return float(img.log_prob)


def _fidelity(kernel: ProjectedKernel, closure: StepClosure, alpha_N: complex) -> float:
    tgt = target_squeeze(kernel)
    return squeezed_overlap_sq(tgt.r, tgt.phi, closure.r_N, closure.phi_N, alpha_N)


def fidelity_to_target(kernel: ProjectedKernel, alpha0: complex, N: int) -> float:
    closure, img = _image(kernel, alpha0, N)
    return _fidelity(kernel, closure, img.alpha_N)


def mean_quanta(kernel: ProjectedKernel, alpha0: complex, N: int) -> float:
    """<a+a> = sinh^2 r_N + |alpha_N|^2."""
    closure, img = _image(kernel, alpha0, N)
    return math.sinh(closure.r_N) ** 2 + abs(img.alpha_N) ** 2


def mean_quanta_linear_zeta(kernel: ProjectedKernel, alpha0: complex, N: int) -> float:
    """|zeta_N| / (1 - |zeta_N|^2) + |alpha_N|^2.

    Kept only for comparison: sinh^2(artanh t) is t^2/(1 - t^2), so this
    expression overstates the squeezing contribution; the Fock oracle agrees
    with :func:`mean_quanta`.
    """
    closure, img = _image(kernel, alpha0, N)
    t = abs(closure.zeta_N)
    return t / (1.0 - t * t) + abs(img.alpha_N) ** 2


def distill_record(kernel: ProjectedKernel, alpha0: complex, N: int) -> DistillRecord:
    closure, img = _image(kernel, alpha0, N)
    return DistillRecord(
        N=N,
        logP=float(img.log_prob),
        fidelity=_fidelity(kernel, closure, img.alpha_N),
        mean_quanta=math.sinh(closure.r_N) ** 2 + abs(img.alpha_N) ** 2,
        state=SqueezedCoherentLabel(img.alpha_N, closure.xi_N),
    )


def distill_series(kernel: ProjectedKernel, alpha0: complex, n_max: int) -> list[DistillRecord]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    kernel.require_distilling()
    return [distill_record(kernel, alpha0, N) for N in range(1, n_max + 1)]


@dataclass(frozen=True)
class ZenoRow:
    N: int
    tau_bar: float
    logP: float
    fidelity: float
    regime: str = "distilling"

    @property
    def P(self) -> float:
        return math.exp(self.logP)


def zeno_series(g_bar: float, dp_bar: float, t_bar: float, Ns, alpha0: complex = 1.0) -> list[ZenoRow]:
    """Survival and Zeno-dynamics fidelity at fixed total time t_bar = N tau_bar.

    The fidelity is taken against the freely rotated coherent state
    |alpha0 exp(-i t_bar)>.  Rows whose induced kernel is degenerate or
    marginal carry NaNs and the regime name instead of raising.
    """
    if not t_bar > 0:
        raise ValueError("t_bar must be > 0")
    rotated = complex(alpha0) * cmath.exp(-1j * t_bar)
    rows = []
    for N in Ns:
        tau = t_bar / N
        try:
            kernel = derive_kernel(SystemParams(tau, g_bar, dp_bar))
            closure, img = _image(kernel, alpha0, N)
        except RegimeError as exc:
            name = type(exc).__name__.replace("Kernel", "").lower()
            rows.append(ZenoRow(N, tau, math.nan, math.nan, name))
            continue
        # |<beta| alpha_N, xi_N>|^2 depends only on alpha_N - beta
        fid = squeezed_overlap_sq(0.0, 0.0, closure.r_N, closure.phi_N, img.alpha_N - rotated)
        rows.append(ZenoRow(N, tau, float(img.log_prob), fid))
    return rows
