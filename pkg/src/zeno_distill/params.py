"""Dimensionless system parameters and the single-measurement kernel.

Units are fixed by hbar = m = omega = 1, so the model is described by the
measurement interval ``tau_bar``, the coupling ``g_bar`` and the probe
momentum width ``dp_bar``.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DegenerateKernel, MarginalKernel

DEGENERATE_G = 1e-14
MARGINAL_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    tau_bar: float
    g_bar: float
    dp_bar: float

    def __post_init__(self):
        for name in ("tau_bar", "g_bar", "dp_bar"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.tau_bar <= 0:
            raise ValueError("tau_bar must be > 0")
        if self.dp_bar <= 0:
            raise ValueError("dp_bar must be > 0")
        if self.g_bar < 0:
            raise ValueError("g_bar must be >= 0")

    def with_tau(self, tau_bar: float) -> "SystemParams":
        return SystemParams(tau_bar, self.g_bar, self.dp_bar)


#: coupling and probe width used for every panel of the reference figure
FIG1 = SystemParams(tau_bar=0.9 * math.pi, g_bar=1.0, dp_bar=0.4)


class Regime(enum.Enum):
    DISTILLING = "distilling"
    MARGINAL = "marginal"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class ProjectedKernel:
    """Complex constants of one projected step, V = M exp{...}.

    ``sqrt_q2m1`` is the branch of sqrt(q**2 - 1) for which
    ``lam = q - sqrt_q2m1`` has modulus <= 1; every later formula reuses it.
    """

    params: SystemParams
    M: complex
    G: complex
    q: complex
    q_tilde: complex
    sqrt_q2m1: complex
    lam: complex
    log_lam: complex
    regime: Regime

    @property
    def lambda_(self) -> complex:
        return self.lam

    def require_distilling(self) -> None:
        if self.regime is Regime.DEGENERATE:
            raise DegenerateKernel(
                f"G = {self.G!r} vanishes at tau_bar={self.params.tau_bar}, "
                f"g_bar={self.params.g_bar}")
        if self.regime is Regime.MARGINAL:
            raise MarginalKernel(
                f"|lambda| = {abs(self.lam)!r} is 1 within {MARGINAL_TOL}: no spectral gap")


@dataclass(frozen=True)
class TargetSqueeze:
    zeta: complex
    r: float
    phi: float

    @property
    def xi(self) -> complex:
        return self.r * cmath.exp(1j * self.phi)

    @property
    def mean_quanta(self) -> float:
        return math.sinh(self.r) ** 2


def one_minus_sinc(t: float) -> float:
    """1 - sin(t)/t without cancellation for small t."""
    if abs(t) < 1e-3:
        t2 = t * t
        return t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0))
    return 1.0 - math.sin(t) / t


def free_phase_coefficient(tau_bar: float, g_bar: float) -> float:
    """Factor c in the probe phase exp(-i p**2 tau c / 2)."""
    return 1.0 - 2.0 * g_bar ** 2 * one_minus_sinc(tau_bar)


def kernel_constants(tau_bar: float, g_bar: float, dp_bar: float) -> tuple[complex, complex]:
    """Return (M, G) for any tau_bar >= 0, including the degenerate points."""
    c = free_phase_coefficient(tau_bar, g_bar) if tau_bar != 0 else 1.0
    M = 1.0 / cmath.sqrt(1.0 + 1j * dp_bar ** 2 * tau_bar * c)
    one_minus_cos = 2.0 * math.sin(tau_bar / 2.0) ** 2
    G = 2.0 * M * M * g_bar ** 2 * dp_bar ** 2 * one_minus_cos
    return M, G


def derive_kernel(params: SystemParams, strict: bool = True) -> ProjectedKernel:
    """Evaluate M, G, q, q_tilde and pick the decaying root lambda.

    With ``strict`` (default) a degenerate or marginal kernel raises; otherwise
    the kernel is returned with its ``regime`` flag set and NaN fields where
    the constants are undefined.
    """
    tau = params.tau_bar
    M, G = kernel_constants(tau, params.g_bar, params.dp_bar)
    s, c = math.sin(tau), math.cos(tau)
    one_minus_cos = 2.0 * math.sin(tau / 2.0) ** 2
    one_plus_cos = 2.0 * math.cos(tau / 2.0) ** 2
    q = complex(c, 0.0) + 1j * G * s
    nan = complex(math.nan, math.nan)

    if abs(G) < DEGENERATE_G:
        kern = ProjectedKernel(params, M, G, q, nan, nan, nan, nan, Regime.DEGENERATE)
        if strict:
            kern.require_distilling()
        return kern

    q_tilde = complex(c, 0.0) + 1j * s / G
    # q**2 - 1 = (q - 1)(q + 1), each factor formed without cancellation
    w = cmath.sqrt((-one_minus_cos + 1j * G * s) * (one_plus_cos + 1j * G * s))
    lam = q - w
    if abs(lam) > 1.0:
        w = -w
        lam = q - w
    regime = Regime.MARGINAL if abs(abs(lam) - 1.0) < MARGINAL_TOL else Regime.DISTILLING
    log_lam = cmath.log(lam) if lam != 0 else complex(-math.inf, 0.0)
    kern = ProjectedKernel(params, M, G, q, q_tilde, w, lam, log_lam, regime)
    if strict:
        kern.require_distilling()
    return kern


def target_squeeze(kernel: ProjectedKernel) -> TargetSqueeze:
    """Squeeze parameter of the dominant eigenvector of V (the N -> inf state).

    Defined as G / (G q_tilde + sqrt(q**2 - 1)) on the branch used for lambda,
    which is the limit of the N-step squeeze zeta_N.
    """
    kernel.require_distilling()
    zeta = kernel.G / (kernel.G * kernel.q_tilde + kernel.sqrt_q2m1)
    mod = abs(zeta)
    return TargetSqueeze(zeta=zeta, r=math.atanh(mod), phi=cmath.phase(zeta))
