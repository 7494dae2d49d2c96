"""Baseline without measurements: the probe is prepared once and left alone."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureNotConverged
from .params import SystemParams, kernel_constants
from .pfunc import (CONVERGENCE_RTOL, DEFAULT_ALPHA_ORDER, FieldEnsemble, PFunction,
                    ThermalGaussian)
from .quadrature import normal_rule

DEFAULT_P_ORDER = 64


@dataclass(frozen=True)
class FreeRecord:
    t_bar: float
    survival: float
    mean_quanta: float


def coupling_amplitude(g_bar: float, t_bar: float) -> complex:
    """Dimensionless g_t = g_bar (1 - exp(i t_bar)); the field is displaced by p g_t."""
    return g_bar * (1.0 - cmath.exp(1j * t_bar))


def _survival_at(alphas: np.ndarray, g_bar: float, dp_bar: float, t_bar: float) -> np.ndarray:
    M, G = kernel_constants(t_bar, g_bar, dp_bar)
    re_g = G.real
    s = 1.0 + 2.0 * re_g
    quad = 2.0 * np.real(alphas * cmath.exp(-0.5j * t_bar))
    return abs(M) ** 2 / math.sqrt(s) * np.exp(-re_g / s * quad ** 2)


def free_survival(params: SystemParams, pfunc: PFunction, t_bar: float,
                  order: int = DEFAULT_ALPHA_ORDER, rtol: float = CONVERGENCE_RTOL) -> float:
    """P0(t): probability to find the probe still in its initial Gaussian at t_bar.

    ``params.tau_bar`` is ignored; only the coupling and probe width enter.
    """
    if t_bar < 0:
        raise ValueError("t_bar must be >= 0")
    if t_bar == 0:
        return 1.0

    def integrate(n):
        a, w = pfunc.nodes(n)
        return float(np.sum(w * _survival_at(a, params.g_bar, params.dp_bar, t_bar)))

    val = integrate(order)
    if isinstance(pfunc, ThermalGaussian):
        val2 = integrate(2 * order)
        if abs(val2 - val) > rtol * abs(val2):
            raise QuadratureNotConverged(
                f"P0({t_bar}) moved from {val!r} to {val2!r} on order doubling")
    return min(max(val, 0.0), 1.0)


def free_field_ensemble(params: SystemParams, pfunc: PFunction, t_bar: float,
                        p_quad_order: int = DEFAULT_P_ORDER,
                        alpha_order: int = DEFAULT_ALPHA_ORDER) -> FieldEnsemble:
    """Reduced field state at t_bar as a coherent mixture.

    Each P-function node alpha and probe-momentum node p contributes the
    coherent state (alpha + p g_t) exp(-i t_bar) with the product weight.
    Rows are ordered alpha-major, p-minor.
    """
    alphas, wa = pfunc.nodes(alpha_order)
    p, wp = normal_rule(p_quad_order, params.dp_bar)
    g_t = coupling_amplitude(params.g_bar, t_bar)
    amp = (alphas[:, None] + p[None, :] * g_t) * cmath.exp(-1j * t_bar)
    w = (wa[:, None] * wp[None, :]).ravel()
    return FieldEnsemble(w, amp.ravel(), np.zeros(w.size, dtype=complex), float(np.sum(w)))


def free_mean_quanta(params: SystemParams, pfunc: PFunction, t_bar: float) -> float:
    """<a+a> at t_bar: <|alpha|^2>_P + dp_bar^2 |g_t|^2."""
    return pfunc.second_moment() + params.dp_bar ** 2 * abs(coupling_amplitude(params.g_bar, t_bar)) ** 2


def free_series(params: SystemParams, pfunc: PFunction, t_grid) -> list[FreeRecord]:
    return [FreeRecord(float(t), free_survival(params, pfunc, float(t)),
                       free_mean_quanta(params, pfunc, float(t))) for t in t_grid]
