"""Field states given by a Glauber-Sudarshan P-function.

Each coherent component |alpha> of the initial state is mapped to a single
squeezed coherent state with a weight |M_N(alpha)|^2, so the evolved state is
a weighted mixture sharing one squeeze parameter xi_N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .coherent import SqueezedCoherentLabel, squeezed_overlap_sq
from .errors import QuadratureNotConverged
from .iterates import StepClosure, propagate_amplitude, step_closure
from .params import ProjectedKernel, TargetSqueeze
from .quadrature import complex_gaussian_rule

DEFAULT_ALPHA_ORDER = 32
CONVERGENCE_RTOL = 1e-8


@dataclass(frozen=True)
class Delta:
    alpha0: complex

    def nodes(self, order: int):
        return np.array([complex(self.alpha0)]), np.array([1.0])

    def second_moment(self) -> float:
        return abs(self.alpha0) ** 2


@dataclass(frozen=True)
class CoherentMixture:
    components: tuple[tuple[float, complex], ...]

    def __post_init__(self):
        comps = tuple((float(w), complex(a)) for w, a in self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        if any(w <= 0 for w, _ in comps):
            raise ValueError("mixture weights must be > 0")
        total = sum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"mixture weights sum to {total}, expected 1")
        object.__setattr__(self, "components", comps)

    def nodes(self, order: int):
        w = np.array([c[0] for c in self.components])
        a = np.array([c[1] for c in self.components])
        return a, w

    def second_moment(self) -> float:
        return sum(w * abs(a) ** 2 for w, a in self.components)


@dataclass(frozen=True)
class ThermalGaussian:
    """Displaced thermal state, P(alpha) = exp(-|alpha - center|^2 / nbar) / (pi nbar)."""

    nbar: float
    center: complex = 0j

    def __post_init__(self):
        if not self.nbar > 0:
            raise ValueError("nbar must be > 0")

    def nodes(self, order: int):
        return complex_gaussian_rule(order, self.nbar, complex(self.center))

    def second_moment(self) -> float:
        return self.nbar + abs(self.center) ** 2


PFunction = Union[Delta, CoherentMixture, ThermalGaussian]


@dataclass(frozen=True)
class FieldEnsemble:
    """rho = (1/normalization) sum_k weights[k] |alphas[k], xis[k]><...|."""

    weights: np.ndarray
    alphas: np.ndarray
    xis: np.ndarray
    normalization: float
    order: int | None = field(default=None, compare=False)

    @property
    def rows(self) -> list[tuple[float, SqueezedCoherentLabel]]:
        return [(float(w), SqueezedCoherentLabel(complex(a), complex(x)))
                for w, a, x in zip(self.weights, self.alphas, self.xis)]

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self.normalization


def _weights(pfunc: PFunction, closure: StepClosure, order: int):
    alphas, base = pfunc.nodes(order)
    img = propagate_amplitude(closure, alphas)
    w = base * np.exp(img.log_prob)
    return img.alpha_N, w


def _check_decay(pfunc: ThermalGaussian, closure: StepClosure) -> None:
    """Fail if the Gaussian part of P(alpha)|M_N(alpha)|^2 is not integrable."""
    kN, zN, c2 = closure.kappa_N, closure.zeta_N, closure.cosh2_r
    A = 1.0 - math.exp(-2.0 * kN.real) * c2
    B = zN + np.conj(zN) * np.exp(-2.0 * kN) * c2
    # exponent is -[(1/nbar + A)|alpha|^2 + Re(B alpha^2)] + linear terms
    if 1.0 / pfunc.nbar + A <= abs(B):
        raise QuadratureNotConverged(
            f"P-function integrand grows along one quadrature (1/nbar + A = "
            f"{1.0 / pfunc.nbar + A:.3g} <= |B| = {abs(B):.3g})")


def evolve_ensemble(kernel: ProjectedKernel, pfunc: PFunction, N: int,
                    order: int = DEFAULT_ALPHA_ORDER,
                    rtol: float = CONVERGENCE_RTOL) -> FieldEnsemble:
    """Field state after N projections, as a squeezed-coherent mixture."""
    closure = step_closure(kernel, N)
    alpha_N, w = _weights(pfunc, closure, order)
    norm = float(np.sum(w))
    if isinstance(pfunc, ThermalGaussian):
        _check_decay(pfunc, closure)
        _, w2 = _weights(pfunc, closure, 2 * order)
        norm2 = float(np.sum(w2))
        if not (norm > 0 and abs(norm2 - norm) <= rtol * abs(norm2)):
            raise QuadratureNotConverged(
                f"P(N tau) moved from {norm!r} to {norm2!r} when the alpha "
                f"quadrature order doubled to {2 * order}")
    if not norm > 0:
        raise QuadratureNotConverged("survival probability underflowed to zero")
    xis = np.full(alpha_N.shape, closure.xi_N, dtype=complex)
    return FieldEnsemble(w, alpha_N, xis, norm, order)


def ensemble_mean_quanta(ensemble: FieldEnsemble) -> float:
    """sum_k p_k (sinh^2 r_k + |alpha_k|^2)."""
    p = ensemble.probabilities
    sq = np.sinh(np.abs(ensemble.xis)) ** 2
    return float(np.sum(p * (sq + np.abs(ensemble.alphas) ** 2)))


def ensemble_fidelity(ensemble: FieldEnsemble, target: TargetSqueeze) -> float:
    """<xi| rho |xi> for the squeezed vacuum target."""
    p = ensemble.probabilities
    # rows from one closure share xi; group to keep the overlap vectorized
    total = 0.0
    for xi in np.unique(ensemble.xis):
        sel = ensemble.xis == xi
        ov = squeezed_overlap_sq(target.r, target.phi, abs(xi), float(np.angle(xi)),
                                 ensemble.alphas[sel])
        total += float(np.sum(p[sel] * ov))
    return min(max(total, 0.0), 1.0)
