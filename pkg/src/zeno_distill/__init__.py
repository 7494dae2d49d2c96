"""Field-mode dynamics under repeated partial projective measurements.

A particle coupled linearly (through its momentum) to one bosonic mode is
repeatedly projected back onto its Gaussian initial state.  The package
provides the exact N-step closed forms, the resulting observables for
coherent, mixed and thermal initial field states, the no-measurement
baseline, and an independent truncated-Fock oracle.
"""
from . import _backend
from .coherent import (DistillRecord, SqueezedCoherentLabel, ZenoRow, distill_series,
                       fidelity_to_target, mean_quanta, squeezed_overlap_sq,
                       survival_log_prob, zeno_series)
from .errors import (DegenerateKernel, GapTooSmall, MarginalKernel, QuadratureNotConverged,
                     RegimeError, TruncationTooSmall, ZenoDistillError)
from .free import free_field_ensemble, free_mean_quanta, free_survival
from .iterates import AmplitudeImage, StepClosure, propagate_amplitude, step_closure
from .params import (FIG1, ProjectedKernel, Regime, SystemParams, TargetSqueeze,
                     derive_kernel, target_squeeze)
from .pfunc import (CoherentMixture, Delta, FieldEnsemble, ThermalGaussian,
                    ensemble_fidelity, ensemble_mean_quanta, evolve_ensemble)

__version__ = "0.1.0"
BACKEND = _backend.NAME
