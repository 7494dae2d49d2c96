import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeno_distill import (FIG1, Regime, SystemParams, derive_kernel, distill_series,
                          fidelity_to_target, mean_quanta, squeezed_overlap_sq,
                          survival_log_prob, target_squeeze, zeno_series)
from zeno_distill.coherent import distill_record, mean_quanta_linear_zeta
from zeno_distill.oracle import (coherent_density, oracle_series, squeezed_coherent_vector,
                                 squeezed_vacuum_vector)


@pytest.fixture(scope="module")
def oracle_rows(fig1_V, fig1_kernel):
    xi = squeezed_vacuum_vector(target_squeeze(fig1_kernel).xi, 80).entries
    return {a: oracle_series(fig1_V, coherent_density(a, 80), 10, xi) for a in (0.0, 1.0)}


def test_survival_decreases_to_zero(fig1_kernel):
    lp = [survival_log_prob(fig1_kernel, 1.0, N) for N in range(1, 80)]
    assert all(b < a for a, b in zip(lp, lp[1:]))
    assert math.exp(lp[-1]) < 1e-12


@pytest.mark.parametrize("alpha0", [0.0, 1.0])
def test_closed_forms_against_oracle(oracle_rows, fig1_kernel, alpha0):
    for rec in oracle_rows[alpha0][1:]:
        assert math.exp(survival_log_prob(fig1_kernel, alpha0, rec.N)) == pytest.approx(rec.P, rel=1e-6)
        assert fidelity_to_target(fig1_kernel, alpha0, rec.N) == pytest.approx(rec.fidelity, rel=1e-6)
        assert mean_quanta(fig1_kernel, alpha0, rec.N) == pytest.approx(rec.mean_quanta, rel=1e-6)


def test_linear_zeta_form_disagrees_with_oracle(oracle_rows, fig1_kernel):
    # the alternative |zeta|/(1-|zeta|^2) reading is off by tens of percent
    rec = oracle_rows[0.0][5]
    assert abs(mean_quanta_linear_zeta(fig1_kernel, 0.0, 5) / rec.mean_quanta - 1) > 0.1


def test_fidelity_to_one_and_quanta_plateau(fig1_kernel):
    t = target_squeeze(fig1_kernel)
    assert fidelity_to_target(fig1_kernel, 1.0, 200) == pytest.approx(1.0, abs=1e-12)
    assert fidelity_to_target(fig1_kernel, 0.0, 200) == pytest.approx(1.0, abs=1e-12)
    assert mean_quanta(fig1_kernel, 0.0, 200) == pytest.approx(t.mean_quanta, abs=1e-12)


def test_overlap_identical_squeezed_vacua():
    assert squeezed_overlap_sq(0.7, 1.1, 0.7, 1.1, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_overlap_of_vacuum_with_coherent():
    a = 0.8 - 0.5j
    assert squeezed_overlap_sq(0.0, 0.0, 0.0, 0.0, a) == pytest.approx(math.exp(-abs(a) ** 2), rel=1e-14)


@pytest.mark.parametrize("r,phi,rN,phiN,alpha", [
    (0.6, -2.3, 0.4, 0.5, 0.7 + 0.3j),
    (0.2, 1.0, 0.9, -1.2, -1.1j),
    (0.0, 0.0, 0.5, 2.0, 1.5),
])
def test_overlap_formula_against_fock_vectors(r, phi, rN, phiN, alpha):
    tgt = squeezed_vacuum_vector(r * cmath.exp(1j * phi), 120).entries
    st_ = squeezed_coherent_vector(alpha, rN * cmath.exp(1j * phiN), 120).entries
    ref = abs(np.vdot(tgt, st_)) ** 2
    assert squeezed_overlap_sq(r, phi, rN, phiN, alpha) == pytest.approx(ref, rel=1e-9)


def test_distill_series_rows_match_single_ops(fig1_kernel):
    rows = distill_series(fig1_kernel, 1.0, 12)
    assert [r.N for r in rows] == list(range(1, 13))
    for r in (rows[0], rows[5], rows[11]):
        assert r.logP == survival_log_prob(fig1_kernel, 1.0, r.N)
        assert r.fidelity == fidelity_to_target(fig1_kernel, 1.0, r.N)
        assert r.mean_quanta == mean_quanta(fig1_kernel, 1.0, r.N)


def test_zero_amplitude_stays_undisplaced(fig1_kernel):
    assert all(r.state.alpha == 0 for r in distill_series(fig1_kernel, 0.0, 10))


def test_zeno_series_freezes_probe():
    rows = zeno_series(1.0, 0.4, 0.9 * math.pi, [2 ** k for k in range(4, 13)], 1.0)
    loss = [1 - r.P for r in rows]
    assert all(b < a for a, b in zip(loss, loss[1:]))
    assert loss[-1] <= 1e-3
    assert rows[-1].fidelity >= 0.999


def test_zeno_vacuum_stays_vacuum():
    rows = zeno_series(1.0, 0.4, 0.9 * math.pi, [4096], 0.0)
    assert rows[0].fidelity == pytest.approx(1.0, abs=1e-6)


def test_zeno_row_flags_degenerate_step():
    rows = zeno_series(1.0, 0.4, 4 * math.pi, [1, 2, 3], 1.0)
    assert rows[0].regime == "degenerate" and rows[1].regime == "degenerate"
    assert math.isnan(rows[0].logP)
    assert rows[2].regime == "distilling"


def test_zeno_series_rejects_nonpositive_time():
    with pytest.raises(ValueError):
        zeno_series(1.0, 0.4, 0.0, [1])


def test_zeno_finite_N_against_oracle():
    from zeno_distill.oracle import coherent_vector, projected_v_matrix
    N, t = 64, 0.9 * math.pi
    p = SystemParams(t / N, 1.0, 0.4)
    V = projected_v_matrix(p, 60, 64)
    psi = coherent_vector(1.0, 60).entries
    for _ in range(N):
        psi = V @ psi
    P = float(np.vdot(psi, psi).real)
    beta = coherent_vector(cmath.exp(-1j * t), 60).entries
    fid = abs(np.vdot(beta, psi)) ** 2 / P
    row = zeno_series(1.0, 0.4, t, [N], 1.0)[0]
    assert row.P == pytest.approx(P, rel=1e-6)
    assert row.fidelity == pytest.approx(fid, rel=1e-6)


finite = st.builds(SystemParams, tau_bar=st.floats(0.1, 6.1), g_bar=st.floats(0.1, 2.5),
                   dp_bar=st.floats(0.1, 1.5))


@settings(max_examples=1000, deadline=None)
@given(finite, st.integers(1, 300), st.complex_numbers(max_magnitude=4))
def test_fidelity_in_unit_interval(p, N, alpha):
    k = derive_kernel(p, strict=False)
    if k.regime is not Regime.DISTILLING:
        return
    rec = distill_record(k, alpha, N)
    assert 0.0 <= rec.fidelity <= 1.0
    assert rec.mean_quanta >= 0.0
    assert rec.logP <= 1e-10
