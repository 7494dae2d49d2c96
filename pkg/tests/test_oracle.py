import math

import numpy as np
import pytest
from scipy.stats import poisson

from zeno_distill import FIG1, GapTooSmall, QuadratureNotConverged, SystemParams, TruncationTooSmall, target_squeeze
from zeno_distill.oracle import (coherent_density, coherent_vector, displacement_matrix,
                                 dominant_mode, fixed_momentum_hamiltonian, interior_norm,
                                 ladder_matrices, oracle_observables, oracle_series,
                                 projected_v_matrix, squeeze_matrix, squeezed_vacuum_vector,
                                 u_p_exact, u_p_factored)


def test_ladder_small():
    a, ad = ladder_matrices(2)
    assert np.array_equal(a, np.array([[0, 1], [0, 0]], dtype=complex))
    assert np.array_equal(ad, a.T)


def test_commutator_truncation_corner():
    a, ad = ladder_matrices(12)
    comm = a @ ad - ad @ a
    expected = np.eye(12)
    expected[-1, -1] = -11
    assert np.allclose(comm, expected)
    assert np.allclose(np.diag(ad @ a).real, np.arange(12))


@pytest.mark.parametrize("method", ["elements", "expm"])
def test_displacement_zero_is_identity(method):
    assert np.allclose(displacement_matrix(0.0, 30, method=method), np.eye(30), atol=1e-15)


@pytest.mark.parametrize("method", ["elements", "expm"])
def test_displaced_vacuum_is_poisson(method):
    col = displacement_matrix(1.0, 80, method=method)[:, 0]
    n = np.arange(21)
    assert np.abs(np.abs(col[:21]) ** 2 - poisson.pmf(n, 1.0)).max() <= 1e-10


def test_displacement_methods_agree_in_interior():
    A = displacement_matrix(1.3 - 0.4j, 80, method="elements")
    B = displacement_matrix(1.3 - 0.4j, 80, method="expm")
    assert np.abs(A - B)[:50, :50].max() <= 1e-10


def test_expm_displacement_gate_trips_when_too_small():
    with pytest.raises(TruncationTooSmall):
        displacement_matrix(3.0, 16, method="expm")


def test_squeezed_vacuum_even_parity():
    S = squeeze_matrix(0.4 + 0.3j, 60, interior=5)
    assert np.abs(S[1::2, 0]).max() < 1e-15
    v = squeezed_vacuum_vector(0.4 + 0.3j, 60)
    assert np.abs(S[:, 0] - v.entries)[:40].max() <= 1e-10
    assert v.tail < 1e-12


def test_coherent_vector_tail():
    v = coherent_vector(2.0, 30)
    assert v.tail == pytest.approx(poisson.sf(29, 4.0), rel=1e-6)


def test_u_factored_zero_momentum_is_rotation():
    U = u_p_factored(FIG1, 0.0, 0.7, 20)
    assert np.allclose(U, np.diag(np.exp(-0.7j * (np.arange(20) + 0.5))), atol=1e-15)


def test_u_factored_decoupled():
    p = SystemParams(1.0, 0.0, 0.4)
    U = u_p_factored(p, 0.8, 0.7, 20)
    expected = np.exp(-0.5j * 0.64 * 0.7) * np.diag(np.exp(-0.7j * (np.arange(20) + 0.5)))
    assert np.allclose(U, expected, atol=1e-15)


def test_u_exact_identity_at_zero_time():
    assert np.allclose(u_p_exact(FIG1, 1.0, 0.0, 30), np.eye(30), atol=1e-12)


def test_hamiltonian_hermitian():
    H = fixed_momentum_hamiltonian(FIG1, 0.6, 30)
    assert np.allclose(H, H.conj().T)


def test_factorization_one_point():
    d = u_p_exact(FIG1, 0.7, FIG1.tau_bar, 120) - u_p_factored(FIG1, 0.7, FIG1.tau_bar, 120)
    assert interior_norm(d, 100) <= 1e-8


def test_unpadded_exact_propagator_is_polluted():
    d = u_p_exact(FIG1, 2.0, 2.5, 120, pad=0, check=False) - u_p_factored(FIG1, 2.0, 2.5, 120, check=False)
    assert interior_norm(d, 100) > 1e-3


def test_v_is_contraction(fig1_V):
    assert np.linalg.norm(fig1_V, 2) <= 1 + 1e-8


def test_v_decoupled_is_scalar_rotation():
    p = SystemParams(0.9, 0.0, 0.4)
    V = projected_v_matrix(p, 30)
    scalar = 1 / np.sqrt(1 + 1j * 0.16 * 0.9)
    assert np.allclose(V, scalar * np.diag(np.exp(-0.9j * (np.arange(30) + 0.5))), atol=1e-13)
    with pytest.raises(GapTooSmall):
        dominant_mode(V)


def test_low_quadrature_order_trips_gate():
    with pytest.raises(QuadratureNotConverged):
        projected_v_matrix(FIG1, 80, 2)


def test_oracle_at_zero_steps(fig1_V, fig1_kernel):
    xi = squeezed_vacuum_vector(target_squeeze(fig1_kernel).xi, 80).entries
    rho = coherent_density(1.0, 80)
    P, F, n = oracle_observables(fig1_V, rho, 0, xi)
    assert P == 1.0
    assert F == pytest.approx(abs(np.vdot(xi, coherent_vector(1.0, 80).entries)) ** 2)
    assert n == pytest.approx(1.0, abs=1e-12)


def test_oracle_probability_non_increasing(fig1_V):
    recs = oracle_series(fig1_V, coherent_density(2.0, 80), 15)
    assert all(b.P <= a.P for a, b in zip(recs, recs[1:]))


def test_leakage_gate():
    V = projected_v_matrix(FIG1, 16, 64)
    with pytest.raises(TruncationTooSmall):
        oracle_series(V, coherent_density(1.0, 16), 3)


def test_dominant_mode_is_target(fig1_V, fig1_kernel):
    dm = dominant_mode(fig1_V)
    xi = squeezed_vacuum_vector(target_squeeze(fig1_kernel).xi, 80).entries
    assert abs(np.vdot(xi, dm.vector)) ** 2 >= 1 - 1e-6
    assert abs(dm.eigenvalue) < 1
    assert dm.gap > 0
    resid = fig1_V @ xi - np.vdot(xi, fig1_V @ xi) * xi
    assert np.linalg.norm(resid) <= 1e-6


def test_dominant_eigenvalue_is_M_sqrt_lambda(fig1_V, fig1_kernel):
    # V|xi> = M lambda^{1/2} |xi> up to the square-root sign
    mu = dominant_mode(fig1_V).eigenvalue
    ref = fig1_kernel.M * np.sqrt(fig1_kernel.lam)
    assert min(abs(mu - ref), abs(mu + ref)) <= 1e-10


def test_truncation_audit(fig1_kernel):
    xi80 = squeezed_vacuum_vector(target_squeeze(fig1_kernel).xi, 80).entries
    xi120 = squeezed_vacuum_vector(target_squeeze(fig1_kernel).xi, 120).entries
    a = oracle_series(projected_v_matrix(FIG1, 80, 64), coherent_density(1.0, 80), 10, xi80)
    b = oracle_series(projected_v_matrix(FIG1, 120, 128, gate_dim=60), coherent_density(1.0, 120), 10, xi120)
    for x, y in zip(a, b):
        assert abs(x.P - y.P) < 1e-8
        assert abs(x.fidelity - y.fidelity) < 1e-8
        assert abs(x.mean_quanta - y.mean_quanta) < 1e-8
