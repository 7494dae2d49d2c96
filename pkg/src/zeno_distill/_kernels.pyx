# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the Fock oracle; same contracts as _fallback."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sqrt, lgamma, fabs

cnp.import_array()


cdef void _accumulate(double complex[:, ::1] out, double complex amp,
                      double complex coeff, int dim) nogil:
    cdef double mod = sqrt(amp.real * amp.real + amp.imag * amp.imag)
    cdef double x = mod * mod
    cdef double complex u, lo_ph, up_ph
    cdef double f0, fm1, fm2, fn, logm
    cdef int k, n
    if mod > 0:
        u = amp / mod
        logm = log(mod)
    else:
        u = 1.0
        logm = 0.0
    lo_ph = coeff
    up_ph = coeff
    for k in range(dim):
        if mod > 0:
            f0 = exp(k * logm - 0.5 * lgamma(k + 1.0) - 0.5 * x)
        else:
            f0 = 1.0 if k == 0 else 0.0
        out[k, 0] += lo_ph * f0
        if k:
            out[0, k] += up_ph * f0
        if k + 1 < dim:
            fm2 = f0
            fm1 = f0 * sqrt(1.0 / (1.0 + k)) * (1.0 + k - x)
            out[k + 1, 1] += lo_ph * fm1
            if k:
                out[1, k + 1] += up_ph * fm1
            for n in range(2, dim - k):
                fn = ((2 * n - 1 + k - x) * sqrt(n / (n + <double>k)) * fm1
                      - (n - 1 + k) * sqrt(n * (n - 1.0) / ((n + <double>k) * (n + k - 1.0))) * fm2) / n
                out[n + k, n] += lo_ph * fn
                if k:
                    out[n, n + k] += up_ph * fn
                fm2 = fm1
                fm1 = fn
        lo_ph = lo_ph * u
        up_ph = up_ph * (-u.conjugate())


def displacement_elements(alpha, int dim):
    out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] view = out
    _accumulate(view, complex(alpha), 1.0, dim)
    return out


def projected_sum(beta, p_nodes, coeffs, int dim):
    cdef double[::1] p = np.ascontiguousarray(p_nodes, dtype=np.float64)
    cdef double complex[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double complex b = complex(beta)
    out = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] view = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(p.shape[0]):
            _accumulate(view, p[j] * b, c[j], dim)
    return out
