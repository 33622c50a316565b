# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: cyclic Jacobi for real symmetric matrices, the
degree-4 characteristic polynomial, and the gamma invariant product.

Drop-in replacements for the pure-Python versions in ``pure.py``; the
package falls back to those automatically when this extension is absent.
"""

import numpy as np

cimport cython
cimport numpy as cnp
from libc.math cimport atan2, cos, fabs, sin

cnp.import_array()


def jacobi_real_sym(a, double tol=1e-13, int max_sweeps=60):
    """Eigencomposition of a small real symmetric matrix by cyclic Jacobi.

    Returns (w, v) with eigenvalues w (unsorted) and eigenvectors in the
    columns of v.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] m = np.array(a, dtype=np.float64, order="C")
    cdef int n = m.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] v = np.eye(n, dtype=np.float64)
    cdef int sweep, p, q, k
    cdef double off, app, aqq, apq, phi, c, s, akp, akq, vkp, vkq, scale

    scale = 0.0
    for p in range(n):
        for q in range(n):
            if fabs(m[p, q]) > scale:
                scale = fabs(m[p, q])
    if scale == 0.0:
        return np.zeros(n), v

    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += fabs(m[p, q])
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if fabs(apq) <= tol * scale * 1e-3:
                    continue
                app = m[p, p]
                aqq = m[q, q]
                phi = 0.5 * atan2(2.0 * apq, aqq - app)
                c = cos(phi)
                s = sin(phi)
                for k in range(n):
                    akp = m[k, p]
                    akq = m[k, q]
                    m[k, p] = c * akp - s * akq
                    m[k, q] = s * akp + c * akq
                for k in range(n):
                    akp = m[p, k]
                    akq = m[q, k]
                    m[p, k] = c * akp - s * akq
                    m[q, k] = s * akp + c * akq
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq

    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    for p in range(n):
        w[p] = m[p, p]
    return w, v


def charpoly4(m):
    """Coefficients (a0..a4) of det(xI - m) for a 4x4 complex matrix,
    via trace power sums (Faddeev-LeVerrier recursion)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.ascontiguousarray(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a2 = a @ a
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a3 = a2 @ a
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a4 = a3 @ a
    cdef double complex p1 = 0, p2 = 0, p3 = 0, p4 = 0
    cdef int i
    for i in range(4):
        p1 += a[i, i]
        p2 += a2[i, i]
        p3 += a3[i, i]
        p4 += a4[i, i]
    cdef double complex c3 = -p1
    cdef double complex c2 = -(p2 + c3 * p1) / 2.0
    cdef double complex c1 = -(p3 + c3 * p2 + c2 * p1) / 3.0
    cdef double complex c0 = -(p4 + c3 * p3 + c2 * p2 + c1 * p1) / 4.0
    out = np.empty(5, dtype=np.complex128)
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3
    out[4] = 1.0
    return out


_SYY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


def gamma4(u):
    """u (sigma_y x sigma_y) u^T (sigma_y x sigma_y) for a 4x4 matrix."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.ascontiguousarray(u, dtype=np.complex128)
    return a @ _SYY @ a.T @ _SYY
