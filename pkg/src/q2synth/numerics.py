"""Fixed-size complex linear algebra.

Everything operates on 2x2 and 4x4 complex128 NumPy arrays: Kronecker
products, 4x4 characteristic polynomials, simultaneous diagonalization of
symmetric unitary matrices, and the phase-blind distance used for circuit
verification.  Matrix constants used throughout the package live here.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import charpoly4 as _charpoly4_raw
from ._kernels import jacobi_real_sym
from .errors import NotSymmetricUnitary, NotUnitary

I2 = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

I4 = np.eye(4, dtype=np.complex128)

# Controlled-NOT permutation matrices, unit global phase.  Qubit 0 is the
# left Kronecker factor (top wire); CNOT01 has control 0 / target 1.
CNOT01 = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
CNOT10 = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
)
SWAP_MAT = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)
CZ_MAT = np.diag([1, 1, 1, -1]).astype(np.complex128)

SYY = np.kron(SIGMA_Y, SIGMA_Y)

# The fixed change of basis under which tensor products of one-qubit special
# unitaries become real orthogonal matrices.  Satisfies E @ E.T == -SYY.
MAGIC = (
    np.array(
        [
            [1, 1j, 0, 0],
            [0, 0, 1j, 1],
            [0, 0, 1j, -1],
            [1, -1j, 0, 0],
        ],
        dtype=np.complex128,
    )
    / np.sqrt(2)
)


def kron(a, b):
    """Kronecker product; qubit 0 is the left factor."""
    return np.kron(np.asarray(a), np.asarray(b))


def is_unitary(m, tol=1e-9):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or not np.all(np.isfinite(m.real)):
        return False
    return np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) <= tol


def is_special_unitary(m, tol=1e-9):
    return is_unitary(m, tol) and abs(np.linalg.det(np.asarray(m)) - 1.0) <= tol


def _require_unitary(m, tol=1e-8):
    if not is_unitary(m, tol):
        raise NotUnitary("matrix is not unitary within tol=%g" % tol)


@dataclass(frozen=True)
class CharPoly4:
    """Monic degree-4 characteristic polynomial det(X*I - M).

    ``coeffs`` holds (a_0, a_1, a_2, a_3, a_4) with a_4 == 1; for M in SU(4)
    the coefficients satisfy a_0 == 1 and conj(a_i) == a_{4-i}.
    """

    coeffs: tuple

    def as_array(self):
        return np.array(self.coeffs, dtype=np.complex128)

    def close_to(self, other, tol=1e-9):
        return bool(np.allclose(self.as_array(), other.as_array(), atol=tol))


def charpoly4(m):
    """Characteristic polynomial of a 4x4 matrix via the trace recurrence."""
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError("charpoly4 expects a 4x4 matrix, got shape %r" % (m.shape,))
    return CharPoly4(tuple(_charpoly4_raw(m)))


def diagonalize_symmetric_unitary(p, tol=1e-8, cluster_tol=1e-8):
    """Diagonalize a symmetric unitary matrix by a real orthogonal one.

    Returns ``(q, d)`` with ``q`` real orthogonal, ``det(q) = +1``, and
    ``q @ p @ q.T`` equal to ``diag(d)`` within tolerance.  The rows of ``q``
    are the eigenvectors.  Eigenvalues are returned in canonical order:
    ascending principal argument in (-pi, pi], ties kept stable.

    Works because the real and imaginary parts of a symmetric unitary
    commute, hence share an orthonormal eigenbasis: Re(p) is Jacobi
    diagonalized first, then Im(p) restricted to each eigenvalue cluster of
    Re(p) (cluster tolerance relative).
    """
    p = np.asarray(p, dtype=np.complex128)
    if np.linalg.norm(p - p.T) > tol * 10:
        raise NotSymmetricUnitary("matrix is not symmetric within tol")
    if not is_unitary(p, tol * 10):
        raise NotSymmetricUnitary("matrix is not unitary within tol")

    n = p.shape[0]
    x = np.ascontiguousarray(p.real)
    y = np.ascontiguousarray(p.imag)

    wx, v = jacobi_real_sym(x)
    order = np.argsort(wx, kind="stable")
    wx = wx[order]
    v = v[:, order]

    i = 0
    while i < n:
        j = i + 1
        while j < n and wx[j] - wx[j - 1] <= cluster_tol * max(1.0, abs(wx[j])):
            j += 1
        if j - i > 1:
            blk = v[:, i:j]
            yb = blk.T @ y @ blk
            yb = (yb + yb.T) / 2.0
            _, rot = jacobi_real_sym(yb)
            v[:, i:j] = blk @ rot
        i = j

    d = np.einsum("ji,jk,ki->i", v, p, v)
    ang = np.angle(d)
    idx = np.argsort(ang, kind="stable")
    v = v[:, idx]
    d = d[idx]
    if np.linalg.det(v) < 0:
        v[:, 0] = -v[:, 0]
    return v.T.copy(), d


def phase_distance(u, v):
    """min over phi of ||exp(i phi) u - v||_F for unitary u, v.

    The optimum is attained at phi = -arg(tr(v^dag u)); the norm is then
    evaluated directly so the result is meaningful down to machine precision
    (the closed form sqrt(2n - 2|tr|) loses half the digits to cancellation).
    """
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    t = np.trace(v.conj().T @ u)
    phi = 0.0 if t == 0 else -np.angle(t)
    return float(np.linalg.norm(np.exp(1j * phi) * u - v))


def haar_unitary(n, rng):
    """Haar-distributed n x n unitary from a seeded NumPy Generator.

    QR of a complex Gaussian matrix with the R diagonal phase-fixed; the same
    generator state always yields the same matrix.
    """
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    dia = np.diag(r)
    return q @ np.diag(dia / np.abs(dia))
