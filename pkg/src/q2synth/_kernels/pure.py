"""NumPy implementations of the dense hot-path kernels.

The compiled extension in ``_fast`` exports the same three callables with
identical semantics; either module can serve as the active backend (selection
happens in the subpackage ``__init__``).  Everything here works on plain
float64/complex128 arrays of size 2x2 .. 4x4.
"""

import numpy as np

_SYY = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=np.complex128,
)


def jacobi_real_sym(a, tol=1e-13, max_sweeps=60):
    """Cyclic Jacobi diagonalization of a small real symmetric matrix.

    Returns ``(w, v)`` with the columns of ``v`` orthonormal eigenvectors and
    ``v.T @ a @ v`` diagonal to ``tol`` (relative to the largest entry).
    Eigenvalues come back in whatever order the sweeps leave them; callers
    impose their own ordering.
    """
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(1.0, float(np.abs(a).max()))
    for _ in range(max_sweeps):
        off = np.sqrt((np.tril(a, -1) ** 2).sum())
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if tau >= 0:
                    t = 1.0 / (tau + np.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    return np.diag(a).copy(), v


def charpoly4(m):
    """Coefficients a_0..a_4 of det(X*I - m) for a 4x4 matrix, a_4 = 1.

    Faddeev-LeVerrier recurrence; exact in the number of operations, no
    eigensolver involved.
    """
    m = np.asarray(m, dtype=np.complex128)
    n = m.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    coeffs[n] = 1.0
    acc = np.zeros_like(m)
    for k in range(1, n + 1):
        acc = m @ acc + coeffs[n - k + 1] * np.eye(n)
        coeffs[n - k] = -np.trace(m @ acc) / k
    return coeffs


def gamma4(u):
    """u @ (sigma_y (x) sigma_y) @ u.T @ (sigma_y (x) sigma_y) for 4x4 u."""
    u = np.asarray(u, dtype=np.complex128)
    return u @ _SYY @ u.T @ _SYY
