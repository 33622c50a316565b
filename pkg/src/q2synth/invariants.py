"""Local-equivalence invariants and CNOT-cost classification.

The central object is the invariant gamma(u) = u (sy x sy) u^T (sy x sy).
It is constant on left cosets of the local subgroup SU(2) x SU(2), its
characteristic polynomial chi[gamma] is constant on double cosets, and both
drive the classifier that predicts how many CNOT gates an operator needs.

Representatives of the same physical operator in SU(4) differ by 4th roots
of unity, under which gamma picks up a factor of +-1; every comparison here
therefore admits an optional global sign on gamma (strict=True disables it).
"""

from dataclasses import dataclass

import numpy as np

from . import numerics as nm
from ._kernels import gamma4
from .circuit import su4_normalize
from .errors import NotUnitary

# chi[gamma] of an SU(4)-normalized CNOT: spectrum {i, i, -i, -i}.
CNOT_CHI = nm.CharPoly4((1.0, 0.0, 2.0, 0.0, 1.0))

_SIGN_FLIP = np.array([1.0, -1.0, 1.0, -1.0, 1.0])


def gamma(u, tol=1e-8):
    """u @ (sigma_y x sigma_y) @ u.T @ (sigma_y x sigma_y).

    Callers wanting coset semantics normalize u into SU(4) first.
    """
    u = np.asarray(u, dtype=np.complex128)
    if not nm.is_unitary(u, tol):
        raise NotUnitary("gamma expects a unitary matrix")
    return gamma4(u)


@dataclass(frozen=True)
class InvariantData:
    gamma: np.ndarray
    chi: nm.CharPoly4
    trace: complex
    spectrum: np.ndarray


def invariant_data(u, tol=1e-8):
    """gamma, its characteristic polynomial, trace, and spectrum.

    The spectrum comes from the symmetric form in the magic basis: with
    ut = E^dag u E, the matrix ut @ ut.T equals E^dag gamma(u) E, so its
    eigenvalues (computed by the two-stage real diagonalization) are exactly
    the eigenvalues of gamma(u), in canonical order.
    """
    g = gamma(u, tol)
    ut = nm.MAGIC.conj().T @ np.asarray(u, dtype=np.complex128) @ nm.MAGIC
    _, spectrum = nm.diagonalize_symmetric_unitary(ut @ ut.T, tol=tol)
    return InvariantData(
        gamma=g,
        chi=nm.charpoly4(g),
        trace=complex(np.trace(g)),
        spectrum=spectrum,
    )


def _flip_chi(coeffs):
    """Coefficients of chi[-m] given those of chi[m] (degree 4)."""
    return np.asarray(coeffs) * _SIGN_FLIP


def same_left_coset(u, v, tol=1e-8, strict=False):
    """Whether u and v differ by a right local factor: u = v (a x b).

    Equivalent to gamma(u) == gamma(v); unless ``strict``, equality is taken
    up to the global +-1 absorbing the SU(4) representative freedom.
    """
    for m in (u, v):
        if not nm.is_special_unitary(m, tol * 10):
            raise NotUnitary("same_left_coset expects special-unitary inputs")
    gu, gv = gamma4(np.asarray(u, np.complex128)), gamma4(np.asarray(v, np.complex128))
    if np.linalg.norm(gu - gv) <= tol:
        return True
    if strict:
        return False
    return bool(np.linalg.norm(gu + gv) <= tol)


def same_double_coset(u, v, tol=1e-8, strict=False):
    """Whether u and v differ by local factors on both sides.

    Equivalent to chi[gamma(u)] == chi[gamma(v)], again up to the +-1 sign
    on gamma unless ``strict`` (the sign alternates the odd coefficients).
    """
    for m in (u, v):
        if not nm.is_special_unitary(m, tol * 10):
            raise NotUnitary("same_double_coset expects special-unitary inputs")
    cu = nm.charpoly4(gamma4(np.asarray(u, np.complex128))).as_array()
    cv = nm.charpoly4(gamma4(np.asarray(v, np.complex128))).as_array()
    if np.allclose(cu, cv, atol=tol):
        return True
    if strict:
        return False
    return bool(np.allclose(cu, _flip_chi(cv), atol=tol))


def cnot_cost(u, tol=1e-8):
    """Minimal number of CNOTs needed to realize u with one-qubit gates.

    0: gamma is +-identity (u is local up to phase).
    1: chi[gamma] matches the CNOT class.
    2: trace of gamma is real (chi has all-real coefficients).
    3: everything else -- almost every operator.
    """
    u = np.asarray(u, dtype=np.complex128)
    if not nm.is_unitary(u, tol):
        raise NotUnitary("cnot_cost expects a unitary matrix")
    v, _ = su4_normalize(u)
    g = gamma4(v)
    if min(np.linalg.norm(g - nm.I4), np.linalg.norm(g + nm.I4)) <= tol:
        return 0
    chi = nm.charpoly4(g).as_array()
    if np.allclose(chi, CNOT_CHI.as_array(), atol=tol):
        return 1
    if abs(np.trace(g).imag) <= tol:
        return 2
    return 3


def cnot_lower_bound(n):
    """ceil((4^n - 3n - 1) / 4): CNOTs required by almost all n-qubit operators."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    m = 4**n - 3 * n - 1
    return (m + 3) // 4
