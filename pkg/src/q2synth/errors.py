"""Exception hierarchy shared across the package."""


class Q2SynthError(Exception):
    """Base class for all package-specific errors."""


class NotUnitary(Q2SynthError):
    """Input matrix is not unitary within tolerance."""


class NotSymmetricUnitary(Q2SynthError):
    """Matrix handed to the simultaneous diagonalizer is not symmetric unitary."""


class NotLocal(Q2SynthError):
    """Matrix is not a tensor product of one-qubit operators within tolerance."""


class CosetMismatch(Q2SynthError):
    """Operators do not share a local-equivalence class; factors cannot be matched."""


class VerificationFailed(Q2SynthError):
    """A synthesized circuit failed to reproduce its target within tolerance."""


class NoMatch(Q2SynthError):
    """Rewrite rule pattern does not match at the requested position."""


class UnsupportedGate(Q2SynthError):
    """Circuit contains a gate outside the set supported by the operation."""


class CircuitParseError(Q2SynthError):
    """Circuit or matrix text could not be parsed."""
