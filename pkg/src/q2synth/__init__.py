"""Minimal two-qubit circuit synthesis, classification, and rewriting.

Decomposes arbitrary two-qubit unitaries into circuits with exactly three
CNOTs over several one-qubit gate libraries, classifies operators by their
local-equivalence invariants and CNOT cost, and simplifies circuits with a
verified rewrite-rule engine.
"""

from ._kernels import BACKEND_NAME
from .circuit import (
    CNOT,
    Axis,
    Circuit,
    Generic1Q,
    Rotation,
    Swap,
    circuit_to_text,
    euler_decompose,
    gate_matrix,
    parse_circuit,
    simulate,
    su4_normalize,
    tensor_factor,
    to_qasm,
    wrap_angle,
)
from .errors import (
    CircuitParseError,
    CosetMismatch,
    NoMatch,
    NotLocal,
    NotSymmetricUnitary,
    NotUnitary,
    Q2SynthError,
    UnsupportedGate,
    VerificationFailed,
)
from .invariants import (
    InvariantData,
    cnot_cost,
    cnot_lower_bound,
    gamma,
    invariant_data,
    same_double_coset,
    same_left_coset,
)
from .numerics import (
    CharPoly4,
    charpoly4,
    diagonalize_symmetric_unitary,
    haar_unitary,
    is_special_unitary,
    is_unitary,
    kron,
    phase_distance,
)
from .rewrite import (
    RULES,
    ReductionTrace,
    RewriteRule,
    apply_rule,
    effectively_separated,
    reduce,
    replay,
)
from .synthesis import (
    CXZCore,
    CYZCore,
    GateLibrary,
    SynthesisResult,
    core_params_cxz,
    core_params_cyz,
    cyz_core_circuit,
    enumerate_circuits,
    match_local_factors,
    synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BACKEND_NAME",
    "CNOT",
    "CXZCore",
    "CYZCore",
    "CharPoly4",
    "Circuit",
    "CircuitParseError",
    "CosetMismatch",
    "GateLibrary",
    "Generic1Q",
    "InvariantData",
    "NoMatch",
    "NotLocal",
    "NotSymmetricUnitary",
    "NotUnitary",
    "Q2SynthError",
    "ReductionTrace",
    "RewriteRule",
    "Rotation",
    "RULES",
    "Swap",
    "SynthesisResult",
    "UnsupportedGate",
    "VerificationFailed",
    "apply_rule",
    "charpoly4",
    "circuit_to_text",
    "cnot_cost",
    "cnot_lower_bound",
    "core_params_cxz",
    "core_params_cyz",
    "cyz_core_circuit",
    "diagonalize_symmetric_unitary",
    "effectively_separated",
    "enumerate_circuits",
    "euler_decompose",
    "gamma",
    "gate_matrix",
    "haar_unitary",
    "invariant_data",
    "is_special_unitary",
    "is_unitary",
    "kron",
    "match_local_factors",
    "parse_circuit",
    "phase_distance",
    "reduce",
    "replay",
    "same_double_coset",
    "same_left_coset",
    "simulate",
    "su4_normalize",
    "synthesize",
    "tensor_factor",
    "to_qasm",
    "wrap_angle",
    "__version__",
]
