"""Two-qubit gate and circuit model.

Gates live on wires 0 and 1, where qubit 0 is the top wire and the left
Kronecker factor.  Circuits are immutable gate tuples applied in index order
(index 0 first), so the simulator multiplies later gates on the left.
Also here: Euler decompositions for arbitrary orthogonal axis pairs, tensor
factorization of local operators, SU(4) normalization, and the text/QASM
serializations used by the CLI.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import numerics as nm
from .errors import CircuitParseError, NotLocal, NotUnitary


class Axis(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


_PAULI = {Axis.X: nm.SIGMA_X, Axis.Y: nm.SIGMA_Y, Axis.Z: nm.SIGMA_Z}
_AXIS_VEC = {
    Axis.X: np.array([1.0, 0.0, 0.0]),
    Axis.Y: np.array([0.0, 1.0, 0.0]),
    Axis.Z: np.array([0.0, 0.0, 1.0]),
}


def wrap_angle(theta):
    """Map an angle to the principal interval (-pi, pi]."""
    t = math.fmod(float(theta), 2.0 * math.pi)
    if t <= -math.pi:
        t += 2.0 * math.pi
    elif t > math.pi:
        t -= 2.0 * math.pi
    return t


def rotation_matrix2(axis, angle):
    """R_n(theta) = exp(-i sigma_n theta / 2) as a 2x2 matrix."""
    half = 0.5 * angle
    return math.cos(half) * nm.I2 - 1j * math.sin(half) * _PAULI[axis]


@dataclass(frozen=True)
class Rotation:
    axis: Axis
    qubit: int
    angle: float

    def __post_init__(self):
        if self.qubit not in (0, 1):
            raise ValueError("qubit must be 0 or 1")
        if not math.isfinite(self.angle):
            raise ValueError("rotation angle must be finite")


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int

    def __post_init__(self):
        if {self.control, self.target} != {0, 1}:
            raise ValueError("control and target must be distinct wires 0/1")


@dataclass(frozen=True, eq=False)
class Generic1Q:
    qubit: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.qubit not in (0, 1):
            raise ValueError("qubit must be 0 or 1")
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2) or not nm.is_unitary(m, 1e-8):
            raise NotUnitary("Generic1Q matrix must be 2x2 unitary")
        if abs(np.linalg.det(m) - 1.0) > 1e-8:
            m = m * np.exp(-0.5j * np.angle(np.linalg.det(m)))
        object.__setattr__(self, "matrix", m)

    def __eq__(self, other):
        if not isinstance(other, Generic1Q):
            return NotImplemented
        return self.qubit == other.qubit and np.array_equal(self.matrix, other.matrix)


@dataclass(frozen=True)
class Swap:
    pass


Gate = Rotation | CNOT | Generic1Q | Swap


def _on_wire(m2, qubit):
    return nm.kron(m2, nm.I2) if qubit == 0 else nm.kron(nm.I2, m2)


def gate_matrix(g):
    """The 4x4 operator of a single gate (CNOTs carry unit global phase)."""
    if isinstance(g, Rotation):
        return _on_wire(rotation_matrix2(g.axis, g.angle), g.qubit)
    if isinstance(g, CNOT):
        return nm.CNOT01 if g.control == 0 else nm.CNOT10
    if isinstance(g, Generic1Q):
        return _on_wire(g.matrix, g.qubit)
    if isinstance(g, Swap):
        return nm.SWAP_MAT
    raise TypeError("not a gate: %r" % (g,))


@dataclass(frozen=True)
class Circuit:
    gates: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def cnot_count(self):
        return sum(1 for g in self.gates if isinstance(g, CNOT))

    @property
    def one_param_count(self):
        return sum(1 for g in self.gates if isinstance(g, Rotation))

    @property
    def basic_count(self):
        """Gates counted at the CNOT + arbitrary-one-qubit level.

        Rotations and Generic1Q both count 1; a SWAP counts as its standard
        three-CNOT realization.
        """
        total = 0
        for g in self.gates:
            total += 3 if isinstance(g, Swap) else 1
        return total


def simulate(c):
    """Ordered matrix product of a circuit; later gates multiply on the left."""
    m = nm.I4.copy()
    for g in c.gates:
        m = gate_matrix(g) @ m
    return m


def su4_normalize(u):
    """Rescale a unitary to determinant one.

    Returns ``(v, phase)`` with ``v = exp(-i phase) u``, ``det v == 1`` and
    ``phase = arg(det u) / 4`` on the principal branch.
    """
    u = np.asarray(u, dtype=np.complex128)
    if not nm.is_unitary(u, 1e-8):
        raise NotUnitary("su4_normalize expects a unitary matrix")
    phase = np.angle(np.linalg.det(u)) / 4.0
    return u * np.exp(-1j * phase), float(phase)


def _su2_from_rotation(r):
    """SU(2) element realizing a 3x3 rotation matrix (quaternion lift)."""
    t = np.trace(r)
    if t > 0:
        w = math.sqrt(1.0 + t) / 2.0
        x = (r[2, 1] - r[1, 2]) / (4.0 * w)
        y = (r[0, 2] - r[2, 0]) / (4.0 * w)
        z = (r[1, 0] - r[0, 1]) / (4.0 * w)
    else:
        i = int(np.argmax(np.diag(r)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = math.sqrt(1.0 + r[i, i] - r[j, j] - r[k, k]) * 2.0
        q = [0.0, 0.0, 0.0]
        q[i] = s / 4.0
        q[j] = (r[j, i] + r[i, j]) / s
        q[k] = (r[k, i] + r[i, k]) / s
        w = (r[k, j] - r[j, k]) / s
        x, y, z = q
    return w * nm.I2 - 1j * (x * nm.SIGMA_X + y * nm.SIGMA_Y + z * nm.SIGMA_Z)


def _frame_change(outer, inner):
    """g in SU(2) with g sigma_z g^dag = sigma_outer, g sigma_y g^dag = sigma_inner."""
    zv = _AXIS_VEC[outer]
    yv = _AXIS_VEC[inner]
    xv = np.cross(yv, zv)
    return _su2_from_rotation(np.column_stack([xv, yv, zv]))


_FRAMES = {
    (o, i): _frame_change(o, i)
    for o in Axis
    for i in Axis
    if o is not i
}


def euler_decompose(u, outer, inner):
    """Angles (theta, phi, psi, phase) with
    u = exp(i phase) R_outer(theta) R_inner(phi) R_outer(psi).

    Branches are deterministic: theta/psi come from atan2 of matrix entries
    and a diagonal or anti-diagonal input sets psi = 0.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2) or not nm.is_unitary(u, 1e-8):
        raise NotUnitary("euler_decompose expects a 2x2 unitary")
    if outer is inner:
        raise ValueError("outer and inner axes must differ")

    g = _FRAMES[(outer, inner)]
    w = g.conj().T @ u @ g
    phase = np.angle(np.linalg.det(w)) / 2.0
    v = w * np.exp(-1j * phase)

    # v = Rz(theta) Ry(phi) Rz(psi):
    #   v00 = cos(phi/2) e^{-i(theta+psi)/2},  v10 = sin(phi/2) e^{i(theta-psi)/2}
    a00, a10, a11 = abs(v[0, 0]), abs(v[1, 0]), v[1, 1]
    if a10 <= 1e-12:
        theta = wrap_angle(-2.0 * np.angle(v[0, 0]))
        phi = 0.0 if a00 >= a10 else math.pi
        psi = 0.0
    elif a00 <= 1e-12:
        theta = wrap_angle(2.0 * np.angle(v[1, 0]))
        phi = math.pi
        psi = 0.0
    else:
        phi = 2.0 * math.atan2(a10, a00)
        theta = wrap_angle(np.angle(a11) + np.angle(v[1, 0]))
        psi = wrap_angle(np.angle(a11) - np.angle(v[1, 0]))

    # Wrapping theta/psi into (-pi, pi] can flip the SU(2) representative;
    # fold that sign into the returned phase.
    recon = (
        rotation_matrix2(outer, theta)
        @ rotation_matrix2(inner, phi)
        @ rotation_matrix2(outer, psi)
    )
    if np.linalg.norm(np.exp(1j * phase) * recon - u) > np.linalg.norm(
        np.exp(1j * phase) * recon + u
    ):
        phase = wrap_angle(phase + math.pi)
    return theta, phi, psi, float(phase)


def tensor_factor(g):
    """Split a local 4x4 operator into one-qubit factors.

    Requires ``g`` phase-equivalent to a Kronecker product (callers certify
    via the invariants module).  The 2x2 block of largest norm fixes the
    second factor up to scale; the first factor is recovered entrywise and
    the leftover phase is split so both determinants are one.
    """
    g = np.asarray(g, dtype=np.complex128)
    if not nm.is_unitary(g, 1e-8):
        raise NotUnitary("tensor_factor expects a unitary matrix")
    blocks = g.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    norms = np.linalg.norm(blocks, axis=(2, 3))
    bi, bj = np.unravel_index(np.argmax(norms), (2, 2))
    b = blocks[bi, bj] * (math.sqrt(2.0) / norms[bi, bj])
    a = np.tensordot(blocks, b.conj(), axes=([2, 3], [0, 1])) / 2.0
    det_a, det_b = np.linalg.det(a), np.linalg.det(b)
    if abs(det_a) < 1e-8 or abs(det_b) < 1e-8:
        raise NotLocal("matrix does not factor into one-qubit operators")
    a = a * np.exp(-0.5j * np.angle(det_a)) / math.sqrt(abs(det_a))
    b = b * np.exp(-0.5j * np.angle(det_b))
    err = nm.phase_distance(nm.kron(a, b), g)
    if err > 1e-9:
        raise NotLocal("best tensor factorization misses by %.3g" % err)
    return a, b


# --- serialization ---------------------------------------------------------

def _fmt(x):
    return "%.17g" % float(x)


def gate_to_text(g):
    if isinstance(g, Rotation):
        return "R%s %d %s" % (g.axis.value.upper(), g.qubit, _fmt(g.angle))
    if isinstance(g, CNOT):
        return "CNOT %d %d" % (g.control, g.target)
    if isinstance(g, Generic1Q):
        flat = " ".join(_fmt(p) for z in g.matrix.ravel() for p in (z.real, z.imag))
        return "U3 %d %s" % (g.qubit, flat)
    if isinstance(g, Swap):
        return "SWAP"
    raise TypeError("not a gate: %r" % (g,))


def circuit_to_text(c):
    return "\n".join(gate_to_text(g) for g in c.gates) + ("\n" if c.gates else "")


def parse_circuit(text):
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        op = parts[0].upper()
        try:
            if op in ("RX", "RY", "RZ"):
                gates.append(Rotation(Axis(op[1].lower()), int(parts[1]), float(parts[2])))
            elif op == "CNOT":
                gates.append(CNOT(int(parts[1]), int(parts[2])))
            elif op == "U3":
                vals = [float(p) for p in parts[2:]]
                if len(vals) != 8:
                    raise ValueError("U3 needs 8 floats")
                m = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
                gates.append(Generic1Q(int(parts[1]), m.reshape(2, 2)))
            elif op == "SWAP":
                gates.append(Swap())
            else:
                raise ValueError("unknown gate %r" % op)
        except (ValueError, IndexError, NotUnitary) as exc:
            raise CircuitParseError("line %d: %s" % (lineno, exc)) from exc
    return Circuit(tuple(gates))


def to_qasm(c):
    """OpenQASM-2 text for a circuit (generic gates become u3 via Euler angles)."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', "qreg q[2];"]
    for g in c.gates:
        if isinstance(g, Rotation):
            lines.append("r%s(%s) q[%d];" % (g.axis.value, _fmt(g.angle), g.qubit))
        elif isinstance(g, CNOT):
            lines.append("cx q[%d],q[%d];" % (g.control, g.target))
        elif isinstance(g, Generic1Q):
            th, ph, ps, _ = euler_decompose(g.matrix, Axis.Z, Axis.Y)
            lines.append("u3(%s,%s,%s) q[%d];" % (_fmt(ph), _fmt(th), _fmt(ps), g.qubit))
        elif isinstance(g, Swap):
            lines.append("swap q[0],q[1];")
    return "\n".join(lines) + "\n"
