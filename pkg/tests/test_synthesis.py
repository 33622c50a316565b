import math

import numpy as np
import pytest

from q2synth import numerics as nm
from q2synth.circuit import (
    CNOT,
    Axis,
    Generic1Q,
    Rotation,
    simulate,
    su4_normalize,
)
from q2synth.errors import CosetMismatch, NotUnitary, VerificationFailed
from q2synth.invariants import gamma, same_double_coset
from q2synth.synthesis import (
    EIGEN_ORDERS,
    CXZCore,
    CYZCore,
    GateLibrary,
    core_params_cxz,
    core_params_cyz,
    cyz_core_circuit,
    enumerate_circuits,
    match_local_factors,
    synthesize,
)

ROTATION_AXES = {
    GateLibrary.CYZ: {Axis.Y, Axis.Z},
    GateLibrary.CXY: {Axis.X, Axis.Y},
    GateLibrary.CXZ: {Axis.X, Axis.Z},
}


def su2(rng):
    u = nm.haar_unitary(2, rng)
    return u / np.sqrt(np.linalg.det(u))


def su4(rng):
    return su4_normalize(nm.haar_unitary(4, rng))[0]


class TestCoreParamsCYZ:
    def test_core_lands_in_the_same_double_coset(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            u = su4(rng)
            params = core_params_cyz(u)
            core, _ = su4_normalize(simulate(cyz_core_circuit(params)))
            assert same_double_coset(u, core, tol=1e-8)

    def test_eigen_orders_give_alternative_parameter_triples(self):
        rng = np.random.default_rng(1)
        u = su4(rng)
        triples = {
            tuple(
                round(x, 9)
                for x in (p.alpha, p.beta, p.delta)
            )
            for p in (core_params_cyz(u, order) for order in EIGEN_ORDERS)
        }
        assert len(triples) > 1

    def test_rejects_non_special_unitary(self):
        with pytest.raises(NotUnitary):
            core_params_cyz(nm.CNOT01)  # det -1

    def test_core_circuit_topology(self):
        c = cyz_core_circuit(CYZCore(alpha=0.3, beta=0.4, delta=0.5))
        kinds = [type(g).__name__ for g in c.gates]
        assert kinds == ["CNOT", "Rotation", "Rotation", "CNOT", "Rotation", "CNOT"]
        assert c.cnot_count == 3


class TestCoreParamsCXZ:
    def test_psi_makes_the_invariant_trace_real(self):
        rng = np.random.default_rng(2)
        from q2synth.synthesis import _delta_matrix

        for _ in range(30):
            u = su4(rng)
            u_prime, _ = su4_normalize(u @ nm.CNOT01)
            params = core_params_cxz(u_prime)
            m, _ = su4_normalize(u_prime @ nm.CNOT01 @ _delta_matrix(params.psi))
            # building the shifted operator directly from the definition
            u_mat, _ = su4_normalize(u_prime @ nm.CNOT01)
            m2, _ = su4_normalize(u_mat @ _delta_matrix(params.psi))
            assert abs(np.trace(gamma(m2)).imag) <= 1e-9

    def test_degenerate_input_flagged(self):
        u, _ = su4_normalize(nm.CNOT01)
        params = core_params_cxz(u)
        assert params.degenerate
        assert params.psi == 0.0

    def test_generic_input_not_degenerate(self):
        rng = np.random.default_rng(3)
        flags = [core_params_cxz(su4(rng)).degenerate for _ in range(10)]
        assert not any(flags)

    def test_rejects_non_special_unitary(self):
        with pytest.raises(NotUnitary):
            core_params_cxz(nm.CNOT01)


class TestMatchLocalFactors:
    def test_reconstructs_planted_locals(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            v = su4(rng)
            a, b, c, d = su2(rng), su2(rng), su2(rng), su2(rng)
            u = nm.kron(a, b) @ v @ nm.kron(c, d)
            fa, fb, fc, fd = match_local_factors(u, v)
            recon = nm.kron(fa, fb) @ v @ nm.kron(fc, fd)
            assert nm.phase_distance(recon, u) <= 1e-8

    def test_handles_sign_flipped_invariant(self):
        # i*u is special-unitary with gamma negated; locals must still close
        rng = np.random.default_rng(5)
        u = su4(rng)
        fa, fb, fc, fd = match_local_factors(u, 1j * u)
        recon = nm.kron(fa, fb) @ (1j * u) @ nm.kron(fc, fd)
        assert nm.phase_distance(recon, u) <= 1e-8

    def test_identity_pair(self):
        fa, fb, fc, fd = match_local_factors(np.eye(4), np.eye(4))
        recon = nm.kron(fa, fb) @ nm.kron(fc, fd)
        assert nm.phase_distance(recon, np.eye(4)) <= 1e-10

    def test_rejects_different_cosets(self):
        cnot, _ = su4_normalize(nm.CNOT01)
        with pytest.raises(CosetMismatch):
            match_local_factors(np.eye(4), cnot)

    def test_rejects_non_special_inputs(self):
        with pytest.raises(NotUnitary):
            match_local_factors(nm.CNOT01, nm.CNOT01)


class TestSynthesize:
    @pytest.mark.parametrize("lib", list(GateLibrary))
    def test_random_unitaries(self, lib):
        rng = np.random.default_rng(6)
        for _ in range(25):
            u = nm.haar_unitary(4, rng)
            result = synthesize(u, lib)
            assert result.residual <= 1e-8
            assert result.cnot_count == 3
            if lib is GateLibrary.BASIC:
                assert result.basic_count <= 10
            else:
                assert result.one_param_count <= 15
            assert nm.phase_distance(simulate(result.circuit), u) == pytest.approx(
                result.residual, abs=1e-12
            )

    @pytest.mark.parametrize("lib", list(GateLibrary))
    def test_library_conformance(self, lib):
        rng = np.random.default_rng(7)
        u = nm.haar_unitary(4, rng)
        result = synthesize(u, lib)
        for g in result.circuit.gates:
            if isinstance(g, Rotation):
                assert lib is GateLibrary.BASIC or g.axis in ROTATION_AXES[lib]
            elif isinstance(g, Generic1Q):
                assert lib is GateLibrary.BASIC
            else:
                assert isinstance(g, CNOT)

    @pytest.mark.parametrize(
        "name,matrix",
        [
            ("identity", np.eye(4, dtype=complex)),
            ("cnot", None),
            ("swap", None),
            ("cz", None),
        ],
    )
    @pytest.mark.parametrize("lib", list(GateLibrary))
    def test_special_inputs(self, name, matrix, lib):
        table = {
            "identity": np.eye(4, dtype=complex),
            "cnot": nm.CNOT01,
            "swap": nm.SWAP_MAT,
            "cz": nm.CZ_MAT,
        }
        u = table[name]
        result = synthesize(u, lib)
        assert result.residual <= 1e-8
        assert result.cnot_count == 3

    def test_accepts_library_by_value(self):
        rng = np.random.default_rng(8)
        u = nm.haar_unitary(4, rng)
        result = synthesize(u, "cxz")
        assert result.residual <= 1e-8

    def test_accepts_global_phase(self):
        rng = np.random.default_rng(9)
        u = np.exp(0.41j) * nm.haar_unitary(4, rng)
        assert synthesize(u, GateLibrary.CYZ).residual <= 1e-8

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            synthesize(np.ones((4, 4)), GateLibrary.CYZ)

    def test_unreachable_tolerance_raises(self):
        rng = np.random.default_rng(10)
        u = nm.haar_unitary(4, rng)
        with pytest.raises(VerificationFailed):
            synthesize(u, GateLibrary.CYZ, tol=1e-18)

    def test_result_metadata(self):
        rng = np.random.default_rng(11)
        u = nm.haar_unitary(4, rng)
        result = synthesize(u, GateLibrary.CYZ)
        assert result.eigen_order
        assert result.cnot_count == result.circuit.cnot_count
        assert result.one_param_count == result.circuit.one_param_count
        assert result.basic_count == result.circuit.basic_count


class TestEnumerate:
    def test_yields_distinct_verified_circuits(self):
        rng = np.random.default_rng(12)
        u = nm.haar_unitary(4, rng)
        results = enumerate_circuits(u, GateLibrary.CYZ, limit=6)
        assert 2 <= len(results) <= 6
        texts = set()
        for r in results:
            assert r.residual <= 1e-8
            assert r.cnot_count == 3
            texts.add(tuple((type(g).__name__, getattr(g, "angle", None)) for g in r.circuit.gates))
        assert len(texts) == len(results)

    def test_respects_limit(self):
        rng = np.random.default_rng(13)
        u = nm.haar_unitary(4, rng)
        assert len(enumerate_circuits(u, GateLibrary.CXZ, limit=2)) <= 2

    def test_rejects_bad_limit(self):
        with pytest.raises(ValueError):
            enumerate_circuits(np.eye(4), GateLibrary.CYZ, limit=0)
