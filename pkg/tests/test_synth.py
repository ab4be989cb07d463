import math

import numpy as np
import pytest

from iqpshift.errors import ParameterError, UnsupportedLocalityError
from iqpshift.instance import IqpInstance, gen_pattern
from iqpshift.synth import (CX, CX_GATESET, RZ, SWAP, ZZ, ZZ_GATESET, Circuit, Gate, H,
                            build_logical_circuit, decompose_term, get_gateset, simplify,
                            two_qubit_count_formula)
from oracles import circuit_unitary, equal_up_to_phase, iqp_unitary


def _random_instance(rng, n, k=3):
    terms = []
    for _ in range(int(rng.integers(1, 2 * n + 1))):
        size = int(rng.integers(1, min(k, n) + 1))
        terms.append((tuple(rng.choice(n, size, replace=False).tolist()), rng.uniform(0, 2 * np.pi)))
    return IqpInstance(n, k, tuple(terms))


def test_one_body_term():
    assert decompose_term([3], 0.4) == [RZ(-0.8, 3)]


def test_two_body_cx():
    assert decompose_term([0, 1], 0.4, CX_GATESET) == [CX(0, 1), RZ(-0.8, 1), CX(0, 1)]


def test_three_body_cx_counts():
    gates = decompose_term([2, 0, 1], 0.4, CX_GATESET)
    assert sum(g.kind == "CX" for g in gates) == 4 and sum(g.kind == "RZ" for g in gates) == 1
    assert gates[2] == RZ(-0.8, 2)


def test_two_body_zz_and_unsupported():
    assert decompose_term([0, 1], 0.4, ZZ_GATESET) == [ZZ(-0.8, 0, 1)]
    with pytest.raises(UnsupportedLocalityError):
        decompose_term([0, 1, 2], 0.4, ZZ_GATESET)
    with pytest.raises(ParameterError):
        decompose_term([], 0.4)
    with pytest.raises(ParameterError):
        get_gateset("iswap")


def test_three_body_unitary_matches_generator():
    rng = np.random.default_rng(0)
    for _ in range(5):
        theta = rng.uniform(-3, 3)
        inst = IqpInstance(3, 3, (((0, 1, 2), theta),))
        c = build_logical_circuit(inst, CX_GATESET)
        assert equal_up_to_phase(circuit_unitary(c), iqp_unitary(inst)) < 1e-10


def test_build_examples():
    c = build_logical_circuit(IqpInstance(2, 2, (((0, 1), 0.3),)), CX_GATESET)
    assert len(c) == 7
    c = build_logical_circuit(gen_pattern("dense", 16), ZZ_GATESET)
    assert c.count("ZZ") == 120 and c.count("H") == 32 and len(c) == 152


@pytest.mark.parametrize("gs", [CX_GATESET, ZZ_GATESET])
def test_unitary_correctness_random(gs):
    rng = np.random.default_rng(11)
    for trial in range(25):
        n = int(rng.integers(1, 7))
        inst = _random_instance(rng, n, 2 if gs is ZZ_GATESET else 3)
        U = circuit_unitary(build_logical_circuit(inst, gs))
        assert equal_up_to_phase(U, iqp_unitary(inst)) < 1e-10


def test_term_order_commutes():
    rng = np.random.default_rng(5)
    inst = _random_instance(rng, 5)
    perm = rng.permutation(inst.num_terms)
    shuffled = IqpInstance(inst.n, inst.k, tuple(inst.terms[i] for i in perm))
    U1 = circuit_unitary(build_logical_circuit(inst))
    U2 = circuit_unitary(build_logical_circuit(shuffled))
    assert equal_up_to_phase(U1, U2) < 1e-10


def test_gate_count_formula():
    rng = np.random.default_rng(2)
    for _ in range(20):
        inst = _random_instance(rng, 6)
        assert build_logical_circuit(inst, CX_GATESET).two_qubit_count() == \
            two_qubit_count_formula(inst, CX_GATESET) == \
            sum(2 * (len(s) - 1) for s, _ in inst.terms if len(s) >= 2)
    inst = gen_pattern("sparse_density", 10, 1)
    assert build_logical_circuit(inst, ZZ_GATESET).two_qubit_count() == inst.num_terms


def test_simplify_preserves_unitary_and_cancels():
    inst = IqpInstance(3, 3, (((0, 1), 0.2), ((0, 1), 0.0), ((0, 1, 2), 0.5)))
    c = Circuit(2, (CX(0, 1), CX(0, 1), RZ(0.1, 0), RZ(0.2, 0), H(1)))
    s = simplify(c)
    assert s.gates == (RZ(0.1 + 0.2, 0), H(1))
    rng = np.random.default_rng(9)
    for _ in range(10):
        inst = _random_instance(rng, 5)
        c = build_logical_circuit(inst)
        s = simplify(c)
        assert len(s) <= len(c)
        assert equal_up_to_phase(circuit_unitary(s), circuit_unitary(c)) < 1e-10


def test_circuit_text_round_trip():
    c = build_logical_circuit(gen_pattern("dense", 4, 3))
    assert Circuit.from_text(c.to_text()) == c
    p = Circuit(3, (SWAP(0, 1), ZZ(0.5, 1, 2)), "physical", (0, 1, 2), (1, 0, 2))
    assert Circuit.from_text(p.to_text()) == p
    assert "ZZ 0.5 1 2" in p.to_text() and p.to_text().startswith("qubits 3; frame physical")


def test_circuit_text_errors():
    with pytest.raises(ParameterError, match="line 2"):
        Circuit.from_text("qubits 2; frame logical\nFOO 1\n")
    with pytest.raises(ParameterError, match="line 2"):
        Circuit.from_text("qubits 2; frame logical\nCX 0 x\n")


def test_circuit_validation():
    with pytest.raises(ParameterError):
        Circuit(2, (CX(0, 0),))
    with pytest.raises(ParameterError):
        Circuit(2, (Gate("RZ", (0,), math.inf),))
    with pytest.raises(ParameterError):
        Circuit(2, (), "physical", (0, 0), (0, 1))
