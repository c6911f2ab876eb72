"""Qubit encoding, gate compilation, circuits, matrix/circuit files."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qlam.quantum import (
    FileFormatError,
    GateMatrix,
    NotAnIsometry,
    StateVector,
    basis_value,
    case_construct,
    compile_isometry,
    decode,
    encode,
    expand_gate,
    format_matrix,
    gate_library,
    matrix_apply,
    parse_circuit,
    parse_matrix,
    run_circuit,
)
from qlam.inner import norm
from qlam.rewrite import normalize
from qlam.syntax import (
    InlV,
    InrV,
    Lam,
    LetPair,
    Match,
    PairV,
    Void,
    congruent,
    mk_app,
    singleton,
)
from qlam.typecheck import check_distribution, type_of_program
from qlam.types import Arrow, qubits

STAR = Void()
INL = InlV(STAR)
INR = InrV(STAR)
_R2 = 1 / math.sqrt(2)


def _sv(*amps) -> StateVector:
    return StateVector(np.array(amps, dtype=complex))


def _amps(v: StateVector) -> np.ndarray:
    return v.amplitudes


# ----------------------------------------------------------- state vectors


def test_state_vector_validation():
    with pytest.raises(ValueError):
        _sv(1, 0, 0)                       # not a power of two
    with pytest.raises(ValueError):
        _sv(1, 1)                          # norm sqrt(2)
    with pytest.raises(ValueError):
        StateVector(np.array([1.0]))       # zero qubits
    v = _sv(_R2, _R2)
    assert v.qubit_count == 1
    assert v[1] == _R2


def test_gate_matrix_validation():
    with pytest.raises(ValueError):
        GateMatrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        GateMatrix(np.zeros((3, 3)))
    assert gate_library["CNOT"].qubit_count == 2


# ------------------------------------------------------------ basis values


def test_basis_value_bit_order():
    assert basis_value(0, 1) == INL
    assert basis_value(1, 1) == INR
    assert basis_value(2, 2) == PairV(INR, INL)          # binary 10, b0 first
    assert basis_value(5, 3) == PairV(INR, PairV(INL, INR))   # binary 101
    with pytest.raises(ValueError):
        basis_value(4, 2)


# ----------------------------------------------------------- encode/decode


def test_encode_single_basis_states():
    assert encode(_sv(1, 0)) == singleton(INL)
    assert encode(_sv(0, 1)) == singleton(INR)


def test_encode_three_qubit_example():
    v = _sv(_R2, 0, 0, _R2, 0, 0, 0, 0)
    d = encode(v)
    assert len(d.summands) == 2
    expected = {
        PairV(INL, PairV(INL, INL)): _R2,      # |000>
        PairV(INL, PairV(INR, INR)): _R2,      # |011>
    }
    for a, t in d.summands:
        assert t in expected
        assert abs(a - expected[t]) < 1e-15
    assert type_of_program(d) == qubits(3)


def test_encode_type_checks_at_register_type():
    for n, v in ((1, _sv(_R2, _R2)), (2, _sv(0.5, 0.5, 0.5, 0.5))):
        assert check_distribution({}, encode(v), qubits(n)) is True


def test_encode_drops_rounding_dust():
    h = gate_library["H"].matrix
    squared = h @ h                      # identity plus BLAS dust off-diagonal
    assert 0 < abs(squared[1, 0]) < 1e-15
    d = encode(StateVector(squared[:, 0]))
    assert len(d.summands) == 1


def test_decode_examples():
    assert np.array_equal(_amps(decode(singleton(INR), 1)), [0, 1])
    v = _sv(_R2, 0, 0, _R2, 0, 0, 0, 0)
    assert np.array_equal(_amps(decode(encode(v), 3)), _amps(v))


def test_decode_rejects_malformed_summands():
    with pytest.raises(ValueError):
        decode(singleton(STAR), 1)
    with pytest.raises(ValueError):
        decode(singleton(INL), 2)          # too shallow for two qubits


def test_round_trip_is_exact_on_random_states():
    rng = np.random.default_rng(20240817)
    for n in (1, 2, 3):
        for _ in range(25):
            raw = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
            raw /= np.linalg.norm(raw)
            v = StateVector(raw)
            assert np.array_equal(_amps(decode(encode(v), n)), _amps(v))


# ----------------------------------------------------------- case construct


def test_case_construct_single_qubit_shape():
    term = case_construct(1, [singleton(INL), singleton(INR)])
    assert isinstance(term, Lam)
    (coeff, body), = term.body.summands
    assert coeff == 1 and isinstance(body, Match)
    assert congruent(normalize(mk_app(term, singleton(INL))), singleton(INL))
    assert congruent(normalize(mk_app(term, singleton(INR))), singleton(INR))


def test_case_construct_two_qubit_shape():
    images = [singleton(basis_value(k, 2)) for k in (0, 1, 3, 2)]
    term = case_construct(2, images)
    assert isinstance(term, Lam)
    (_, body), = term.body.summands
    assert isinstance(body, LetPair)       # splits off the first qubit
    for k, img in zip((0, 1, 2, 3), images):
        out = normalize(mk_app(term, singleton(basis_value(k, 2))))
        assert congruent(out, img)


def test_case_construct_image_count():
    with pytest.raises(ValueError):
        case_construct(2, [singleton(INL)] * 3)
    with pytest.raises(ValueError):
        case_construct(0, [])


def test_case_construct_from_matrix_columns():
    hh = np.kron(gate_library["H"].matrix, gate_library["H"].matrix)
    images = [encode(StateVector(hh[:, k])) for k in range(4)]
    term = case_construct(2, images)
    for k in range(4):
        basis = np.zeros(4)
        basis[k] = 1
        got = decode(normalize(mk_app(term, singleton(basis_value(k, 2)))), 2)
        oracle = matrix_apply(GateMatrix(hh), StateVector(basis))
        assert np.abs(_amps(got) - _amps(oracle)).max() < 1e-12


# --------------------------------------------------------- compile isometry


def test_compiled_identity_fixes_every_basis_state():
    term = compile_isometry(GateMatrix(np.eye(4)))
    for k in range(4):
        d = singleton(basis_value(k, 2))
        assert congruent(normalize(mk_app(term, d)), d)


def test_compiled_cnot_on_all_basis_states():
    term = compile_isometry(gate_library["CNOT"])
    mapping = {0: 0, 1: 1, 2: 3, 3: 2}
    for k, image in mapping.items():
        out = normalize(mk_app(term, singleton(basis_value(k, 2))))
        assert congruent(out, singleton(basis_value(image, 2)))


def test_compiled_hadamard_splits_zero():
    term = compile_isometry(gate_library["H"])
    out = normalize(mk_app(term, encode(_sv(1, 0))))
    assert congruent(out, encode(_sv(_R2, _R2)))


def test_compiled_terms_type_check_at_register_arrow():
    for name, n in (("H", 1), ("T", 1), ("CNOT", 2), ("SWAP", 2)):
        term = compile_isometry(gate_library[name])
        wanted = Arrow(qubits(n), qubits(n))
        assert check_distribution({}, singleton(term), wanted) is True


def test_non_isometry_rejected():
    with pytest.raises(NotAnIsometry):
        compile_isometry(GateMatrix(np.ones((2, 2))))
    almost = np.array([[1, 0], [0, 1 + 1e-3]])
    with pytest.raises(NotAnIsometry):
        compile_isometry(GateMatrix(almost))


def test_seeded_random_unitaries_round_trip():
    rng = np.random.default_rng(7)
    for n in (1, 2):
        dim = 1 << n
        for _ in range(3):
            raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            u, _ = np.linalg.qr(raw)
            gate = GateMatrix(u)
            term = compile_isometry(gate)
            amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            amps /= np.linalg.norm(amps)
            v = StateVector(amps)
            got = decode(normalize(mk_app(term, encode(v))), n)
            oracle = matrix_apply(gate, v)
            assert np.abs(_amps(got) - _amps(oracle)).max() < 1e-6


# ------------------------------------------------------------ matrix apply


def test_matrix_apply_oracle_cases():
    v = _sv(0.6, 0.8j)
    assert np.array_equal(_amps(matrix_apply(gate_library["I"], v)), _amps(v))
    ten = _sv(0, 0, 1, 0)
    assert np.array_equal(
        _amps(matrix_apply(gate_library["CNOT"], ten)), [0, 0, 0, 1]
    )
    hh = matrix_apply(gate_library["H"], matrix_apply(gate_library["H"], _sv(1, 0)))
    assert np.abs(_amps(hh) - [1, 0]).max() < 1e-12
    with pytest.raises(ValueError):
        matrix_apply(gate_library["CNOT"], _sv(1, 0))


# ------------------------------------------------------------ gate library


def test_gate_library_contents():
    assert set(gate_library) == {"I", "X", "Y", "Z", "H", "S", "T", "CNOT", "CZ", "SWAP"}
    x = gate_library["X"]
    assert np.array_equal(_amps(matrix_apply(x, _sv(1, 0))), [0, 1])
    h = gate_library["H"].matrix
    assert np.abs(np.abs(h) - _R2).max() < 1e-15
    assert np.array_equal(
        gate_library["CNOT"].matrix,
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    )


def test_gate_library_is_unitary():
    for name, gate in gate_library.items():
        m = gate.matrix
        dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        assert dev < 1e-12, name


# ------------------------------------------------------------- expand gate


def test_expand_gate_matches_kron_on_adjacent_wires():
    h = gate_library["H"]
    eye = np.eye(2)
    assert np.allclose(expand_gate(h, [0], 2).matrix, np.kron(h.matrix, eye))
    assert np.allclose(expand_gate(h, [1], 2).matrix, np.kron(eye, h.matrix))
    cnot = gate_library["CNOT"]
    assert np.array_equal(expand_gate(cnot, [0, 1], 2).matrix, cnot.matrix)
    assert np.allclose(
        expand_gate(cnot, [1, 2], 3).matrix, np.kron(eye, cnot.matrix)
    )


def test_expand_gate_reversed_targets():
    cnot = gate_library["CNOT"]
    swap = gate_library["SWAP"].matrix
    flipped = swap @ cnot.matrix @ swap
    assert np.allclose(expand_gate(cnot, [1, 0], 2).matrix, flipped)


def test_expand_gate_validation():
    h = gate_library["H"]
    with pytest.raises(ValueError):
        expand_gate(h, [0, 1], 2)          # arity mismatch
    with pytest.raises(ValueError):
        expand_gate(gate_library["CNOT"], [1, 1], 2)
    with pytest.raises(ValueError):
        expand_gate(h, [2], 2)
    with pytest.raises(ValueError):
        expand_gate(h, [0], 13)


# ------------------------------------------------------------- run circuit


def test_empty_circuit_echoes_input():
    v = _sv(0.6, 0.8)
    d, oracle = run_circuit([], v)
    assert congruent(d, encode(v))
    assert np.array_equal(_amps(oracle), _amps(v))


def test_bell_circuit():
    d, oracle = run_circuit(
        [(gate_library["H"], [0]), (gate_library["CNOT"], [0, 1])], _sv(1, 0, 0, 0)
    )
    got = decode(d, 2)
    bell = np.array([_R2, 0, 0, _R2])
    assert np.abs(_amps(got) - bell).max() < 1e-9
    assert np.abs(_amps(oracle) - bell).max() < 1e-12
    assert abs(norm(d) - 1) < 1e-9


def test_deutsch_constant_oracle():
    # constant f: U_f is I (f = 0) or I tensor X (f = 1); after the H layer
    # and a final H on the query qubit, that qubit always reads 0
    for uf in (np.eye(4), np.kron(np.eye(2), gate_library["X"].matrix)):
        gates = [
            (gate_library["H"], [0]),
            (gate_library["H"], [1]),
            (GateMatrix(uf), [0, 1]),
            (gate_library["H"], [0]),
        ]
        d, oracle = run_circuit(gates, _sv(0, 1, 0, 0))
        got = _amps(decode(d, 2))
        assert np.abs(got - _amps(oracle)).max() < 1e-9
        # all amplitude stays on |0x> states
        assert abs(got[2]) < 1e-9 and abs(got[3]) < 1e-9


def test_run_circuit_preserves_norm():
    d, _ = run_circuit(
        [(gate_library["H"], [0]), (gate_library["S"], [1]),
         (gate_library["CNOT"], [1, 0])],
        _sv(0, 0, 1, 0),
    )
    assert abs(norm(d) - 1) < 1e-9


# -------------------------------------------------------------- file formats


def test_matrix_format_round_trip():
    for name in ("H", "Y", "CNOT", "T"):
        gate = gate_library[name]
        again = parse_matrix(format_matrix(gate))
        assert np.array_equal(again.matrix, gate.matrix), name


def test_parse_matrix_literals_and_comments():
    text = """
# a comment
-- another comment
dim 2
0.5+0.5i 0.5-0.5i
5e-1-5e-1i 0.5+0.5i
"""
    m = parse_matrix(text).matrix
    assert m[0, 0] == 0.5 + 0.5j
    assert m[0, 1] == 0.5 - 0.5j
    assert m[1, 0] == 0.5 - 0.5j


def test_parse_matrix_errors():
    with pytest.raises(FileFormatError):
        parse_matrix("")
    with pytest.raises(FileFormatError):
        parse_matrix("size 2\n1 0\n0 1\n")
    with pytest.raises(FileFormatError):
        parse_matrix("dim 3\n1 0 0\n0 1 0\n0 0 1\n")     # not a power of two
    with pytest.raises(ValueError):
        parse_matrix("dim 3\n1 0 0\n0 1 0\n0 0 1\n")
    with pytest.raises(FileFormatError):
        parse_matrix("dim 2\n1 0\n")                     # missing row
    with pytest.raises(FileFormatError):
        parse_matrix("dim 2\n1 0 0\n0 1\n")              # ragged row
    with pytest.raises(FileFormatError):
        parse_matrix("dim 2\n1 zebra\n0 1\n")


def test_parse_circuit(tmp_path):
    mat = tmp_path / "had.mat"
    mat.write_text(format_matrix(gate_library["H"]))
    text = """
-- build a Bell pair, then a custom gate
H 0
CNOT 0 1
@had.mat 1
"""
    gates = parse_circuit(text, base_dir=tmp_path)
    assert len(gates) == 3
    assert gates[0][1] == [0]
    assert gates[1][1] == [0, 1]
    assert np.allclose(gates[2][0].matrix, gate_library["H"].matrix)


def test_parse_circuit_errors(tmp_path):
    with pytest.raises(FileFormatError):
        parse_circuit("WARP 0\n")
    with pytest.raises(FileFormatError):
        parse_circuit("H 0 1\n")               # arity mismatch
    with pytest.raises(FileFormatError):
        parse_circuit("H zero\n")
    with pytest.raises(FileFormatError):
        parse_circuit("@missing.mat 0\n", base_dir=tmp_path)
