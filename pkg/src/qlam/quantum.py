"""Qubit registers as terms, and matrices compiled to case trees.

A basis state of an n-qubit register is a right-nested tuple of booleans with
qubit 0 outermost, so index k maps to the bits of k read most significant
first: |10> is (inr *, inl *).  encode and decode translate between state
vectors and value distributions over these tuples; compile_isometry turns a
matrix into a lambda that destructures its argument one qubit at a time and
superposes the encoded columns.  run_circuit folds a gate list over an input
both ways, through the rewrite engine and through plain matrix products, so
the two can be compared.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import get_tolerance
from .rewrite import normalize
from .syntax import (
    Distribution,
    InlV,
    InrV,
    Lam,
    LetPair,
    PairV,
    PureTerm,
    Seq,
    Var,
    Void,
    mk_app,
    mk_match,
    singleton,
)
from .types import qubits


class NotAnIsometry(ValueError):
    pass


class FileFormatError(ValueError):
    pass


def _qubit_count(dim: int, what: str) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or 1 << n != dim or n < 1:
        raise ValueError(f"{what} must have a power-of-two size of at least 2, got {dim}")
    return n


@dataclass(frozen=True)
class StateVector:
    """A normalized complex amplitude vector over 2^n basis states."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        _qubit_count(amps.shape[0], "a state vector")
        nrm = float(np.linalg.norm(amps))
        if abs(nrm - 1.0) > get_tolerance():
            raise ValueError(f"state vector has norm {nrm:.12g}, expected 1")

    @property
    def qubit_count(self) -> int:
        return self.amplitudes.shape[0].bit_length() - 1

    def __getitem__(self, k: int) -> complex:
        return complex(self.amplitudes[k])


@dataclass(frozen=True)
class GateMatrix:
    """A square complex matrix acting on an n-qubit register; entry (i, k) is
    the amplitude sent from basis state k to basis state i."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"a gate matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        _qubit_count(m.shape[0], "a gate matrix")

    @property
    def qubit_count(self) -> int:
        return self.matrix.shape[0].bit_length() - 1


# ---------------------------------------------------------------------------
# basis values

def _bit_value(b: int) -> PureTerm:
    return InrV(Void()) if b else InlV(Void())


def basis_value(index: int, qubit_count: int) -> PureTerm:
    """The tuple of booleans for basis state |index>, qubit 0 outermost."""
    if not 0 <= index < (1 << qubit_count):
        raise ValueError(f"basis index {index} out of range for {qubit_count} qubits")
    bits = [(index >> (qubit_count - 1 - j)) & 1 for j in range(qubit_count)]
    t = _bit_value(bits[-1])
    for b in reversed(bits[:-1]):
        t = PairV(_bit_value(b), t)
    return t


def _basis_index(t: PureTerm, qubit_count: int) -> int:
    index = 0
    for _ in range(qubit_count - 1):
        if not isinstance(t, PairV):
            raise ValueError(f"not a {qubit_count}-qubit basis value")
        index = (index << 1) | _bit_of(t.first)
        t = t.second
    return (index << 1) | _bit_of(t)


def _bit_of(t: PureTerm) -> int:
    match t:
        case InlV(Void()):
            return 0
        case InrV(Void()):
            return 1
        case _:
            raise ValueError("not a boolean basis value")


def encode(state: StateVector) -> Distribution:
    """The value distribution with one summand per nonzero amplitude.

    Amplitudes within tolerance of zero are omitted, so matrices assembled
    with rounding dust in entries that are zero in exact arithmetic still
    encode to the distributions those entries denote.
    """
    n = state.qubit_count
    cut = get_tolerance()
    summands = [
        (complex(a), basis_value(k, n))
        for k, a in enumerate(state.amplitudes)
        if abs(a) > cut
    ]
    return Distribution(tuple(summands))


def decode(d: Distribution, qubit_count: int) -> StateVector:
    """Read the amplitudes back off a distribution of basis values; basis
    states that do not appear get amplitude zero."""
    amps = np.zeros(1 << qubit_count, dtype=complex)
    for a, t in d.summands:
        amps[_basis_index(t, qubit_count)] += a
    return StateVector(amps)


def matrix_apply(gate: GateMatrix, state: StateVector) -> StateVector:
    if gate.qubit_count != state.qubit_count:
        raise ValueError(
            f"gate acts on {gate.qubit_count} qubits, state has {state.qubit_count}"
        )
    return StateVector(gate.matrix @ state.amplitudes)


# ---------------------------------------------------------------------------
# compilation

def _primed(base: str, depth: int) -> str:
    return base + "'" * depth


def _case_tree(images: Sequence[Distribution], qubit_count: int, depth: int) -> PureTerm:
    z = _primed("z", depth)
    w = _primed("x", depth + 1)
    if qubit_count == 1:
        left = Distribution(((1, Seq(Var(w), images[0])),))
        right = Distribution(((1, Seq(Var(w), images[1])),))
        body = mk_match(singleton(Var(z)), w, left, w, right)
        return Lam(z, qubits(1), body)
    x = _primed("x", depth)
    y = _primed("y", depth)
    half = len(images) // 2
    sub_left = _case_tree(images[:half], qubit_count - 1, depth + 1)
    sub_right = _case_tree(images[half:], qubit_count - 1, depth + 1)
    left = Distribution(((1, Seq(Var(w), mk_app(sub_left, singleton(Var(y))))),))
    right = Distribution(((1, Seq(Var(w), mk_app(sub_right, singleton(Var(y))))),))
    arm = mk_match(singleton(Var(x)), w, left, w, right)
    body = Distribution(((1, LetPair(x, y, Var(z), arm)),))
    return Lam(z, qubits(qubit_count), body)


def case_construct(qubit_count: int, images: Sequence[Distribution]) -> PureTerm:
    """The lambda that sends basis state k of an n-qubit register to the k-th
    image: nested let/match destructuring, one qubit per level, with the
    consumed bits sequenced away in front of each image."""
    if qubit_count < 1:
        raise ValueError("the register needs at least one qubit")
    if len(images) != 1 << qubit_count:
        raise ValueError(
            f"expected {1 << qubit_count} images for {qubit_count} qubits, got {len(images)}"
        )
    return _case_tree(list(images), qubit_count, 0)


def compile_isometry(gate: GateMatrix) -> PureTerm:
    """A lambda on n-qubit registers that acts as the matrix does.

    The argument is destructured qubit by qubit; the leaf for basis state k
    sequences the consumed bits away and returns the encoded k-th column.
    Rejects matrices whose columns are not orthonormal.
    """
    m = gate.matrix
    dev = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
    if dev > get_tolerance():
        raise NotAnIsometry(
            f"columns are not orthonormal (largest deviation {dev:.3g})"
        )
    n = gate.qubit_count
    images = [encode(StateVector(m[:, k])) for k in range(m.shape[1])]
    return case_construct(n, images)


def expand_gate(gate: GateMatrix, targets: Sequence[int], qubit_count: int) -> GateMatrix:
    """Embed a gate into a wider register, acting on the given qubits in the
    given order and leaving the rest alone."""
    g = gate.qubit_count
    if len(targets) != g:
        raise ValueError(f"gate acts on {g} qubits, got {len(targets)} targets")
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {list(targets)}")
    for q in targets:
        if not 0 <= q < qubit_count:
            raise ValueError(f"target {q} out of range for {qubit_count} qubits")
    if qubit_count > 12:
        raise ValueError("registers wider than 12 qubits are not supported")
    dim = 1 << qubit_count
    # global index bit j sits at shift qubit_count-1-j; gate bit g' at g-1-g'
    shifts = [qubit_count - 1 - q for q in targets]
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        sub = 0
        base = k
        for sh in shifts:
            sub = (sub << 1) | ((k >> sh) & 1)
            base &= ~(1 << sh)
        for r in range(1 << g):
            i = base
            for pos, sh in enumerate(shifts):
                i |= ((r >> (g - 1 - pos)) & 1) << sh
            out[i, k] = gate.matrix[r, sub]
    return GateMatrix(out)


def run_circuit(
    gates: Sequence[tuple[GateMatrix, Sequence[int]]],
    state: StateVector,
    *,
    max_steps: int | None = None,
) -> tuple[Distribution, StateVector]:
    """Apply a gate list to an input state along both routes: compile each
    gate, apply it as a term, and normalize; and multiply the matrices out.
    Returns the final distribution and the final vector."""
    n = state.qubit_count
    d = encode(state)
    v = state
    for gate, targets in gates:
        wide = expand_gate(gate, targets, n)
        lam = compile_isometry(wide)
        if max_steps is None:
            d = normalize(mk_app(lam, d))
        else:
            d = normalize(mk_app(lam, d), max_steps=max_steps)
        v = matrix_apply(wide, v)
    return d, v


_INV_SQRT2 = 1 / np.sqrt(2)

gate_library: dict[str, GateMatrix] = {
    "I": GateMatrix(np.eye(2)),
    "X": GateMatrix(np.array([[0, 1], [1, 0]])),
    "Y": GateMatrix(np.array([[0, -1j], [1j, 0]])),
    "Z": GateMatrix(np.array([[1, 0], [0, -1]])),
    "H": GateMatrix(np.array([[1, 1], [1, -1]]) * _INV_SQRT2),
    "S": GateMatrix(np.array([[1, 0], [0, 1j]])),
    "T": GateMatrix(np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]])),
    "CNOT": GateMatrix(
        np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    ),
    "CZ": GateMatrix(np.diag([1, 1, 1, -1])),
    "SWAP": GateMatrix(
        np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    ),
}


# ---------------------------------------------------------------------------
# file formats

_COMPLEX_RE = re.compile(
    r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$"
)


def _parse_complex(tok: str, where: str) -> complex:
    m = _COMPLEX_RE.match(tok)
    if not m:
        raise FileFormatError(f"{where}: bad complex literal {tok!r}")
    re_part = float(m.group(1))
    im_part = float(m.group(2)) if m.group(2) else 0.0
    return complex(re_part, im_part)


def parse_matrix(text: str, name: str = "<matrix>") -> GateMatrix:
    """Matrix files: a `dim N` header, then N rows of N complex entries
    (`a`, `a+bi`, or `a-bi`)."""
    lines = [
        ln for ln in (raw.strip() for raw in text.splitlines())
        if ln and not ln.startswith("#") and not ln.startswith("--")
    ]
    if not lines:
        raise FileFormatError(f"{name}: empty matrix file")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "dim":
        raise FileFormatError(f"{name}: expected a `dim N` header, got {lines[0]!r}")
    try:
        dim = int(header[1])
    except ValueError:
        raise FileFormatError(f"{name}: bad dimension {header[1]!r}") from None
    try:
        _qubit_count(dim, f"{name}: the dimension")
    except ValueError as e:
        raise FileFormatError(str(e)) from None
    rows = lines[1:]
    if len(rows) != dim:
        raise FileFormatError(f"{name}: expected {dim} rows, got {len(rows)}")
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(rows):
        toks = row.split()
        if len(toks) != dim:
            raise FileFormatError(
                f"{name}: row {i + 1} has {len(toks)} entries, expected {dim}"
            )
        for k, tok in enumerate(toks):
            out[i, k] = _parse_complex(tok, f"{name}: row {i + 1}")
    return GateMatrix(out)


def parse_circuit(
    text: str, name: str = "<circuit>", base_dir: str | Path | None = None
) -> list[tuple[GateMatrix, list[int]]]:
    """Circuit files: one gate per line, `NAME q0 [q1 ...]` for library gates
    or `@file.mat q0 ...` for a matrix loaded from a file (relative paths
    resolve against the circuit file's directory)."""
    base = Path(base_dir) if base_dir is not None else Path(".")
    out: list[tuple[GateMatrix, list[int]]] = []
    for ln_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("--"):
            continue
        toks = line.split()
        head, rest = toks[0], toks[1:]
        where = f"{name}: line {ln_no}"
        if head.startswith("@"):
            path = base / head[1:]
            try:
                gate = parse_matrix(path.read_text(), str(path))
            except OSError as e:
                raise FileFormatError(f"{where}: cannot read {path}: {e}") from None
        elif head in gate_library:
            gate = gate_library[head]
        else:
            raise FileFormatError(f"{where}: unknown gate {head!r}")
        try:
            targets = [int(tok) for tok in rest]
        except ValueError:
            raise FileFormatError(f"{where}: targets must be integers") from None
        if len(targets) != gate.qubit_count:
            raise FileFormatError(
                f"{where}: {head} needs {gate.qubit_count} targets, got {len(targets)}"
            )
        out.append((gate, targets))
    return out


def format_matrix(gate: GateMatrix) -> str:
    def show(c: complex) -> str:
        if c.imag == 0:
            return f"{c.real:.17g}"
        sign = "+" if c.imag >= 0 else "-"
        return f"{c.real:.17g}{sign}{abs(c.imag):.17g}i"

    dim = gate.matrix.shape[0]
    rows = [f"dim {dim}"]
    for i in range(dim):
        rows.append(" ".join(show(complex(c)) for c in gate.matrix[i]))
    return "\n".join(rows) + "\n"
