"""Dense-matrix and statevector helpers for small registers.

Basis convention: qubit 0 is the leftmost tensor factor, i.e. the most
significant bit of the computational-basis index.  Dense paths are
capped at 10 qubits (dimension 1024).
"""

from __future__ import annotations

import numpy as np

from .hamiltonian import Hamiltonian
from .paulis import PauliString

DENSE_MAX_QUBITS = 10

PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_capacity(n: int) -> None:
    if n > DENSE_MAX_QUBITS:
        raise ValueError(f"dense path capped at {DENSE_MAX_QUBITS} qubits, got {n}")


def _reverse_bits(v: int, n: int) -> int:
    out = 0
    for _ in range(n):
        out = (out << 1) | (v & 1)
        v >>= 1
    return out


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a Pauli string."""
    _check_capacity(p.n)
    out = np.array([[1.0 + 0.0j]])
    for ch in p.label:
        out = np.kron(out, PAULI_1Q[ch])
    return out


def hamiltonian_matrix(h: Hamiltonian) -> np.ndarray:
    """Dense Hermitian matrix of a sparse Pauli sum."""
    _check_capacity(h.n)
    out = np.zeros((2**h.n, 2**h.n), dtype=complex)
    for p, c in h:
        out += c * pauli_matrix(p)
    return out


def apply_pauli(p: PauliString, psi: np.ndarray) -> np.ndarray:
    """P @ psi without building the matrix.

    Uses P = i^{|x&z|} X^x Z^z: the X part permutes indices, the Z part
    flips signs on set bits.
    """
    n = p.n
    dim = 1 << n
    if psi.shape != (dim,):
        raise ValueError(f"state has dimension {psi.shape}, expected ({dim},)")
    xm = _reverse_bits(p.x, n)
    zm = _reverse_bits(p.z, n)
    phase = 1j ** ((p.x & p.z).bit_count() % 4)
    idx = np.arange(dim, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(zm)) & np.uint64(1)).astype(np.float64)
    out = np.empty(dim, dtype=complex)
    out[idx ^ np.uint64(xm)] = phase * signs * psi
    return out


def pauli_expectation(p: PauliString, psi: np.ndarray) -> float:
    """Real expectation value <psi|P|psi>."""
    return float(np.vdot(psi, apply_pauli(p, psi)).real)


def hamiltonian_expectation(h: Hamiltonian, psi: np.ndarray) -> float:
    return float(sum(c * pauli_expectation(p, psi) for p, c in h))


def haar_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def gate_matrix(kind: str, qubits: tuple[int, ...], theta: float | None, n: int) -> np.ndarray:
    """Dense unitary of a single ansatz gate embedded on n qubits."""
    _check_capacity(n)
    if kind in ("RX", "RY", "RZ"):
        (q,) = qubits
        axis = {"RX": PauliString(n, 1 << q, 0),
                "RY": PauliString(n, 1 << q, 1 << q),
                "RZ": PauliString(n, 0, 1 << q)}[kind]
        a = pauli_matrix(axis)
        return np.cos(theta / 2) * np.eye(2**n) - 1j * np.sin(theta / 2) * a
    if kind == "CZ":
        q1, q2 = qubits
        dim = 1 << n
        diag = np.ones(dim, dtype=complex)
        idx = np.arange(dim)
        b1 = (idx >> (n - 1 - q1)) & 1
        b2 = (idx >> (n - 1 - q2)) & 1
        diag[(b1 & b2) == 1] = -1.0
        return np.diag(diag)
    raise ValueError(f"unknown gate kind {kind!r}")


def ansatz_unitary(layout, theta) -> np.ndarray:
    """Dense unitary of a full ansatz (gates applied in circuit order)."""
    _check_capacity(layout.n)
    theta = np.asarray(theta, dtype=np.float64)
    u = np.eye(2**layout.n, dtype=complex)
    for g in layout.gates:
        t = float(theta[g.param]) if g.param is not None else None
        u = gate_matrix(g.kind, g.qubits, t, layout.n) @ u
    return u
