"""Adjoint action of hardware-efficient ansatz gates on Pauli sums.

Conjugating a Hamiltonian by a circuit, H -> U H U^dag, is applied gate
by gate directly on the sparse coefficient map.  A rotation
exp(-i*theta*A/2) leaves terms commuting with the axis Pauli A fixed
and mixes each anticommuting term B with its partner A*B as a planar
rotation:

    B -> cos(theta)*B - i*sin(theta)*(A*B),

where -i*(A*B) is again +/- a Hermitian Pauli string, so coefficients
stay real.  CZ is Clifford: each string maps to one string with a sign.
The induced linear map on coefficient space is real orthogonal;
:func:`build_encoded_v` materializes it densely for verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import PRUNE_TOL, Hamiltonian
from .paulis import PauliString

ROTATION_KINDS = ("RX", "RY", "RZ")

# axis (x, z) bit pair per rotation kind
_AXIS_BITS = {"RX": (1, 0), "RY": (1, 1), "RZ": (0, 1)}


@dataclass(frozen=True)
class Gate:
    """One ansatz gate: a parameterized rotation or a CZ entangler."""

    kind: str
    qubits: tuple[int, ...]
    param: int | None = None


@dataclass(frozen=True)
class AnsatzLayout:
    """Ordered gate list over n qubits with trainable rotation slots."""

    n: int
    depth: int
    gates: tuple[Gate, ...]
    parameter_count: int

    def __post_init__(self):
        seen = set()
        for g in self.gates:
            if g.kind in ROTATION_KINDS:
                if len(g.qubits) != 1 or g.param is None:
                    raise ValueError(f"rotation gate needs one qubit and a slot: {g}")
                if g.param in seen:
                    raise ValueError(f"parameter slot {g.param} used twice")
                seen.add(g.param)
            elif g.kind == "CZ":
                if len(g.qubits) != 2 or g.qubits[0] == g.qubits[1]:
                    raise ValueError(f"CZ needs two distinct qubits: {g}")
                if g.param is not None:
                    raise ValueError(f"CZ takes no parameter: {g}")
            else:
                raise ValueError(f"unknown gate kind {g.kind!r}")
            for q in g.qubits:
                if not (0 <= q < self.n):
                    raise ValueError(f"qubit {q} out of range for n={self.n}")
        if seen != set(range(self.parameter_count)):
            raise ValueError(
                f"parameter slots must be 0..{self.parameter_count - 1}, each once"
            )


def hardware_efficient_layout(n: int, depth: int,
                              rotations: tuple[str, ...] = ("RX", "RZ"),
                              entangler: str = "chain") -> AnsatzLayout:
    """Layered ansatz: per layer, the given rotations on every qubit,
    then CZ on neighboring pairs ("chain") or all pairs ("all")."""
    for kind in rotations:
        if kind not in ROTATION_KINDS:
            raise ValueError(f"unknown rotation kind {kind!r}")
    gates = []
    slot = 0
    for _ in range(depth):
        for kind in rotations:
            for q in range(n):
                gates.append(Gate(kind, (q,), slot))
                slot += 1
        if entangler == "chain":
            pairs = [(q, q + 1) for q in range(n - 1)]
        elif entangler == "all":
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        else:
            raise ValueError(f"unknown entangler {entangler!r}")
        gates.extend(Gate("CZ", pair) for pair in pairs)
    return AnsatzLayout(n=n, depth=depth, gates=tuple(gates), parameter_count=slot)


def layout_from_gates(n: int, gates, depth: int = 0) -> AnsatzLayout:
    """Wrap an explicit gate list; parameter count inferred from the slots."""
    gates = tuple(gates)
    count = sum(1 for g in gates if g.param is not None)
    return AnsatzLayout(n=n, depth=depth, gates=gates, parameter_count=count)


def layout_to_dict(layout: AnsatzLayout) -> dict:
    return {
        "n": layout.n,
        "depth": layout.depth,
        "parameter_count": layout.parameter_count,
        "gates": [
            {"kind": g.kind, "qubits": list(g.qubits), "param": g.param}
            for g in layout.gates
        ],
    }


def layout_from_dict(d: dict) -> AnsatzLayout:
    gates = tuple(
        Gate(g["kind"], tuple(g["qubits"]), g["param"]) for g in d["gates"]
    )
    return AnsatzLayout(n=d["n"], depth=d["depth"], gates=gates,
                        parameter_count=d["parameter_count"])


def as_parameter_vector(theta, count: int) -> np.ndarray:
    """Validate and convert angles to a float64 array of the right length."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (count,):
        raise ValueError(f"expected {count} angles, got shape {theta.shape}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("angles must be finite")
    return theta


# -- gate maps on (keys, coeffs) arrays ---------------------------------


def _qubit_bits(keys: np.ndarray, n: int, q: int):
    xq = ((keys >> np.uint64(n + q)) & np.uint64(1)).astype(np.int64)
    zq = ((keys >> np.uint64(q)) & np.uint64(1)).astype(np.int64)
    return xq, zq


def _rotation_raw(keys, coeffs, n, kind, qubit, theta, derivative=False):
    """Pre-merge key/coefficient arrays of the rotation adjoint map.

    With ``derivative=True`` returns instead the theta-derivative of the
    map (commuting terms drop; the planar rotation is differentiated).
    """
    ax, az = _AXIS_BITS[kind]
    xq, zq = _qubit_bits(keys, n, qubit)
    anti = (ax * zq + az * xq) % 2 == 1
    keep_keys = keys[~anti]
    keep_coeffs = coeffs[~anti]
    akeys = keys[anti]
    acoeffs = coeffs[anti]

    # partner string A*B and the real sign of -i*(A*B)'s phase
    partner = akeys ^ np.uint64((ax << (n + qubit)) | (az << qubit))
    txq = xq[anti]
    tzq = zq[anti]
    cx = txq ^ ax
    cz = tzq ^ az
    k = (ax * az + txq * tzq - cx * cz + 2 * az * txq) % 4
    sign = np.where(k == 1, 1.0, -1.0)

    c, s = np.cos(theta), np.sin(theta)
    if derivative:
        out_keys = np.concatenate([akeys, partner])
        out_coeffs = np.concatenate([-s * acoeffs, c * sign * acoeffs])
    else:
        out_keys = np.concatenate([keep_keys, akeys, partner])
        out_coeffs = np.concatenate([keep_coeffs, c * acoeffs, s * sign * acoeffs])
    return out_keys, out_coeffs


def _cz_raw(keys, coeffs, n, q1, q2):
    one = np.uint64(1)
    x1 = (keys >> np.uint64(n + q1)) & one
    z1 = (keys >> np.uint64(q1)) & one
    x2 = (keys >> np.uint64(n + q2)) & one
    z2 = (keys >> np.uint64(q2)) & one
    flip = (x2 << np.uint64(q1)) ^ (x1 << np.uint64(q2))
    out_keys = keys ^ flip
    neg = (x1 & x2 & (z1 ^ z2)) == one
    out_coeffs = np.where(neg, -coeffs, coeffs)
    return out_keys, out_coeffs


def conjugate_rotation(h: Hamiltonian, axis: str, qubit: int, theta: float) -> Hamiltonian:
    """U H U^dag for U = exp(-i*theta*P_axis(qubit)/2)."""
    if axis not in ("X", "Y", "Z"):
        raise ValueError(f"axis must be X, Y or Z, got {axis!r}")
    if not (0 <= qubit < h.n):
        raise ValueError(f"qubit {qubit} out of range for n={h.n}")
    keys, coeffs = _rotation_raw(h.keys, h.coeffs, h.n, "R" + axis, qubit, float(theta))
    return Hamiltonian.from_arrays(h.n, keys, coeffs, tol=PRUNE_TOL)


def conjugate_cz(h: Hamiltonian, q1: int, q2: int) -> Hamiltonian:
    """CZ H CZ on qubits (q1, q2); a signed permutation of Pauli strings."""
    if q1 == q2 or not (0 <= q1 < h.n) or not (0 <= q2 < h.n):
        raise ValueError(f"invalid CZ qubits ({q1}, {q2}) for n={h.n}")
    keys, coeffs = _cz_raw(h.keys, h.coeffs, h.n, q1, q2)
    return Hamiltonian.from_arrays(h.n, keys, coeffs, tol=PRUNE_TOL)


def _apply_gate(h: Hamiltonian, gate: Gate, theta_value: float | None) -> Hamiltonian:
    if gate.kind == "CZ":
        return conjugate_cz(h, *gate.qubits)
    return conjugate_rotation(h, gate.kind[1], gate.qubits[0], theta_value)


def apply_ansatz(h: Hamiltonian, layout: AnsatzLayout, theta) -> Hamiltonian:
    """U(theta) H U(theta)^dag with gates applied in circuit order."""
    if layout.n != h.n:
        raise ValueError(f"layout is for {layout.n} qubits, Hamiltonian has {h.n}")
    theta = as_parameter_vector(theta, layout.parameter_count)
    for g in layout.gates:
        t = float(theta[g.param]) if g.param is not None else None
        h = _apply_gate(h, g, t)
    return h


def apply_ansatz_inverse(h: Hamiltonian, layout: AnsatzLayout, theta) -> Hamiltonian:
    """U(theta)^dag H U(theta): reversed gate order, negated angles."""
    if layout.n != h.n:
        raise ValueError(f"layout is for {layout.n} qubits, Hamiltonian has {h.n}")
    theta = as_parameter_vector(theta, layout.parameter_count)
    for g in reversed(layout.gates):
        t = -float(theta[g.param]) if g.param is not None else None
        h = _apply_gate(h, g, t)
    return h


def build_encoded_v(layout: AnsatzLayout, theta, n: int) -> np.ndarray:
    """Dense 4^n x 4^n coefficient-space unitary of the ansatz.

    Row i holds the Pauli coefficients of U^dag P_i U, so that
    V @ vectorize(H) equals vectorize(U H U^dag) entrywise.  Test-only;
    capped at 3 qubits.
    """
    if n > 3:
        raise ValueError(f"encoded unitary is dense in 4^n; capped at n=3, got {n}")
    if layout.n != n:
        raise ValueError(f"layout is for {layout.n} qubits, expected {n}")
    dim = 4**n
    v = np.zeros((dim, dim), dtype=np.float64)
    for i in range(dim):
        basis = Hamiltonian(n, {PauliString.from_index(i, n): 1.0})
        row = apply_ansatz_inverse(basis, layout, theta)
        idx = row.indices()
        v[i, idx] = row.coeffs
    return v
