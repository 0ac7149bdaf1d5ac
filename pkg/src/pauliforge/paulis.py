"""Pauli-string algebra on a symplectic bit representation.

A Pauli string on n qubits is stored as two n-bit masks: bit k of ``x``
is set when qubit k carries an X factor, bit k of ``z`` when it carries
a Z factor, and both bits are set for Y.  Qubit 0 is the leftmost
character of the text label and the most significant digit of the
base-4 integer index, with digit values I=0, X=1, Y=2, Z=3.  That index
convention is part of the public file-format contract.
"""

from __future__ import annotations

from dataclasses import dataclass

LABEL_ALPHABET = "IXYZ"
_CHAR_TO_DIGIT = {"I": 0, "X": 1, "Y": 2, "Z": 3}

# digit -> (x bit, z bit)
_DIGIT_TO_BITS = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}


class PauliString:
    """An n-qubit tensor product of {I, X, Y, Z} without coefficient."""

    __slots__ = ("n", "x", "z")

    def __init__(self, n: int, x: int, z: int):
        if n < 1:
            raise ValueError(f"qubit count must be >= 1, got {n}")
        mask = (1 << n) - 1
        if not (0 <= x <= mask) or not (0 <= z <= mask):
            raise ValueError(f"bit masks out of range for {n} qubits")
        self.n = n
        self.x = x
        self.z = z

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a text label such as ``"XIZ"`` (qubit 0 leftmost)."""
        if not label:
            raise ValueError("empty Pauli label")
        x = z = 0
        for q, ch in enumerate(label):
            digit = _CHAR_TO_DIGIT.get(ch)
            if digit is None:
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}")
            xb, zb = _DIGIT_TO_BITS[digit]
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z)

    @classmethod
    def from_index(cls, index: int, n: int) -> "PauliString":
        """Build from the base-4 index (qubit 0 = most significant digit)."""
        if not (0 <= index < 4**n):
            raise ValueError(f"index {index} out of range for {n} qubits")
        x = z = 0
        for q in range(n):
            digit = (index >> (2 * (n - 1 - q))) & 3
            xb, zb = _DIGIT_TO_BITS[digit]
            x |= xb << q
            z |= zb << q
        return cls(n, x, z)

    @classmethod
    def from_key(cls, key: int, n: int) -> "PauliString":
        """Build from the packed integer key ``(x << n) | z``."""
        mask = (1 << n) - 1
        return cls(n, (key >> n) & mask, key & mask)

    def key(self) -> int:
        """Packed integer ``(x << n) | z``; unique per string at fixed n."""
        return (self.x << self.n) | self.z

    def digit(self, qubit: int) -> int:
        """Base-4 digit of the factor on ``qubit``."""
        xb = (self.x >> qubit) & 1
        zb = (self.z >> qubit) & 1
        return 2 * zb + (xb ^ zb)

    @property
    def label(self) -> str:
        return "".join(LABEL_ALPHABET[self.digit(q)] for q in range(self.n))

    @property
    def index(self) -> int:
        out = 0
        for q in range(self.n):
            out = (out << 2) | self.digit(q)
        return out

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> q) & 1 for q in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> q) & 1 for q in range(self.n))

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def weight(self) -> int:
        """Number of non-identity factors."""
        return (self.x | self.z).bit_count()

    def restrict(self, qubits: tuple[int, ...]) -> "PauliString":
        """The factor on a subset of qubits, reindexed to 0..len-1."""
        x = z = 0
        for k, q in enumerate(qubits):
            if not (0 <= q < self.n):
                raise ValueError(f"qubit {q} out of range for {self.n} qubits")
            x |= ((self.x >> q) & 1) << k
            z |= ((self.z >> q) & 1) << k
        return PauliString(len(qubits), x, z)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.n == other.n and self.x == other.x and self.z == other.z

    def __hash__(self) -> int:
        return hash((self.n, self.x, self.z))

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"


@dataclass(frozen=True)
class SignedPauli:
    """A Pauli string with a phase in {+1, -1, +i, -i}."""

    phase: complex
    string: PauliString


def _require_same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def pauli_product(a: PauliString, b: PauliString) -> SignedPauli:
    """Matrix product a*b as a signed Pauli string.

    Uses the convention P = i^{|x&z|} X^x Z^z per string, from which the
    product phase is i^k with
    k = |a.x&a.z| + |b.x&b.z| - |c.x&c.z| + 2*|a.z&b.x|  (mod 4),
    c being the bitwise-XOR result string.
    """
    _require_same_n(a, b)
    cx = a.x ^ b.x
    cz = a.z ^ b.z
    k = (
        (a.x & a.z).bit_count()
        + (b.x & b.z).bit_count()
        - (cx & cz).bit_count()
        + 2 * (a.z & b.x).bit_count()
    ) % 4
    return SignedPauli(phase=1j**k, string=PauliString(a.n, cx, cz))


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff a*b = b*a (symplectic form has even parity)."""
    _require_same_n(a, b)
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


def qubit_wise_commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the single-qubit factors commute at every position.

    Equivalent to: wherever both strings are non-identity, the factors
    are equal.
    """
    _require_same_n(a, b)
    common = (a.x | a.z) & (b.x | b.z)
    return ((a.x ^ b.x) | (a.z ^ b.z)) & common == 0
