"""Phase-free Pauli operators in the binary symplectic picture."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .gf2 import BitVec

_CODES = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_CHARS = {v: k for k, v in _CODES.items()}


class PauliParseError(ValueError):
    pass


@dataclass(frozen=True)
class PauliOperator:
    """N-qubit Pauli as two packed bit strings; qubit ``i`` is bit ``i``.

    ``(x_i, z_i)`` = (0,0)/(1,0)/(0,1)/(1,1) means I/X/Z/Y. Products drop the phase.
    """

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if (self.x >> self.n) or (self.z >> self.n) or self.x < 0 or self.z < 0:
            raise ValueError("support beyond qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOperator":
        bx, bz = _CODES[kind.upper()]
        return cls(n, bx << qubit, bz << qubit)

    @property
    def xvec(self) -> BitVec:
        return BitVec(self.n, self.x)

    @property
    def zvec(self) -> BitVec:
        return BitVec(self.n, self.z)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise ValueError("qubit count mismatch")
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z)

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def support(self) -> list[int]:
        s = self.x | self.z
        return [i for i in range(self.n) if (s >> i) & 1]

    def is_identity(self) -> bool:
        return not (self.x or self.z)

    def symplectic(self) -> int:
        """Packed ``x | z << n`` row, handy for span computations."""
        return self.x | (self.z << self.n)

    def __getitem__(self, qubit: int) -> str:
        return _CHARS[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def __str__(self) -> str:
        return pauli_format(self)


def symplectic_product(p: PauliOperator, q: PauliOperator) -> int:
    """0 if ``p`` and ``q`` commute, 1 otherwise."""
    if p.n != q.n:
        raise ValueError("qubit count mismatch")
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    return symplectic_product(p, q) == 0


def pauli_weight(p: PauliOperator) -> int:
    return p.weight()


def pauli_parse(text: str, n: int | None = None) -> PauliOperator:
    """Parse a dense string such as ``"XZZXI"``."""
    s = text.strip().upper()
    if n is not None and len(s) != n:
        raise PauliParseError(f"expected {n} qubits, got {len(s)} in {text!r}")
    x = z = 0
    for i, c in enumerate(s):
        try:
            bx, bz = _CODES[c]
        except KeyError:
            raise PauliParseError(f"invalid Pauli character {c!r} at position {i}") from None
        x |= bx << i
        z |= bz << i
    return PauliOperator(len(s), x, z)


def pauli_format(p: PauliOperator) -> str:
    return "".join(p[i] for i in range(p.n))


_SPARSE_TOKEN = re.compile(r"([IXYZ])(\d+)", re.IGNORECASE)


def pauli_from_sparse(text: str, n: int) -> PauliOperator:
    """Parse ``"X1 Z6 Y7"`` style terms with 1-based qubit labels."""
    x = z = 0
    pos = 0
    for m in _SPARSE_TOKEN.finditer(text):
        if text[pos:m.start()].strip():
            raise PauliParseError(f"unexpected text {text[pos:m.start()]!r}")
        pos = m.end()
        q = int(m.group(2)) - 1
        if not 0 <= q < n:
            raise PauliParseError(f"qubit {q + 1} out of range 1..{n}")
        bx, bz = _CODES[m.group(1).upper()]
        if ((x | z) >> q) & 1:
            raise PauliParseError(f"qubit {q + 1} listed twice")
        x |= bx << q
        z |= bz << q
    if text[pos:].strip():
        raise PauliParseError(f"unexpected text {text[pos:]!r}")
    return PauliOperator(n, x, z)
