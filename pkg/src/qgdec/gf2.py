"""Packed-bit linear algebra over GF(2).

Bit vectors are stored as Python ints: bit ``i`` of the payload is entry ``i``
of the vector. Matrices are tuples of row payloads. Gaussian elimination picks
the lowest-index pivot row at every step, so results are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class SingularError(ValueError):
    """Raised when a square GF(2) matrix has no inverse."""


def _mask(length: int) -> int:
    return (1 << length) - 1


def bits_to_int(bits: Iterable[int]) -> int:
    value = 0
    for i, b in enumerate(bits):
        if b:
            value |= 1 << i
    return value


def int_to_bits(value: int, length: int) -> list[int]:
    return [(value >> i) & 1 for i in range(length)]


def format_bits(value: int, length: int) -> str:
    """Render entry 0 first, e.g. ``format_bits(0b1001, 4) == '1001'``."""
    return "".join("1" if (value >> i) & 1 else "0" for i in range(length))


def parse_bits(text: str) -> int:
    text = text.strip()
    if any(c not in "01" for c in text):
        raise ValueError(f"not a bit string: {text!r}")
    return bits_to_int(c == "1" for c in text)


@dataclass(frozen=True)
class BitVec:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond length")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVec":
        return cls(len(values), bits_to_int(values))

    @classmethod
    def from_str(cls, text: str) -> "BitVec":
        text = text.strip()
        return cls(len(text), parse_bits(text))

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVec":
        return cls(length, 1 << index)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def _check(self, other: "BitVec") -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} != {other.length}")

    def __xor__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits ^ other.bits)

    def __and__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits & other.bits)

    def __or__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits | other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    def concat(self, other: "BitVec") -> "BitVec":
        """Append ``other`` after the last entry of ``self``."""
        return BitVec(self.length + other.length, self.bits | (other.bits << self.length))

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def to_list(self) -> list[int]:
        return int_to_bits(self.bits, self.length)

    def __str__(self) -> str:
        return format_bits(self.bits, self.length)


def hamming_weight(v: BitVec) -> int:
    return v.weight()


@dataclass(frozen=True)
class BitMatrix:
    """Row-major GF(2) matrix; ``rows[i]`` is the payload of row ``i``."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        m = _mask(self.ncols)
        for r in self.rows:
            if r < 0 or r & ~m:
                raise ValueError("bits set beyond column count")

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
        return cls(len(data), ncols, tuple(bits_to_int(r) for r in data))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "BitMatrix":
        """Build from column payloads (bit ``i`` of a column is row ``i``)."""
        rows = [0] * nrows
        for j, col in enumerate(columns):
            c = col
            while c:
                low = c & -c
                rows[low.bit_length() - 1] |= 1 << j
                c ^= low
        return cls(nrows, len(columns), tuple(rows))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, idx: tuple[int, int]) -> int:
        i, j = idx
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> BitVec:
        return BitVec(self.ncols, self.rows[i])

    def column(self, j: int) -> int:
        return bits_to_int((r >> j) & 1 for r in self.rows)

    def columns(self) -> list[int]:
        return transpose(self).rows

    def to_lists(self) -> list[list[int]]:
        return [int_to_bits(r, self.ncols) for r in self.rows]

    def select_rows(self, index: Sequence[int]) -> "BitMatrix":
        return BitMatrix(len(index), self.ncols, tuple(self.rows[i] for i in index))

    def select_cols(self, index: Sequence[int]) -> "BitMatrix":
        out = []
        for r in self.rows:
            v = 0
            for k, j in enumerate(index):
                if (r >> j) & 1:
                    v |= 1 << k
            out.append(v)
        return BitMatrix(self.nrows, len(index), tuple(out))

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and transpose(self) == self

    def diagonal(self) -> int:
        n = min(self.nrows, self.ncols)
        return bits_to_int((self.rows[i] >> i) & 1 for i in range(n))

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BitMatrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return matmul(self, other)

    def __str__(self) -> str:
        return "\n".join(format_bits(r, self.ncols) for r in self.rows)


def vecmat(v: int, m: BitMatrix) -> int:
    """Row vector times matrix: XOR of the rows of ``m`` selected by ``v``."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= m.rows[i]
        v >>= 1
        i += 1
    return out


def matmul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.ncols != b.nrows:
        raise ValueError(f"inner dimensions differ: {a.shape} x {b.shape}")
    return BitMatrix(a.nrows, b.ncols, tuple(vecmat(r, b) for r in a.rows))


def transpose(m: BitMatrix) -> BitMatrix:
    return BitMatrix.from_columns(m.rows, m.ncols)


def _eliminate(rows: list[int], ncols: int, track: list[int] | None = None) -> list[tuple[int, int]]:
    """Reduced row echelon form in place; returns (pivot_row, pivot_col) pairs.

    ``track`` receives the same row operations (used for inversion).
    """
    pivots = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            if track is not None:
                track[r], track[piv] = track[piv], track[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
                if track is not None:
                    track[i] ^= track[r]
        pivots.append((r, col))
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(m: BitMatrix) -> int:
    return len(_eliminate(list(m.rows), m.ncols))


def rank_of_rows(rows: Iterable[int], ncols: int) -> int:
    return len(_eliminate(list(rows), ncols))


def invert(m: BitMatrix) -> BitMatrix:
    if m.nrows != m.ncols:
        raise ValueError("matrix is not square")
    n = m.nrows
    rows = list(m.rows)
    track = [1 << i for i in range(n)]
    if len(_eliminate(rows, n, track)) < n:
        raise SingularError(f"rank deficient {n}x{n} matrix")
    return BitMatrix(n, n, tuple(track))


def solve_combination(rows: Sequence[int], target: int, ncols: int) -> int | None:
    """Find ``c`` with XOR of ``rows[i]`` for set bits ``i`` of ``c`` equal to ``target``.

    Returns ``None`` when ``target`` is outside the row span.
    """
    work = list(rows)
    track = [1 << i for i in range(len(rows))]
    pivots = _eliminate(work, ncols, track)
    residual = target
    combo = 0
    for r, col in pivots:
        if (residual >> col) & 1:
            residual ^= work[r]
            combo ^= track[r]
    return combo if residual == 0 else None


def in_row_span(rows: Sequence[int], target: int, ncols: int) -> bool:
    return solve_combination(rows, target, ncols) is not None
