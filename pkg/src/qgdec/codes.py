"""Stabilizer code model, validation, text format, and the built-in registry."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .gf2 import in_row_span, rank_of_rows
from .pauli import PauliOperator, PauliParseError, pauli_format, pauli_from_sparse, pauli_parse, symplectic_product


class ValidationError(ValueError):
    pass


class CommutationError(ValidationError):
    def __init__(self, i: str, j: str):
        super().__init__(f"{i} and {j} anticommute")
        self.pair = (i, j)


class DependenceError(ValidationError):
    pass


class LogicalPairingError(ValidationError):
    pass


class CodeParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class AtLeast:
    """Lower bound returned when an exhaustive search ran out of weight."""

    value: int

    def __str__(self) -> str:
        return f">={self.value}"


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    d: int
    stabilizers: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    name: str = "code"
    meta: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def css(self) -> bool:
        return all(s.x == 0 or s.z == 0 for s in self.stabilizers)

    @property
    def t(self) -> int:
        return (self.d - 1) // 2

    @property
    def generators(self) -> tuple[PauliOperator, ...]:
        """Stabilizers followed by the logical Z operators."""
        return self.stabilizers + self.logical_z

    def x_checks(self) -> list[int]:
        """Indices of pure X-type stabilizers."""
        return [i for i, s in enumerate(self.stabilizers) if s.z == 0 and s.x]

    def z_checks(self) -> list[int]:
        return [i for i, s in enumerate(self.stabilizers) if s.x == 0 and s.z]


def _label(kind: str, i: int) -> str:
    return f"{kind}{i + 1}"


def validate(code: StabilizerCode) -> None:
    """Raise the first violated invariant; return ``None`` for a valid code."""
    n, k = code.n, code.k
    if len(code.stabilizers) != n - k:
        raise ValidationError(f"expected {n - k} stabilizers, got {len(code.stabilizers)}")
    if len(code.logical_z) != k or len(code.logical_x) != k:
        raise ValidationError(f"expected {k} logical Z and {k} logical X operators")
    labelled = (
        [(_label("S", i), p) for i, p in enumerate(code.stabilizers)]
        + [(_label("LZ", i), p) for i, p in enumerate(code.logical_z)]
        + [(_label("LX", i), p) for i, p in enumerate(code.logical_x)]
    )
    for name, p in labelled:
        if p.n != n:
            raise ValidationError(f"{name} acts on {p.n} qubits, expected {n}")
    ns = len(code.stabilizers)
    for a in range(ns):
        for b in range(a + 1, len(labelled)):
            if symplectic_product(labelled[a][1], labelled[b][1]):
                raise CommutationError(labelled[a][0], labelled[b][0])
    for i, lz in enumerate(code.logical_z):
        for j, lx in enumerate(code.logical_x):
            if symplectic_product(lz, lx) != (i == j):
                raise LogicalPairingError(f"LZ{i + 1} / LX{j + 1} pairing broken")
        for j in range(i + 1, k):
            if symplectic_product(lz, code.logical_z[j]):
                raise LogicalPairingError(f"LZ{i + 1} and LZ{j + 1} anticommute")
    for i in range(k):
        for j in range(i + 1, k):
            if symplectic_product(code.logical_x[i], code.logical_x[j]):
                raise LogicalPairingError(f"LX{i + 1} and LX{j + 1} anticommute")
    rows = [p.symplectic() for p in code.generators]
    if rank_of_rows(rows, 2 * n) != n:
        raise DependenceError("stabilizers and logical Z operators are linearly dependent")


def in_stabilizer_group(code: StabilizerCode, p: PauliOperator) -> bool:
    """Membership (up to phase) by solving the GF(2) system over the stabilizer rows."""
    rows = [s.symplectic() for s in code.stabilizers]
    return in_row_span(rows, p.symplectic(), 2 * code.n)


# --- text format -----------------------------------------------------------

def load_code(text: str, name: str = "code") -> StabilizerCode:
    """Parse the ``N k d`` / ``S`` / ``LZ`` / ``LX`` line format and validate."""
    header = None
    stabs: list[PauliOperator] = []
    lz: list[PauliOperator] = []
    lx: list[PauliOperator] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3:
                raise CodeParseError("header must be 'N k d'", lineno)
            try:
                header = tuple(int(v) for v in parts)
            except ValueError:
                raise CodeParseError("header must be three integers", lineno) from None
            if header[0] <= 0 or not 0 <= header[1] <= header[0] or header[2] < 1:
                raise CodeParseError(f"invalid parameters {header}", lineno)
            continue
        if len(parts) != 2 or parts[0] not in ("S", "LZ", "LX"):
            raise CodeParseError(f"expected 'S|LZ|LX <pauli>', got {line!r}", lineno)
        try:
            op = pauli_parse(parts[1], header[0])
        except PauliParseError as exc:
            raise CodeParseError(str(exc), lineno) from None
        {"S": stabs, "LZ": lz, "LX": lx}[parts[0]].append(op)
    if header is None:
        raise CodeParseError("empty code file", 1)
    n, k, d = header
    code = StabilizerCode(n, k, d, tuple(stabs), tuple(lz), tuple(lx), name=name)
    validate(code)
    return code


def dump_code(code: StabilizerCode) -> str:
    lines = [f"# {code.name}", f"{code.n} {code.k} {code.d}"]
    lines += [f"S {pauli_format(s)}" for s in code.stabilizers]
    lines += [f"LZ {pauli_format(p)}" for p in code.logical_z]
    lines += [f"LX {pauli_format(p)}" for p in code.logical_x]
    return "\n".join(lines) + "\n"


def _from_sparse(name: str, n: int, d: int, stabs: list[str], lz: str, lx: str) -> StabilizerCode:
    return StabilizerCode(
        n, 1, d,
        tuple(pauli_from_sparse(s, n) for s in stabs),
        (pauli_from_sparse(lz, n),),
        (pauli_from_sparse(lx, n),),
        name=name,
    )


# --- tabulated codes -------------------------------------------------------

_FIVE = dict(
    n=5, d=3,
    stabs=["X1 Z2 Z3 X4", "X2 Z3 Z4 X5", "X1 X3 Z4 Z5", "Z1 X2 X4 Z5"],
    lz="Y1 Y2 X4", lx="Y2 Z4 Z5",
)

_STEANE = dict(
    n=7, d=3,
    stabs=[
        "X1 X2 X3 X4", "X2 X3 X5 X6", "X3 X4 X6 X7",
        "Z1 Z2 Z3 Z4", "Z2 Z3 Z5 Z6", "Z3 Z4 Z6 Z7",
    ],
    lz="Z5 Z6 Z7", lx="X1 X2 X5",
)

_NONCSS11 = dict(
    n=11, d=5,
    stabs=[
        "X1 X6 Z7 Z8 X10 X11",
        "Z1 Z6 X7 Y8 Y9 X11",
        "X2 X6 Z7 Y8 Z9 Y11",
        "Z2 Z6 Z7 Z8 Y9 Y10",
        "X3 X6 Z7 X8 X9 Z10",
        "Z3 Z6 Y7 Y9 Z10 Z11",
        "X4 X6 Y7 X9 X10 Y11",
        "Z4 Z6 Z8 X9 Z10 X11",
        "X5 X6 X7 Z9 Z10 X11",
        "Z5 Z6 Y8 Z9 Y10 Z11",
    ],
    lz="Z2 X5 Y6 Z7 Y8", lx="X2 X3 Z7 X9 X11",
)

_NONCSS17 = dict(
    n=17, d=7,
    stabs=[
        "X1 X9 Z10 Y11 Y12 Y15 Y16 Z17",
        "Z1 Z9 Y10 X11 X12 X15 X16 Y17",
        "X2 Z9 Z10 Y11 Z12 Y13 X15 Z16",
        "Z2 Y9 Y10 X11 Y12 X13 Z15 Y16",
        "X3 Z10 Z11 Y12 Z13 Y14 X16 Z17",
        "Z3 Y10 Y11 X12 Y13 X14 Z16 Y17",
        "X4 Z9 Y10 Y11 Y12 Y13 Z14 Z15 X16 Z17",
        "Z4 Y9 X10 X11 X12 X13 Y14 Y15 Z16 Y17",
        "X5 Z9 X10 Z11 Z12 Y13 Y14 Y15 Y16 Z17",
        "Z5 Y9 Z10 Y11 Y12 X13 X14 X15 X16 Y17",
        "X6 Z9 X10 Y12 Z13 Y14 Z15 Z16",
        "Z6 Y9 Z10 X12 Y13 X14 Y15 Y16",
        "X7 Z10 X11 Y13 Z14 Y15 Z16 Z17",
        "Z7 Y10 Z11 X13 Y14 X15 Y16 Y17",
        "X8 Z9 Y10 Y11 Y14 Y15 Z16 X17",
        "Z8 Y9 X10 X11 X14 X15 Y16 Z17",
    ],
    lz="X2 Z5 Y6 Y7 X8 Z12 X17", lx="Y1 Y3 X8 Y12 Z13 Z14 X15",
)

_NONCSS25 = dict(
    n=25, d=9,
    stabs=[
        "X1 Y4 Y5 Z13 Y14 X15 X18 Z19 Y20 Y23 X24 Z25",
        "Z1 X4 X5 Y13 X14 Z15 Z18 Y19 X20 X23 Z24 Y25",
        "X2 Y4 Z5 Y13 X14 Z15 Z18 Y19 X20 X23 Z24 Y25",
        "Z2 X4 Y5 X13 Z14 Y15 Y18 X19 Z20 Z23 Y24 X25",
        "X3 Z4 Y5 Y13 X14 Z15 Z18 Y19 X20 X23 Z24 Y25",
        "Z3 Y4 X5 X13 Z14 Y15 Y18 X19 Z20 Z23 Y24 X25",
        "X6 Y9 Y10 Y13 X14 Z15 Y18 X19 Z20 Y23 X24 Z25",
        "Z6 X9 X10 X13 Z14 Y15 X18 Z19 Y20 X23 Z24 Y25",
        "X7 Y9 Z10 X13 Z14 Y15 X18 Z19 Y20 X23 Z24 Y25",
        "Z7 X9 Y10 Z13 Y14 X15 Z18 Y19 X20 Z23 Y24 X25",
        "X8 Z9 Y10 X13 Z14 Y15 X18 Z19 Y20 X23 Z24 Y25",
        "Z8 Y9 X10 Z13 Y14 X15 Z18 Y19 X20 Z23 Y24 X25",
        "X11 Y13 Z14 X15",
        "Z11 X13 Y14 Z15",
        "X12 X13 X14 X15",
        "Z12 Z13 Z14 Z15",
        "X16 Y18 Z19 X20",
        "Z16 X18 Y19 Z20",
        "X17 X18 X19 X20",
        "Z17 Z18 Z19 Z20",
        "X21 Y23 Z24 X25",
        "Z21 X23 Y24 Z25",
        "X22 X23 X24 X25",
        "Z22 Z23 Z24 Z25",
    ],
    lz="X1 Y4 Y5 Y7 Z8 X9 X16 Z18 Z20",
    lx="Y6 Y8 Y9 Y17 Z19 X20 Y22 X23 Z25",
)

_NONCSS29 = dict(
    n=29, d=11,
    stabs=[
        "X1 X15 Y16 Z17 Z18 X19 Z20 Z21 X22 X23 Z24 Z25 X26 Z27 Z28 Y29",
        "Z1 Z15 X16 Y17 Y18 Z19 Y20 Y21 Z22 Z23 Y24 Y25 Z26 Y27 Y28 X29",
        "X2 Y15 Y16 Z17 Y18 X19 Y21 X22 Z23 Y25 X26 Y28",
        "Z2 X15 X16 Y17 X18 Z19 X21 Z22 Y23 X25 Z26 X28",
        "X3 Y16 Y17 Z18 Y19 X20 Y22 X23 Z24 Y26 X27 Y29",
        "Z3 X16 X17 Y18 X19 Z20 X22 Z23 Y24 X26 Z27 X29",
        "X4 Y15 Z16 Z17 Z18 X19 Z20 Y22 Y25 Y26 Z27 Z29",
        "Z4 X15 Y16 Y17 Y18 Z19 Y20 X22 X25 X26 Y27 Y29",
        "X5 Z15 Z16 X17 X18 Z20 X21 Z22 X23 Y24 Y25 X26 X28 X29",
        "Z5 Y15 Y16 Z17 Z18 Y20 Z21 Y22 Z23 X24 X25 Z26 Z28 Z29",
        "X6 X15 X16 Y18 Z20 Y23 Y24 X25 Z26 Y27 Z28 Z29",
        "Z6 Z15 Z16 X18 Y20 X23 X24 Z25 Y26 X27 Y28 Y29",
        "X7 Z15 Z17 Y18 X19 Y20 X21 Z22 Z23 Y26 X27 Y29",
        "Z7 Y15 Y17 X18 Z19 X20 Z21 Y22 Y23 X26 Z27 X29",
        "X8 Y15 X17 Y18 Z21 Z22 X23 Y24 X25 Y26 Z27 Z29",
        "Z8 X15 Z17 X18 Y21 Y22 Z23 X24 Z25 X26 Y27 Y29",
        "X9 Z15 Z16 Y17 Z18 X19 Y20 Y21 Z24 Y26 X28 X29",
        "Z9 Y15 Y16 X17 Y18 Z19 X20 X21 Y24 X26 Z28 Z29",
        "X10 X15 X16 X18 Y19 Y20 X21 Z22 X23 Z24 X26 X27 Z28 Z29",
        "Z10 Z15 Z16 Z18 X19 X20 Z21 Y22 Z23 Y24 Z26 Z27 Y28 Y29",
        "X11 Z15 Z17 Y18 Y19 Y22 Z24 X25 Z26 Z27 Z28 Y29",
        "Z11 Y15 Y17 X18 X19 X22 Y24 Z25 Y26 Y27 Y28 X29",
        "X12 Y15 X17 Y18 Z20 X21 Y22 X24 Y25 Z26 Y27 Y28",
        "Z12 X15 Z17 X18 Y20 Z21 X22 Z24 X25 Y26 X27 X28",
        "X13 Y16 X18 Y19 Z21 X22 Y23 X25 Y26 Z27 Y28 Y29",
        "Z13 X16 Z18 X19 Y21 Z22 X23 Z25 X26 Y27 X28 X29",
        "X14 Y15 Z16 Z17 X18 Z19 Z20 X21 X22 Z23 Z24 X25 Z26 Z27 Y28 X29",
        "Z14 X15 Y16 Y17 Z18 Y19 Y20 Z21 Z22 Y23 Y24 Z25 Y26 Y27 X28 Z29",
    ],
    lz="Z4 X10 X12 Y13 Y14 Z15 Y17 X22 X24 X27 Y29",
    lx="Z5 X8 Y9 X12 Y15 X18 Z20 Y24 Y26 X27 Z29",
)

_TABLES = {
    "five_qubit": _FIVE,
    "steane": _STEANE,
    "noncss11": _NONCSS11,
    "noncss17": _NONCSS17,
    "noncss25": _NONCSS25,
    "noncss29": _NONCSS29,
}


# --- code families ---------------------------------------------------------

def _check_family_distance(d: int) -> None:
    if not isinstance(d, int) or d < 3 or d % 2 == 0:
        raise ValueError(f"family distance must be an odd integer >= 3, got {d!r}")


def rotated_surface_code(d: int) -> StabilizerCode:
    """Rotated surface code on a d x d grid.

    Qubit (r, c), 1-based, has index (r-1)*d + (c-1). The plaquette whose
    top-left corner is (r, c) is Z-type when r + c is even. Weight-2 X checks
    sit on the top and bottom edges, weight-2 Z checks on the left and right.
    Logical Z is the first row of Z, logical X the first column of X.
    """
    _check_family_distance(d)
    n = d * d

    def q(r: int, c: int) -> int:
        return (r - 1) * d + (c - 1)

    def op(kind: str, cells) -> PauliOperator:
        bits = sum(1 << q(r, c) for r, c in cells)
        return PauliOperator(n, bits, 0) if kind == "X" else PauliOperator(n, 0, bits)

    xs: list[PauliOperator] = []
    zs: list[PauliOperator] = []
    for r in range(0, d + 1):
        for c in range(0, d + 1):
            kind = "Z" if (r + c) % 2 == 0 else "X"
            cells = [(rr, cc) for rr in (r, r + 1) for cc in (c, c + 1) if 1 <= rr <= d and 1 <= cc <= d]
            if len(cells) == 4:
                (zs if kind == "Z" else xs).append(op(kind, cells))
            elif len(cells) == 2:
                top_bottom = r in (0, d)
                if top_bottom and kind == "X":
                    xs.append(op("X", cells))
                elif not top_bottom and kind == "Z":
                    zs.append(op("Z", cells))
    lz = op("Z", [(1, c) for c in range(1, d + 1)])
    lx = op("X", [(r, 1) for r in range(1, d + 1)])
    code = StabilizerCode(n, 1, d, tuple(xs + zs), (lz,), (lx,), name=f"surface:{d}")
    return code


def triangular_color_code(d: int) -> StabilizerCode:
    """Triangular 6.6.6 color code of distance d with (3d^2+1)/4 qubits.

    Sites live on a triangular patch of a triangular lattice with side
    3(d-1)/2; one sublattice hosts the plaquettes, the other two the qubits.
    Each plaquette carries one X and one Z check on identical support.
    Logicals run along the bottom edge.
    """
    _check_family_distance(d)
    side = 3 * (d - 1) // 2
    plaq_offset = {0: 2, 1: 0, 2: 1}
    qubits: dict[tuple[int, int], int] = {}
    plaquettes: list[tuple[int, int]] = []
    for y in range(side + 1):
        for x in range(y, 2 * side - y + 1, 2):
            if ((x - y) // 2) % 3 == plaq_offset[y % 3]:
                plaquettes.append((x, y))
            else:
                qubits[(x, y)] = len(qubits)
    n = len(qubits)
    supports = []
    for x, y in plaquettes:
        nbrs = [(x - 2, y), (x + 2, y), (x - 1, y - 1), (x + 1, y - 1), (x - 1, y + 1), (x + 1, y + 1)]
        supports.append(sum(1 << qubits[p] for p in nbrs if p in qubits))
    stabs = tuple(PauliOperator(n, s, 0) for s in supports) + tuple(PauliOperator(n, 0, s) for s in supports)
    edge = sum(1 << i for (x, y), i in qubits.items() if y == 0)
    return StabilizerCode(n, 1, d, stabs, (PauliOperator(n, 0, edge),), (PauliOperator(n, edge, 0),), name=f"color:{d}")


def build_family(family: str, d: int) -> StabilizerCode:
    if family == "surface":
        code = rotated_surface_code(d)
    elif family == "color":
        code = triangular_color_code(d)
    else:
        raise ValueError(f"unknown family {family!r}")
    validate(code)
    return code


BUILTIN_NAMES = ("five_qubit", "steane", "noncss11", "noncss17", "noncss25", "noncss29", "color:<d>", "surface:<d>")


@lru_cache(maxsize=None)
def get_code(name: str) -> StabilizerCode:
    """Resolve a registry name such as ``noncss11`` or ``surface:5``."""
    if name in _TABLES:
        spec = _TABLES[name]
        code = _from_sparse(name, spec["n"], spec["d"], spec["stabs"], spec["lz"], spec["lx"])
        validate(code)
        return code
    if ":" in name:
        family, _, d = name.partition(":")
        if family in ("color", "surface"):
            try:
                dist = int(d)
            except ValueError:
                raise KeyError(f"bad distance in {name!r}") from None
            return build_family(family, dist)
    raise KeyError(f"unknown code {name!r}; known: {', '.join(BUILTIN_NAMES)}")


def family_size(family: str, d: int) -> int:
    return (3 * d * d + 1) // 4 if family == "color" else d * d


# --- distance oracle -------------------------------------------------------

def _enumeration_cost(n: int, w_max: int, kinds: int) -> int:
    return sum(comb(n, q) * kinds ** q for q in range(w_max + 1))


def verify_distance(code: StabilizerCode, w_max: int, budget: int = 5_000_000) -> int | AtLeast:
    """Smallest weight of a nontrivial logical operator, searched up to ``w_max``.

    Candidates are enumerated by increasing weight; those commuting with every
    stabilizer are tested for stabilizer-group membership by a GF(2) solve. For
    CSS codes only pure X and pure Z candidates are scanned: the X or Z half of
    any nontrivial logical is itself a nontrivial logical of no larger weight.
    """
    n = code.n
    css = code.css
    kinds = ("X", "Z") if css else ("X", "Y", "Z")
    cost = 2 * _enumeration_cost(n, w_max, 1) if css else _enumeration_cost(n, w_max, 3)
    if cost > budget:
        raise BudgetExceeded(f"{cost} candidates exceed budget {budget}")

    stabs = code.stabilizers
    single = {}
    for qubit in range(n):
        for kind in kinds:
            p = PauliOperator.single(n, qubit, kind)
            single[(qubit, kind)] = (
                sum(symplectic_product(p, s) << j for j, s in enumerate(stabs)),
                p,
            )

    def combos(q: int):
        for positions in itertools.combinations(range(n), q):
            if css:
                assignments = (("X",) * q, ("Z",) * q)
            else:
                assignments = itertools.product(kinds, repeat=q)
            for kinds_q in assignments:
                yield positions, kinds_q

    for q in range(1, w_max + 1):
        for positions, kinds_q in combos(q):
            syn = 0
            for qubit, kind in zip(positions, kinds_q):
                syn ^= single[(qubit, kind)][0]
            if syn:
                continue
            p = PauliOperator.identity(n)
            for qubit, kind in zip(positions, kinds_q):
                p = p * single[(qubit, kind)][1]
            if not in_stabilizer_group(code, p):
                return q
    return AtLeast(w_max + 1)


def same_up_to_relabeling(a: StabilizerCode, b: StabilizerCode) -> bool:
    """True if a qubit permutation maps a's stabilizer supports/types onto b's.

    Brute force over permutations; meant for codes of a handful of qubits.
    """
    if a.n != b.n or len(a.stabilizers) != len(b.stabilizers):
        return False

    def signature(code, perm):
        out = []
        for s in code.stabilizers:
            row = []
            for i in range(code.n):
                row.append(s[perm[i]])
            out.append("".join(row))
        return sorted(out)

    target = signature(b, list(range(b.n)))
    return any(signature(a, perm) == target for perm in itertools.permutations(range(a.n)))
