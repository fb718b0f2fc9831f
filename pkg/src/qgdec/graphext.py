"""Local-Clifford reduction of a stabilizer code to an equivalent graph.

The generators ``S_1..S_{N-k}, LZ_1..LZ_k`` form a full-rank 2N x N check
matrix (Z block over X block, one column per generator). Column elimination
brings the X block to ``(X1 | 0)``; the pivot qubits of ``X1`` become the left
nodes and the rest the right nodes. Hadamards on the right nodes, phase gates on
selected left nodes and a recombination ``J`` of the generators turn the check
matrix into ``(Gamma; I)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .codes import StabilizerCode
from .gf2 import BitMatrix, SingularError, format_bits, invert, matmul, transpose
from .pauli import PauliOperator


class NormalFormError(RuntimeError):
    pass


class ExtractionInvalid(RuntimeError):
    def __init__(self, detail: str, index: int | None = None):
        super().__init__(detail)
        self.index = index


@dataclass(frozen=True)
class CheckMatrix:
    """``a`` is 2N x N: rows 0..N-1 hold Z bits, rows N..2N-1 X bits of each generator column."""

    n: int
    a: BitMatrix

    @classmethod
    def from_generators(cls, gens: Sequence[PauliOperator]) -> "CheckMatrix":
        n = len(gens)
        cols = [g.z | (g.x << n) for g in gens]
        return cls(n, BitMatrix.from_columns(cols, 2 * n))

    @property
    def z_block(self) -> BitMatrix:
        return self.a.select_rows(range(self.n))

    @property
    def x_block(self) -> BitMatrix:
        return self.a.select_rows(range(self.n, 2 * self.n))

    def generator(self, j: int) -> PauliOperator:
        col = self.a.column(j)
        mask = (1 << self.n) - 1
        return PauliOperator(self.n, col >> self.n, col & mask)

    def generators(self) -> list[PauliOperator]:
        return [self.generator(j) for j in range(self.n)]


@dataclass(frozen=True)
class NormalForm:
    a_prime: CheckMatrix
    left: tuple[int, ...]
    right: tuple[int, ...]
    j_elim: BitMatrix


@dataclass(frozen=True)
class GraphExtraction:
    n: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    gamma: BitMatrix
    j: BitMatrix
    phase_nodes: tuple[int, ...]
    b: BitMatrix
    c: BitMatrix

    @property
    def right_mask(self) -> int:
        return sum(1 << q for q in self.right)

    @property
    def left_mask(self) -> int:
        return sum(1 << q for q in self.left)

    @property
    def phase_mask(self) -> int:
        return sum(1 << q for q in self.phase_nodes)

    def neighbors(self, node: int) -> list[int]:
        row = self.gamma.rows[node]
        return [i for i in range(self.n) if (row >> i) & 1]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.gamma[i, j]]

    def is_bipartite_lr(self) -> bool:
        """No edges inside the left set or inside the right set."""
        lm, rm = self.left_mask, self.right_mask
        return all(
            not (self.gamma.rows[q] & (lm if (lm >> q) & 1 else rm)) for q in range(self.n)
        )


def build_check_matrix(code: StabilizerCode) -> CheckMatrix:
    return CheckMatrix.from_generators(code.generators)


def normal_form(cm: CheckMatrix, left: Sequence[int] | None = None) -> NormalForm:
    """Column-eliminate the X block to ``(X1 | 0)``.

    Qubits are scanned in ascending order (or in the order of ``left`` when
    given); each takes the lowest-index unused generator with an X bit there
    as its pivot and that X bit is cleared from all remaining unused
    generators. ``j_elim`` satisfies ``a_prime = a @ j_elim``.
    """
    n = cm.n
    cols = [[g.x, g.z, 1 << i] for i, g in enumerate(cm.generators())]
    used = [False] * n
    pivots: list[tuple[int, int]] = []
    order = range(n) if left is None else list(left)
    for q in order:
        bit = 1 << q
        piv = next((i for i in range(n) if not used[i] and cols[i][0] & bit), None)
        if piv is None:
            if left is not None:
                raise NormalFormError(f"qubit {q + 1} cannot be a left node")
            continue
        used[piv] = True
        pivots.append((q, piv))
        for i in range(n):
            if not used[i] and cols[i][0] & bit:
                cols[i][0] ^= cols[piv][0]
                cols[i][1] ^= cols[piv][1]
                cols[i][2] ^= cols[piv][2]
    rest = [i for i in range(n) if not used[i]]
    if any(cols[i][0] for i in rest):
        raise NormalFormError("left nodes do not span the X block")
    left_nodes = tuple(q for q, _ in pivots)
    right_nodes = tuple(q for q in range(n) if q not in set(left_nodes))
    order_cols = [i for _, i in pivots] + rest
    gens = [PauliOperator(n, cols[i][0], cols[i][1]) for i in order_cols]
    j_elim = BitMatrix.from_columns([cols[i][2] for i in order_cols], n)
    return NormalForm(CheckMatrix.from_generators(gens), left_nodes, right_nodes, j_elim)


def _block(m: BitMatrix, rows: Sequence[int], cols: Sequence[int]) -> BitMatrix:
    return m.select_rows(rows).select_cols(cols)


def _assemble(blocks: list[list[BitMatrix]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> BitMatrix:
    rows = []
    for bi, size in enumerate(row_sizes):
        for r in range(size):
            value = 0
            shift = 0
            for bj, width in enumerate(col_sizes):
                value |= blocks[bi][bj].rows[r] << shift
                shift += width
            rows.append(value)
    return BitMatrix(len(rows), sum(col_sizes), tuple(rows))


def frame_map(ext: GraphExtraction, p: PauliOperator, to_graph: bool = True) -> PauliOperator:
    """Apply the local Clifford frame qubit by qubit.

    Right nodes get a Hadamard (swap X and Z bits); phase nodes get a phase
    gate (Z bit ^= X bit). Both maps are involutions on the symplectic pair,
    so ``to_graph`` only documents intent.
    """
    rm, pm = ext.right_mask, ext.phase_mask
    swap = (p.x ^ p.z) & rm
    x = p.x ^ swap
    z = p.z ^ swap
    z ^= x & pm
    return PauliOperator(p.n, x, z)


def extract(code: StabilizerCode, left: Sequence[int] | None = None) -> GraphExtraction:
    """Equivalent graph, recombination matrix and local Clifford frame of ``code``.

    ``left`` optionally fixes the left nodes (0-based); by default the
    lowest-index pivot rule picks them.
    """
    cm = build_check_matrix(code)
    nf = normal_form(cm, left)
    n = code.n
    L, R = list(nf.left), list(nf.right)
    nl = len(L)
    zb, xb = nf.a_prime.z_block, nf.a_prime.x_block
    c1 = list(range(nl))
    c2 = list(range(nl, n))
    x1l, x1r = _block(xb, L, c1), _block(xb, R, c1)
    z1l, z1r = _block(zb, L, c1), _block(zb, R, c1)
    z2r = _block(zb, R, c2)
    try:
        x1l_inv = invert(x1l)
        z2r_inv = invert(z2r)
    except SingularError as exc:
        raise NormalFormError(f"normal form blocks not invertible: {exc}") from None

    b = matmul(x1r, x1l_inv)
    c = matmul(z1l + matmul(matmul(invert(transpose(x1l)), transpose(x1r)), z1r), x1l_inv)
    diag_c = c.diagonal()
    c_off = BitMatrix(nl, nl, tuple(r ^ (diag_c & (1 << i)) for i, r in enumerate(c.rows)))
    nr = n - nl
    gamma_lr = _assemble(
        [[c_off, transpose(b)], [b, BitMatrix.zeros(nr, nr)]], [nl, nr], [nl, nr]
    )
    j_closed = _assemble(
        [[x1l_inv, BitMatrix.zeros(nl, nr)], [matmul(matmul(z2r_inv, z1r), x1l_inv), z2r_inv]],
        [nl, nr], [nl, nr],
    )
    j_lr = matmul(nf.j_elim, j_closed)

    perm = L + R
    gamma_rows = [0] * n
    for a in range(n):
        row = 0
        for bcol in range(n):
            if gamma_lr[a, bcol]:
                row |= 1 << perm[bcol]
        gamma_rows[perm[a]] = row
    j_cols = [0] * n
    for a in range(n):
        j_cols[perm[a]] = j_lr.column(a)
    ext = GraphExtraction(
        n=n,
        left=tuple(L),
        right=tuple(R),
        gamma=BitMatrix(n, n, tuple(gamma_rows)),
        j=BitMatrix.from_columns(j_cols, n),
        phase_nodes=tuple(L[i] for i in range(nl) if (diag_c >> i) & 1),
        b=b,
        c=c,
    )
    verify_extraction(code, ext)
    return ext


def graph_generator(ext: GraphExtraction, node: int) -> PauliOperator:
    """X on ``node``, Z on its neighbours (graph frame)."""
    return PauliOperator(ext.n, 1 << node, ext.gamma.rows[node])


def recombined_generator(code: StabilizerCode, ext: GraphExtraction, node: int) -> PauliOperator:
    """Product of the original generators selected by column ``node`` of J (physical frame)."""
    p = PauliOperator.identity(code.n)
    col = ext.j.column(node)
    for i, g in enumerate(code.generators):
        if (col >> i) & 1:
            p = p * g
    return p


def verify_extraction(code: StabilizerCode, ext: GraphExtraction) -> None:
    """Symplectic check of ``R_l H_r A J == (Gamma; I)`` plus the graph invariants."""
    n = ext.n
    g = ext.gamma
    for i in range(n):
        if g[i, i]:
            raise ExtractionInvalid(f"self-loop on node {i + 1}", i)
    if not g.is_symmetric():
        raise ExtractionInvalid("adjacency matrix is not symmetric")
    try:
        invert(ext.j)
    except SingularError:
        raise ExtractionInvalid("recombination matrix is singular") from None
    for node in range(n):
        mapped = frame_map(ext, recombined_generator(code, ext, node))
        want = graph_generator(ext, node)
        if mapped.x != want.x or mapped.z != want.z:
            raise ExtractionInvalid(f"graph generator {node + 1} does not match", node)
    if code.css:
        if ext.phase_nodes:
            raise ExtractionInvalid("CSS code produced phase nodes")
        if not ext.is_bipartite_lr():
            raise ExtractionInvalid("CSS code produced a non-bipartite graph")


# --- export ----------------------------------------------------------------

def to_json(ext: GraphExtraction) -> dict:
    """Nodes and edges use 1-based qubit labels; ``J`` rows are original generators."""
    right, phase = set(ext.right), set(ext.phase_nodes)
    return {
        "nodes": [
            {"id": q + 1, "side": "right" if q in right else "left", "phase": q in phase}
            for q in range(ext.n)
        ],
        "edges": [[i + 1, j + 1] for i, j in ext.edges()],
        "J": ext.j.to_lists(),
    }


def dump_json(ext: GraphExtraction) -> str:
    return json.dumps(to_json(ext), indent=2)


def to_dot(ext: GraphExtraction, name: str = "G") -> str:
    right, phase = set(ext.right), set(ext.phase_nodes)
    lines = [f'graph "{name}" {{']
    for q in range(ext.n):
        attrs = ['style=filled', 'fillcolor="white"' if q in right else 'fillcolor="lightblue"']
        if q in phase:
            attrs.append("shape=doublecircle")
        lines.append(f"  {q + 1} [{', '.join(attrs)}];")
    for i, j in ext.edges():
        lines.append(f"  {i + 1} -- {j + 1};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def describe(ext: GraphExtraction) -> str:
    lines = [f"left  = {[q + 1 for q in ext.left]}", f"right = {[q + 1 for q in ext.right]}"]
    lines.append(f"phase = {[q + 1 for q in ext.phase_nodes]}")
    lines.append("Gamma:")
    lines += ["  " + format_bits(r, ext.n) for r in ext.gamma.rows]
    return "\n".join(lines)
