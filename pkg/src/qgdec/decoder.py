"""Graph-aware bounded distance decoding.

For a graph syndrome ``alpha`` the coset of matching errors (graph frame) is
``{(mu, mu Gamma + alpha)}``. Every member has weight at least ``|mu|``, so
scanning supports ``mu`` by increasing size up to a bound ``T`` finds the coset
minimum whenever it weighs at most ``T``. The stabilizer syndrome fixes
``alpha`` only up to the ``2**k`` logical syndromes, each of which is tried.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from math import comb
from typing import Sequence

from .codes import AtLeast, BudgetExceeded, StabilizerCode
from .gf2 import BitMatrix, BitVec, parse_bits, vecmat
from .graphext import GraphExtraction, frame_map
from .pauli import PauliOperator, symplectic_product
from .syndrome import SyndromeTable


class NotCSS(ValueError):
    pass


class SyndromeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DecodeConfig:
    """``T=None`` resolves to ``t = (d-1)//2``; ``css_fastpath=None`` resolves to ``code.css``."""

    T: int | None = None
    prune: bool = True
    structured: bool = True
    css_fastpath: bool | None = None
    exhaustive_mld: bool = False

    def resolve(self, code: StabilizerCode) -> "DecodeConfig":
        t = code.n if self.exhaustive_mld else (code.t if self.T is None else self.T)
        if self.exhaustive_mld and self.T not in (None, code.n):
            raise ValueError("exhaustive_mld requires T == N")
        if not 0 <= t <= code.n:
            raise ValueError(f"T={t} outside [0, {code.n}]")
        fast = code.css if self.css_fastpath is None else self.css_fastpath
        return replace(self, T=t, css_fastpath=fast)


@dataclass(frozen=True)
class FFN:
    """Layered view of the graph rooted at the graph-syndrome nodes.

    ``layers[0]`` is L1. ``layer_of[i]`` is the 1-based layer of node ``i``
    (0 when the node is unreachable from the syndrome).
    """

    layers: tuple[tuple[int, ...], ...]
    layer_of: tuple[int, ...]

    def nodes_up_to(self, depth: int) -> int:
        mask = 0
        for layer in self.layers[:depth]:
            for i in layer:
                mask |= 1 << i
        return mask


def _nbhd(rows: Sequence[int], mask: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= rows[low.bit_length() - 1]
        mask ^= low
    return out


def _mask_nodes(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def build_ffn(gamma: BitMatrix | Sequence[int], alpha: int | BitVec) -> FFN:
    rows = gamma.rows if isinstance(gamma, BitMatrix) else tuple(gamma)
    a = alpha.bits if isinstance(alpha, BitVec) else alpha
    n = len(rows)
    layer_of = [0] * n
    layers = []
    if a:
        current = a | _nbhd(rows, a)
        seen = 0
        while current:
            layers.append(_mask_nodes(current))
            for i in layers[-1]:
                layer_of[i] = len(layers)
            seen |= current
            step = _nbhd(rows, current)
            current = (step | _nbhd(rows, step)) & ~seen
    return FFN(tuple(layers), tuple(layer_of))


def coset_member(gamma: BitMatrix, alpha: int | BitVec, mu: int | BitVec) -> PauliOperator:
    """The coset element ``(mu, mu Gamma + alpha)`` in the graph frame."""
    a = alpha.bits if isinstance(alpha, BitVec) else alpha
    m = mu.bits if isinstance(mu, BitVec) else mu
    return PauliOperator(gamma.nrows, m, vecmat(m, gamma) ^ a)


@dataclass(frozen=True)
class CosetMinimum:
    mu: int
    nu: int
    weight: int
    bounded: bool
    explored: int


def coset_minimum(
    gamma: BitMatrix | Sequence[int],
    alpha: int | BitVec,
    T: int,
    prune: bool = True,
    structured: bool = True,
    allowed: int | None = None,
) -> CosetMinimum:
    """Lowest-weight ``(mu, mu Gamma + alpha)`` with ``|mu| <= T``.

    ``allowed`` restricts the support of ``mu`` (used by the CSS decoder).
    Falls back to ``(0, alpha)``; ``bounded`` flags that fallback when
    ``|alpha| > T`` leaves it unproven.
    """
    rows = gamma.rows if isinstance(gamma, BitMatrix) else tuple(gamma)
    a = alpha.bits if isinstance(alpha, BitVec) else alpha
    n = len(rows)
    wa = a.bit_count()
    if wa == 0:
        return CosetMinimum(0, 0, 0, False, 1)
    qmax = min(T, wa)

    if prune or structured:
        ffn = build_ffn(rows, a)
        depth = qmax if prune else len(ffn.layers)
        cand = [i for i in range(n) if 0 < ffn.layer_of[i] <= depth]
        layer = ffn.layer_of
    else:
        cand = list(range(n))
        layer = [0] * n
    if allowed is not None:
        cand = [i for i in cand if (allowed >> i) & 1]
    if structured:
        cand.sort(key=lambda i: (layer[i], i))

    best_mu, best_nu, best_w = 0, a, wa
    explored = 1
    cand_bits = [1 << i for i in cand]
    cand_rows = [rows[i] for i in cand]
    cand_layer = [layer[i] for i in cand]
    m = len(cand)

    for q in range(1, qmax + 1):
        if best_w <= q:
            break
        # Depth-first over q-subsets in enumeration order, nu updated incrementally.
        stack_mu = [0] * (q + 1)
        stack_nu = [0] * (q + 1)
        stack_top = [0] * (q + 1)
        stack_nu[0] = a
        idx = [0] * q
        depth = 0
        pos = 0
        while True:
            if best_w <= q:
                break
            if depth == q:
                mu, nu = stack_mu[q], stack_nu[q]
                explored += 1
                w = (mu | nu).bit_count()
                if w < best_w:
                    best_mu, best_nu, best_w = mu, nu, w
                depth -= 1
                pos = idx[depth] + 1
                continue
            if pos > m - (q - depth):
                if depth == 0:
                    break
                depth -= 1
                pos = idx[depth] + 1
                continue
            if structured:
                lay = cand_layer[pos]
                # Occupied layers must form a prefix L1..Lm; candidates are layer-sorted.
                if depth == 0:
                    if lay != 1:
                        break
                elif lay > stack_top[depth] + 1:
                    depth -= 1
                    pos = idx[depth] + 1
                    continue
                top = max(stack_top[depth], lay)
            else:
                top = 0
            idx[depth] = pos
            stack_mu[depth + 1] = stack_mu[depth] | cand_bits[pos]
            stack_nu[depth + 1] = stack_nu[depth] ^ cand_rows[pos]
            stack_top[depth + 1] = top
            depth += 1
            pos += 1

    bounded = best_mu == 0 and wa > T
    return CosetMinimum(best_mu, best_nu, best_w, bounded, explored)


@dataclass(frozen=True)
class DecodeResult:
    correction: PauliOperator
    weight: int
    branch: int
    branch_weights: tuple[int, ...]
    explored: int
    bounded: bool


def _beta_bits(code: StabilizerCode, beta) -> int:
    m = code.n - code.k
    if isinstance(beta, BitVec):
        if beta.length != m:
            raise ValueError(f"syndrome must have {m} bits, got {beta.length}")
        return beta.bits
    if isinstance(beta, str):
        if len(beta.strip()) != m:
            raise ValueError(f"syndrome must have {m} bits, got {len(beta.strip())}")
        return parse_bits(beta)
    if beta < 0 or beta >> m:
        raise ValueError("syndrome out of range")
    return int(beta)


def decode(code: StabilizerCode, ext: GraphExtraction, beta, cfg: DecodeConfig | None = None) -> DecodeResult:
    """Minimum-weight correction over all logical-syndrome branches.

    Ties go to the smallest branch value. CSS codes are routed to
    :func:`decode_css` when ``css_fastpath`` resolves true.
    """
    cfg = (cfg or DecodeConfig()).resolve(code)
    if cfg.css_fastpath:
        return decode_css(code, ext, beta, cfg)
    b = _beta_bits(code, beta)
    shift = code.n - code.k
    best = None
    weights = []
    explored = 0
    for bt in range(1 << code.k):
        alpha = vecmat(b | (bt << shift), ext.j)
        res = coset_minimum(ext.gamma, alpha, cfg.T, cfg.prune, cfg.structured)
        explored += res.explored
        weights.append(res.weight)
        if best is None or res.weight < best[1].weight:
            best = (bt, res)
    bt, res = best
    corr = frame_map(ext, PauliOperator(code.n, res.mu, res.nu), to_graph=False)
    return DecodeResult(corr, corr.weight(), bt, tuple(weights), explored, res.bounded)


def _is_pure(p: PauliOperator, kind: str) -> bool:
    return p.z == 0 if kind == "X" else p.x == 0


def decode_css(code: StabilizerCode, ext: GraphExtraction, beta, cfg: DecodeConfig | None = None) -> DecodeResult:
    """Decode the X and Z halves of a CSS syndrome separately on the bipartite graph.

    X errors light only right nodes, so their search runs over left-node
    supports; Z errors light only left nodes and search over right nodes.
    Z errors always commute with the Z-type logicals, so the Z half needs only
    the trivial logical branch. The X half still tries every branch.
    """
    if not code.css or ext.phase_nodes or not ext.is_bipartite_lr():
        raise NotCSS(f"{code.name} is not a CSS code with a bipartite extraction")
    if not (all(_is_pure(p, "Z") for p in code.logical_z) and all(_is_pure(p, "X") for p in code.logical_x)):
        raise NotCSS("CSS decoding needs Z-type logical Z and X-type logical X operators")
    cfg = (cfg or DecodeConfig()).resolve(code)
    b = _beta_bits(code, beta)
    shift = code.n - code.k
    zmask = sum(1 << i for i in code.z_checks())
    xmask = sum(1 << i for i in code.x_checks())
    lm, rm = ext.left_mask, ext.right_mask
    explored = 0

    alpha_z = vecmat(b & xmask, ext.j)
    if alpha_z & rm:
        raise NotCSS("Z-error graph syndrome leaks onto right nodes")
    zres = coset_minimum(ext.gamma, alpha_z, cfg.T, cfg.prune, cfg.structured, allowed=rm)
    explored += zres.explored
    zcorr = frame_map(ext, PauliOperator(code.n, zres.mu, zres.nu), to_graph=False)

    best = None
    weights = []
    for bt in range(1 << code.k):
        alpha_x = vecmat((b & zmask) | (bt << shift), ext.j)
        if alpha_x & lm:
            raise NotCSS("X-error graph syndrome leaks onto left nodes")
        res = coset_minimum(ext.gamma, alpha_x, cfg.T, cfg.prune, cfg.structured, allowed=lm)
        explored += res.explored
        xcorr = frame_map(ext, PauliOperator(code.n, res.mu, res.nu), to_graph=False)
        total = xcorr * zcorr
        weights.append(total.weight())
        if best is None or weights[-1] < best[1].weight():
            best = (bt, total, res)
    bt, corr, xres = best
    return DecodeResult(corr, corr.weight(), bt, tuple(weights), explored, xres.bounded or zres.bounded)


class CachedDecoder:
    """Memoises decode results per stabilizer syndrome for repeated sampling."""

    def __init__(self, code: StabilizerCode, ext: GraphExtraction, cfg: DecodeConfig | None = None):
        self.code = code
        self.ext = ext
        self.cfg = (cfg or DecodeConfig()).resolve(code)
        self.table = SyndromeTable(code)
        self._cache: dict[int, DecodeResult] = {}
        logicals = code.logical_z + code.logical_x
        self._lx = [(p.x, p.z) for p in logicals]

    def decode_bits(self, beta: int) -> DecodeResult:
        res = self._cache.get(beta)
        if res is None:
            res = decode(self.code, self.ext, beta, self.cfg)
            self._cache[beta] = res
        return res

    def is_failure(self, error: PauliOperator) -> bool:
        """Decode the sampled error and report whether a logical error results."""
        res = self.decode_bits(self.table.beta_bits(error))
        rx = error.x ^ res.correction.x
        rz = error.z ^ res.correction.z
        return any(((rx & lz).bit_count() + (rz & lx).bit_count()) & 1 for lx, lz in self._lx)

    def __len__(self) -> int:
        return len(self._cache)


def oracle_decode(
    code: StabilizerCode, beta, w_max: int, budget: int = 20_000_000, kinds: str = "XYZ"
) -> PauliOperator | AtLeast:
    """Brute-force lowest-weight Pauli with stabilizer syndrome ``beta``.

    Scans weight 0, 1, ... with qubits in lexicographic order and Pauli
    letters in ``kinds`` order; touches no graph machinery.
    """
    b = _beta_bits(code, beta)
    n = code.n
    cost = sum(comb(n, q) * len(kinds) ** q for q in range(w_max + 1))
    if cost > budget:
        raise BudgetExceeded(f"{cost} candidates exceed budget {budget}")
    stabs = code.stabilizers
    contrib = {}
    for qubit in range(n):
        for kind in kinds:
            p = PauliOperator.single(n, qubit, kind)
            contrib[(qubit, kind)] = sum(symplectic_product(p, s) << j for j, s in enumerate(stabs))
    if b == 0:
        return PauliOperator.identity(n)
    for q in range(1, w_max + 1):
        for positions in itertools.combinations(range(n), q):
            for letters in itertools.product(kinds, repeat=q):
                syn = 0
                for qubit, kind in zip(positions, letters):
                    syn ^= contrib[(qubit, kind)]
                if syn == b:
                    p = PauliOperator.identity(n)
                    for qubit, kind in zip(positions, letters):
                        p = p * PauliOperator.single(n, qubit, kind)
                    return p
    return AtLeast(w_max + 1)


def is_logical_error(code: StabilizerCode, error: PauliOperator, correction: PauliOperator) -> bool:
    """True when ``error * correction`` lies outside the stabilizer group."""
    residual = error * correction
    for j, s in enumerate(code.stabilizers):
        if symplectic_product(residual, s):
            raise SyndromeMismatch(f"correction disagrees with the error on stabilizer S{j + 1}")
    return any(symplectic_product(residual, p) for p in code.logical_z + code.logical_x)

