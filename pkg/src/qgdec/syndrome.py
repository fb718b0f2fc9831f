"""Stabilizer, logical and graph syndromes.

Bit convention: 1 means the error anticommutes with the generator (outcome -1).
``gamma`` concatenates the stabilizer syndrome and the logical syndrome, in
generator order, and ``alpha = gamma J`` is the graph syndrome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codes import StabilizerCode
from .gf2 import BitVec, vecmat
from .graphext import GraphExtraction, frame_map
from .pauli import PauliOperator, symplectic_product


@dataclass(frozen=True)
class SyndromeSet:
    beta: BitVec
    beta_tilde: BitVec
    gamma: BitVec
    alpha: BitVec


def _syndrome_bits(ops, e: PauliOperator) -> int:
    return sum(symplectic_product(e, s) << j for j, s in enumerate(ops))


def measure_beta(code: StabilizerCode, e: PauliOperator) -> BitVec:
    return BitVec(code.n - code.k, _syndrome_bits(code.stabilizers, e))


def measure_beta_tilde(code: StabilizerCode, e: PauliOperator) -> BitVec:
    """Anticommutation with the logical Z operators. Bookkeeping only; a decoder never sees it."""
    return BitVec(code.k, _syndrome_bits(code.logical_z, e))


def alpha_from_gamma(ext: GraphExtraction, gamma: BitVec) -> BitVec:
    if gamma.length != ext.n:
        raise ValueError(f"gamma must have {ext.n} bits, got {gamma.length}")
    return BitVec(ext.n, vecmat(gamma.bits, ext.j))


def alpha_direct(ext: GraphExtraction, e: PauliOperator) -> BitVec:
    """Graph syndrome ``mu Gamma + nu`` of ``e`` taken to the graph frame as ``(mu, nu)``."""
    g = frame_map(ext, e)
    return BitVec(ext.n, vecmat(g.x, ext.gamma) ^ g.z)


def syndromes(code: StabilizerCode, ext: GraphExtraction, e: PauliOperator) -> SyndromeSet:
    beta = measure_beta(code, e)
    beta_tilde = measure_beta_tilde(code, e)
    gamma = beta.concat(beta_tilde)
    return SyndromeSet(beta, beta_tilde, gamma, alpha_from_gamma(ext, gamma))


class SyndromeTable:
    """Per-qubit syndrome contributions, so sampled errors are measured by XOR."""

    def __init__(self, code: StabilizerCode):
        self.code = code
        n = code.n
        self._x = [_syndrome_bits(code.stabilizers, PauliOperator(n, 1 << q, 0)) for q in range(n)]
        self._z = [_syndrome_bits(code.stabilizers, PauliOperator(n, 0, 1 << q)) for q in range(n)]

    def beta_bits(self, e: PauliOperator) -> int:
        out = 0
        x, z = e.x, e.z
        q = 0
        while x or z:
            if x & 1:
                out ^= self._x[q]
            if z & 1:
                out ^= self._z[q]
            x >>= 1
            z >>= 1
            q += 1
        return out
