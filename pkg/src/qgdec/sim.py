"""I.i.d. Pauli noise, fixed-failure Monte Carlo and exact small-code enumeration.

Shots are numbered globally. With ``W`` workers, shot ``i`` belongs to worker
``i % W`` and is the ``i // W``-th draw from that worker's stream, seeded from
``(seed, worker)``. The run stops at the shot that produces the ``M_L``-th
failure in global order, so results do not depend on thread scheduling.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codes import BudgetExceeded, StabilizerCode
from .decoder import DecodeConfig, decode
from .graphext import GraphExtraction
from .pauli import PauliOperator, symplectic_product


class CapReached(RuntimeError):
    """Shot cap hit before the failure target; ``result`` holds the partial estimate."""

    def __init__(self, result: "RunResult"):
        super().__init__(f"shot cap reached after {result.M} shots with {result.M_L} failures")
        self.result = result


@dataclass(frozen=True)
class NoiseModel:
    p_x: float
    p_y: float
    p_z: float
    name: str = "pxyz"

    def __post_init__(self):
        if min(self.p_x, self.p_y, self.p_z) < 0 or self.p_x + self.p_y + self.p_z > 1 + 1e-12:
            raise ValueError(f"invalid Pauli probabilities ({self.p_x}, {self.p_y}, {self.p_z})")

    @classmethod
    def depolarizing(cls, p: float) -> "NoiseModel":
        return cls(p / 3, p / 3, p / 3, "depolarizing")

    @classmethod
    def bitflip(cls, p: float) -> "NoiseModel":
        return cls(p, 0.0, 0.0, "bitflip")

    @property
    def p(self) -> float:
        return self.p_x + self.p_y + self.p_z

    @property
    def x_only(self) -> bool:
        return self.p_y == 0 and self.p_z == 0

    def probability(self, e: PauliOperator) -> float:
        """Probability of drawing exactly ``e``."""
        ny = (e.x & e.z).bit_count()
        nx = e.x.bit_count() - ny
        nz = e.z.bit_count() - ny
        ni = e.n - nx - ny - nz
        return (1 - self.p) ** ni * self.p_x ** nx * self.p_y ** ny * self.p_z ** nz

    def describe(self) -> str:
        if self.name == "depolarizing":
            return f"depolarizing:p={self.p:g}"
        if self.name == "bitflip":
            return f"bitflip:p={self.p:g}"
        return f"pxyz:{self.p_x:g},{self.p_y:g},{self.p_z:g}"


def parse_noise(text: str, p: float | None = None) -> NoiseModel:
    """Parse ``depolarizing:p=0.1``, ``bitflip:p=0.05`` or ``pxyz:0.01,0,0.02``.

    ``p`` supplies the strength when the text gives only the channel name.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "pxyz":
        try:
            vals = [float(v) for v in rest.split(",")]
        except ValueError:
            raise ValueError(f"bad pxyz noise spec {text!r}") from None
        if len(vals) != 3:
            raise ValueError("pxyz needs three probabilities")
        return NoiseModel(*vals)
    if kind not in ("depolarizing", "bitflip"):
        raise ValueError(f"unknown noise channel {kind!r}")
    if rest:
        key, _, val = rest.partition("=")
        if key.strip() != "p" or not val:
            raise ValueError(f"bad noise parameter {rest!r}")
        p = float(val)
    if p is None:
        raise ValueError(f"noise {kind!r} needs a strength p")
    return getattr(NoiseModel, kind)(p)


def worker_rng(seed: int, worker: int) -> np.random.Generator:
    """Counter-based stream for one worker."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, worker])))


def _sample_bits(model: NoiseModel, shape, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    u = rng.random(shape)
    a = model.p_x
    b = a + model.p_y
    c = b + model.p_z
    x = u < b
    z = (u >= a) & (u < c)
    return x, z


def sample_error(model: NoiseModel, n: int, rng: np.random.Generator) -> PauliOperator:
    x, z = _sample_bits(model, n, rng)
    return PauliOperator(n, sum(1 << i for i in np.flatnonzero(x)), sum(1 << i for i in np.flatnonzero(z)))


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    target_failures: int = 100
    max_shots: int = 10_000_000
    workers: int = 1
    decode_cfg: DecodeConfig = field(default_factory=DecodeConfig)
    batch: int = 4096

    def __post_init__(self):
        if self.target_failures < 1:
            raise ValueError("target_failures must be at least 1")
        if self.workers < 1 or self.max_shots < 1 or self.batch < 1:
            raise ValueError("workers, max_shots and batch must be positive")


@dataclass(frozen=True)
class RunResult:
    M: int
    M_L: int
    wall_seconds: float
    capped: bool = False

    @property
    def p_L(self) -> float:
        return self.M_L / self.M if self.M else 0.0

    @property
    def stderr(self) -> float:
        if not self.M:
            return 0.0
        p = self.p_L
        return math.sqrt(p * (1 - p) / self.M)


def _bits_to_matrix(rows: list[int], n: int) -> np.ndarray:
    return np.array([[(r >> i) & 1 for i in range(n)] for r in rows], dtype=np.uint8).reshape(len(rows), n)


def _pack_rows(bits: np.ndarray) -> list[int]:
    """Each 0/1 row as a Python int with column j at bit j (no width limit)."""
    packed = np.packbits(bits.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


class _BatchEvaluator:
    """Vectorised syndrome and failure evaluation with a per-syndrome decode cache."""

    def __init__(self, code: StabilizerCode, ext: GraphExtraction, cfg: DecodeConfig):
        self.code, self.ext, self.cfg = code, ext, cfg.resolve(code)
        n = code.n
        stabs = code.stabilizers
        logicals = code.logical_z + code.logical_x
        # anticommutation: e.x . s.z + e.z . s.x
        self.hx = _bits_to_matrix([s.z for s in stabs], n).T.astype(np.int64)
        self.hz = _bits_to_matrix([s.x for s in stabs], n).T.astype(np.int64)
        self.lx = _bits_to_matrix([p.z for p in logicals], n).T.astype(np.int64)
        self.lz = _bits_to_matrix([p.x for p in logicals], n).T.astype(np.int64)
        self._logicals = logicals
        self._cache: dict[int, int] = {}

    def correction_signature(self, beta: int) -> int:
        """Logical anticommutation pattern of the decoder's correction for ``beta``."""
        sig = self._cache.get(beta)
        if sig is None:
            corr = decode(self.code, self.ext, beta, self.cfg).correction
            sig = sum(symplectic_product(corr, p) << j for j, p in enumerate(self._logicals))
            self._cache[beta] = sig
        return sig

    def failures(self, x: np.ndarray, z: np.ndarray) -> np.ndarray:
        xi, zi = x.astype(np.int64), z.astype(np.int64)
        beta = _pack_rows((xi @ self.hx + zi @ self.hz) & 1)
        lsig = _pack_rows((xi @ self.lx + zi @ self.lz) & 1)
        return np.array([self.correction_signature(b) != s for b, s in zip(beta, lsig)], dtype=bool)

    @property
    def cache_size(self) -> int:
        return len(self._cache)


def run_until_failures(
    code: StabilizerCode, ext: GraphExtraction, model: NoiseModel, cfg: RunConfig, progress=None
) -> RunResult:
    """Sample, decode and adjudicate until ``cfg.target_failures`` failures or the shot cap.

    ``progress`` is called as ``progress(shots, failures)`` after each round.
    Raises :class:`CapReached` (with the partial result) when the cap is hit.
    """
    start = time.perf_counter()
    ev = _BatchEvaluator(code, ext, cfg.decode_cfg)
    W, B, n = cfg.workers, cfg.batch, code.n
    rngs = [worker_rng(cfg.seed, w) for w in range(W)]
    pool = ThreadPoolExecutor(max_workers=W) if W > 1 else None

    def draw(w: int):
        return _sample_bits(model, (B, n), rngs[w])

    shots = failures = 0
    try:
        while shots < cfg.max_shots:
            draws = list(pool.map(draw, range(W))) if pool else [draw(0)]
            # interleave so that row j*W + w is worker w's j-th shot
            x = np.stack([d[0] for d in draws], axis=1).reshape(B * W, n)
            z = np.stack([d[1] for d in draws], axis=1).reshape(B * W, n)
            take = min(B * W, cfg.max_shots - shots)
            fail = ev.failures(x[:take], z[:take])
            cum = np.cumsum(fail)
            need = cfg.target_failures - failures
            if cum.size and cum[-1] >= need:
                stop = int(np.searchsorted(cum, need)) + 1
                shots += stop
                failures += need
                return RunResult(shots, failures, time.perf_counter() - start)
            shots += take
            failures += int(cum[-1]) if cum.size else 0
            if progress:
                progress(shots, failures)
    finally:
        if pool:
            pool.shutdown()
    raise CapReached(RunResult(shots, failures, time.perf_counter() - start, capped=True))


def exact_p_L(
    code: StabilizerCode, ext: GraphExtraction, model: NoiseModel, decode_cfg: DecodeConfig | None = None
) -> float:
    """Exact logical error rate by enumerating every error with nonzero probability."""
    n = code.n
    if model.x_only:
        if n > 13:
            raise BudgetExceeded(f"bit-flip enumeration limited to N <= 13, got {n}")
        letters = ("I", "X")
    else:
        if n > 8:
            raise BudgetExceeded(f"full Pauli enumeration limited to N <= 8, got {n}")
        letters = ("I", "X", "Y", "Z")
    ev = _BatchEvaluator(code, ext, decode_cfg or DecodeConfig())
    bits = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
    prob = {"I": 1 - model.p, "X": model.p_x, "Y": model.p_y, "Z": model.p_z}
    combos = list(itertools.product(letters, repeat=n))
    x = np.array([[bits[c][0] for c in combo] for combo in combos], dtype=np.uint8)
    z = np.array([[bits[c][1] for c in combo] for combo in combos], dtype=np.uint8)
    probs = np.array([math.prod(prob[c] for c in combo) for combo in combos])
    fail = ev.failures(x, z)
    return float(probs[fail].sum())


def t_over_n(code: StabilizerCode) -> float:
    return code.t / code.n


CSV_HEADER = ("code", "N", "k", "d", "noise", "p", "T", "seed", "M", "ML", "pL", "stderr", "wall_seconds")


def csv_row(code: StabilizerCode, model: NoiseModel, T: int, seed: int, res: RunResult) -> dict:
    return {
        "code": code.name, "N": code.n, "k": code.k, "d": code.d,
        "noise": model.name, "p": f"{model.p:.6g}", "T": T, "seed": seed,
        "M": res.M, "ML": res.M_L, "pL": f"{res.p_L:.8g}", "stderr": f"{res.stderr:.8g}",
        "wall_seconds": f"{res.wall_seconds:.3f}",
    }
