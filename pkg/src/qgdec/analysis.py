"""Derived code quantities and the finite-size-scaling collapse fit."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from .codes import StabilizerCode

# Optimal (maximum-likelihood) bit-flip thresholds, for comparison in reports.
REFERENCE_THRESHOLDS = {"color": 0.109, "surface": 0.1094}


class InsufficientData(ValueError):
    pass


def correctable_fraction(code: StabilizerCode) -> Fraction:
    """Share of stabilizer syndromes owned by some error of weight at most ``t``."""
    count = sum(comb(code.n, q) * 3 ** q for q in range(code.t + 1))
    return Fraction(count, 2 ** (code.n - code.k))


def search_space(n: int, T: int) -> int:
    """Number of supports of weight at most ``T`` over ``n`` nodes."""
    if not 0 <= T <= n:
        raise ValueError(f"T={T} outside [0, {n}]")
    return sum(comb(n, q) for q in range(T + 1))


def code_search_space(code: StabilizerCode, T: int, css: bool = False, ext=None) -> int:
    """Search-space size for ``code``; with ``css`` the larger bipartition side replaces ``N``.

    ``ext`` must be the code's graph extraction when ``css`` is set.
    """
    if not css:
        return search_space(code.n, T)
    if ext is None:
        raise ValueError("CSS search space needs the graph extraction")
    side = max(len(ext.left), len(ext.right))
    return search_space(side, min(T, side))


@dataclass(frozen=True)
class SingletonReport:
    t_over_n: float
    bound: float
    ok: bool


def singleton_report(code: StabilizerCode) -> SingletonReport:
    """Compare ``t/N`` with the quantum Singleton limit ``1/4 - 1/(4N)`` (k = 1)."""
    if code.k != 1:
        raise ValueError("singleton report is defined for k = 1")
    ratio = code.t / code.n
    bound = 0.25 - 1 / (4 * code.n)
    return SingletonReport(ratio, bound, ratio <= bound + 1e-12)


@dataclass(frozen=True)
class CollapsePoint:
    p: float
    d: int
    p_L: float
    stderr: float | None = None


@dataclass(frozen=True)
class CollapseConfig:
    window: tuple[float, float]
    poly_degree: int = 3
    pc_step: float = 0.002
    nu_range: tuple[float, float] = (0.5, 3.0)
    nu_step: float = 0.05
    max_iter: int = 200


@dataclass(frozen=True)
class CollapseFit:
    p_c: float
    nu: float
    poly_degree: int
    residual: float
    window: tuple[float, float]
    points_used: int
    converged: bool = True
    grid_best: tuple[float, float, float] | None = None

    def report(self) -> dict:
        out = {
            "p_c": self.p_c, "nu": self.nu, "residual": self.residual,
            "degree": self.poly_degree, "window": list(self.window),
            "points_used": self.points_used, "converged": self.converged,
            "reference_optimal_thresholds": REFERENCE_THRESHOLDS,
        }
        return out

    def to_json(self) -> str:
        return json.dumps(self.report(), indent=2)


def _residual(pc: float, nu: float, p, d, y, w, degree: int) -> float:
    x = (p - pc) * d ** (1.0 / nu)
    sw = np.sqrt(w)
    vander = np.vander(x, degree + 1) * sw[:, None]
    coef, *_ = np.linalg.lstsq(vander, y * sw, rcond=None)
    r = vander @ coef - y * sw
    return float(r @ r)


def collapse_fit(points: Iterable[CollapsePoint], config: CollapseConfig) -> CollapseFit:
    """Fit ``p_L = f((p - p_c) d**(1/nu))`` with ``f`` a polynomial.

    A coarse grid over ``(p_c, nu)`` seeds a Nelder-Mead refinement. Points
    are weighted by ``1/stderr**2`` when every point carries a positive stderr.
    If the refinement fails or leaves the window, the best grid point is
    returned with ``converged=False``.
    """
    lo, hi = config.window
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    # canonical order keeps the fit independent of input order
    pts = sorted((pt for pt in points if lo <= pt.p <= hi), key=lambda q: (q.d, q.p, q.p_L, q.stderr or 0.0))
    if len({pt.d for pt in pts}) < 2:
        raise InsufficientData("collapse fit needs at least two distinct distances in the window")
    if len(pts) < config.poly_degree + 2:
        raise InsufficientData(f"need at least {config.poly_degree + 2} points, got {len(pts)}")
    p = np.array([pt.p for pt in pts], dtype=float)
    d = np.array([pt.d for pt in pts], dtype=float)
    y = np.array([pt.p_L for pt in pts], dtype=float)
    if all(pt.stderr for pt in pts):
        w = 1.0 / np.array([pt.stderr for pt in pts], dtype=float) ** 2
        w /= w.mean()
    else:
        w = np.ones_like(p)

    deg = config.poly_degree
    pcs = np.arange(lo, hi + 1e-12, config.pc_step)
    nus = np.arange(config.nu_range[0], config.nu_range[1] + 1e-12, config.nu_step)
    best = (np.inf, lo, nus[0])
    for pc in pcs:
        for nu in nus:
            r = _residual(pc, nu, p, d, y, w, deg)
            if r < best[0]:
                best = (r, float(pc), float(nu))
    r0, pc0, nu0 = best

    def objective(v):
        pc, nu = v
        if nu <= 0 or not lo <= pc <= hi:
            return np.inf
        return _residual(pc, nu, p, d, y, w, deg)

    res = minimize(objective, [pc0, nu0], method="Nelder-Mead",
                   options={"maxiter": config.max_iter, "xatol": 1e-6, "fatol": 1e-12})
    pc1, nu1 = (float(v) for v in res.x)
    r1 = objective(res.x)
    if np.isfinite(r1) and r1 <= r0:
        return CollapseFit(pc1, nu1, deg, float(r1), (lo, hi), len(pts), bool(res.success), (pc0, nu0, r0))
    return CollapseFit(pc0, nu0, deg, float(r0), (lo, hi), len(pts), False, (pc0, nu0, r0))


def points_from_csv(path: str) -> list[CollapsePoint]:
    """Read simulation CSV rows into collapse points."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            se = float(row["stderr"]) if row.get("stderr") else None
            out.append(CollapsePoint(float(row["p"]), int(row["d"]), float(row["pL"]), se or None))
    return out


def synthetic_points(
    p_c: float, nu: float, ds: Sequence[int], ps: Sequence[float], coeffs=(2.0, 0.8, 0.1),
    noise: float = 0.01, seed: int = 0,
) -> list[CollapsePoint]:
    """Points from a planted collapse with multiplicative Gaussian noise.

    ``coeffs`` are polynomial coefficients, highest power first.
    """
    rng = np.random.default_rng(seed)
    out = []
    for dd in ds:
        for pp in ps:
            x = (pp - p_c) * dd ** (1 / nu)
            val = float(np.polyval(coeffs, x))
            val *= 1 + noise * rng.standard_normal()
            out.append(CollapsePoint(float(pp), int(dd), val, abs(val) * noise or None))
    return out


def fit_to_dict(fit: CollapseFit) -> dict:
    return asdict(fit)
