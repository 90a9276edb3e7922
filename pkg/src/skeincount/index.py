"""Formal dimensions and the weighted dbar index on a cylinder or strip.

The analytic count: with exponential weights (d-, d+) off the walls 2*pi*Z,

    index = #{m : d- < 2 pi m < -d+}        if d- + d+ <= 0
    index = -#{m : -d- < 2 pi m < d+}       otherwise.

The numeric cross-check splits into Fourier modes.  Mode m of dbar is the
ODE f' + 2 pi m f = 0 whose solution e^(-2 pi m s) must lie in the weighted
space e^(d|s|) L^2 at both ends.  Conjugating by the weight gives
g' + A(s) g on plain L^2 with A = 2 pi m - d'(s), which is discretized on
[-S, S] by a midpoint rule.  A mode is in the kernel iff the discrete null
vector decays at both ends; the formal adjoint -g' + A g is treated the same
way and gives the cokernel.  Independently, the smallest singular value of
each discretized operator must be tiny exactly when the other one has a
decaying null vector; disagreement or an unclear gap is reported as
inconclusive.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

__all__ = [
    "DimInput",
    "WeightPair",
    "WallError",
    "InconclusiveError",
    "formal_dim_closed",
    "formal_dim_open",
    "dbar_index",
    "dbar_index_numeric",
    "mode_contributions",
    "random_weight_pairs",
    "FIXED_WEIGHTS",
]

TWO_PI = 2.0 * math.pi
WALL_TOL = 1e-12
LOCALIZED = 1e-2
SPREAD = 0.5
# a singular value below SMALL * rate marks a decaying (co)kernel direction,
# above LARGE * rate it does not; in between the discretization is too coarse
SMALL = 0.1
LARGE = 0.5


class WallError(ValueError):
    """A weight lies on the wall 2*pi*Z."""


class InconclusiveError(RuntimeError):
    """The discretization cannot decide a mode."""


@dataclass(frozen=True)
class DimInput:
    n: int
    chi: int
    c1: int = 0
    mu: int = 0


def formal_dim_closed(d: DimInput) -> int:
    """(n - 3) chi + 2 <c1, u[Sigma]>."""
    return (d.n - 3) * d.chi + 2 * d.c1


def formal_dim_open(d: DimInput) -> int:
    """(n - 3) chi + mu."""
    return (d.n - 3) * d.chi + d.mu


def _on_wall(x: float) -> bool:
    k = round(x / TWO_PI)
    return abs(x - TWO_PI * k) < WALL_TOL * max(1.0, abs(x))


@dataclass(frozen=True)
class WeightPair:
    d_minus: float
    d_plus: float
    boundary: str = "cylinder"  # or "strip"

    def __post_init__(self):
        if self.boundary not in ("cylinder", "strip"):
            raise ValueError(f"boundary type must be cylinder or strip, not {self.boundary!r}")
        for x in (self.d_minus, self.d_plus):
            if not math.isfinite(x):
                raise ValueError("weights must be finite")
            if _on_wall(x):
                raise WallError(f"weight {x} lies on the wall 2*pi*Z")

    @property
    def unit(self) -> str:
        return "C" if self.boundary == "cylinder" else "R"


def _count_open(lo: float, hi: float) -> int:
    """#{m in Z : lo < 2 pi m < hi}."""
    if hi <= lo:
        return 0
    first = math.floor(lo / TWO_PI) + 1
    last = math.ceil(hi / TWO_PI) - 1
    return max(0, last - first + 1)


def dbar_index(w: WeightPair) -> int:
    """Fredholm index of the weighted dbar operator (complex units on a cylinder,
    real units on a strip; the strip uses the same counting sets)."""
    if w.d_minus + w.d_plus <= 0:
        return _count_open(w.d_minus, -w.d_plus)
    return -_count_open(-w.d_minus, w.d_plus)


def _null_profile(A_mid: np.ndarray, h: float, adjoint: bool) -> np.ndarray:
    """log|g| of the null vector of the bidiagonal discretization."""
    c = 1.0 / h
    if adjoint:
        # -(g1 - g0)/h + A (g0 + g1)/2 = 0
        ratio = (c + A_mid / 2) / (c - A_mid / 2)
    else:
        # (g1 - g0)/h + A (g0 + g1)/2 = 0
        ratio = (c - A_mid / 2) / (c + A_mid / 2)
    return np.concatenate([[0.0], np.cumsum(np.log(np.abs(ratio)))])


def _smallest_singular(A_mid: np.ndarray, h: float, adjoint: bool) -> float:
    """Smallest singular value of the (N-1) x N bidiagonal operator via D D^T."""
    c = 1.0 / h
    sgn = -1.0 if adjoint else 1.0
    lo = -sgn * c + A_mid / 2  # coefficient on g_i
    hi = sgn * c + A_mid / 2  # coefficient on g_{i+1}
    diag = lo * lo + hi * hi
    off = hi[:-1] * lo[1:]
    ev = eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    return float(math.sqrt(max(ev[0], 0.0)))


def _classify(logg: np.ndarray) -> bool | None:
    top = logg.max()
    ends = (math.exp(logg[0] - top), math.exp(logg[-1] - top))
    if max(ends) < LOCALIZED:
        return True
    if max(ends) > SPREAD:
        return False
    return None


def mode_contributions(w: WeightPair, modes: int | None = None, length: float = 10.0,
                       grid: int = 2000) -> list:
    """Per mode: (m, in kernel, in cokernel)."""
    need = math.ceil(max(abs(w.d_minus), abs(w.d_plus)) / TWO_PI) + 2
    if modes is None:
        modes = need
    if modes < need:
        raise ValueError(f"need at least {need} modes for these weights")
    if grid < 200 or length < 5:
        raise ValueError("grid must be >= 200 points and length >= 5")
    s = np.linspace(-length, length, grid)
    h = s[1] - s[0]
    mid = 0.5 * (s[1:] + s[:-1])
    dprime = np.where(mid > 0, w.d_plus, -w.d_minus)
    out = []
    for m in range(-modes, modes + 1):
        A = TWO_PI * m - dprime
        rate = float(np.min(np.abs(A)))
        if rate * length < math.log(1 / LOCALIZED):
            # e^(-rate*S) cannot drop below the localization threshold
            raise InconclusiveError(f"mode {m}: decay rate {rate:.3g} unresolvable on [-{length}, {length}]")
        verdicts = []
        for adjoint in (False, True):
            v = _classify(_null_profile(A, h, adjoint))
            if v is None:
                raise InconclusiveError(f"mode {m}: null vector neither localized nor spread; increase length")
            verdicts.append(v)
        for adjoint, other in ((False, verdicts[1]), (True, verdicts[0])):
            sv = _smallest_singular(A, h, adjoint)
            if SMALL * rate <= sv <= LARGE * rate:
                raise InconclusiveError(f"mode {m}: singular-value gap below threshold ({sv:.3g})")
            if (sv < SMALL * rate) != other:
                raise InconclusiveError(f"mode {m}: spectral and decay verdicts disagree")
        out.append((m, verdicts[0], verdicts[1]))
    return out


def dbar_index_numeric(w: WeightPair, modes: int | None = None, length: float = 10.0,
                       grid: int = 2000) -> int:
    """Kernel minus cokernel count of the discretized operator."""
    rows = mode_contributions(w, modes, length, grid)
    return sum(int(k) for _, k, _ in rows) - sum(int(c) for _, _, c in rows)


FIXED_WEIGHTS = [
    (-1.0, -1.0), (1.0, 1.0), (-7.0, -7.0), (7.0, 7.0), (-1.0, 3.0),
    (2.0, -9.0), (-9.5, 0.5), (3.5, 3.5), (-3.5, -3.5), (9.0, -1.5),
]


def random_weight_pairs(count: int = 10, bound: float = 10.0, margin: float = 0.5, seed: int = 7) -> list:
    """Weight pairs with |d| < bound, each weight at least ``margin`` from 2 pi Z
    so every mode decays at a resolvable rate."""
    rng = random.Random(seed)
    out = []

    def dist(x):
        return abs(x - TWO_PI * round(x / TWO_PI))

    while len(out) < count:
        a, b = rng.uniform(-bound, bound), rng.uniform(-bound, bound)
        if min(dist(a), dist(b)) >= margin:
            out.append((a, b))
    return out
