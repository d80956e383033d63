"""Approach paths, pre-Cantor sets, box counting and power-weight measures."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    InvalidParams,
    InvalidTime,
    MissingDirection,
    NotInSet,
    TooManyIntervals,
)
from .quadrature import gauss_legendre_adaptive, gl_nodes

MAX_CANTOR_GENERATION = 24


# ---------------------------------------------------------------------------
# direction sets and paths

@dataclass(frozen=True)
class Singleton:
    theta: float = 0.0

    def samples(self) -> np.ndarray:
        return np.array([self.theta], dtype=np.float64)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float
    n_samples: int = 17

    def __post_init__(self):
        if not self.a <= self.b:
            raise InvalidParams(f"interval needs a <= b, got [{self.a}, {self.b}]")

    def samples(self) -> np.ndarray:
        if self.a == self.b:
            return np.array([self.a])
        return np.linspace(self.a, self.b, self.n_samples)


@dataclass(frozen=True)
class CantorDirections:
    """Directions in the r-Cantor set, sampled at generation-k endpoints."""

    r: float
    k: int

    def __post_init__(self):
        _check_cantor(self.r, self.k)

    def samples(self) -> np.ndarray:
        return cantor_intervals(self.r, self.k).endpoints


@dataclass(frozen=True)
class Product:
    """Product of two 1D direction sets (dimension 2)."""

    first: Singleton | Interval | CantorDirections
    second: Singleton | Interval | CantorDirections

    def samples(self) -> np.ndarray:
        a, b = self.first.samples(), self.second.samples()
        return np.stack(np.meshgrid(a, b, indexing="ij"), axis=-1).reshape(-1, 2)


DirectionSet = Singleton | Interval | CantorDirections | Product


def minkowski_dimension(dirs: DirectionSet) -> float:
    """Known Minkowski dimension of a direction set."""
    if isinstance(dirs, Singleton):
        return 0.0
    if isinstance(dirs, Interval):
        return 0.0 if dirs.a == dirs.b else 1.0
    if isinstance(dirs, CantorDirections):
        return math.log(2.0) / math.log(1.0 / dirs.r)
    return minkowski_dimension(dirs.first) + minkowski_dimension(dirs.second)


@dataclass(frozen=True)
class Vertical:
    pass


@dataclass(frozen=True)
class PowerCurve:
    kappa: float

    def __post_init__(self):
        if not 0 < self.kappa <= 1:
            raise InvalidParams(f"kappa must lie in (0, 1], got {self.kappa}")


@dataclass(frozen=True)
class ExpTangential:
    pass


@dataclass(frozen=True)
class LineField:
    directions: DirectionSet


PathSpec = Vertical | PowerCurve | ExpTangential | LineField


def path_point(path: PathSpec, x, t, theta=None, dimension: int | None = None):
    """Point on the approach path through ``x`` at time ``t``.

    Vertical -> x; PowerCurve -> x - t^kappa; ExpTangential ->
    x - 1/log(1/t); LineField -> x + t*theta (componentwise in 2D).
    Broadcasts over array arguments.  In 2D, points carry a trailing axis
    of length 2; pass ``dimension`` when that is ambiguous.
    """
    x = np.asarray(x, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if isinstance(path, LineField):
        if theta is None:
            raise MissingDirection("a line-field path needs a direction theta")
        theta = np.asarray(theta, dtype=np.float64)
        if dimension is None:
            dimension = 2 if x.ndim == t.ndim + 1 and x.shape[-1] == 2 else 1
        if dimension == 2:
            return x + t[..., None] * theta
        return x + t * theta
    if theta is not None:
        raise MissingDirection("theta is only accepted by line-field paths")
    if isinstance(path, Vertical):
        return np.broadcast_to(x, np.broadcast(x, t).shape).copy()
    if isinstance(path, PowerCurve):
        if np.any(t < 0):
            raise InvalidTime("power curves need t >= 0")
        return x - t ** path.kappa
    if isinstance(path, ExpTangential):
        if np.any((t <= 0) | (t >= 1)):
            raise InvalidTime("exponential tangential path needs t in (0, 1)")
        return x - 1.0 / np.log(1.0 / t)
    raise InvalidParams(f"unknown path {path!r}")


# ---------------------------------------------------------------------------
# Cantor sets

def _check_cantor(r, k):
    if not 0 < r < 0.5:
        raise InvalidParams(f"Cantor ratio must lie in (0, 1/2), got {r}")
    if k < 0:
        raise InvalidParams(f"generation must be >= 0, got {k}")
    if k > MAX_CANTOR_GENERATION:
        raise TooManyIntervals(f"2**{k} intervals exceeds the 2**{MAX_CANTOR_GENERATION} cap")


@dataclass(frozen=True, eq=False)
class CantorSet:
    r: float
    k: int
    left: np.ndarray

    @property
    def length(self) -> float:
        return self.r ** self.k

    @property
    def intervals(self) -> np.ndarray:
        return np.stack([self.left, self.left + self.length], axis=1)

    @cached_property
    def endpoints(self) -> np.ndarray:
        return np.sort(np.concatenate([self.left, self.left + self.length]))

    def __len__(self):
        return self.left.size


def cantor_intervals(r: float, k: int) -> CantorSet:
    """Generation-k pre-Cantor set: 2^k intervals of length r^k in [0, 1].

    Each step keeps the two outer pieces of length r * (current length), so a
    left endpoint is a sum of digits times ``(1 - r) r^i``.
    """
    _check_cantor(r, k)
    left = np.zeros(1)
    for i in range(k):
        left = np.concatenate([left, left + (1.0 - r) * r ** i])
    left.sort()
    return CantorSet(float(r), int(k), left)


def nearest_cantor_endpoint(y, cset: CantorSet, tol: float = 1e-12):
    """Nearer endpoint of the interval containing ``y`` (ties go left)."""
    y_arr = np.asarray(y, dtype=np.float64)
    flat = y_arr.reshape(-1)
    idx = np.searchsorted(cset.left, flat + tol, side="right") - 1
    if np.any(idx < 0):
        raise NotInSet(f"{flat[idx < 0][0]} lies left of the set")
    left = cset.left[idx]
    right = left + cset.length
    if np.any(flat > right + tol):
        raise NotInSet(f"{flat[flat > right + tol][0]} is not in the generation-{cset.k} set")
    out = np.where(flat - left <= right - flat, left, right)
    return float(out[0]) if y_arr.ndim == 0 else out.reshape(y_arr.shape)


def box_counts(r: float, k_max: int):
    """Greedy cover counts ``N_delta`` of the generation-k_max set, delta = r^j.

    Returns arrays ``(j, delta, N)`` for j = 1..k_max.
    """
    cset = cantor_intervals(r, k_max)
    ivs = cset.intervals
    js = np.arange(1, k_max + 1)
    deltas = r ** js.astype(np.float64)
    counts = np.empty(k_max, dtype=np.int64)
    for n, delta in enumerate(deltas):
        slack = 1e-9 * delta + 64 * np.finfo(float).eps  # coordinates lie in [0, 1]
        count = 0
        end = -np.inf
        for a, b in ivs:
            if b <= end + slack:
                continue
            start = a if a > end else end
            covers = max(1, math.ceil((b - start - slack) / delta))
            count += covers
            end = start + covers * delta
        counts[n] = count
    return js, deltas, counts


def minkowski_dim_estimate(r: float, k_max: int) -> float:
    """Least-squares slope of log N_delta against log(1/delta)."""
    if k_max < 4:
        raise InvalidParams("k_max must be >= 4")
    _, deltas, counts = box_counts(r, k_max)
    slope, _ = np.polyfit(np.log(1.0 / deltas), np.log(counts), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# power-weight measure |x|^{alpha-1} dx

@dataclass(frozen=True)
class AlphaMeasure:
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidParams(f"alpha must lie in (0, 1], got {self.alpha}")

    def cdf(self, x):
        """Signed antiderivative ``sign(x)|x|^alpha / alpha``."""
        x = np.asarray(x, dtype=np.float64)
        return np.sign(x) * np.abs(x) ** self.alpha / self.alpha

    def mass(self, a, b):
        """Exact measure of [a, b]."""
        return self.cdf(b) - self.cdf(a)


LEBESGUE = AlphaMeasure(1.0)

_SINGULAR_CUT = 0.1


def _positive_rule(alpha, a, b, n):
    ua, ub = a ** alpha, b ** alpha
    u, w = gl_nodes(ua, ub, n)
    return u ** (1.0 / alpha), w / alpha


def alpha_rule(measure: AlphaMeasure, a: float, b: float, n: int):
    """Nodes and weights with ``sum w g(x) ~ int_a^b g |x|^{alpha-1} dx``.

    Uses ``u = |x|^alpha`` on each side of 0, which turns the weight into a
    constant and integrates ``g = 1`` exactly.
    """
    if not a < b:
        raise InvalidParams(f"need a < b, got [{a}, {b}]")
    alpha = measure.alpha
    if alpha == 1.0:
        return gl_nodes(a, b, n)
    if a >= 0:
        return _positive_rule(alpha, a, b, n)
    if b <= 0:
        x, w = _positive_rule(alpha, -b, -a, n)
        return -x[::-1], w[::-1]
    n_left = max(1, int(round(n * (-a) / (b - a))))
    n_right = max(1, n - n_left)
    xl, wl = _positive_rule(alpha, 0.0, -a, n_left)
    xr, wr = _positive_rule(alpha, 0.0, b, n_right)
    return np.concatenate([-xl[::-1], xr]), np.concatenate([wl[::-1], wr])


def alpha_measure_integral(g, measure: AlphaMeasure, interval, rel_tol: float = 1e-12) -> float:
    """``int_a^b g(x) |x|^{alpha-1} dx`` for a vectorized, bounded ``g``."""
    a, b = map(float, interval)
    if a == b:
        return 0.0
    if a > b:
        return -alpha_measure_integral(g, measure, (b, a), rel_tol)
    if a < 0 < b:
        return (alpha_measure_integral(g, measure, (a, 0.0), rel_tol)
                + alpha_measure_integral(g, measure, (0.0, b), rel_tol))
    if b <= 0:
        return alpha_measure_integral(lambda x: g(-x), measure, (-b, -a), rel_tol)
    alpha = measure.alpha
    if alpha == 1.0:
        return gauss_legendre_adaptive(g, a, b, rel_tol)
    total = 0.0
    cut = min(b, _SINGULAR_CUT)
    if a < cut:
        total += gauss_legendre_adaptive(
            lambda u: g(u ** (1.0 / alpha)) / alpha, a ** alpha, cut ** alpha, rel_tol
        )
    lo = max(a, cut)
    if lo < b:
        total += gauss_legendre_adaptive(lambda x: g(x) * x ** (alpha - 1.0), lo, b, rel_tol)
    return float(total)


def frostman_ratio(measure: AlphaMeasure, samples) -> float:
    """``max mu(B(x, radius)) / radius^alpha`` over ``(x, radius)`` samples."""
    s = np.asarray(samples, dtype=np.float64).reshape(-1, 2)
    x, rad = s[:, 0], s[:, 1]
    if np.any(rad <= 0):
        raise InvalidParams("radii must be positive")
    ratio = measure.mass(x - rad, x + rad) / rad ** measure.alpha
    return float(np.max(ratio))
