"""Numerical probes of the kernel K_lambda, van der Corput decay and Young/HLS bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import toeplitz

from . import _kernels
from .errors import DegenerateLadder, InvalidExponents, InvalidParams
from .geometry import AlphaMeasure
from .propagator import band_integral
from .quadrature import gauss_legendre_adaptive
from .scenarios import fit_exponent

KERNEL_RTOL = 1e-8
_SUPPORT = ((-2.0, -0.5), (0.5, 2.0))


def psi(xi):
    """Bump ``exp(1 - 1/(1 - u^2))``, ``u = (|xi| - 5/4) / (3/4)``, zero for |u| >= 1."""
    xi = np.asarray(xi, dtype=np.float64)
    u = (np.abs(xi) - 1.25) / 0.75
    out = np.zeros(np.shape(u))
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    return out


@lru_cache(maxsize=None)
def psi_sq_integral() -> float:
    """``int psi^2`` over both support intervals."""
    return 2.0 * gauss_legendre_adaptive(lambda x: psi(x) ** 2, 0.5, 2.0, rel_tol=1e-14)


def s_star(q: float, alpha: float) -> float:
    return min(0.25, alpha / q)


@dataclass(frozen=True)
class KernelSample:
    """Pair of points ``w = (x, t, theta)`` and ``w' = (x', t', theta')``."""

    x: float
    t: float
    theta: float
    x2: float
    t2: float
    theta2: float
    lam: float
    m: float = 2.0

    def __post_init__(self):
        if not self.lam >= 1:
            raise InvalidParams(f"lambda must be >= 1, got {self.lam}")
        if not self.m > 1:
            raise InvalidParams(f"m must exceed 1, got {self.m}")

    def swapped(self) -> "KernelSample":
        return KernelSample(self.x2, self.t2, self.theta2, self.x, self.t, self.theta,
                            self.lam, self.m)

    @property
    def rho_gap(self) -> float:
        """``rho(w) - rho(w')`` with ``rho(x, t, theta) = x + t theta``."""
        return (self.x + self.t * self.theta) - (self.x2 + self.t2 * self.theta2)


def kernel_eval(sample: KernelSample, rel_tol: float = KERNEL_RTOL) -> complex:
    """``lambda int exp(i phi(lambda xi, w, w')) psi(xi)^2 d xi``.

    The phase is ``(rho(w) - rho(w')) xi + (t - t') |xi|^m``, evaluated at
    ``lambda xi``.
    """
    B = np.array([sample.lam * sample.rho_gap])
    T = np.array([sample.lam ** sample.m * (sample.t - sample.t2)])
    total = 0.0j
    for lo, hi in _SUPPORT:
        total += complex(band_integral(lo, hi, B, T, sample.m, _kernels.AMP_BUMP2, rel_tol)[0])
    return sample.lam * total


def classify_region(sample: KernelSample, q: float, alpha: float) -> str:
    """``"V1"``, ``"V2"`` or ``"V3"`` for the pair.

    V1: |x - x'| <= 2 lambda^{-q s*/alpha}; otherwise V2 when
    |x - x'| <= 4 |t - t'| and V3 when not.
    """
    if q < 2 or not 0 < alpha <= 1:
        raise InvalidParams("need q >= 2 and alpha in (0, 1]")
    dx = abs(sample.x - sample.x2)
    if dx <= 2.0 * sample.lam ** (-q * s_star(q, alpha) / alpha):
        return "V1"
    if dx <= 4.0 * abs(sample.t - sample.t2):
        return "V2"
    return "V3"


def in_u1(sample: KernelSample, xi) -> np.ndarray:
    """Frequency split: True on U1, where |x - x'| > 8 m lambda^{m-1} |t - t'| |xi|^{m-1}."""
    xi = np.abs(np.asarray(xi, dtype=np.float64))
    s = sample
    return abs(s.x - s.x2) > 8 * s.m * s.lam ** (s.m - 1) * abs(s.t - s.t2) * xi ** (s.m - 1)


def draw_samples(lam: float, n: int, region: str, seed: int, q: float = 4.0,
                 alpha: float = 1.0, m: float = 2.0) -> list[KernelSample]:
    """Seeded pairs in a region (``"V1"``, ``"V2"``, ``"V3"`` or ``"any"``).

    V2/V3 pairs are drawn in scaled variables: ``|x - x'| = 2 lambda^{-e} g``
    with ``e = q s*/alpha`` and ``g`` log-uniform in [1.25, 8].  V2 takes
    ``|t - t'| = |x - x'| / 4 * U[1, 1.5]``; V3 takes ``lambda^m |t - t'|``
    log-uniform in [1e-2, 1e2] (capped to stay in V3).  Directions are
    ``lambda^{-e} U[0, 1]``.  ``"any"`` draws every coordinate uniformly.
    The stream depends on ``(seed, region)`` only, so every lambda sees the
    same pairs in scaled variables.
    """
    ss = np.random.SeedSequence([seed, {"V1": 1, "V2": 2, "V3": 3, "any": 0}[region]])
    rng = np.random.Generator(np.random.Philox(ss))
    e = q * s_star(q, alpha) / alpha
    width = lam ** -e
    out = []
    for _ in range(n):
        th, th2 = width * rng.uniform(size=2)
        if region == "any":
            x, x2 = rng.uniform(-1.0, 1.0, 2)
            t, t2 = rng.uniform(0.0, 1.0, 2)
            out.append(KernelSample(x, t, th, x2, t2, th2, lam, m))
            continue
        if region == "V1":
            dx = 2.0 * width * rng.uniform()
        else:
            dx = 2.0 * width * math.exp(rng.uniform(math.log(1.25), math.log(8.0)))
        x = rng.uniform(-1.0 + dx, 1.0 - dx)
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        x2 = x + sign * dx
        if region == "V2":
            dt = 0.25 * dx * rng.uniform(1.0, 1.5)
        elif region == "V3":
            v = math.exp(rng.uniform(math.log(1e-2), math.log(1e2)))
            dt = min(v * lam ** -m, 0.2 * dx)
        else:
            dt = rng.uniform(0.0, 1.0) * lam ** -m
        t = rng.uniform(dt, 1.0 - dt)
        t2 = t - dt if rng.uniform() < 0.5 else t + dt
        out.append(KernelSample(x, t, th, x2, t2, th2, lam, m))
    return out


@dataclass(frozen=True)
class KernelRow:
    lam: float
    region: str
    dx: float
    dt: float
    modulus: float
    constant: float


def kernel_sweep(lams: Sequence[float], n_per: int, seed: int, q: float = 4.0,
                 alpha: float = 1.0, m: float = 2.0, regions=("V2", "V3")) -> list[KernelRow]:
    """|K| and ``C = |K| lambda^{-1/2} |x - x'|^{1/2}`` on seeded V2/V3 pairs."""
    rows = []
    for lam in lams:
        for region in regions:
            for s in draw_samples(lam, n_per, region, seed, q, alpha, m):
                k = abs(kernel_eval(s))
                dx = abs(s.x - s.x2)
                rows.append(KernelRow(lam, classify_region(s, q, alpha), dx, abs(s.t - s.t2),
                                      k, k * lam ** -0.5 * dx ** 0.5))
    return rows


def constants_by_lambda(rows: Sequence[KernelRow]) -> dict[float, float]:
    """Largest fitted constant per lambda."""
    out: dict[float, float] = {}
    for r in rows:
        out[r.lam] = max(out.get(r.lam, 0.0), r.constant)
    return dict(sorted(out.items()))


# ---------------------------------------------------------------------------
# van der Corput

VDC_PHASES = ("quadratic", "monotone_linearized", "fractional")


@dataclass(frozen=True)
class VdcFit:
    phase: str
    k: int
    lams: np.ndarray
    values: np.ndarray
    slope: float
    stderr: float
    constant: float
    top_decade_spread: float


def vdc_integral(phase: str, lam: float, m: float = 1.5) -> complex:
    """``int e^{i lam phi} psi`` for one of the fixed phase families.

    quadratic: phi = xi^2/2 on [-1, 1], psi = cos^2(pi xi / 2).
    monotone_linearized: phi = xi on [0, 1], same psi.
    fractional: phi = (xi^m - m (5/4)^{m-1} xi) / min phi'' on [1/2, 2] with
    the compact bump, so phi'' >= 1 and xi = 5/4 is stationary.
    """
    L = np.array([lam], dtype=np.float64)
    if phase == "quadratic":
        return complex(band_integral(-1.0, 1.0, 0.0 * L, 0.5 * L, 2.0, _kernels.AMP_COS2, 1e-12)[0])
    if phase == "monotone_linearized":
        return complex(band_integral(0.0, 1.0, L, 0.0 * L, 2.0, _kernels.AMP_COS2, 1e-12)[0])
    if phase == "fractional":
        if not m > 1:
            raise InvalidParams("fractional phase needs m > 1")
        curv = m * (m - 1) * min(0.5 ** (m - 2), 2.0 ** (m - 2))
        tilt = -m * 1.25 ** (m - 1)
        return complex(band_integral(0.5, 2.0, L * tilt / curv, L / curv, m,
                                     _kernels.AMP_BUMP, 1e-12)[0])
    raise InvalidParams(f"unknown phase family {phase!r}; choose from {', '.join(VDC_PHASES)}")


def vdc_decay_fit(phase: str, ladder: Sequence[float], m: float = 1.5) -> VdcFit:
    """Fit log|I(lambda)| against log lambda and report ``lambda^{1/k} |I|``.

    ``constant`` is the largest ``lambda^{1/k}|I|`` on the ladder;
    ``top_decade_spread`` is (max - min) / max of that quantity over the
    rungs within a factor 10 of the largest lambda.

    Raises
    ------
    DegenerateLadder
        Fewer than five rungs or less than a decade of lambda.
    """
    lams = np.asarray(sorted(ladder), dtype=np.float64)
    if lams.size < 5 or lams[-1] < 10 * lams[0]:
        raise DegenerateLadder("need at least five rungs spanning a decade")
    k = 1 if phase == "monotone_linearized" else 2
    vals = np.array([abs(vdc_integral(phase, lam, m)) for lam in lams])
    fit = fit_exponent(np.column_stack([np.log(lams), np.log(vals)]))
    scaled = lams ** (1.0 / k) * vals
    top = scaled[lams >= lams[-1] / 10.0]
    spread = float((top.max() - top.min()) / top.max())
    return VdcFit(phase, k, lams, vals, fit.slope, fit.stderr, float(scaled.max()), spread)


# ---------------------------------------------------------------------------
# Young / HLS

@dataclass(frozen=True)
class Young:
    a: float = -0.5
    b: float = 0.5

    def __post_init__(self):
        if not self.a < self.b:
            raise InvalidParams("Young interval needs a < b")


@dataclass(frozen=True)
class HLS:
    rho: float


def _k2(mode, s):
    """Second antiderivative of the kernel, vanishing suitably at -inf / 0."""
    s = np.asarray(s, dtype=np.float64)
    if isinstance(mode, HLS):
        r = mode.rho
        return np.abs(s) ** (2.0 - r) / ((1.0 - r) * (2.0 - r))
    a, b = mode.a, mode.b
    w = b - a
    return np.where(s < a, 0.0, np.where(s <= b, 0.5 * (s - a) ** 2, 0.5 * w * w + w * (s - b)))


def cell_kernel_matrix(mode, n: int) -> np.ndarray:
    """``M[i, j] = int_{I_i} int_{I_j} K(x - x') dx' dx`` for n equal cells of [-1, 1]."""
    h = 2.0 / n
    d = np.arange(-(n - 1), n) * h  # offset of cell i relative to cell j
    vals = _k2(mode, d + h) - 2.0 * _k2(mode, d) + _k2(mode, d - h)
    col = vals[n - 1:]        # i - j >= 0
    row = vals[n - 1::-1]     # i - j <= 0
    return toeplitz(col, row)


def _rasterize(edges, lo, hi):
    """Fraction of each cell covered by [lo, hi] for every rectangle."""
    left = np.maximum(edges[:-1][None, :], lo[:, None])
    right = np.minimum(edges[1:][None, :], hi[:, None])
    return np.clip(right - left, 0.0, None) / np.diff(edges)[None, :]


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative sum of rectangles ``c chi_{[x0, x1] x [t0, t1]}`` on [-1, 1]^2."""

    coef: np.ndarray
    x0: np.ndarray
    x1: np.ndarray
    t0: np.ndarray
    t1: np.ndarray

    def cells(self, n: int) -> np.ndarray:
        """Cell averages on an n x n grid (rows x, columns t)."""
        edges = np.linspace(-1.0, 1.0, n + 1)
        fx = _rasterize(edges, self.x0, self.x1)
        ft = _rasterize(edges, self.t0, self.t1)
        return (fx.T * self.coef) @ ft

    @staticmethod
    def constant(value: float = 1.0) -> "StepFunction":
        one = np.ones(1)
        return StepFunction(value * one, -one, one, -one, one)


def random_step(rng: np.random.Generator, n_rect: int = 8) -> StepFunction:
    def pair():
        u = np.sort(rng.uniform(-1.0, 1.0, (n_rect, 2)), axis=1)
        return u[:, 0], u[:, 1]

    x0, x1 = pair()
    t0, t1 = pair()
    return StepFunction(rng.uniform(0.0, 1.0, n_rect), x0, x1, t0, t1)


def _check_exponents(alpha, q, mode):
    if not 0 < alpha <= 1:
        raise InvalidExponents(f"alpha must lie in (0, 1], got {alpha}")
    if q < 2:
        raise InvalidExponents(f"q must be >= 2, got {q}")
    if isinstance(mode, HLS) and not 0 < q * mode.rho / 2 < alpha:
        raise InvalidExponents(f"HLS needs 0 < q rho / 2 < alpha, got q rho / 2 = {q * mode.rho / 2}")


def ineq_ratio(g: StepFunction, h: StepFunction, alpha: float, q: float, mode, n: int,
               kernel: np.ndarray | None = None) -> float:
    """LHS / RHS of the Young (or HLS) inequality at resolution n.

    The x weight inside each cell is replaced by its exact cell average
    ``mu(I_i) / |I_i|``; the kernel is integrated exactly over cell pairs.
    """
    _check_exponents(alpha, q, mode)
    meas = AlphaMeasure(alpha)
    edges = np.linspace(-1.0, 1.0, n + 1)
    mass = meas.mass(edges[:-1], edges[1:])
    dens = mass / np.diff(edges)
    dt = 2.0 / n
    G = g.cells(n).sum(axis=1) * dt
    H = h.cells(n).sum(axis=1) * dt
    M = cell_kernel_matrix(mode, n) if kernel is None else kernel
    lhs = abs(float((G * dens) @ M @ (H * dens)))
    qp = q / (q - 1.0)
    norm_g = float(np.sum(G ** qp * mass)) ** (1.0 / qp)
    norm_h = float(np.sum(H ** qp * mass)) ** (1.0 / qp)
    rhs = norm_g * norm_h
    if isinstance(mode, Young):
        rhs *= (mode.b - mode.a) ** (2.0 * alpha / q)
    return lhs / rhs


@dataclass(frozen=True)
class IneqReport:
    resolutions: tuple[int, ...]
    max_ratio: dict[int, float]
    ratios: dict[int, np.ndarray]

    @property
    def overall_max(self) -> float:
        return max(self.max_ratio.values())


def young_hls_check(alpha: float, q: float, mode, trials: int, resolutions: Sequence[int],
                    seed: int) -> IneqReport:
    """Max ratio over seeded random step functions at each resolution.

    Trial ``j`` uses a Philox stream keyed by ``(seed, j)``, so the same
    functions are rasterized at every resolution.
    """
    _check_exponents(alpha, q, mode)
    fns = []
    for j in range(trials):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, j])))
        fns.append((random_step(rng), random_step(rng)))
    ratios = {}
    for n in resolutions:
        M = cell_kernel_matrix(mode, n)
        ratios[n] = np.array([ineq_ratio(g, h, alpha, q, mode, n, M) for g, h in fns])
    return IneqReport(tuple(resolutions), {n: float(r.max()) for n, r in ratios.items()}, ratios)
