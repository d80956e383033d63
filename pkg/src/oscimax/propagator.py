"""Evaluate the fractional Schroedinger propagator on band-limited data.

    S_t^m f(x) = (2 pi)^{-d} int exp(i (x . xi + t |xi|^m)) f^(xi) d xi

The reference engine splits every band into panels on which the total phase
moves by at most pi/2 and sums 16-point Gauss-Legendre rules, doubling the
panel count until two passes agree.  For ``m == 2`` with compatible twists the
phase is quadratic and :func:`evaluate_many` can use an exact closed form built
on the Faddeeva function instead; it is cross-checked against the panel engine
in the tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import wofz

from . import _kernels
from .errors import InvalidParams, ToleranceNotReached
from .spectral import Linear, NegativeDispersion, SpectralProfile

DEFAULT_MAX_PANELS = 1 << 22
MAX_2D_FREQUENCY = 2.0 ** 8


@dataclass(frozen=True)
class EvalRequest:
    profile: SpectralProfile
    m: float
    position: float | tuple[float, float]
    t: float
    rel_tol: float = 1e-10
    max_panels: int = DEFAULT_MAX_PANELS
    allow_large_2d: bool = False

    def __post_init__(self):
        if not self.m > 1:
            raise InvalidParams(f"dispersion order m must exceed 1, got {self.m}")
        if not 0 < self.rel_tol <= 1e-2:
            raise InvalidParams(f"rel_tol must lie in (0, 1e-2], got {self.rel_tol}")
        if len(np.atleast_1d(self.position)) != self.profile.dimension:
            raise InvalidParams("position dimension does not match the profile")


def _norm_factor(d):
    return (2.0 * math.pi) ** (-d)


def triangle_bound(profile: SpectralProfile) -> float:
    """Upper bound ``(2 pi)^{-d} sum amplitude * |band|`` for ``|S_t^m f|``."""
    return _norm_factor(profile.dimension) * profile.mass


def _check_2d_cap(profile, allow_large):
    if profile.dimension == 2 and not allow_large:
        reach = max(max(abs(v) for v in b.lo + b.hi) for b in profile.bands)
        if reach > MAX_2D_FREQUENCY:
            raise InvalidParams(
                f"2D bands reach |xi| = {reach:g} > {MAX_2D_FREQUENCY:g}; pass allow_large_2d=True"
            )


def _as_points(profile, positions, times):
    d = profile.dimension
    pos = np.asarray(positions, dtype=np.float64)
    t = np.asarray(times, dtype=np.float64)
    if d == 1:
        pos = pos.reshape(-1)
    else:
        pos = pos.reshape(-1, 2)
    t = np.broadcast_to(t.reshape(-1), (pos.shape[0],)).copy()
    return np.ascontiguousarray(pos), t


def _panel_many(profile, m, pos, t, rel_tol, max_panels):
    lo, hi, amp, lin, coef, pw = profile.kernel_arrays()
    gx, gw = _kernels.GL_NODES, _kernels.GL_WEIGHTS
    if profile.dimension == 1:
        out, status = _kernels.bands_1d(
            lo[:, 0].copy(), hi[:, 0].copy(), amp, lin, coef, pw, _kernels.AMP_CONST,
            pos, t, float(m), float(rel_tol), int(max_panels), gx, gw,
        )
    else:
        out, status = _kernels.bands_2d(
            lo[:, 0].copy(), hi[:, 0].copy(), lo[:, 1].copy(), hi[:, 1].copy(), amp, lin,
            coef, pw, pos[:, 0].copy(), pos[:, 1].copy(), t, float(m), float(rel_tol),
            int(max_panels), gx, gw,
        )
    if np.any(status != _kernels.STATUS_OK):
        bad = int(np.argmax(status != _kernels.STATUS_OK))
        raise ToleranceNotReached(
            f"panel budget {max_panels} exceeded at position {pos[bad]}, t={t[bad]}"
        )
    return out * _norm_factor(profile.dimension)


def evaluate(req: EvalRequest) -> complex:
    """Panel-engine value of ``S_t^m f(x)`` for one request."""
    _check_2d_cap(req.profile, req.allow_large_2d)
    pos, t = _as_points(req.profile, [req.position], [req.t])
    return complex(_panel_many(req.profile, req.m, pos, t, req.rel_tol, req.max_panels)[0])


def evaluate_oracle(req: EvalRequest, N: int) -> complex:
    """Uniform midpoint Riemann sum with ``N`` nodes per band per axis."""
    if N < 1 << 10:
        raise InvalidParams("oracle needs N >= 2**10")
    prof = req.profile
    lo, hi, amp, lin, coef, pw = prof.kernel_arrays()
    pos, t = _as_points(prof, [req.position], [req.t])
    if prof.dimension == 1:
        out = _kernels.oracle_1d(lo[:, 0].copy(), hi[:, 0].copy(), amp, lin, coef, pw,
                                 pos, t, float(req.m), int(N))
    else:
        out = _kernels.oracle_2d(lo[:, 0].copy(), hi[:, 0].copy(), lo[:, 1].copy(),
                                 hi[:, 1].copy(), amp, lin, coef, pw, pos[:, 0].copy(),
                                 pos[:, 1].copy(), t, float(req.m), int(N))
    return complex(out[0]) * _norm_factor(prof.dimension)


# ---------------------------------------------------------------------------
# exact quadratic-phase path (m == 2)

_SMALL_PHASE = 40.0
_SMALL_NODES, _SMALL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_SMALL_PANELS = 32
_E_PI4 = np.exp(0.25j * np.pi)
_E_MPI4 = np.exp(-0.25j * np.pi)
_SQRT_PI = math.sqrt(math.pi)


def fresnel_compatible(profile: SpectralProfile, m: float) -> bool:
    if m != 2:
        return False
    for b in profile.bands:
        if isinstance(b.phase, NegativeDispersion) and b.phase.m != 2:
            return False
    return True


def _tail(c, B, T):
    """``int_c^inf exp(i (B xi + T xi^2)) d xi`` for T > 0 (regularized)."""
    sT = np.sqrt(T)
    z = _E_MPI4 * (sT * c + B / (2.0 * sT))
    pref = _E_PI4 * _SQRT_PI / (2.0 * sT)
    edge = np.exp(1j * (B * c + T * c * c))
    out = np.empty(np.broadcast(c, B, T).shape, dtype=np.complex128)
    right = z.real >= 0
    out[right] = (edge * pref * wofz(1j * z))[right]
    left = ~right
    if np.any(left):
        zl, Bl, Tl = z[left], B[left], T[left]
        pl = pref[left]
        stationary = np.exp(-1j * Bl * Bl / (4.0 * Tl))
        out[left] = 2.0 * pl * stationary - edge[left] * pl * wofz(-1j * zl)
    return out


def quadratic_band_integral(a: float, b: float, B, T) -> np.ndarray:
    """``int_a^b exp(i (B xi + T xi^2)) d xi`` for arrays ``B``, ``T``."""
    B = np.asarray(B, dtype=np.float64).reshape(-1)
    T = np.broadcast_to(np.asarray(T, dtype=np.float64).reshape(-1), B.shape)
    out = np.empty(B.shape, dtype=np.complex128)
    variation = np.maximum(np.abs(B + 2 * T * a), np.abs(B + 2 * T * b)) * (b - a)
    small = variation < _SMALL_PHASE
    if np.any(small):
        h = (b - a) / _SMALL_PANELS
        left = a + h * np.arange(_SMALL_PANELS)
        xi = (left[:, None] + 0.5 * h * (_SMALL_NODES[None, :] + 1.0)).ravel()
        w = np.tile(0.5 * h * _SMALL_WEIGHTS, _SMALL_PANELS)
        idx = np.flatnonzero(small)
        for s in range(0, idx.size, 2048):
            sel = idx[s:s + 2048]
            ph = B[sel, None] * xi[None, :] + T[sel, None] * (xi * xi)[None, :]
            out[sel] = np.exp(1j * ph) @ w
    large = ~small
    zero_t = large & (T == 0)
    if np.any(zero_t):
        Bz = B[zero_t]
        out[zero_t] = (np.exp(1j * Bz * b) - np.exp(1j * Bz * a)) / (1j * Bz)
    pos = large & (T > 0)
    if np.any(pos):
        Bp, Tp = B[pos], T[pos]
        out[pos] = _tail(a, Bp, Tp) - _tail(b, Bp, Tp)
    neg = large & (T < 0)
    if np.any(neg):
        Bn, Tn = -B[neg], -T[neg]
        out[neg] = np.conj(_tail(a, Bn, Tn) - _tail(b, Bn, Tn))
    return out


def _edge_sum(edges, jumps, B, T):
    """``sum_k jumps[k] * tail(edges[k])`` with the sign handling of T < 0."""
    out = np.zeros(B.shape, dtype=np.complex128)
    pos = T > 0
    neg = ~pos
    for c, jmp in zip(edges, jumps):
        if jmp == 0.0:
            continue
        if np.any(pos):
            out[pos] += jmp * _tail(c, B[pos], T[pos])
        if np.any(neg):
            out[neg] += jmp * np.conj(_tail(c, -B[neg], -T[neg]))
    return out


def _fresnel_1d_shared(bands, y, tt):
    """Sum over bands with a common twist, sharing tails at common edges.

    Points with tiny |T|, where the tails would cancel badly, fall back to
    the per-band formula.
    """
    lo = np.array([b.lo[0] for b in bands])
    hi = np.array([b.hi[0] for b in bands])
    amp = np.array([b.amplitude for b in bands])
    mass = float(np.sum(amp * (hi - lo)))
    # tails have size ~ sqrt(pi) / (2 sqrt|T|); keep their cancellation error
    # near 1e-12 of the band mass
    pref = _SQRT_PI / (2.0 * np.sqrt(np.maximum(np.abs(tt), 1e-300)))
    fast = pref * (2 * len(bands)) <= 1e4 * mass
    out = np.zeros(y.shape, dtype=np.complex128)
    if np.any(fast):
        edges = np.unique(np.concatenate([lo, hi]))
        jumps = np.zeros(edges.size)
        np.add.at(jumps, np.searchsorted(edges, lo), amp)
        np.add.at(jumps, np.searchsorted(edges, hi), -amp)
        out[fast] = _edge_sum(edges, jumps, y[fast], tt[fast])
    slow = ~fast
    if np.any(slow):
        for b in bands:
            out[slow] += b.amplitude * quadratic_band_integral(b.lo[0], b.hi[0], y[slow], tt[slow])
    return out


_SHARED_MIN_BANDS = 4


def _fresnel_many(profile, pos, t):
    d = profile.dimension
    if d == 1 and len(profile.bands) >= _SHARED_MIN_BANDS:
        groups: dict = {}
        for bnd in profile.bands:
            if bnd.amplitude != 0.0:
                groups.setdefault(bnd.phase, []).append(bnd)
        total = np.zeros(pos.shape[0], dtype=np.complex128)
        for phase, bands in groups.items():
            lin = phase.c if isinstance(phase, Linear) else 0.0
            tt = t - 1.0 if isinstance(phase, NegativeDispersion) else t
            total += _fresnel_1d_shared(bands, pos + lin, tt)
        return total * _norm_factor(d)
    total = np.zeros(pos.shape[0], dtype=np.complex128)
    cache: dict = {}
    for bnd in profile.bands:
        if bnd.amplitude == 0.0:
            continue
        lin = bnd.phase.c if isinstance(bnd.phase, Linear) else 0.0
        tt = t - 1.0 if isinstance(bnd.phase, NegativeDispersion) else t
        factors = np.ones(pos.shape[0], dtype=np.complex128)
        for axis in range(d):
            key = (axis, bnd.lo[axis], bnd.hi[axis], lin, isinstance(bnd.phase, NegativeDispersion))
            if key not in cache:
                y = pos if d == 1 else pos[:, axis]
                cache[key] = quadratic_band_integral(bnd.lo[axis], bnd.hi[axis], y + lin, tt)
            factors = factors * cache[key]
        total += bnd.amplitude * factors
    return total * _norm_factor(d)


def evaluate_many(profile: SpectralProfile, m: float, positions, times, rel_tol=1e-10,
                  method="auto", max_panels=DEFAULT_MAX_PANELS, allow_large_2d=False):
    """Vectorized ``S_t^m f`` at paired ``positions`` and ``times``.

    ``method`` is ``"panel"`` (reference engine), ``"fresnel"`` (exact, m == 2
    only) or ``"auto"`` (fresnel whenever it applies).
    """
    if not m > 1:
        raise InvalidParams(f"dispersion order m must exceed 1, got {m}")
    _check_2d_cap(profile, allow_large_2d)
    pos, t = _as_points(profile, positions, times)
    if method == "auto":
        method = "fresnel" if fresnel_compatible(profile, m) else "panel"
    if method == "fresnel":
        if not fresnel_compatible(profile, m):
            raise InvalidParams("closed form needs m == 2 and quadratic or no twist")
        return _fresnel_many(profile, pos, t)
    if method == "panel":
        return _panel_many(profile, m, pos, t, rel_tol, max_panels)
    raise InvalidParams(f"unknown method {method!r}")


def band_integral(lo: float, hi: float, B, T, m: float, amp_kind=_kernels.AMP_CONST,
                  rel_tol=1e-10, max_panels=DEFAULT_MAX_PANELS) -> np.ndarray:
    """``int_lo^hi g(xi) exp(i (B xi + T |xi|^m)) d xi`` for arrays ``B``, ``T``.

    ``g`` is one of the fixed shapes in ``_kernels`` (constant, bump, bump
    squared, cos^2).  No ``(2 pi)`` normalization.
    """
    B = np.ascontiguousarray(np.asarray(B, dtype=np.float64).reshape(-1))
    T = np.ascontiguousarray(np.broadcast_to(np.asarray(T, dtype=np.float64).reshape(-1), B.shape))
    one = np.ones(1)
    zero = np.zeros(1)
    out, status = _kernels.bands_1d(
        np.array([lo], dtype=np.float64), np.array([hi], dtype=np.float64), one, zero, zero,
        np.full(1, 2.0), int(amp_kind), B, T, float(m), float(rel_tol), int(max_panels),
        _kernels.GL_NODES, _kernels.GL_WEIGHTS,
    )
    if np.any(status != _kernels.STATUS_OK):
        raise ToleranceNotReached(f"panel budget {max_panels} exceeded on [{lo}, {hi}]")
    return out


# ---------------------------------------------------------------------------
# phase bound

def _sup_abs_1d(phi, dphi, lo, hi, panels=256):
    """sup |phi| on [lo, hi] from endpoints and bisected roots of dphi."""
    grid = np.linspace(lo, hi, panels + 1)
    vals = [abs(phi(lo)), abs(phi(hi))]
    d = dphi(grid)
    for i in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
        a, b = grid[i], grid[i + 1]
        fa = d[i]
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = dphi(np.array([mid]))[0]
            if np.sign(fm) == np.sign(fa):
                a, fa = mid, fm
            else:
                b = mid
            if b - a <= 1e-15 * max(1.0, abs(a)):
                break
        vals.append(abs(phi(0.5 * (a + b))))
    for i in np.flatnonzero(d == 0):
        vals.append(abs(phi(grid[i])))
    return max(vals)


def _radial_terms(t, m, coef, pw):
    def g(r):
        return t * r ** m + coef * r ** pw

    def dg(r):
        return m * t * r ** (m - 1) + coef * pw * r ** (pw - 1)

    return g, dg


def phase_bound(req: EvalRequest) -> float:
    """sup over the support of ``|x . xi + t |xi|^m + twist(xi)|``.

    Endpoint values plus interior critical points (roots of the derivative,
    located by bisection inside a 256-cell sign scan).
    """
    prof = req.profile
    y = np.atleast_1d(np.asarray(req.position, dtype=np.float64))
    best = 0.0
    for bnd in prof.bands:
        lin, coef, pw = bnd.twist_arrays()
        g, dg = _radial_terms(req.t, req.m, coef, pw)
        if prof.dimension == 1:
            B = y[0] + lin

            def phi(x, B=B, g=g):
                return B * x + g(abs(x))

            def dphi(x, B=B, dg=dg):
                x = np.asarray(x, dtype=np.float64)
                return B + np.sign(x) * dg(np.abs(x))

            pieces = [(bnd.lo[0], bnd.hi[0])]
            if bnd.lo[0] < 0 < bnd.hi[0]:
                pieces = [(bnd.lo[0], 0.0), (0.0, bnd.hi[0])]
            for a, b in pieces:
                best = max(best, _sup_abs_1d(phi, dphi, a, b))
        else:
            best = max(best, _phase_bound_rect(bnd, y + lin, g, dg))
    return float(best)


def _phase_bound_rect(bnd, B, g, dg):
    (a1, a2), (b1, b2) = bnd.lo, bnd.hi

    def phi2(x1, x2):
        return B[0] * x1 + B[1] * x2 + g(math.hypot(x1, x2))

    best = 0.0
    # edges: one coordinate fixed
    for fixed in (a1, b1):
        def p(x, fixed=fixed):
            return phi2(fixed, x)

        def dp(x, fixed=fixed):
            x = np.asarray(x, dtype=np.float64)
            r = np.hypot(fixed, x)
            return B[1] + np.where(r > 0, dg(r) * x / np.where(r > 0, r, 1.0), 0.0)

        best = max(best, _sup_abs_1d(p, dp, a2, b2))
    for fixed in (a2, b2):
        def p(x, fixed=fixed):
            return phi2(x, fixed)

        def dp(x, fixed=fixed):
            x = np.asarray(x, dtype=np.float64)
            r = np.hypot(fixed, x)
            return B[0] + np.where(r > 0, dg(r) * x / np.where(r > 0, r, 1.0), 0.0)

        best = max(best, _sup_abs_1d(p, dp, a1, b1))
    # interior critical points lie on the line through 0 parallel to B
    nb = math.hypot(B[0], B[1])
    if nb > 0:
        u = (B[0] / nb, B[1] / nb)
        for sgn in (1.0, -1.0):
            def dq(s, sgn=sgn):
                s = np.asarray(s, dtype=np.float64)
                return nb * sgn + dg(s)

            smax = math.hypot(max(abs(a1), abs(b1)), max(abs(a2), abs(b2)))
            grid = np.linspace(0.0, smax, 257)
            d = dq(grid)
            for i in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
                lo, hi = grid[i], grid[i + 1]
                for _ in range(200):
                    mid = 0.5 * (lo + hi)
                    if np.sign(dq(mid)) == np.sign(d[i]):
                        lo = mid
                    else:
                        hi = mid
                s = 0.5 * (lo + hi)
                x1, x2 = sgn * s * u[0], sgn * s * u[1]
                if a1 <= x1 <= b1 and a2 <= x2 <= b2:
                    best = max(best, abs(phi2(x1, x2)))
    else:
        best = max(best, abs(g(0.0)) if (a1 <= 0 <= b1 and a2 <= 0 <= b2) else 0.0)
    return best
