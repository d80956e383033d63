"""Band-limited initial data described by its Fourier transform.

A profile is a finite set of bands (intervals in 1D, axis-aligned rectangles
in 2D) carrying a constant amplitude and an optional unimodular phase twist.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyProfile, InvalidParams, InvertedInterval, OverlappingBands
from .quadrature import gauss_legendre_adaptive


@dataclass(frozen=True)
class NoTwist:
    kind: str = field(default="none", init=False)


@dataclass(frozen=True)
class NegativeDispersion:
    """Twist ``exp(-i |xi|**m)``."""

    m: float
    kind: str = field(default="negative_dispersion", init=False)

    def __post_init__(self):
        if not self.m > 1:
            raise InvalidParams(f"negative dispersion order must exceed 1, got {self.m}")


@dataclass(frozen=True)
class Linear:
    """Twist ``exp(i c xi)``; in 2D it applies ``c`` to both coordinates."""

    c: float
    kind: str = field(default="linear", init=False)


Twist = NoTwist | NegativeDispersion | Linear


@dataclass(frozen=True)
class Band:
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    amplitude: float = 1.0
    phase: Twist = NoTwist()

    @property
    def dimension(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod([h - l for l, h in zip(self.lo, self.hi)]))

    def twist_arrays(self):
        """(linear coefficient, |xi|-power coefficient, power) for the kernels."""
        if isinstance(self.phase, Linear):
            return float(self.phase.c), 0.0, 2.0
        if isinstance(self.phase, NegativeDispersion):
            return 0.0, -1.0, float(self.phase.m)
        return 0.0, 0.0, 2.0


def band(lo, hi, amplitude=1.0, phase: Twist | None = None) -> Band:
    """Build a band; scalars give a 1D interval, pairs a 2D rectangle."""
    lo_t = tuple(float(v) for v in np.atleast_1d(lo))
    hi_t = tuple(float(v) for v in np.atleast_1d(hi))
    return Band(lo_t, hi_t, float(amplitude), phase if phase is not None else NoTwist())


@dataclass(frozen=True)
class SpectralProfile:
    dimension: int
    bands: tuple[Band, ...]

    @property
    def mass(self) -> float:
        """Sum of amplitude times band volume (the L1 norm of the transform)."""
        return float(sum(abs(b.amplitude) * b.volume for b in self.bands))

    @property
    def max_frequency(self) -> float:
        """Largest Euclidean |xi| on the support."""
        return max(
            math.sqrt(sum(max(abs(l), abs(h)) ** 2 for l, h in zip(b.lo, b.hi)))
            for b in self.bands
        )

    def scaled(self, a: float) -> "SpectralProfile":
        return SpectralProfile(
            self.dimension,
            tuple(Band(b.lo, b.hi, b.amplitude * a, b.phase) for b in self.bands),
        )

    def with_phase(self, phase: Twist) -> "SpectralProfile":
        return SpectralProfile(
            self.dimension, tuple(Band(b.lo, b.hi, b.amplitude, phase) for b in self.bands)
        )

    def kernel_arrays(self):
        """Flat float arrays (lo, hi per axis, amp, lin, coef, pw) for the kernels."""
        d = self.dimension
        lo = np.array([b.lo for b in self.bands], dtype=np.float64).reshape(-1, d)
        hi = np.array([b.hi for b in self.bands], dtype=np.float64).reshape(-1, d)
        amp = np.array([b.amplitude for b in self.bands], dtype=np.float64)
        tw = np.array([b.twist_arrays() for b in self.bands], dtype=np.float64).reshape(-1, 3)
        return lo, hi, amp, tw[:, 0].copy(), tw[:, 1].copy(), tw[:, 2].copy()

    def to_dict(self) -> dict:
        bands = []
        for b in self.bands:
            lo = b.lo[0] if self.dimension == 1 else list(b.lo)
            hi = b.hi[0] if self.dimension == 1 else list(b.hi)
            if isinstance(b.phase, NegativeDispersion):
                phase = {"kind": "negative_dispersion", "m": b.phase.m}
            elif isinstance(b.phase, Linear):
                phase = {"kind": "linear", "c": b.phase.c}
            else:
                phase = {"kind": "none"}
            bands.append({"lo": lo, "hi": hi, "amplitude": b.amplitude, "phase": phase})
        return {"dimension": self.dimension, "bands": bands}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _intervals_overlap(a: Band, b: Band) -> bool:
    return all(min(ah, bh) > max(al, bl) for al, ah, bl, bh in zip(a.lo, a.hi, b.lo, b.hi))


def make_profile(dimension: int, bands: Sequence[Band]) -> SpectralProfile:
    """Validate bands and return an immutable profile.

    Raises
    ------
    EmptyProfile
        No bands given.
    InvertedInterval
        Some band has ``lo >= hi`` along an axis.
    OverlappingBands
        Two bands share interior points.
    """
    if dimension not in (1, 2):
        raise InvalidParams(f"dimension must be 1 or 2, got {dimension}")
    bands = tuple(bands)
    if not bands:
        raise EmptyProfile("profile needs at least one band")
    for b in bands:
        if b.dimension != dimension:
            raise InvalidParams(f"band {b} does not have dimension {dimension}")
        if any(not l < h for l, h in zip(b.lo, b.hi)):
            raise InvertedInterval(f"band with lo >= hi: {b.lo} .. {b.hi}")
        if not (math.isfinite(b.amplitude) and b.amplitude >= 0):
            raise InvalidParams(f"amplitude must be finite and non-negative, got {b.amplitude}")
    if dimension == 1:
        order = sorted(bands, key=lambda b: b.lo[0])
        for left, right in zip(order, order[1:]):
            if right.lo[0] < left.hi[0]:
                raise OverlappingBands(f"bands {left.lo}-{left.hi} and {right.lo}-{right.hi} overlap")
    else:
        for i, a in enumerate(bands):
            for b in bands[i + 1:]:
                if _intervals_overlap(a, b):
                    raise OverlappingBands(f"bands {a.lo}-{a.hi} and {b.lo}-{b.hi} overlap")
    return SpectralProfile(dimension, bands)


def indicator(lo, hi, amplitude=1.0, phase: Twist | None = None) -> SpectralProfile:
    """Profile with a single band."""
    b = band(lo, hi, amplitude, phase)
    return make_profile(b.dimension, [b])


def _phase_from_dict(d: dict | None) -> Twist:
    if not d or d.get("kind", "none") == "none":
        return NoTwist()
    kind = d["kind"]
    if kind == "negative_dispersion":
        return NegativeDispersion(float(d["m"]))
    if kind == "linear":
        return Linear(float(d["c"]))
    raise InvalidParams(f"unknown phase kind {kind!r}")


def profile_from_dict(d: dict) -> SpectralProfile:
    dim = int(d["dimension"])
    bands = [
        band(b["lo"], b["hi"], b.get("amplitude", 1.0), _phase_from_dict(b.get("phase")))
        for b in d["bands"]
    ]
    return make_profile(dim, bands)


def profile_from_json(text: str) -> SpectralProfile:
    return profile_from_dict(json.loads(text))


def sobolev_norm(profile: SpectralProfile, s: float, rel_tol: float = 1e-12) -> float:
    """H^s norm ``(2 pi)^{-d/2} (int (1+|xi|^2)^s |f^(xi)|^2 dxi)^{1/2}``.

    Twists are unimodular and drop out.  Each band is integrated with
    composite Gauss-Legendre panels refined until the sum stabilises.
    """
    d = profile.dimension
    total = 0.0
    for b in profile.bands:
        if b.amplitude == 0.0:
            continue
        if s == 0:
            total += b.amplitude ** 2 * b.volume
            continue
        if d == 1:
            val = gauss_legendre_adaptive(
                lambda xi: (1.0 + xi * xi) ** s, b.lo[0], b.hi[0], rel_tol=rel_tol
            )
        else:
            lo2, hi2 = b.lo[1], b.hi[1]

            def inner(x1, lo2=lo2, hi2=hi2):
                return np.array([
                    gauss_legendre_adaptive(
                        lambda x2: (1.0 + v * v + x2 * x2) ** s, lo2, hi2, rel_tol=rel_tol
                    )
                    for v in np.atleast_1d(x1)
                ])

            val = gauss_legendre_adaptive(inner, b.lo[0], b.hi[0], rel_tol=rel_tol)
        total += b.amplitude ** 2 * val
    return (2.0 * math.pi) ** (-d / 2.0) * math.sqrt(total)
