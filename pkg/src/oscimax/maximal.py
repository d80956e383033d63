"""Grid suprema in time (and direction) and mixed norms L^q_x L^inf_t L^inf_theta."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidParams, SpecOutOfRange
from .geometry import (
    AlphaMeasure,
    CantorSet,
    LineField,
    PathSpec,
    alpha_rule,
    path_point,
)
from .propagator import DEFAULT_MAX_PANELS, evaluate_many
from .quadrature import gl_nodes
from .spectral import SpectralProfile

_CHUNK = 1 << 20
_LOG_FLOOR = 1e-8  # lower end of a log grid whose window starts at 0, relative to its top


@dataclass(frozen=True)
class XInterval:
    """Interval [a, b]; ``grade_levels > 0`` grades the nodes geometrically toward 0.

    With grading, each side of 0 is cut at ``|end| * 2**-j`` for
    ``j = 1..grade_levels`` and every piece gets its own Gauss rule.
    """

    a: float
    b: float
    grade_levels: int = 0

    def __post_init__(self):
        if not self.a < self.b:
            raise InvalidParams(f"x interval needs a < b, got [{self.a}, {self.b}]")
        if self.grade_levels < 0:
            raise InvalidParams("grade_levels must be >= 0")

    def pieces(self):
        if self.grade_levels == 0 or not self.a <= 0 <= self.b:
            return [(self.a, self.b)]
        out = []
        for end in (self.a, self.b):
            if end == 0:
                continue
            cuts = [end * 2.0 ** -j for j in range(self.grade_levels, 0, -1)]
            pts = [0.0] + cuts + [end]
            out.extend(tuple(sorted((p, q))) for p, q in zip(pts, pts[1:]))
        return sorted(out)


@dataclass(frozen=True)
class CantorDomain:
    """``sign * C_k(r)``; ``sign = -1`` gives the reflected set used by witnesses."""

    cset: CantorSet
    sign: float = 1.0


@dataclass(frozen=True)
class ProductDomain:
    first: XInterval | CantorDomain
    second: XInterval | CantorDomain


XDomain = XInterval | CantorDomain | ProductDomain


@dataclass(frozen=True)
class TGrid:
    """Time grid: ``coarse_size`` points then ``refine_levels`` local refinements.

    ``kind`` is ``"log"`` or ``"uniform"``.  With ``spacing`` set, a uniform
    grid uses that step instead of ``coarse_size`` (the upper-bound probe).
    """

    coarse_size: int = 64
    refine_levels: int = 2
    refine_factor: int = 8
    kind: str = "log"
    spacing: float | None = None

    def __post_init__(self):
        if self.coarse_size < 64:
            raise InvalidParams(f"coarse_size must be >= 64, got {self.coarse_size}")
        if self.refine_levels < 0 or self.refine_factor < 2:
            raise InvalidParams("need refine_levels >= 0 and refine_factor >= 2")
        if self.kind not in ("log", "uniform"):
            raise InvalidParams(f"unknown grid kind {self.kind!r}")
        if self.spacing is not None and not self.spacing > 0:
            raise InvalidParams("spacing must be positive")

    def coarse(self, lo: float, hi: float) -> np.ndarray:
        if lo == hi:
            return np.array([lo])
        if self.kind == "uniform":
            if self.spacing is not None:
                n = int(math.ceil((hi - lo) / self.spacing)) + 1
                return np.linspace(lo, hi, max(n, 2))
            return np.linspace(lo, hi, self.coarse_size)
        if lo <= 0:
            lo = hi * _LOG_FLOOR
        return np.geomspace(lo, hi, self.coarse_size)


Witness = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray | None]]


@dataclass(frozen=True)
class MixedNormSpec:
    """Parameters of ``||S_t f(path)||_{L^q_x(mu) L^inf_t L^inf_theta}``.

    ``witness`` maps the x-node array to ``(t, theta)`` arrays that are
    injected into every node's grid; ``theta`` may be ``None`` for paths
    without directions.
    """

    q: float
    x_domain: XDomain
    t_window: tuple[float, float]
    measure: AlphaMeasure | None = None
    x_nodes: int | tuple[int, int] = 64
    t_grid: TGrid = field(default_factory=TGrid)
    witness: Witness | None = None
    rel_tol: float = 1e-10
    max_panels: int = DEFAULT_MAX_PANELS
    allow_large_2d: bool = False

    def __post_init__(self):
        if not 1 <= self.q <= 64:
            raise SpecOutOfRange(f"q must lie in [1, 64], got {self.q}")
        lo, hi = self.t_window
        if not (0 <= lo <= hi <= 1 and hi > 0):
            raise InvalidParams(f"t_window must satisfy 0 <= lo <= hi <= 1, got {self.t_window}")
        if min(np.atleast_1d(self.x_nodes)) < 1:
            raise InvalidParams("x_nodes must be positive")

    @property
    def dimension(self) -> int:
        return 2 if isinstance(self.x_domain, ProductDomain) else 1


# ---------------------------------------------------------------------------
# x quadrature

def _rule_1d(dom, measure, n):
    meas = measure if measure is not None else AlphaMeasure(1.0)
    if isinstance(dom, XInterval):
        pieces = dom.pieces()
        if len(pieces) == 1:
            return alpha_rule(meas, dom.a, dom.b, n)
        per = max(2, math.ceil(n / len(pieces)))
        rules = [alpha_rule(meas, a, b, per) for a, b in pieces]
        return np.concatenate([r[0] for r in rules]), np.concatenate([r[1] for r in rules])
    if isinstance(dom, CantorDomain):
        cset = dom.cset
        per = max(1, math.ceil(n / len(cset)))
        xs, ws = [], []
        for left in cset.left:
            a, b = sorted((dom.sign * left, dom.sign * (left + cset.length)))
            if measure is None:
                x, w = gl_nodes(a, b, per)
            else:
                x, w = alpha_rule(measure, a, b, per)
            xs.append(x)
            ws.append(w)
        x, w = np.concatenate(xs), np.concatenate(ws)
        order = np.argsort(x, kind="stable")
        return x[order], w[order]
    raise InvalidParams(f"unsupported 1D domain {dom!r}")


def x_rule(spec: MixedNormSpec):
    """Nodes and weights for the x integral, nodes in ascending order.

    On a Cantor domain each interval gets its own rule whose weights sum
    to the exact measure of that interval.  In 2D the measure acts on the
    first coordinate only and the rule is a tensor product; ``x_nodes`` may
    then be a pair giving the node count per axis.
    """
    dom = spec.x_domain
    if isinstance(dom, ProductDomain):
        n1, n2 = (spec.x_nodes, spec.x_nodes) if isinstance(spec.x_nodes, int) else spec.x_nodes
        x1, w1 = _rule_1d(dom.first, spec.measure, n1)
        x2, w2 = _rule_1d(dom.second, None, n2)
        xx = np.stack(np.meshgrid(x1, x2, indexing="ij"), axis=-1).reshape(-1, 2)
        return xx, np.outer(w1, w2).ravel()
    return _rule_1d(dom, spec.measure, spec.x_nodes)


# ---------------------------------------------------------------------------
# suprema

def _theta_samples(path):
    if isinstance(path, LineField):
        return path.directions.samples()
    return None


def _abs_values(profile, m, path, x, t, theta, spec):
    """|S_t f(path_point(x, t, theta))| for flat arrays of equal length."""
    out = np.empty(t.shape[0])
    for s in range(0, t.shape[0], _CHUNK):
        sl = slice(s, s + _CHUNK)
        th = None if theta is None else theta[sl]
        pts = path_point(path, x[sl], t[sl], th, dimension=profile.dimension)
        out[sl] = np.abs(evaluate_many(
            profile, m, pts, t[sl], rel_tol=spec.rel_tol, max_panels=spec.max_panels,
            allow_large_2d=spec.allow_large_2d,
        ))
    return out


def maximal_values(profile: SpectralProfile, m: float, path: PathSpec, xs, spec: MixedNormSpec):
    """Grid sup over time (and directions) at each node in ``xs``.

    Returns ``(values, t_best, theta_best)``.  Each value is a lower bound
    for the true supremum; refinement only adds grid points.
    """
    xs = np.asarray(xs, dtype=np.float64)
    d = profile.dimension
    nx = xs.shape[0]
    lo, hi = map(float, spec.t_window)
    coarse = spec.t_grid.coarse(lo, hi)
    t_floor = float(coarse[0])  # refinement never leaves the sampled window
    thetas = _theta_samples(path)
    if isinstance(path, LineField) and thetas.ndim == 1 and d == 2:
        raise InvalidParams("2D line fields need a product direction set")
    n_th = 1 if thetas is None else thetas.shape[0]

    # coarse grid shared by every node, plus per-node witnesses
    t_nodes = np.broadcast_to(coarse, (nx, coarse.size))
    w_t = w_th = None
    if spec.witness is not None:
        w_t, w_th = spec.witness(xs)
        w_t = np.asarray(w_t, dtype=np.float64).reshape(nx, -1)
        if w_th is not None:
            w_th = np.asarray(w_th, dtype=np.float64).reshape((nx, w_t.shape[1]) + thetas.shape[1:])
        t_nodes = np.concatenate([t_nodes, w_t], axis=1)
    t_nodes = np.sort(t_nodes, axis=1)
    nt = t_nodes.shape[1]

    # every (x, t, theta) triple on the coarse grid
    xi = np.repeat(np.arange(nx), nt * n_th)
    tt = np.repeat(t_nodes.ravel(), n_th)
    if thetas is None:
        th = None
    else:
        th = np.tile(thetas, (nx * nt,) + (1,) * (thetas.ndim - 1))
    vals = _abs_values(profile, m, path, xs[xi], tt, th, spec).reshape(nx, nt, n_th)
    best_flat = vals.reshape(nx, -1).argmax(axis=1)
    best = vals.reshape(nx, -1)[np.arange(nx), best_flat]
    bt_idx, bth_idx = np.divmod(best_flat, n_th)
    t_best = t_nodes[np.arange(nx), bt_idx]
    th_best = None if thetas is None else thetas[bth_idx]

    # witness pairs with their own directions
    if w_t is not None and w_th is not None:
        k = w_t.shape[1]
        wv = _abs_values(
            profile, m, path, np.repeat(xs, k, axis=0), w_t.ravel(),
            w_th.reshape((nx * k,) + thetas.shape[1:]), spec,
        ).reshape(nx, k)
        j = wv.argmax(axis=1)
        better = wv[np.arange(nx), j] > best
        best = np.where(better, wv[np.arange(nx), j], best)
        t_best = np.where(better, w_t[np.arange(nx), j], t_best)
        th_best = np.where(better.reshape((-1,) + (1,) * (thetas.ndim - 1)),
                           w_th[np.arange(nx), j], th_best)

    # local refinement at the best direction
    left = t_nodes[np.arange(nx), np.maximum(bt_idx - 1, 0)]
    right = t_nodes[np.arange(nx), np.minimum(bt_idx + 1, nt - 1)]
    left = np.minimum(left, t_best)
    right = np.maximum(right, t_best)
    f = spec.t_grid.refine_factor
    for _ in range(spec.t_grid.refine_levels):
        if nt == 1:
            break
        frac = np.linspace(0.0, 1.0, 2 * f + 1)
        cand = left[:, None] + (right - left)[:, None] * frac[None, :]
        cand = np.clip(cand, t_floor, hi)
        nc = cand.shape[1]
        xi = np.repeat(np.arange(nx), nc)
        thr = None if th_best is None else np.repeat(th_best, nc, axis=0)
        cv = _abs_values(profile, m, path, xs[xi], cand.ravel(), thr, spec).reshape(nx, nc)
        j = cv.argmax(axis=1)
        better = cv[np.arange(nx), j] > best
        best = np.where(better, cv[np.arange(nx), j], best)
        t_best = np.where(better, cand[np.arange(nx), j], t_best)
        step = (right - left) / (2 * f)
        left = np.maximum(t_best - step, t_floor)
        right = np.minimum(t_best + step, hi)
    return best, t_best, th_best


def maximal_in_time(profile: SpectralProfile, m: float, path: PathSpec, x, spec: MixedNormSpec) -> float:
    """Grid sup over the time window (and directions) at one point ``x``."""
    xs = np.asarray(x, dtype=np.float64).reshape(1, -1) if profile.dimension == 2 else \
        np.asarray([x], dtype=np.float64)
    return float(maximal_values(profile, m, path, xs, spec)[0][0])


def power_mean(values, weights, q: float) -> float:
    """``(sum w v^q)^{1/q}`` accumulated in the given (ascending node) order."""
    acc = math.fsum(float(w) * float(v) ** q for v, w in zip(values, weights))
    return acc ** (1.0 / q)


def mixed_norm(profile: SpectralProfile, m: float, path: PathSpec, spec: MixedNormSpec) -> float:
    """``(int_X sup_t sup_theta |S_t f(path)|^q dmu)^{1/q}`` on the x rule."""
    if profile.dimension != spec.dimension:
        raise InvalidParams("x domain dimension does not match the profile")
    xs, ws = x_rule(spec)
    vals, _, _ = maximal_values(profile, m, path, xs, spec)
    return power_mean(vals, ws, spec.q)
