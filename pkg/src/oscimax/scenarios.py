"""Knapp-type witness constructions, lambda ladders and exponent fits.

Each scenario builds band-limited data, an approach path and a mixed-norm
specification whose witness times (and directions) keep the phase below
1/2, so the numeric norm is bounded below by an explicit closed form.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import DegenerateAbscissae, DegenerateLadder, InvalidParams, PhaseCertificateFailed
from .geometry import (
    AlphaMeasure,
    CantorDirections,
    ExpTangential,
    Interval,
    LineField,
    PowerCurve,
    Product,
    Singleton,
    cantor_intervals,
    nearest_cantor_endpoint,
    path_point,
)
from .maximal import (
    CantorDomain,
    MixedNormSpec,
    ProductDomain,
    TGrid,
    XInterval,
    maximal_values,
    mixed_norm,
    power_mean,
    x_rule,
)
from .propagator import EvalRequest, evaluate_many, phase_bound
from .spectral import NegativeDispersion, SpectralProfile, band, make_profile, sobolev_norm

SCENARIOS = (
    "TangentialRow1",
    "TangentialRow2",
    "TangentialRow3",
    "ExpTangential",
    "FractalLines1D",
    "FractalLines2D_Low",
    "FractalLines2D_High",
    "AlphaFractalRemark",
    "SufficiencyProbe",
)
CANTOR_SCENARIOS = ("FractalLines1D", "FractalLines2D_Low", "FractalLines2D_High",
                    "AlphaFractalRemark")
EXPLORATORY = ("TangentialRow1",)

PHASE_LIMIT = 0.5
COS_HALF = math.cos(0.5)
PROBE_BANDS = 64
_EXP_T_FLOOR_X = 1.0 / 700.0  # exp(-1/x) underflows a little below 1/745


@dataclass(frozen=True)
class ScenarioParams:
    """Parameters shared by all scenarios; each id reads the ones it needs.

    ``theta`` selects the direction set of FractalLines1D: ``"cantor"``,
    ``"point"`` (Theta = {0}) or ``"interval"`` (Theta = [0, 1]).
    """

    m: float = 2.0
    kappa: float = 1.0
    q: float = 4.0
    alpha: float = 1.0
    s: float = 0.0
    r: float = 0.2
    c: float = 0.125
    theta: str = "cantor"
    seed: int = 0
    n_profiles: int = 20
    epsilon: float = 1.0
    coarse_size: int = 64
    refine_levels: int = 2
    refine_factor: int = 8

    def __post_init__(self):
        if not self.m > 1:
            raise InvalidParams(f"m must exceed 1, got {self.m}")
        if not 0 < self.kappa <= 1:
            raise InvalidParams(f"kappa must lie in (0, 1], got {self.kappa}")
        if not 0 < self.r < 0.5:
            raise InvalidParams(f"r must lie in (0, 1/2), got {self.r}")
        if not self.q >= 1:
            raise InvalidParams(f"q must be >= 1, got {self.q}")
        if not 0 < self.alpha <= 1:
            raise InvalidParams(f"alpha must lie in (0, 1], got {self.alpha}")
        if not self.c > 0:
            raise InvalidParams("band constant c must be positive")
        if self.theta not in ("cantor", "point", "interval"):
            raise InvalidParams(f"unknown theta kind {self.theta!r}")
        if self.n_profiles < 1 or not self.epsilon > 0:
            raise InvalidParams("need n_profiles >= 1 and epsilon > 0")

    @property
    def beta_cantor(self) -> float:
        return math.log(2.0) / math.log(1.0 / self.r)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ScenarioInstance:
    """A built rung: data, path, norm spec and the certified witness points.

    ``cert_x``/``cert_t``/``cert_theta`` list the points where the phase
    certificate is checked (the worst case of each witness family).
    ``profiles`` holds several data sets for the randomized probe.
    """

    id: str
    params: ScenarioParams
    lam: float
    k: int | None
    profiles: tuple[SpectralProfile, ...]
    path: object
    spec: MixedNormSpec
    cert_x: np.ndarray
    cert_t: np.ndarray
    cert_theta: np.ndarray | None
    guarantee: float | None
    exploratory: bool = False
    max_phase: float = field(default=float("nan"))

    @property
    def profile(self) -> SpectralProfile:
        return self.profiles[0]

    @property
    def dimension(self) -> int:
        return self.profile.dimension


# ---------------------------------------------------------------------------
# builders

def _t_grid(p: ScenarioParams, **kw) -> TGrid:
    return TGrid(p.coarse_size, p.refine_levels, p.refine_factor, **kw)


def _measure(p: ScenarioParams):
    return None if p.alpha == 1.0 else AlphaMeasure(p.alpha)


def _measure_of(spec: MixedNormSpec) -> float:
    """Exact mass of the x domain under the norm's measure (Lebesgue if unset)."""
    meas = spec.measure if spec.measure is not None else AlphaMeasure(1.0)

    def one(dom, mu):
        if isinstance(dom, XInterval):
            return float(mu.mass(dom.a, dom.b))
        cs = dom.cset
        a = dom.sign * cs.left
        b = dom.sign * (cs.left + cs.length)
        return float(np.sum(np.abs(mu.mass(np.minimum(a, b), np.maximum(a, b)))))

    dom = spec.x_domain
    if isinstance(dom, ProductDomain):
        return one(dom.first, meas) * one(dom.second, AlphaMeasure(1.0))
    return one(dom, meas)


def _fractal_1d(p, lam, k, sid):
    c = p.c
    prof = make_profile(1, [band(0.0, c * lam, 1.0, NegativeDispersion(p.m))])
    tau = 0.5 * lam ** -p.m
    t_w = 1.0 - tau
    if p.theta == "cantor":
        cset = cantor_intervals(p.r, k)
        path = LineField(CantorDirections(p.r, k))
        dom = CantorDomain(cset, sign=-1.0)

        def witness(xs):
            return np.full(xs.shape, t_w), nearest_cantor_endpoint(-xs, cset)

        mids = cset.left + 0.5 * cset.length
        cert_x = -mids
        cert_theta = nearest_cantor_endpoint(mids, cset)
        x_nodes = 4 * len(cset)
    elif p.theta == "point":
        path = LineField(Singleton(0.0))
        dom = XInterval(-1.0 / lam, 0.0)

        def witness(xs):
            return np.full(xs.shape, t_w), np.zeros(xs.shape)

        cert_x = np.array([-1.0 / lam, 0.0])
        cert_theta = np.zeros(2)
        x_nodes = 8
    else:
        path = LineField(Interval(0.0, 1.0, 17))
        dom = XInterval(-1.0, 0.0)

        def witness(xs):
            return np.full(xs.shape, t_w), -xs

        cert_x = -np.linspace(0.0, 1.0, 33)
        cert_theta = -cert_x
        x_nodes = 64
    spec = MixedNormSpec(
        q=p.q, x_domain=dom, t_window=(0.0, 1.0),
        measure=AlphaMeasure(p.alpha) if sid == "AlphaFractalRemark" else None,
        x_nodes=x_nodes, t_grid=_t_grid(p), witness=witness,
    )
    return prof, path, spec, cert_x, np.full(cert_x.shape, t_w), cert_theta


def _fractal_2d(p, lam, k, high):
    c = p.c
    prof = make_profile(2, [band((0.0, 0.0), (c * lam, c * lam), 1.0, NegativeDispersion(p.m))])
    tau = 0.5 * lam ** -p.m
    t_w = 1.0 - tau
    cset = cantor_intervals(p.r, k)
    n1 = 2 * len(cset)
    if high:
        path = LineField(Product(CantorDirections(p.r, k), Interval(0.0, 1.0, 9)))
        dom = ProductDomain(CantorDomain(cset, -1.0), XInterval(-1.0, 0.0))
        n2 = 16
    else:
        path = LineField(Product(CantorDirections(p.r, k), Singleton(0.0)))
        dom = ProductDomain(CantorDomain(cset, -1.0), XInterval(-1.0 / lam, 0.0))
        n2 = 4

    def witness(xs):
        th1 = nearest_cantor_endpoint(-xs[:, 0], cset)
        th2 = -xs[:, 1] if high else np.zeros(xs.shape[0])
        return np.full(xs.shape[0], t_w), np.stack([th1, th2], axis=1)

    mids = cset.left + 0.5 * cset.length
    y2 = np.array([0.0, 1.0]) if high else np.array([0.0, 1.0 / lam])
    cert_x = np.array([(-a, -b) for a in mids for b in y2])
    cert_theta = np.array([(nearest_cantor_endpoint(a, cset), b if high else 0.0)
                           for a in mids for b in y2])
    spec = MixedNormSpec(
        q=p.q, x_domain=dom, t_window=(0.0, 1.0), x_nodes=(n1, n2),
        t_grid=_t_grid(p), witness=witness,
    )
    return prof, path, spec, cert_x, np.full(cert_x.shape[0], t_w), cert_theta


def _row2(p, lam):
    top = lam ** (1.0 / p.m) / 100.0
    prof = make_profile(1, [band(0.0, top, 1.0)])
    path = PowerCurve(p.kappa)
    x_hi = lam ** (-1.0 / p.m) / 100.0
    t_hi = 1.0 / (100.0 * lam)

    def t_of(xs):
        return np.minimum(np.maximum(xs, 0.0) ** (1.0 / p.kappa), t_hi)

    spec = MixedNormSpec(
        q=p.q, x_domain=XInterval(0.0, x_hi), t_window=(0.0, t_hi), measure=_measure(p),
        x_nodes=32, t_grid=_t_grid(p), witness=lambda xs: (t_of(xs), None),
    )
    cert_x = np.linspace(0.0, x_hi, 17)[1:]
    return prof, path, spec, cert_x, t_of(cert_x), None


def row3_x_range(p: ScenarioParams, lam: float) -> float:
    """Upper end of the TangentialRow3 x range.

    The larger of the base range ``lam^{-1/m}/100`` and the range
    ``(100^m / (4 lam))^kappa`` on which ``t(x) = x^{1/kappa}`` keeps the
    phase below 1/4.
    """
    return max(lam ** (-1.0 / p.m) / 100.0, (100.0 ** p.m / (4.0 * lam)) ** p.kappa)


def _row3(p, lam):
    top = lam ** (1.0 / p.m) / 100.0
    prof = make_profile(1, [band(0.0, top, 1.0)])
    path = PowerCurve(p.kappa)
    x_hi = row3_x_range(p, lam)
    if x_hi > 1.0:
        raise InvalidParams(f"TangentialRow3 needs lambda >= 100^m/4, got {lam:g}")
    t_hi = x_hi ** (1.0 / p.kappa)

    def t_of(xs):
        return np.clip(xs, 0.0, x_hi) ** (1.0 / p.kappa)

    spec = MixedNormSpec(
        q=p.q, x_domain=XInterval(0.0, x_hi), t_window=(0.0, t_hi), measure=_measure(p),
        x_nodes=32, t_grid=_t_grid(p), witness=lambda xs: (t_of(xs), None),
    )
    cert_x = np.linspace(0.0, x_hi, 17)[1:]
    return prof, path, spec, cert_x, t_of(cert_x), None


def _exp_tangential(p, lam):
    top = lam ** (1.0 / p.m) / 100.0
    prof = make_profile(1, [band(0.0, top, 1.0)])
    x_hi = 1.0 / math.log(lam)

    def t_of(xs):
        return np.exp(-1.0 / np.maximum(xs, _EXP_T_FLOOR_X))

    spec = MixedNormSpec(
        q=p.q, x_domain=XInterval(0.0, x_hi), t_window=(0.0, math.exp(-1.0)),
        measure=_measure(p), x_nodes=32, t_grid=_t_grid(p),
        witness=lambda xs: (t_of(xs), None),
    )
    cert_x = np.concatenate([[_EXP_T_FLOOR_X * 0.01, _EXP_T_FLOOR_X], np.linspace(0, x_hi, 17)[1:]])
    return prof, ExpTangential(), spec, cert_x, t_of(cert_x), None


def _row1_time(x, lam, p):
    """Witness time for row 1.

    Solves the stationary-phase condition ``t^kappa - m xi_c^{m-1} t = x`` at
    the band centre by bisection; where it has no root, falls back to the
    fixed relation ``x = t^kappa + m lam^{2m-2} t``.
    """
    kap, m = p.kappa, p.m
    xi_c = lam + 0.5 / lam
    a = m * xi_c ** (m - 1)

    def bisect(g, lo, hi):
        glo = g(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            gm = g(mid)
            if (gm > 0) == (glo > 0):
                lo, glo = mid, gm
            else:
                hi = mid
        return 0.5 * (lo + hi)

    if kap < 1:
        t_peak = (kap / a) ** (1.0 / (1.0 - kap))
        if t_peak ** kap - a * t_peak >= x:
            return bisect(lambda t: t ** kap - a * t - x, 0.0, t_peak)
    b = m * lam ** (2 * m - 2)

    def fallback(t):
        return t ** kap + b * t - x

    return bisect(fallback, 0.0, 1.0) if fallback(1.0) >= 0 else 1.0


def _row1(p, lam):
    prof = make_profile(1, [band(lam, lam + 1.0 / lam, 1.0 / lam)])
    path = PowerCurve(p.kappa)
    x_hi = 1.0 / lam

    def witness(xs):
        return np.array([_row1_time(float(x), lam, p) for x in xs]), None

    spec = MixedNormSpec(
        q=p.q, x_domain=XInterval(0.0, x_hi), t_window=(0.0, 1.0), measure=_measure(p),
        x_nodes=32, t_grid=_t_grid(p), witness=witness,
    )
    cert_x = np.linspace(0.0, x_hi, 9)[1:]
    return prof, path, spec, cert_x, witness(cert_x)[0], None


def probe_profiles(p: ScenarioParams, lam: float) -> tuple[SpectralProfile, ...]:
    """Random-amplitude data on 64 equal sub-bands of [lam/2, 2 lam].

    Profile ``j`` draws from a Philox stream keyed by ``(seed, lam, j)``.
    """
    edges = np.linspace(0.5 * lam, 2.0 * lam, PROBE_BANDS + 1)
    out = []
    for j in range(p.n_profiles):
        ss = np.random.SeedSequence([p.seed, int(round(lam)), j])
        amps = np.random.Generator(np.random.Philox(ss)).uniform(0.0, 1.0, PROBE_BANDS)
        out.append(make_profile(1, [band(edges[i], edges[i + 1], amps[i])
                                    for i in range(PROBE_BANDS)]))
    return tuple(out)


def s_star(p: ScenarioParams) -> float:
    return min(0.25, p.alpha / p.q)


def probe_time_window(p: ScenarioParams, lam: float) -> float:
    """Time after which every wave packet of the probe has left [-1, 1]."""
    return 1.25 / (p.m * (0.5 * lam) ** (p.m - 1))


def _probe(p, lam):
    profs = probe_profiles(p, lam)
    width = lam ** (-p.q * s_star(p) / p.alpha)
    path = LineField(Interval(0.0, width, 2))
    t_hi = min(1.0, probe_time_window(p, lam))
    levels = int(math.ceil(math.log2(lam))) + 1
    spec = MixedNormSpec(
        q=p.q, x_domain=XInterval(-1.0, 1.0, grade_levels=levels), t_window=(0.0, t_hi),
        measure=_measure(p), x_nodes=6 * levels,
        t_grid=_t_grid(p, kind="uniform", spacing=p.epsilon * lam ** -p.m),
    )
    return profs, path, spec


def _lam_k(sid: str, p: ScenarioParams, rung: float) -> tuple[float, int | None]:
    if sid in CANTOR_SCENARIOS:
        k = int(rung)
        return (1.0 / p.r) ** k, k
    return float(rung), None


def build_scenario(sid: str, params: ScenarioParams, rung: float,
                   certify: bool = True) -> ScenarioInstance:
    """Build one ladder rung.

    ``rung`` is the Cantor generation ``k`` for Cantor scenarios
    (``lambda = r^-k``) and ``lambda`` itself otherwise.

    Raises
    ------
    PhaseCertificateFailed
        Some certificate point has phase above 1/2 (skipped for exploratory
        scenarios and when ``certify`` is false).
    """
    if sid not in SCENARIOS:
        raise InvalidParams(f"unknown scenario {sid!r}; choose from {', '.join(SCENARIOS)}")
    p = params
    lam, k = _lam_k(sid, p, rung)
    if not lam > 1:
        raise InvalidParams(f"lambda must exceed 1, got {lam}")
    if sid == "SufficiencyProbe":
        if p.m != 2:
            raise InvalidParams("the sufficiency probe is defined for m = 2")
        profs, path, spec = _probe(p, lam)
        return ScenarioInstance(sid, p, lam, k, profs, path, spec,
                                np.empty(0), np.empty(0), None, None)
    if sid in ("FractalLines1D", "AlphaFractalRemark"):
        if sid == "AlphaFractalRemark" and p.theta != "cantor":
            raise InvalidParams("the alpha remark uses Cantor directions")
        built = _fractal_1d(p, lam, k, sid)
    elif sid == "FractalLines2D_Low":
        built = _fractal_2d(p, lam, k, high=False)
    elif sid == "FractalLines2D_High":
        built = _fractal_2d(p, lam, k, high=True)
    elif sid == "TangentialRow1":
        built = _row1(p, lam)
    elif sid == "TangentialRow2":
        built = _row2(p, lam)
    elif sid == "TangentialRow3":
        built = _row3(p, lam)
    else:
        built = _exp_tangential(p, lam)
    prof, path, spec, cx, ct, cth = built
    guarantee = COS_HALF * (2 * math.pi) ** -prof.dimension * prof.mass * _measure_of(spec) ** (1 / p.q)
    inst = ScenarioInstance(sid, p, lam, k, (prof,), path, spec, cx, ct, cth,
                            guarantee, exploratory=sid in EXPLORATORY)
    if certify and not inst.exploratory:
        worst = certificate(inst)
        inst = replace(inst, max_phase=worst)
        if worst > PHASE_LIMIT:
            raise PhaseCertificateFailed(
                f"{sid} at lambda={lam:g}: witness phase {worst:.4g} exceeds {PHASE_LIMIT}"
            )
    return inst


def _cert_points(inst: ScenarioInstance):
    return path_point(inst.path, inst.cert_x, inst.cert_t, inst.cert_theta,
                      dimension=inst.dimension)


def certificate(inst: ScenarioInstance) -> float:
    """Largest phase bound over the certificate points."""
    pts = _cert_points(inst)
    worst = 0.0
    for pt, t in zip(pts, inst.cert_t):
        req = EvalRequest(inst.profile, inst.params.m, tuple(np.atleast_1d(pt)), float(t),
                          allow_large_2d=True)
        worst = max(worst, phase_bound(req))
    return worst


def witness_moduli(inst: ScenarioInstance) -> np.ndarray:
    """|S_t f| at the certificate points."""
    pts = _cert_points(inst)
    return np.abs(evaluate_many(inst.profile, inst.params.m, pts, inst.cert_t,
                                allow_large_2d=True))


def witness_norm(inst: ScenarioInstance, profile: SpectralProfile | None = None) -> float:
    """Mixed norm with the witness map injected into the time grid."""
    prof = inst.profile if profile is None else profile
    return mixed_norm(prof, inst.params.m, inst.path, inst.spec)


# ---------------------------------------------------------------------------
# exponents

@dataclass(frozen=True)
class Fit:
    slope: float
    stderr: float
    intercept: float


def fit_exponent(points: Sequence[tuple[float, float]]) -> Fit:
    """Ordinary least squares of the second coordinate on the first.

    Raises
    ------
    DegenerateAbscissae
        Fewer than three points or repeated abscissae.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    x, y = pts[:, 0], pts[:, 1]
    if x.size < 3 or np.unique(x).size != x.size:
        raise DegenerateAbscissae("need at least three distinct abscissae")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    dof = x.size - 2
    stderr = math.sqrt(float(np.sum(resid ** 2)) / dof / sxx) if dof > 0 else 0.0
    return Fit(slope, stderr, intercept)


def theoretical_exponent(sid: str, params: ScenarioParams) -> float:
    """Closed-form growth exponent of the norm ratio for a scenario."""
    p = params
    if sid in ("FractalLines1D", "FractalLines2D_Low", "FractalLines2D_High"):
        d = 1 if sid == "FractalLines1D" else 2
        if sid == "FractalLines1D":
            beta = {"cantor": p.beta_cantor, "point": 0.0, "interval": 1.0}[p.theta]
        elif sid == "FractalLines2D_Low":
            beta = p.beta_cantor
        else:
            beta = 1.0 + p.beta_cantor
        return d / 2 - d / p.q + beta / p.q - p.s
    if sid == "AlphaFractalRemark":
        return 0.5 + (p.beta_cantor - 1.0) / p.q - p.s
    if sid == "TangentialRow2":
        return (0.5 - p.alpha / p.q - p.s) / p.m
    if sid == "TangentialRow3":
        return 1.0 / (2 * p.m) - p.alpha * p.kappa / p.q - p.s / p.m
    if sid == "ExpTangential":
        return 1.0 / p.m - (p.s + 0.5) / p.m
    if sid == "SufficiencyProbe":
        return 0.5 - s_star(p) - p.s
    if sid == "TangentialRow1":
        return 0.25 - p.s
    raise InvalidParams(f"unknown scenario {sid!r}")


# ---------------------------------------------------------------------------
# ladders

@dataclass(frozen=True)
class ScalingRow:
    lam: float
    k: int | None
    norm: float
    sobolev: float
    ratio: float


@dataclass
class ScalingReport:
    """Ladder rows plus the fitted and closed-form exponents.

    ``fitted_slope`` is the slope of log ratio against log lambda, after
    multiplying by ``(log lambda)^{alpha/q}`` for ExpTangential.
    ``norm_slope`` is the same fit applied to the norm alone.
    """

    scenario: str
    params: ScenarioParams
    rows: list[ScalingRow]
    fitted_slope: float
    stderr: float
    theoretical_slope: float
    norm_slope: float
    extra: dict = field(default_factory=dict)

    def csv_lines(self) -> list[str]:
        lines = ["lambda,k,norm,sobolev,ratio"]
        for r in self.rows:
            k = "" if r.k is None else str(r.k)
            lines.append(f"{r.lam:.17g},{k},{r.norm:.17g},{r.sobolev:.17g},{r.ratio:.17g}")
        return lines

    def to_csv(self) -> str:
        return "\n".join(self.csv_lines()) + "\n"

    def manifest(self) -> dict:
        return {
            "scenario": self.scenario,
            "params": self.params.to_dict(),
            "seed": self.params.seed,
            "ladder": [r.k if r.k is not None else r.lam for r in self.rows],
            "fitted_slope": self.fitted_slope,
            "stderr": self.stderr,
            "theoretical_slope": self.theoretical_slope,
            "norm_slope": self.norm_slope,
        }

    def manifest_json(self) -> str:
        return json.dumps(self.manifest(), indent=2, sort_keys=True) + "\n"


def probe_rung(inst: ScenarioInstance) -> tuple[float, float, float]:
    """(norm, sobolev, ratio) of the profile with the largest ratio."""
    best = None
    for prof in inst.profiles:
        xs, ws = x_rule(inst.spec)
        vals, _, _ = maximal_values(prof, inst.params.m, inst.path, xs, inst.spec)
        n = power_mean(vals, ws, inst.spec.q)
        s = sobolev_norm(prof, inst.params.s)
        if best is None or n / s > best[2]:
            best = (n, s, n / s)
    return best


def run_rung(sid: str, params: ScenarioParams, rung: float) -> ScalingRow:
    inst = build_scenario(sid, params, rung)
    if sid == "SufficiencyProbe":
        n, s, ratio = probe_rung(inst)
    else:
        n = witness_norm(inst)
        s = sobolev_norm(inst.profile, params.s)
        ratio = n / s
    return ScalingRow(inst.lam, inst.k, n, s, ratio)


def run_scaling(sid: str, params: ScenarioParams, ladder: Sequence[float]) -> ScalingReport:
    """Run every rung, then fit log ratio against log lambda.

    Rungs are independent and pure; rows come back in ladder order.
    """
    ladder = list(ladder)
    if len(ladder) < 3:
        raise DegenerateLadder("a ladder needs at least three rungs")
    rows = [run_rung(sid, params, rung) for rung in ladder]
    lams = np.array([r.lam for r in rows])
    if np.any(np.diff(lams) <= 0):
        raise DegenerateLadder("lambda must increase strictly along the ladder")
    ratio = np.array([r.ratio for r in rows])
    norm = np.array([r.norm for r in rows])
    logl = np.log(lams)
    corr = np.zeros_like(logl)
    if sid == "ExpTangential":
        corr = (params.alpha / params.q) * np.log(logl)
    fit = fit_exponent(np.column_stack([logl, np.log(ratio) + corr]))
    nfit = fit_exponent(np.column_stack([logl, np.log(norm) + corr]))
    return ScalingReport(sid, params, rows, fit.slope, fit.stderr,
                         theoretical_exponent(sid, params), nfit.slope)
