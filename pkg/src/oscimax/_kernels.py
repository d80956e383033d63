"""Hot inner loops: panel Gauss-Legendre sums and midpoint-rule oracles.

Every band integral computed here has the form

    integral over [lo, hi] of  g(xi) * exp(i * phase(xi))  d xi,
    phase(xi) = (B + lin) * xi + T * |xi|**m + coef * |xi|**pw

where ``g`` is ``amp`` times one of a few fixed amplitude shapes.  Each kernel
exists twice: a scalar-loop version compiled with numba (``*_nb``) and a
vectorized numpy version (``*_np``).  ``_backend.USE_NUMBA`` picks the one
exported under the plain name.
"""
import math

import numpy as np

from . import _backend

AMP_CONST = 0
AMP_BUMP = 1
AMP_BUMP2 = 2
AMP_COS2 = 3

HALF_PI = 0.5 * math.pi

STATUS_OK = 0
STATUS_BUDGET = 1

SEG_PANELS = 256   # bands needing more initial panels than this are segmented
MAX_SEGMENTS = 64

GL_ORDER = 16
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


# ---------------------------------------------------------------------------
# scalar helpers (plain python source, compiled by numba when available)

def _bump_scalar(xi):
    u = (abs(xi) - 1.25) / 0.75
    if abs(u) >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - u * u))


def _amp_scalar(kind, xi):
    if kind == AMP_CONST:
        return 1.0
    if kind == AMP_BUMP:
        return _bump_scalar(xi)
    if kind == AMP_BUMP2:
        b = _bump_scalar(xi)
        return b * b
    c = math.cos(HALF_PI * xi)
    return c * c


def _deriv_bound_scalar(lo, hi, b, t, m, coef, pw):
    rmax = max(abs(lo), abs(hi))
    if pw == m:
        g = abs(m * (t + coef)) * rmax ** (m - 1.0)
    else:
        g = abs(m * t) * rmax ** (m - 1.0) + abs(coef * pw) * rmax ** (pw - 1.0)
    return abs(b) + g


def _initial_panels_scalar(lo, hi, dbound, kind):
    n = int(math.ceil(dbound * (hi - lo) / HALF_PI))
    if kind != AMP_CONST and n < 4:
        n = 4
    if n < 1:
        n = 1
    return n


def _panel_sum_scalar(lo, hi, n, b, t, m, coef, pw, kind, gx, gw):
    h = (hi - lo) / n
    re = 0.0
    im = 0.0
    for p in range(n):
        left = lo + (hi - lo) * p / n
        for k in range(gx.size):
            xi = left + 0.5 * h * (gx[k] + 1.0)
            ax = abs(xi)
            ph = b * xi + t * ax ** m
            if coef != 0.0:
                ph += coef * ax ** pw
            w = 0.5 * h * gw[k] * _amp_scalar(kind, xi)
            re += w * math.cos(ph)
            im += w * math.sin(ph)
    return re, im


def _segment_count(lo, hi, dbound, kind):
    """Equal segments for a band; wide phase ranges get local panel sizes."""
    n = _initial_panels_scalar(lo, hi, dbound, kind)
    if n <= SEG_PANELS:
        return 1
    return min(MAX_SEGMENTS, n // SEG_PANELS)


def _adaptive_piece_scalar(lo, hi, b, t, m, coef, pw, kind, tol, max_panels, gx, gw):
    dbound = _deriv_bound_scalar(lo, hi, b, t, m, coef, pw)
    n = _initial_panels_scalar(lo, hi, dbound, kind)
    if 2 * n > max_panels:
        return 0.0, 0.0, STATUS_BUDGET, n
    re0, im0 = _panel_sum_scalar(lo, hi, n, b, t, m, coef, pw, kind, gx, gw)
    while True:
        n *= 2
        if n > max_panels:
            return re0, im0, STATUS_BUDGET, n
        re1, im1 = _panel_sum_scalar(lo, hi, n, b, t, m, coef, pw, kind, gx, gw)
        if math.hypot(re1 - re0, im1 - im0) <= tol:
            return re1, im1, STATUS_OK, n
        re0 = re1
        im0 = im1


def _adaptive_band_scalar(lo, hi, b, t, m, coef, pw, kind, tol, max_panels, gx, gw):
    dbound = _deriv_bound_scalar(lo, hi, b, t, m, coef, pw)
    nseg = _segment_count(lo, hi, dbound, kind)
    re = 0.0
    im = 0.0
    used = 0
    for s in range(nseg):
        a = lo + (hi - lo) * s / nseg
        c = lo + (hi - lo) * (s + 1) / nseg
        r, i, st, n = _adaptive_piece_scalar(a, c, b, t, m, coef, pw, kind, tol / nseg,
                                             max_panels - used, gx, gw)
        re += r
        im += i
        used += n
        if st != STATUS_OK:
            return re, im, st
    return re, im, STATUS_OK


def _panel_sum2_scalar(lo1, hi1, n1, lo2, hi2, n2, b1, b2, t, m, coef, pw, gx, gw):
    h1 = (hi1 - lo1) / n1
    h2 = (hi2 - lo2) / n2
    re = 0.0
    im = 0.0
    for p1 in range(n1):
        left1 = lo1 + (hi1 - lo1) * p1 / n1
        for k1 in range(gx.size):
            x1 = left1 + 0.5 * h1 * (gx[k1] + 1.0)
            w1 = 0.5 * h1 * gw[k1]
            for p2 in range(n2):
                left2 = lo2 + (hi2 - lo2) * p2 / n2
                for k2 in range(gx.size):
                    x2 = left2 + 0.5 * h2 * (gx[k2] + 1.0)
                    r = math.sqrt(x1 * x1 + x2 * x2)
                    ph = b1 * x1 + b2 * x2 + t * r ** m
                    if coef != 0.0:
                        ph += coef * r ** pw
                    w = w1 * 0.5 * h2 * gw[k2]
                    re += w * math.cos(ph)
                    im += w * math.sin(ph)
    return re, im


def _adaptive_rect_scalar(lo1, hi1, lo2, hi2, b1, b2, t, m, coef, pw, tol,
                          max_panels, gx, gw):
    rmax = math.sqrt(max(lo1 * lo1, hi1 * hi1) + max(lo2 * lo2, hi2 * hi2))
    if pw == m:
        g = abs(m * (t + coef)) * rmax ** (m - 1.0)
    else:
        g = abs(m * t) * rmax ** (m - 1.0) + abs(coef * pw) * rmax ** (pw - 1.0)
    n1 = max(1, int(math.ceil((abs(b1) + g) * (hi1 - lo1) / HALF_PI)))
    n2 = max(1, int(math.ceil((abs(b2) + g) * (hi2 - lo2) / HALF_PI)))
    if 4 * n1 * n2 > max_panels:
        return 0.0, 0.0, STATUS_BUDGET
    re0, im0 = _panel_sum2_scalar(lo1, hi1, n1, lo2, hi2, n2, b1, b2, t, m, coef, pw, gx, gw)
    while True:
        n1 *= 2
        n2 *= 2
        if n1 * n2 > max_panels:
            return re0, im0, STATUS_BUDGET
        re1, im1 = _panel_sum2_scalar(lo1, hi1, n1, lo2, hi2, n2, b1, b2, t, m, coef, pw, gx, gw)
        if math.hypot(re1 - re0, im1 - im0) <= tol:
            return re1, im1, STATUS_OK
        re0 = re1
        im0 = im1


def _bands_1d_loop(lo, hi, amp, lin, coef, pw, kind, b, t, m, rtol, max_panels, gx, gw):
    npts = b.size
    out = np.zeros(npts, dtype=np.complex128)
    status = np.zeros(npts, dtype=np.int64)
    for p in _backend.prange(npts):
        re = 0.0
        im = 0.0
        st = STATUS_OK
        for j in range(lo.size):
            if amp[j] == 0.0:
                continue
            tol = rtol * (hi[j] - lo[j])
            r, i, s = _adaptive_band_scalar(lo[j], hi[j], b[p] + lin[j], t[p], m, coef[j],
                                            pw[j], kind, tol, max_panels, gx, gw)
            re += amp[j] * r
            im += amp[j] * i
            if s != STATUS_OK:
                st = s
        out[p] = complex(re, im)
        status[p] = st
    return out, status


def _bands_2d_loop(lo1, hi1, lo2, hi2, amp, lin, coef, pw, b1, b2, t, m, rtol,
                   max_panels, gx, gw):
    npts = b1.size
    out = np.zeros(npts, dtype=np.complex128)
    status = np.zeros(npts, dtype=np.int64)
    for p in _backend.prange(npts):
        re = 0.0
        im = 0.0
        st = STATUS_OK
        for j in range(lo1.size):
            if amp[j] == 0.0:
                continue
            tol = rtol * (hi1[j] - lo1[j]) * (hi2[j] - lo2[j])
            r, i, s = _adaptive_rect_scalar(lo1[j], hi1[j], lo2[j], hi2[j], b1[p] + lin[j],
                                            b2[p] + lin[j], t[p], m, coef[j], pw[j], tol,
                                            max_panels, gx, gw)
            re += amp[j] * r
            im += amp[j] * i
            if s != STATUS_OK:
                st = s
        out[p] = complex(re, im)
        status[p] = st
    return out, status


def _oracle_1d_loop(lo, hi, amp, lin, coef, pw, b, t, m, n_nodes):
    npts = b.size
    out = np.zeros(npts, dtype=np.complex128)
    xi = np.empty(n_nodes)
    base = np.empty(n_nodes)
    extra = np.empty(n_nodes)
    for j in range(lo.size):
        h = (hi[j] - lo[j]) / n_nodes
        # node-only terms are shared by every point
        for k in range(n_nodes):
            xi[k] = lo[j] + (k + 0.5) * h
            ax = abs(xi[k])
            base[k] = ax ** m
            extra[k] = coef[j] * ax ** pw[j] if coef[j] != 0.0 else 0.0
        for p in _backend.prange(npts):
            bj = b[p] + lin[j]
            tp = t[p]
            sr = 0.0
            si = 0.0
            for k in range(n_nodes):
                ph = bj * xi[k] + tp * base[k] + extra[k]
                sr += math.cos(ph)
                si += math.sin(ph)
            out[p] += complex(amp[j] * h * sr, amp[j] * h * si)
    return out


def _oracle_2d_loop(lo1, hi1, lo2, hi2, amp, lin, coef, pw, b1, b2, t, m, n_nodes):
    npts = b1.size
    out = np.zeros(npts, dtype=np.complex128)
    for p in _backend.prange(npts):
        re = 0.0
        im = 0.0
        for j in range(lo1.size):
            h1 = (hi1[j] - lo1[j]) / n_nodes
            h2 = (hi2[j] - lo2[j]) / n_nodes
            sr = 0.0
            si = 0.0
            for k1 in range(n_nodes):
                x1 = lo1[j] + (k1 + 0.5) * h1
                for k2 in range(n_nodes):
                    x2 = lo2[j] + (k2 + 0.5) * h2
                    r = math.sqrt(x1 * x1 + x2 * x2)
                    ph = (b1[p] + lin[j]) * x1 + (b2[p] + lin[j]) * x2 + t[p] * r ** m
                    if coef[j] != 0.0:
                        ph += coef[j] * r ** pw[j]
                    sr += math.cos(ph)
                    si += math.sin(ph)
            re += amp[j] * h1 * h2 * sr
            im += amp[j] * h1 * h2 * si
        out[p] = complex(re, im)
    return out


# ---------------------------------------------------------------------------
# numpy fallback

_CHUNK = 1 << 18


def _amp_np(kind, xi):
    if kind == AMP_CONST:
        return np.ones_like(xi)
    if kind == AMP_COS2:
        return np.cos(HALF_PI * xi) ** 2
    u = (np.abs(xi) - 1.25) / 0.75
    inside = np.abs(u) < 1.0
    out = np.zeros_like(xi)
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    return out if kind == AMP_BUMP else out * out


def _panel_sum_np(lo, hi, n, b, t, m, coef, pw, kind, gx, gw):
    h = (hi - lo) / n
    total = 0.0 + 0.0j
    per_chunk = max(1, _CHUNK // gx.size)
    for start in range(0, n, per_chunk):
        p = np.arange(start, min(n, start + per_chunk), dtype=np.float64)
        left = lo + (hi - lo) * p / n
        xi = (left[:, None] + 0.5 * h * (gx[None, :] + 1.0)).ravel()
        w = np.tile(0.5 * h * gw, p.size) * _amp_np(kind, xi)
        ax = np.abs(xi)
        ph = b * xi + t * ax ** m
        if coef != 0.0:
            ph = ph + coef * ax ** pw
        total += np.sum(w * np.cos(ph)) + 1j * np.sum(w * np.sin(ph))
    return total


def _adaptive_piece_np(lo, hi, b, t, m, coef, pw, kind, tol, max_panels, gx, gw):
    dbound = _deriv_bound_scalar(lo, hi, b, t, m, coef, pw)
    n = _initial_panels_scalar(lo, hi, dbound, kind)
    if 2 * n > max_panels:
        return 0.0j, STATUS_BUDGET, n
    v0 = _panel_sum_np(lo, hi, n, b, t, m, coef, pw, kind, gx, gw)
    while True:
        n *= 2
        if n > max_panels:
            return v0, STATUS_BUDGET, n
        v1 = _panel_sum_np(lo, hi, n, b, t, m, coef, pw, kind, gx, gw)
        if abs(v1 - v0) <= tol:
            return v1, STATUS_OK, n
        v0 = v1


def _adaptive_band_np(lo, hi, b, t, m, coef, pw, kind, tol, max_panels, gx, gw):
    dbound = _deriv_bound_scalar(lo, hi, b, t, m, coef, pw)
    nseg = _segment_count(lo, hi, dbound, kind)
    total = 0.0j
    used = 0
    for s in range(nseg):
        a = lo + (hi - lo) * s / nseg
        c = lo + (hi - lo) * (s + 1) / nseg
        v, st, n = _adaptive_piece_np(a, c, b, t, m, coef, pw, kind, tol / nseg,
                                      max_panels - used, gx, gw)
        total += v
        used += n
        if st != STATUS_OK:
            return total, st
    return total, STATUS_OK


def _bands_1d_np(lo, hi, amp, lin, coef, pw, kind, b, t, m, rtol, max_panels, gx, gw):
    out = np.zeros(b.size, dtype=np.complex128)
    status = np.zeros(b.size, dtype=np.int64)
    for p in range(b.size):
        for j in range(lo.size):
            if amp[j] == 0.0:
                continue
            v, s = _adaptive_band_np(lo[j], hi[j], b[p] + lin[j], t[p], m, coef[j], pw[j],
                                     kind, rtol * (hi[j] - lo[j]), max_panels, gx, gw)
            out[p] += amp[j] * v
            status[p] = max(status[p], s)
    return out, status


def _panel_sum2_np(lo1, hi1, n1, lo2, hi2, n2, b1, b2, t, m, coef, pw, gx, gw):
    h1 = (hi1 - lo1) / n1
    h2 = (hi2 - lo2) / n2
    x1 = ((lo1 + (hi1 - lo1) * np.arange(n1)[:, None] / n1) + 0.5 * h1 * (gx + 1.0)).ravel()
    w1 = np.tile(0.5 * h1 * gw, n1)
    x2 = ((lo2 + (hi2 - lo2) * np.arange(n2)[:, None] / n2) + 0.5 * h2 * (gx + 1.0)).ravel()
    w2 = np.tile(0.5 * h2 * gw, n2)
    total = 0.0 + 0.0j
    rows = max(1, _CHUNK // x2.size)
    for s in range(0, x1.size, rows):
        a = x1[s:s + rows, None]
        r = np.sqrt(a * a + x2[None, :] ** 2)
        ph = b1 * a + b2 * x2[None, :] + t * r ** m
        if coef != 0.0:
            ph = ph + coef * r ** pw
        w = w1[s:s + rows, None] * w2[None, :]
        total += np.sum(w * np.cos(ph)) + 1j * np.sum(w * np.sin(ph))
    return total


def _bands_2d_np(lo1, hi1, lo2, hi2, amp, lin, coef, pw, b1, b2, t, m, rtol,
                 max_panels, gx, gw):
    out = np.zeros(b1.size, dtype=np.complex128)
    status = np.zeros(b1.size, dtype=np.int64)
    for p in range(b1.size):
        for j in range(lo1.size):
            if amp[j] == 0.0:
                continue
            bb1 = b1[p] + lin[j]
            bb2 = b2[p] + lin[j]
            rmax = math.sqrt(max(lo1[j] ** 2, hi1[j] ** 2) + max(lo2[j] ** 2, hi2[j] ** 2))
            if pw[j] == m:
                g = abs(m * (t[p] + coef[j])) * rmax ** (m - 1.0)
            else:
                g = abs(m * t[p]) * rmax ** (m - 1.0) + abs(coef[j] * pw[j]) * rmax ** (pw[j] - 1.0)
            n1 = max(1, int(math.ceil((abs(bb1) + g) * (hi1[j] - lo1[j]) / HALF_PI)))
            n2 = max(1, int(math.ceil((abs(bb2) + g) * (hi2[j] - lo2[j]) / HALF_PI)))
            tol = rtol * (hi1[j] - lo1[j]) * (hi2[j] - lo2[j])
            if 4 * n1 * n2 > max_panels:
                status[p] = STATUS_BUDGET
                continue
            args = (lo1[j], hi1[j], lo2[j], hi2[j], bb1, bb2, t[p], m, coef[j], pw[j], gx, gw)
            v0 = _panel_sum2_np(args[0], args[1], n1, args[2], args[3], n2, *args[4:])
            while True:
                n1 *= 2
                n2 *= 2
                if n1 * n2 > max_panels:
                    status[p] = STATUS_BUDGET
                    v1 = v0
                    break
                v1 = _panel_sum2_np(args[0], args[1], n1, args[2], args[3], n2, *args[4:])
                if abs(v1 - v0) <= tol:
                    break
                v0 = v1
            out[p] += amp[j] * v1
    return out, status


def _oracle_1d_np(lo, hi, amp, lin, coef, pw, b, t, m, n_nodes):
    out = np.zeros(b.size, dtype=np.complex128)
    for j in range(lo.size):
        h = (hi[j] - lo[j]) / n_nodes
        for start in range(0, n_nodes, _CHUNK):
            k = np.arange(start, min(n_nodes, start + _CHUNK), dtype=np.float64)
            xi = lo[j] + (k + 0.5) * h
            ax = np.abs(xi)
            base = ax ** m
            extra = coef[j] * ax ** pw[j] if coef[j] != 0.0 else 0.0
            for p in range(b.size):
                ph = (b[p] + lin[j]) * xi + t[p] * base + extra
                out[p] += amp[j] * h * (np.sum(np.cos(ph)) + 1j * np.sum(np.sin(ph)))
    return out


def _oracle_2d_np(lo1, hi1, lo2, hi2, amp, lin, coef, pw, b1, b2, t, m, n_nodes):
    out = np.zeros(b1.size, dtype=np.complex128)
    for j in range(lo1.size):
        h1 = (hi1[j] - lo1[j]) / n_nodes
        h2 = (hi2[j] - lo2[j]) / n_nodes
        x1 = lo1[j] + (np.arange(n_nodes) + 0.5) * h1
        x2 = lo2[j] + (np.arange(n_nodes) + 0.5) * h2
        rows = max(1, _CHUNK // n_nodes)
        for s in range(0, n_nodes, rows):
            a = x1[s:s + rows, None]
            r = np.sqrt(a * a + x2[None, :] ** 2)
            base = r ** m
            extra = coef[j] * r ** pw[j] if coef[j] != 0.0 else 0.0
            for p in range(b1.size):
                ph = (b1[p] + lin[j]) * a + (b2[p] + lin[j]) * x2[None, :] + t[p] * base + extra
                out[p] += amp[j] * h1 * h2 * (np.sum(np.cos(ph)) + 1j * np.sum(np.sin(ph)))
    return out


# ---------------------------------------------------------------------------
# compiled versions and dispatch

if _backend.USE_NUMBA:
    _nb = _backend.numba.njit(cache=True)
    _bump_scalar = _nb(_bump_scalar)
    _amp_scalar = _nb(_amp_scalar)
    _deriv_bound_scalar = _nb(_deriv_bound_scalar)
    _initial_panels_scalar = _nb(_initial_panels_scalar)
    _panel_sum_scalar = _nb(_panel_sum_scalar)
    _segment_count = _nb(_segment_count)
    _adaptive_piece_scalar = _nb(_adaptive_piece_scalar)
    _adaptive_band_scalar = _nb(_adaptive_band_scalar)
    _panel_sum2_scalar = _nb(_panel_sum2_scalar)
    _adaptive_rect_scalar = _nb(_adaptive_rect_scalar)
    _par = _backend.numba.njit(cache=True, parallel=True)
    bands_1d_nb = _par(_bands_1d_loop)
    bands_2d_nb = _par(_bands_2d_loop)
    oracle_1d_nb = _par(_oracle_1d_loop)
    oracle_2d_nb = _par(_oracle_2d_loop)
    bands_1d = bands_1d_nb
    bands_2d = bands_2d_nb
    oracle_1d = oracle_1d_nb
    oracle_2d = oracle_2d_nb
else:
    bands_1d_nb = bands_2d_nb = oracle_1d_nb = oracle_2d_nb = None
    bands_1d = _bands_1d_np
    bands_2d = _bands_2d_np
    oracle_1d = _oracle_1d_np
    oracle_2d = _oracle_2d_np

bands_1d_np = _bands_1d_np
bands_2d_np = _bands_2d_np
oracle_1d_np = _oracle_1d_np
oracle_2d_np = _oracle_2d_np
