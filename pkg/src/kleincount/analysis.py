"""Turning count ladders into exponents: power-law fits, equidistribution
ratios, box-counting dimension, and the boundary-collar regularity probe."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .counting import CountSeries, count_curvature
from .packing import CircleSet
from . import regions
from .regions import Rect, Region, dilate, erode

__all__ = [
    "PowerFit",
    "DimensionEstimate",
    "EquidistResult",
    "fit_power_law",
    "fit_area_law",
    "equidist_ratio",
    "box_count_dimension",
    "regularity_probe",
]


@dataclass
class PowerFit:
    """Ordinary least squares of log(count) against log(parameter)."""

    exponent: float
    log_coeff: float
    r_squared: float
    stderr_exponent: float
    window: tuple
    n_points: int
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "coefficient": math.exp(self.log_coeff) if math.isfinite(self.log_coeff)
            else None,
            "log_coeff": self.log_coeff,
            "r2": self.r_squared,
            "stderr": self.stderr_exponent,
            "window": list(self.window),
            "n_points": self.n_points,
            "note": self.note,
        }


def _ols_loglog(x, y):
    n = len(x)
    A = np.vstack([x, np.ones(n)]).T
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    slope, icept = float(sol[0]), float(sol[1])
    resid = y - A @ sol
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    sxx = float(np.sum((x - x.mean()) ** 2))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 and sxx > 0 else 0.0
    return slope, icept, r2, stderr


def fit_power_law(series: CountSeries, drop_low_fraction: float = 0.5) -> PowerFit:
    """Fit counts ~ C * p^s on the high end of the ladder.

    The fit variable is log(T) for curvature series and log(1/t) for area
    series (so the reported exponent is positive in both growth laws).  The
    lowest ``drop_low_fraction`` of the log-parameter range is discarded;
    small parameters sit outside the asymptotic regime.
    """
    if not (0 <= drop_low_fraction < 1):
        raise ValueError("drop_low_fraction must lie in [0, 1)")
    if len(series.values) < 8:
        raise ValueError(f"need at least 8 ladder points, got {len(series.values)}")
    vals = np.array(series.values)
    cnts = np.array(series.counts)
    x = np.log(vals) if series.param == "T" else np.log(1.0 / vals)
    order = np.argsort(x)
    x, cnts, vals = x[order], cnts[order], vals[order]
    cut = x[0] + drop_low_fraction * (x[-1] - x[0])
    keep = x >= cut - 1e-12
    if int(keep.sum()) < 4:
        raise ValueError("fewer than 4 usable points after dropping the low range")
    if np.any(cnts[keep] <= 0):
        raise ValueError("zero counts inside the fit window")
    xs, ys = x[keep], np.log(cnts[keep].astype(float))
    slope, icept, r2, stderr = _ols_loglog(xs, ys)
    pw = (float(vals[keep][0]), float(vals[keep][-1]))
    return PowerFit(slope, icept, r2, stderr, pw, int(keep.sum()))


def fit_area_law(series: CountSeries, drop_low_fraction: float = 0.5) -> PowerFit:
    """Fit of an area-threshold series against log(1/t); the expected slope
    is half the packing dimension."""
    if series.param != "t":
        raise ValueError("fit_area_law expects an area-threshold series")
    return fit_power_law(series, drop_low_fraction)


@dataclass
class EquidistResult:
    ratios: list  # (T, N_T(E1)/N_T(E2))
    stabilization: float  # max relative deviation from the final ratio, top half


def equidist_ratio(S: CircleSet, E1: Region, E2: Region, ladder) -> EquidistResult:
    """Ratio N_T(E1)/N_T(E2) along the ladder with a stabilization statistic."""
    c1 = count_curvature(S, E1, ladder)
    c2 = count_curvature(S, E2, ladder)
    if any(c == 0 for c in c2.counts):
        raise ValueError("denominator count vanishes on the requested ladder")
    ratios = [(T, a / b) for T, a, b in zip(c1.values, c1.counts, c2.counts)]
    final = ratios[-1][1]
    top = ratios[len(ratios) // 2:]
    stab = max(abs(r / final - 1.0) for _, r in top) if final != 0 else math.inf
    return EquidistResult(ratios, stab)


@dataclass
class DimensionEstimate:
    alpha_hat: float
    scales: list
    box_counts: list
    guard_failure_rates: list
    fit: PowerFit = field(default=None)

    def as_dict(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "scales": list(self.scales),
            "box_counts": list(self.box_counts),
            "guard_failure_rates": list(self.guard_failure_rates),
            "fit": None if self.fit is None else self.fit.as_dict(),
        }


def _boxes_on_curve(cx, cy, r, eps, ox, oy, nx, ny):
    """Grid cells crossed by a circle curve, by marching the arc at step
    eps/3 (cells outside the grid are dropped)."""
    steps = max(16, int(2 * math.pi * r / (eps / 3.0)) + 1)
    th = np.linspace(0.0, 2.0 * math.pi, steps, endpoint=False)
    px = cx + r * np.cos(th)
    py = cy + r * np.sin(th)
    ii = np.floor((px - ox) / eps).astype(np.int64)
    jj = np.floor((py - oy) / eps).astype(np.int64)
    ok = (ii >= 0) & (ii < nx) & (jj >= 0) & (jj < ny)
    return ii[ok], jj[ok]


def box_count_dimension(S: CircleSet, scales, window: Rect | None = None,
                        cluster_min: int = 3) -> DimensionEstimate:
    """Box-counting estimate of the dimension of the curve union.

    A box is counted when a circle of radius >= eps/2 crosses it (its curve
    is resolved at that scale) or when at least ``cluster_min`` enumerated
    circles touch it (a dense cluster standing in for the accumulation set).
    Boxes touched only by one or two sub-resolution circles fail the guard;
    the per-scale failure rate is reported so the proxy stays auditable.
    """
    scales = sorted(float(e) for e in scales)
    if len(scales) < 3:
        raise ValueError("need at least 3 scales")
    if window is None:
        bb = S.meta.get("window_bbox")
        if bb is None:
            raise ValueError("no window recorded; pass one explicitly")
        window = Rect(*bb)
    min_curv_needed = 2.0 / min(scales)
    if float(S.meta.get("max_curvature", math.inf)) < min_curv_needed:
        raise ValueError(
            f"enumeration depth {S.meta.get('max_curvature')} is too shallow "
            f"for the smallest scale (needs curvature {min_curv_needed:g})")
    ox, oy = window.x0, window.y0
    fd = S.float_data()
    line = fd["line"]
    counts, failures = [], []
    for eps in scales:
        nx = int(math.ceil((window.x1 - window.x0) / eps - 1e-9))
        ny = int(math.ceil((window.y1 - window.y0) / eps - 1e-9))
        grid_id = {}
        counted = set()
        big = (~line) & (fd["r"] >= eps / 2.0)
        for i in np.nonzero(big)[0]:
            ii, jj = _boxes_on_curve(fd["cx"][i], fd["cy"][i], fd["r"][i],
                                     eps, ox, oy, nx, ny)
            counted.update(zip(ii.tolist(), jj.tolist()))
        for i in np.nonzero(line)[0]:
            nxv, nyv, off = fd["wx"][i], fd["wy"][i], fd["bbar"][i] / 2
            # march the segment of the line inside the window
            tx, ty = -nyv, nxv
            px0, py0 = off * nxv, off * nyv
            reach = math.hypot(window.x1 - window.x0, window.y1 - window.y0) \
                + math.hypot(px0 - (window.x0 + window.x1) / 2,
                             py0 - (window.y0 + window.y1) / 2)
            s = np.arange(-reach, reach, eps / 3.0)
            ii = np.floor((px0 + s * tx - ox) / eps).astype(np.int64)
            jj = np.floor((py0 + s * ty - oy) / eps).astype(np.int64)
            ok = (ii >= 0) & (ii < nx) & (jj >= 0) & (jj < ny)
            counted.update(zip(ii[ok].tolist(), jj[ok].tolist()))
        # sub-resolution circles: cluster guard on touched cells
        small = (~line) & (fd["r"] < eps / 2.0)
        touched = {}
        for i in np.nonzero(small)[0]:
            cxi, cyi, ri = fd["cx"][i], fd["cy"][i], fd["r"][i]
            i0 = math.floor((cxi - ri - ox) / eps)
            i1 = math.floor((cxi + ri - ox) / eps)
            j0 = math.floor((cyi - ri - oy) / eps)
            j1 = math.floor((cyi + ri - oy) / eps)
            for a in range(max(i0, 0), min(i1, nx - 1) + 1):
                for b in range(max(j0, 0), min(j1, ny - 1) + 1):
                    touched[(a, b)] = touched.get((a, b), 0) + 1
        failed = 0
        for cell, k in touched.items():
            if cell in counted:
                continue
            if k >= cluster_min:
                counted.add(cell)
            else:
                failed += 1
        n_cand = len(counted) + failed
        counts.append(len(counted))
        failures.append(failed / n_cand if n_cand else 0.0)
    xs = np.log(1.0 / np.array(scales))
    ys = np.log(np.array(counts, dtype=float))
    slope, icept, r2, stderr = _ols_loglog(xs, ys)
    fit = PowerFit(slope, icept, r2, stderr,
                   (min(scales), max(scales)), len(scales))
    return DimensionEstimate(slope, scales, counts, failures, fit)


def regularity_probe(S: CircleSet, E: Region, eps_ladder,
                     curvature_band=(64.0, 4096.0)) -> PowerFit:
    """Estimate the decay exponent of the boundary-collar mass of E.

    For each eps, counts circles in a fixed curvature band whose curve meets
    dilate(E, eps) minus erode(E, eps), normalized by the band total, and
    fits the log-fraction against log(eps).  This is a counting proxy: it
    measures the packing's own boundary concentration, not an invariant
    measure.
    """
    eps_ladder = sorted(float(e) for e in eps_ladder)
    if len(eps_ladder) < 3:
        raise ValueError("need at least 3 collar widths")
    if E.bbox() is None:
        raise ValueError("regularity probe needs a bounded region")
    lo, hi = curvature_band
    fd = S.float_data()
    band = (~fd["line"]) & (fd["b"] >= lo) & (fd["b"] < hi)
    cx, cy, r = fd["cx"][band], fd["cy"][band], fd["r"][band]
    total = int(band.sum())
    if total == 0:
        raise ValueError("no circles in the reference curvature band")
    fracs = []
    for eps in eps_ladder:
        D = dilate(E, eps)
        Er = erode(E, eps)
        in_dilated = regions.circle_meets(D, cx, cy, r)
        if isinstance(Er, Rect):
            # curve lies strictly inside a rectangle iff the center does,
            # shrunk by the radius
            inside = ((Er.x0 + r < cx) & (cx < Er.x1 - r)
                      & (Er.y0 + r < cy) & (cy < Er.y1 - r))
        else:
            inside = Er.depth(cx, cy) > r
        fracs.append(int(np.sum(in_dilated & ~inside)) / total)
    if all(f == 0 for f in fracs):
        return PowerFit(math.inf, -math.inf, 1.0, 0.0,
                        (eps_ladder[0], eps_ladder[-1]), len(eps_ladder),
                        note="trivially regular: empty collar at all widths")
    if any(f == 0 for f in fracs):
        raise ValueError("collar counts vanish at some widths only; "
                         "extend the ladder or the band")
    xs = np.log(np.array(eps_ladder))
    ys = np.log(np.array(fracs))
    slope, icept, r2, stderr = _ols_loglog(xs, ys)
    return PowerFit(slope, icept, r2, stderr,
                    (eps_ladder[0], eps_ladder[-1]), len(eps_ladder))
