"""Counting functions over enumerated circle sets.

Four families of counts:

* ``count_curvature``  -- circles meeting a region with curvature < T;
* ``count_geodesic``   -- circles whose hemisphere (the geodesic plane over
  the circle) meets the slab-box over a region at heights (1/T, 1]; used to
  validate the sandwich inequalities against the curvature count;
* ``count_hyparea``    -- circles of the triangle packing whose enclosed
  disk has hyperbolic area > t, answered for a whole ladder of thresholds by
  one sort of the scale-invariant ratios r / Im(center);
* cusp counters        -- area counts restricted to neighborhoods of the
  three boundary points of the triangle; the finite cusps are delegated to
  the cusp at infinity through the packing-preserving isometry that cycles
  -1 -> oo -> 1 -> -1.

The strict convention curvature < T (and area > t) is used everywhere,
including the hemisphere slab, whose height range is open at the bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .mobius import (INFINITY, Motion, apply_motion, area_of_disk, beta,
                     circle_from_center_radius)
from .packing import CircleSet, IncompleteEnumerationError
from . import regions
from .regions import Annulus, Region

__all__ = [
    "CountSeries",
    "SpatialIndex",
    "circle_meets_region",
    "count_curvature",
    "hemisphere_meets_box",
    "count_geodesic",
    "count_hyparea",
    "cusp_count_inf",
    "cusp_count_pm1",
    "cusp_outside_count",
    "cusp_rotator",
]


@dataclass
class CountSeries:
    """A ladder of (parameter, count) pairs.

    ``param`` is "T" for curvature ladders (counts nondecreasing) or "t" for
    area thresholds (counts nonincreasing); values are stored ascending and
    the monotonicity is validated on construction.
    """

    param: str
    values: list
    counts: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.param not in ("T", "t"):
            raise ValueError(f"parameter must be 'T' or 't', got {self.param!r}")
        pairs = sorted(zip(self.values, self.counts))
        self.values = [float(v) for v, _ in pairs]
        self.counts = [int(c) for _, c in pairs]
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")
        diffs = [b - a for a, b in zip(self.counts, self.counts[1:])]
        if self.param == "T" and any(d < 0 for d in diffs):
            raise ValueError("curvature counts must be nondecreasing in T")
        if self.param == "t" and any(d > 0 for d in diffs):
            raise ValueError("area counts must be nonincreasing in t")

    def write_csv(self, path):
        import csv
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["param", "value", "count"])
            for v, c in zip(self.values, self.counts):
                w.writerow([self.param, format(v, ".17g"), c])

    @classmethod
    def read_csv(cls, path, meta: dict | None = None) -> "CountSeries":
        import csv
        values, counts, param = [], [], None
        with open(path, newline="", encoding="utf-8") as fh:
            rd = csv.reader(fh)
            header = next(rd)
            if header[:3] != ["param", "value", "count"]:
                raise ValueError(f"unrecognized count CSV header: {header}")
            for row in rd:
                param = row[0]
                values.append(float(row[1]))
                counts.append(int(row[2]))
        if param is None:
            raise ValueError("empty count series")
        return cls(param, values, counts, dict(meta or {}))


class SpatialIndex:
    """Uniform acceleration index over circle centers, sorted along x.

    Queries return candidate indices whose circle could meet a bounding box;
    the caller applies the exact predicate afterwards.
    """

    def __init__(self, S: CircleSet):
        fd = S.float_data()
        self.line_idx = np.nonzero(fd["line"])[0]
        circ = np.nonzero(~fd["line"])[0]
        cx = fd["cx"][circ]
        order = np.argsort(cx)
        self.circ = circ[order]
        self.cx = cx[order]
        self.cy = fd["cy"][self.circ]
        self.rmax = float(fd["r"][circ].max()) if len(circ) else 0.0

    def query_bbox(self, bbox):
        x0, y0, x1, y1 = bbox
        lo = np.searchsorted(self.cx, x0 - self.rmax)
        hi = np.searchsorted(self.cx, x1 + self.rmax)
        sel = slice(lo, hi)
        ymask = (self.cy[sel] >= y0 - self.rmax) & (self.cy[sel] <= y1 + self.rmax)
        return self.circ[sel][ymask]


def circle_meets_region(C, E: Region) -> bool:
    """True iff the curve of the circle (or the line) intersects the region."""
    if C.is_line:
        return bool(regions.line_meets(E, float(C.wx), float(C.wy),
                                       float(C.offset)))
    c = C.center
    return bool(regions.circle_meets(E, c.real, c.imag, C.radius))


def _require_complete_for(S: CircleSet, E: Region, max_T: float):
    if not S.complete:
        raise IncompleteEnumerationError(
            "circle set was not exhaustively enumerated; refusing to count")
    if float(S.meta.get("max_curvature", 0)) < max_T:
        raise IncompleteEnumerationError(
            f"enumeration bound {S.meta.get('max_curvature')} is below the "
            f"requested ladder top {max_T}")
    ebb = E.bbox()
    if ebb is None:
        raise IncompleteEnumerationError(
            "counting over an unbounded region needs the dedicated cusp "
            "counters")
    wbb = S.meta.get("window_bbox")
    tol = 1e-9
    if wbb is not None and not (wbb[0] - tol <= ebb[0] and wbb[1] - tol <= ebb[1]
                                and ebb[2] <= wbb[2] + tol
                                and ebb[3] <= wbb[3] + tol):
        raise IncompleteEnumerationError(
            f"region bbox {ebb} is not inside the enumeration window {wbb}")


def count_curvature(S: CircleSet, E: Region, ladder) -> CountSeries:
    """N_T over the ladder: circles meeting E with curvature strictly
    below T (lines count, their curvature is 0)."""
    ladder = sorted(float(T) for T in ladder)
    if not ladder or ladder[0] <= 0:
        raise ValueError("curvature ladder must be positive")
    _require_complete_for(S, E, ladder[-1])
    fd = S.float_data()
    idx = SpatialIndex(S)
    ebb = E.bbox()
    cand = idx.query_bbox(ebb)
    meets = cand[regions.circle_meets(E, fd["cx"][cand], fd["cy"][cand],
                                      fd["r"][cand])] if len(cand) else cand
    curv = np.sort(fd["b"][meets])
    n_lines = int(sum(
        1 for i in idx.line_idx
        if regions.line_meets(E, fd["wx"][i], fd["wy"][i], fd["bbar"][i] / 2)))
    counts = [int(np.searchsorted(curv, T, side="left")) + n_lines
              for T in ladder]
    meta = {"region": regions.region_to_expr(E), "source": S.meta.get("name"),
            "digest": S.content_digest()}
    return CountSeries("T", ladder, counts, meta)


def hemisphere_meets_box(C, E: Region, T: float) -> bool:
    """Whether the geodesic plane over the circle meets the box
    {z + l j : z in E, 1/T < l <= 1}.

    For a circle of radius r centered at z0 this happens iff r > 1/T and E
    meets the annulus around z0 with radii [sqrt(max(0, r^2 - 1)),
    sqrt(r^2 - 1/T^2)]; for a line, iff E meets the line.  The bottom of the
    slab is open so the test pairs exactly with the strict bound
    curvature < T.
    """
    if T <= 1:
        raise ValueError(f"slab needs T > 1, got {T}")
    if C.is_line:
        return bool(regions.line_meets(E, float(C.wx), float(C.wy),
                                       float(C.offset)))
    r = C.radius
    if r <= 1.0 / T:
        return False
    c = C.center
    iv = E.dist_interval(c.real, c.imag)
    if iv is None or not E.connected():
        raise ValueError(f"hemisphere test needs a distance interval on {E!r}")
    rin = math.sqrt(max(r * r - 1.0, 0.0))
    rout = math.sqrt(r * r - 1.0 / (T * T))
    return bool((iv[0] <= rout) and (iv[1] >= rin))


def count_geodesic(S: CircleSet, E: Region, ladder) -> CountSeries:
    """Hemisphere-slab counts over the ladder (validation for the sandwich
    inequalities around count_curvature)."""
    ladder = sorted(float(T) for T in ladder)
    if ladder[0] <= 1:
        raise ValueError("geodesic counting needs T > 1")
    _require_complete_for(S, E, ladder[-1])
    fd = S.float_data()
    line = fd["line"]
    r = np.where(line, 0.0, fd["r"])
    iv = E.dist_interval(np.where(line, 0.0, fd["cx"]),
                         np.where(line, 0.0, fd["cy"]))
    if iv is None or not E.connected():
        raise ValueError(f"hemisphere test needs a distance interval on {E!r}")
    dmin, dmax = iv
    rin = np.sqrt(np.maximum(r * r - 1.0, 0.0))
    n_lines = int(sum(
        1 for i in np.nonzero(line)[0]
        if regions.line_meets(E, fd["wx"][i], fd["wy"][i], fd["bbar"][i] / 2)))
    counts = []
    for T in ladder:
        rout = np.sqrt(np.maximum(r * r - 1.0 / (T * T), 0.0))
        ok = (~line) & (r > 1.0 / T) & (dmin <= rout) & (dmax >= rin)
        counts.append(int(np.sum(ok)) + n_lines)
    meta = {"region": regions.region_to_expr(E), "source": S.meta.get("name"),
            "digest": S.content_digest()}
    return CountSeries("T", ladder, counts, meta)


# --- hyperbolic-area counting ----------------------------------------------

def _area_ratios(S: CircleSet):
    """Sorted r / Im(center) over the circles with disks inside the upper
    half-plane (the area criterion compares this ratio to beta(t))."""
    fd = S.float_data()
    ok = (~fd["line"]) & (fd["cy"] > fd["r"])
    return np.sort(fd["r"][ok] / fd["cy"][ok])


def _coverage_floor(S: CircleSet) -> float:
    """A conservative bound on the largest hyperbolic area a circle missing
    from this truncated set could have.

    Two truncation frontiers: translates beyond the period extension sit at
    center height above 2*(k+1) - 1 with radius at most 1, and circles below
    the curvature bound were all enumerated, so an absent circle has
    r < 1/T at height y >= c*sqrt(r) where c is the observed floor of
    y/sqrt(r) (constant along cusp chains); both give explicit area bounds.
    """
    fd = S.float_data()
    circ = ~fd["line"]
    if not np.any(circ):
        return math.inf
    T = float(S.meta.get("max_curvature", 0))
    if T <= 0:
        return math.inf
    shift = S.meta.get("period_shift")
    k = int(S.meta.get("period_k", 0))
    bounds = []
    if shift is not None:
        t_norm = math.hypot(shift[0], shift[1])
        y_far = t_norm * (k + 1) - 1.0
        if y_far <= 1.0:
            return math.inf
        bounds.append(area_of_disk(y_far, 1.0))
    y = fd["cy"][circ]
    r = fd["r"][circ]
    c_obs = float(np.min(y / np.sqrt(r)))
    r_miss = 1.0 / T
    ratio = math.sqrt(r_miss) / c_obs  # r/y <= sqrt(r)/c_obs
    if ratio >= 1:
        return math.inf
    bounds.append(area_of_disk(1.0, ratio))
    return max(bounds)


def _require_area_coverage(S: CircleSet, t_min: float):
    bound = _coverage_floor(S)
    if bound >= t_min:
        raise IncompleteEnumerationError(
            f"truncation may clip disks of area above {bound:.3g}, "
            f"which is not below the requested threshold {t_min:.3g}; "
            "enumerate deeper or extend further")


def count_hyparea(S: CircleSet, t_ladder) -> CountSeries:
    """Number of circles enclosing a disk of hyperbolic area > t, per t.

    Requires a triangle-filtered, period-extended set; refuses when the
    truncation provably might clip disks above min(t_ladder).
    """
    if not S.meta.get("triangle_filtered"):
        raise ValueError("count_hyparea expects a triangle-filtered set")
    t_ladder = sorted(float(t) for t in t_ladder)
    if not t_ladder or t_ladder[0] <= 0:
        raise ValueError("area thresholds must be positive")
    _require_area_coverage(S, t_ladder[0])
    ratios = _area_ratios(S)
    counts = [int(len(ratios) - np.searchsorted(ratios, beta(t), side="right"))
              for t in t_ladder]
    meta = {"source": S.meta.get("name"), "digest": S.content_digest()}
    return CountSeries("t", t_ladder, counts, meta)


# --- cusp neighborhoods -----------------------------------------------------

_CUSP_CACHE = {}


def cusp_rotator() -> Motion:
    """The packing-preserving isometry z -> (z - 3)/(z + 1) cycling the
    cusps -1 -> oo -> 1 -> -1; the permutation is verified on first use."""
    if "g" not in _CUSP_CACHE:
        g = Motion.from_matrix(1, -3, 1, 1)
        checks = [(INFINITY, 1.0), (1.0, -1.0), (-1.0, INFINITY)]
        for src, dst in checks:
            img = g(src)
            if dst is INFINITY:
                if img is not INFINITY:
                    raise AssertionError("cusp map does not send -1 to infinity")
            elif img is INFINITY or abs(img - dst) > 1e-12:
                raise AssertionError(f"cusp map sends {src} to {img}, not {dst}")
        _CUSP_CACHE["g"] = g
    return _CUSP_CACHE["g"]


def _count_area_meeting(S: CircleSet, t: float, E: Region) -> int:
    """Circles with disk in the upper half-plane, area > t, curve meeting E."""
    fd = S.float_data()
    ok = (~fd["line"]) & (fd["cy"] > fd["r"])
    cx, cy, r = fd["cx"][ok], fd["cy"][ok], fd["r"][ok]
    m = (r / cy > beta(t)) & regions.circle_meets(E, cx, cy, r)
    return int(np.sum(m))


def _check_cusp_args(S: CircleSet, t: float, eta: float):
    if not (0 < eta < 0.25):
        raise ValueError(f"eta must lie in (0, 1/4), got {eta}")
    if t <= 0:
        raise ValueError(f"area threshold must be positive, got {t}")
    shift = S.meta.get("period_shift")
    k = int(S.meta.get("period_k", 0))
    if shift is None or k == 0:
        raise IncompleteEnumerationError(
            "cusp counting needs a period-extended set")
    t_norm = math.hypot(shift[0], shift[1])
    if t_norm * (k + 1) < 2 * t ** -eta:
        raise IncompleteEnumerationError(
            f"period extension reaches {t_norm * (k + 1):.3g}, below the "
            f"required 2*t^-eta = {2 * t ** -eta:.3g}")
    _require_area_coverage(S, t)


def cusp_count_inf(S: CircleSet, t: float, eta: float) -> int:
    """Circles of area > t meeting {|z| >= t^-eta} (the cusp at infinity)."""
    _check_cusp_args(S, t, eta)
    return _count_area_meeting(S, t, Annulus(0.0, 0.0, t ** -eta, math.inf))


def cusp_count_pm1(S: CircleSet, t: float, eta: float, sign: int,
                   radius_scale: float = 1.0) -> int:
    """Circles of area > t meeting {|z -+ 1| <= radius_scale * t^eta}.

    Computed by moving the disk at the finite cusp to a neighborhood of
    infinity with the cusp-cycling isometry (which preserves both the
    packing and hyperbolic areas) and counting there, so the enumeration
    only ever needs to be deep near the cusp at infinity.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    _check_cusp_args(S, t, eta)
    g = cusp_rotator()
    h = g.inverse() if sign == 1 else g
    boundary = circle_from_center_radius(complex(sign, 0.0),
                                         radius_scale * t ** eta)
    image = apply_motion(h, boundary)
    if image.is_line:  # pragma: no cover - only for huge t^eta
        raise ValueError("cusp neighborhood too large to transform")
    c = image.center
    return _count_area_meeting(
        S, t, Annulus(c.real, c.imag, image.radius, math.inf))


def cusp_outside_count(S: CircleSet, t: float, eta: float) -> int:
    """Circles of area > t whose center leaves the truncated triangle domain
    (the quantity the three cusp counters jointly dominate)."""
    _check_cusp_args(S, t, eta)
    fd = S.float_data()
    ok = (~fd["line"]) & (fd["cy"] > fd["r"])
    cx, cy, r = fd["cx"][ok], fd["cy"][ok], fd["r"][ok]
    big = r / cy > beta(t)
    y_lo, y_hi = t ** eta, t ** -eta
    in_tri = (np.abs(cx) <= 1.0) & (cx * cx + cy * cy >= 1.0)
    inside = in_tri & (y_lo <= cy) & (cy <= y_hi)
    return int(np.sum(big & ~inside))
