"""Plane regions: membership, bounding boxes, and circle-intersection predicates.

Regions form a small closed algebra over the primitives (rectangle, disk,
annulus, half-plane, the ideal-triangle domain and its height truncation)
with dilation, erosion, intersection, union and complement-within-bounds.

The key predicate is whether the *curve* of a circle meets a region.  For a
connected region E and a circle with center c and radius r this reduces to a
distance-interval test: the curve meets E iff

    min_{p in E} |p - c|  <=  r  <=  max_{p in E} |p - c|.

Primitives (and dilations/unions of them) implement that interval exactly;
other composites fall back to adaptive arc sampling (1024 points, with one
4x refinement pass before reporting a miss).  All point predicates accept
numpy arrays and broadcast.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "Region",
    "Rect",
    "Disk",
    "Annulus",
    "HalfPlane",
    "IdealTriangle",
    "TruncatedTriangle",
    "Dilated",
    "Eroded",
    "IntersectRegion",
    "UnionRegion",
    "ComplementIn",
    "dilate",
    "erode",
    "parse_region",
    "region_to_expr",
]

_ARC_SAMPLES = 1024
_ARC_REFINE = 4


class Region:
    """Base class; subclasses are immutable value objects."""

    bounded: bool = True

    def bbox(self):
        """Axis-aligned bounding box (x0, y0, x1, y1); None if unbounded."""
        raise NotImplementedError

    def contains(self, x, y):
        """Pointwise membership; accepts scalars or numpy arrays."""
        raise NotImplementedError

    def connected(self) -> bool:
        return False

    def dist_interval(self, x, y):
        """(min, max) distance from the point(s) to the region, or None
        when no exact formula is available."""
        return None

    def depth(self, x, y):
        """Distance from the point(s) to the complement (0 outside), or None."""
        return None

    def line_dist_interval(self, nx, ny, off):
        """(min, max) distance from the line {n.p = off} to the region, or None."""
        return None

    def __repr__(self):
        return region_to_expr(self)


class Rect(Region):
    def __init__(self, x0, y0, x1, y1):
        if not (x0 < x1 and y0 < y1):
            raise ValueError(f"degenerate rectangle {(x0, y0, x1, y1)}")
        self.x0, self.y0, self.x1, self.y1 = (float(x0), float(y0),
                                              float(x1), float(y1))

    def bbox(self):
        return (self.x0, self.y0, self.x1, self.y1)

    def contains(self, x, y):
        return (self.x0 <= x) & (x <= self.x1) & (self.y0 <= y) & (y <= self.y1)

    def connected(self):
        return True

    def dist_interval(self, x, y):
        dx = np.maximum(np.maximum(self.x0 - x, x - self.x1), 0.0)
        dy = np.maximum(np.maximum(self.y0 - y, y - self.y1), 0.0)
        fx = np.maximum(np.abs(x - self.x0), np.abs(x - self.x1))
        fy = np.maximum(np.abs(y - self.y0), np.abs(y - self.y1))
        return np.hypot(dx, dy), np.hypot(fx, fy)

    def depth(self, x, y):
        d = np.minimum(np.minimum(x - self.x0, self.x1 - x),
                       np.minimum(y - self.y0, self.y1 - y))
        return np.maximum(d, 0.0)

    def line_dist_interval(self, nx, ny, off):
        vals = [nx * X + ny * Y - off
                for X in (self.x0, self.x1) for Y in (self.y0, self.y1)]
        lo = np.minimum.reduce(vals)
        hi = np.maximum.reduce(vals)
        dmin = np.where((lo <= 0) & (hi >= 0), 0.0,
                        np.minimum(np.abs(lo), np.abs(hi)))
        return dmin, np.maximum(np.abs(lo), np.abs(hi))


class Disk(Region):
    def __init__(self, cx, cy, r):
        if r <= 0:
            raise ValueError(f"disk needs positive radius, got {r}")
        self.cx, self.cy, self.r = float(cx), float(cy), float(r)

    def bbox(self):
        return (self.cx - self.r, self.cy - self.r, self.cx + self.r, self.cy + self.r)

    def contains(self, x, y):
        return np.hypot(x - self.cx, y - self.cy) <= self.r

    def connected(self):
        return True

    def dist_interval(self, x, y):
        d = np.hypot(x - self.cx, y - self.cy)
        return np.maximum(d - self.r, 0.0), d + self.r

    def depth(self, x, y):
        return np.maximum(self.r - np.hypot(x - self.cx, y - self.cy), 0.0)

    def line_dist_interval(self, nx, ny, off):
        v = np.abs(nx * self.cx + ny * self.cy - off)
        return np.maximum(v - self.r, 0.0), v + self.r


class Annulus(Region):
    """Closed annulus r0 <= |z - c| <= r1; r1 = inf gives a disk complement."""

    def __init__(self, cx, cy, r0, r1):
        if not (0 <= r0 < r1):
            raise ValueError(f"annulus needs 0 <= r0 < r1, got {(r0, r1)}")
        self.cx, self.cy = float(cx), float(cy)
        self.r0, self.r1 = float(r0), float(r1)
        self.bounded = math.isfinite(self.r1)

    def bbox(self):
        if not self.bounded:
            return None
        return (self.cx - self.r1, self.cy - self.r1,
                self.cx + self.r1, self.cy + self.r1)

    def contains(self, x, y):
        d = np.hypot(x - self.cx, y - self.cy)
        return (self.r0 <= d) & (d <= self.r1)

    def connected(self):
        return True

    def dist_interval(self, x, y):
        d = np.hypot(x - self.cx, y - self.cy)
        inside = (self.r0 <= d) & (d <= self.r1)
        dmin = np.where(inside, 0.0,
                        np.where(d < self.r0, self.r0 - d, d - self.r1))
        dmax = d + self.r1
        return dmin, dmax

    def depth(self, x, y):
        d = np.hypot(x - self.cx, y - self.cy)
        return np.maximum(np.minimum(d - self.r0, self.r1 - d), 0.0)

    def line_dist_interval(self, nx, ny, off):
        v = np.abs(nx * self.cx + ny * self.cy - off)
        return np.maximum(v - self.r1, 0.0), v + self.r1


class HalfPlane(Region):
    """Closed half-plane {Re(conj(n) z) <= d} with |n| = 1."""

    bounded = False

    def __init__(self, nx, ny, d):
        n = math.hypot(nx, ny)
        if abs(n - 1) > 1e-9:
            raise ValueError("half-plane normal must be a unit vector")
        self.nx, self.ny, self.d = float(nx), float(ny), float(d)

    def bbox(self):
        return None

    def contains(self, x, y):
        return self.nx * x + self.ny * y <= self.d

    def connected(self):
        return True

    def dist_interval(self, x, y):
        s = self.nx * x + self.ny * y - self.d
        return np.maximum(s, 0.0), np.full_like(np.asarray(s, dtype=float), np.inf)

    def depth(self, x, y):
        return np.maximum(self.d - (self.nx * x + self.ny * y), 0.0)


class IdealTriangle(Region):
    """The closed domain {|Re z| <= 1} with {|z| >= 1} in the upper half-plane."""

    bounded = False

    def bbox(self):
        return None

    def contains(self, x, y):
        return (np.abs(x) <= 1.0) & (x * x + y * y >= 1.0) & (y > 0)

    def connected(self):
        return True

    def depth(self, x, y):
        return np.maximum(np.minimum.reduce(
            [1.0 - np.abs(x), np.hypot(x, y) - 1.0, np.asarray(y, dtype=float)]), 0.0)


class TruncatedTriangle(Region):
    """The triangle domain restricted to heights t^eta <= y <= t^-eta."""

    def __init__(self, eta, t):
        if not (0 < eta < 1):
            raise ValueError(f"eta must lie in (0, 1), got {eta}")
        if not (0 < t < 1):
            raise ValueError(f"t must lie in (0, 1), got {t}")
        self.eta, self.t = float(eta), float(t)
        self.y_lo = self.t ** self.eta
        self.y_hi = self.t ** -self.eta

    def bbox(self):
        return (-1.0, self.y_lo, 1.0, self.y_hi)

    def contains(self, x, y):
        return ((np.abs(x) <= 1.0) & (x * x + y * y >= 1.0)
                & (self.y_lo <= y) & (y <= self.y_hi))

    def connected(self):
        return True


class Dilated(Region):
    """All points within eps of the base region."""

    def __init__(self, base: Region, eps: float):
        if eps <= 0:
            raise ValueError("dilation radius must be positive")
        if base.dist_interval(0.0, 0.0) is None:
            raise ValueError(f"dilation needs an exact distance on {base!r}")
        self.base, self.eps = base, float(eps)
        self.bounded = base.bounded

    def bbox(self):
        bb = self.base.bbox()
        if bb is None:
            return None
        return (bb[0] - self.eps, bb[1] - self.eps, bb[2] + self.eps, bb[3] + self.eps)

    def contains(self, x, y):
        return self.base.dist_interval(x, y)[0] <= self.eps

    def connected(self):
        return self.base.connected()

    def dist_interval(self, x, y):
        dmin, dmax = self.base.dist_interval(x, y)
        return np.maximum(dmin - self.eps, 0.0), dmax + self.eps

    def line_dist_interval(self, nx, ny, off):
        iv = self.base.line_dist_interval(nx, ny, off)
        if iv is None:
            return None
        return np.maximum(iv[0] - self.eps, 0.0), iv[1] + self.eps


class Eroded(Region):
    """All points whose eps-disk lies inside the base region."""

    def __init__(self, base: Region, eps: float):
        if eps <= 0:
            raise ValueError("erosion radius must be positive")
        if base.depth(0.0, 0.0) is None:
            raise ValueError(f"erosion needs an exact interior depth on {base!r}")
        self.base, self.eps = base, float(eps)
        self.bounded = base.bounded

    def bbox(self):
        bb = self.base.bbox()
        if bb is None:
            return None
        x0, y0, x1, y1 = (bb[0] + self.eps, bb[1] + self.eps,
                          bb[2] - self.eps, bb[3] - self.eps)
        if x0 >= x1 or y0 >= y1:
            return (bb[0], bb[1], bb[0], bb[1])  # possibly empty
        return (x0, y0, x1, y1)

    def contains(self, x, y):
        return self.base.depth(x, y) >= self.eps

    def depth(self, x, y):
        return np.maximum(self.base.depth(x, y) - self.eps, 0.0)


class IntersectRegion(Region):
    def __init__(self, *parts: Region):
        if not parts:
            raise ValueError("empty intersection")
        self.parts = tuple(parts)
        self.bounded = any(p.bounded for p in self.parts)

    def bbox(self):
        boxes = [p.bbox() for p in self.parts if p.bbox() is not None]
        if not boxes:
            return None
        return (max(b[0] for b in boxes), max(b[1] for b in boxes),
                min(b[2] for b in boxes), min(b[3] for b in boxes))

    def contains(self, x, y):
        out = self.parts[0].contains(x, y)
        for p in self.parts[1:]:
            out = out & p.contains(x, y)
        return out

    def depth(self, x, y):
        ds = [p.depth(x, y) for p in self.parts]
        if any(d is None for d in ds):
            return None
        return np.minimum.reduce(ds)


class UnionRegion(Region):
    def __init__(self, *parts: Region):
        if not parts:
            raise ValueError("empty union")
        self.parts = tuple(parts)
        self.bounded = all(p.bounded for p in self.parts)

    def bbox(self):
        boxes = [p.bbox() for p in self.parts]
        if any(b is None for b in boxes):
            return None
        return (min(b[0] for b in boxes), min(b[1] for b in boxes),
                max(b[2] for b in boxes), max(b[3] for b in boxes))

    def contains(self, x, y):
        out = self.parts[0].contains(x, y)
        for p in self.parts[1:]:
            out = out | p.contains(x, y)
        return out

    def dist_interval(self, x, y):
        ivs = [p.dist_interval(x, y) for p in self.parts]
        if any(iv is None for iv in ivs):
            return None
        return (np.minimum.reduce([iv[0] for iv in ivs]),
                np.maximum.reduce([iv[1] for iv in ivs]))

    def line_dist_interval(self, nx, ny, off):
        ivs = [p.line_dist_interval(nx, ny, off) for p in self.parts]
        if any(iv is None for iv in ivs):
            return None
        return (np.minimum.reduce([iv[0] for iv in ivs]),
                np.maximum.reduce([iv[1] for iv in ivs]))


class ComplementIn(Region):
    """Points of a bounding rectangle not in the excluded region."""

    def __init__(self, excluded: Region, bound: Rect):
        self.excluded, self.bound = excluded, bound

    def bbox(self):
        return self.bound.bbox()

    def contains(self, x, y):
        return self.bound.contains(x, y) & ~self.excluded.contains(x, y)


def dilate(E: Region, eps: float) -> Region:
    return Dilated(E, eps)


def erode(E: Region, eps: float) -> Region:
    """Erosion; shrinking a rectangle stays a rectangle (kept exact)."""
    if isinstance(E, Rect):
        x0, y0, x1, y1 = E.x0 + eps, E.y0 + eps, E.x1 - eps, E.y1 - eps
        if not (x0 < x1 and y0 < y1):
            raise ValueError("erosion radius swallows the rectangle")
        return Rect(x0, y0, x1, y1)
    return Eroded(E, eps)


# --- circle/line vs region predicates -------------------------------------

def _unit_angles(n):
    return np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


_THETA = _unit_angles(_ARC_SAMPLES)
_COS, _SIN = np.cos(_THETA), np.sin(_THETA)
_THETA4 = _unit_angles(_ARC_SAMPLES * _ARC_REFINE)
_COS4, _SIN4 = np.cos(_THETA4), np.sin(_THETA4)


def circle_arc_meets(E: Region, cx, cy, r) -> bool:
    """Sampling fallback for composite regions (documented resolution)."""
    if bool(np.any(E.contains(cx + r * _COS, cy + r * _SIN))):
        return True
    return bool(np.any(E.contains(cx + r * _COS4, cy + r * _SIN4)))


def line_arc_meets(E: Region, nx, ny, off) -> bool:
    """Sampling fallback for a line against a bounded composite region."""
    bb = E.bbox()
    if bb is None:
        raise ValueError(f"cannot sample a line against unbounded {E!r}")
    # parametrize p = off*n + s*t over the bbox reach
    tx, ty = -ny, nx
    px, py = off * nx, off * ny
    reach = math.hypot(bb[2] - bb[0], bb[3] - bb[1]) + math.hypot(
        px - (bb[0] + bb[2]) / 2, py - (bb[1] + bb[3]) / 2)
    s = np.linspace(-reach, reach, _ARC_SAMPLES * _ARC_REFINE)
    return bool(np.any(E.contains(px + s * tx, py + s * ty)))


def circle_meets(E: Region, cx, cy, r):
    """Vectorized curve-vs-region test; exact where the region supports it."""
    iv = E.dist_interval(cx, cy)
    if iv is not None and E.connected():
        dmin, dmax = iv
        return (dmin <= r) & (r <= dmax)
    if isinstance(E, UnionRegion):
        out = circle_meets(E.parts[0], cx, cy, r)
        for p in E.parts[1:]:
            out = out | circle_meets(p, cx, cy, r)
        return out
    cx = np.asarray(cx, dtype=float)
    scalar = cx.ndim == 0
    cx, cy, r = np.atleast_1d(cx), np.atleast_1d(cy), np.atleast_1d(r)
    out = np.fromiter(
        (circle_arc_meets(E, float(a), float(b), float(c))
         for a, b, c in zip(cx, cy, r)),
        dtype=bool, count=len(cx))
    return bool(out[0]) if scalar else out


def line_meets(E: Region, nx, ny, off):
    """Vectorized line-vs-region test."""
    iv = E.line_dist_interval(nx, ny, off)
    if iv is not None:
        return iv[0] <= 0.0
    if isinstance(E, UnionRegion):
        out = line_meets(E.parts[0], nx, ny, off)
        for p in E.parts[1:]:
            out = out | line_meets(p, nx, ny, off)
        return out
    nx = np.asarray(nx, dtype=float)
    scalar = nx.ndim == 0
    nx, ny, off = np.atleast_1d(nx), np.atleast_1d(ny), np.atleast_1d(off)
    out = np.fromiter(
        (line_arc_meets(E, float(a), float(b), float(c))
         for a, b, c in zip(nx, ny, off)),
        dtype=bool, count=len(nx))
    return bool(out[0]) if scalar else out


# --- CLI grammar -----------------------------------------------------------

def _split_args(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_region(expr: str) -> Region:
    """Parse the CLI region grammar.

    Primitives: ``rect:x0,y0,x1,y1``, ``disk:cx,cy,r``,
    ``annulus:cx,cy,r0,r1`` (``r1=inf`` allowed), ``triangleT``,
    ``truncT:eta,t``.  Combinators: ``dilate(<region>,eps)``,
    ``erode(<region>,eps)``, ``and(...)``, ``or(...)``.
    """
    expr = expr.strip()
    for name, builder in (("dilate", dilate), ("erode", erode)):
        if expr.startswith(name + "(") and expr.endswith(")"):
            args = _split_args(expr[len(name) + 1:-1])
            if len(args) != 2:
                raise ValueError(f"{name}() takes a region and a radius: {expr}")
            return builder(parse_region(args[0]), float(args[1]))
    for name, cls in (("and", IntersectRegion), ("or", UnionRegion)):
        if expr.startswith(name + "(") and expr.endswith(")"):
            args = _split_args(expr[len(name) + 1:-1])
            return cls(*(parse_region(a) for a in args))
    if expr == "triangleT":
        return IdealTriangle()
    head, _, body = expr.partition(":")
    nums = [float(x) for x in body.split(",")] if body else []
    if head == "rect" and len(nums) == 4:
        return Rect(*nums)
    if head == "disk" and len(nums) == 3:
        return Disk(*nums)
    if head == "annulus" and len(nums) == 4:
        return Annulus(*nums)
    if head == "truncT" and len(nums) == 2:
        return TruncatedTriangle(*nums)
    raise ValueError(f"cannot parse region expression: {expr!r}")


def region_to_expr(E: Region) -> str:
    """Inverse of parse_region, for provenance records."""
    if isinstance(E, Rect):
        return f"rect:{E.x0:g},{E.y0:g},{E.x1:g},{E.y1:g}"
    if isinstance(E, Disk):
        return f"disk:{E.cx:g},{E.cy:g},{E.r:g}"
    if isinstance(E, Annulus):
        return f"annulus:{E.cx:g},{E.cy:g},{E.r0:g},{E.r1:g}"
    if isinstance(E, IdealTriangle):
        return "triangleT"
    if isinstance(E, TruncatedTriangle):
        return f"truncT:{E.eta:g},{E.t:g}"
    if isinstance(E, Dilated):
        return f"dilate({region_to_expr(E.base)},{E.eps:g})"
    if isinstance(E, Eroded):
        return f"erode({region_to_expr(E.base)},{E.eps:g})"
    if isinstance(E, IntersectRegion):
        return "and(" + ",".join(region_to_expr(p) for p in E.parts) + ")"
    if isinstance(E, UnionRegion):
        return "or(" + ",".join(region_to_expr(p) for p in E.parts) + ")"
    if isinstance(E, HalfPlane):
        return f"halfplane:{E.nx:g},{E.ny:g},{E.d:g}"
    if isinstance(E, ComplementIn):
        return f"not({region_to_expr(E.excluded)})in({region_to_expr(E.bound)})"
    return object.__repr__(E)
