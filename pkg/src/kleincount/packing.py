"""Orbit enumeration for mirror-generated circle packings.

The exact backend enumerates the packing modulo its translation period:
representatives live in one fundamental band, and each inversion generator
is fanned over the translates ``S o T^j`` whose image curvature stays below
the bound (the image curvature is a parabola in j, so each fan is a short
two-armed walk).  This is the only enumeration strategy that is actually
complete for a periodic packing: circles deep in a cusp are only reachable
through translates far from any fixed window, so no finite window padding
makes a plain word BFS exhaustive.  Requested-window output is produced by
re-expanding representatives across the period at the end.

Specs without a usable period (or with non-reflection generators) fall back
to a word-length-capped breadth-first search over a padded window and are
reported ``complete=False``.
"""

from __future__ import annotations

import csv
import hashlib
import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .mobius import (
    Circle,
    Motion,
    canonical_vector,
    circle_from_center_radius,
    form_q,
    inversive_product2,
    line_from_normal_offset,
    reflect_vector,
    translate_vector,
    _motion_on_vector,
)
from . import regions
from .regions import Rect, Region

__all__ = [
    "STRIP_NAME",
    "IncompleteEnumerationError",
    "PackingSpec",
    "EnumConfig",
    "CircleSet",
    "DescartesReport",
    "strip_apollonian_spec",
    "enumerate_orbit",
    "ideal_triangle_filter",
    "period_extend",
    "descartes_validate",
]

STRIP_NAME = "strip-apollonian"


class IncompleteEnumerationError(RuntimeError):
    """The enumeration provably cannot answer the requested count."""


@dataclass
class PackingSpec:
    """Seed circles plus generating motions (and an optional period symmetry)."""

    name: str
    seeds: list
    generators: list
    period: Motion | None = None
    backend: str = "float"

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("a packing spec needs at least one seed circle")
        if self.backend not in ("exact", "float"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "exact":
            for s in self.seeds:
                if not s.is_exact:
                    raise ValueError("exact backend needs rational seed circles")
            for g in self.generators:
                if g.mirror is None and g.shift is None:
                    raise ValueError(
                        "exact backend supports reflection and translation "
                        "generators only")
                if g.mirror is not None and not g.mirror.is_exact:
                    raise ValueError("exact backend needs rational mirrors")

    @property
    def seed_max_diameter(self) -> float:
        diams = [2.0 / float(s.b) for s in self.seeds if not s.is_line]
        return max(diams, default=1.0)

    def period_shift(self):
        if self.period is None or self.period.shift is None:
            return None
        return self.period.shift


@dataclass
class EnumConfig:
    """Knobs for one enumeration run.

    ``max_curvature`` is the strict bound (kept circles have curvature < T);
    ``window`` is the region every output circle must meet; the word-length
    cap and dedup quantum only matter for the non-periodic fallback and the
    float backend respectively.
    """

    max_curvature: float
    window: Region
    max_word_length: int = 40
    dedup_quantum: float = 1e-9
    max_circles: int | None = None

    def __post_init__(self):
        if self.max_curvature <= 0:
            raise ValueError("max_curvature must be positive")
        if self.max_word_length < 1:
            raise ValueError("max_word_length must be at least 1")
        if self.window.bbox() is None:
            raise ValueError("enumeration window must be bounded")


class CircleSet:
    """A deduplicated, canonically sorted batch of circles with provenance.

    Stores raw coordinate vectors (rational or float) and materializes
    :class:`Circle` objects lazily; float views for the counting routines
    are cached on first use.
    """

    def __init__(self, vectors, exact: bool, complete: bool, meta: dict):
        self.vectors = sorted(vectors, key=_sort_key)
        self.exact = exact
        self.complete = complete
        self.meta = dict(meta)
        self._float = None

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return (Circle(*v) for v in self.vectors)

    def __getitem__(self, i) -> Circle:
        return Circle(*self.vectors[i])

    def curvatures(self):
        return [v[1] for v in self.vectors]

    def float_data(self) -> dict:
        """Numpy view: curvatures, centers/radii, line mask and line data."""
        if self._float is None:
            n = len(self.vectors)
            b = np.empty(n)
            bbar = np.empty(n)
            wx = np.empty(n)
            wy = np.empty(n)
            for i, (vbb, vb, vwx, vwy) in enumerate(self.vectors):
                bbar[i] = vbb
                b[i] = vb
                wx[i] = vwx
                wy[i] = vwy
            line = b == 0
            safe = np.where(line, 1.0, b)
            self._float = {
                "b": b, "bbar": bbar, "wx": wx, "wy": wy, "line": line,
                "cx": np.where(line, np.nan, wx / safe),
                "cy": np.where(line, np.nan, wy / safe),
                "r": np.where(line, np.inf, 1.0 / safe),
            }
        return self._float

    def replace(self, vectors, **meta_updates) -> "CircleSet":
        meta = dict(self.meta)
        meta.update(meta_updates)
        return CircleSet(vectors, self.exact, self.complete, meta)

    # --- interchange format -------------------------------------------

    def write_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kind", "b", "bbar", "wx", "wy"])
            for bbar, b, wx, wy in self.vectors:
                kind = "line" if b == 0 else "circle"
                w.writerow([kind, _num_str(b, self.exact), _num_str(bbar, self.exact),
                            _num_str(wx, self.exact), _num_str(wy, self.exact)])

    @classmethod
    def read_csv(cls, path, meta: dict | None = None) -> "CircleSet":
        meta = dict(meta or {})
        exact = bool(meta.get("exact", True))
        vectors = []
        with open(path, newline="", encoding="utf-8") as fh:
            rd = csv.reader(fh)
            header = next(rd)
            if header[:5] != ["kind", "b", "bbar", "wx", "wy"]:
                raise ValueError(f"unrecognized circle CSV header: {header}")
            for row in rd:
                _, b, bbar, wx, wy = row[:5]
                if exact:
                    vals = tuple(_parse_exact(x) for x in (bbar, b, wx, wy))
                else:
                    vals = tuple(float(x) for x in (bbar, b, wx, wy))
                vectors.append(vals)
        return cls(vectors, exact,
                   bool(meta.get("complete", False)), meta)

    def content_digest(self) -> str:
        h = hashlib.sha256()
        for v in self.vectors:
            h.update(repr(v).encode())
        return h.hexdigest()


def _sort_key(v):
    return (v[1], v[2], v[3], v[0])


def _num_str(x, exact: bool) -> str:
    if exact:
        return str(Fraction(x))
    return format(float(x), ".17g")


def _parse_exact(s: str):
    f = Fraction(s)
    return int(f) if f.denominator == 1 else f


def _floor_div(num, den):
    """floor(num/den) for ints and Fractions (Python // already floors)."""
    if isinstance(num, int) and isinstance(den, int):
        return num // den
    return math.floor(Fraction(num) / Fraction(den))


# --- the strip configuration ----------------------------------------------

def _strip_seeds_and_mirrors():
    seeds = [
        line_from_normal_offset((1, 0), 1),      # x = 1
        line_from_normal_offset((1, 0), -1),     # x = -1
        circle_from_center_radius((0, 0), 1),    # |z| = 1
        circle_from_center_radius((0, 2), 1),    # |z - 2i| = 1
    ]
    mirrors = [
        circle_from_center_radius((1, 1), 1),
        circle_from_center_radius((-1, 1), 1),
        line_from_normal_offset((0, 1), 0),      # y = 0
        line_from_normal_offset((0, 1), 2),      # y = 2
    ]
    return seeds, mirrors


def _verify_vertical_period(seeds, mirrors, candidate_ty=2, safe_ty=4, T=64):
    """Empirically test z -> z + i*candidate_ty as a packing symmetry.

    Enumeration modulo z -> z + i*safe_ty is unconditionally valid (that
    translation is a product of the two line reflections), so reduce the
    candidate against that quotient: the candidate is accepted if it maps
    every representative to a known representative.
    """
    reps = _quotient_reps([s.vector for s in seeds],
                          [m.vector for m in mirrors],
                          (0, safe_ty), T, None)
    period = (0, safe_ty)
    ok = all(
        _reduce_rep(canonical_vector(translate_vector(v, 0, candidate_ty)), period)
        in reps
        for v in reps)
    return candidate_ty if ok else safe_ty


def strip_apollonian_spec() -> PackingSpec:
    """The exact strip packing: seed circles {x = +-1}, {|z| = 1},
    {|z - 2i| = 1} with the four tangency-point inversions as generators.

    The vertical period defaults to z -> z + 2i after an empirical closure
    check, falling back to z -> z + 4i (a product of the two line
    reflections, hence always a symmetry) if that check ever failed.
    """
    seeds, mirrors = _strip_seeds_and_mirrors()
    ty = _verify_vertical_period(seeds, mirrors)
    if ty != 2:  # pragma: no cover - defensive fallback
        warnings.warn("z -> z + 2i closure check failed; using z -> z + 4i")
    gens = [Motion.reflection(m) for m in mirrors]
    return PackingSpec(STRIP_NAME, seeds, gens, Motion.translation((0, ty)),
                       backend="exact")


# --- periodic-quotient enumeration ----------------------------------------

def _reduce_rep(v, period):
    """Translate a canonical vector into the fundamental band of the period."""
    tx, ty = period
    t2 = tx * tx + ty * ty
    bbar, b, wx, wy = v
    if b == 0:
        s = wx * tx + wy * ty
        if s == 0:
            return v
        j = _floor_div(bbar, 2 * s)  # offset = bbar/2, steps of s
        if j == 0:
            return v
        return canonical_vector(translate_vector(v, -j * tx, -j * ty))
    j = _floor_div(wx * tx + wy * ty, b * t2)
    if j == 0:
        return v
    return canonical_vector(translate_vector(v, -j * tx, -j * ty))


def _fan_children(v, m, period, T, j_cap):
    """Images of the translates of v under inversion in the circle mirror m,
    restricted to curvature < T.

    The raw image curvature is the parabola A j^2 + B j + C below, so each
    arm of the walk stops as soon as it leaves [-T, T] on the far side of
    the vertex.
    """
    tx, ty = period
    t2 = tx * tx + ty * ty
    bbar, b, wx, wy = v
    mbb, mb, mx, my = m
    d0 = 2 * (wx * mx + wy * my) - (bbar * mb + b * mbb)
    d1 = 2 * b * (tx * mx + ty * my) - 2 * (wx * tx + wy * ty) * mb
    A = t2 * b * mb * mb
    B = -d1 * mb
    C = b - d0 * mb
    if A == 0 and B == 0:
        yield reflect_vector(v, m)
        return
    if A == 0:
        # parent is a line: image curvature is linear in j
        lo = (-T - C) / B
        hi = (T - C) / B
        if lo > hi:
            lo, hi = hi, lo
        jlo, jhi = int(math.floor(float(lo))) + 1, int(math.ceil(float(hi))) - 1
        if jhi - jlo > 2 * j_cap:
            raise RuntimeError("translate fan failed to terminate")
        for j in range(jlo, jhi + 1):
            raw = B * j + C
            if -T < raw < T:
                yield reflect_vector(translate_vector(v, j * tx, j * ty), m)
        return
    vertex = -float(B) / (2 * float(A))
    for j0, step in ((int(math.floor(vertex)), 1),
                     (int(math.floor(vertex)) - 1, -1)):
        j = j0
        while True:
            if abs(j - j0) > j_cap:
                raise RuntimeError("translate fan failed to terminate")
            raw = (A * j + B) * j + C
            if raw >= T or raw <= -T:
                if (j - vertex) * step > 0:
                    break
            else:
                yield reflect_vector(translate_vector(v, j * tx, j * ty), m)
            j += step


def _quotient_reps(seed_vectors, mirror_vectors, period, T, max_circles,
                   key=lambda v: v):
    """All orbit representatives modulo the period with curvature < T.

    Line mirrors reflect the period onto +-itself, so they contribute one
    child per representative; circle mirrors are fanned over translates.
    """
    tx, ty = period
    flats, fans = [], []
    for m in mirror_vectors:
        if m[1] == 0:
            cross = m[2] * ty - m[3] * tx
            dot = m[2] * tx + m[3] * ty
            if cross != 0 and dot != 0:
                raise ValueError(
                    "line mirror is skew to the period; quotient enumeration "
                    "would not terminate")
            flats.append(m)
        else:
            fans.append(m)
    j_cap = 64 + 4 * int(math.isqrt(int(T) + 1))
    seen = {}
    queue = deque()
    for s in seed_vectors:
        v = _reduce_rep(canonical_vector(s), period)
        k = key(v)
        if k not in seen:
            seen[k] = v
            queue.append(v)
    while queue:
        v = queue.popleft()
        children = []
        for m in flats:
            children.append(reflect_vector(v, m))
        for m in fans:
            children.extend(_fan_children(v, m, period, T, j_cap))
        for c in children:
            c = canonical_vector(c)
            if not (-T < c[1] < T):
                continue
            c = _reduce_rep(c, period)
            k = key(c)
            if k in seen:
                continue
            seen[k] = c
            queue.append(c)
            if max_circles is not None and len(seen) > max_circles:
                raise _BudgetExhausted()
    return set(seen.values())


class _BudgetExhausted(Exception):
    pass


def _expand_reps(reps, period, window: Region, T):
    """Translate representatives across the period and keep window hits."""
    tx, ty = period
    t_norm = math.hypot(tx, ty)
    bb = window.bbox()
    corners = [(bb[0], bb[1]), (bb[0], bb[3]), (bb[2], bb[1]), (bb[2], bb[3])]
    proj = [(x * tx + y * ty) / t_norm for x, y in corners]
    plo, phi = min(proj), max(proj)
    rect = bb if isinstance(window, Rect) else None
    out = []
    for v in reps:
        bbar, b, wx, wy = v
        if b == 0:
            s = wx * tx + wy * ty
            if s == 0:
                if regions.line_meets(window, float(wx), float(wy), float(bbar) / 2):
                    out.append(v)
                continue
            # offsets step by s per translate; line meets the bbox iff its
            # offset lies in the range of n . corner over the box corners
            cs = [float(wx) * x + float(wy) * y for x, y in corners]
            d0 = float(bbar) / 2
            fs = float(s)
            j_a = (min(cs) - d0) / fs
            j_b = (max(cs) - d0) / fs
            if j_a > j_b:
                j_a, j_b = j_b, j_a
            for j in range(math.floor(j_a), math.ceil(j_b) + 1):
                w = translate_vector(v, j * tx, j * ty)
                if regions.line_meets(window, float(w[2]), float(w[3]),
                                      float(w[0]) / 2):
                    out.append(w)
            continue
        fb = float(b)
        r = 1.0 / fb
        p = (float(wx) * tx + float(wy) * ty) / (fb * t_norm)
        jlo = math.floor((plo - r - p) / t_norm)
        jhi = math.ceil((phi + r - p) / t_norm)
        for j in range(jlo, jhi + 1):
            w = translate_vector(v, j * tx, j * ty)
            cx = float(w[2]) / fb
            cy = float(w[3]) / fb
            if rect is not None:
                dx = max(rect[0] - cx, cx - rect[2], 0.0)
                dy = max(rect[1] - cy, cy - rect[3], 0.0)
                hit = dx * dx + dy * dy <= r * r * (1 + 1e-12)
            else:
                hit = regions.circle_meets(window, cx, cy, r)
            if hit:
                out.append(w)
    return out


# --- generic padded word search --------------------------------------------

def _generator_action(g: Motion, exact: bool):
    if g.mirror is not None:
        mv = g.mirror.vector
        if not exact:
            mv = tuple(float(x) for x in mv)
        return lambda v, mv=mv: reflect_vector(v, mv)
    if g.shift is not None:
        sx, sy = g.shift
        return lambda v: translate_vector(v, sx, sy)
    return lambda v, g=g: _motion_on_vector(g, v)


def _word_bfs(spec: PackingSpec, cfg: EnumConfig, exact: bool):
    """Padded-window BFS over generator words (no period available)."""
    pad = spec.seed_max_diameter
    bb = cfg.window.bbox()
    px0, py0, px1, py1 = bb[0] - pad, bb[1] - pad, bb[2] + pad, bb[3] + pad
    quantum = cfg.dedup_quantum

    def key(v):
        if exact:
            return v
        return tuple(round(float(x) / quantum) for x in v)

    def meets_padded(v):
        bbar, b, wx, wy = (float(x) for x in v)
        if b == 0:
            vals = [wx * X + wy * Y - bbar / 2
                    for X in (px0, px1) for Y in (py0, py1)]
            return min(vals) <= 0 <= max(vals)
        cx, cy, r = wx / b, wy / b, 1 / b
        dx = max(px0 - cx, cx - px1, 0.0)
        dy = max(py0 - cy, cy - py1, 0.0)
        return dx * dx + dy * dy <= r * r * (1 + 1e-12)

    actions = []
    for g in spec.generators:
        actions.append(_generator_action(g, exact))
        gi = g.inverse()
        if g.mirror is None:
            actions.append(_generator_action(gi, exact))
    seeds = []
    for s in spec.seeds:
        v = s.vector if exact else tuple(float(x) for x in s.vector)
        seeds.append(canonical_vector(v))
    T = cfg.max_curvature
    seen = {}
    queue = deque()
    for v in seeds:
        k = key(v)
        if k not in seen and meets_padded(v):
            seen[k] = v
            queue.append((v, 0))
    truncated = False
    while queue:
        v, depth = queue.popleft()
        if depth >= cfg.max_word_length:
            truncated = True
            continue
        for act in actions:
            c = canonical_vector(act(v))
            if c[1] >= T or not meets_padded(c):
                continue
            k = key(c)
            if k in seen:
                continue
            seen[k] = c
            queue.append((c, depth + 1))
            if cfg.max_circles is not None and len(seen) > cfg.max_circles:
                warnings.warn("circle budget exhausted; enumeration truncated")
                return list(seen.values()), False
    if truncated:
        warnings.warn("word-length cap hit; enumeration may be incomplete")
    return list(seen.values()), False


# --- public entry point -----------------------------------------------------

def enumerate_orbit(spec: PackingSpec, cfg: EnumConfig) -> CircleSet:
    """Enumerate the orbit of the seeds under the generator group, keeping
    circles of curvature < max_curvature that meet the window.

    With a verified period and all-reflection generators this is exhaustive
    (``complete=True``); otherwise a word-length-capped search is used and
    the result is flagged incomplete.  Budget exhaustion is reported through
    warnings and the ``complete`` flag, never silently.
    """
    exact = spec.backend == "exact"
    T = cfg.max_curvature
    period = spec.period_shift()
    all_mirrors = all(g.mirror is not None for g in spec.generators)
    complete = False
    if period is not None and all_mirrors:
        seed_vecs = [s.vector if exact else tuple(float(x) for x in s.vector)
                     for s in spec.seeds]
        mirror_vecs = [g.mirror.vector if exact
                       else tuple(float(x) for x in g.mirror.vector)
                       for g in spec.generators]
        if exact:
            key = lambda v: v
        else:
            q = cfg.dedup_quantum
            key = lambda v: tuple(round(float(x) / q) for x in v)
        try:
            reps = _quotient_reps(seed_vecs, mirror_vecs, period, T,
                                  cfg.max_circles, key=key)
            vectors = _expand_reps(reps, period, cfg.window, T)
            complete = True
        except _BudgetExhausted:
            warnings.warn("circle budget exhausted; enumeration truncated")
            vectors, complete = _word_bfs(spec, cfg, exact)
    else:
        vectors, complete = _word_bfs(spec, cfg, exact)

    # final filter: strict curvature bound plus window membership
    final = []
    for v in vectors:
        if not (0 <= v[1] < T):
            continue
        final.append(v)
    meta = {
        "name": spec.name,
        "backend": spec.backend,
        "exact": exact,
        "max_curvature": float(T),
        "window_expr": regions.region_to_expr(cfg.window),
        "window_bbox": list(cfg.window.bbox()),
        "seed_max_diameter": spec.seed_max_diameter,
        "period_shift": None if period is None else [float(period[0]),
                                                     float(period[1])],
        "complete": complete,
        "dedup_quantum": cfg.dedup_quantum,
        "triangle_filtered": False,
        "period_k": 0,
        "area_pruned": None,
    }
    return CircleSet(final, exact, complete, meta)


# --- derived sets -----------------------------------------------------------

def ideal_triangle_filter(S: CircleSet) -> CircleSet:
    """Keep the circles whose closed disk lies inside the triangle domain
    {|Re z| <= 1, |z| >= 1} of the upper half-plane (tangency allowed);
    the three sides themselves are excluded."""
    if S.meta.get("name") != STRIP_NAME:
        raise ValueError("triangle filter expects a strip-packing circle set")
    out = []
    if S.exact:
        for v in S.vectors:
            bbar, b, wx, wy = v
            if b <= 0:
                continue
            if abs(wx) + 1 <= b and wx * wx + wy * wy >= (b + 1) ** 2 and wy > 1:
                out.append(v)
    else:
        tol = 1e-9
        for v in S.vectors:
            bbar, b, wx, wy = v
            if b <= 0:
                continue
            cx, cy, r = wx / b, wy / b, 1 / b
            if (abs(cx) + r <= 1 + tol
                    and math.hypot(cx, cy) >= 1 + r - tol
                    and cy > r - tol):
                out.append(v)
    return S.replace(out, triangle_filtered=True)


def period_extend(S: CircleSet, k_max: int,
                  prune_below_area: float | None = None) -> CircleSet:
    """Union of the translates period^k(S) for |k| <= k_max, deduplicated.

    With ``prune_below_area`` set, translated circles are kept only when the
    disk they enclose lies in the upper half-plane with hyperbolic area at
    least that threshold (plus all lines).  Dropped circles can never enter
    an area count at a threshold above the prune level, so thresholded
    counting downstream is unaffected; this keeps deep extensions small.
    """
    shift = S.meta.get("period_shift")
    if shift is None:
        raise ValueError("circle set has no declared period to extend over")
    tx, ty = shift
    if S.exact and float(tx) == int(tx) and float(ty) == int(ty):
        tx, ty = int(tx), int(ty)
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    fty = math.hypot(float(tx), float(ty))
    out = set()
    if prune_below_area is None:
        for v in S.vectors:
            for k in range(-k_max, k_max + 1):
                out.add(translate_vector(v, k * tx, k * ty) if k else v)
    else:
        # the area of a fixed-radius disk decreases as it moves up, so each
        # arm of the translate walk can stop at the first prune hit
        for v in S.vectors:
            b = v[1]
            if b == 0:
                for k in range(-k_max, k_max + 1):
                    out.add(translate_vector(v, k * tx, k * ty) if k else v)
                continue
            fb = float(b)
            r = 1.0 / fb
            cy0 = float(v[3]) / fb
            for step in (1, -1):
                k = 0 if step == 1 else -1
                while -k_max <= k <= k_max:
                    cy = cy0 + k * fty
                    if cy <= r:
                        if step == -1:
                            break  # even lower translates stay outside H^2
                        k += step
                        continue
                    ss = math.sqrt((cy - r) * (cy + r))
                    area = 2 * math.pi * r * r / (ss * (cy + ss))
                    if area < prune_below_area:
                        if step == 1:
                            break  # higher translates only shrink further
                    else:
                        out.add(translate_vector(v, k * tx, k * ty) if k else v)
                    k += step
    return S.replace(out, period_k=int(k_max),
                     area_pruned=(None if prune_below_area is None
                                  else float(prune_below_area)))


@dataclass
class DescartesReport:
    quadruples_checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def descartes_validate(S: CircleSet) -> DescartesReport:
    """Find mutually tangent quadruples and check the curvature identity
    (k1+k2+k3+k4)^2 = 2(k1^2+k2^2+k3^2+k4^2) on each.

    Tangency is |<u, v>| = 1 on canonical vectors (the sign depends on the
    canonical orientation, e.g. parallel line pairs meet at infinity with
    product +1).  Exact sets are checked in integer arithmetic.
    """
    n = len(S.vectors)
    if n > 20000:
        raise ValueError("descartes_validate is meant for moderate sets; "
                         f"got {n} circles")
    vecs = S.vectors
    fd = S.float_data()
    order = np.argsort(fd["cx"] if n else np.zeros(0))
    adj = {i: set() for i in range(n)}

    def tangent(i, j):
        p2 = inversive_product2(vecs[i], vecs[j])
        if S.exact:
            return p2 == 2 or p2 == -2
        return abs(abs(p2) - 2) < 1e-6

    lines = [i for i in range(n) if fd["line"][i]]
    circles = [i for i in range(n) if not fd["line"][i]]
    # circle pairs via a sweep over x-sorted centers (tangent => centers close)
    cx, cy, r = fd["cx"], fd["cy"], fd["r"]
    finite = sorted(circles, key=lambda i: cx[i])
    rmax = max((r[i] for i in circles), default=0.0)
    for a in range(len(finite)):
        i = finite[a]
        reach = r[i] + rmax + 1e-9
        for bidx in range(a + 1, len(finite)):
            j = finite[bidx]
            if cx[j] - cx[i] > reach:
                break
            if abs(cy[j] - cy[i]) > reach:
                continue
            if tangent(i, j):
                adj[i].add(j)
                adj[j].add(i)
    for i in lines:
        for j in range(n):
            if j != i and tangent(i, j):
                adj[i].add(j)
                adj[j].add(i)
    quads = set()
    for i in range(n):
        for j in adj[i]:
            if j <= i:
                continue
            common = sorted(adj[i] & adj[j])
            for a in range(len(common)):
                k = common[a]
                if k <= j:
                    continue
                for bidx in range(a + 1, len(common)):
                    l = common[bidx]
                    if l in adj[k]:
                        quads.add((i, j, k, l))
    failures = []
    for q in sorted(quads):
        ks = [vecs[i][1] for i in q]
        s = ks[0] + ks[1] + ks[2] + ks[3]
        lhs = s * s
        rhs = 2 * (ks[0] ** 2 + ks[1] ** 2 + ks[2] ** 2 + ks[3] ** 2)
        if S.exact:
            good = lhs == rhs
        else:
            good = abs(lhs - rhs) <= 1e-6 * max(1.0, abs(float(rhs)))
        if not good:
            failures.append({"indices": q, "curvatures": ks})
    return DescartesReport(len(quads), failures)
