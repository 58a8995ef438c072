"""Circles, Mobius motions, and upper half-plane geometry on inversive coordinates.

A circle or line is stored as a 4-vector ``(bbar, b, wx, wy)``:

* ``b`` is the curvature ``1/r`` (``0`` for a line),
* ``(wx, wy)`` is ``center / r`` (the unit normal for a line),
* ``bbar`` is ``(|c|^2 - r^2) / r`` (twice the signed offset for a line),

normalized so that ``Q(v) = wx^2 + wy^2 - bbar*b = 1``.  Mobius maps,
anti-Mobius maps and circle inversions all act linearly on these vectors,
which is what makes exact rational orbit enumeration and tuple-based
deduplication possible.  The sign of the vector is fixed by the convention
``b >= 0``, with the first nonzero component of ``(wx, wy)`` positive for
lines, so every circle has one canonical vector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Circle",
    "area_of_disk",
    "Motion",
    "INFINITY",
    "Q_TOL",
    "form_q",
    "inversive_product",
    "inversive_product2",
    "canonical_vector",
    "translate_vector",
    "circle_from_center_radius",
    "line_from_normal_offset",
    "apply_motion",
    "apply_to_point",
    "reflect_in",
    "curvature",
    "hyperbolic_area",
    "beta",
    "busemann",
]

Q_TOL = 1e-9
_LINE_SNAP = 1e-12


def _is_exact(x) -> bool:
    return isinstance(x, Rational)


def _simplify(x):
    """Collapse integral Fractions to plain ints (fast hashing/arithmetic)."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return x
    return x


def form_q(v):
    """The signature-(3,1) form Q(v) = wx^2 + wy^2 - bbar*b (unity on circles)."""
    bbar, b, wx, wy = v
    return wx * wx + wy * wy - bbar * b


def inversive_product2(u, v):
    """Twice the Lorentz pairing <u, v>; stays integral on integer vectors."""
    return 2 * (u[2] * v[2] + u[3] * v[3]) - (u[0] * v[1] + u[1] * v[0])


def inversive_product(u, v):
    """Lorentz pairing of two coordinate vectors; -1 on externally tangent pairs."""
    return inversive_product2(u, v) / 2


def canonical_vector(v):
    """Fix the projective sign of a Q=1 vector.

    Convention: curvature nonnegative; for lines the first nonzero component
    of the normal is positive.  Float vectors snap curvatures below 1e-12 to
    an exact line.
    """
    bbar, b, wx, wy = v
    if not _is_exact(b) and abs(b) < _LINE_SNAP:
        b = 0.0
    if b < 0:
        return (-bbar, -b, -wx, -wy)
    if b == 0:
        tol = 0 if _is_exact(wx) else _LINE_SNAP
        if wx < -tol or (abs(wx) <= tol and wy < 0):
            return (-bbar, b, -wx, -wy)
    return (bbar, b, wx, wy)


def translate_vector(v, tx, ty):
    """Image of a coordinate vector under z -> z + (tx + i*ty); exact on rationals."""
    bbar, b, wx, wy = v
    return (
        bbar + 2 * (wx * tx + wy * ty) + (tx * tx + ty * ty) * b,
        b,
        wx + b * tx,
        wy + b * ty,
    )


def reflect_vector(v, m):
    """Lorentz reflection of v in the unit-norm mirror vector m (involutive)."""
    d = inversive_product2(v, m)
    return (v[0] - d * m[0], v[1] - d * m[1], v[2] - d * m[2], v[3] - d * m[3])


@dataclass(frozen=True)
class Circle:
    """A circle or line in the extended plane, in normalized inversive coordinates."""

    bbar: object
    b: object
    wx: object
    wy: object

    def __post_init__(self):
        q = form_q(self.vector)
        if self.is_exact:
            if q != 1:
                raise ValueError(f"coordinate vector not normalized: Q={q}")
        else:
            # Q is a difference of terms of size |v|^2, so the achievable
            # float accuracy scales with that magnitude
            bbar, b, wx, wy = self.vector
            scale = max(1.0, wx * wx + wy * wy + abs(bbar * b))
            if abs(q - 1) > Q_TOL * scale:
                raise ValueError(f"coordinate vector not normalized: Q={q}")
        if self.b < 0:
            raise ValueError("curvature must be nonnegative (canonical sign)")

    @classmethod
    def from_vector(cls, bbar, b, wx, wy) -> "Circle":
        """Build a circle from a raw vector, rescaling floats onto Q=1."""
        v = (bbar, b, wx, wy)
        if all(_is_exact(x) for x in v):
            v = tuple(_simplify(x) for x in canonical_vector(v))
            return cls(*v)
        v = tuple(float(x) for x in v)
        q = form_q(v)
        if q <= 0:
            raise ValueError(f"vector does not describe a real circle: Q={q}")
        # Q is computed with cancellation at magnitude |v|^2, so when it is
        # already consistent with 1 the vector is as normalized as doubles
        # can represent; rescaling by the noisy estimate would only hurt
        scale = max(1.0, v[2] * v[2] + v[3] * v[3] + abs(v[0] * v[1]))
        if abs(q - 1) > 0.5 * Q_TOL * scale:
            s = 1.0 / math.sqrt(q)
            v = tuple(x * s for x in v)
        return cls(*canonical_vector(v))

    @property
    def vector(self):
        return (self.bbar, self.b, self.wx, self.wy)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(x) for x in self.vector)

    @property
    def kind(self) -> str:
        return "line" if self.b == 0 else "circle"

    @property
    def is_line(self) -> bool:
        return self.b == 0

    @property
    def center(self) -> complex:
        if self.is_line:
            raise ValueError("a line has no center")
        return complex(self.wx / self.b, self.wy / self.b)

    @property
    def radius(self) -> float:
        if self.is_line:
            return math.inf
        return 1.0 / float(self.b)

    @property
    def normal(self) -> complex:
        if not self.is_line:
            raise ValueError("only lines carry a unit normal")
        return complex(self.wx, self.wy)

    @property
    def offset(self):
        """Signed offset d of the line {Re(conj(n) z) = d}."""
        if not self.is_line:
            raise ValueError("only lines carry an offset")
        return self.bbar / 2

    def as_float(self) -> "Circle":
        return Circle(*(float(x) for x in self.vector))

    def translated(self, tx, ty) -> "Circle":
        return Circle.from_vector(*translate_vector(self.vector, tx, ty))

    def __repr__(self):
        if self.is_line:
            return f"Circle(line n=({self.wx}, {self.wy}), d={self.offset})"
        return f"Circle(c=({self.wx}/{self.b}, {self.wy}/{self.b}), r=1/{self.b})"


def _split_point(c):
    """Accept complex or an (x, y) pair; pairs of rationals stay exact."""
    if isinstance(c, complex):
        return c.real, c.imag
    if isinstance(c, (tuple, list)) and len(c) == 2:
        return c[0], c[1]
    if isinstance(c, Rational):
        return c, 0
    raise TypeError(f"expected complex or (x, y) pair, got {c!r}")


def circle_from_center_radius(c, r) -> Circle:
    """Circle with center c and radius r > 0.

    Exact when the center components and radius are rational (ints, Fractions
    or an (x, y) pair); float otherwise.
    """
    cx, cy = _split_point(c)
    if not all(_is_exact(x) for x in (cx, cy, r)):
        cx, cy, r = float(cx), float(cy), float(r)
        if not (r > 0 and math.isfinite(r)):
            raise ValueError(f"radius must be positive and finite, got {r}")
    elif r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    if _is_exact(r):
        b = Fraction(1, 1) / r
    else:
        b = 1.0 / r
    return Circle.from_vector((cx * cx + cy * cy) * b - r, b, cx * b, cy * b)


def line_from_normal_offset(n, d) -> Circle:
    """Line {z : Re(conj(n) z) = d} with |n| = 1."""
    nx, ny = _split_point(n)
    norm2 = nx * nx + ny * ny
    if _is_exact(norm2):
        if norm2 != 1:
            raise ValueError(f"normal must be a unit vector, |n|^2={norm2}")
    elif abs(norm2 - 1) > Q_TOL:
        raise ValueError(f"normal must be a unit vector, |n|^2={norm2}")
    return Circle.from_vector(2 * d, 0 * d, nx, ny)


class _BoundaryInfinity:
    """The point at infinity of the extended plane."""

    __slots__ = ()

    def __repr__(self):
        return "INFINITY"


INFINITY = _BoundaryInfinity()


@dataclass(frozen=True)
class Motion:
    """A Mobius or anti-Mobius transformation of the extended plane.

    Stored as a 2x2 complex matrix with det = 1 (projectively, m and -m are
    the same motion) plus a conjugation flag: ``conj=True`` acts as
    ``z -> (a conj(z) + b) / (c conj(z) + d)``.  Reflections remember their
    mirror circle and translations their shift, so those motions can act
    exactly on rational circles.
    """

    a: complex
    b: complex
    c: complex
    d: complex
    conj: bool = False
    mirror: Circle | None = None
    shift: tuple | None = None

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __post_init__(self):
        if abs(self.det - 1) > 1e-12:
            raise ValueError(f"matrix not normalized: det={self.det}")

    @classmethod
    def from_matrix(cls, a, b, c, d, conj: bool = False, **kw) -> "Motion":
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if det == 0:
            raise ValueError("singular matrix")
        s = 1.0 / cmath.sqrt(det)
        return cls(a * s, b * s, c * s, d * s, conj, **kw)

    @classmethod
    def identity(cls) -> "Motion":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    @classmethod
    def translation(cls, t) -> "Motion":
        """z -> z + t; t may be complex or an exact (tx, ty) pair."""
        tx, ty = _split_point(t)
        return cls(1 + 0j, complex(tx, ty), 0j, 1 + 0j, shift=(tx, ty))

    @classmethod
    def scaling(cls, r: float) -> "Motion":
        """z -> r z for real r > 0."""
        if r <= 0:
            raise ValueError("scaling factor must be positive")
        s = math.sqrt(r)
        return cls(complex(s), 0j, 0j, complex(1 / s))

    @classmethod
    def reflection(cls, mirror: Circle) -> "Motion":
        """Inversion in a circle, or Euclidean reflection across a line."""
        if mirror.is_line:
            n = complex(mirror.wx, mirror.wy)
            d = float(mirror.offset)
            return cls.from_matrix(1j * n, -2j * d, 0, -1j * n.conjugate(),
                                   conj=True, mirror=mirror)
        c = mirror.center
        r = mirror.radius
        return cls.from_matrix(c, r * r - abs(c) ** 2, 1, -c.conjugate(),
                               conj=True, mirror=mirror)

    def compose(self, other: "Motion") -> "Motion":
        """The motion ``self o other`` (apply other first)."""
        if self.conj:
            oa, ob, oc, od = (other.a.conjugate(), other.b.conjugate(),
                              other.c.conjugate(), other.d.conjugate())
        else:
            oa, ob, oc, od = other.a, other.b, other.c, other.d
        return Motion(
            self.a * oa + self.b * oc,
            self.a * ob + self.b * od,
            self.c * oa + self.d * oc,
            self.c * ob + self.d * od,
            self.conj ^ other.conj,
        )

    def __matmul__(self, other: "Motion") -> "Motion":
        return self.compose(other)

    def inverse(self) -> "Motion":
        if not self.conj:
            inv = Motion(self.d, -self.b, -self.c, self.a,
                         shift=None if self.shift is None
                         else (-self.shift[0], -self.shift[1]))
            return inv
        # (m, conj)^-1 = (conj(m)^-1, conj)
        return Motion(self.d.conjugate(), -self.b.conjugate(),
                      -self.c.conjugate(), self.a.conjugate(),
                      True, mirror=self.mirror)

    def __call__(self, z):
        return apply_to_point(self, z)


def apply_to_point(g: Motion, z):
    """Total action of a motion on the extended plane (INFINITY allowed)."""
    if z is INFINITY:
        if g.c == 0:
            return INFINITY
        return g.a / g.c
    z = complex(z)
    if g.conj:
        z = z.conjugate()
    den = g.c * z + g.d
    if den == 0:
        return INFINITY
    return (g.a * z + g.b) / den


def _hermitian_of(v):
    """Hermitian matrix ((b, -w), (-conj(w), bbar)) of a float vector."""
    bbar, b, wx, wy = v
    w = complex(wx, wy)
    return b, -w, -w.conjugate(), bbar


def _motion_on_vector(g: Motion, vec):
    """Float Lorentz action of a motion on a coordinate vector.

    Implemented through the Hermitian form of the circle: for a Mobius map
    with matrix m the image form is inv(m)^H M inv(m); an anti-Mobius map
    conjugates M entrywise first.  The result is rescaled onto Q=1 and
    canonicalized, with near-zero curvatures snapped to exact lines.
    """
    v = tuple(float(x) for x in vec)
    m00, m01, m10, m11 = _hermitian_of(v)
    if g.conj:
        m01, m10 = m01.conjugate(), m10.conjugate()
    # h = inverse matrix (det = 1)
    ha, hb, hc, hd = g.d, -g.b, -g.c, g.a
    # t = M h
    t00 = m00 * ha + m01 * hc
    t01 = m00 * hb + m01 * hd
    t10 = m10 * ha + m11 * hc
    t11 = m10 * hb + m11 * hd
    # M' = h^H t
    p00 = ha.conjugate() * t00 + hc.conjugate() * t10
    p01 = ha.conjugate() * t01 + hc.conjugate() * t11
    p10 = hb.conjugate() * t00 + hd.conjugate() * t10
    p11 = hb.conjugate() * t01 + hd.conjugate() * t11
    b2 = p00.real
    bbar2 = p11.real
    w2 = -(p01 + p10.conjugate()) / 2
    out = (bbar2, b2, w2.real, w2.imag)
    q = form_q(out)
    if q <= 0:
        raise ValueError("motion destroyed the circle form (numerical blowup)")
    s = 1.0 / math.sqrt(q)
    return canonical_vector(tuple(x * s for x in out))


def apply_motion(g: Motion, C: Circle) -> Circle:
    """Image of a circle or line under a motion.

    Uses the exact reflection or translation formula when the motion carries
    that data and otherwise the float Lorentz action; a circle through the
    pole of the map comes back as a line.
    """
    if g.mirror is not None:
        return reflect_in(g.mirror, C)
    if g.shift is not None and not g.conj:
        return Circle.from_vector(*translate_vector(C.vector, *g.shift))
    return Circle.from_vector(*_motion_on_vector(g, C.vector))


def reflect_in(mirror: Circle, C: Circle) -> Circle:
    """Inversion of C in a circle, or reflection across a line; involutive."""
    return Circle.from_vector(*reflect_vector(C.vector, mirror.vector))


def curvature(C: Circle):
    """Euclidean curvature 1/r; lines count as curvature 0."""
    return C.b


def hyperbolic_area(C: Circle) -> float:
    """Hyperbolic area of the disk enclosed by C, for disks inside the
    upper half-plane.

    With center x0 + i*y0 and radius r, the disk is a hyperbolic disk of
    radius rho with tanh(rho) = r/y0, so the area 2*pi*(cosh(rho) - 1)
    equals 2*pi*(y0/sqrt(y0^2 - r^2) - 1).
    """
    if C.is_line:
        raise ValueError("lines do not enclose a disk of finite area")
    y0 = float(C.wy) / float(C.b)
    r = 1.0 / float(C.b)
    return area_of_disk(y0, r)


def area_of_disk(y0: float, r: float) -> float:
    """Hyperbolic area of the disk with Euclidean center height y0 and
    radius r, in the cancellation-free form
    2*pi*r^2 / (sqrt(y0^2 - r^2) * (y0 + sqrt(y0^2 - r^2)))."""
    if y0 <= r:
        raise ValueError("disk is not strictly inside the upper half-plane")
    s = math.sqrt((y0 - r) * (y0 + r))
    return 2.0 * math.pi * r * r / (s * (y0 + s))


def beta(t: float) -> float:
    """Threshold ratio: a disk in the upper half-plane has hyperbolic area
    greater than t exactly when r > Im(center) * beta(t).

    Strictly increasing, beta(t) -> 1 as t -> infinity and
    beta(t) ~ sqrt(t/pi) as t -> 0.
    """
    if t <= 0:
        raise ValueError(f"area threshold must be positive, got {t}")
    return math.sqrt(t * (4 * math.pi + t)) / (2 * math.pi + t)


def busemann(z: complex, p: complex, r: float) -> float:
    """Normalized distance of the point p + r*j from the horosphere at the
    boundary point z through z + j: log((|z - p|^2 + r^2) / r)."""
    if r <= 0:
        raise ValueError(f"height must be positive, got {r}")
    z = complex(z)
    p = complex(p)
    return math.log((abs(z - p) ** 2 + r * r) / r)
