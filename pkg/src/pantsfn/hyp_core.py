"""Upper half-plane primitives and right-angled polygon trigonometry.

Isometries are PSL(2, R) elements stored as four floats. Paths on a surface
are developed with a moving frame: the base frame sits at ``i`` pointing
toward ``oo``; ``frame @ translate(d)`` moves forward by ``d`` and
``frame @ rotate(theta)`` turns counterclockwise (to the left) by ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateHexagon, DegeneratePentagon, NotHyperbolic, NumericalDegeneration

DET_TOL = 1e-12
PARABOLIC_TOL = 1e-12
# Above this size ad - bc can no longer be evaluated to DET_TOL in doubles,
# so renormalizing would inject error instead of removing it.
_RENORM_LIMIT = 1e3

INF = math.inf


@dataclass(frozen=True)
class Isometry:
    """z -> (a z + b) / (c z + d) with ad - bc = 1, modulo global sign."""

    a: float
    b: float
    c: float
    d: float

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Isometry") -> "Isometry":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        if abs(a * d) + abs(b * c) < _RENORM_LIMIT:
            det = a * d - b * c
            if abs(det - 1.0) > DET_TOL:
                if not det > 0:
                    raise NumericalDegeneration(f"product lost its determinant (det = {det!r})")
                s = math.sqrt(det)
                a, b, c, d = a / s, b / s, c / s, d / s
        return Isometry(a, b, c, d)

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def __call__(self, z):
        if z == INF:
            return INF if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def is_hyperbolic(self) -> bool:
        return abs(self.trace) > 2.0 + PARABOLIC_TOL

    def close_to(self, other: "Isometry", tol: float = 1e-9) -> bool:
        """Entrywise comparison up to the global sign."""
        x = (self.a, self.b, self.c, self.d)
        y = (other.a, other.b, other.c, other.d)
        return (max(abs(p - q) for p, q in zip(x, y)) <= tol
                or max(abs(p + q) for p, q in zip(x, y)) <= tol)

    def fixed_points(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """(repelling, attracting) fixed points as homogeneous pairs (x, y).

        The point is x / y; y == 0 encodes infinity. Homogeneous output keeps
        the endpoint arithmetic finite for very long translations.
        """
        tr = self.trace
        if abs(tr) <= 2.0 + PARABOLIC_TOL:
            raise NotHyperbolic(f"trace {tr!r} is not hyperbolic")
        root = math.sqrt((tr - 2.0) * (tr + 2.0))
        big = 0.5 * (tr + math.copysign(root, tr))
        small = 1.0 / big
        return self._eigvec(small), self._eigvec(big)

    def _eigvec(self, lam: float) -> tuple[float, float]:
        # both rows give an eigenvector; take the better conditioned one
        v1 = (self.b, lam - self.a)
        v2 = (lam - self.d, self.c)
        n1 = abs(v1[0]) + abs(v1[1])
        n2 = abs(v2[0]) + abs(v2[1])
        return v1 if n1 >= n2 else v2


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic from ``start`` to ``end`` (boundary points, oo allowed)."""

    start: float
    end: float

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("geodesic endpoints must be distinct")

    def standard_map(self) -> Isometry:
        """Isometry taking the y-axis (0 -> oo) onto this geodesic."""
        p, q = self.start, self.end
        if q == INF:
            return Isometry(1.0, p, 0.0, 1.0)
        if p == INF:
            return Isometry(q, -1.0, 1.0, 0.0)
        det = q - p
        if det > 0:
            s = math.sqrt(det)
            return Isometry(q / s, p / s, 1.0 / s, 1.0 / s)
        s = math.sqrt(-det)
        return Isometry(q / s, -p / s, 1.0 / s, -1.0 / s)


Y_AXIS = Geodesic(0.0, INF)


def translate(d: float) -> Isometry:
    """Unit-speed translation along the y-axis toward oo."""
    e = math.exp(0.5 * d)
    return Isometry(e, 0.0, 0.0, 1.0 / e)


def rotate(theta: float) -> Isometry:
    """Counterclockwise rotation about i by ``theta``."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return Isometry(c, s, -s, c)


HALF_TURN_LEFT = rotate(0.5 * math.pi)
HALF_TURN_RIGHT = rotate(-0.5 * math.pi)
ABOUT_FACE = rotate(math.pi)


def sidestep(d: float) -> Isometry:
    """Turn left, walk ``d``, turn back: a shift along the geodesic
    perpendicular to the current heading."""
    return HALF_TURN_LEFT @ translate(d) @ HALF_TURN_RIGHT


def translation_length(m: Isometry) -> float:
    tr = abs(m.trace)
    if tr <= 2.0 + PARABOLIC_TOL:
        raise NotHyperbolic(f"|trace| = {tr!r} <= 2: parabolic or elliptic")
    return 2.0 * math.acosh(0.5 * tr)


def axis_translation(axis: Geodesic, dist: float) -> Isometry:
    if not math.isfinite(dist):
        raise ValueError("translation distance must be finite")
    g = axis.standard_map()
    return g @ translate(dist) @ g.inverse()


def distance(z: complex, w: complex) -> float:
    dx, dy = z.real - w.real, z.imag - w.imag
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * z.imag * w.imag))


def point_geodesic_distance(z: complex, geod: Geodesic) -> float:
    w = geod.standard_map().inverse()(z)
    return math.asinh(abs(w.real) / w.imag)


# --- right-angled polygon trigonometry -------------------------------------

def hexagon_side(a: float, gamma: float, b: float) -> float:
    """Side opposite ``gamma`` in a right-angled hexagon whose consecutive
    sides are a, gamma, b."""
    arg = math.sinh(a) * math.sinh(b) * math.cosh(gamma) - math.cosh(a) * math.cosh(b)
    if not arg > 1.0:
        raise DegenerateHexagon(
            f"hexagon ({a}, {gamma}, {b}): arccosh argument {arg!r} <= 1")
    return math.acosh(arg)


def hexagon_opposite(a: float, b: float, c: float) -> float:
    """Side between ``a`` and ``b`` (opposite ``c``) for alternate sides a, b, c.

    Every positive triple is realized, so this never degenerates; the
    arccosh argument is formed in log space so tiny a, b do not overflow.
    """
    num = math.cosh(c) + math.cosh(a) * math.cosh(b)
    log_x = math.log(num) - math.log(math.sinh(a)) - math.log(math.sinh(b))
    if log_x > 20.0:
        # acosh(x) = log(2x) to double precision; x itself may not be representable
        return math.log(2.0) + log_x
    return math.acosh(math.exp(log_x))


def pentagon_side(x: float, y: float) -> float:
    """Side opposite the two non-adjacent sides x, y of a right-angled pentagon."""
    arg = math.sinh(x) * math.sinh(y)
    if arg < 1.0 - 1e-12:
        raise DegeneratePentagon(f"pentagon ({x}, {y}): sinh x sinh y = {arg!r} < 1")
    return math.acosh(max(arg, 1.0))


def pentagon_leg(z: float, x: float) -> float:
    """Inverse of :func:`pentagon_side` in its second argument."""
    if z < 0 or x <= 0:
        raise DegeneratePentagon(f"pentagon leg: z={z}, x={x}")
    return math.asinh(math.cosh(z) / math.sinh(x))


def quad_opposite(leg: float, base_offset: float) -> float:
    """Trirectangle: the side facing ``leg`` when the adjacent side is ``base_offset``."""
    return math.asinh(math.sinh(leg) * math.cosh(base_offset))


def collar_width(l: float) -> float:
    if l <= 0:
        raise ValueError("cuff length must be positive")
    return math.asinh(1.0 / math.sinh(0.5 * l))


def hexagon_loop(sides) -> Isometry:
    """Develop a right-angled polygon counterclockwise from its side lengths."""
    m = Isometry.identity()
    for s in sides:
        m = m @ translate(s) @ HALF_TURN_LEFT
    return m


def endpoint_cosine(start: tuple[float, float], end: tuple[float, float]) -> float:
    """cos of the angle between the y-axis (pointing to oo) and the oriented
    geodesic ``start -> end`` crossing it, endpoints given homogeneously.

    For finite endpoints p < 0 < q this is (p + q) / (q - p).
    """
    p1, p2 = start
    q1, q2 = end
    num = p1 * q2 + q1 * p2
    den = q1 * p2 - p1 * q2
    if den == 0:
        raise NotHyperbolic("degenerate geodesic: coincident endpoints")
    return num / den


def y_axis_cosine(geod: Geodesic) -> float:
    def hom(x):
        return (1.0, 0.0) if x == INF else (x, 1.0)
    if not ((geod.start == INF or geod.end == INF) or geod.start * geod.end < 0):
        raise ValueError("geodesic does not cross the y-axis")
    return endpoint_cosine(hom(geod.start), hom(geod.end))
