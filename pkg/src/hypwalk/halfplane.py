"""The upper half-plane chart of the real hyperbolic plane.

The lattice and Brownian machinery work with complex numbers z = x + iy,
y > 0, while the generic geometry modules use hyperboloid lifts; this
module provides the chart isometry between the two, plus the standard
half-plane conveniences: distances, Moebius action, disk coordinates,
boundary lifts and harmonic measure of boundary intervals.
"""

from __future__ import annotations

import math

import numpy as np

from hypwalk.boundary import BoundaryPoint
from hypwalk.spaces import GeometryError, Point


def cosh_distance(z: complex, w: complex) -> float:
    return 1.0 + (abs(z - w) ** 2) / (2.0 * z.imag * w.imag)


def distance(z: complex, w: complex) -> float:
    return math.acosh(max(cosh_distance(z, w), 1.0))


def to_lift(z: complex) -> np.ndarray:
    """Hyperboloid lift of a half-plane point, <X, X> = -1 exactly."""
    x, y = z.real, z.imag
    if y <= 0:
        raise GeometryError(f"{z} is not in the upper half-plane")
    r2 = x * x + y * y
    return np.array([(r2 - 1.0) / (2.0 * y), x / y, (r2 + 1.0) / (2.0 * y)])


def to_point(z: complex) -> Point:
    lift = np.zeros((3, 4))
    lift[:, 0] = to_lift(z)
    return Point("R", lift)


def from_point(p: Point) -> complex:
    """Inverse chart: hyperboloid point back to the half-plane."""
    x1, x2, x3 = p.lift[:, 0]
    return from_disk(complex(x1, x2) / (1.0 + x3))


def to_disk(z: complex) -> complex:
    """Disk coordinates matching the hyperboloid chart, (x1 + i x2)/(1 + x3).

    This is the conjugated Cayley map; boundary_lift(r) lands on the unit
    circle at the same angle.
    """
    zb = z.conjugate()
    return (zb + 1j) / (zb - 1j)


def from_disk(u: complex) -> complex:
    ub = u.conjugate()
    return 1j * (1.0 + ub) / (1.0 - ub)


def boundary_lift(r: float) -> np.ndarray:
    """Null lift of a real boundary point (or +-inf), normalized at i."""
    if math.isinf(r):
        return np.array([1.0, 0.0, 1.0])
    d = r * r + 1.0
    return np.array([(r * r - 1.0) / d, 2.0 * r / d, 1.0])


def boundary_point(r: float) -> BoundaryPoint:
    lift = np.zeros((3, 4))
    lift[:, 0] = boundary_lift(r)
    return BoundaryPoint("R", lift)


def boundary_point_angle(theta: float) -> BoundaryPoint:
    """Boundary point from its disk-chart angle, normalized at i."""
    lift = np.zeros((3, 4))
    lift[:, 0] = [math.cos(theta), math.sin(theta), 1.0]
    return BoundaryPoint("R", lift)


def sl2_to_isometry(m) -> np.ndarray:
    """The 3x3 hyperboloid isometry matrix of a real Moebius matrix.

    Conjugates the half-plane action through the chart; derived from the
    action S -> g S g^T on unit-determinant symmetric matrices.
    """
    (a, b), (c, d) = [[float(v) for v in row] for row in m]
    return np.array(
        [
            [(a * a - b * b - c * c + d * d) / 2, a * b - c * d, (a * a + b * b - c * c - d * d) / 2],
            [a * c - b * d, a * d + b * c, a * c + b * d],
            [(a * a - b * b + c * c - d * d) / 2, a * b + c * d, (a * a + b * b + c * c + d * d) / 2],
        ]
    )


def apply_isometry3(U: np.ndarray, bp: BoundaryPoint, origin: Point) -> BoundaryPoint:
    """Push a boundary point through a 3x3 isometry, renormalizing at origin."""
    lift = np.zeros((3, 4))
    lift[:, 0] = U @ bp.lift[:, 0]
    return BoundaryPoint.from_lift("R", lift, origin)


def busemann_halfplane(z: complex, r: float) -> float:
    """Half-plane closed forms, normalized at i (test oracle).

    b_inf(z) = -log Im z;  b_r(z) = log(|z - r|^2 / Im z) - log(r^2 + 1).
    """
    if math.isinf(r):
        return -math.log(z.imag)
    return math.log(abs(z - r) ** 2 / z.imag) - math.log(r * r + 1.0)


def harmonic_measure_arc(z: complex, a: float, b: float) -> float:
    """Harmonic measure from z of the boundary interval (a, b).

    Subtended-angle formula; endpoints may be -inf/+inf.  An interval with
    a > b is read as passing through infinity (complement of (b, a)).
    """
    if a == b:
        raise GeometryError("degenerate boundary interval")
    if not math.isinf(a) and not math.isinf(b) and a > b:
        return 1.0 - harmonic_measure_arc(z, b, a)
    pa = -math.pi if math.isinf(a) and a < 0 else math.atan2(-z.imag, a - z.real)
    pb = 0.0 if math.isinf(b) and b > 0 else math.atan2(-z.imag, b - z.real)
    if math.isinf(a) and a > 0 or math.isinf(b) and b < 0:
        raise GeometryError("interval endpoints out of order")
    return (pb - pa) / math.pi


def poisson_kernel_disk(u: complex, theta: float) -> float:
    """Poisson kernel (1 - |u|^2) / |u - e^(i theta)|^2 of the unit disk."""
    e = complex(math.cos(theta), math.sin(theta))
    return (1.0 - abs(u) ** 2) / abs(u - e) ** 2
