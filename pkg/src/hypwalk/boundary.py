"""Geometric boundary, Busemann functions and boundary kernels.

A boundary point is the projective class of a null lift, stored scaled so
that |<origin, xi>| = 1 for a chosen origin.  The Busemann function then
has the closed form

    b_xi(x) = log |<x, xi>|,

vanishing at the origin, and the boundary kernel is exp(-h b_xi) with the
growth exponent h = m + d - 2 computed from (k, d) on demand.  Geodesic
lines carry the bisector foliation: the coordinate t(z) of the leaf
through z is half the difference of the endpoint Busemann functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hypwalk.algebra import qabs, qinv
from hypwalk.spaces import (
    GeometryError,
    Point,
    Tangent,
    FLine,
    distance,
    form,
    geodesic,
    kernel_exponent,
    rscale,
)


@dataclass(frozen=True)
class BoundaryPoint:
    """Null projective class, lift scaled to |<origin, xi>| = 1."""

    field: str
    lift: np.ndarray

    @property
    def k(self):
        return self.lift.shape[0] - 1

    @classmethod
    def from_lift(cls, field, lift, origin: Point, tol=1e-10):
        lift = np.asarray(lift, dtype=float)
        scale = max(float(np.sqrt((lift**2).sum())), 1e-300)
        if qabs(form(lift, lift)) > tol * scale * scale:
            raise GeometryError("boundary lift is not null")
        s = qabs(form(origin.lift, lift))
        if s <= 0:
            raise GeometryError("boundary lift degenerate against the origin")
        return cls(field, lift / s)

    def renormalized(self, origin: Point) -> "BoundaryPoint":
        """The same boundary point, rescaled for a new origin."""
        return BoundaryPoint.from_lift(self.field, self.lift, origin)


def boundary_equal(a: BoundaryPoint, b: BoundaryPoint, tol=1e-9) -> bool:
    """Projective equality of null classes: <a, b> = 0 iff proportional."""
    return qabs(form(a.lift, b.lift)) <= tol


def busemann(x: Point, xi: BoundaryPoint) -> float:
    """Closed-form Busemann function log |<x, xi>|, zero at xi's origin."""
    return float(np.log(qabs(form(x.lift, xi.lift))))


def busemann_many(lifts: np.ndarray, xi: BoundaryPoint) -> np.ndarray:
    """Vectorized Busemann values over an (n, k+1, 4) array of point lifts."""
    vals = form(lifts, xi.lift[None, :, :])
    return np.log(np.sqrt((vals**2).sum(axis=-1)))


def ray_to(origin: Point, xi: BoundaryPoint) -> Tangent:
    """The unit tangent at origin pointing to xi.

    The lift of xi is phase-adjusted so that <origin, xi> = -1 exactly;
    then dir = xi - origin is a horizontal unit vector and the geodesic
    origin*cosh t + dir*sinh t converges to xi with b_xi = -t along it.
    """
    lam = form(origin.lift, xi.lift)
    adjusted = rscale(xi.lift, -qinv(lam))
    dir = adjusted - origin.lift
    return Tangent(origin, dir)


def busemann_limit_oracle(x: Point, xi: BoundaryPoint, t: float, origin: Point) -> float:
    """Defining limit d(x, c(t)) - t along the ray c from origin to xi."""
    if t < 0:
        raise GeometryError("oracle parameter t must be nonnegative")
    c_t = geodesic(ray_to(origin, xi), t)
    return distance(x, c_t) - t


def martin_kernel(x: Point, xi: BoundaryPoint) -> float:
    """Boundary kernel exp(-h b_xi(x)), equal to 1 at the origin."""
    h = kernel_exponent(x.field, x.k)
    return float(np.exp(-h * busemann(x, xi)))


@dataclass(frozen=True)
class GeodesicLine:
    """A complete unit-speed geodesic c with endpoints xi = c(-inf), eta = c(+inf).

    The endpoint lifts base -/+ dir are null and automatically normalized
    against c(0) = base, which is the normalization used by the foliation
    coordinate.
    """

    tangent: Tangent

    @property
    def field(self):
        return self.tangent.field

    @property
    def xi(self) -> BoundaryPoint:
        return BoundaryPoint(self.field, self.tangent.base.lift - self.tangent.dir)

    @property
    def eta(self) -> BoundaryPoint:
        return BoundaryPoint(self.field, self.tangent.base.lift + self.tangent.dir)

    def at(self, t: float) -> Point:
        return geodesic(self.tangent, t)

    def fline(self) -> FLine:
        """The F-line containing the geodesic."""
        return FLine(self.field, self.tangent.base.lift, self.tangent.dir)


def foliation_coordinate(z: Point, line: GeodesicLine) -> float:
    """Leaf coordinate t(z) = (b_xi(z) - b_eta(z)) / 2 of the bisector foliation.

    Along the line itself t(c(s)) = s; the leaf N_0 is the common bisector
    of the pairs c(-s), c(s).
    """
    return 0.5 * (busemann(z, line.xi) - busemann(z, line.eta))


@dataclass(frozen=True)
class SeparationResult:
    found: bool
    index: int | None
    margin: float


def separating_orbit_point(xi: BoundaryPoint, eta: BoundaryPoint, orbit_lifts: np.ndarray,
                           tol=1e-3) -> SeparationResult:
    """Scan an orbit (in its given order) for a Busemann-separating witness.

    Returns the first point whose |b_xi - b_eta| exceeds tol, certifying
    that the two boundary kernels differ on the orbit.  A miss is reported
    as inconclusive for this truncation, never as kernel equality.
    """
    if boundary_equal(xi, eta):
        raise GeometryError("boundary points coincide; no separation to certify")
    if len(orbit_lifts) == 0:
        raise GeometryError("empty orbit")
    margins = np.abs(busemann_many(orbit_lifts, xi) - busemann_many(orbit_lifts, eta))
    above = np.nonzero(margins > tol)[0]
    if len(above) == 0:
        return SeparationResult(False, None, float(margins.max()))
    i = int(above[0])
    return SeparationResult(True, i, float(margins[i]))
