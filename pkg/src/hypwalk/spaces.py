"""Projective models of the hyperbolic spaces over R, C and H.

Points are projective classes of negative vectors in F^(k+1) for the
Hermitian form

    <z, w> = sum_{i<=k} conj(z_i) w_i  -  conj(z_{k+1}) w_{k+1}

on a right F-vector space (the form is conjugate-linear in its first
slot).  Lifts are kept normalized to <z, z> = -1 and never phase-reduced;
all comparisons go through |<., .>|.  With the unified distance

    cosh d(x, y) = |<x, y>|

the metric has maximal sectional curvature -1 while the totally geodesic
F-lines spanned by two points carry curvature -4.  The decomposition of a
perpendicular tangent u at v into the -4 part (along v.Im F) and the -1
part underlies the curvature endomorphism u -> R(u, v)v.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hypwalk.algebra import FIELDS, check_field, qabs, qconj, qim, qinv, qmul

DEFAULT_TOL = 1e-9
MC_TOL = 1e-6


class GeometryError(ValueError):
    pass


def form(z, w):
    """Hermitian form on (..., n, 4) lift arrays; returns a (..., 4) scalar."""
    p = qmul(qconj(z), w)
    return p[..., :-1, :].sum(axis=-2) - p[..., -1, :]


def form_real(z, w):
    """Real part of the form, the Riemannian inner product on lifts."""
    return form(z, w)[..., 0]


def rscale(vec, lam):
    """Right scalar multiple vec . lam of an (..., n, 4) vector."""
    return qmul(vec, np.asarray(lam, dtype=float)[..., None, :])


def _check_same(a, b):
    if a.field != b.field or a.lift.shape != b.lift.shape:
        raise GeometryError(
            f"space mismatch: {a.field}^{a.k} lift {a.lift.shape} vs "
            f"{b.field}^{b.k} lift {b.lift.shape}"
        )


@dataclass(frozen=True)
class Point:
    """A point of H^k_F, stored as a normalized timelike lift (k+1, 4)."""

    field: str
    lift: np.ndarray

    @property
    def k(self):
        return self.lift.shape[0] - 1

    @classmethod
    def from_lift(cls, field, lift):
        d = check_field(field)
        lift = np.asarray(lift, dtype=float)
        if lift.ndim != 2 or lift.shape[1] != 4:
            raise GeometryError(f"lift must have shape (k+1, 4), got {lift.shape}")
        if np.any(lift[:, d:] != 0.0):
            raise GeometryError(f"lift has components outside {field}")
        n = form(lift, lift)
        if n[0] >= 0:
            raise GeometryError("lift is not timelike")
        return cls(field, lift / np.sqrt(-n[0]))

    @classmethod
    def base(cls, field, k):
        """The standard origin, last coordinate 1."""
        check_field(field)
        lift = np.zeros((k + 1, 4))
        lift[k, 0] = 1.0
        return cls(field, lift)


@dataclass(frozen=True)
class Tangent:
    """A unit tangent vector as a horizontal lift: <base, dir> = 0, <dir, dir> = 1."""

    base: Point
    dir: np.ndarray

    @property
    def field(self):
        return self.base.field

    @classmethod
    def normalized(cls, base, dir):
        dir = np.asarray(dir, dtype=float)
        h = form(base.lift, dir)
        if qabs(h) > 1e-8:
            raise GeometryError("direction is not horizontal at base")
        n2 = form(dir, dir)[0]
        if n2 <= 0:
            raise GeometryError("direction is not spacelike")
        return cls(base, dir / np.sqrt(n2))


@dataclass(frozen=True)
class FLine:
    """The totally geodesic F-line through two points, as an orthonormal basis.

    basis_p is a normalized point lift, basis_w a unit spacelike vector with
    <p, w> = 0; the line is the projectivized F-span of the two.
    """

    field: str
    basis_p: np.ndarray
    basis_w: np.ndarray

    @property
    def k(self):
        return self.basis_p.shape[0] - 1


def distance(x: Point, y: Point) -> float:
    """Hyperbolic distance arccosh |<x, y>| between normalized lifts."""
    _check_same(x, y)
    return float(np.arccosh(max(qabs(form(x.lift, y.lift)), 1.0)))


def cosh_distance(x: Point, y: Point) -> float:
    _check_same(x, y)
    return float(max(qabs(form(x.lift, y.lift)), 1.0))


def geodesic(v: Tangent, t: float) -> Point:
    """Unit-speed geodesic from v.base in direction v.dir at time t."""
    lift = v.base.lift * np.cosh(t) + v.dir * np.sinh(t)
    return Point(v.base.field, lift)


def geodesic_midpoint(x: Point, y: Point) -> Point:
    """Midpoint of the geodesic segment from x to y.

    The lift of y is phase-adjusted so that <x, y> is real negative, which
    makes (y - x cosh t) / sinh t the unit tangent at x toward y.
    """
    _check_same(x, y)
    a = form(x.lift, y.lift)
    t = float(np.arccosh(max(qabs(a), 1.0)))
    if t < 1e-12:
        return x
    lam = -qinv(a) * qabs(a)
    ydir = rscale(y.lift, lam)
    u = (ydir - x.lift * np.cosh(t)) / np.sinh(t)
    return geodesic(Tangent(x, u), 0.5 * t)


def fline(x: Point, y: Point, tol=1e-12) -> FLine:
    """The F-line spanned by two distinct points."""
    _check_same(x, y)
    p = x.lift
    w0 = y.lift + rscale(p, form(p, y.lift))
    n2 = form(w0, w0)[0]
    if n2 <= tol:
        raise GeometryError("coincident points do not span an F-line")
    return FLine(x.field, p, w0 / np.sqrt(n2))


def project(z: Point, L: FLine) -> Point:
    """Nearest-point projection of z onto the F-line L.

    The Hermitian-orthogonal projection of the lift onto span_F(p, w) is
    renormalized to a point; for z already on L the input is returned
    unchanged to avoid renormalization noise.
    """
    if z.field != L.field or z.lift.shape[0] != L.basis_p.shape[0]:
        raise GeometryError("point and line live in different spaces")
    proj = -rscale(L.basis_p, form(L.basis_p, z.lift)) + rscale(L.basis_w, form(L.basis_w, z.lift))
    n = form(proj, proj)[0]
    if n >= 0:
        raise GeometryError("projection degenerated; point at infinity relative to the line")
    out = Point(z.field, proj / np.sqrt(-n))
    # points on the line (to machine precision) are returned unchanged, which
    # keeps the projection exactly idempotent and free of renormalization noise
    if qabs(form(z.lift, out.lift)) <= 1.0 + 1e-14:
        return z
    return out


def line_membership(z: Point, L: FLine, tol=DEFAULT_TOL) -> bool:
    """Whether z projects to itself; equality is tested via cosh d = 1."""
    pz = project(z, L)
    if pz is z:
        return True
    return cosh_distance(z, pz) <= 1.0 + 0.5 * tol * tol


def bisector_contains(z: Point, y1: Point, y2: Point, tol=DEFAULT_TOL) -> bool:
    """Whether z is equidistant from y1 and y2 up to tol."""
    if cosh_distance(y1, y2) <= 1.0 + 1e-12:
        raise GeometryError("bisector of coincident points is undefined")
    return abs(distance(z, y1) - distance(z, y2)) <= tol


def tangent_decompose(v: Tangent, u: Tangent):
    """Split u, perpendicular to v, into the v.ImF part and its complement.

    Returns (u1, u2) as direction arrays with u = u1 + u2, u2 in the real
    span of v.dir times the imaginary units, and Re<u1, u2> = 0.
    """
    if v.base is not u.base and distance(v.base, u.base) > 1e-12:
        raise GeometryError("tangents have different base points")
    if abs(form_real(v.dir, u.dir)) > 1e-8:
        raise GeometryError("u is not perpendicular to v")
    lam = qim(form(v.dir, u.dir))
    u2 = rscale(v.dir, lam)
    u1 = u.dir - u2
    return u1, u2


def curvature_endomorphism(v: Tangent, u: Tangent):
    """R(u, v)v = -u1 - 4 u2 for the decomposition above."""
    u1, u2 = tangent_decompose(v, u)
    return -u1 - 4.0 * u2


def kernel_exponent(field, k) -> int:
    """Volume growth exponent m + d - 2 with m = k d."""
    d = check_field(field)
    return k * d + d - 2


# ---------------------------------------------------------------------------
# sampling helpers


def random_point(field, k, rng, spread=2.0) -> Point:
    """A random point at distance Uniform(0, spread) from the origin."""
    base = Point.base(field, k)
    v = random_tangent(base, rng)
    return geodesic(v, rng.uniform(0.0, spread))


def random_tangent(at: Point, rng) -> Tangent:
    """A random unit tangent vector at the given point."""
    d = FIELDS[at.field]
    k = at.k
    for _ in range(64):
        raw = np.zeros((k + 1, 4))
        raw[:, :d] = rng.standard_normal((k + 1, d))
        t = raw + rscale(at.lift, form(at.lift, raw))
        n2 = form(t, t)[0]
        if n2 > 1e-12:
            return Tangent(at, t / np.sqrt(n2))
    raise GeometryError("failed to sample a tangent direction")


def random_perpendicular(v: Tangent, rng) -> Tangent:
    """A random unit tangent at v.base with Re<., v> = 0."""
    for _ in range(64):
        u = random_tangent(v.base, rng)
        w = u.dir - v.dir * form_real(v.dir, u.dir)
        n2 = form(w, w)[0]
        if n2 > 1e-12:
            return Tangent(v.base, w / np.sqrt(n2))
    raise GeometryError("failed to sample a perpendicular direction")


def tangent_basis(at: Point, rng):
    """An Re-orthonormal real basis of the tangent space at a point."""
    d = FIELDS[at.field]
    m = at.k * d
    basis = []
    while len(basis) < m:
        u = random_tangent(at, rng).dir
        for b in basis:
            u = u - b * form_real(b, u)
        n2 = form(u, u)[0]
        if n2 > 1e-10:
            basis.append(u / np.sqrt(n2))
    return basis


def curvature_spectrum(at: Point, v: Tangent, rng):
    """Eigenvalues of u -> R(u, v)v on the perpendicular complement of v."""
    d = FIELDS[at.field]
    m = at.k * d
    basis = []
    while len(basis) < m - 1:
        u = random_tangent(at, rng).dir
        u = u - v.dir * form_real(v.dir, u)
        for b in basis:
            u = u - b * form_real(b, u)
        n2 = form(u, u)[0]
        if n2 > 1e-10:
            basis.append(u / np.sqrt(n2))
    mat = np.empty((m - 1, m - 1))
    for j, b in enumerate(basis):
        img = curvature_endomorphism(v, Tangent(at, b))
        for i, bi in enumerate(basis):
            mat[i, j] = form_real(bi, img)
    return np.linalg.eigvalsh(0.5 * (mat + mat.T))


# ---------------------------------------------------------------------------
# isometries


def random_isometry(field, k, rng, spread=1.0):
    """A random form-preserving matrix, shape (k+1, k+1, 4).

    Built by Gram-Schmidt for the indefinite form: the last column is a
    random timelike lift, the others are orthonormalized spacelike columns.
    Acts on lifts by quaternionic matrix-vector product from the left, so
    right scalar multiples are preserved.
    """
    d = check_field(field)
    cols = [None] * (k + 1)
    cols[k] = random_point(field, k, rng, spread=spread).lift
    idx = 0
    for _ in range(64 * (k + 1)):
        if idx >= k:
            break
        raw = np.zeros((k + 1, 4))
        raw[:, :d] = rng.standard_normal((k + 1, d))
        u = raw + rscale(cols[k], form(cols[k], raw))
        for j in range(idx):
            u = u - rscale(cols[j], form(cols[j], u))
        n2 = form(u, u)[0]
        if n2 > 1e-10:
            cols[idx] = u / np.sqrt(n2)
            idx += 1
    if idx < k:
        raise GeometryError("failed to orthonormalize an isometry")
    return np.stack(cols, axis=1)  # (k+1 rows, k+1 cols, 4)


def apply_isometry(A, x: Point) -> Point:
    """Apply a form-preserving matrix to a point."""
    lift = qmul(A, x.lift[None, :, :]).sum(axis=1)
    return Point(x.field, lift)


def apply_isometry_tangent(A, v: Tangent) -> Tangent:
    base = apply_isometry(A, v.base)
    dir = qmul(A, v.dir[None, :, :]).sum(axis=1)
    return Tangent(base, dir)
