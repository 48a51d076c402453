"""Planar hyperbolic Brownian motion via exact exit sampling.

Brownian trajectories in two dimensions are conformally invariant up to
time change, and none of the functionals used here (exit laws, hitting
sites, Green ratios) depend on the parametrization.  Exits from hyperbolic
balls are therefore sampled exactly: uniformize the ball to the unit disk
with the center at 0, draw the exit point from the Poisson kernel by a
disk automorphism of a uniform angle, and map back.  No SDE discretization
error enters anywhere.

Walk-on-spheres against the recurrent ball family F runs modulo the
lattice: the position is kept reduced into the central Dirichlet cell (the
accumulated shift word is the current site), so the family is the full
infinite orbit and steps never lose precision in cusp excursions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from hypwalk import halfplane
from hypwalk.lattice import Gamma2

DEFAULT_SHELL_FACTOR = 1e-3
DEFAULT_STEP_CAP = 2.0


class BrownianError(ValueError):
    pass


@dataclass(frozen=True)
class BallDomain:
    """A hyperbolic ball in the half-plane; a Euclidean disk raised above center."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0 or self.center.imag <= 0:
            raise BrownianError(f"invalid ball: center {self.center}, radius {self.radius}")

    @property
    def euclidean_center(self) -> complex:
        return complex(self.center.real, self.center.imag * math.cosh(self.radius))

    @property
    def euclidean_radius(self) -> float:
        return self.center.imag * math.sinh(self.radius)

    def contains(self, z: complex, slack=0.0) -> bool:
        return halfplane.distance(z, self.center) <= self.radius + slack


@dataclass(frozen=True)
class DiskMap:
    """Conformal map sending a ball to the unit disk, hyperbolic center to 0."""

    domain: BallDomain

    @property
    def _scale(self) -> float:
        return math.tanh(self.domain.radius / 2.0)

    def forward(self, z: complex) -> complex:
        c = self.domain.center
        return ((z - c) / (z - c.conjugate())) / self._scale

    def inverse(self, u: complex) -> complex:
        c = self.domain.center
        w = u * self._scale
        return (w * c.conjugate() - c) / (w - 1.0)


def ball_uniformize(V: BallDomain) -> DiskMap:
    """The uniformizing map of a ball; forward o inverse is the identity."""
    return DiskMap(V)


@dataclass(frozen=True)
class ExitSample:
    """An exact draw from the exit law of Brownian motion from a ball."""

    point: complex
    circle_point: complex  # image on the unit circle under the uniformizing map
    map: DiskMap


def exit_sample(y: complex, V: BallDomain, rng) -> ExitSample:
    """Exit point of Brownian motion started at y inside V.

    In the uniformized disk the exit law from w0 is the harmonic measure,
    obtained exactly by pushing a uniform circle point through the disk
    automorphism u -> (u + w0) / (1 + conj(w0) u).
    """
    m = DiskMap(V)
    w0 = m.forward(y)
    if abs(w0) >= 1.0:
        raise BrownianError(f"start {y} is not inside the ball")
    alpha = rng.uniform(0.0, 2.0 * math.pi)
    u = complex(math.cos(alpha), math.sin(alpha))
    circle = (u + w0) / (1.0 + w0.conjugate() * u)
    return ExitSample(m.inverse(circle), circle, m)


def exit_density_ratio(y: complex, V: BallDomain, w: complex) -> float:
    """Density d eps_y / d eps_center of the exit measures at boundary point w.

    Equals the Poisson kernel of the uniformized disk at the image of y,
    since the exit measure from the center is the uniform one.
    """
    m = DiskMap(V)
    yhat = m.forward(y)
    what = m.forward(w)
    if abs(abs(what) - 1.0) > 1e-8:
        raise BrownianError(f"{w} is not on the boundary of the ball")
    what /= abs(what)
    return (1.0 - abs(yhat) ** 2) / abs(yhat - what) ** 2


def harnack_constant(r_F: float, R_V: float) -> float:
    """The exact supremum C of the exit-density ratio over the inner ball.

    With rho the uniformized radius of the inner ball, the Poisson kernel
    ranges over ((1-rho)/(1+rho), (1+rho)/(1-rho)) and C = (1+rho)/(1-rho).
    """
    if not 0.0 < r_F < R_V:
        raise BrownianError(f"need 0 < r_F < R_V, got {r_F}, {R_V}")
    rho = math.tanh(r_F / 2.0) / math.tanh(R_V / 2.0)
    return (1.0 + rho) / (1.0 - rho)


def green_h2(dist: float) -> float:
    """Green's function of the hyperbolic plane, -(1/2 pi) log tanh(d/2)."""
    if dist <= 0:
        raise BrownianError("Green's function pole at coincident points")
    return -math.log(math.tanh(dist / 2.0)) / (2.0 * math.pi)


@dataclass
class HitResult:
    """Outcome of a walk-on-spheres run against the orbit ball family."""

    status: str            # "hit" or "budget"
    site: tuple            # word of the site whose F-ball was reached
    point_local: complex   # position reduced into the central cell
    steps: int

    @property
    def hit(self) -> bool:
        return self.status == "hit"


def ball_step(z: complex, r: float, rng) -> complex:
    """Exact exit of Brownian motion from the hyperbolic ball (z, r)."""
    alpha = rng.uniform(0.0, 2.0 * math.pi)
    u = complex(math.cos(alpha), math.sin(alpha)) * math.tanh(r / 2.0)
    return (u * z.conjugate() - z) / (u - 1.0)


def walk_on_spheres_until_hit_F(z: complex, fixture: Gamma2, r_F: float, rng,
                                delta=None, budget=4000, cap=DEFAULT_STEP_CAP,
                                word=(), trace=None) -> HitResult:
    """Iterate exact ball exits until within delta of some orbit F-ball.

    The position is kept reduced modulo the lattice, so the walk sees the
    complete family; each step uses the largest admissible ball around the
    current point not meeting F (radius capped).  Returns the site word and
    the final reduced position; budget exhaustion is reported, not dropped.
    """
    if delta is None:
        delta = DEFAULT_SHELL_FACTOR * r_F
    steps = 0
    z, word, d = fixture.reduce_point(z, word)
    while steps < budget:
        gap = d - r_F
        if gap <= delta:
            return HitResult("hit", word, z, steps)
        z = ball_step(z, min(gap, cap), rng)
        steps += 1
        if trace is not None:
            trace.append((word, z))
        z, word, d = fixture.reduce_point(z, word)
    return HitResult("budget", word, z, steps)


def project_to_sphere(z: complex, center: complex, radius: float) -> complex:
    """Radial projection onto the hyperbolic sphere around center."""
    u = (z - center) / (z - center.conjugate())  # |u| = tanh(d/2)
    au = abs(u)
    target = math.tanh(radius / 2.0)
    u = complex(target, 0.0) if au == 0.0 else u * (target / au)
    return (u * center.conjugate() - center) / (u - 1.0)


def annulus_hit_probability(start: complex, inner: float, trials: int, rng,
                            shell=1e-4) -> tuple:
    """Walk-on-spheres estimate of P(reach |u| <= inner before |u| >= 1).

    Runs in the uniformized disk with plain Euclidean steps (exits from
    Euclidean balls centered at the walker are uniform).  Used for the
    balance certificate: the estimate is proportional to the ball Green's
    function at the start point.
    """
    if not 0.0 < inner < abs(start) < 1.0:
        raise BrownianError("start must lie strictly between the circles")
    hits = 0
    for _ in range(trials):
        w = start
        while True:
            r = min(1.0 - abs(w), abs(w) - inner)
            if abs(w) - inner <= shell:
                hits += 1
                break
            if 1.0 - abs(w) <= shell:
                break
            alpha = rng.uniform(0.0, 2.0 * math.pi)
            w = w + complex(math.cos(alpha), math.sin(alpha)) * r
    p = hits / trials
    stderr = math.sqrt(max(p * (1.0 - p), 1e-12) / trials)
    return p, stderr
