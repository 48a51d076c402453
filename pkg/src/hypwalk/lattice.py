"""Discrete isometry groups and orbits in the half-plane.

The canonical fixture is the rank-2 free lattice generated by

    a: z -> z + 2        [[1, 2], [0, 1]]
    b: z -> z / (2z + 1) [[1, 0], [2, 1]]

acting on the upper half-plane with cofinite volume, a cusp at infinity
whose horoball Im z > 1 is precisely invariant, and free orbits.  Words
over {a, a^-1, b, b^-1} are tuples of the integers {1, -1, 2, -2} and are
always kept freely reduced.

Besides orbit enumeration the fixture supports exact reduction of an
arbitrary half-plane point into the central Dirichlet cell (nearest orbit
point = base point), certified against a local patch of orbit points plus
the four cusp winding families of the cell.  This is what lets Brownian
simulations run against the full infinite orbit without truncating it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hypwalk import halfplane
from hypwalk.boundary import BoundaryPoint, busemann_many
from hypwalk.spaces import GeometryError, Point

GENERATOR_LETTERS = {1: "a", -1: "a", 2: "b", -2: "b"}
LETTER_CODES = {"a": 1, "b": 2}
ALPHABET = (1, -1, 2, -2)


class WordError(ValueError):
    pass


def reduce_word(w) -> tuple:
    """Free reduction: cancel adjacent inverse pairs; idempotent."""
    out = []
    for g in w:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def inverse_word(w) -> tuple:
    return tuple(-g for g in reversed(w))


def word_to_str(w) -> str:
    """Compact text form with run-length powers, e.g. 'a^3b^-1'."""
    if not w:
        return "e"
    parts = []
    i = 0
    while i < len(w):
        g = w[i]
        j = i
        while j < len(w) and w[j] == g:
            j += 1
        n = j - i
        exp = n if g > 0 else -n
        letter = GENERATOR_LETTERS[g]
        parts.append(letter if exp == 1 else f"{letter}^{exp}")
        i = j
    return "".join(parts)


def word_from_str(s) -> tuple:
    """Parse 'a^3b^-1', 'ab^-1ba' etc.; 'e' or '' is the identity."""
    s = s.strip()
    if s in ("", "e"):
        return ()
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch not in LETTER_CODES:
            raise WordError(f"unexpected letter {ch!r} in word {s!r}")
        code = LETTER_CODES[ch]
        i += 1
        exp = 1
        if i < len(s) and s[i] == "^":
            i += 1
            j = i
            if j < len(s) and s[j] == "-":
                j += 1
            while j < len(s) and s[j].isdigit():
                j += 1
            if j == i:
                raise WordError(f"malformed exponent in word {s!r}")
            exp = int(s[i:j])
            i = j
        if exp == 0:
            continue
        g = code if exp > 0 else -code
        out.extend([g] * abs(exp))
    return reduce_word(out)


@dataclass(frozen=True)
class IsometryH2:
    """A real Moebius matrix of determinant one, stored with exact integers."""

    m: tuple

    def __matmul__(self, other: "IsometryH2") -> "IsometryH2":
        (a, b), (c, d) = self.m
        (p, q), (r, s) = other.m
        return IsometryH2(((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s)))

    def inv(self) -> "IsometryH2":
        (a, b), (c, d) = self.m
        return IsometryH2(((d, -b), (-c, a)))

    def det(self):
        (a, b), (c, d) = self.m
        return a * d - b * c

    def apply(self, z: complex) -> complex:
        (a, b), (c, d) = self.m
        den = c * z + d
        return (a * z + b) / den

    def as_float(self) -> np.ndarray:
        return np.array(self.m, dtype=float)


IDENTITY = IsometryH2(((1, 0), (0, 1)))
GEN_MATS = {
    1: IsometryH2(((1, 2), (0, 1))),
    -1: IsometryH2(((1, -2), (0, 1))),
    2: IsometryH2(((1, 0), (2, 1))),
    -2: IsometryH2(((1, 0), (-2, 1))),
}


def evaluate(w) -> IsometryH2:
    """The homomorphism from reduced words to Moebius matrices."""
    m = IDENTITY
    for g in w:
        m = m @ GEN_MATS[g]
    return m


def _word_runs(w):
    i = 0
    while i < len(w):
        g = w[i]
        j = i
        while j < len(w) and w[j] == g:
            j += 1
        yield g, j - i
        i = j


def point_of_word(w, z0=1j) -> complex:
    """Apply a reduced word to a base point, block by block.

    Parabolic runs like a^n are applied through their exact small-integer
    matrices, so arbitrarily long winding words evaluate in float without
    overflow.
    """
    z = z0
    for g, n in reversed(list(_word_runs(w))):
        sign = 1 if g > 0 else -1
        if abs(g) == 1:
            m = IsometryH2(((1, 2 * sign * n), (0, 1)))
        else:
            m = IsometryH2(((1, 0), (2 * sign * n, 1)))
        z = m.apply(z)
    return z


def words_of_length_upto(N) -> list:
    """All freely reduced words of length <= N in BFS canonical order.

    Canonical order: by length, then by the generator order a, a^-1, b,
    b^-1 at each position; the count is 2 * 3^N - 1.
    """
    words = [()]
    frontier = [()]
    for _ in range(N):
        nxt = []
        for w in frontier:
            for g in ALPHABET:
                if w and w[-1] == -g:
                    continue
                nxt.append(w + (g,))
        words.extend(nxt)
        frontier = nxt
    return words


@dataclass(frozen=True)
class Horoball:
    """The sublevel set {b_xi < -level} of a Busemann function."""

    center: BoundaryPoint
    level: float

    @classmethod
    def at_infinity(cls, height: float) -> "Horoball":
        """The horoball Im z > height in the half-plane chart."""
        return cls(halfplane.boundary_point(math.inf), math.log(height))


@dataclass(frozen=True)
class PreciseInvarianceReport:
    invariant: bool
    witness: tuple | None
    checked_words: int


@dataclass
class OrbitData:
    """A word-length truncation of an orbit, in canonical order."""

    words: list
    points: np.ndarray  # complex half-plane coordinates
    lifts: np.ndarray   # (n, 3, 4) hyperboloid lifts

    def __len__(self):
        return len(self.words)


class Gamma2:
    """The free rank-2 lattice fixture acting on the half-plane."""

    name = "gamma2"
    basepoint = 1j

    # parabolic generators of the four cusp classes of the central cell,
    # fixing infinity, 0, 1 and -1 respectively
    CUSP_WORDS = ((1,), (2,), (1, -2), (-1, 2))
    # extra ring offsets checked per cusp family during reduction
    RING_OFFSETS = ((), (1,), (-1,), (2,), (-2,))

    def __init__(self, patch_radius=4.6):
        self.patch_radius = patch_radius
        patch = self.orbit_ball(patch_radius)
        self._patch_words = [w for w, _ in patch]
        pts = np.array([z for _, z in patch])
        self._patch_x = pts.real.copy()
        self._patch_y = pts.imag.copy()
        self._cusp_mats = [(evaluate(w), evaluate(w).inv()) for w in self.CUSP_WORDS]
        self._offset_pts = {off: point_of_word(off) for off in self.RING_OFFSETS}

    # -- enumeration -------------------------------------------------------

    def orbit(self, x0=None, N=0) -> OrbitData:
        """Orbit of x0 under all reduced words of length <= N."""
        if N < 0:
            raise WordError("word length bound must be nonnegative")
        x0 = self.basepoint if x0 is None else x0
        words = words_of_length_upto(N)
        points = np.array([point_of_word(w, x0) for w in words])
        lifts = np.zeros((len(words), 3, 4))
        for i, z in enumerate(points):
            lifts[i, :, 0] = halfplane.to_lift(z)
        return OrbitData(words, points, lifts)

    def orbit_ball(self, R, slack=2.0) -> list:
        """Orbit points with d(i, g i) <= R, found by pruned BFS.

        Extends prefixes while they stay within R + slack; complete for the
        group at hand (validated against brute enumeration in the tests).
        """
        out = [((), 1j)]
        frontier = [((), IDENTITY)]
        while frontier:
            nxt = []
            for w, m in frontier:
                for g in ALPHABET:
                    if w and w[-1] == -g:
                        continue
                    m2 = m @ GEN_MATS[g]
                    z = m2.apply(1j)
                    d = halfplane.distance(z, 1j)
                    if d <= R + slack:
                        nxt.append((w + (g,), m2))
                        if d <= R:
                            out.append((w + (g,), z))
            frontier = nxt
        return out

    def min_separation(self) -> float:
        """Minimal pairwise orbit distance; attained by the generators."""
        ds = [halfplane.distance(point_of_word((g,)), 1j) for g in ALPHABET]
        patch = [halfplane.distance(z, 1j) for w, z in self.orbit_ball(3.0) if w]
        return min(min(ds), min(patch))

    # -- reduction into the central Dirichlet cell --------------------------

    def _family_best(self, z):
        """Best (cosh_d, word) over the cusp winding rings p^n s for the
        four cell cusps, n located by doubling descent (distances to a
        winding family are unimodal in the winding index)."""
        best = math.inf
        best_w = ()
        for (pm, pmi), pw in zip(self._cusp_mats, self.CUSP_WORDS):
            for off, base in self._offset_pts.items():
                def fval(k, pm=pm, pmi=pmi, base=base):
                    m = IDENTITY
                    e = abs(k)
                    b = pm if k >= 0 else pmi
                    while e:
                        if e & 1:
                            m = m @ b
                        b = b @ b
                        e >>= 1
                    return halfplane.cosh_distance(z, m.apply(base))

                f0 = fval(0)
                if fval(1) < f0:
                    dirn = 1
                elif fval(-1) < f0:
                    dirn = -1
                else:
                    if f0 < best:
                        best, best_w = f0, off
                    continue
                k, fk = dirn, fval(dirn)
                step = 1
                while True:
                    k2 = k + dirn * step
                    f2 = fval(k2)
                    if f2 < fk:
                        k, fk = k2, f2
                        step *= 2
                    elif step > 1:
                        step = 1
                    else:
                        break
                if fk < best:
                    wind = pw * k if k >= 0 else inverse_word(pw) * (-k)
                    best, best_w = fk, reduce_word(wind + off)
        return best, best_w

    def reduce_point(self, z, word=(), max_shifts=400):
        """Shift z into the central cell, accumulating the shift word.

        Returns (z_local, word, d) where word * z_local is the input point,
        d = d(z_local, i), and no orbit point is closer to z_local than i
        (patch-certified to the patch radius, winding families beyond).
        The absolute position of the site owning the point is word * i.
        """
        for _ in range(max_shifts):
            if not (0.0 < z.imag < math.inf) or not math.isfinite(z.real):
                raise GeometryError(f"point degenerated during reduction: {z}")
            cd0 = halfplane.cosh_distance(z, 1j)
            q = ((z.real - self._patch_x) ** 2 + (z.imag - self._patch_y) ** 2) / self._patch_y
            ip = int(np.argmin(q))
            best = 1.0 + q[ip] / (2.0 * z.imag)
            best_w = self._patch_words[ip]
            if cd0 > math.cosh(2.2):
                fb, fw = self._family_best(z)
                if fb < best:
                    best, best_w = fb, fw
            if best >= cd0 * (1.0 - 1e-14) or not best_w:
                return z, word, math.acosh(max(cd0, 1.0))
            z = evaluate(best_w).inv().apply(z)
            word = reduce_word(word + best_w)
        raise GeometryError("cell reduction did not terminate")

    # -- Busemann / horoball machinery --------------------------------------

    def origin_point(self) -> Point:
        return halfplane.to_point(self.basepoint)

    def busemann_min_over_orbit(self, xi: BoundaryPoint, orbit: OrbitData, tol=1e-9):
        """Argmin set and minimum of b_xi over a truncated orbit."""
        if len(orbit) == 0:
            raise WordError("empty orbit")
        vals = busemann_many(orbit.lifts, xi)
        vmin = float(vals.min())
        idx = np.nonzero(vals <= vmin + tol)[0]
        return [orbit.words[i] for i in idx], vmin

    def horoball_image(self, B: Horoball, w) -> Horoball:
        """The horoball g B for a group word g.

        g{b_xi < -t} is the horoball at g xi with level t + log|<x0, g xi>|
        before renormalization of the pushed lift.
        """
        U = halfplane.sl2_to_isometry(evaluate(w).m)
        raw = U @ B.center.lift[:, 0]
        origin = self.origin_point()
        o = origin.lift[:, 0]
        scale = abs(o[0] * raw[0] + o[1] * raw[1] - o[2] * raw[2])
        lift = np.zeros((3, 4))
        lift[:, 0] = raw
        center = BoundaryPoint.from_lift("R", lift, origin)
        return Horoball(center, B.level + math.log(scale))

    @staticmethod
    def horoballs_intersect(B1: Horoball, B2: Horoball, tol=1e-9) -> bool:
        """Open horoballs meet iff t1 + t2 + log(|<xi1, xi2>| / 2) < 0.

        The sum of the two Busemann functions attains its minimum, equal to
        log(|<xi1, xi2>| / 2), along the connecting geodesic.
        """
        from hypwalk.spaces import form
        from hypwalk.algebra import qabs
        ip = qabs(form(B1.center.lift, B2.center.lift))
        if ip <= tol:  # same boundary point: nested horoballs always meet
            return True
        return B1.level + B2.level + math.log(ip / 2.0) < -tol

    @staticmethod
    def horoballs_equal(B1: Horoball, B2: Horoball, tol=1e-9) -> bool:
        from hypwalk.spaces import form
        from hypwalk.algebra import qabs
        same_center = qabs(form(B1.center.lift, B2.center.lift)) <= tol
        return same_center and abs(B1.level - B2.level) <= tol

    def horoball_precisely_invariant(self, B: Horoball, N: int) -> PreciseInvarianceReport:
        """Check gB meets B => gB = B over all reduced words of length <= N.

        Truncated certificate: a True verdict means verified to word length
        N, not proved for the whole group.
        """
        words = words_of_length_upto(N)
        for w in words:
            if not w:
                continue
            gB = self.horoball_image(B, w)
            if self.horoballs_intersect(gB, B) and not self.horoballs_equal(gB, B):
                return PreciseInvarianceReport(False, w, len(words))
        return PreciseInvarianceReport(True, None, len(words))

    # -- limit set -----------------------------------------------------------

    def limit_set_directions(self, orbit: OrbitData):
        """Disk-chart angles of nonbase orbit points and the largest gap."""
        pts = [z for w, z in zip(orbit.words, orbit.points) if w]
        if not pts:
            return np.array([]), 2.0 * math.pi
        angles = np.sort(np.angle([halfplane.to_disk(z) for z in pts]))
        gaps = np.diff(angles)
        wrap = angles[0] + 2.0 * math.pi - angles[-1]
        return angles, float(max(gaps.max() if len(gaps) else 0.0, wrap))


_FIXTURES = {}


def group_fixture(name="gamma2") -> Gamma2:
    """Fixture registry used by the service layer; fixtures are stateless."""
    if name not in ("gamma2",):
        raise WordError(f"unknown group fixture {name!r}")
    if name not in _FIXTURES:
        _FIXTURES[name] = Gamma2()
    return _FIXTURES[name]
