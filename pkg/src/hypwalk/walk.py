"""Equivariant random walks on lattice orbits, indexed by reduced words.

A measure family is determined by its base measure at the identity; the
family at any site is the left translate, so all walk arithmetic happens
on exact reduced words and never touches floating-point group elements.

Green's function values are truncated series sum_{n<=N} mu^(n)_x(y).  For
the uniform generator measure the time-n law is constant on spheres of the
Cayley tree, so the series collapses to a one-dimensional distance chain
and evaluates exactly at any horizon.  For general finite-support measures
a pruned dynamic program over reduced words is used; its feasible horizon
is limited by support growth, which the estimate reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hypwalk import boundary, brownian, halfplane
from hypwalk.lattice import (
    Gamma2,
    inverse_word,
    point_of_word,
    reduce_word,
    word_from_str,
    word_to_str,
    words_of_length_upto,
)

PRUNE_THRESHOLD = 1e-15
MAX_DP_SUPPORT = 400_000


class WalkError(ValueError):
    pass


@dataclass
class MeasureFamily:
    """A finitely supported step distribution at the identity.

    The equivariant extension is mu_{g x0}(g w x0) = base[w]; sites are
    words, so translation is word concatenation plus free reduction.
    """

    base: dict

    def __post_init__(self):
        clean = {}
        total = 0.0
        for w, p in self.base.items():
            w = reduce_word(w)
            if p < 0:
                raise WalkError(f"negative probability {p} for word {word_to_str(w)}")
            if p > 0:
                clean[w] = clean.get(w, 0.0) + float(p)
                total += p
        if abs(total - 1.0) > 1e-12:
            raise WalkError(f"probabilities sum to {total}, expected 1")
        self.base = clean
        self._words = sorted(clean.keys())
        self._probs = np.array([clean[w] for w in self._words])
        self._cum = np.cumsum(self._probs)

    @classmethod
    def uniform_generators(cls) -> "MeasureFamily":
        return cls({(1,): 0.25, (-1,): 0.25, (2,): 0.25, (-2,): 0.25})

    @classmethod
    def from_json_rows(cls, rows) -> "MeasureFamily":
        return cls({word_from_str(r["word"]): float(r["p"]) for r in rows})

    def json_rows(self):
        return [{"word": word_to_str(w), "p": self.base[w]} for w in self._words]

    @property
    def is_uniform_generators(self) -> bool:
        gens = {(1,), (-1,), (2,), (-2,)}
        return set(self.base) == gens and all(abs(p - 0.25) < 1e-15 for p in self.base.values())

    def sample(self, rng) -> tuple:
        i = int(np.searchsorted(self._cum, rng.uniform()))
        return self._words[min(i, len(self._words) - 1)]


def step_sample(mu: MeasureFamily, at, rng) -> tuple:
    """One step of the walk from the site `at`: reduce(at * w), w ~ base."""
    return reduce_word(tuple(at) + mu.sample(rng))


@dataclass(frozen=True)
class GreenEstimate:
    """Truncated Green's function value with its evaluation diagnostics."""

    value: float
    horizon: int
    method: str
    pruned_mass: float = 0.0


def _radial_green(level: int, N: int) -> float:
    """Sum_{n<=N} P(X_n = w) for |w| = level, uniform generator walk.

    The distance from the identity is a birth-death chain (up 3/4, down
    1/4, reflecting at 0) and the time-n law is uniform on each sphere, so
    P(X_n = w) = P(|X_n| = level) / N_level exactly.
    """
    sphere = 1 if level == 0 else 4 * 3 ** (level - 1)
    q = np.zeros(N + 2)
    q[0] = 1.0
    total = 0.0
    for _ in range(N + 1):
        if level < len(q):
            total += q[level] / sphere
        new = np.zeros_like(q)
        new[1] += q[0]
        new[2:] += 0.75 * q[1:-1]
        new[0] += 0.25 * q[1]
        new[1:-1] += 0.25 * q[2:]
        q = new
    return float(total)


def _dp_green(mu: MeasureFamily, target, N: int):
    """Forward dynamic program over reduced words with pruning."""
    dist = {(): 1.0}
    value = dist.get(target, 0.0)
    pruned = 0.0
    for _ in range(N):
        new = {}
        for w, p in dist.items():
            for s, ps in mu.base.items():
                nw = reduce_word(w + s)
                new[nw] = new.get(nw, 0.0) + p * ps
        dist = {}
        for w, p in new.items():
            if p >= PRUNE_THRESHOLD:
                dist[w] = p
            else:
                pruned += p
        if len(dist) > MAX_DP_SUPPORT:
            raise WalkError(
                f"word support exceeded {MAX_DP_SUPPORT} at this horizon; "
                "reduce the horizon or use the uniform generator measure"
            )
        value += dist.get(target, 0.0)
    return value, pruned


def green(mu: MeasureFamily, x, y, N: int) -> GreenEstimate:
    """Truncated Green's function g_N(x, y) = sum_{n<=N} mu^(n)_x(y).

    Equivariance reduces to the pair (e, x^-1 y) exactly.  Monotone
    nondecreasing in N; deterministic.
    """
    if N < 0:
        raise WalkError("horizon must be nonnegative")
    rel = reduce_word(inverse_word(x) + tuple(y))
    if mu.is_uniform_generators:
        return GreenEstimate(_radial_green(len(rel), N), N, "sphere-average")
    value, pruned = _dp_green(mu, rel, N)
    return GreenEstimate(value, N, "pruned-dp", pruned)


def martin_k(mu: MeasureFamily, x, y, N: int) -> float:
    """Discrete kernel g(x, y) / g(e, y) at a common horizon."""
    den = green(mu, (), y, N)
    if den.value <= 0.0:
        raise WalkError(
            f"g(e, {word_to_str(tuple(y))}) is zero at horizon {N}; increase the horizon"
        )
    return green(mu, x, y, N).value / den.value


def harmonicity_defect(mu: MeasureFamily, xi: boundary.BoundaryPoint, at,
                       fixture: Gamma2) -> float:
    """Signed deviation sum_y mu_x(y) K(y, xi) - K(x, xi), exact finite sum.

    K is the boundary kernel of the ambient plane evaluated on orbit
    points; a strictly negative value at a Busemann minimizer exhibits the
    failure of mu-harmonicity at the cusp.
    """
    at = tuple(at)
    x_pt = halfplane.to_point(point_of_word(at, fixture.basepoint))
    acc = 0.0
    for w, p in mu.base.items():
        y_pt = halfplane.to_point(point_of_word(reduce_word(at + w), fixture.basepoint))
        acc += p * boundary.martin_kernel(y_pt, xi)
    return acc - boundary.martin_kernel(x_pt, xi)


def adaptedness_deviation(mu: MeasureFamily, pairs, N: int, fixture: Gamma2) -> float:
    """max over pairs of |discrete kernel - ambient Green ratio|.

    The ambient kernel is G(d(x, y)) / G(d(x0, y)) for the closed-form
    planar Green's function; pairs with y = e or y = x are rejected.
    """
    worst = 0.0
    z0 = fixture.basepoint
    for x, y in pairs:
        x, y = tuple(x), tuple(y)
        if not y or y == x:
            raise WalkError("pairs must avoid y = identity and y = x")
        zx = point_of_word(x, z0)
        zy = point_of_word(y, z0)
        K = brownian.green_h2(halfplane.distance(zx, zy)) / brownian.green_h2(
            halfplane.distance(z0, zy)
        )
        worst = max(worst, abs(martin_k(mu, x, y, N) - K))
    return worst


@dataclass(frozen=True)
class NondegeneracyReport:
    """Truncated reachability under two readings of support generation."""

    nondegenerate: bool          # semigroup reading (products of support words)
    group_generates: bool        # reading that allows inverses of support words
    horizon: int
    target_length: int


def is_nondegenerate(mu: MeasureFamily, N: int, target_length=3) -> NondegeneracyReport:
    """Whether mu^(<=N) reaches every word of length <= min(N, target_length).

    Reported at the truncation only.  The primary reading uses semigroup
    products of the support; the secondary adds inverses, distinguishing
    measures like one supported on {a, b} that generate the group but not
    the semigroup.
    """
    tlen = min(N, target_length)
    targets = set(words_of_length_upto(tlen))

    def reach(words):
        seen = {()}
        frontier = {()}
        for _ in range(N):
            nxt = set()
            for w in frontier:
                for s in words:
                    r = reduce_word(w + s)
                    if r not in seen:
                        seen.add(r)
                        nxt.add(r)
            if not nxt:
                break
            frontier = nxt
        return seen

    semi = targets <= reach(tuple(mu.base))
    grp = targets <= reach(tuple(mu.base) + tuple(inverse_word(w) for w in mu.base))
    return NondegeneracyReport(semi, grp, N, tlen)
