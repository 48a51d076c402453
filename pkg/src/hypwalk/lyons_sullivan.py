"""Balanced ball data over a lattice orbit and the discretization loop.

The data attach to every orbit site x the concentric hyperbolic balls
F_x of radius r_F and V_x of radius R_V.  Validity requires

  * 0 < r_F and F_x strictly inside V_x            (nesting),
  * r_F + R_V below the minimal orbit separation   (disjointness),
  * the exit-density bound with the exact constant C = (1+rho)/(1-rho),
  * recurrence of the union F, certified empirically by hit fractions,
  * balance: the ball Green's function G_{V_x}(., x) is constant on the
    boundary of F_x.  For concentric balls this holds by symmetry; the
    Monte Carlo certificate estimates hitting probabilities (proportional
    to the Green's function) at several boundary points and checks their
    agreement, and must pass before a datum may drive the loop.

The discretization converts Brownian paths started at the base site into a
random walk on the orbit: exit V at the base, run to the first hit of F,
draw a fresh exit of the owning V-ball, and accept it with probability
(1/C) d eps_site / d eps_hit, so that an accepted continuation has exactly
the site-centered exit law and the recorded chain is Markov with a
site-independent restart.  The law of the first recorded site is the
empirical step measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hypwalk import brownian, halfplane
from hypwalk.brownian import BallDomain, DiskMap, exit_sample, harnack_constant
from hypwalk.lattice import Gamma2, point_of_word, word_to_str
from hypwalk.utils import run_stream


class LSDataError(ValueError):
    pass


@dataclass
class BalanceCertificate:
    """Agreement of Green-function estimates at points of the F boundary."""

    probs: list
    stderrs: list
    max_z: float
    passed: bool
    trials_per_point: int


@dataclass
class LSData:
    """A validated ball datum over the fixture orbit."""

    fixture: Gamma2
    r_F: float
    R_V: float
    separation: float
    harnack: float
    balance: BalanceCertificate | None = None

    @property
    def shell(self) -> float:
        return brownian.DEFAULT_SHELL_FACTOR * self.r_F

    def base_ball(self) -> BallDomain:
        return BallDomain(self.fixture.basepoint, self.R_V)

    def inner_ball(self) -> BallDomain:
        return BallDomain(self.fixture.basepoint, self.r_F)


def build_ls_data(fixture: Gamma2, r_F: float, R_V: float) -> LSData:
    """Validate the geometric axioms and compute the density constant.

    Nesting and disjointness are exact (the separation being a computed
    orbit constant); the balance certificate is attached separately by
    certify_balance, and recurrence is measured by recurrence_test.
    """
    if not 0.0 < r_F < R_V:
        raise LSDataError(f"need 0 < r_F < R_V, got r_F={r_F}, R_V={R_V}")
    sep = fixture.min_separation()
    if r_F + R_V >= sep:
        raise LSDataError(
            f"r_F + R_V = {r_F + R_V:.6f} reaches the orbit separation {sep:.6f}; "
            f"witness pair: base site and its a-translate"
        )
    return LSData(fixture, r_F, R_V, sep, harnack_constant(r_F, R_V))


def certify_balance(data: LSData, n_points=8, trials=4000, seed=0, inner_factor=0.25,
                    z_bound=3.0) -> BalanceCertificate:
    """Monte Carlo balance certificate for the concentric-ball datum.

    From n_points points of the F-ball boundary, estimate the probability
    of reaching a small concentric ball before leaving V; these values are
    proportional to G_V(., center) and must agree within z_bound standard
    errors pairwise against their mean.
    """
    m = DiskMap(data.base_ball())
    rho = math.tanh(data.r_F / 2.0) / math.tanh(data.R_V / 2.0)
    eps = inner_factor * rho
    probs, errs = [], []
    for j in range(n_points):
        theta = 2.0 * math.pi * j / n_points
        start = rho * complex(math.cos(theta), math.sin(theta))
        p, se = brownian.annulus_hit_probability(start, eps, trials, run_stream(seed, j))
        probs.append(p)
        errs.append(se)
    mean = sum(probs) / len(probs)
    zs = [abs(p - mean) / max(se, 1e-12) for p, se in zip(probs, errs)]
    cert = BalanceCertificate(probs, errs, max(zs), max(zs) <= z_bound, trials)
    data.balance = cert
    return cert


def recurrence_test(data: LSData, trials=1000, budget=4000, seed=0, spread=3.0) -> float:
    """Fraction of walk-on-spheres runs from random starts that reach F.

    Starts are sampled within hyperbolic distance spread of the base site;
    starts already inside F count as immediate hits.
    """
    hits = 0
    for t in range(trials):
        rng = run_stream(seed, t)
        r = rng.uniform(0.0, spread)
        z = brownian.ball_step(data.fixture.basepoint, r, rng) if r > 1e-12 else data.fixture.basepoint
        res = brownian.walk_on_spheres_until_hit_F(z, data.fixture, data.r_F, rng, budget=budget)
        if res.hit:
            hits += 1
    return hits / trials


@dataclass
class EmpiricalMeasure:
    """Empirical law of the first recorded site over independent runs.

    Counts are per word; the probabilities sum to 1 minus the truncation
    mass, which is exactly the fraction of runs that exhausted the step
    budget before recording.
    """

    counts: dict
    runs: int
    truncated: int

    @property
    def truncation_mass(self) -> float:
        return self.truncated / self.runs

    def prob(self, w) -> float:
        return self.counts.get(tuple(w), 0) / self.runs

    def stderr(self, w) -> float:
        p = self.prob(w)
        return math.sqrt(max(p * (1.0 - p), 0.0) / self.runs)

    def items(self):
        return sorted(self.counts.items())

    def json_rows(self):
        return [
            {"word": word_to_str(w), "p": c / self.runs,
             "stderr": math.sqrt(max((c / self.runs) * (1 - c / self.runs), 0.0) / self.runs)}
            for w, c in self.items()
        ]


@dataclass
class LSRunResult:
    measure: EmpiricalMeasure
    acceptance_events: int
    encounters: int
    min_acceptance: float
    max_acceptance: float
    accepted_angles: np.ndarray   # uniformized angles of accepted continuations
    record_chains: list           # extra recorded sites per run beyond the first
    mean_steps: float


def ls_discretize(data: LSData, n_runs: int, seed: int, n_records=1, budget=4000,
                  keep_angles=10000) -> LSRunResult:
    """Run the acceptance-rejection discretization loop.

    Each run starts with an exit from the base V-ball, alternates walk-on-
    spheres segments to F with exit draws from the owning V-ball, and
    accepts a continuation with probability (1/C) d eps_site / d eps_hit,
    which lies in (1/C^2, 1].  The first recorded site defines the
    empirical measure; later records are kept as chain diagnostics only.
    Budget exhaustion counts into the truncation mass.
    """
    if n_runs <= 0:
        raise LSDataError("need at least one run")
    if data.balance is None or not data.balance.passed:
        raise LSDataError("balance certificate missing or failed; run certify_balance first")
    fixture = data.fixture
    center = fixture.basepoint
    V0 = data.base_ball()
    C = data.harnack
    trf = math.tanh(data.r_F / 2.0)
    trv = math.tanh(data.R_V / 2.0)
    rho = trf / trv
    acc_floor = 1.0 / (C * C) * (1.0 - 1e-9)

    counts = {}
    truncated = 0
    chains = []
    total_steps = 0
    encounters = 0
    acceptances = 0
    min_acc, max_acc = math.inf, 0.0
    angles = []

    for run_id in range(n_runs):
        rng = run_stream(seed, run_id)
        z = exit_sample(center, V0, rng).point
        word = ()
        steps = 0
        recorded = []
        while steps < budget and len(recorded) < n_records:
            res = brownian.walk_on_spheres_until_hit_F(
                z, fixture, data.r_F, rng, delta=data.shell, budget=budget - steps, word=word
            )
            steps += max(res.steps, 1)
            if not res.hit:
                break
            word = res.site
            zb = brownian.project_to_sphere(res.point_local, center, data.r_F)
            ex = exit_sample(zb, V0, rng)
            yhat = ((zb - center) / (zb - center.conjugate())) / trv
            what = ex.circle_point / abs(ex.circle_point)
            ratio = (1.0 - abs(yhat) ** 2) / abs(yhat - what) ** 2
            acc = (1.0 / C) / ratio
            if not acc_floor <= acc <= 1.0 + 1e-9:
                raise LSDataError(f"acceptance probability {acc} outside (1/C^2, 1]")
            encounters += 1
            min_acc = min(min_acc, acc)
            max_acc = max(max_acc, acc)
            if rng.uniform() < min(acc, 1.0):
                acceptances += 1
                recorded.append(word)
                if len(angles) < keep_angles:
                    angles.append(math.atan2(what.imag, what.real))
            z = ex.point
        total_steps += steps
        if recorded:
            counts[recorded[0]] = counts.get(recorded[0], 0) + 1
            if n_records > 1:
                chains.append(recorded)
        else:
            truncated += 1

    measure = EmpiricalMeasure(counts, n_runs, truncated)
    return LSRunResult(measure, acceptances, encounters, min_acc, max_acc,
                       np.array(angles), chains, total_steps / n_runs)


def empirical_harmonicity(measure: EmpiricalMeasure, h, fixture: Gamma2):
    """Residual sum_y mu(y) h(y) - h(x0) with propagated binomial error.

    h is a function of the half-plane site position.  Returns (residual,
    stderr, tail_term) where tail_term bounds the contribution a truncated
    run could have made, truncation_mass * max |h| over the observed
    support; residuals with tail_term above a few stderr are tail-sensitive.
    """
    if measure.runs <= 0 or not measure.counts:
        raise LSDataError("empty empirical measure")
    h0 = h(fixture.basepoint)
    mean = 0.0
    mean_sq = 0.0
    hmax = 0.0
    for w, c in measure.counts.items():
        val = h(point_of_word(w, fixture.basepoint))
        p = c / measure.runs
        mean += p * val
        mean_sq += p * val * val
        hmax = max(hmax, abs(val))
    stderr = math.sqrt(max(mean_sq - mean * mean, 0.0) / measure.runs)
    residual = mean - h0
    tail_term = measure.truncation_mass * hmax
    return residual, stderr, tail_term


@dataclass(frozen=True)
class MomentEntropy:
    """Truncation estimates; finiteness of the limits is not certified."""

    first_moment: float
    entropy: float
    truncation_mass: float


def moment_entropy(measure: EmpiricalMeasure, fixture: Gamma2) -> MomentEntropy:
    """Mean orbit distance and Shannon entropy over the observed support."""
    if not measure.counts:
        raise LSDataError("empty empirical measure")
    z0 = fixture.basepoint
    moment = 0.0
    entropy = 0.0
    for w, c in measure.counts.items():
        p = c / measure.runs
        moment += p * halfplane.distance(point_of_word(w, z0), z0)
        entropy -= p * math.log(p)
    return MomentEntropy(moment, entropy, measure.truncation_mass)
