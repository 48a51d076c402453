"""Independent oracles used by the tests.

Everything here is deliberately implemented by a different route than the
package code it checks: combinatorial series for the tree walk, brute-force
enumeration for nearest orbit points, quadrature for geodesic length, and
path enumeration for walk distributions.
"""

import math
from math import comb

import numpy as np

GENS = {1: ((1, 2), (0, 1)), -1: ((1, -2), (0, 1)),
        2: ((1, 0), (2, 1)), -2: ((1, 0), (-2, 1))}


def catalan_green(level, N):
    """Truncated Green series for the uniform walk on the 4-regular tree.

    Built from the closed-form first-return probabilities
    f_{2m} = 4 * 3^(m-1) * Catalan(m-1) / 4^(2m) by series convolution;
    independent of any distance-chain recursion.
    """
    f = np.zeros(N + 1)
    for m in range(1, N // 2 + 1):
        f[2 * m] = 4 * 3 ** (m - 1) * (comb(2 * (m - 1), m - 1) // m) * 0.25 ** (2 * m)
    p = np.zeros(N + 1)
    p[0] = 1.0
    for n in range(1, N + 1):
        p[n] = sum(f[j] * p[n - j] for j in range(2, n + 1, 2))
    if level == 0:
        return float(p.cumsum()[N])
    # first passage to a fixed neighbour: H = z/4 + (3z/4) R H, where R is the
    # first return to the parent from a child: R = z/4 + (3z/4) R^2
    R = np.zeros(N + 1)
    for _ in range(N + 2):
        sq = np.convolve(R, R)[: N + 1]
        new = np.zeros(N + 1)
        new[1] = 0.25
        new[1:] += 0.75 * sq[: N]
        R = new
    H = np.zeros(N + 1)
    for _ in range(N + 2):
        HR = np.convolve(R, H)[: N + 1]
        new = np.zeros(N + 1)
        new[1] = 0.25
        new[1:] += 0.75 * HR[: N]
        H = new
    Hl = H.copy()
    for _ in range(level - 1):
        Hl = np.convolve(Hl, H)[: N + 1]
    return float(np.convolve(Hl, p)[: N + 1].cumsum()[N])


def tree_green_exact(level):
    """Closed form: g(e, w) = (3/2) * 3^(-|w|) on the 4-regular tree."""
    return 1.5 * 3.0 ** (-level)


def path_enumeration_distribution(base, steps):
    """Exact time-n laws of the walk by brute-force path enumeration."""
    def reduce(w):
        out = []
        for g in w:
            if out and out[-1] == -g:
                out.pop()
            else:
                out.append(g)
        return tuple(out)

    laws = [{(): 1.0}]
    for _ in range(steps):
        new = {}
        for w, p in laws[-1].items():
            for s, ps in base.items():
                nw = reduce(w + s)
                new[nw] = new.get(nw, 0.0) + p * ps
        laws.append(new)
    return laws


def mobius(m, z):
    (a, b), (c, d) = m
    return (a * z + b) / (c * z + d)


def word_matrix(w):
    m = ((1, 0), (0, 1))
    for g in w:
        (a, b), (c, d) = m
        (p, q), (r, s) = GENS[g]
        m = ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))
    return m


def brute_orbit_ball(R, slack=2.0):
    """All orbit points of i within distance R, by breadth-first search."""
    out = [((), 1j)]
    frontier = [((), ((1, 0), (0, 1)))]
    while frontier:
        nxt = []
        for w, m in frontier:
            for g in (1, -1, 2, -2):
                if w and w[-1] == -g:
                    continue
                (a, b), (c, d) = m
                (p, q), (r, s) = GENS[g]
                m2 = ((a * p + b * r, a * q + b * s), (c * p + d * r, c * q + d * s))
                z = mobius(m2, 1j)
                cd = 1 + (z.real ** 2 + (z.imag - 1) ** 2) / (2 * z.imag)
                if math.acosh(max(cd, 1.0)) <= R + slack:
                    nxt.append((w + (g,), m2))
                    if math.acosh(max(cd, 1.0)) <= R:
                        out.append((w + (g,), z))
        frontier = nxt
    return out


def brute_nearest(ball_pts, z):
    """Nearest point of an enumerated orbit ball, by scanning."""
    best, bw = math.inf, None
    for w, p in ball_pts:
        cd = 1 + abs(z - p) ** 2 / (2 * z.imag * p.imag)
        if cd < best:
            best, bw = cd, w
    return math.acosh(max(best, 1.0)), bw


def disk_metric_length(r, n=200001):
    """Quadrature of the curvature -4 Poincare disk metric along [0, r]."""
    ts = np.linspace(0.0, r, n)
    return float(np.trapezoid(1.0 / (1.0 - ts * ts), ts))


def halfplane_busemann_inf(z):
    return -math.log(z.imag)


def halfplane_busemann_zero(z):
    return math.log(abs(z) ** 2 / z.imag)
