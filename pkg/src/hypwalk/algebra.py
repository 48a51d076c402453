"""Arithmetic in the real division algebras R, C and H.

Every scalar is stored as a length-4 real coefficient vector in the basis
(1, i, j, k); reals and complex numbers simply keep the upper coefficients
at zero.  Since R and C sit inside H as subalgebras, a single quaternion
product serves all three fields, and the composition law |ab| = |a||b|
holds throughout.  The array helpers broadcast over leading axes so that
vectors and matrices over the algebras stay in plain numpy.
"""

from __future__ import annotations

import numpy as np

FIELDS = {"R": 1, "C": 2, "H": 4}


class AlgebraError(ValueError):
    pass


def check_field(field):
    if field not in FIELDS:
        raise AlgebraError(f"unknown field {field!r}, expected one of {sorted(FIELDS)}")
    return FIELDS[field]


def qmul(a, b):
    """Quaternion product on (..., 4) coefficient arrays, broadcasting."""
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a):
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def qnorm2(a):
    return (np.asarray(a, dtype=float) ** 2).sum(axis=-1)


def qabs(a):
    return np.sqrt(qnorm2(a))


def qinv(a):
    n2 = qnorm2(a)
    if np.any(n2 == 0.0):
        raise AlgebraError("zero scalar has no inverse")
    return qconj(a) / n2[..., None]


def qreal(x):
    """Embed a real number (or array) as a scalar coefficient vector."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (4,))
    out[..., 0] = x
    return out


def qim(a):
    """Imaginary part: the scalar with the real coefficient dropped."""
    out = np.array(a, dtype=float, copy=True)
    out[..., 0] = 0.0
    return out


class Scalar:
    """An element of R, C or H with componentwise storage.

    >>> Scalar("H", [0, 1, 0, 0]) * Scalar("H", [0, 0, 1, 0])
    Scalar('H', [0.0, 0.0, 0.0, 1.0])
    """

    __slots__ = ("field", "c")

    def __init__(self, field, components):
        d = check_field(field)
        c = np.asarray(components, dtype=float)
        if c.shape == (4,):
            if np.any(c[d:] != 0.0):
                raise AlgebraError(f"components outside {field} in {c}")
        elif c.shape == (d,):
            c = np.concatenate([c, np.zeros(4 - d)])
        else:
            raise AlgebraError(f"expected {d} components for {field}, got shape {c.shape}")
        self.field = field
        self.c = c

    @classmethod
    def real(cls, field, x):
        return cls(field, np.array([float(x), 0.0, 0.0, 0.0]))

    @property
    def components(self):
        """The d visible coefficients of this scalar."""
        return self.c[: FIELDS[self.field]].copy()

    def conj(self):
        return Scalar(self.field, qconj(self.c))

    def inv(self):
        return Scalar(self.field, qinv(self.c))

    def __abs__(self):
        return float(qabs(self.c))

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise AlgebraError(f"field mismatch: {self.field} vs {other.field}")
            return other
        if isinstance(other, (int, float)):
            return Scalar.real(self.field, other)
        return NotImplemented

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.field, qmul(self.c, other.c))

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.field, qmul(other.c, self.c))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.c + other.c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.field, self.c - other.c)

    def __neg__(self):
        return Scalar(self.field, -self.c)

    def __repr__(self):
        return f"Scalar({self.field!r}, {self.c.tolist()})"

    def isclose(self, other, tol=1e-12):
        other = self._coerce(other)
        return bool(np.max(np.abs(self.c - other.c)) <= tol)


def mul(a: Scalar, b: Scalar) -> Scalar:
    """Product in the common field; raises on field mismatch."""
    if a.field != b.field:
        raise AlgebraError(f"field mismatch: {a.field} vs {b.field}")
    return a * b


def inv(a: Scalar) -> Scalar:
    """Multiplicative inverse, conj(a) / |a|^2."""
    return a.inv()
