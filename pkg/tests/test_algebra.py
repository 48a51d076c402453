import numpy as np
import pytest

from hypwalk.algebra import FIELDS, AlgebraError, Scalar, inv, mul, qabs, qconj, qmul


def s(field, *c):
    return Scalar(field, list(c))


def test_quaternion_table():
    i = s("H", 0, 1, 0, 0)
    j = s("H", 0, 0, 1, 0)
    k = s("H", 0, 0, 0, 1)
    assert mul(i, j).isclose(k)
    assert mul(j, k).isclose(i)
    assert mul(k, i).isclose(j)
    assert mul(i, i).isclose(s("H", -1, 0, 0, 0))


def test_unit_conjugate_pair():
    a = s("C", 0.6, 0.8)
    assert mul(a, a.conj()).isclose(Scalar.real("C", 1.0))


def test_expansion_and_composition_law():
    one_i = s("H", 1, 1, 0, 0)
    one_j = s("H", 1, 0, 1, 0)
    prod = mul(one_i, one_j)
    assert prod.isclose(s("H", 1, 1, 1, 1))
    assert abs(prod) == pytest.approx(abs(one_i) * abs(one_j))
    assert abs(prod) == pytest.approx(2.0)


def test_inverse_examples():
    assert inv(Scalar.real("R", 1.0)).isclose(Scalar.real("R", 1.0))
    assert inv(s("C", 0, 1)).isclose(s("C", 0, -1))
    q = s("H", 1, 1, 1, 1)
    assert inv(q).isclose(s("H", 0.25, -0.25, -0.25, -0.25))
    assert mul(q, inv(q)).isclose(Scalar.real("H", 1.0))
    assert mul(inv(q), q).isclose(Scalar.real("H", 1.0))


def test_errors():
    with pytest.raises(AlgebraError):
        mul(Scalar.real("R", 1.0), Scalar.real("C", 1.0))
    with pytest.raises(AlgebraError):
        inv(Scalar.real("H", 0.0))
    with pytest.raises(AlgebraError):
        Scalar("C", [1, 2, 3, 4])  # components outside C
    with pytest.raises(AlgebraError):
        Scalar("Q", [1])


@pytest.mark.parametrize("field", ["R", "C", "H"])
def test_composition_law_random(field):
    d = FIELDS[field]
    rng = np.random.default_rng(101)
    a = np.zeros((10000, 4))
    b = np.zeros((10000, 4))
    a[:, :d] = rng.standard_normal((10000, d))
    b[:, :d] = rng.standard_normal((10000, d))
    lhs = qabs(qmul(a, b))
    rhs = qabs(a) * qabs(b)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(rhs)


@pytest.mark.parametrize("field", ["R", "C", "H"])
def test_associativity_random(field):
    d = FIELDS[field]
    rng = np.random.default_rng(102)
    a, b, c = (np.pad(rng.standard_normal((2000, d)), [(0, 0), (0, 4 - d)]) for _ in range(3))
    res = qmul(qmul(a, b), c) - qmul(a, qmul(b, c))
    assert np.max(np.abs(res)) <= 1e-12


def test_conj_antiautomorphism():
    rng = np.random.default_rng(103)
    a = rng.standard_normal((2000, 4))
    b = rng.standard_normal((2000, 4))
    res = qconj(qmul(a, b)) - qmul(qconj(b), qconj(a))
    assert np.max(np.abs(res)) <= 1e-12
    # a conj(a) = |a|^2 is real
    sq = qmul(a, qconj(a))
    assert np.max(np.abs(sq[:, 1:])) <= 1e-12
    assert np.max(np.abs(sq[:, 0] - qabs(a) ** 2)) <= 1e-10


def test_scalar_components_view():
    a = s("C", 1.0, 2.0)
    assert a.components.tolist() == [1.0, 2.0]
    assert (-a).isclose(s("C", -1.0, -2.0))
    assert (a - a).isclose(Scalar.real("C", 0.0))
