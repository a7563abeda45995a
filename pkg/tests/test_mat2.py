import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swstab.mat2 import (IDENTITY, ZERO, EigenStructure, Mat2, commutator,
                         det, discriminant, eigen, expm, is_hurwitz)

MK = Mat2.from_rows


def expm_series(m: Mat2, t: float, terms: int = 60) -> np.ndarray:
    """Truncated Taylor oracle, independent of the closed form."""
    a = m.as_array() * t
    acc = np.eye(2)
    term = np.eye(2)
    for k in range(1, terms):
        term = term @ a / k
        acc = acc + term
    return acc


def test_det_examples():
    assert det(IDENTITY) == 1.0
    assert det(MK([[-1, 10], [0, -1]])) == 1.0
    assert det(MK([[-1, 2], [-2, -1]])) == 5.0


def test_discriminant_examples():
    assert discriminant(IDENTITY) == 0.0
    assert discriminant(MK([[-1, 1], [-1, -1]])) == -4.0
    assert discriminant(MK([[-2, 0], [0, -1]])) == 1.0


def test_rejects_nonfinite_entries():
    with pytest.raises(ValueError):
        Mat2(1.0, float("nan"), 0.0, 1.0)
    with pytest.raises(ValueError):
        Mat2(1.0, 0.0, float("inf"), 1.0)


def test_commutator_examples():
    x = MK([[-1, 1], [-1, -1]])
    assert commutator(x, x).norm() == 0.0
    y = MK([[-1, 2], [-2, -1]])
    assert commutator(x, y).norm() == 0.0  # both scalar + rotation generator

    a = MK([[-1, 10], [0, -1]])
    b = MK([[-1, 0], [10, -1]])
    c = commutator(a, b)
    oracle = a.as_array() @ b.as_array() - b.as_array() @ a.as_array()
    np.testing.assert_allclose(c.as_array(), oracle)
    assert c.det < 0.0


def test_is_hurwitz_examples():
    assert is_hurwitz(MK([[-1, 0], [0, -1]]))
    assert not is_hurwitz(IDENTITY)
    assert not is_hurwitz(MK([[0, 1], [-1, 0]]))  # marginal: tr = 0


def test_expm_zero_and_diagonal():
    for t in (-3.0, 0.0, 0.7, 11.0):
        np.testing.assert_allclose(expm(ZERO, t).as_array(), np.eye(2))
    e = expm(MK([[-1, 0], [0, -2]]), 1.0)
    np.testing.assert_allclose(e.as_array(),
                               np.diag([math.exp(-1), math.exp(-2)]),
                               rtol=1e-14)


def test_expm_rotation_vs_series():
    m = MK([[0, 1], [-1, 0]])
    got = expm(m, math.pi / 2).as_array()
    np.testing.assert_allclose(got, expm_series(m, math.pi / 2), atol=1e-12)
    np.testing.assert_allclose(got, [[0, 1], [-1, 0]], atol=1e-12)


def test_expm_all_branches_vs_series(rng):
    for _ in range(200):
        m = Mat2.from_array(rng.uniform(-2, 2, (2, 2)))
        t = rng.uniform(-2.0, 2.0)
        got = expm(m, t).as_array()
        want = expm_series(m, t)
        np.testing.assert_allclose(got, want,
                                   atol=1e-11 * max(1.0, np.abs(want).max()))


def test_expm_defective_guard():
    # near-repeated eigenvalues: the guarded evaluation stays accurate
    for eps in (0.0, 1e-12, -1e-12, 1e-10):
        m = MK([[-1 + eps, 1], [0, -1]])
        got = expm(m, 2.0).as_array()
        np.testing.assert_allclose(got, expm_series(m, 2.0), atol=1e-11)


def test_expm_long_horizon_no_overflow():
    m = MK([[-3.0, 0.5], [0.4, -2.0]])  # delta > 0
    e = expm(m, 400.0)
    assert all(math.isfinite(v) and abs(v) < 1e-200
               for v in (e.a11, e.a12, e.a21, e.a22))


finite_entry = st.floats(min_value=-3.0, max_value=3.0)
small_time = st.floats(min_value=-5.0, max_value=5.0)


@settings(max_examples=150, deadline=None)
@given(a=finite_entry, b=finite_entry, c=finite_entry, d=finite_entry,
       s=small_time, t=small_time)
def test_expm_semigroup(a, b, c, d, s, t):
    m = Mat2(a, b, c, d)
    lhs = (expm(m, s) @ expm(m, t)).as_array()
    rhs = expm(m, s + t).as_array()
    scale = max(1.0, np.abs(rhs).max())
    np.testing.assert_allclose(lhs, rhs, atol=1e-10 * scale)


@settings(max_examples=150, deadline=None)
@given(a=finite_entry, b=finite_entry, c=finite_entry, d=finite_entry,
       t=small_time)
def test_expm_det_identity(a, b, c, d, t):
    m = Mat2(a, b, c, d)
    got = expm(m, t).det
    want = math.exp(t * m.trace)
    assert got == pytest.approx(want, rel=1e-10)


@settings(max_examples=200, deadline=None)
@given(a=finite_entry, b=finite_entry, c=finite_entry, d=finite_entry,
       e=finite_entry, f=finite_entry, g=finite_entry, h=finite_entry)
def test_commutator_antisymmetry(a, b, c, d, e, f, g, h):
    x = Mat2(a, b, c, d)
    y = Mat2(e, f, g, h)
    lhs = commutator(x, y)
    rhs = commutator(y, x)
    assert (lhs + rhs).norm() <= 1e-12 * max(1.0, lhs.norm())


def test_eigen_examples():
    es = eigen(MK([[-1, 0], [0, -2]]))
    assert es.kind == "real-distinct"
    assert sorted(v.real for v in es.eigenvalues) == [-2.0, -1.0]
    vecs = np.array(es.eigenvectors)
    assert {tuple(np.round(np.abs(v), 12)) for v in vecs} == {(0.0, 1.0),
                                                              (1.0, 0.0)}

    es = eigen(MK([[-1, 1], [-1, -1]]))
    assert es.kind == "complex-conjugate"
    # characteristic-polynomial oracle
    for lam in es.eigenvalues:
        assert abs(lam * lam - (-2) * lam + 2) < 1e-12
    assert es.eigenvectors == ()

    es = eigen(MK([[-1, 1], [0, -1]]))
    assert es.kind == "real-repeated-defective"
    assert es.eigenvalues[0] == -1.0
    np.testing.assert_allclose(es.eigenvectors[0], [1.0, 0.0])

    es = eigen(MK([[-2, 0], [0, -2]]))
    assert es.kind == "real-repeated-diagonalizable"


def test_eigen_kind_matches_disc_sign(rng):
    for _ in range(500):
        m = Mat2.from_array(rng.uniform(-3, 3, (2, 2)))
        es = eigen(m)
        eps = m.disc_eps()
        if m.discriminant > eps:
            assert es.kind == "real-distinct"
        elif m.discriminant < -eps:
            assert es.kind == "complex-conjugate"


def test_eigen_pairs_satisfy_definition(rng):
    for _ in range(300):
        m = Mat2.from_array(rng.uniform(-3, 3, (2, 2)))
        es = eigen(m)
        if es.kind != "real-distinct":
            continue
        for lam, v in zip(es.eigenvalues, es.eigenvectors):
            resid = m.apply(v) - lam.real * v
            assert np.linalg.norm(resid) < 1e-10 * max(1.0, m.norm())
            assert abs(np.linalg.norm(v) - 1.0) < 1e-12
            lead = v[0] if abs(v[0]) > 1e-12 else v[1]
            assert lead > 0.0


def test_eigen_structure_is_plain_data():
    es = eigen(MK([[-1, 0], [0, -2]]))
    assert isinstance(es, EigenStructure)
    assert es.kind and len(es.eigenvalues) == 2
