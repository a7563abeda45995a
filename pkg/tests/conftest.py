"""Shared generators for the test suite."""

import math

import numpy as np
import pytest

from swstab import Mat2, compute_invariants, is_hurwitz, r_value


def rand_hurwitz(rng, scale=2.0, margin=0.05) -> Mat2:
    """Rejection-sample a Hurwitz matrix with trace/det margins."""
    while True:
        a = Mat2.from_array(rng.uniform(-scale, scale, (2, 2)))
        if a.trace < -margin and a.det > margin:
            return a


def rand_similarity(rng, max_cond=8.0) -> np.ndarray:
    """Well-conditioned random change of basis (either orientation)."""
    while True:
        t = np.eye(2) + rng.uniform(-0.6, 0.6, (2, 2))
        if rng.uniform() < 0.3:
            t[1] = -t[1]
        if abs(np.linalg.det(t)) > 0.3 and np.linalg.cond(t) < max_cond:
            return t


def conjugate_pair(a1: Mat2, a2: Mat2, t: np.ndarray):
    ti = np.linalg.inv(t)
    return (Mat2.from_array(ti @ a1.as_array() @ t),
            Mat2.from_array(ti @ a2.as_array() @ t))


S4_FAMILIES = ("neg-neg", "pos-pos", "zero-zero", "neg-zero", "neg-pos",
               "pos-zero")


def sample_s4(rng, family: str):
    """S4 instance in tau-normalized shape, or None if rejection fails.

    Families are named by (sign delta1, sign delta2); the remaining sign
    combinations arise by swapping the pair order, which preserves the S4
    inequalities.
    """
    mk = Mat2.from_rows
    for _ in range(500):
        if family == "neg-neg":
            t1, t2 = rng.uniform(-0.6, -0.02, 2)
            k = rng.uniform(-3.0, -1.02)
            f = k - math.sqrt(k * k - 1)
            a1, a2 = mk([[t1, 1], [-1, t1]]), mk([[t2, -1 / f], [f, t2]])
        elif family == "pos-pos":
            t1, t2 = rng.uniform(-1.6, -1.02, 2)
            k = rng.uniform(-3.0, -1.05)
            f = k - math.sqrt(k * k - 1)
            a1, a2 = mk([[t1, 1], [1, t1]]), mk([[t2, 1 / f], [f, t2]])
        elif family == "zero-zero":
            t1, t2 = rng.uniform(-0.6, -0.05, 2)
            k = rng.uniform(-3.0, -0.2)
            a1, a2 = mk([[t1, 1], [0, t1]]), mk([[t2, 0], [2 * k, t2]])
        elif family == "neg-zero":
            t1, t2 = rng.uniform(-0.5, -0.05, 2)
            g = rng.uniform(-3.0, -0.2)
            a1, a2 = mk([[t1, 1], [-1, t1]]), mk([[t2, 0], [g, t2]])
        elif family == "neg-pos":
            t1 = rng.uniform(-0.5, -0.05)
            t2 = rng.uniform(-1.8, -1.02)
            k = rng.uniform(-2.5, -0.5)
            f = k - math.sqrt(k * k + 1)
            a1, a2 = mk([[t1, 1], [-1, t1]]), mk([[t2, 1 / f], [f, t2]])
        elif family == "pos-zero":
            t1 = rng.uniform(-1.8, -1.02)
            t2 = rng.uniform(-0.5, -0.05)
            g = rng.uniform(-3.0, -0.2)
            a1, a2 = mk([[t1, 1], [1, t1]]), mk([[t2, 0], [g, t2]])
        else:
            raise ValueError(family)
        if not (is_hurwitz(a1) and is_hurwitz(a2)):
            continue
        inv = compute_invariants(a1, a2)
        root = inv.geo_mean_det
        if inv.gamma > root + 1e-6 * (1 + root) and inv.tr12 <= -2 * root - 1e-9:
            if rng.uniform() < 0.5:
                a1, a2 = a2, a1
            return a1, a2
    return None


def s4_batch(rng, per_family: int):
    out = []
    for fam in S4_FAMILIES:
        for _ in range(per_family):
            pair = sample_s4(rng, fam)
            if pair is not None:
                out.append((fam, pair))
    return out


def marginal_s4_pair(k: float = -2.0):
    """Pair with |R - 1| at roundoff, found by bisection in tau."""
    mk = Mat2.from_rows
    f = k - math.sqrt(k * k - 1)

    def pair(tau):
        return mk([[tau, 1], [-1, tau]]), mk([[tau, -1 / f], [f, tau]])

    lo, hi = -0.65, -0.06
    sign_lo = math.copysign(1.0, r_value(*pair(lo)) - 1.0)
    assert sign_lo * (r_value(*pair(hi)) - 1.0) < 0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.copysign(1.0, r_value(*pair(mid)) - 1.0) == sign_lo:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return pair(0.5 * (lo + hi))


def s3_pair(tau1: float, tau2: float):
    """Normal-form pair on the exact marginal boundary (delta_i < 0)."""
    mk = Mat2.from_rows
    k = tau1 * tau2 + math.sqrt((tau1 * tau1 + 1) * (tau2 * tau2 + 1))
    f = k + math.sqrt(k * k - 1)
    return (mk([[tau1, 1], [-1, tau1]]), mk([[tau2, -1 / f], [f, tau2]]))


def commuting_pair(rng):
    """Commuting Hurwitz pair: shared traceless part up to scale."""
    while True:
        a1 = rand_hurwitz(rng)
        c = rng.uniform(-2.0, 2.0)
        n1 = a1.traceless()
        tr2 = rng.uniform(-3.0, -0.2)
        a2 = Mat2(tr2 / 2 + c * n1.a11, c * n1.a12,
                  c * n1.a21, tr2 / 2 + c * n1.a22)
        if is_hurwitz(a2):
            return a1, a2


def rank1_commutator_pair(rng):
    """Pair with rank-1 commutator: joint triangular, then conjugated."""
    d1, d2 = sorted(rng.uniform(-3.0, -0.1, 2))
    a1 = Mat2(d1, 0.0, 0.0, d2)
    a2 = Mat2(rng.uniform(-3.0, -0.1), rng.uniform(-2.0, 2.0), 0.0,
              rng.uniform(-3.0, -0.1))
    return conjugate_pair(a1, a2, rand_similarity(rng))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
