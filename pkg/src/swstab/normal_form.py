"""Reduction of a Hurwitz pair to canonical coordinates.

A pair (A1, A2) is reduced, by a linear change of basis T and positive
time rescalings (alpha1, alpha2), to one of four shapes decided by the
commutator C = [A1, A2]:

  1a  det C < 0:  B1 = [[tau1, 1], [s1, tau1]],
                  B2 = [[tau2, s2/F], [F, tau2]],  F + s1*s2/F = 2k
  1b  det C > 0:  B1 = [[tau1, 1], [1, tau1]],
                  B2 = [[tau2 + sqrt(1-k^2), k], [k, tau2 - sqrt(1-k^2)]]
  2   rank C = 1: B1 diagonal, B2 upper triangular (A1, A2 possibly swapped)
  3   C = 0:      same shapes as 1a with F = k = +-1, or joint upper
                  triangular form when both discriminants vanish

where s_i = sign(delta_i).  The workhorse for cases 1a and 3 is the
observation that the second basis column must be a real eigenvector of
Abar2 @ Abar1 (product of the traceless parts): the corresponding
eigenvalue equals F * alpha1 * alpha2, so choosing the eigenvalue of
larger magnitude enforces |F| >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasis, NotHurwitz
from .invariants import compute_invariants
from .mat2 import (KIND_REAL_DISTINCT, Mat2, commutator, eigen, is_hurwitz)

# Commutator zero / rank tests scale with the product of the input norms
# (the commutator is bilinear).
EPS_COMM = 1e-9

CASE_1A = "1a"
CASE_1B = "1b"
CASE_2 = "2"
CASE_3_ROT = "3-rot"
CASE_3_REAL = "3-real"
CASE_3_DEFECTIVE = "3-defective"


@dataclass(frozen=True)
class NormalFormResult:
    """Outcome of the reduction.

    ``b_i = (1/alpha_i) basis^-1 A_sigma(i) basis`` where sigma swaps the
    inputs iff ``swapped`` (only case 2 ever swaps).  ``f`` is the
    off-diagonal parameter of case 1a and of the nondegenerate commuting
    cases; it is None otherwise.
    """

    case_tag: str
    b1: Mat2
    b2: Mat2
    basis: Mat2
    alpha1: float
    alpha2: float
    f: float | None
    swapped: bool
    note: str = ""

    def originals_in_order(self, a1: Mat2, a2: Mat2) -> tuple[Mat2, Mat2]:
        return (a2, a1) if self.swapped else (a1, a2)


def _alphas(a1: Mat2, a2: Mat2, tau1: float, tau2: float) -> tuple[float, float]:
    # tau_i = tr(A_i) / (2 alpha_i) by construction of the tau branches.
    return a1.trace / (2.0 * tau1), a2.trace / (2.0 * tau2)


def _conjugate(t: Mat2, m: Mat2) -> Mat2:
    return t.inv() @ m @ t


def _joint_scale(t: np.ndarray) -> np.ndarray:
    c = 1.0 / math.sqrt(np.linalg.norm(t[:, 0]) * np.linalg.norm(t[:, 1]))
    return t * c


def _basis_from_columns(w1, w2) -> Mat2:
    t = _joint_scale(np.column_stack([w1, w2]))
    d = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    if abs(d) < 1e-12:
        raise DegenerateBasis("change-of-basis columns are collinear", value=d)
    return Mat2.from_array(t)


def _case_1a(a1: Mat2, a2: Mat2, inv) -> NormalFormResult:
    n1, n2 = a1.traceless(), a2.traceless()
    alpha1, alpha2 = _alphas(a1, a2, inv.tau1, inv.tau2)
    m = n2 @ n1
    es = eigen(m)
    if es.kind != KIND_REAL_DISTINCT:
        raise DegenerateBasis(
            "product of traceless parts has no separated real eigenvalues "
            "(commuting boundary)", value=m.discriminant)
    # eigenvalue nu maps to F = nu / (alpha1 alpha2); |F| >= 1 picks max |nu|
    pairs = sorted(zip(es.eigenvalues, es.eigenvectors),
                   key=lambda p: abs(p[0].real))
    nu, w2 = pairs[-1][0].real, pairs[-1][1]
    w1 = n1.apply(w2) / alpha1
    basis = _basis_from_columns(w1, w2)
    b1 = _conjugate(basis, a1) / alpha1
    b2 = _conjugate(basis, a2) / alpha2
    note = ""
    if inv.delta_sign1 * inv.delta_sign2 == 0:
        note = "degenerate subcase: F = 2k is forced, |F| >= 1 not guaranteed"
    return NormalFormResult(CASE_1A, b1, b2, basis, alpha1, alpha2,
                            f=b2.a21, swapped=False, note=note)


def _case_1b(a1: Mat2, a2: Mat2, inv) -> NormalFormResult:
    if not (inv.delta_sign1 > 0 and inv.delta_sign2 > 0):
        raise DegenerateBasis(
            "positive commutator determinant with nonpositive discriminant",
            value=(inv.delta1, inv.delta2))
    es = eigen(a1)
    v = np.column_stack([es.eigenvectors[0], es.eigenvectors[1]])
    a2p = np.linalg.inv(v) @ a2.as_array() @ v
    b, c = a2p[0, 1], a2p[1, 0]
    if b * c <= 0.0:
        raise DegenerateBasis("expected b*c > 0 in eigenbasis", value=b * c)
    g = math.sqrt(b * c) / c
    u = np.array([[g, -g], [1.0, 1.0]])
    basis = Mat2.from_array(_joint_scale(v @ u))
    alpha1, alpha2 = _alphas(a1, a2, inv.tau1, inv.tau2)
    b1 = _conjugate(basis, a1) / alpha1
    b2 = _conjugate(basis, a2) / alpha2
    return NormalFormResult(CASE_1B, b1, b2, basis, alpha1, alpha2,
                            f=None, swapped=False)


def _case_2(a1: Mat2, a2: Mat2) -> NormalFormResult:
    swapped = False
    first, second = a1, a2
    if eigen(first).kind != KIND_REAL_DISTINCT:
        first, second = a2, a1
        swapped = True
        if eigen(first).kind != KIND_REAL_DISTINCT:
            raise DegenerateBasis(
                "rank-1 commutator but neither matrix has real distinct "
                "eigenvalues", value=(a1.discriminant, a2.discriminant))
    es = eigen(first)
    v = np.column_stack([es.eigenvectors[0], es.eigenvectors[1]])
    sp = np.linalg.inv(v) @ second.as_array() @ v
    if abs(sp[1, 0]) > abs(sp[0, 1]):
        v = v[:, ::-1]  # exchanging the axes moves the residual below-diagonal
    basis = Mat2.from_array(_joint_scale(v))
    b1 = _conjugate(basis, first)
    b2 = _conjugate(basis, second)
    return NormalFormResult(CASE_2, b1, b2, basis, 1.0, 1.0, f=None,
                            swapped=swapped,
                            note="triangular pair emitted without further "
                                 "normalization")


def _structured_basis(n1: Mat2, alpha1: float, sign1: int) -> Mat2:
    """Basis turning traceless n1 into alpha1 * [[0,1],[s1,0]] (s1 = sign1)."""
    candidates = [np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                  np.array([math.sqrt(0.5), math.sqrt(0.5)])]
    best, best_det = None, 0.0
    for w2 in candidates:
        w1 = n1.apply(w2) / alpha1
        d = abs(w1[0] * w2[1] - w1[1] * w2[0])
        if d > best_det:
            best, best_det = (w1, w2), d
    if best is None or best_det < 1e-9:
        raise DegenerateBasis("traceless part too close to scalar",
                              value=best_det)
    return _basis_from_columns(*best)


def _case_3(a1: Mat2, a2: Mat2, inv) -> NormalFormResult:
    n1, n2 = a1.traceless(), a2.traceless()
    alpha1, alpha2 = _alphas(a1, a2, inv.tau1, inv.tau2)
    norm1 = n1.norm() / max(1.0, a1.norm())
    norm2 = n2.norm() / max(1.0, a2.norm())
    scalar1, scalar2 = norm1 <= 1e-12, norm2 <= 1e-12

    if scalar1 and scalar2:
        return NormalFormResult(
            CASE_3_DEFECTIVE, a1 / alpha1, a2 / alpha2,
            Mat2(1.0, 0.0, 0.0, 1.0), alpha1, alpha2, f=None, swapped=False,
            note="both members scalar")

    lead, lead_alpha, lead_sign = (n1, alpha1, inv.delta_sign1)
    if scalar1:
        lead, lead_alpha, lead_sign = (n2, alpha2, inv.delta_sign2)

    if lead_sign == 0:
        # nilpotent leader: [u, w] with lead(w) = u gives the Jordan shape
        for w2 in (np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                   np.array([math.sqrt(0.5), math.sqrt(0.5)])):
            w1 = lead.apply(w2) / lead_alpha
            if abs(w1[0] * w2[1] - w1[1] * w2[0]) > 1e-9:
                basis = _basis_from_columns(w1, w2)
                break
        else:
            raise DegenerateBasis("nilpotent part vanishes", value=lead.norm())
        b1 = _conjugate(basis, a1) / alpha1
        b2 = _conjugate(basis, a2) / alpha2
        return NormalFormResult(CASE_3_DEFECTIVE, b1, b2, basis,
                                alpha1, alpha2, f=None, swapped=False)

    basis = _structured_basis(lead, lead_alpha, lead_sign)
    b1 = _conjugate(basis, a1) / alpha1
    b2 = _conjugate(basis, a2) / alpha2
    tag = CASE_3_ROT if lead_sign < 0 else CASE_3_REAL
    f = None
    note = ""
    if not (scalar1 or scalar2):
        f = b2.a21
    else:
        note = "scalar member: F undefined"
    return NormalFormResult(tag, b1, b2, basis, alpha1, alpha2, f=f,
                            swapped=False, note=note)


def normalize(a1: Mat2, a2: Mat2) -> NormalFormResult:
    """Reduce a Hurwitz pair to its canonical shape.

    Case selection uses scale-aware thresholds on the commutator: zero if
    ||C|| <= eps, rank one if |det C| <= eps * ||C||, with
    eps = 1e-9 ||A1|| ||A2||; otherwise the sign of det C decides 1a / 1b.
    """
    if not is_hurwitz(a1):
        raise NotHurwitz("A1 is not Hurwitz")
    if not is_hurwitz(a2):
        raise NotHurwitz("A2 is not Hurwitz")
    inv = compute_invariants(a1, a2)
    c = commutator(a1, a2)
    eps = EPS_COMM * a1.norm() * a2.norm()
    if c.norm() <= eps:
        return _case_3(a1, a2, inv)
    if abs(c.det) <= eps * c.norm():
        return _case_2(a1, a2)
    if c.det < 0.0:
        return _case_1a(a1, a2, inv)
    return _case_1b(a1, a2, inv)


def _close(m: Mat2, rows, tol: float, scale: float) -> bool:
    expected = Mat2.from_rows(rows)
    return (m - expected).norm() <= tol * scale


def verify_normal_form(res: NormalFormResult, a1: Mat2, a2: Mat2,
                       tol: float = 1e-8) -> bool:
    """Check every structural invariant of a reduction at tolerance ``tol``."""
    o1, o2 = res.originals_in_order(a1, a2)
    t = res.basis
    try:
        tinv = t.inv()
    except ZeroDivisionError:
        return False
    # round trip: alpha_i * T B_i T^-1 == original
    for b, alpha, orig in ((res.b1, res.alpha1, o1), (res.b2, res.alpha2, o2)):
        back = t @ (b * alpha) @ tinv
        if (back - orig).norm() > tol * max(1.0, orig.norm()):
            return False

    inv = compute_invariants(o1, o2)
    scale = max(1.0, res.b1.norm(), res.b2.norm())
    s1, s2 = inv.delta_sign1, inv.delta_sign2

    if res.case_tag == CASE_1A:
        if res.f is None:
            return False
        f = res.f
        if not _close(res.b1, [[inv.tau1, 1.0], [float(s1), inv.tau1]], tol,
                      scale):
            return False
        if not _close(res.b2, [[inv.tau2, s2 / f], [f, inv.tau2]], tol, scale):
            return False
        if abs(f + (s1 * s2) / f - 2.0 * inv.kappa) > 1e-9 * max(
                1.0, abs(inv.kappa)):
            return False
        if s1 * s2 != 0 and abs(f) < 1.0 - tol:
            return False
    elif res.case_tag == CASE_1B:
        k = inv.kappa
        if not (s1 > 0 and s2 > 0 and abs(k) < 1.0):
            return False
        root = math.sqrt(1.0 - k * k)
        if not _close(res.b1, [[inv.tau1, 1.0], [1.0, inv.tau1]], tol, scale):
            return False
        if not _close(res.b2, [[inv.tau2 + root, k], [k, inv.tau2 - root]],
                      tol, scale):
            return False
    elif res.case_tag == CASE_2:
        if abs(res.b1.a12) > tol * scale or abs(res.b1.a21) > tol * scale:
            return False
        if abs(res.b2.a21) > tol * scale:
            return False
    elif res.case_tag in (CASE_3_ROT, CASE_3_REAL):
        if res.f is not None and abs(abs(res.f) - 1.0) > tol:
            return False
    elif res.case_tag == CASE_3_DEFECTIVE:
        for b, tau in ((res.b1, inv.tau1), (res.b2, inv.tau2)):
            if abs(b.a21) > tol * scale:
                return False
            if abs(b.a11 - tau) > tol * scale or abs(b.a22 - tau) > tol * scale:
                return False
    else:
        return False

    # bilinearity: gamma scales by 1/(alpha1 alpha2) under the reduction
    g_b = 0.5 * (res.b1.trace * res.b2.trace - (res.b1 @ res.b2).trace)
    if abs(g_b * res.alpha1 * res.alpha2 - inv.gamma) > tol * max(
            1.0, abs(inv.gamma)):
        return False
    return True
