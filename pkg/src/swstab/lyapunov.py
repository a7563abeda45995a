"""Quadratic Lyapunov machinery.

Covers the convex-combination determinant polynomials phi/psi (whose joint
positivity on [0, 1] characterizes the existence of a common quadratic
Lyapunov function), the analytic existence test, the minimizer sigma0 used
by the unbounded/marginal cases, the closed-form nonstrict certificate of
the marginal case, and a best-effort numeric search for an explicit strict
certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, SingularA2, WitnessNotFound, WrongCase
from .invariants import compute_invariants, gamma
from .mat2 import Mat2

WITNESS_GRID = 1000
WITNESS_SAMPLES = 10_000


@dataclass(frozen=True)
class SigmaPolys:
    """Determinant quadratics of the convex combinations.

    Coefficients are stored against the basis (sigma^2, sigma(1-sigma),
    (1-sigma)^2), so phi(0) = det(A2) and phi(1) = det(A1) directly.
    ``psi`` carries an overall 1/det(A2) prefactor.
    """

    phi_coeffs: tuple[float, float, float]
    psi_coeffs: tuple[float, float, float]
    det2: float
    sigma0: float | None = None
    phi_at_sigma0: float | None = None

    def phi(self, sigma):
        s = np.asarray(sigma, dtype=float)
        c2, c11, c0 = self.phi_coeffs
        return c2 * s * s + c11 * s * (1.0 - s) + c0 * (1.0 - s) ** 2

    def psi(self, sigma):
        s = np.asarray(sigma, dtype=float)
        c2, c11, c0 = self.psi_coeffs
        val = c2 * s * s + c11 * s * (1.0 - s) + c0 * (1.0 - s) ** 2
        return val / self.det2


def sigma_polys(a1: Mat2, a2: Mat2) -> SigmaPolys:
    """Expand phi(s) = det(s A1 + (1-s) A2) and its inverse-pair analogue.

    sigma0, the argmin of phi, is populated whenever it falls in (0, 1).
    """
    det1, det2 = a1.det, a2.det
    if det2 == 0.0:
        raise SingularA2("A2 is singular")
    g = gamma(a1, a2)
    tr12 = (a1 @ a2).trace
    sigma0 = None
    phi0 = None
    denom = det1 + det2 - 2.0 * g
    if denom != 0.0:
        s0 = (det2 - g) / denom
        if 0.0 < s0 < 1.0:
            sigma0 = s0
            # phi(sigma0) = -Delta / (4 (det1 + det2 - 2 gamma)); the -2g
            # form is the one that matches direct evaluation
            phi0 = (det1 * det2 - g * g) / denom
    return SigmaPolys(
        phi_coeffs=(det1, 2.0 * g, det2),
        psi_coeffs=(det1 * det2, tr12, 1.0),
        det2=det2,
        sigma0=sigma0,
        phi_at_sigma0=phi0,
    )


def has_quadratic_clf(a1: Mat2, a2: Mat2) -> bool:
    """Analytic existence of a strict common quadratic Lyapunov function.

    gamma > -sqrt(det1 det2) and tr(A1 A2) > -2 sqrt(det1 det2), the
    closed form of "phi > 0 and psi > 0 on [0, 1]".  Exact; no grids.
    """
    root = math.sqrt(a1.det * a2.det)
    return (gamma(a1, a2) > -root) and ((a1 @ a2).trace > -2.0 * root)


@dataclass(frozen=True)
class QuadraticForm:
    """V(x) = x^T P x with P = [[p11, p12], [p12, p22]] positive definite."""

    p11: float
    p12: float
    p22: float
    strict: bool

    def as_array(self) -> np.ndarray:
        return np.array([[self.p11, self.p12], [self.p12, self.p22]])

    def value(self, x) -> float:
        x0, x1 = float(x[0]), float(x[1])
        return self.p11 * x0 * x0 + 2.0 * self.p12 * x0 * x1 + self.p22 * x1 * x1

    def is_positive_definite(self) -> bool:
        return self.p11 > 0.0 and self.p11 * self.p22 - self.p12**2 > 0.0


def lie_derivative_matrix(p: QuadraticForm, a: Mat2) -> np.ndarray:
    """A^T P + P A, the quadratic form of d/dt V along x' = Ax."""
    pm = p.as_array()
    am = a.as_array()
    return am.T @ pm + pm @ am


def _max_eig_sym(m: np.ndarray) -> float:
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    rad = math.hypot(0.5 * (m[0, 0] - m[1, 1]), m[0, 1])
    return half_tr + rad


def certifies_strictly(p: QuadraticForm, a1: Mat2, a2: Mat2) -> bool:
    """Both Lie-derivative matrices negative definite with scaled margin."""
    if not p.is_positive_definite():
        return False
    pn = math.sqrt(p.p11**2 + 2 * p.p12**2 + p.p22**2)
    for a in (a1, a2):
        margin = -1e-12 * pn * a.norm()
        if _max_eig_sym(lie_derivative_matrix(p, a)) >= margin:
            return False
    return True


def solve_lyapunov_identity(a: Mat2) -> QuadraticForm:
    """P with A^T P + P A = -I (3x3 linear solve in the planar case)."""
    m = np.array([
        [2.0 * a.a11, 2.0 * a.a21, 0.0],
        [a.a12, a.a11 + a.a22, a.a21],
        [0.0, 2.0 * a.a12, 2.0 * a.a22],
    ])
    p11, p12, p22 = np.linalg.solve(m, np.array([-1.0, 0.0, -1.0]))
    return QuadraticForm(p11, p12, p22, strict=True)


def quadratic_clf_witness(a1: Mat2, a2: Mat2,
                          seed: int = 0) -> QuadraticForm:
    """Best-effort explicit strict certificate for the quadratic-LF case.

    Searches the segment between the single-mode solutions of
    A_i^T P + P A_i = -I on a fine grid, then falls back to rejection
    sampling over random positive definite forms.  The analytic verdict
    stands whether or not a witness is found; raises
    :class:`WitnessNotFound` after the bounded budget.
    """
    if not has_quadratic_clf(a1, a2):
        raise PreconditionError("pair admits no common quadratic LF")
    p1 = solve_lyapunov_identity(a1)
    p2 = solve_lyapunov_identity(a2)
    for lam in np.linspace(0.0, 1.0, WITNESS_GRID + 1):
        p = QuadraticForm(
            lam * p1.p11 + (1.0 - lam) * p2.p11,
            lam * p1.p12 + (1.0 - lam) * p2.p12,
            lam * p1.p22 + (1.0 - lam) * p2.p22,
            strict=True,
        )
        if certifies_strictly(p, a1, a2):
            return p
    rng = np.random.default_rng(seed)
    for _ in range(WITNESS_SAMPLES):
        m = rng.normal(size=(2, 2))
        pm = m.T @ m + 0.05 * np.eye(2)
        p = QuadraticForm(pm[0, 0], pm[0, 1], pm[1, 1], strict=True)
        if certifies_strictly(p, a1, a2):
            return p
    raise WitnessNotFound(
        "no strict quadratic certificate found within budget",
        budget=WITNESS_GRID + 1 + WITNESS_SAMPLES)


def nonstrict_clf_s3(nf) -> QuadraticForm:
    """Closed-form nonstrict certificate for the marginal (S3) case.

    ``nf`` is a case-1a :class:`~swstab.normal_form.NormalFormResult` whose
    pair satisfies gamma = -sqrt(det1 det2).  The certificate is diagonal
    in normal-form coordinates and is pulled back through the basis, so the
    returned form applies to the original matrices.
    """
    if nf.case_tag != "1a" or nf.f is None:
        raise WrongCase(f"S3 certificate requires case 1a, got {nf.case_tag}")
    inv = compute_invariants(nf.b1, nf.b2)
    root = inv.geo_mean_det
    if abs(inv.gamma + root) > 1e-6 * max(1.0, root):
        raise WrongCase(
            f"pair is not on the S3 boundary: gamma={inv.gamma!r}, "
            f"-sqrt(det1 det2)={-root!r}")
    s1, s2 = inv.delta_sign1, inv.delta_sign2
    f = nf.f
    num = (s1 * s2 - f * f) ** 2
    den = 4.0 * f * f * (inv.tau1 * f - inv.tau2 * s1) ** 2
    coeff = num / den
    tinv = nf.basis.inv().as_array()
    p = tinv.T @ np.diag([1.0, coeff]) @ tinv
    return QuadraticForm(p[0, 0], p[0, 1], p[1, 1], strict=False)
