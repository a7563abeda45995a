"""Closed-form real 2x2 linear algebra.

Everything downstream (invariants, normal forms, trajectory arcs, the
simulator) is built on exact 2x2 formulas: determinants, discriminants,
commutators, eigen-structure and matrix exponentials split on the sign of
the discriminant.  No iterative linear algebra is used at this level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Discriminant-sign tolerance is scale-aware: delta is a degree-2 polynomial
# of the entries, so the decision threshold grows with ||M||^2.
EPS_DISC = 1e-9

KIND_REAL_DISTINCT = "real-distinct"
KIND_REAL_REPEATED_DIAG = "real-repeated-diagonalizable"
KIND_REAL_REPEATED_DEFECTIVE = "real-repeated-defective"
KIND_COMPLEX = "complex-conjugate"


@dataclass(frozen=True)
class Mat2:
    """Real 2x2 matrix with all entries finite."""

    a11: float
    a12: float
    a21: float
    a22: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"entry {name} is not finite: {v!r}")
            object.__setattr__(self, name, float(v))

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def from_array(cls, arr) -> "Mat2":
        a = np.asarray(arr, dtype=float)
        if a.shape != (2, 2):
            raise ValueError(f"expected a 2x2 array, got shape {a.shape}")
        return cls(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    def rows(self):
        return [[self.a11, self.a12], [self.a21, self.a22]]

    # -- elementary invariants ------------------------------------------------

    @property
    def trace(self) -> float:
        return self.a11 + self.a22

    @property
    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21

    @property
    def discriminant(self) -> float:
        """tr(M)^2 - 4 det(M); sign decides the eigenvalue structure."""
        return self.trace * self.trace - 4.0 * self.det

    def norm(self) -> float:
        """Frobenius norm."""
        return math.sqrt(
            self.a11**2 + self.a12**2 + self.a21**2 + self.a22**2
        )

    def disc_eps(self) -> float:
        """Scale-aware tolerance for discriminant sign decisions."""
        n2 = self.a11**2 + self.a12**2 + self.a21**2 + self.a22**2
        return EPS_DISC * max(1.0, n2)

    # -- algebra ---------------------------------------------------------------

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a11 + other.a11, self.a12 + other.a12,
                    self.a21 + other.a21, self.a22 + other.a22)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a11 - other.a11, self.a12 - other.a12,
                    self.a21 - other.a21, self.a22 - other.a22)

    def __mul__(self, s: float) -> "Mat2":
        return Mat2(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)

    __rmul__ = __mul__

    def __truediv__(self, s: float) -> "Mat2":
        return self * (1.0 / s)

    def __neg__(self) -> "Mat2":
        return self * -1.0

    def apply(self, x) -> np.ndarray:
        """Matrix-vector product as a length-2 numpy array."""
        x0, x1 = float(x[0]), float(x[1])
        return np.array([self.a11 * x0 + self.a12 * x1,
                         self.a21 * x0 + self.a22 * x1])

    def inv(self) -> "Mat2":
        d = self.det
        if d == 0.0:
            raise ZeroDivisionError("matrix is singular")
        return Mat2(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d)

    def traceless(self) -> "Mat2":
        """M - (tr M / 2) I, the traceless part."""
        h = 0.5 * self.trace
        return Mat2(self.a11 - h, self.a12, self.a21, self.a22 - h)


IDENTITY = Mat2(1.0, 0.0, 0.0, 1.0)
ZERO = Mat2(0.0, 0.0, 0.0, 0.0)


def det(m: Mat2) -> float:
    return m.det


def trace(m: Mat2) -> float:
    return m.trace


def discriminant(m: Mat2) -> float:
    return m.discriminant


def commutator(x: Mat2, y: Mat2) -> Mat2:
    """XY - YX."""
    return (x @ y) - (y @ x)


def is_hurwitz(m: Mat2, tol: float = 0.0) -> bool:
    """Planar Hurwitz criterion: tr(M) < -tol and det(M) > tol.

    The primitive is exact (default tol 0); boundary-band policy lives in
    the classifier.
    """
    return m.trace < -tol and m.det > tol


@dataclass(frozen=True)
class EigenStructure:
    """Eigenvalue/eigenvector structure of a real 2x2 matrix.

    ``kind`` is decided from the discriminant sign at a scale-aware
    tolerance; eigenvectors are unit-norm with the first nonzero component
    positive, and absent for the complex kind.
    """

    kind: str
    eigenvalues: tuple  # pair of complex numbers
    eigenvectors: tuple  # up to two numpy unit 2-vectors


def _canonical_unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise ValueError("zero vector cannot be normalized")
    v = v / n
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    if lead < 0.0:
        v = -v
    return v


def _kernel_direction(n11, n12, n21) -> np.ndarray:
    # Kernel of the traceless singular matrix [[n11, n12], [n21, -n11]].
    c1 = np.array([n12, -n11])
    c2 = np.array([n11, n21])
    v = c1 if np.hypot(*c1) >= np.hypot(*c2) else c2
    return _canonical_unit(v)


def eigen(m: Mat2, tol: float | None = None) -> EigenStructure:
    """Eigen-structure via the closed 2x2 form.

    ``tol`` overrides the scale-aware discriminant tolerance.
    """
    eps = m.disc_eps() if tol is None else tol
    d = m.discriminant
    half_tr = 0.5 * m.trace
    if d > eps:
        root = 0.5 * math.sqrt(d)
        lo, hi = half_tr - root, half_tr + root
        vecs = []
        for lam in (lo, hi):
            # rows of (M - lam I) are parallel; kernel from the larger row
            r1 = np.array([m.a12, lam - m.a11])
            r2 = np.array([lam - m.a22, m.a21])
            v = r1 if np.hypot(*r1) >= np.hypot(*r2) else r2
            vecs.append(_canonical_unit(v))
        return EigenStructure(KIND_REAL_DISTINCT, (complex(lo), complex(hi)),
                              tuple(vecs))
    if d < -eps:
        w = 0.5 * math.sqrt(-d)
        return EigenStructure(
            KIND_COMPLEX,
            (complex(half_tr, -w), complex(half_tr, w)),
            (),
        )
    # repeated eigenvalue: diagonalizable iff the traceless part vanishes
    n = m.traceless()
    if n.norm() <= 1e-8 * max(1.0, m.norm()):
        return EigenStructure(
            KIND_REAL_REPEATED_DIAG,
            (complex(half_tr), complex(half_tr)),
            (np.array([1.0, 0.0]), np.array([0.0, 1.0])),
        )
    v = _kernel_direction(n.a11, n.a12, n.a21)
    return EigenStructure(
        KIND_REAL_REPEATED_DEFECTIVE,
        (complex(half_tr), complex(half_tr)),
        (v,),
    )


def _rot_coeffs(delta: float, t: float, eps: float):
    """(c, s) with e^{tN} = c I + s N for traceless N, delta = -4 det N.

    Evaluated through limit-correct kernels so the three closed forms agree
    near delta = 0 without cancellation.
    """
    if abs(delta) < eps:
        return 1.0, t
    w = 0.5 * math.sqrt(abs(delta))
    u = w * t
    if delta < 0.0:
        return math.cos(u), math.sin(u) / w
    return math.cosh(u), math.sinh(u) / w


def expm(m: Mat2, t: float = 1.0) -> Mat2:
    """e^{tM} via the closed form split on the discriminant sign."""
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    half_tr = 0.5 * m.trace
    n = m.traceless()
    delta = m.discriminant
    eps = m.disc_eps()
    if delta > eps:
        w = 0.5 * math.sqrt(delta)
        u = w * t
        if abs(u) >= 1.0:
            # combine exponents so e^{tr t/2} cosh(u) cannot over/underflow
            # while the true eigen-exponentials stay in range
            p = math.exp(half_tr * t + u)
            q = math.exp(half_tr * t - u)
            sc_c, sc_s = 0.5 * (p + q), 0.5 * (p - q) / w
        else:
            scale = math.exp(half_tr * t)
            sc_c, sc_s = scale * math.cosh(u), scale * math.sinh(u) / w
    else:
        c, s = _rot_coeffs(delta, t, eps)
        scale = math.exp(half_tr * t)
        sc_c, sc_s = scale * c, scale * s
    return Mat2(
        sc_c + sc_s * n.a11,
        sc_s * n.a12,
        sc_s * n.a21,
        sc_c - sc_s * n.a11,
    )


def expm_apply(m: Mat2, t: float, x) -> np.ndarray:
    """e^{tM} x without forming the matrix twice."""
    return expm(m, t).apply(x)
