"""Coordinate-invariant scalars of a Hurwitz matrix pair.

The classification of the switched system runs entirely on the quantities
computed here: the pairing form gamma, the per-matrix discriminants and
normalized traces tau_i, the coupling k, the pair discriminant Delta, the
arc times t_i and the worst-trajectory return ratio R.  Everything is a
pure function of the two matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import DomainError, PreconditionError, TraceZero
from .mat2 import Mat2, is_hurwitz


def gamma(x: Mat2, y: Mat2) -> float:
    """Pairing form: (tr(X) tr(Y) - tr(XY)) / 2.  gamma(X, X) = det(X)."""
    return 0.5 * (x.trace * y.trace - (x @ y).trace)


def big_delta(a1: Mat2, a2: Mat2) -> float:
    """4 (gamma^2 - det(A1) det(A2)); discriminant of the pair."""
    g = gamma(a1, a2)
    return 4.0 * (g * g - a1.det * a2.det)


def _delta_sign(m: Mat2) -> int:
    d = m.discriminant
    eps = m.disc_eps()
    if d > eps:
        return 1
    if d < -eps:
        return -1
    return 0


def taus(a1: Mat2, a2: Mat2) -> tuple[float, float]:
    """Normalized traces (tau1, tau2), both negative for Hurwitz inputs.

    Each trace is divided by sqrt|delta| of its own matrix when both
    discriminants are nonzero, by sqrt|delta| of the nondegenerate one when
    exactly one vanishes, and by 2 when both vanish.  Sign decisions reuse
    the discriminant tolerance of :mod:`.mat2` so tau and the eigen kind
    never disagree.
    """
    s1, s2 = _delta_sign(a1), _delta_sign(a2)
    if s1 != 0 and s2 != 0:
        return (a1.trace / math.sqrt(abs(a1.discriminant)),
                a2.trace / math.sqrt(abs(a2.discriminant)))
    if s1 == 0 and s2 == 0:
        return 0.5 * a1.trace, 0.5 * a2.trace
    root = math.sqrt(abs(a1.discriminant if s1 != 0 else a2.discriminant))
    return a1.trace / root, a2.trace / root


def kappa(a1: Mat2, a2: Mat2) -> float:
    """Coupling invariant k; its sign equals the sign of the Killing form."""
    tr1, tr2 = a1.trace, a2.trace
    if tr1 == 0.0 or tr2 == 0.0:
        raise TraceZero("kappa requires nonzero traces")
    t1, t2 = taus(a1, a2)
    return (2.0 * t1 * t2 / (tr1 * tr2)) * ((a1 @ a2).trace - 0.5 * tr1 * tr2)


@dataclass(frozen=True)
class InvariantSet:
    """Full invariant tuple of a pair, plus the optional S4 quantities."""

    gamma: float
    delta1: float
    delta2: float
    delta_sign1: int
    delta_sign2: int
    tau1: float
    tau2: float
    kappa: float
    big_delta: float
    det1: float
    det2: float
    tr1: float
    tr2: float
    tr12: float
    geo_mean_det: float
    t1: float | None = None
    t2: float | None = None
    r_value: float | None = None

    def in_case_s4(self) -> bool:
        """The two strict S4 inequalities."""
        return (self.gamma > self.geo_mean_det
                and self.tr12 <= -2.0 * self.geo_mean_det)


def compute_invariants(a1: Mat2, a2: Mat2) -> InvariantSet:
    g = gamma(a1, a2)
    det1, det2 = a1.det, a2.det
    t1, t2 = taus(a1, a2)
    return InvariantSet(
        gamma=g,
        delta1=a1.discriminant,
        delta2=a2.discriminant,
        delta_sign1=_delta_sign(a1),
        delta_sign2=_delta_sign(a2),
        tau1=t1,
        tau2=t2,
        kappa=kappa(a1, a2),
        big_delta=4.0 * (g * g - det1 * det2),
        det1=det1,
        det2=det2,
        tr1=a1.trace,
        tr2=a2.trace,
        tr12=(a1 @ a2).trace,
        geo_mean_det=math.sqrt(det1 * det2),
    )


def _atanh_checked(x: float) -> float:
    """arctanh as log((1+x)/(1-x))/2 with an explicit domain check."""
    if not -1.0 < x < 1.0:
        raise DomainError(f"arctanh argument {x!r} outside (-1, 1)", value=x)
    return 0.5 * math.log((1.0 + x) / (1.0 - x))


def _switch_time_one(inv: InvariantSet, i: int, sign_i: int) -> float:
    tau_i = inv.tau1 if i == 1 else inv.tau2
    tau_j = inv.tau2 if i == 1 else inv.tau1
    trtr = inv.tr1 * inv.tr2
    sqrt_delta = math.sqrt(inv.big_delta)
    if sign_i < 0:
        arg = trtr * (inv.kappa * tau_i + tau_j) / (2.0 * inv.tau1 * inv.tau2 * sqrt_delta)
        return 0.5 * math.pi - math.atan(arg)
    if sign_i > 0:
        arg = 2.0 * inv.tau1 * inv.tau2 * sqrt_delta / (trtr * (inv.kappa * tau_i - tau_j))
        return _atanh_checked(arg)
    # degenerate branch: the numerator is sqrt(Delta), not 2 sqrt(Delta) --
    # verified symbolically for nilpotent shear flows and by the numeric
    # arc-time oracle; the doubled form breaks the return-ratio identity
    return sqrt_delta / ((inv.tr12 - 0.5 * trtr) * tau_i)


def switch_times(inv: InvariantSet,
                 delta_signs: tuple[int, int] | None = None) -> tuple[float, float]:
    """Arc durations (t1, t2) of the worst trajectory, case S4.

    The branch for each t_i follows the sign of the corresponding
    discriminant; ``delta_signs`` overrides the signs recorded in ``inv``.
    Raises :class:`DomainError` when the arctanh argument falls outside
    (-1, 1) -- reported, never clamped.
    """
    if inv.big_delta <= 0.0:
        raise PreconditionError("switch times require big_delta > 0")
    if inv.tr1 == 0.0 or inv.tr2 == 0.0:
        raise TraceZero("switch times require nonzero traces")
    s1, s2 = delta_signs if delta_signs is not None else (inv.delta_sign1,
                                                          inv.delta_sign2)
    return (_switch_time_one(inv, 1, s1), _switch_time_one(inv, 2, s2))


def with_s4_quantities(inv: InvariantSet) -> InvariantSet:
    """Populate t1, t2 and r_value; requires the S4 inequalities."""
    if not inv.in_case_s4():
        raise PreconditionError(
            "r_value is defined only in case S4 "
            f"(gamma={inv.gamma!r}, geo_mean_det={inv.geo_mean_det!r}, "
            f"tr12={inv.tr12!r})")
    t1, t2 = switch_times(inv)
    prefactor = (2.0 * inv.gamma + math.sqrt(inv.big_delta)) / (2.0 * inv.geo_mean_det)
    r = prefactor * math.exp(inv.tau1 * t1 + inv.tau2 * t2)
    return replace(inv, t1=t1, t2=t2, r_value=r)


def r_value(a1: Mat2, a2: Mat2) -> float:
    """Analytic worst-trajectory return ratio R, case S4 only."""
    if not (is_hurwitz(a1) and is_hurwitz(a2)):
        raise PreconditionError("r_value requires Hurwitz inputs")
    return with_s4_quantities(compute_invariants(a1, a2)).r_value
