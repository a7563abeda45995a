"""Worst-case switching geometry for the single-trajectory (S4) case.

The locus where the two vector fields are parallel is a pair of lines
through the origin (when the pair discriminant is positive).  The extremal
trajectory follows, in each sector between the lines, the field whose
velocity stays angularly outermost with respect to the system's rotation
sense, and switches exactly on the lines.  Its norm ratio after one return
to the starting line is the numeric counterpart of the analytic return
ratio, and the two are cross-validated against each other.

Also houses the explicit unstable direction of the convex-combination
(S2) case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DeltaNonPositive, NoCrossing, PreconditionError,
                     WrongCase)
from .invariants import compute_invariants
from .lyapunov import sigma_polys
from .mat2 import KIND_REAL_DISTINCT, Mat2, eigen, expm

VERTICAL = math.inf

# marching resolution: bounded by both the contraction scale 1/|tau| and
# the angular-speed scale ||A||, so one step never sweeps past a sector
MARCH_FRACTION = 0.01
MAX_MARCH_STEPS = 1_000_000
CHUNK = 1024


def _det2v(u, v) -> float:
    return u[0] * v[1] - u[1] * v[0]


def _canonical_unit(v):
    n = math.hypot(v[0], v[1])
    v = np.asarray(v, dtype=float) / n
    lead = v[0] if abs(v[0]) > 1e-12 else v[1]
    return -v if lead < 0.0 else v


@dataclass(frozen=True)
class ParallelSet:
    """The two lines where the fields are parallel, with orientation data.

    Slopes use ``math.inf`` as the vertical marker and are ordered
    m1 >= m2 (vertical sorts first).  ``q_coeffs`` are the coefficients
    (q1, q2, q3) of Q(x) = q1 x1^2 + q2 x1 x2 + q3 x2^2 = det(A1 x, A2 x).
    """

    m1: float
    m2: float
    directions: tuple  # two unit 2-vectors, aligned with (m1, m2)
    direct: bool
    q_coeffs: tuple[float, float, float]

    def q(self, x) -> float:
        x0, x1 = float(x[0]), float(x[1])
        q1, q2, q3 = self.q_coeffs
        return q1 * x0 * x0 + q2 * x0 * x1 + q3 * x1 * x1


def q_coefficients(a1: Mat2, a2: Mat2) -> tuple[float, float, float]:
    """Expand det(A1 x, A2 x) as a quadratic form in x."""
    q1 = a1.a11 * a2.a21 - a1.a21 * a2.a11
    q2 = (a1.a11 * a2.a22 + a1.a12 * a2.a21
          - a1.a21 * a2.a12 - a1.a22 * a2.a11)
    q3 = a1.a12 * a2.a22 - a1.a22 * a2.a12
    return q1, q2, q3


def _line_directions(q1: float, q2: float, q3: float) -> list[np.ndarray]:
    """Unit directions of the two root lines of the quadratic form."""
    disc = q2 * q2 - 4.0 * q1 * q3
    root = math.sqrt(disc)
    # solve in whichever slope variable keeps the quadratic well-scaled
    if abs(q3) >= abs(q1):
        # q3 m^2 + q2 m + q1 = 0 with m = x2/x1; stable two-root form
        qq = -0.5 * (q2 + math.copysign(root, q2)) if q2 != 0.0 else 0.5 * root
        if qq == 0.0:
            ms = [0.0, 0.0]
        else:
            ms = [qq / q3, q1 / qq]
        dirs = [np.array([1.0, m]) for m in ms]
    else:
        qq = -0.5 * (q2 + math.copysign(root, q2)) if q2 != 0.0 else 0.5 * root
        if qq == 0.0:
            ns = [0.0, 0.0]
        else:
            ns = [qq / q1, q3 / qq]
        dirs = [np.array([n, 1.0]) for n in ns]
    return [_canonical_unit(d) for d in dirs]


def _slope(d) -> float:
    if abs(d[0]) <= 1e-14 * abs(d[1]):
        return VERTICAL
    return d[1] / d[0]


def is_direct(ps: ParallelSet, a1: Mat2, a2: Mat2) -> bool:
    """Whether the fields point the same way on the parallel set.

    Both eigenvalues of A2 A1^-1 share a sign (their product is
    det A2/det A1 > 0), so the trace decides: tr(A2 A1^-1) =
    2 gamma / det(A1).
    """
    del ps  # orientation is a property of the pair alone
    tr = (a1.trace * a2.trace - (a2 @ a1).trace) / a1.det
    return tr > 0.0


def parallel_set(a1: Mat2, a2: Mat2) -> ParallelSet:
    """Compute the parallel set; requires pair discriminant > 0."""
    q1, q2, q3 = q_coefficients(a1, a2)
    disc = q2 * q2 - 4.0 * q1 * q3
    if disc <= 0.0:
        raise DeltaNonPositive(
            f"parallel set needs a positive pair discriminant, got {disc!r}")
    d_a, d_b = _line_directions(q1, q2, q3)
    pairs = sorted(((_slope(d_a), d_a), (_slope(d_b), d_b)),
                   key=lambda p: (p[0] != VERTICAL, -p[0] if p[0] != VERTICAL else 0.0))
    ps = ParallelSet(
        m1=pairs[0][0],
        m2=pairs[1][0],
        directions=(pairs[0][1], pairs[1][1]),
        direct=False,
        q_coeffs=(q1, q2, q3),
    )
    return ParallelSet(ps.m1, ps.m2, ps.directions, is_direct(ps, a1, a2),
                       ps.q_coeffs)


@dataclass(frozen=True)
class Arc:
    index: int  # 1 or 2, the active matrix
    duration: float
    start: np.ndarray


@dataclass(frozen=True)
class WorstTrajectory:
    """Concatenated extremal arcs plus the measured return ratio.

    ``return_ratio`` is the norm ratio after the first return to the
    starting line (one A2-arc followed by one A1-arc in normal-form
    labeling); ``final_norm_ratio`` covers all requested revolutions.
    """

    arcs: tuple
    return_ratio: float
    start: np.ndarray
    final_point: np.ndarray
    final_norm_ratio: float
    matrices: tuple

    def samples(self, points_per_arc: int = 60):
        """Exact samples (t, x, u) along the arcs; u = 1 on A1 arcs."""
        out = []
        t_base = 0.0
        for arc in self.arcs:
            a = self.matrices[arc.index - 1]
            u = 1.0 if arc.index == 1 else 0.0
            for tau in np.linspace(0.0, arc.duration, points_per_arc,
                                   endpoint=False):
                out.append((t_base + tau, expm(a, tau).apply(arc.start), u))
            t_base += arc.duration
        out.append((t_base, self.final_point,
                    1.0 if self.arcs[-1].index == 1 else 0.0))
        return out


class _ArcSolver:
    """First positive root of det(target_dir, e^{tA} x0) = 0.

    The flow of a 2x2 matrix splits as e^{t tr/2}(c(t) I + s(t) N) with N
    traceless, so the crossing function is e^{t tr/2}(a c(t) + b s(t));
    the exponential prefactor never changes the sign.  Roots are bracketed
    by marching, narrowed by bisection, then polished with Newton.
    """

    def __init__(self, a: Mat2, step: float):
        self.a = a
        self.half_tr = 0.5 * a.trace
        self.n = a.traceless()
        self.delta = a.discriminant
        self.eps = a.disc_eps()
        self.w = 0.5 * math.sqrt(abs(self.delta))
        self.step = step

    def _cs(self, t):
        t = np.asarray(t, dtype=float)
        if abs(self.delta) < self.eps:
            return np.ones_like(t), t
        u = self.w * t
        if self.delta < 0.0:
            return np.cos(u), np.sin(u) / self.w
        # scale by e^-u to keep cosh/sinh finite; sign-equivalent
        big = u > 30.0
        if np.any(big):
            em = np.exp(-2.0 * np.minimum(u, 700.0))
            c = 0.5 * (1.0 + em)
            s = 0.5 * (1.0 - em) / self.w
            cn, sn = np.cosh(np.where(big, 0.0, u)), np.sinh(np.where(big, 0.0, u))
            return np.where(big, c, cn), np.where(big, s, sn / self.w)
        return np.cosh(u), np.sinh(u) / self.w

    def first_crossing(self, target_dir, x0) -> float:
        a_coef = _det2v(target_dir, x0)
        b_coef = _det2v(target_dir, self.n.apply(x0))
        if a_coef == 0.0:
            raise NoCrossing("arc starts on its own target line")

        def g(t):
            c, s = self._cs(t)
            return a_coef * c + b_coef * s

        sign0 = math.copysign(1.0, a_coef)
        t_lo = 0.0
        found = None
        for start in range(0, MAX_MARCH_STEPS, CHUNK):
            ts = (start + 1 + np.arange(CHUNK)) * self.step
            vals = g(ts)
            hits = np.nonzero(np.sign(vals) != sign0)[0]
            if hits.size:
                i = int(hits[0])
                t_hi = ts[i]
                t_lo = ts[i - 1] if i > 0 else start * self.step
                found = (t_lo, t_hi)
                break
        if found is None:
            raise NoCrossing(
                f"no line crossing within {MAX_MARCH_STEPS * self.step!r} "
                "time units; pair is outside the expected geometry")
        t_lo, t_hi = found
        for _ in range(200):
            mid = 0.5 * (t_lo + t_hi)
            if mid == t_lo or mid == t_hi:
                break
            if math.copysign(1.0, float(g(mid))) == sign0:
                t_lo = mid
            else:
                t_hi = mid
            if t_hi - t_lo <= 1e-14 * max(1.0, t_hi):
                break
        t = 0.5 * (t_lo + t_hi)
        # one Newton polish: g' = a (delta/4) s + b c
        for _ in range(2):
            c, s = self._cs(t)
            gv = a_coef * float(c) + b_coef * float(s)
            gp = a_coef * (self.delta / 4.0) * float(s) + b_coef * float(c)
            if gp != 0.0:
                t_new = t - gv / gp
                if t_lo * 0.5 <= t_new <= 2.0 * t_hi + self.step:
                    t = t_new
        if t <= 0.0:
            raise NoCrossing("crossing-time refinement left the bracket")
        return t


def _rotate(v, angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def _sector_activity(ps: ParallelSet, omega: float) -> dict[int, int]:
    """Active matrix index for the arc leaving each line (0/1 -> 1 or 2)."""
    thetas = [math.atan2(d[1], d[0]) % math.pi for d in ps.directions]
    active = {}
    for j in (0, 1):
        gap = (omega * (thetas[1 - j] - thetas[j])) % math.pi
        mid = _rotate(ps.directions[j], omega * 0.5 * gap)
        qv = ps.q(mid)
        active[j] = 2 if omega * qv < 0.0 else 1
    if active[0] == active[1]:
        raise NoCrossing("sector activity failed to alternate; "
                         "degenerate parallel set")
    return active


def worst_trajectory(a1: Mat2, a2: Mat2, x0=None,
                     revolutions: int = 1) -> WorstTrajectory:
    """Construct the extremal trajectory by exact arc concatenation.

    Defined only when the S4 inequalities hold.  ``x0`` must lie on the
    parallel set (defaults to a unit point on the line from which the
    A2-arc departs).  One revolution is one return to the starting line:
    an A2-arc followed by an A1-arc.
    """
    if revolutions < 1:
        raise ValueError("revolutions must be >= 1")
    inv = compute_invariants(a1, a2)
    if not inv.in_case_s4():
        raise PreconditionError(
            "worst trajectory is defined only under the S4 inequalities")
    ps = parallel_set(a1, a2)
    d0, d1 = ps.directions
    omega = math.copysign(1.0, _det2v(d0, a1.apply(d0)))
    active = _sector_activity(ps, omega)

    qscale = a1.norm() * a2.norm()
    if x0 is None:
        line = 0 if active[0] == 2 else 1
        x = ps.directions[line].copy()
    else:
        x = np.asarray(x0, dtype=float)
        nx = np.linalg.norm(x)
        if nx == 0.0:
            raise PreconditionError("x0 must be nonzero")
        xhat = x / nx
        if abs(ps.q(xhat)) > 1e-8 * qscale:
            raise PreconditionError("x0 does not lie on the parallel set")
        line = 0 if abs(_det2v(d0, xhat)) <= abs(_det2v(d1, xhat)) else 1

    scale = max(abs(inv.tau1), abs(inv.tau2), a1.norm(), a2.norm())
    step = MARCH_FRACTION / scale
    solvers = {1: _ArcSolver(a1, step), 2: _ArcSolver(a2, step)}

    start = x.copy()
    arcs = []
    ratio_first = None
    for rev in range(revolutions):
        for _ in range(2):
            idx = active[line]
            target = 1 - line
            t_cross = solvers[idx].first_crossing(ps.directions[target], x)
            arcs.append(Arc(idx, t_cross, x.copy()))
            mat = a1 if idx == 1 else a2
            x = expm(mat, t_cross).apply(x)
            xhat = x / np.linalg.norm(x)
            if abs(ps.q(xhat)) > 1e-6 * qscale:
                raise NoCrossing("switch point left the parallel set")
            line = target
        if rev == 0:
            ratio_first = float(np.linalg.norm(x) / np.linalg.norm(start))
    return WorstTrajectory(
        arcs=tuple(arcs),
        return_ratio=ratio_first,
        start=start,
        final_point=x,
        final_norm_ratio=float(np.linalg.norm(x) / np.linalg.norm(start)),
        matrices=(a1, a2),
    )


def unstable_direction(a1: Mat2, a2: Mat2):
    """(sigma0, unit direction, positive eigenvalue) of the S2 witness.

    The convex combination at sigma0 has negative determinant, hence one
    real positive eigenvalue; trajectories hugging its eigendirection
    escape to infinity.
    """
    inv = compute_invariants(a1, a2)
    if not inv.gamma < -inv.geo_mean_det:
        raise WrongCase(
            "unstable direction exists only when gamma < -sqrt(det1 det2)")
    s0 = sigma_polys(a1, a2).sigma0
    m = a1 * s0 + a2 * (1.0 - s0)
    es = eigen(m)
    if es.kind != KIND_REAL_DISTINCT:
        raise WrongCase("combination matrix unexpectedly lacks real "
                        "distinct eigenvalues")
    lam = es.eigenvalues[1].real  # eigenvalues ordered ascending
    vec = es.eigenvectors[1]
    if lam <= 0.0:
        raise WrongCase(f"largest eigenvalue not positive: {lam!r}")
    return s0, vec, lam
