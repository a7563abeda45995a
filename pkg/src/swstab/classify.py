"""Stability classification of a planar Hurwitz pair.

The verdict tree runs on two numbers: the pairing invariant gamma against
+- sqrt(det A1 det A2), and tr(A1 A2) against -2 sqrt(det A1 det A2).

  S1  gamma > -root and tr12 > -2 root   -> strict quadratic LF exists
  S2  gamma < -root                      -> unbounded combination
  S3  gamma = -root (tolerance band)     -> uniformly stable, not attractive
  S4  gamma > root and tr12 <= -2 root   -> decided by the return ratio R

The S3 band is tested first so that the measure-zero boundary is not
shadowed by strict floating-point inequalities; within S4 the analytic R
decides and the constructed worst trajectory cross-checks it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import worst_traj
from .errors import NotHurwitz, SwstabError, WitnessNotFound
from .invariants import InvariantSet, compute_invariants, with_s4_quantities
from .lyapunov import nonstrict_clf_s3, quadratic_clf_witness
from .mat2 import Mat2, is_hurwitz
from .normal_form import normalize

CASE_S1 = "S1-quadratic-LF"
CASE_S2 = "S2-unbounded"
CASE_S3 = "S3-marginal"
CASE_S4_GUAS = "S4-GUAS"
CASE_S4_MARGINAL = "S4-marginal"
CASE_S4_UNBOUNDED = "S4-unbounded"

# near-boundary reporting threshold (relative)
NEAR_BOUNDARY = 1e-6


@dataclass(frozen=True)
class ClassifyOptions:
    """Tunable tolerances and certificate toggles.

    ``s3_band``: half-width of the S3 detection band, scaled by
    (1 + det1*det2).  ``r_band``: half-width of the R = 1 marginal band.
    ``certificates``: compute the per-case certificate (the verdict itself
    never needs it).  ``cross_check``: run the numeric worst trajectory
    against the analytic R in case S4.
    """

    s3_band: float = 1e-9
    r_band: float = 1e-9
    certificates: bool = True
    cross_check: bool = True
    witness: bool = True
    cross_check_rel: float = 1e-4


@dataclass(frozen=True)
class Verdict:
    case: str
    invariants: InvariantSet
    certificate: object | None = None
    boundary_flags: tuple = field(default_factory=tuple)
    numeric_r: float | None = None

    @property
    def is_guas(self) -> bool:
        return self.case in (CASE_S1, CASE_S4_GUAS)

    @property
    def cross_check_failed(self) -> bool:
        return any(f[0] == "CrossCheckFailure" for f in self.boundary_flags)


@dataclass(frozen=True)
class UnstableDirection:
    sigma0: float
    direction: tuple
    eigenvalue: float


def _boundary_flags(inv: InvariantSet) -> list:
    root = inv.geo_mean_det
    scale = max(1.0, abs(inv.gamma), root)
    flags = []
    for name, dist in (
            ("near-S3-boundary", abs(inv.gamma + root)),
            ("near-S1/S4-boundary", abs(inv.gamma - root)),
            ("near-tr12-boundary", abs(inv.tr12 + 2.0 * root)),
    ):
        if dist < NEAR_BOUNDARY * scale:
            flags.append((name, dist))
    return flags


def classify(a1: Mat2, a2: Mat2,
             options: ClassifyOptions | None = None) -> Verdict:
    """Decide the stability class and attach the case certificate."""
    opts = options or ClassifyOptions()
    if not is_hurwitz(a1):
        raise NotHurwitz(f"A1 is not Hurwitz: tr={a1.trace!r}, det={a1.det!r}")
    if not is_hurwitz(a2):
        raise NotHurwitz(f"A2 is not Hurwitz: tr={a2.trace!r}, det={a2.det!r}")
    inv = compute_invariants(a1, a2)
    root = inv.geo_mean_det
    flags = _boundary_flags(inv)
    eps_b = opts.s3_band * (1.0 + inv.det1 * inv.det2)

    if abs(inv.gamma + root) <= eps_b:
        cert = None
        if opts.certificates:
            cert = nonstrict_clf_s3(normalize(a1, a2))
        return Verdict(CASE_S3, inv, cert, tuple(flags))

    if inv.gamma < -root:
        cert = None
        if opts.certificates:
            s0, vec, lam = worst_traj.unstable_direction(a1, a2)
            cert = UnstableDirection(s0, (float(vec[0]), float(vec[1])), lam)
        return Verdict(CASE_S2, inv, cert, tuple(flags))

    if inv.tr12 > -2.0 * root:
        cert = None
        if opts.certificates and opts.witness:
            try:
                cert = quadratic_clf_witness(a1, a2)
            except WitnessNotFound as exc:
                flags.append(("WitnessNotFound", str(exc)))
        return Verdict(CASE_S1, inv, cert, tuple(flags))

    # S4: gamma > root is forced here; decide the sub-case by R
    inv = with_s4_quantities(inv)
    r = inv.r_value
    numeric_r = None
    cert = None
    if opts.certificates or opts.cross_check:
        try:
            wt = worst_traj.worst_trajectory(a1, a2)
        except SwstabError as exc:
            flags.append(("WorstTrajectoryFailed", str(exc)))
            wt = None
        if wt is not None:
            numeric_r = wt.return_ratio
            if opts.certificates:
                cert = wt
            if opts.cross_check and abs(numeric_r - r) > opts.cross_check_rel * abs(r):
                flags.append(("CrossCheckFailure",
                              f"analytic R={r!r} vs numeric {numeric_r!r}"))
    if abs(r - 1.0) < opts.r_band:
        case = CASE_S4_MARGINAL
        flags.append(("S4-marginal-band", abs(r - 1.0)))
    elif r < 1.0:
        case = CASE_S4_GUAS
    else:
        case = CASE_S4_UNBOUNDED
    return Verdict(case, inv, cert, tuple(flags), numeric_r)


def explain(v: Verdict) -> dict:
    """Structured report: which inequality fired and boundary margins."""
    inv = v.invariants
    root = inv.geo_mean_det
    report = {
        "case": v.case,
        "gamma": inv.gamma,
        "sqrt_det_product": root,
        "tr12": inv.tr12,
        "margins": {
            "gamma_minus_neg_root": inv.gamma + root,
            "gamma_minus_pos_root": inv.gamma - root,
            "tr12_minus_neg_2root": inv.tr12 + 2.0 * root,
        },
        "flags": [list(f) for f in v.boundary_flags],
    }
    if v.case == CASE_S1:
        report["fired"] = ("gamma > -sqrt(det1 det2) and "
                           "tr(A1 A2) > -2 sqrt(det1 det2)")
        report["certificate"] = "strict quadratic LF" if v.certificate else \
            "analytic only (no witness)"
    elif v.case == CASE_S2:
        report["fired"] = "gamma < -sqrt(det1 det2)"
        if v.certificate is not None:
            report["sigma0"] = v.certificate.sigma0
            report["eigenvalue"] = v.certificate.eigenvalue
    elif v.case == CASE_S3:
        report["fired"] = "|gamma + sqrt(det1 det2)| within the S3 band"
    else:
        report["fired"] = ("gamma > sqrt(det1 det2) and "
                           "tr(A1 A2) <= -2 sqrt(det1 det2)")
        report["r_analytic"] = inv.r_value
        report["r_numeric"] = v.numeric_r
        report["t1"] = inv.t1
        report["t2"] = inv.t2
    return report
