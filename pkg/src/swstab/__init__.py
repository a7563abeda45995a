"""Stability analysis of planar two-mode switched linear systems.

Decides, with certificates, whether x' = u A1 x + (1-u) A2 x is stable for
every measurable switching signal u(.) in {0, 1}, given two Hurwitz 2x2
matrices.  The public surface mirrors the internal module split:

- :mod:`.mat2` -- exact 2x2 primitives (exponentials, eigen-structure)
- :mod:`.invariants` -- the coordinate-invariant scalars of the pair
- :mod:`.normal_form` -- reduction to canonical coordinates
- :mod:`.lyapunov` -- quadratic Lyapunov certificates
- :mod:`.worst_traj` -- extremal-trajectory geometry (case S4)
- :mod:`.simulate` -- exact switched simulation and stability probing
- :mod:`.classify` -- the verdict tree
"""

from .classify import ClassifyOptions, Verdict, classify, explain
from .errors import (DegenerateBasis, DeltaNonPositive, DomainError,
                     NoCrossing, NotHurwitz, PreconditionError, SingularA2,
                     SwstabError, TraceZero, WitnessNotFound, WrongCase)
from .invariants import (InvariantSet, big_delta, compute_invariants, gamma,
                         kappa, r_value, switch_times, taus,
                         with_s4_quantities)
from .lyapunov import (QuadraticForm, SigmaPolys, has_quadratic_clf,
                       nonstrict_clf_s3, quadratic_clf_witness, sigma_polys)
from .mat2 import (EigenStructure, Mat2, commutator, det, discriminant,
                   eigen, expm, is_hurwitz, trace)
from .normal_form import NormalFormResult, normalize, verify_normal_form
from .simulate import (ProbeReport, SwitchingSignal, Trajectory,
                       adversarial_greedy, guas_probe, run)
from .worst_traj import (ParallelSet, WorstTrajectory, is_direct,
                         parallel_set, unstable_direction, worst_trajectory)

__version__ = "0.1.0"

__all__ = [
    "ClassifyOptions", "Verdict", "classify", "explain",
    "DegenerateBasis", "DeltaNonPositive", "DomainError", "NoCrossing",
    "NotHurwitz", "PreconditionError", "SingularA2", "SwstabError",
    "TraceZero", "WitnessNotFound", "WrongCase",
    "InvariantSet", "big_delta", "compute_invariants", "gamma", "kappa",
    "r_value", "switch_times", "taus", "with_s4_quantities",
    "QuadraticForm", "SigmaPolys", "has_quadratic_clf", "nonstrict_clf_s3",
    "quadratic_clf_witness", "sigma_polys",
    "EigenStructure", "Mat2", "commutator", "det", "discriminant", "eigen",
    "expm", "is_hurwitz", "trace",
    "NormalFormResult", "normalize", "verify_normal_form",
    "ProbeReport", "SwitchingSignal", "Trajectory", "adversarial_greedy",
    "guas_probe", "run",
    "ParallelSet", "WorstTrajectory", "is_direct", "parallel_set",
    "unstable_direction", "worst_trajectory",
    "__version__",
]
