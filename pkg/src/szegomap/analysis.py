"""Convergence-rate studies and Fourier expansions in the basis ``p_k``.

Corner domains have no closed-form map in this package, so their studies
measure self-convergence against a high-degree reference ``N_ref``.  The
predicted exponents come from the smallest exterior angle ``lam * pi``:

* boundary / kernel tail: ``-lam / (4 - 2 lam)``
* compact interior subsets: ``-lam / (2 - lam)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .boundary import contains, distance_to_boundary, exterior_angles
from .errors import (
    AllZero,
    BadRange,
    LambdaOutOfRange,
    LengthMismatch,
    NonpositiveError,
    ProbeTooCloseToBoundary,
    TooFewPoints,
)
from .orthopoly import OrthonormalBasis, eval_basis
from .szego import SzegoExpansion, eval_map, map_approximant, tail_norm

MIN_FIT_POINTS = 3
DEFAULT_N_MIN = 8
ZERO_TOL = 1e-14
PROBE_CLEARANCE = 0.1

REGIMES = ("global-tail", "interior", "basis-decay", "sup-bound")


def predicted_exponent(lam: float, regime: str) -> float:
    if not 0.0 < lam < 2.0:
        raise LambdaOutOfRange(f"exterior angle {lam} outside (0, 2)")
    if regime in ("global", "global-tail", "basis-decay", "sup-bound"):
        return -lam / (4.0 - 2.0 * lam)
    if regime == "interior":
        return -lam / (2.0 - lam)
    raise ValueError(f"unknown regime {regime!r}")


@dataclass
class RateReport:
    points: list
    fitted_slope: float
    intercept: float
    r_squared: float
    predicted_slope: float = float("nan")
    regime: str = "global-tail"
    lambda_min: float = float("nan")
    n_ref: Optional[int] = None
    dropped: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "regime": self.regime,
            "lambda_min": self.lambda_min,
            "predicted_slope": self.predicted_slope,
            "fitted_slope": self.fitted_slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": [[int(n), float(e)] for n, e in self.points],
        }
        if self.n_ref is not None:
            out["n_ref"] = self.n_ref
        if self.dropped:
            out["dropped"] = self.dropped
        if self.note:
            out["note"] = self.note
        return out


def fit_rate(points: Sequence[tuple], n_min: int = DEFAULT_N_MIN) -> RateReport:
    """Least-squares line through ``(log n, log e)`` for ``n >= n_min``."""
    pts = sorted((int(n), float(e)) for n, e in points if n >= n_min)
    if len(pts) < MIN_FIT_POINTS:
        raise TooFewPoints(f"{len(pts)} points with n >= {n_min}; need {MIN_FIT_POINTS}")
    n = np.array([p[0] for p in pts], dtype=float)
    e = np.array([p[1] for p in pts])
    if np.any(e <= 0) or not np.all(np.isfinite(e)):
        raise NonpositiveError("errors must be positive and finite for a log-log fit")
    if np.any(np.diff(n) <= 0):
        raise ValueError("degrees must be strictly increasing")
    x, y = np.log(n), np.log(e)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return RateReport(pts, float(slope), float(intercept), min(r2, 1.0))


def _lambda_min(exp: SzegoExpansion) -> float:
    boundary = exp.basis.rule.boundary
    return exterior_angles(boundary)[1] if boundary is not None else 1.0


def _finish(report: RateReport, exp, regime, n_ref=None, dropped=0, note="") -> RateReport:
    lam = _lambda_min(exp)
    report.regime = regime
    report.lambda_min = lam
    report.predicted_slope = predicted_exponent(lam, regime)
    report.n_ref = n_ref
    report.dropped = dropped
    report.note = note
    return report


def tail_decay_study(exp: SzegoExpansion, degrees: Sequence[int], N_ref: int,
                     n_min: int = DEFAULT_N_MIN) -> RateReport:
    """Fit the decay of ``tail_norm(n, N_ref)`` over ``degrees``."""
    if len(degrees) and max(degrees) >= N_ref:
        raise BadRange(f"largest degree {max(degrees)} must be below N_ref={N_ref}")
    pts = [(n, tail_norm(exp, n, N_ref)) for n in degrees]
    return _finish(fit_rate(pts, n_min), exp, "global-tail", N_ref,
                   note="reference-truncated tail against degree N_ref")


def basis_decay_study(exp: SzegoExpansion, degrees: Sequence[int],
                      n_min: int = DEFAULT_N_MIN) -> RateReport:
    """Fit ``|p_n(zeta)|`` over ``degrees``; values below 1e-14 are dropped."""
    for n in degrees:
        exp.check_degree(n)
    vals = [(n, float(abs(exp.zeta_values[n]))) for n in degrees]
    kept = [(n, v) for n, v in vals if v >= ZERO_TOL]
    if not kept:
        raise AllZero("every sampled |p_n(zeta)| vanishes")
    return _finish(fit_rate(kept, n_min), exp, "basis-decay", dropped=len(vals) - len(kept),
                   note="one-sided check: the predicted slope is an upper bound")


def check_probes(exp: SzegoExpansion, probes) -> np.ndarray:
    """Reject probes outside the domain or closer than 0.1 diameters to it."""
    probes = np.atleast_1d(np.asarray(probes, dtype=complex))
    boundary = exp.basis.rule.boundary
    if boundary is None:
        return probes
    clearance = PROBE_CLEARANCE * boundary.diameter
    for z in probes:
        if not contains(boundary, z):
            raise ProbeTooCloseToBoundary(f"probe {z} is not inside the domain")
    dist = distance_to_boundary(boundary, probes)
    if np.any(dist < clearance):
        bad = probes[np.argmin(dist)]
        raise ProbeTooCloseToBoundary(f"probe {bad} is within {clearance:.3g} of the boundary")
    return probes


def interior_errors(exp: SzegoExpansion, probes, degrees: Sequence[int], N_ref: int,
                    reference: Optional[Callable] = None) -> list:
    """``max_probes |J_{2n+1} - J_ref|`` per degree.

    ``reference`` (a callable on arrays) replaces the self-convergence
    reference ``J_{2 N_ref + 1}`` when an exact map is known.
    """
    probes = check_probes(exp, probes)
    if reference is None:
        exp.check_degree(N_ref)
        if len(degrees) and max(degrees) >= N_ref:
            raise BadRange(f"largest degree {max(degrees)} must be below N_ref={N_ref}")
        target = eval_map(map_approximant(exp, N_ref), probes)
    else:
        target = np.asarray(reference(probes), dtype=complex)
    return [(n, float(np.max(np.abs(eval_map(map_approximant(exp, n), probes) - target))))
            for n in degrees]


def interior_error_study(exp: SzegoExpansion, probes, degrees: Sequence[int], N_ref: int,
                         reference: Optional[Callable] = None,
                         n_min: int = DEFAULT_N_MIN) -> RateReport:
    pts = interior_errors(exp, probes, degrees, N_ref, reference)
    note = "self-convergence against degree N_ref" if reference is None else "exact reference map"
    return _finish(fit_rate(pts, n_min), exp, "interior", N_ref if reference is None else None,
                   note=note)


# -- Fourier series -----------------------------------------------------------


@dataclass(frozen=True)
class FourierExpansion:
    basis: OrthonormalBasis = field(repr=False)
    coefficients: np.ndarray
    f_node_values: np.ndarray = field(repr=False)

    @property
    def max_degree(self) -> int:
        return self.coefficients.size - 1

    def norm_squared(self) -> float:
        """Discrete ``||f||_2^2`` from the node samples."""
        rule = self.basis.rule
        return float(np.sum(rule.weights * np.abs(self.f_node_values) ** 2) / rule.total_weight)


def fourier_project(basis: OrthonormalBasis, f_values, n: Optional[int] = None) -> FourierExpansion:
    """Coefficients ``a_k = (f, p_k)`` for ``k <= n`` from samples at the nodes."""
    f_values = np.asarray(f_values, dtype=complex)
    if f_values.shape != (basis.rule.size,):
        raise LengthMismatch(f"{f_values.size} samples for {basis.rule.size} nodes")
    if n is None:
        n = basis.max_degree
    if n < 0 or n > basis.max_degree:
        raise BadRange(f"degree {n} outside 0..{basis.max_degree}")
    rule = basis.rule
    omega = rule.weights / rule.total_weight
    q = basis.node_values[:, : n + 1]
    return FourierExpansion(basis, q.conj().T @ (omega * f_values), f_values)


def fourier_eval(fe: FourierExpansion, z, n: int):
    if n < 0 or n > fe.max_degree:
        raise BadRange(f"degree {n} outside 0..{fe.max_degree}")
    return eval_basis(fe.basis, z, n) @ fe.coefficients[: n + 1]


def fourier_pointwise_bound_check(fe: FourierExpansion, z: complex, n: int, N_ref: int) -> dict:
    """Finite Cauchy-Schwarz check of the pointwise Fourier error at ``z``.

    ``lhs = |sum_{k=n+1}^{N} a_k p_k(z)|`` (summed directly, equal to the
    difference of the two partial sums) and ``rhs`` is the product of the
    tail norms of ``p_k(z)`` and ``a_k``.
    """
    if not 0 <= n < N_ref:
        raise BadRange(f"need 0 <= n < N_ref, got n={n}, N_ref={N_ref}")
    if N_ref > fe.max_degree:
        raise BadRange(f"N_ref={N_ref} exceeds the {fe.max_degree} stored coefficients")
    p = eval_basis(fe.basis, complex(z), N_ref)[n + 1 :]
    a = fe.coefficients[n + 1 : N_ref + 1]
    lhs = float(abs(np.sum(a * p)))
    rhs = math.sqrt(float(np.sum(np.abs(p) ** 2))) * math.sqrt(float(np.sum(np.abs(a) ** 2)))
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs * (1 + 1e-10)}
