"""Szego kernel partial sums and the polynomial map approximants.

With ``S_n(z) = sum_{k<=n} conj(p_k(zeta)) p_k(z)`` and
``E_n = S_n(zeta)``, the approximant of the canonical map is

    J_{2n+1}(z) = (2 pi / l) / E_n * integral_zeta^z S_n(t)^2 dt,

evaluated by Gauss-Legendre on the segment ``[zeta, z]``; the integrand is
a polynomial of degree 2n, so ``n + 2`` points are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import contains
from .errors import BadRange, DegreeExceeded, OutsideDomain
from .orthopoly import OrthonormalBasis, eval_basis


@dataclass(frozen=True)
class SzegoExpansion:
    basis: OrthonormalBasis = field(repr=False)
    zeta: complex
    zeta_values: np.ndarray = field(repr=False)
    partial_energy: np.ndarray = field(repr=False)

    @property
    def length(self) -> float:
        return self.basis.rule.length

    @property
    def max_degree(self) -> int:
        return self.basis.max_degree

    def check_degree(self, n: int) -> None:
        if n < 0 or n > self.max_degree:
            raise DegreeExceeded(f"degree {n} outside 0..{self.max_degree}")


def expand(basis: OrthonormalBasis, zeta: complex | None = None) -> SzegoExpansion:
    """Fix the base point ``zeta`` (default: node centroid) and cache ``p_k(zeta)``."""
    if zeta is None:
        zeta = basis.rule.centroid()
    zeta = complex(zeta)
    boundary = basis.rule.boundary
    if boundary is not None and not contains(boundary, zeta):
        raise OutsideDomain(f"base point {zeta} is not inside the domain")
    values = eval_basis(basis, zeta)
    energy = np.cumsum(np.abs(values) ** 2)
    return SzegoExpansion(basis, zeta, values, energy)


def kernel_partial_sum(exp: SzegoExpansion, z, n: int) -> np.ndarray:
    """``S_n(z, zeta)``; vectorized over ``z``."""
    exp.check_degree(n)
    p = eval_basis(exp.basis, z, n)
    return p @ np.conj(exp.zeta_values[: n + 1])


def phi_prime_at_base(exp: SzegoExpansion, n: int) -> float:
    exp.check_degree(n)
    return 2 * math.pi / exp.length * float(exp.partial_energy[n])


@dataclass(frozen=True)
class MapApproximant:
    expansion: SzegoExpansion = field(repr=False)
    n: int
    normalizer: float

    @property
    def zeta(self) -> complex:
        return self.expansion.zeta

    @property
    def degree(self) -> int:
        return 2 * self.n + 1


def map_approximant(exp: SzegoExpansion, n: int) -> MapApproximant:
    exp.check_degree(n)
    return MapApproximant(exp, n, exp.length / (2 * math.pi) * float(exp.partial_energy[n]))


def eval_q(J: MapApproximant, z) -> np.ndarray:
    """``Q_n(z)``, the normalized kernel partial sum with ``Q_n^2 = J'``."""
    return kernel_partial_sum(J.expansion, z, J.n) / math.sqrt(J.normalizer)


def eval_map_derivative(J: MapApproximant, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    out = eval_q(J, z) ** 2
    # at the base point the derivative is (2 pi / l) E_n by definition
    return np.where(z == J.zeta, phi_prime_at_base(J.expansion, J.n), out)


def eval_map(J: MapApproximant, z) -> np.ndarray:
    """``J_{2n+1}(z)``; vectorized over ``z``, exactly 0 at ``zeta``."""
    z = np.asarray(z, dtype=complex)
    x, w = np.polynomial.legendre.leggauss(J.n + 2)
    half = 0.5 * (z - J.zeta)
    t = J.zeta + half[..., None] * (1.0 + x)
    return half * (eval_q(J, t) ** 2 @ w)


def tail_norm(exp: SzegoExpansion, n: int, N: int) -> float:
    """``sqrt(sum_{k=n+1}^{N} |p_k(zeta)|^2)``.

    Summed directly rather than as ``E_N - E_n`` to avoid cancellation.
    """
    if n >= N:
        raise BadRange(f"need n < N, got n={n}, N={N}")
    exp.check_degree(N)
    exp.check_degree(n)
    return math.sqrt(float(np.sum(np.abs(exp.zeta_values[n + 1 : N + 1]) ** 2)))


def sup_error_bound(exp: SzegoExpansion, n: int, N: int) -> float:
    """Reference-truncated sup-norm bound ``8 pi * tail_norm(n, N)``.

    The true bound uses the infinite tail; any finite ``N`` under-reports it.
    """
    return 8 * math.pi * tail_norm(exp, n, N)


def default_reference_degree(n: int) -> int:
    return max(2 * n, n + 16)
