"""Polynomials orthonormal under the discrete arclength inner product.

The basis is generated by Arnoldi iteration on multiplication by the
centered variable ``u = (z - c) / r`` acting on node-value vectors, so no
monomial coefficients are ever formed.  Column ``k`` of the Hessenberg
matrix ``H`` holds the recurrence

    u * p_k(z) = sum_{j <= k+1} H[j, k] p_j(z).

Since every subdiagonal entry ``H[k+1, k]`` is a positive norm, each
``p_k`` has a real positive leading coefficient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import QuadratureRule
from .errors import Breakdown, CapacityExceeded, DegreeExceeded

BREAKDOWN_TOL = 1e-14


@dataclass(frozen=True)
class OrthonormalBasis:
    max_degree: int
    hessenberg: np.ndarray
    node_values: np.ndarray
    rule: QuadratureRule = field(repr=False)
    center: complex
    scale: float

    def gram(self) -> np.ndarray:
        """Discrete Gram matrix ``G[j, k] = (p_k, p_j)``."""
        q = self.node_values
        omega = self.rule.weights / self.rule.total_weight
        return q.conj().T @ (omega[:, None] * q)

    def gram_residual(self) -> float:
        g = self.gram()
        return float(np.max(np.abs(g - np.eye(g.shape[0]))))

    def leading_coefficients(self) -> np.ndarray:
        """Leading coefficient of each ``p_k`` in the variable ``z``."""
        sub = np.real(np.diagonal(self.hessenberg, offset=-1))[: self.max_degree]
        lead_u = np.concatenate([[1.0], np.cumprod(1.0 / sub)])
        return lead_u / self.scale ** np.arange(self.max_degree + 1)


def orthonormalize(rule: QuadratureRule, n: int) -> OrthonormalBasis:
    """Build ``p_0, ..., p_n`` on the nodes of ``rule``.

    Each new vector is orthogonalized twice against all previous ones
    (classical Gram-Schmidt, "twice is enough").

    Raises
    ------
    CapacityExceeded
        ``n`` exceeds the rule's degree capacity or the rule has fewer
        than ``2 (n + 1)`` nodes.
    Breakdown
        A new direction has norm below 1e-14.
    """
    if n < 0:
        raise CapacityExceeded("degree must be nonnegative")
    if n > rule.degree_capacity:
        raise CapacityExceeded(f"degree {n} exceeds quadrature capacity {rule.degree_capacity}")
    if rule.size < 2 * (n + 1):
        raise CapacityExceeded(f"{rule.size} nodes cannot support degree {n}")

    omega = rule.weights / rule.total_weight
    center = complex(np.sum(omega * rule.nodes))
    scale = math.sqrt(float(np.sum(omega * np.abs(rule.nodes - center) ** 2)))
    if not scale > BREAKDOWN_TOL:
        raise Breakdown("quadrature nodes coincide; no degree-1 direction")
    u = (rule.nodes - center) / scale

    q = np.zeros((rule.size, n + 1), dtype=complex)
    q[:, 0] = 1.0
    h = np.zeros((n + 2, n + 1), dtype=complex)
    for k in range(n + 1):
        v = u * q[:, k]
        basis = q[:, : k + 1]
        for _ in range(2):
            coeffs = basis.conj().T @ (omega * v)
            v = v - basis @ coeffs
            h[: k + 1, k] += coeffs
        nrm = math.sqrt(float(np.sum(omega * np.abs(v) ** 2)))
        if not nrm >= BREAKDOWN_TOL:
            raise Breakdown(f"Arnoldi breakdown at degree {k + 1} (norm {nrm:.3e})")
        h[k + 1, k] = nrm
        if k < n:
            q[:, k + 1] = v / nrm
    return OrthonormalBasis(n, h, q, rule, center, scale)


def eval_basis(basis: OrthonormalBasis, z, m: int | None = None) -> np.ndarray:
    """Values ``(p_0(z), ..., p_m(z))`` along a new trailing axis.

    Uses forward substitution through the stored recurrence.
    """
    if m is None:
        m = basis.max_degree
    if m < 0 or m > basis.max_degree:
        raise DegreeExceeded(f"degree {m} outside 0..{basis.max_degree}")
    z = np.asarray(z, dtype=complex)
    u = (z - basis.center) / basis.scale
    h = basis.hessenberg
    p = np.empty(z.shape + (m + 1,), dtype=complex)
    p[..., 0] = 1.0
    for k in range(m):
        p[..., k + 1] = (u * p[..., k] - p[..., : k + 1] @ h[: k + 1, k]) / h[k + 1, k]
    return p
