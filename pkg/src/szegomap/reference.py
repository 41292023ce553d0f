"""Exact conformal maps used as oracles.

Two families have closed-form or easily inverted maps onto the disk:

* the unit disk itself, mapped by the Moebius automorphism
  ``(z - zeta) / (1 - conj(zeta) z)``;
* images ``psi(D)`` of the disk under a univalent polynomial ``psi``.  Here
  ``phi = rot * M_{w0}(psi^{-1}(z))`` and the inverse is found by Newton
  iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P

from .boundary import Arc, BoundaryCurve, build_boundary, locate, Location
from .errors import ConfigError, NewtonDiverged, NotUnivalent, OutsideDomain, PoleAtZ

NEWTON_TOL = 1e-13
NEWTON_MAXITER = 60
UNIVALENCE_GRID = 4096
UNIVALENCE_MARGIN = 1e-6
_JORDAN_GRID = 1024


def moebius_eval(zeta: complex, z):
    """Disk automorphism sending ``zeta`` to 0 with positive derivative there."""
    zeta = complex(zeta)
    if not abs(zeta) < 1.0:
        raise ConfigError(f"Moebius base point {zeta} is not in the unit disk")
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(zeta) * z
    if np.any(den == 0.0):
        raise PoleAtZ(f"z = 1/conj(zeta) = {1 / np.conj(zeta)} is the pole")
    return (z - zeta) / den


def _segments_cross(a, b, c, d) -> np.ndarray:
    """Proper intersection test between segments ``ab`` and ``cd`` (broadcast)."""

    def orient(p, q, r):
        return np.sign(((q - p).conjugate() * (r - p)).imag)

    return (orient(a, b, c) * orient(a, b, d) < 0) & (orient(c, d, a) * orient(c, d, b) < 0)


def _is_jordan(pts: np.ndarray) -> bool:
    a, b = pts, np.roll(pts, -1)
    m = len(pts)
    for i in range(m):
        # skip the segment itself and its two neighbours
        j = np.arange(i + 2, min(m, i + m - 1))
        if j.size and np.any(_segments_cross(a[i], b[i], a[j], b[j])):
            return False
    return True


@dataclass(frozen=True)
class ReferenceMap:
    """Exact map of a test domain onto the disk.

    Build instances with ``moebius`` or ``poly_image``.  ``coeffs`` are in
    ascending order: ``psi(w) = sum_k coeffs[k] w^k``.
    """

    kind: str
    zeta: complex
    coeffs: Optional[np.ndarray] = None
    w0: complex = 0j
    rotation: complex = 1 + 0j

    @classmethod
    def moebius(cls, zeta: complex) -> "ReferenceMap":
        zeta = complex(zeta)
        if not abs(zeta) < 1.0:
            raise ConfigError(f"Moebius base point {zeta} is not in the unit disk")
        return cls("moebius", zeta)

    @classmethod
    def poly_image(cls, coeffs, w0: complex = 0j) -> "ReferenceMap":
        coeffs = np.asarray(coeffs, dtype=complex)
        w0 = complex(w0)
        if coeffs.size < 2 or np.all(coeffs[1:] == 0):
            raise ConfigError("psi must be a nonconstant polynomial")
        if not abs(w0) < 1.0:
            raise ConfigError(f"base parameter {w0} is not in the unit disk")
        w = np.exp(2j * np.pi * np.arange(UNIVALENCE_GRID) / UNIVALENCE_GRID)
        dpsi = P.polyval(w, P.polyder(coeffs))
        if np.min(np.abs(dpsi)) <= UNIVALENCE_MARGIN:
            raise NotUnivalent("psi' vanishes on the unit circle")
        turns = np.sum(np.angle(np.roll(dpsi, -1) / dpsi)) / (2 * np.pi)
        if round(turns) != 0:
            raise NotUnivalent("psi' has zeros inside the unit disk")
        if not _is_jordan(P.polyval(w[:: UNIVALENCE_GRID // _JORDAN_GRID], coeffs)):
            raise NotUnivalent("psi(unit circle) is not a Jordan curve")
        d0 = complex(P.polyval(w0, P.polyder(coeffs)))
        zeta = complex(P.polyval(w0, coeffs))
        return cls("poly-image", zeta, coeffs, w0, d0 / abs(d0))

    def psi(self, w):
        return P.polyval(np.asarray(w, dtype=complex), self.coeffs)

    def dpsi(self, w):
        return P.polyval(np.asarray(w, dtype=complex), P.polyder(self.coeffs))

    def boundary(self) -> BoundaryCurve:
        """The image of the unit circle, as a one-arc parametric boundary."""
        if self.kind == "moebius":
            return build_boundary([Arc.circular(1, 1, 0)])
        coeffs = self.coeffs
        dc = P.polyder(coeffs)

        def func(s):
            return P.polyval(np.exp(2j * np.pi * np.asarray(s)), coeffs)

        def deriv(s):
            w = np.exp(2j * np.pi * np.asarray(s))
            return 2j * np.pi * w * P.polyval(w, dc)

        return build_boundary([Arc.parametric(func, deriv)])

    def phi(self, z):
        if self.kind == "moebius":
            return moebius_eval(self.zeta, z)
        return poly_image_phi(self, z)


def _newton(ref: ReferenceMap, z: complex, w: complex) -> Optional[complex]:
    for _ in range(NEWTON_MAXITER):
        d = complex(ref.dpsi(w))
        if d == 0:
            return None
        step = (complex(ref.psi(w)) - z) / d
        w -= step
        if not math.isfinite(abs(w)) or abs(w) > 2.0:
            return None
        if abs(step) <= NEWTON_TOL * max(1.0, abs(w)):
            return w
    return None


def _starts() -> np.ndarray:
    radii = np.array([0.2, 0.45, 0.7, 0.95])
    angles = 2 * np.pi * np.arange(16) / 16
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def invert_psi(ref: ReferenceMap, z: complex) -> complex:
    """Solve ``psi(w) = z`` for ``w`` in the closed disk.

    Newton starts from the best of 64 grid points; on divergence the start
    is pulled toward 0 by repeated halving.
    """
    starts = _starts()
    best = complex(starts[np.argmin(np.abs(ref.psi(starts) - z))])
    for k in range(40):
        w = _newton(ref, z, best * 0.5 ** k)
        if w is not None and abs(w) <= 1.0 + 1e-9:
            return w
    raise NewtonDiverged(f"Newton inversion of psi failed at z = {z}")


def poly_image_phi(ref: ReferenceMap, z):
    """Canonical map of ``psi(D)`` onto the disk, normalized at ``ref.zeta``."""
    if ref.kind != "poly-image":
        raise ConfigError("poly_image_phi needs a poly-image reference map")
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    where = locate(ref.boundary(), flat)
    if np.any(where == Location.OUTSIDE.value):
        raise OutsideDomain("point outside psi(D)")
    w = np.array([invert_psi(ref, complex(zi)) for zi in flat], dtype=complex)
    out = ref.rotation * (w - ref.w0) / (1.0 - np.conj(ref.w0) * w)
    return out.reshape(z.shape)
