"""Piecewise-analytic Jordan boundaries.

A boundary is a closed, positively oriented chain of arcs (segments,
circular arcs, or user-supplied smooth parametric curves).  This module
builds the chain, detects corners from one-sided tangents, discretizes the
normalized arclength inner product

    (f, g) = (1/l) * sum_i w_i f(t_i) conj(g(t_i))

with composite Gauss-Legendre panels, and answers point-location queries.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    CapacityTooLarge,
    ConfigError,
    DegenerateArc,
    NonClosedChain,
    WrongOrientation,
)

CLOSURE_TOL = 1e-12
CORNER_TOL = 1e-9
ON_BOUNDARY_TOL = 1e-10
DEFAULT_MAX_NODES = 200_000

# samples used where a curve has no closed form (parametric arcs)
_PARAMETRIC_POLYLINE = 4096
_PARAMETRIC_LENGTH_PANELS = 64
_PARAMETRIC_LENGTH_ORDER = 24
_MIN_PARAMETRIC_ORDER = 24
# largest angle swept by one circular-arc piece in the exact winding count
_ARC_PIECE = math.pi / 8


def _unwrap_sweep(start_angle: float, end_angle: float, ccw: bool) -> float:
    if ccw:
        sweep = (end_angle - start_angle) % (2 * math.pi)
    else:
        sweep = -((start_angle - end_angle) % (2 * math.pi))
    if abs(sweep) < CLOSURE_TOL or abs(abs(sweep) - 2 * math.pi) < CLOSURE_TOL:
        # coincident endpoints: a full circle
        sweep = 2 * math.pi if ccw else -2 * math.pi
    return sweep


@dataclass(frozen=True)
class Arc:
    """One analytic piece of the boundary.

    Use the ``segment``, ``circular`` and ``parametric`` constructors.  All
    arcs are parameterized over ``s`` in [0, 1]; for segments and circular
    arcs the parameter is proportional to arclength.
    """

    kind: str
    start: complex
    end: complex
    center: Optional[complex] = None
    ccw: bool = True
    func: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    deriv: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    @classmethod
    def segment(cls, start: complex, end: complex) -> "Arc":
        start, end = complex(start), complex(end)
        if abs(end - start) == 0.0:
            raise DegenerateArc(f"segment from {start} to itself has zero length")
        return cls("segment", start, end)

    @classmethod
    def circular(cls, start: complex, end: complex, center: complex, ccw: bool = True) -> "Arc":
        """Circular arc about ``center``; ``start == end`` gives a full circle."""
        start, end, center = complex(start), complex(end), complex(center)
        r = abs(start - center)
        if r == 0.0:
            raise DegenerateArc("circular arc has zero radius")
        if abs(abs(end - center) - r) > CLOSURE_TOL * max(1.0, r):
            raise ConfigError(
                f"circular arc endpoints are not equidistant from center {center}"
            )
        return cls("circular", start, end, center=center, ccw=bool(ccw))

    @classmethod
    def parametric(
        cls,
        func: Callable[[np.ndarray], np.ndarray],
        deriv: Callable[[np.ndarray], np.ndarray],
    ) -> "Arc":
        """Smooth curve ``s -> func(s)`` on [0, 1] with derivative ``deriv``.

        Both callbacks must accept and return numpy arrays.
        """
        s = np.linspace(0.0, 1.0, 257)
        d = np.asarray(deriv(s), dtype=complex)
        if np.any(np.abs(d) == 0.0) or not np.all(np.isfinite(d)):
            raise DegenerateArc("parametric arc has a vanishing derivative")
        ends = np.asarray(func(np.array([0.0, 1.0])), dtype=complex)
        return cls("parametric", complex(ends[0]), complex(ends[1]), func=func, deriv=deriv)

    # -- geometry ---------------------------------------------------------

    @property
    def radius(self) -> float:
        return abs(self.start - self.center)

    @property
    def start_angle(self) -> float:
        return math.atan2((self.start - self.center).imag, (self.start - self.center).real)

    @property
    def sweep(self) -> float:
        """Signed angle swept by a circular arc."""
        end_angle = math.atan2((self.end - self.center).imag, (self.end - self.center).real)
        return _unwrap_sweep(self.start_angle, end_angle, self.ccw)

    def point(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.kind == "segment":
            return self.start + s * (self.end - self.start)
        if self.kind == "circular":
            return self.center + self.radius * np.exp(1j * (self.start_angle + s * self.sweep))
        return np.asarray(self.func(s), dtype=complex)

    def derivative(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.kind == "segment":
            return np.full(s.shape, self.end - self.start, dtype=complex)
        if self.kind == "circular":
            ang = self.start_angle + s * self.sweep
            return 1j * self.sweep * self.radius * np.exp(1j * ang)
        return np.asarray(self.deriv(s), dtype=complex)

    def tangent(self, s) -> np.ndarray:
        d = self.derivative(s)
        return d / np.abs(d)

    @property
    def length(self) -> float:
        if self.kind == "segment":
            return abs(self.end - self.start)
        if self.kind == "circular":
            return abs(self.sweep) * self.radius
        x, w = _panel_rule(_PARAMETRIC_LENGTH_ORDER, _PARAMETRIC_LENGTH_PANELS)
        return float(np.sum(w * np.abs(self.derivative(x))))

    def reversed(self) -> "Arc":
        if self.kind == "segment":
            return Arc("segment", self.end, self.start)
        if self.kind == "circular":
            return Arc("circular", self.end, self.start, center=self.center, ccw=not self.ccw)
        f, d = self.func, self.deriv
        return Arc(
            "parametric", self.end, self.start,
            func=lambda s: f(1.0 - np.asarray(s)),
            deriv=lambda s: -np.asarray(d(1.0 - np.asarray(s))),
        )

    def polyline(self) -> np.ndarray:
        """Sample points including both endpoints."""
        if self.kind == "segment":
            return np.array([self.start, self.end])
        if self.kind == "circular":
            k = max(2, int(math.ceil(abs(self.sweep) / _ARC_PIECE)))
        else:
            k = _PARAMETRIC_POLYLINE
        return self.point(np.linspace(0.0, 1.0, k + 1))


@dataclass(frozen=True)
class Corner:
    """A junction where the one-sided tangents disagree.

    ``interior_angle`` is the interior opening in units of pi (the opening
    is ``interior_angle * pi`` radians); ``lam`` is the exterior angle in the
    same units, ``2 - interior_angle``.
    """

    location: complex
    interior_angle: float
    junction: int

    @property
    def lam(self) -> float:
        return 2.0 - self.interior_angle


@dataclass(frozen=True)
class BoundaryCurve:
    arcs: tuple
    corners: tuple
    length: float
    # exterior angle (units of pi) at every junction, 1.0 where smooth
    junction_lambdas: tuple

    @property
    def diameter(self) -> float:
        s = np.linspace(0.0, 1.0, 65)
        pts = np.concatenate([a.point(s) for a in self.arcs])
        return float(np.max(np.abs(pts[:, None] - pts[None, :])))


def _junction_lambda(incoming: Arc, outgoing: Arc) -> float:
    d_in = complex(incoming.tangent(1.0))
    d_out = complex(outgoing.tangent(0.0))
    turn = math.atan2((d_out / d_in).imag, (d_out / d_in).real)
    if math.pi - abs(turn) < CORNER_TOL:
        raise ConfigError("boundary has a cusp (exterior angle 0 or 2)")
    return 1.0 + turn / math.pi


def build_boundary(
    arcs: Sequence[Arc],
    *,
    auto_orient: bool = False,
    angle_overrides: Optional[Mapping[int, float]] = None,
) -> BoundaryCurve:
    """Chain ``arcs`` into a closed, positively oriented boundary.

    Parameters
    ----------
    arcs
        Arcs in traversal order; the end of arc ``i`` must meet the start of
        arc ``i + 1`` (cyclically) within 1e-12.
    auto_orient
        Reverse a clockwise chain instead of raising ``WrongOrientation``.
    angle_overrides
        Interior angles (units of pi) keyed by junction index, replacing
        the values computed from tangents.  Junction ``i`` sits at the end
        of arc ``i``.
    """
    arcs = list(arcs)
    if not arcs:
        raise ConfigError("a boundary needs at least one arc")
    for i, arc in enumerate(arcs):
        nxt = arcs[(i + 1) % len(arcs)]
        gap = abs(arc.end - nxt.start)
        if gap > CLOSURE_TOL:
            raise NonClosedChain(f"gap of {gap:.3e} between arc {i} and arc {(i + 1) % len(arcs)}")
        if arc.length <= 0.0:
            raise DegenerateArc(f"arc {i} has zero length")

    if _signed_area(arcs) < 0.0:
        if not auto_orient:
            raise WrongOrientation("boundary is clockwise (winding -1 about its interior)")
        arcs = [a.reversed() for a in reversed(arcs)]

    overrides = dict(angle_overrides or {})
    lambdas = []
    corners = []
    for i, arc in enumerate(arcs):
        lam = _junction_lambda(arc, arcs[(i + 1) % len(arcs)])
        if i in overrides:
            theta = float(overrides[i])
            if not 0.0 < theta < 2.0:
                raise ConfigError(f"interior angle override {theta} outside (0, 2)")
            corners.append(Corner(arc.end, theta, i))
            lambdas.append(2.0 - theta)
            continue
        if abs(lam - 1.0) * math.pi <= CORNER_TOL:
            lambdas.append(1.0)
            continue
        lambdas.append(lam)
        corners.append(Corner(arc.end, 2.0 - lam, i))

    length = float(sum(a.length for a in arcs))
    return BoundaryCurve(tuple(arcs), tuple(corners), length, tuple(lambdas))


def exterior_angles(boundary: BoundaryCurve) -> tuple[list[float], float]:
    """Exterior angles (units of pi) at the corners, and their minimum.

    A smooth boundary has no corners and reports a minimum of 1.
    """
    lams = [c.lam for c in boundary.corners]
    return lams, (min(lams) if lams else 1.0)


def _signed_area(arcs: Sequence[Arc]) -> float:
    pts = np.concatenate([a.polyline()[:-1] for a in arcs])
    return 0.5 * float(np.sum((np.conj(pts) * np.roll(pts, -1)).imag))


def sample_polyline(boundary: BoundaryCurve) -> np.ndarray:
    """Closed polyline through the boundary (first point not repeated)."""
    return np.concatenate([a.polyline()[:-1] for a in boundary.arcs])


# -- quadrature ---------------------------------------------------------------


def _panel_rule(order: int, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, 1] with uniform panels."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _panels_for(arc: Arc, panels_per_arc: int) -> int:
    # curved arcs get extra panels so that oscillation per panel stays bounded
    if arc.kind == "circular":
        return max(panels_per_arc, int(math.ceil(abs(arc.sweep) / (math.pi / 4))))
    if arc.kind == "parametric":
        return max(panels_per_arc, 16)
    return panels_per_arc


def max_nodes() -> int:
    return int(os.environ.get("SZEGO_MAX_NODES", DEFAULT_MAX_NODES))


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    tangents: np.ndarray
    degree_capacity: int
    length: float
    boundary: Optional[BoundaryCurve] = field(default=None, repr=False, compare=False)

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        """Discrete ``(f, g)`` from node values; ``(1, 1) == 1`` exactly."""
        return complex(np.sum(self.weights * f * np.conj(g)) / self.total_weight)

    def norm(self, f: np.ndarray) -> float:
        return math.sqrt(float(np.sum(self.weights * np.abs(f) ** 2) / self.total_weight))

    def centroid(self) -> complex:
        return complex(np.sum(self.weights * self.nodes) / self.total_weight)


def quadrature(boundary: BoundaryCurve, degree_capacity: int, panels_per_arc: int = 4) -> QuadratureRule:
    """Composite Gauss-Legendre rule for the arclength inner product.

    Each panel carries ``degree_capacity + 2`` nodes, so ``f * conj(g)`` is
    integrated exactly on segments for polynomials ``f``, ``g`` of degree at
    most ``degree_capacity``, and spectrally accurately on curved arcs.
    """
    if degree_capacity < 0:
        raise ConfigError("degree_capacity must be nonnegative")
    if panels_per_arc < 1:
        raise ConfigError("panels_per_arc must be at least 1")
    order = degree_capacity + 2
    counts = [_panels_for(a, panels_per_arc) for a in boundary.arcs]
    # parametric speeds are not polynomial; keep enough nodes to resolve them
    orders = [max(order, _MIN_PARAMETRIC_ORDER) if a.kind == "parametric" else order
              for a in boundary.arcs]
    total = sum(o * c for o, c in zip(orders, counts))
    cap = max_nodes()
    if total > cap:
        raise CapacityTooLarge(f"{total} quadrature nodes requested, cap is {cap} (SZEGO_MAX_NODES)")

    nodes, weights, tangents = [], [], []
    for arc, panels, arc_order in zip(boundary.arcs, counts, orders):
        s, w = _panel_rule(arc_order, panels)
        d = arc.derivative(s)
        speed = np.abs(d)
        nodes.append(arc.point(s))
        weights.append(w * speed)
        tangents.append(d / speed)
    return QuadratureRule(
        np.concatenate(nodes),
        np.concatenate(weights),
        np.concatenate(tangents),
        degree_capacity,
        boundary.length,
        boundary,
    )


# -- point location -----------------------------------------------------------


class Location(enum.Enum):
    OUTSIDE = 0
    INSIDE = 1
    ON_BOUNDARY = 2

    def __bool__(self) -> bool:
        return self is Location.INSIDE


def _segment_distance(z: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    t = ((z[..., None] - a) * np.conj(ab)).real / np.abs(ab) ** 2
    t = np.clip(t, 0.0, 1.0)
    return np.min(np.abs(z[..., None] - (a + t * ab)), axis=-1)


def _chunked(func):
    """Apply ``func(boundary, z)`` to flat blocks of ``z`` to bound memory."""

    def wrapper(boundary, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        block = 2048
        parts = [func(boundary, flat[i:i + block]) for i in range(0, flat.size, block)]
        out = np.concatenate(parts) if parts else func(boundary, flat)
        return out.reshape(z.shape)

    wrapper.__doc__ = func.__doc__
    wrapper.__name__ = func.__name__
    return wrapper


@_chunked
def distance_to_boundary(boundary: BoundaryCurve, z) -> np.ndarray:
    """Euclidean distance from each point of ``z`` to the boundary."""
    best = np.full(z.shape, np.inf)
    for arc in boundary.arcs:
        if arc.kind == "circular":
            rel = z - arc.center
            ang = np.angle(rel) - arc.start_angle
            if arc.sweep > 0:
                inside_range = np.mod(ang, 2 * np.pi) <= arc.sweep
            else:
                inside_range = np.mod(-ang, 2 * np.pi) <= -arc.sweep
            d = np.where(
                inside_range,
                np.abs(np.abs(rel) - arc.radius),
                np.minimum(np.abs(z - arc.start), np.abs(z - arc.end)),
            )
        else:
            pts = arc.polyline()
            d = _segment_distance(z, pts[:-1], pts[1:])
        best = np.minimum(best, d)
    return best


@_chunked
def winding_number(boundary: BoundaryCurve, z) -> np.ndarray:
    """Winding number of the boundary about each point of ``z``.

    Segments contribute their exact argument increment; circular arcs are
    split into chords with a 2*pi correction for points in the cut-off
    circular segment, which makes the count exact; parametric arcs use a
    dense polyline.  Points on the boundary give meaningless values.
    """
    total = np.zeros(z.shape)
    for arc in boundary.arcs:
        pts = arc.polyline()
        a, b = pts[:-1], pts[1:]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = (b - z[..., None]) / (a - z[..., None])
        total += np.sum(np.angle(np.nan_to_num(ratio, nan=1.0, posinf=1.0)), axis=-1)
        if arc.kind == "circular":
            inside_circle = np.abs(z - arc.center) < arc.radius
            side_z = ((np.conj(b - a)) * (z[..., None] - a)).imag
            side_c = ((np.conj(b - a)) * (arc.center - a)).imag
            lens = inside_circle[..., None] & (side_z * side_c < 0)
            total += 2 * np.pi * np.sign(arc.sweep) * np.sum(lens, axis=-1)
    return np.rint(total / (2 * np.pi)).astype(int)


def locate(boundary: BoundaryCurve, z) -> np.ndarray:
    """Vectorized ``contains``: integer codes of ``Location`` values."""
    z = np.asarray(z, dtype=complex)
    codes = np.where(winding_number(boundary, z) == 1, Location.INSIDE.value, Location.OUTSIDE.value)
    return np.where(distance_to_boundary(boundary, z) <= ON_BOUNDARY_TOL, Location.ON_BOUNDARY.value, codes)


def contains(boundary: BoundaryCurve, z: complex) -> Location:
    """Locate ``z``; the result is truthy only for interior points."""
    return Location(int(locate(boundary, np.array([complex(z)]))[0]))
