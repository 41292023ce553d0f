"""Builtin test domains and the JSON domain-file format.

Domain files look like::

    {"arcs": [{"kind": "segment", "from": [x, y], "to": [x, y]},
              {"kind": "circular", "from": [x, y], "to": [x, y],
               "center": [x, y], "ccw": true}],
     "oracle": {"kind": "poly", "coeffs": [[0, 0], [1, 0], [0.2, 0]], "w0": [0, 0]}}

``arcs`` may be omitted when a poly oracle is given; the boundary is then
the image of the unit circle.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .boundary import Arc, BoundaryCurve, build_boundary
from .errors import ConfigError
from .reference import ReferenceMap

SQUARE = (-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j)
LSHAPE = (0j, 2 + 0j, 2 + 1j, 1 + 1j, 1 + 2j, 2j)
POLY_IMAGE_COEFFS = (0.0, 1.0, 0.2)
BUILTINS = ("circle", "square", "lshape", "poly-image")


def polygon(vertices) -> BoundaryCurve:
    v = [complex(p) for p in vertices]
    return build_boundary([Arc.segment(v[i], v[(i + 1) % len(v)]) for i in range(len(v))])


def circle() -> BoundaryCurve:
    return build_boundary([Arc.circular(1, 1, 0)])


def builtin(name: str) -> tuple[BoundaryCurve, Optional[ReferenceMap]]:
    """Boundary and (if one exists) exact reference map of a builtin domain.

    The disk's Moebius oracle depends on the base point, so it is not
    returned here.
    """
    if name == "circle":
        return circle(), None
    if name == "square":
        return polygon(SQUARE), None
    if name == "lshape":
        return polygon(LSHAPE), None
    if name == "poly-image":
        ref = ReferenceMap.poly_image(POLY_IMAGE_COEFFS)
        return ref.boundary(), ref
    raise ConfigError(f"unknown builtin domain {name!r}; choose from {', '.join(BUILTINS)}")


def _point(value, what: str) -> complex:
    try:
        x, y = value
        return complex(float(x), float(y))
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be an [x, y] pair, got {value!r}") from None


def parse_arc(spec: dict) -> Arc:
    kind = spec.get("kind")
    start, end = _point(spec.get("from"), "from"), _point(spec.get("to"), "to")
    if kind == "segment":
        return Arc.segment(start, end)
    if kind in ("circular", "circular-arc"):
        return Arc.circular(start, end, _point(spec.get("center"), "center"), bool(spec.get("ccw", True)))
    raise ConfigError(f"unsupported arc kind {kind!r} (files allow segment and circular)")


def parse_oracle(spec: dict) -> ReferenceMap:
    if spec.get("kind") != "poly":
        raise ConfigError(f"unsupported oracle kind {spec.get('kind')!r}")
    coeffs = [_point(c, "coefficient") for c in spec.get("coeffs", [])]
    return ReferenceMap.poly_image(coeffs, _point(spec.get("w0", [0, 0]), "w0"))


def load_domain(source: str, *, auto_orient: bool = False) -> tuple[BoundaryCurve, Optional[ReferenceMap]]:
    """Resolve a builtin name or a JSON domain file."""
    if source in BUILTINS:
        return builtin(source)
    path = Path(source)
    if not path.is_file():
        raise ConfigError(f"{source!r} is neither a builtin domain nor a file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cannot parse {source}: {exc}") from None
    oracle = parse_oracle(data["oracle"]) if "oracle" in data else None
    if "arcs" in data:
        boundary = build_boundary([parse_arc(a) for a in data["arcs"]], auto_orient=auto_orient)
    elif oracle is not None:
        boundary = oracle.boundary()
    else:
        raise ConfigError(f"{source} defines neither arcs nor an oracle")
    return boundary, oracle
