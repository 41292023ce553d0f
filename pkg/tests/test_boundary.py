import json
import math

import numpy as np
import pytest
from scipy import integrate

from szegomap import domains
from szegomap.boundary import (
    Arc,
    Location,
    build_boundary,
    contains,
    distance_to_boundary,
    exterior_angles,
    locate,
    quadrature,
)
from szegomap.errors import (
    CapacityTooLarge,
    ConfigError,
    DegenerateArc,
    NonClosedChain,
    WrongOrientation,
)


def half_disk():
    return build_boundary([Arc.segment(-1, 1), Arc.circular(1, -1, 0, ccw=True)])


def poly_image():
    return domains.builtin("poly-image")[0]


def all_domains():
    return {
        "circle": domains.circle(),
        "square": domains.polygon(domains.SQUARE),
        "lshape": domains.polygon(domains.LSHAPE),
        "half-disk": half_disk(),
        "poly-image": poly_image(),
    }


def test_circle_has_no_corners(circle):
    assert circle.length == pytest.approx(2 * math.pi, rel=1e-15)
    assert circle.corners == ()
    assert exterior_angles(circle) == ([], 1.0)


def test_square_corners(square):
    assert square.length == 8.0
    lams, lam_min = exterior_angles(square)
    assert lams == pytest.approx([1.5] * 4, abs=1e-14)
    assert lam_min == pytest.approx(1.5)


def test_lshape_reentrant_corner(lshape):
    lams, lam_min = exterior_angles(lshape)
    assert lam_min == pytest.approx(0.5, abs=1e-14)
    reentrant = [c for c in lshape.corners if c.lam < 1]
    assert len(reentrant) == 1 and reentrant[0].location == 1 + 1j
    assert reentrant[0].interior_angle == pytest.approx(1.5)


def test_half_disk_corners():
    b = half_disk()
    assert b.length == pytest.approx(2 + math.pi)
    assert [c.lam for c in b.corners] == pytest.approx([1.5, 1.5])


def test_smooth_junction_is_not_a_corner():
    # circle split into two semicircles: both junctions are smooth
    b = build_boundary([Arc.circular(1, -1, 0), Arc.circular(-1, 1, 0)])
    assert b.corners == ()
    assert b.junction_lambdas == pytest.approx((1.0, 1.0))


def test_angle_override(square):
    b = build_boundary(square.arcs, angle_overrides={0: 0.25})
    assert b.corners[0].interior_angle == 0.25
    assert exterior_angles(b)[1] == pytest.approx(1.5)
    assert b.corners[0].lam == pytest.approx(1.75)


def test_non_closed_chain():
    with pytest.raises(NonClosedChain):
        build_boundary([Arc.segment(0, 1), Arc.segment(1, 1j)])


def test_degenerate_arc():
    with pytest.raises(DegenerateArc):
        Arc.segment(1 + 1j, 1 + 1j)
    with pytest.raises(DegenerateArc):
        Arc.parametric(lambda s: np.zeros_like(s, dtype=complex), lambda s: np.zeros_like(s, dtype=complex))


def test_orientation(square):
    reversed_arcs = [a.reversed() for a in reversed(square.arcs)]
    with pytest.raises(WrongOrientation):
        build_boundary(reversed_arcs)
    fixed = build_boundary(reversed_arcs, auto_orient=True)
    assert fixed.length == square.length
    assert exterior_angles(fixed)[0] == pytest.approx([1.5] * 4)


def test_cusp_rejected():
    with pytest.raises(ConfigError):
        build_boundary([Arc.segment(0, 1), Arc.segment(1, 0.5), Arc.segment(0.5, 0)])


@pytest.mark.parametrize("name", list(all_domains()))
def test_weights_positive_and_sum_to_length(name):
    b = all_domains()[name]
    for cap in (0, 5, 30):
        rule = quadrature(b, cap)
        assert np.all(rule.weights > 0)
        assert rule.total_weight == pytest.approx(b.length, rel=1e-12)
        assert rule.inner(np.ones(rule.size), np.ones(rule.size)) == 1.0
        assert np.allclose(np.abs(rule.tangents), 1.0, atol=1e-15)


def test_circle_monomials_orthonormal(circle):
    rule = quadrature(circle, 40)
    t = rule.nodes
    v = t[:, None] ** np.arange(41)
    gram = v.conj().T @ (rule.weights[:, None] * v) / rule.total_weight
    assert np.max(np.abs(gram - np.eye(41))) < 1e-12
    assert rule.inner(t ** 2, t ** 2) == pytest.approx(1.0, abs=1e-13)


def test_square_inner_products(square):
    rule = quadrature(square, 4)
    t = rule.nodes
    assert abs(rule.inner(t, t) - 4 / 3) < 1e-13
    assert abs(rule.inner(t, np.ones_like(t))) < 1e-13


def test_half_disk_against_adaptive_quadrature():
    rule = quadrature(half_disk(), 6)
    t = rule.nodes
    # |z|^4 over the diameter plus the semicircle
    exact = (2 * integrate.quad(lambda x: x ** 4, 0, 1)[0] + math.pi) / (2 + math.pi)
    assert rule.inner(t ** 2, t ** 2) == pytest.approx(exact, rel=1e-13)


@pytest.mark.parametrize("name", list(all_domains()))
def test_panel_doubling_changes_little(name):
    b = all_domains()[name]
    cap = 20
    grams = []
    for panels in (4, 8):
        rule = quadrature(b, cap, panels)
        v = rule.nodes[:, None] ** np.arange(cap + 1)
        grams.append(v.conj().T @ (rule.weights[:, None] * v) / rule.total_weight)
    # monomial Gram entries grow like diam^(j+k); compare on the normalized scale
    scale = np.sqrt(np.outer(np.diag(grams[1]).real, np.diag(grams[1]).real))
    assert np.max(np.abs(grams[0] - grams[1]) / scale) < 1e-10


def test_capacity_cap(circle, monkeypatch):
    monkeypatch.setenv("SZEGO_MAX_NODES", "100")
    with pytest.raises(CapacityTooLarge):
        quadrature(circle, 40)


def test_contains_examples(circle, square):
    assert contains(circle, 0) is Location.INSIDE
    assert contains(circle, 2) is Location.OUTSIDE
    assert contains(square, 1 + 1j) is Location.ON_BOUNDARY
    assert contains(circle, 1j) is Location.ON_BOUNDARY
    assert contains(circle, 0)
    assert not contains(square, 1 + 1j)


def _ray_cast(poly, z):
    """Even-odd rule with a horizontal ray; independent of the winding code."""
    a, b = poly, np.roll(poly, -1)
    inside = np.zeros(z.shape, dtype=bool)
    for p, q in zip(a, b):
        straddle = (p.imag > z.imag) != (q.imag > z.imag)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = p.real + (z.imag - p.imag) * (q.real - p.real) / (q.imag - p.imag)
        inside ^= straddle & (z.real < x)
    return inside


@pytest.mark.parametrize("name", list(all_domains()))
def test_contains_matches_ray_casting(name, rng):
    b = all_domains()[name]
    poly = np.concatenate([a.point(np.linspace(0, 1, 4001)[:-1]) for a in b.arcs])
    lo, hi = poly.real.min() - 0.3, poly.real.max() + 0.3
    bo, to = poly.imag.min() - 0.3, poly.imag.max() + 0.3
    z = rng.uniform(lo, hi, 1000) + 1j * rng.uniform(bo, to, 1000)
    # stay clear of the sampled polyline's chord error
    z = z[distance_to_boundary(b, z) > 1e-5]
    got = locate(b, z) == Location.INSIDE.value
    assert np.array_equal(got, _ray_cast(poly, z))


def test_domain_file(tmp_path):
    spec = {"arcs": [
        {"kind": "segment", "from": [-1, 0], "to": [1, 0]},
        {"kind": "circular", "from": [1, 0], "to": [-1, 0], "center": [0, 0], "ccw": True},
    ]}
    path = tmp_path / "half.json"
    path.write_text(json.dumps(spec))
    b, oracle = domains.load_domain(str(path))
    assert oracle is None
    assert b.length == pytest.approx(2 + math.pi)
    assert len(b.corners) == 2


def test_domain_file_with_oracle(tmp_path):
    path = tmp_path / "poly.json"
    path.write_text(json.dumps({"oracle": {"kind": "poly", "coeffs": [[0, 0], [1, 0], [0.2, 0]], "w0": [0, 0]}}))
    b, oracle = domains.load_domain(str(path))
    assert oracle.kind == "poly-image"
    assert b.corners == ()
    assert contains(b, 0.55)


def test_domain_file_rejects_parametric(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"arcs": [{"kind": "parametric", "from": [0, 0], "to": [0, 0]}]}))
    with pytest.raises(ConfigError):
        domains.load_domain(str(path))
