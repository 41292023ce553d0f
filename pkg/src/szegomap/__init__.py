"""Conformal maps onto the unit disk via the Szego kernel.

Typical use::

    from szegomap import domains, quadrature, orthonormalize, expand, map_approximant, eval_map

    boundary, _ = domains.builtin("square")
    basis = orthonormalize(quadrature(boundary, 40), 40)
    J = map_approximant(expand(basis, 0j), 40)
    eval_map(J, 0.5 + 0.25j)
"""

from . import analysis, domains, errors, reference
from .analysis import (
    FourierExpansion,
    RateReport,
    basis_decay_study,
    fit_rate,
    fourier_eval,
    fourier_pointwise_bound_check,
    fourier_project,
    interior_error_study,
    predicted_exponent,
    tail_decay_study,
)
from .boundary import (
    Arc,
    BoundaryCurve,
    Corner,
    Location,
    QuadratureRule,
    build_boundary,
    contains,
    exterior_angles,
    quadrature,
)
from .orthopoly import OrthonormalBasis, eval_basis, orthonormalize
from .reference import ReferenceMap, moebius_eval, poly_image_phi
from .szego import (
    MapApproximant,
    SzegoExpansion,
    eval_map,
    eval_map_derivative,
    expand,
    kernel_partial_sum,
    map_approximant,
    phi_prime_at_base,
    sup_error_bound,
    tail_norm,
)

__version__ = "0.1.0"
