"""
Symplectic capacities of centrally symmetric convex bodies.

The package computes the operator norm ``||J||_{K° -> K}``, estimates of the
Ekeland-Hofer-Zehnder capacity and of the linearized cylindrical and
Gromov capacities, and checks the inequalities that relate them:

    1/||J|| <= c_EHZ(K) <= c̄(K) <= c̄_lin(K) <= 4/||J||

Modules: :mod:`~sympcap.symplin` (linear symplectic algebra),
:mod:`~sympcap.bodies` (convex bodies), :mod:`~sympcap.normj`,
:mod:`~sympcap.ehz`, :mod:`~sympcap.lincap` and :mod:`~sympcap.harness`.
"""

from .bodies import (Ellipsoid, HPolytope, LinearImage, PolarBody, Product, SmoothedPolytope,
                     VPolytope, ball, cross_polytope, cube, difference_body, ellipsoid_radii,
                     gauge, hypercube, polar, random_symmetric_polytope, rs_planar_check,
                     section_support, shadow_area, support, vertex_enumerate)
from .ehz import (EhzEstimate, Orbit, ShootConfig, action, ehz_estimate, gradient_gauge,
                  shoot_characteristic, verify_action_period, verify_return_lemma)
from .lincap import (SearchConfig, SearchResult, Witness, build_rotated_cube,
                     check_cross_polytope_inclusion, check_cube_lin_width, check_linf_columns,
                     cylinder_witness, inscribed_ball_radius, lin_gromov_estimate,
                     minimize_shadow, rotated_cube_matrix, rs_product_bound)
from .normj import NormJResult, cyl_upper_bound, ehz_lower_bound, nonsym_bounds, norm_J
from .symplin import (J_matrix, SymplecticMap, apply_J, cayley_symplectic,
                      complete_to_symplectic, is_symplectic, omega)

__version__ = "0.1.0"
