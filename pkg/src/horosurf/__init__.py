"""Surfaces in hyperbolic 3-space as envelopes of horospheres.

A function rho on a domain of the unit sphere determines a surface Sigma(rho)
in the Poincare ball; adding a constant t to rho moves the surface a distance
t along its normals. The modules:

- ``hyperbolic``: ball-model primitives, horospheres, stereographic charts
- ``fields``: generating functions rho and their second-order jets
- ``envelope``: the envelope map and the curvatures of Sigma(rho)
- ``flow``: parallel flow, focal times, convexity, flow invariants
- ``maps`` / ``weingarten``: Weingarten surfaces from conformal maps
- ``mesh`` / ``verify`` / ``cli``: export, invariant suites, command line
"""

from horosurf.envelope import (
    SurfaceJet,
    boundary_gap,
    envelope_point,
    fundamental_forms,
    normal_vector,
    shape_operator,
    surface_jet,
)
from horosurf.errors import (
    ChartError,
    ConfigError,
    DomainError,
    FocalBlowup,
    HorosurfError,
    RangeError,
)
from horosurf.fields import (
    DomainSpec,
    PlanarDomain,
    RhoField,
    RhoJet,
    area_density_infinity,
    boundary_distance,
    constant,
    eval_jet,
    geodesic_field,
    geodesic_plane,
    horosphere_field,
    k_infinity,
    tabulated,
)
from horosurf.flow import (
    FlowState,
    bonnet_partner,
    convexity_class,
    decompose_flow,
    flow_invariants,
    flow_k,
    flow_KH,
    focal_times,
)
from horosurf.hyperbolic import (
    BallPoint,
    ChartFrame,
    SpherePoint,
    TangentVector,
    chart_at,
    distance,
    geodesic_flow,
    horosphere_shape,
    metric_inner,
    mobius_translate,
)
from horosurf.maps import ConformalMapSpec
from horosurf.weingarten import (
    RatioSample,
    TrajectorySeed,
    curvature_line_trace,
    mu_hyperbolic,
    ratio,
    regularity_classify,
    rho_of_map,
    schwarzian,
    univalence_bounds,
    weingarten_curvatures,
)

__version__ = "0.1.0"
