"""Curves and surfaces of E^3 making constant angle with Killing vector fields."""
from .core import (
    CylPoint,
    KillingField,
    angle_between,
    cart_to_cyl,
    cyl_to_cart,
    killing_eval,
    killing_residual,
    vec3,
)
from .curves import (
    Affine,
    ArcCos,
    Circle,
    Constant,
    Custom,
    Line,
    LogSpiral,
    Polyline3,
    arclength_defect,
    curve_vs_circle,
    planar_killing_curve,
    spatial_killing_curve,
)
from .diffgeo import christoffel_cyl, curvatures, fundamental_forms, jet
from .surfaces import (
    ParamSurface,
    catenoid,
    dini_geometry,
    dini_surface,
    halfplane,
    helicoidal_form,
    logspiral_cylinder,
    rotational_surface,
)
from .verify import (
    classify_surface,
    curve_angle_report,
    dini_pde_residuals,
    helix_property_check,
    sphere_property_check,
    surface_angle_report,
)

__version__ = "0.1.0"
