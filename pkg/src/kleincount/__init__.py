"""kleincount: enumerate group-invariant circle packings and verify their
counting laws at desk scale."""

from .mobius import (
    INFINITY,
    Circle,
    Motion,
    apply_motion,
    apply_to_point,
    beta,
    busemann,
    circle_from_center_radius,
    curvature,
    hyperbolic_area,
    inversive_product,
    line_from_normal_offset,
    reflect_in,
)
from .packing import (
    STRIP_NAME,
    CircleSet,
    DescartesReport,
    EnumConfig,
    IncompleteEnumerationError,
    PackingSpec,
    descartes_validate,
    enumerate_orbit,
    ideal_triangle_filter,
    period_extend,
    strip_apollonian_spec,
)
from .regions import (
    Annulus,
    ComplementIn,
    Dilated,
    Disk,
    Eroded,
    HalfPlane,
    IdealTriangle,
    IntersectRegion,
    Rect,
    Region,
    TruncatedTriangle,
    UnionRegion,
    dilate,
    erode,
    parse_region,
)
from .counting import (
    CountSeries,
    SpatialIndex,
    circle_meets_region,
    count_curvature,
    count_geodesic,
    count_hyparea,
    cusp_count_inf,
    cusp_count_pm1,
    cusp_outside_count,
    cusp_rotator,
    hemisphere_meets_box,
)
from .analysis import (
    DimensionEstimate,
    EquidistResult,
    PowerFit,
    box_count_dimension,
    equidist_ratio,
    fit_area_law,
    fit_power_law,
    regularity_probe,
)

__version__ = "0.1.0"
