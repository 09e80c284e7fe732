"""Exact counting of rational points of bounded height on lines and ruled
varieties over Q and Q(i).

The package enumerates points exactly (arbitrary-precision integers, no
floating point in any counting path), counts points on lines by two
independent methods whose agreement is the core correctness check, and
verifies quadratic growth bands and growth exponents for scrolls, pencils
and the quadric cone.
"""

from .errors import (
    DegenerateSpanError,
    DimensionMismatchError,
    InsufficientDataError,
    ParseError,
    ResourceLimitError,
    RuledCountError,
    ZeroElementError,
    ZeroVectorError,
)
from .fields import (
    QI,
    QQ,
    FieldContext,
    ProjectivePoint,
    RingElement,
    canonicalize,
    field_from_token,
    format_point,
    height,
    local_norms,
    parse_element,
    parse_point,
    point_from_pairs,
    ring_divmod,
    ring_gcd,
    sup_norm,
    unit_canonicalize,
)
from .lines import (
    DetHeightReport,
    Line,
    LineLattice,
    PluckerVector,
    det_height_report,
    lattice_coefficients,
    lattice_determinant,
    line_lattice,
    plucker_height,
    plucker_vector,
    sqrt_interval,
)
from .enumeration import (
    CountingTable,
    CountQuery,
    CountRow,
    DEFAULT_LIMIT,
    UniformBoundReport,
    UniformBoundRow,
    count_line_bruteforce,
    count_line_lattice,
    count_line_lattice_raw,
    count_pn,
    enumerate_pn,
    iroot,
    line_min_height,
    line_points_bruteforce,
    line_points_lattice,
    random_lines,
    verify_line_count_bound,
)
from .ruled import (
    BaseGrowthReport,
    ComparabilityReport,
    PencilDecomposition,
    QuadraticBandReport,
    QuadricCone,
    Scroll,
    check_base_growth,
    cone_points_bruteforce,
    count_cone,
    count_pn_via_pencil,
    count_scroll_bruteforce,
    count_scroll_fibersum,
    measure_height_comparability,
    scroll_base_of,
    scroll_fiber,
    scroll_points_bruteforce,
    scroll_points_fibersum,
    scroll_psi_height,
    verify_quadratic_band,
)

__version__ = "0.1.0"
