"""Exact index theory for symplectic block paths.

Layers, bottom up: exact quadratic arithmetic, block paths and their
iterates, index invariants, recurrence event search, graded barcodes,
and closed-orbit classification with the ellipsoid model.
"""

from __future__ import annotations

from .blockpaths import (
    BlockPath,
    Hyperbolic,
    Rotation,
    Shear,
    direct_sum,
    is_admissible,
    iterate,
    rational_rotation_denominators,
    root_of_unity_lcm,
)
from .errors import (
    BoundaryNotSquareZero,
    ChieqUndefined,
    ClassificationUndefined,
    DegenerateIterate,
    EmptyWindow,
    EventMismatch,
    ExactArithmeticError,
    FiltrationViolation,
    HalfIntegerAmbiguity,
    HypothesisViolation,
    NonResonanceFailed,
    NonpositiveMeanIndex,
    NotApplicable,
    ParamTooTight,
    ParseError,
    PrecisionError,
    RationalRatio,
    SpindexError,
    UsageError,
    ZetaMismatch,
)
from .exact import ExactReal, SortKey, exact
from .generate import (
    random_block_path,
    random_ellipsoid,
    random_ellipsoid_deltas,
    random_filtered_complex,
    random_nondegenerate_path,
)
from .indices import (
    IndexBundle,
    beta_invariants,
    cz_index,
    dc_iteration_check,
    index_bundle,
    is_dynamically_convex,
    mean_index,
    mu_pm,
)
from .orbits import (
    ClosedOrbitRecord,
    ComparisonReport,
    LocalHomology,
    MultiplicityReport,
    OrbitClass,
    StaircaseResult,
    Support,
    chieq,
    classify_orbit,
    degree_shift_predict,
    ellipsoid_comparison,
    ellipsoid_system,
    local_homology,
    multiplicity_audit,
    rescale_to_mean_index,
    staircase_barcode,
)
from .persistence import (
    AssignmentReport,
    AuditOptions,
    Bar,
    Barcode,
    BarcodeAuditReport,
    FilteredComplex,
    Generator,
    OrbitHomology,
    barcode_audit,
    barcode_from_filtered_complex,
    beg_end_assignment,
    dim_at,
    rational_between,
    zeta_counts,
)
from .recurrence import (
    EventAudit,
    Orbit,
    OrbitSystem,
    RecurrenceEvent,
    RecurrenceParams,
    derive_params,
    event_for_iterates,
    find_recurrence_events,
    minkowski_solutions,
    torus_returns,
    verify_event,
)

__version__ = "0.1.0"

__all__ = [
    "BlockPath", "Hyperbolic", "Rotation", "Shear", "direct_sum",
    "is_admissible", "iterate", "rational_rotation_denominators",
    "root_of_unity_lcm",
    "SpindexError", "ParseError", "ExactArithmeticError", "PrecisionError",
    "HalfIntegerAmbiguity", "DegenerateIterate", "NonpositiveMeanIndex",
    "EmptyWindow", "ParamTooTight", "BoundaryNotSquareZero",
    "FiltrationViolation", "ZetaMismatch", "ClassificationUndefined",
    "ChieqUndefined", "NotApplicable", "EventMismatch",
    "HypothesisViolation", "RationalRatio", "NonResonanceFailed",
    "UsageError",
    "ExactReal", "SortKey", "exact",
    "random_block_path", "random_ellipsoid", "random_ellipsoid_deltas",
    "random_filtered_complex", "random_nondegenerate_path",
    "IndexBundle", "beta_invariants", "cz_index", "dc_iteration_check",
    "index_bundle", "is_dynamically_convex", "mean_index", "mu_pm",
    "ClosedOrbitRecord", "ComparisonReport", "LocalHomology",
    "MultiplicityReport", "OrbitClass", "StaircaseResult", "Support",
    "chieq", "classify_orbit", "degree_shift_predict",
    "ellipsoid_comparison", "ellipsoid_system", "local_homology",
    "multiplicity_audit", "rescale_to_mean_index", "staircase_barcode",
    "AssignmentReport", "AuditOptions", "Bar", "Barcode",
    "BarcodeAuditReport", "FilteredComplex", "Generator", "OrbitHomology",
    "barcode_audit", "barcode_from_filtered_complex", "beg_end_assignment",
    "dim_at", "rational_between", "zeta_counts",
    "EventAudit", "Orbit", "OrbitSystem", "RecurrenceEvent",
    "RecurrenceParams", "derive_params", "event_for_iterates",
    "find_recurrence_events", "minkowski_solutions", "torus_returns",
    "verify_event",
    "__version__",
]
