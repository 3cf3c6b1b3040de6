"""Breathing coefficients of porous bodies and the uniaxial swelling model of
monosized disc packings, with an independent tile-geometry check."""

from .errors import (
    BreathkitError,
    ClassificationError,
    ConsistencyError,
    DegeneratePointError,
    DegeneratePolygonError,
    DomainError,
    InputValidationError,
    InsufficientDataError,
    TessellationError,
)
from .oracle import (
    OracleResult,
    TessellationReport,
    TileGeometry,
    TileSpec,
    build_tile,
    disc_coverage_exact,
    disc_coverage_qmc,
    oracle_check,
    polygon_area,
    tessellation_check,
    tile_for_state,
)
from .packing import (
    CHI_MAX,
    MINIMISATION_LIMIT,
    PackingKind,
    PackingScenario,
    PackingState,
    asymptotic_limits,
    body_area_tilde,
    breathing_bs,
    breathing_bs_at_start,
    closed_form_minima,
    hexagonal_points,
    initial_body_area_tilde,
    packing_angle,
    packing_state,
    solid_area_tilde,
    solid_fraction,
    transition_index,
)
from .partition import (
    ABACUS,
    BreathingRegime,
    CoefficientResult,
    Configuration,
    Definition,
    LimitCase,
    Phase,
    Validity,
    ValidityConfig,
    VolumeDelta,
    VolumePartition,
    abacus_lookup,
    classify,
    coefficient,
    coefficients,
    convert,
    delta_partition,
    validity_gate,
)
from .sweep import (
    ExtremaReport,
    Spacing,
    SweepConfig,
    SweepPoint,
    detect_extrema,
    evaluate_point,
    minimisation_limit,
    run_sweep,
    xi_grid,
)

__version__ = "0.1.0"

__all__ = [
    "BreathkitError",
    "ClassificationError",
    "ConsistencyError",
    "DegeneratePointError",
    "DegeneratePolygonError",
    "DomainError",
    "InputValidationError",
    "InsufficientDataError",
    "TessellationError",
    "OracleResult",
    "TessellationReport",
    "TileGeometry",
    "TileSpec",
    "build_tile",
    "disc_coverage_exact",
    "disc_coverage_qmc",
    "oracle_check",
    "polygon_area",
    "tessellation_check",
    "tile_for_state",
    "CHI_MAX",
    "MINIMISATION_LIMIT",
    "PackingKind",
    "PackingScenario",
    "PackingState",
    "asymptotic_limits",
    "body_area_tilde",
    "breathing_bs",
    "breathing_bs_at_start",
    "closed_form_minima",
    "hexagonal_points",
    "initial_body_area_tilde",
    "packing_angle",
    "packing_state",
    "solid_area_tilde",
    "solid_fraction",
    "transition_index",
    "ABACUS",
    "BreathingRegime",
    "CoefficientResult",
    "Configuration",
    "Definition",
    "LimitCase",
    "Phase",
    "Validity",
    "ValidityConfig",
    "VolumeDelta",
    "VolumePartition",
    "abacus_lookup",
    "classify",
    "coefficient",
    "coefficients",
    "convert",
    "delta_partition",
    "validity_gate",
    "ExtremaReport",
    "Spacing",
    "SweepConfig",
    "SweepPoint",
    "detect_extrema",
    "evaluate_point",
    "minimisation_limit",
    "run_sweep",
    "xi_grid",
]
