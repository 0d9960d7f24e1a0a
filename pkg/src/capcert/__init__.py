"""Separated spherical point sets and covering lower-bound certificates."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .certify import (
    CoverCertificate,
    MultiplicityReport,
    ball_cover_number,
    exact_direction_cover,
    greedy_direction_cover,
    illumination_lower_bound,
    min_enclosing_ball,
    multiplicity_exact,
    multiplicity_mc,
)
from .construct import (
    BadPairSet,
    Configuration,
    ConstructionParams,
    DeskScaleError,
    construct_separated,
    delete_bad,
    find_bad_pairs,
    sample_candidates,
    target_count,
    verify_separation,
)
from .pipelines import theorem1_pipeline, theorem3_pipeline
from .sphere import (
    DegenerateCenterError,
    EnclosingCap,
    SphericalCap,
    angle_between,
    cap_contains,
    cap_measure,
    chord_from_angle,
    min_enclosing_cap,
    min_enclosing_cap_search,
    ring_geodesic_radius,
    sample_ring,
    sample_uniform,
    unit_vector,
)
from .streams import stream
from .witness import (
    ConeConstraint,
    WitnessSet,
    build_witness,
    check_lemma3_i,
    check_lemma3_ii,
    diameter,
    illuminable_set,
    illumination_cone,
    verify_cone_necessity,
    witness_diameter,
)
