"""Independent brute-force verifiers and structured fixtures."""
from .checks import (
    CheckResult,
    check_diagram,
    check_fixture_expectations,
    check_flower,
    check_planar_counts,
    check_reduction,
    check_solution_masses,
)
from .discs import MIN_FEATURE_PIXELS, Window, disc_arrangement_components, disc_gaps, narrowest_gap
from .fixtures import (
    Fixture,
    build_fixture,
    equator_cycle,
    fixture_cube,
    fixture_equator,
    fixture_flower,
    fixture_quadratic_ellipsoids,
    fixture_random,
    flower_discs,
    lower_hemisphere_directions,
    random_quadrics,
    targets_from_image,
)
from .sampling import (
    AgreementReport,
    SampleAssignment,
    diagram_agreement,
    fibonacci_sphere,
    power_assignment,
    reduction_agreement,
    sample_directions,
    sample_envelope,
    uniform_sphere,
)

__all__ = [
    "MIN_FEATURE_PIXELS",
    "AgreementReport",
    "CheckResult",
    "Fixture",
    "SampleAssignment",
    "Window",
    "build_fixture",
    "check_diagram",
    "check_fixture_expectations",
    "check_flower",
    "check_planar_counts",
    "check_reduction",
    "check_solution_masses",
    "diagram_agreement",
    "disc_arrangement_components",
    "disc_gaps",
    "equator_cycle",
    "fibonacci_sphere",
    "fixture_cube",
    "fixture_equator",
    "fixture_flower",
    "fixture_quadratic_ellipsoids",
    "fixture_random",
    "flower_discs",
    "lower_hemisphere_directions",
    "narrowest_gap",
    "power_assignment",
    "random_quadrics",
    "reduction_agreement",
    "sample_directions",
    "sample_envelope",
    "targets_from_image",
    "uniform_sphere",
]
