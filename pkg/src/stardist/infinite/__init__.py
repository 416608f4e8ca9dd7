"""Colouring eventually periodic infinite star-free graphs."""

from importlib import resources

from .colouring import (
    Construction,
    PeriodicColouring,
    check_laws,
    construct,
    construct_colouring,
    corrupt,
)
from .igd import DescriptionError, PeriodicGraphDescription, Truncation, find_star, parse_igd, truncate
from .rays import (
    ConstructionError,
    Ray,
    RayFamily,
    RayFamilyError,
    check_favourites,
    check_k,
    orbit_bound_violations,
    classify_rays,
    edge_support,
    ray_family,
    select_favourites,
    select_k,
)
from .verify import FixedCoreReport, verify_fixed_core

# fixture name -> n used in tests and the acceptance run
FIXTURES = {
    "plain_ray": 3,
    "pendant_triangles": 4,
    "pendant_leaves": 4,
    "two_armed": 3,
    "mixed_arms": 4,
    "triangle_strip": 3,
    "ladder": 4,
    "two_triangle_arms": 4,
    "dirty_prefix": 4,
}


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath("fixtures", f"{name}.igd").read_text()


def load_fixture(name: str) -> PeriodicGraphDescription:
    return parse_igd(fixture_text(name))
