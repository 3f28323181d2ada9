import pytest

from brepkit import builders, write_parts

FIXTURE_BUILDERS = {
    "box": builders.primitive_box,
    "cylinder": builders.primitive_cylinder_capped,
    "annulus": builders.primitive_annulus_plate,
    "fan": builders.fan_fixture,
    "torus": builders.primitive_torus,
    "sphere": builders.primitive_sphere,
    "spline_patch": builders.bspline_patch,
    "plate_pair": builders.plate_pair,
    "nonmanifold": builders.nonmanifold_bricks,
}


@pytest.fixture(scope="session")
def fixture_parts():
    return {name: make() for name, make in FIXTURE_BUILDERS.items()}


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory, fixture_parts):
    out = tmp_path_factory.mktemp("fixtures")
    for name, part in fixture_parts.items():
        write_parts([part], out / f"{name}.hdf5")
    return out
