import numpy as np
from numpy.testing import assert_almost_equal as aae
from numpy.testing import assert_equal as ae
import pytest
from .. import data_structures as ds
from .. import utils


def test_integrator_config_defaults():
    "default integrator settings"
    config = ds.integrator_config()
    ae(list(config.keys()), ["rtol", "atol", "h_init", "h_max", "max_steps", "t_max"])
    ae(config["rtol"], 1e-10)
    ae(config["atol"], 1e-12)
    ae(config["max_steps"], 1000000)
    with pytest.raises(ValueError):
        ds.integrator_config(atol=0.0)


def test_section_normalizes_direction():
    "the section direction is normalized"
    section = ds.section((1.0, 2.0), (3.0, 4.0))
    aae(section["direction"], [0.6, 0.8], decimal=15)
    ae(section["base"], [1.0, 2.0])
    with pytest.raises(ValueError):
        ds.section((0.0, 0.0), (0.0, 0.0))


def test_region_grid():
    "grid coordinates and spacing"
    grid = ds.region_grid([-1.0, 1.0, 0.0, 3.0], (5, 4))
    aae(grid["x"], [-1.0, -0.5, 0.0, 0.5, 1.0], decimal=15)
    aae(grid["y"], [0.0, 1.0, 2.0, 3.0], decimal=15)
    aae(ds.region_grid_spacing([-1.0, 1.0, 0.0, 3.0], (5, 4)), (0.5, 1.0), decimal=15)
    with pytest.raises(ValueError):
        ds.region_grid_spacing([-1.0, 1.0, 0.0, 3.0], (1, 4))


def test_circle_polygon_area():
    "area of the inscribed regular polygon"
    n = 64
    polygon = ds.circle_polygon((1.0, -2.0), 2.0, n)
    ae(polygon.shape, (n, 2))
    aae(utils.polygon_area(polygon), 0.5 * n * 4.0 * np.sin(2 * np.pi / n), decimal=12)
    aae(np.hypot(polygon[:, 0] - 1.0, polygon[:, 1] + 2.0), np.full(n, 2.0), decimal=14)
    with pytest.raises(ValueError):
        ds.circle_polygon((0.0, 0.0), 1.0, 2)


def test_rectangle_polygon():
    "rectangle boundary with several edges per side"
    polygon = ds.rectangle_polygon([0.0, 2.0, 0.0, 1.0], n_per_side=4)
    ae(polygon.shape, (16, 2))
    ae(polygon[0], [0.0, 0.0])
    ae(polygon[4], [2.0, 0.0])
    ae(polygon[8], [2.0, 1.0])
    ae(polygon[12], [0.0, 1.0])
    aae(utils.polygon_area(polygon), 2.0, decimal=14)


def test_random_polygons_are_valid():
    "random star polygons are counterclockwise with radii in range"
    rng = np.random.default_rng(7)
    for _ in range(20):
        polygon = ds.random_polygon((0.5, 0.5), 1.0, 12, rng, roughness=0.3)
        r = np.hypot(polygon[:, 0] - 0.5, polygon[:, 1] - 0.5)
        assert np.all((r >= 0.7) & (r <= 1.3))
        assert utils.polygon_area(polygon) > 0
    with pytest.raises(ValueError):
        ds.random_polygon((0.0, 0.0), 1.0, 12, rng, roughness=1.0)
    with pytest.raises(ValueError):
        ds.star_polygon((0.0, 0.0), np.array([1.0, -1.0, 1.0]))


def test_events():
    "event constructors"
    section = ds.section((0.0, 0.0), (1.0, 0.0))
    event = ds.ray_crossing_event(section)
    ae(event["kind"], "RAY_CROSSING")
    assert event["orientation"] is None
    ball = ds.enter_ball_event(np.array([1.0, 2.0]), 0.1)
    ae(ball["center"], (1.0, 2.0))
    box = ds.exit_box_event([-1.0, 1.0, -1.0, 1.0])
    ae(list(box.keys()), ["kind", "region"])
    with pytest.raises(ValueError):
        ds.enter_ball_event((0.0, 0.0), -1.0)
