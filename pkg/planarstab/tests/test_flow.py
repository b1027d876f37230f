import numpy as np
from numpy.testing import assert_almost_equal as aae
from numpy.testing import assert_equal as ae
import pytest
from .. import flow, utils
from .. import data_structures as ds
from .. import field as fld

ROTATION = fld.builtin("linear_rotation")
CUBIC = fld.builtin("cubic_damped")
BUMP = fld.builtin("bump_annulus")
TIGHT = ds.integrator_config(rtol=1e-10, atol=1e-10)


##### integrate


def test_rotation_full_period():
    "a full turn of the rotation returns to the start"
    trajectory = flow.integrate(ROTATION, (1.0, 0.0), 2 * np.pi, config=TIGHT)
    ae(trajectory["status"], "COMPLETED")
    aae(trajectory["states"][-1], [1.0, 0.0], decimal=8)
    aae(trajectory["t"][-1], 2 * np.pi, decimal=12)
    assert np.all(np.diff(trajectory["t"]) > 0)
    ae(len(trajectory["dense"]), trajectory["n_steps"])


def test_cubic_decays():
    "the damped cubic orbit from (2, 0) decays with decreasing energy"
    trajectory = flow.integrate(CUBIC, (2.0, 0.0), 200.0)
    states = trajectory["states"]
    assert np.hypot(*states[-1]) < 0.1
    energy = 0.5 * np.sum(states**2, axis=1)
    assert np.all(np.diff(energy) <= 1e-9)


def test_bump_orbit_falls_towards_unit_circle():
    "outside the unit circle the radius decreases but stays above one"
    trajectory = flow.integrate(BUMP, (2.0, 0.0), 50.0)
    radius = np.hypot(trajectory["states"][:, 0], trajectory["states"][:, 1])
    assert 1.0 < radius[-1] < 2.0
    assert np.all(np.diff(radius) <= 1e-12)


def test_backward_rotation():
    "backward integration of the rotation turns clockwise"
    trajectory = flow.integrate(ROTATION, (1.0, 0.0), np.pi / 2, config=TIGHT, backward=True)
    aae(trajectory["states"][-1], [0.0, -1.0], decimal=8)
    assert trajectory["backward"] is True


def test_blowup_and_step_limit():
    "orbits of x' = x^2 blow up and tiny step budgets run out"
    field = fld.parse_field("P = x^2 ; Q = 0")
    trajectory = flow.integrate(field, (1.0, 0.0), 2.0)
    ae(trajectory["status"], "BLOWUP")
    config = ds.integrator_config(max_steps=5)
    trajectory = flow.integrate(ROTATION, (1.0, 0.0), 10.0, config=config)
    ae(trajectory["status"], "STEP_LIMIT")
    ae(trajectory["n_steps"], 5)


def test_integrate_invalid():
    "check if invalid inputs raise errors"
    with pytest.raises(ValueError):
        flow.integrate(ROTATION, (1.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        flow.integrate(ROTATION, (1.0, 0.0, 0.0), 1.0)
    with pytest.raises(ValueError):
        flow.integrate(ROTATION, (1.0, 0.0), 1.0, config={"rtol": 1e-8})


@pytest.mark.parametrize(
    "field,x0,t_end",
    [(ROTATION, (1.0, 0.0), 10.0), (CUBIC, (2.0, 0.0), 10.0), (BUMP, (2.0, 0.0), 10.0)],
)
def test_tolerance_convergence(field, x0, t_end):
    "a tenfold tolerance reduction reduces the endpoint error at least fourfold"
    reference = flow.integrate(
        field, x0, t_end, config=ds.integrator_config(rtol=1e-13, atol=1e-13)
    )["states"][-1]
    errors = []
    for tol in [1e-6, 1e-7]:
        config = ds.integrator_config(rtol=tol, atol=tol, h_max=10.0)
        final = flow.integrate(field, x0, t_end, config=config)["states"][-1]
        errors.append(np.hypot(*(final - reference)))
    assert errors[1] * 4 <= errors[0]


def test_dense_sampling():
    "dense output samples lie on the unit circle for the rotation"
    trajectory = flow.integrate(ROTATION, (1.0, 0.0), 3.0, config=TIGHT)
    times, states = flow.sample_trajectory(trajectory, 31)
    ae(times.size, 31)
    aae(times[-1], 3.0, decimal=12)
    aae(states[:, 0], np.cos(times), decimal=8)
    aae(states[:, 1], np.sin(times), decimal=8)


##### events


def test_ray_crossing_after_full_turn():
    "the positive x axis is crossed again after 2 pi"
    section = ds.section((0.0, 0.0), (1.0, 0.0))
    result = flow.integrate_until_event(
        ROTATION, (1.0, 0.0), ds.ray_crossing_event(section)
    )
    ae(result["status"], "EVENT")
    aae(result["time"], 2 * np.pi, decimal=8)
    aae(result["state"], (1.0, 0.0), decimal=8)
    assert abs(result["state"][1]) < 1e-9


def test_ray_crossing_ignores_opposite_ray():
    "crossings of the opposite ray or with the wrong orientation do not count"
    section = ds.section((0.0, 0.0), (1.0, 0.0))
    config = ds.integrator_config(t_max=20.0)
    wrong = ds.ray_crossing_event(section, orientation=-1)
    result = flow.integrate_until_event(ROTATION, (0.0, 1.0), wrong, config=config)
    ae(result["status"], "NOT_FOUND")
    right = ds.ray_crossing_event(section, orientation=1)
    result = flow.integrate_until_event(ROTATION, (0.0, 1.0), right, config=config)
    aae(result["time"], 1.5 * np.pi, decimal=8)
    aae(result["state"], (1.0, 0.0), decimal=8)


def test_enter_ball():
    "the damped cubic orbit enters the ball of radius 0.1"
    event = ds.enter_ball_event((0.0, 0.0), 0.1)
    result = flow.integrate_until_event(CUBIC, (2.0, 0.0), event)
    ae(result["status"], "EVENT")
    assert 0 < result["time"] < 200
    aae(np.hypot(*result["state"]), 0.1, decimal=9)
    trajectory = flow.integrate(CUBIC, (2.0, 0.0), result["time"])
    aae(trajectory["states"][-1], result["state"], decimal=6)


def test_event_already_satisfied():
    "starting inside the ball is an immediate event"
    event = ds.enter_ball_event((0.0, 0.0), 1.0)
    result = flow.integrate_until_event(CUBIC, (0.5, 0.0), event)
    ae(result["time"], 0.0)
    ae(result["n_steps"], 0)


def test_exit_box_not_found_for_cycle():
    "a cycle inside the box never leaves it"
    event = ds.exit_box_event([-2.0, 2.0, -2.0, 2.0])
    config = ds.integrator_config(t_max=100.0)
    result = flow.integrate_until_event(BUMP, (0.5, 0.0), event, config=config)
    ae(result["status"], "NOT_FOUND")
    aae(result["time"], 100.0, decimal=10)


def test_exit_box_found():
    "the unstable node leaves the box through its right side"
    field = fld.parse_field("P = x ; Q = 0")
    event = ds.exit_box_event([-2.0, 2.0, -1.0, 1.0])
    result = flow.integrate_until_event(field, (1.0, 0.0), event)
    ae(result["status"], "EVENT")
    aae(result["time"], np.log(2.0), decimal=9)
    aae(result["state"][0], 2.0, decimal=9)


def test_tangent_section_start():
    "an unoriented section tangent to the flow at the start is rejected"
    section = ds.section((0.0, 0.0), (1.0, 0.0))
    with pytest.raises(ValueError):
        flow.integrate_until_event(ROTATION, (0.0, 1.0), ds.ray_crossing_event(section))


##### polygons


def test_transport_rotates_square():
    "the unit square turns by 90 degrees"
    square = ds.rectangle_polygon([0.0, 1.0, 0.0, 1.0])
    image = flow.transport_polygon(ROTATION, square, np.pi / 2, config=TIGHT)
    aae(image, [[0.0, 0.0], [0.0, 1.0], [-1.0, 1.0], [-1.0, 0.0]], decimal=7)
    aae(utils.polygon_area(image), 1.0, decimal=6)


def test_transport_inserts_vertices():
    "stretched edges receive new vertices"
    field = fld.parse_field("P = x ; Q = -y")
    triangle = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    image = flow.transport_polygon(field, triangle, 2.0, max_spacing=1.0)
    assert image.shape[0] > 3
    gaps = np.hypot(*(np.roll(image, -1, axis=0) - image).T)
    assert np.max(gaps) <= 1.0 + 1e-12


def test_cubic_transport_shrinks_area():
    "the damped cubic flow shrinks the unit disk"
    circle = ds.circle_polygon((0.0, 0.0), 1.0, 128)
    image = flow.transport_polygon(CUBIC, circle, 1.0)
    assert utils.polygon_area(image) < utils.polygon_area(circle)


def test_bump_transport_preserves_inner_area():
    "polygons inside the unit disk keep their area"
    circle = ds.circle_polygon((0.0, 0.0), 0.5, 128)
    image = flow.transport_polygon(BUMP, circle, 3.0)
    aae(utils.polygon_area(image), utils.polygon_area(circle), decimal=6)


def test_transport_area_non_increasing():
    "areas transported by a field with T <= 0 never grow"
    rng = np.random.default_rng(11)
    polygon = ds.random_polygon((1.5, 0.0), 0.6, 64, rng)
    areas = [utils.polygon_area(polygon)]
    for t in [0.5, 1.0, 1.5, 2.0]:
        areas.append(utils.polygon_area(flow.transport_polygon(BUMP, polygon, t)))
    assert np.all(np.diff(areas) <= 1e-3 * areas[0])


def test_transport_blowup_raises():
    "a vertex blowing up aborts the transport"
    field = fld.parse_field("P = x^2 ; Q = 0")
    triangle = np.array([[1.0, 0.0], [2.0, 0.0], [1.5, 1.0]])
    with pytest.raises(fld.NonFiniteError):
        flow.transport_polygon(field, triangle, 2.0)


##### Liouville identity


def test_liouville_rotation_square():
    "area is conserved by the rotation"
    square = ds.rectangle_polygon([0.0, 1.0, 0.0, 1.0])
    result = flow.liouville_residual(ROTATION, square)
    assert result["integral_T"] == 0.0
    assert abs(result["dA_dt"]) < 1e-6
    assert result["residual"] < 1e-6
    ae(result["h"], 1e-3)
    assert result["n_vertices"] >= 1024


def test_liouville_cubic_square():
    "the integral of -3y^2 over [-1, 1] x [-1, 1] is -4"
    square = ds.rectangle_polygon([-1.0, 1.0, -1.0, 1.0])
    result = flow.liouville_residual(CUBIC, square)
    aae(result["integral_T"], -4.0, decimal=12)
    assert abs(result["dA_dt"] + 4.0) < 0.04


def test_liouville_bump_inner_circle():
    "inside the unit disk both sides vanish"
    circle = ds.circle_polygon((0.0, 0.0), 0.5, 128)
    result = flow.liouville_residual(BUMP, circle)
    assert abs(result["dA_dt"]) < 1e-6
    assert abs(result["integral_T"]) < 1e-12
    assert result["residual"] < 1e-6


def check_liouville_random_polygons(field, count):
    rng = np.random.default_rng(2024)
    for _ in range(count):
        center = rng.uniform(-1.5, 1.5, size=2)
        polygon = ds.random_polygon(center, 0.5, 16, rng)
        result = flow.liouville_residual(field, polygon)
        assert result["residual"] < max(1e-4, 0.01 * abs(result["integral_T"]))


@pytest.mark.parametrize("field", [ROTATION, CUBIC, BUMP])
def test_liouville_random_polygons(field):
    "the Liouville identity holds on random star polygons"
    check_liouville_random_polygons(field, 20)


@pytest.mark.slow
@pytest.mark.parametrize("field", [ROTATION, CUBIC, BUMP])
def test_liouville_random_polygons_full(field):
    "the Liouville identity holds on 50 random star polygons"
    check_liouville_random_polygons(field, 50)
