import numpy as np
from numpy.testing import assert_almost_equal as aae
from numpy.testing import assert_equal as ae
import pytest
from .. import field as fld
from ..expressions import UnknownIdentifierError
from ..intervals import EnclosureError


def _all_fields():
    return [
        fld.builtin("linear_rotation"),
        fld.builtin("cubic_damped"),
        fld.builtin("bump_annulus"),
        fld.parse_field("P = sin(x) * y + a ; Q = exp(-x^2) - y^3 / (2 + x^2)", {"a": 0.5}),
    ]


##### definitions


def test_builtin_invalid():
    "invalid built-in names and shape parameters raise errors"
    with pytest.raises(ValueError):
        fld.builtin("van_der_pol")
    with pytest.raises(ValueError):
        fld.builtin("cubic_damped", r0=2.0)
    with pytest.raises(ValueError):
        fld.builtin("bump_annulus", height=2.0)
    with pytest.raises(ValueError):
        fld.builtin("bump_annulus", width=-1.0)


def test_analytic_flags():
    "only the bump field is declared non analytic"
    ae(fld.builtin("linear_rotation")["analytic"], True)
    ae(fld.builtin("cubic_damped")["analytic"], True)
    ae(fld.builtin("bump_annulus")["analytic"], False)
    ae(fld.parse_field("P = -y ; Q = x")["analytic"], False)
    ae(fld.parse_field("P = -y ; Q = x", analytic=True)["analytic"], True)


def test_parsed_fields_match_builtins():
    "parsed cubic and rotation fields behave as the built-ins"
    rng = np.random.default_rng(0)
    x, y = rng.uniform(-5, 5, (2, 100))
    for src, name in [
        ("P = y ; Q = -x - y^3", "cubic_damped"),
        ("P = -y ; Q = x", "linear_rotation"),
    ]:
        parsed = fld.velocity_function(fld.parse_field(src))(x, y)
        reference = fld.velocity_function(fld.builtin(name))(x, y)
        aae(parsed, reference, decimal=12)


def test_parse_field_errors():
    "unknown identifiers and reserved parameter names are rejected"
    with pytest.raises(UnknownIdentifierError):
        fld.parse_field("P = y ; Q = -x - y^w")
    with pytest.raises(ValueError):
        fld.parse_field("P = y ; Q = x", {"x": 1.0})
    with pytest.raises(ValueError):
        fld.parse_field("P = y ; Q = x", {"a": np.inf})


def test_to_text_round_trip():
    "rendered expression fields parse back to the same velocities"
    field = fld.parse_field("P = y - 2*x ; Q = -x - y^3")
    again = fld.parse_field(fld.to_text(field))
    ae(again["p_expr"], field["p_expr"])
    ae(again["q_expr"], field["q_expr"])


##### evaluation


def test_eval_velocity_examples():
    "velocities of the built-ins at reference points"
    cubic = fld.builtin("cubic_damped")
    aae(fld.eval_velocity(cubic, (0.0, 0.0)), (0.0, 0.0), decimal=15)
    ae(fld.eval_velocity(cubic, (0.0, 1.0)), (1.0, -1.0))
    bump = fld.builtin("bump_annulus")
    ae(fld.eval_velocity(bump, (0.5, 0.0)), (0.0, -0.5))


def test_eval_velocity_non_finite():
    "overflow is reported instead of propagated"
    field = fld.parse_field("P = exp(x) ; Q = 1 / x")
    with pytest.raises(fld.NonFiniteError):
        fld.eval_velocity(field, (1000.0, 1.0))
    with pytest.raises(fld.NonFiniteError):
        fld.eval_velocity(field, (0.0, 1.0))
    with pytest.raises(fld.NonFiniteError):
        fld.jet(field, (0.0, 1.0))
    constant = fld.parse_field("P = 1 / 0 ; Q = x")
    with pytest.raises(fld.NonFiniteError):
        fld.eval_velocity(constant, (0.0, 1.0))


def test_jet_examples():
    "jets of the built-ins at reference points"
    cubic = fld.builtin("cubic_damped")
    sample = fld.jet(cubic, (0.0, 1.0))
    aae(sample["jac"], ((0.0, 1.0), (-1.0, -3.0)), decimal=15)
    ae(sample["trace"], -3.0)
    ae(sample["det"], 1.0)
    sample = fld.jet(cubic, (0.0, 0.0))
    aae((sample["trace"], sample["det"]), (0.0, 1.0), decimal=15)
    aae(sample["eig_re"], (0.0, 0.0), decimal=15)
    bump = fld.builtin("bump_annulus")
    for theta in np.linspace(0, 2 * np.pi, 7):
        sample = fld.jet(bump, (0.5 * np.cos(theta), 0.5 * np.sin(theta)))
        assert sample["trace"] == 0.0
        aae(sample["det"], 1.0, decimal=15)


def test_jet_matches_finite_differences():
    "Jacobians match central differences (h = 1e-5) at random points"
    rng = np.random.default_rng(1)
    h = 1e-5
    for field in _all_fields():
        f = fld.velocity_function(field)
        x, y = rng.uniform(-5, 5, (2, 1000))
        # the bump is not twice differentiable at r = 1
        if field["source"] == "bump_annulus":
            keep = np.abs(np.hypot(x, y) - 1.0) > 1e-3
            x, y = x[keep], y[keep]
        jets = fld.jet_arrays(field, x, y)
        dPx, dQx = [(a - b) / (2 * h) for a, b in zip(f(x + h, y), f(x - h, y))]
        dPy, dQy = [(a - b) / (2 * h) for a, b in zip(f(x, y + h), f(x, y - h))]
        for exact, approx in [
            (jets["Px"], dPx),
            (jets["Py"], dPy),
            (jets["Qx"], dQx),
            (jets["Qy"], dQy),
        ]:
            assert np.all(np.abs(exact - approx) <= 1e-6 + 1e-6 * np.abs(exact))


def test_jet_arrays_consistent_with_jet():
    "vectorized jets equal pointwise jets"
    field = _all_fields()[3]
    x = np.array([0.3, -1.2, 2.0])
    y = np.array([1.0, 0.5, -0.7])
    jets = fld.jet_arrays(field, x, y)
    for k in range(3):
        sample = fld.jet(field, (x[k], y[k]))
        aae(jets["trace"][k], sample["trace"], decimal=15)
        aae(jets["det"][k], sample["det"], decimal=15)
        aae((jets["re1"][k], jets["re2"][k]), sample["eig_re"], decimal=15)


def test_bump_trace_and_determinant_closed_forms():
    "bump jets match T = -2a - ra' and D = 1 + a^2 + r a a'"
    rng = np.random.default_rng(2)
    field = fld.builtin("bump_annulus")
    x, y = rng.uniform(-3, 3, (2, 1000))
    jets = fld.jet_arrays(field, x, y)
    r = np.hypot(x, y)
    alpha, dalpha = fld.alpha_bump(r)
    assert np.all(np.abs(jets["trace"] - (-2 * alpha - r * dalpha)) < 1e-10)
    assert np.all(np.abs(jets["det"] - (1 + alpha**2 + r * alpha * dalpha)) < 1e-10)


##### eigenvalues


def test_eigen_real_parts_examples():
    "real parts from trace and determinant"
    re1, re2 = fld.eigen_real_parts(-3.0, 1.0)
    aae(re1, (-3 - np.sqrt(5)) / 2, decimal=15)
    aae(re2, (-3 + np.sqrt(5)) / 2, decimal=15)
    reference = np.sort(np.linalg.eigvals(np.array([[0.0, 1.0], [-1.0, -3.0]])).real)
    aae((re1, re2), reference, decimal=14)
    aae(fld.eigen_real_parts(0.0, 1.0), (0.0, 0.0), decimal=15)
    ae(fld.eigen_real_parts(2.0, 1.0), (1.0, 1.0))


def test_eigen_real_parts_sum_and_product():
    "re1 + re2 = T and re1 * re2 = D for real pairs, within a few ulps"
    rng = np.random.default_rng(4)
    T = rng.uniform(-10, 10, 1000)
    D = rng.uniform(-10, 10, 1000)
    re1, re2 = fld.eigen_real_parts(T, D)
    assert np.all(re1 <= re2)
    tol = 8 * np.finfo(float).eps
    assert np.all(np.abs(re1 + re2 - T) <= tol * (np.abs(re1) + np.abs(re2) + np.abs(T)))
    real = T**2 >= 4 * D
    product = re1[real] * re2[real]
    assert np.all(np.abs(product - D[real]) <= tol * np.abs(D[real]) + 1e-14)


##### bump


def test_alpha_bump_values():
    "bump values and derivatives at reference radii"
    aae(fld.alpha_bump(1.0), (0.0, 0.0), decimal=15)
    aae(fld.alpha_bump(0.3), (0.0, 0.0), decimal=15)
    aae(fld.alpha_bump(2.0), (np.exp(-1.0), np.exp(-1.0)), decimal=15)
    with pytest.raises(ValueError):
        fld.alpha_bump(-0.1)


def test_alpha_bump_derivative_finite_differences():
    "the bump derivative matches central differences and is positive beyond r0"
    r = np.linspace(1.05, 4.0, 60)
    alpha, dalpha = fld.alpha_bump(r)
    h = 1e-6
    approx = (fld.alpha_bump(r + h)[0] - fld.alpha_bump(r - h)[0]) / (2 * h)
    aae(dalpha, approx, decimal=7)
    assert np.all(alpha > 0)
    assert np.all(dalpha > 0)


##### intervals


def test_interval_jet_examples():
    "enclosures of the built-ins on reference boxes"
    cubic = fld.builtin("cubic_damped")
    enclosure = fld.interval_jet(cubic, [-1.0, 1.0, -1.0, 1.0])
    ae((enclosure["det"].lo, enclosure["det"].hi), (1.0, 1.0))
    assert enclosure["trace"].lo >= -3.0 and enclosure["trace"].hi <= 0.0
    enclosure = fld.interval_jet(cubic, [-1.0, 1.0, 1.0, 2.0])
    assert enclosure["trace"].lo >= -12.0 and enclosure["trace"].hi <= -3.0
    rotation = fld.builtin("linear_rotation")
    enclosure = fld.interval_jet(rotation, [-3.0, 7.0, 0.1, 0.2])
    assert enclosure["trace"].lo == 0.0 and enclosure["trace"].hi == 0.0


def test_interval_jet_soundness():
    "pointwise jets lie inside the enclosures of random boxes"
    rng = np.random.default_rng(5)
    for field in _all_fields():
        for _ in range(100):
            x0, y0 = rng.uniform(-3, 3, 2)
            wx, wy = rng.uniform(0.01, 1.0, 2)
            box = [x0, x0 + wx, y0, y0 + wy]
            try:
                enclosure = fld.interval_jet(field, box)
            except EnclosureError:
                continue
            x = rng.uniform(box[0], box[1], 100)
            y = rng.uniform(box[2], box[3], 100)
            jets = fld.jet_arrays(field, x, y)
            for key, interval in [
                ("trace", enclosure["trace"]),
                ("det", enclosure["det"]),
                ("Px", enclosure["jac"][0][0]),
                ("Qy", enclosure["jac"][1][1]),
                ("P", enclosure["value"][0]),
            ]:
                assert np.all(jets[key] >= interval.lo)
                assert np.all(jets[key] <= interval.hi)


def test_bump_enclosure_contains_rounded_jets():
    "closed-form bump enclosures contain jets evaluated in floating point"
    bump = fld.builtin("bump_annulus")
    rng = np.random.default_rng(11)
    for angle in np.linspace(0.0, 2 * np.pi, 16, endpoint=False):
        c, s = np.cos(angle), np.sin(angle)
        for width in [1e-9, 1e-4, 1e-2]:
            # small boxes straddling and just beyond the unit circle
            for radius in [1.0, 1.0 + width, 1.05]:
                x0, y0 = radius * c, radius * s
                box = [x0 - width, x0 + width, y0 - width, y0 + width]
                enclosure = fld.interval_jet(bump, box)
                x = rng.uniform(box[0], box[1], 200)
                y = rng.uniform(box[2], box[3], 200)
                jets = fld.jet_arrays(bump, x, y)
                for key, interval in [
                    ("det", enclosure["det"]),
                    ("trace", enclosure["trace"]),
                    ("Py", enclosure["jac"][0][1]),
                    ("Qx", enclosure["jac"][1][0]),
                ]:
                    assert np.all(jets[key] >= interval.lo)
                    assert np.all(jets[key] <= interval.hi)


def test_bump_enclosure_positive_beyond_radius():
    "boxes reaching past r0 never get a zero trace enclosure"
    bump = fld.builtin("bump_annulus")
    inside = fld.interval_jet(bump, [0.5, 0.7, 0.0, 0.2])
    assert inside["trace"].lo == 0.0 and inside["trace"].hi == 0.0
    # exp(-1 / 1e-4) underflows
    crossing = fld.interval_jet(bump, [0.9, 1.0001, -1e-3, 1e-3])
    assert crossing["trace"].lo < 0.0


def test_interval_jet_division_failure():
    "division by a box containing zero asks for a split"
    field = fld.parse_field("P = 1 / x ; Q = y")
    with pytest.raises(EnclosureError):
        fld.interval_jet(field, [-1.0, 1.0, 0.0, 1.0])


##### translation


def test_translate_moves_critical_point():
    "translation moves the origin's jet to the shifted point"
    for name in ["cubic_damped", "bump_annulus"]:
        field = fld.builtin(name)
        moved = fld.translate(field, (2.0, -1.0))
        ae(moved["analytic"], field["analytic"])
        a = fld.jet(field, (0.3, 0.4))
        b = fld.jet(moved, (2.3, -0.6))
        aae(b["jac"], a["jac"], decimal=12)
        aae(b["value"], a["value"], decimal=12)


def test_time_reversed():
    "the reversed field is -F with the same parameters"
    rng = np.random.default_rng(8)
    x, y = rng.uniform(-3, 3, (2, 50))
    for field in _all_fields():
        reversed_field = fld.time_reversed(field)
        ae(reversed_field["parameters"], field["parameters"])
        P, Q = fld.velocity_function(field)(x, y)
        P_rev, Q_rev = fld.velocity_function(reversed_field)(x, y)
        ae(P_rev, -P)
        ae(Q_rev, -Q)


@pytest.mark.parametrize("name", ["linear_rotation", "cubic_damped", "bump_annulus"])
def test_builtin_eigenvalues_never_positive(name):
    "eigenvalues of the built-in fields have non-positive real parts"
    rng = np.random.default_rng(6)
    x, y = rng.uniform(-5, 5, (2, 100000))
    jets = fld.jet_arrays(fld.builtin(name), x, y)
    re1, re2 = fld.eigen_real_parts(jets["trace"], jets["det"])
    assert np.all(re2 <= 1e-12)
