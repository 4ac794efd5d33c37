import numpy as np
import pytest

from qwalk.elliptic.curve import curve_data
from qwalk.elliptic.uniformization import MobiusMap, periods, uniformize
from qwalk.walk.stepset import kernel_eval, parse_stepset

samples = np.array([0.13 + 0.21j, 0.47 - 0.35j, 0.81 + 0.12j, 1.9 + 0.6j])


def _cell_points(U):
    return samples.real * U.w2 + samples.imag * U.w1


models = {
    "simple": ("E,W,N,S", 0.15),
    "kreweras": ("W,S,NE", 0.1),
    "kreweras small z": ("W,S,NE", 0.04),
    "gouyou-beauchamps": ("E,W,NW,SE", 0.15),
    "gessel": ("E,W,NE,SW", 0.15),
    "infinite": ("W,SW,S,NE", 0.1),
}


@pytest.fixture(scope="module", params=list(models))
def U(request):
    stepset_str, z = models[request.param]
    return uniformize(curve_data(parse_stepset(stepset_str), z))


def test_periods(U):
    assert U.w1.real == pytest.approx(0, abs=1e-14)
    assert U.w1.imag > 0
    assert 0 < U.w3 < U.w2


@pytest.mark.parametrize(
    "uniformization,ratio",
    [
        pytest.param("simple_U", 1 / 2, id="simple"),
        pytest.param("kreweras_U", 2 / 3, id="kreweras"),
    ],
)
def test_period_ratio(uniformization, ratio, request):
    U = request.getfixturevalue(uniformization)
    assert U.periods.ratio == pytest.approx(ratio, abs=1e-10)


def test_periods_need_branch_points(kreweras_steps):
    from qwalk.elliptic.curve import discriminants

    with pytest.raises(ValueError):
        periods(discriminants(kreweras_steps, 0.1))


def test_named_points(U):
    points = U.named_points
    for i, (xb, yb) in enumerate(zip(U.curve.x_branch, U.curve.y_branch), start=1):
        x = complex(U.x(points[f"x{i}"]))
        y = complex(U.y(points[f"y{i}"]))
        if np.isinf(xb):
            assert np.isinf(x)
        else:
            assert x == pytest.approx(xb, rel=1e-8, abs=1e-10)
        if np.isinf(yb):
            assert np.isinf(y)
        else:
            assert y == pytest.approx(yb, rel=1e-8, abs=1e-10)


def test_kernel_on_curve(U):
    omega = _cell_points(U)
    x, y = U.x(omega), U.y(omega)
    scale = np.maximum(np.abs(x), 1) ** 2 * np.maximum(np.abs(y), 1) ** 2
    residual = np.abs(kernel_eval(U.steps, x, y, U.z)) / scale
    assert np.all(residual < 1e-8)


def test_group_lifts(U):
    omega = _cell_points(U)
    assert U.x(U.xi_hat(omega)) == pytest.approx(U.x(omega), rel=1e-8, abs=1e-10)
    assert U.y(U.eta_hat(omega)) == pytest.approx(U.y(omega), rel=1e-8, abs=1e-10)


def test_derivatives(U):
    h = 1e-6
    omega = _cell_points(U)[:2]
    numeric = (U.x(omega + h) - U.x(omega - h)) / (2 * h)
    assert U.x_prime(omega) == pytest.approx(numeric, rel=1e-6)
    numeric = (U.y(omega + h) - U.y(omega - h)) / (2 * h)
    assert U.y_prime(omega) == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("value", [0.3, -0.2 + 0.4j, 2.5])
def test_preimages(U, value):
    for omega in U.omega_of_x(value):
        assert complex(U.x(omega)) == pytest.approx(value, rel=1e-8)
    for omega in U.omega_of_y(value):
        assert complex(U.y(omega)) == pytest.approx(value, rel=1e-8)


def test_delta_domains(U):
    points = U.named_points
    assert U.in_delta_x(points["x1"])
    assert U.in_delta_y(points["y1"])
    assert not U.in_delta_x(points["x3"])
    assert not U.in_delta_y(points["y3"])
    assert U.in_delta(points["x1"])["any"]


def test_zeros_in_delta(U):
    for w in U.zeros_in_delta("x"):
        assert abs(complex(U.x(w))) < 1e-8
        assert U.in_delta_x(w)
    for w in U.zeros_in_delta("y"):
        assert abs(complex(U.y(w))) < 1e-8
        assert U.in_delta_y(w)

    with pytest.raises(ValueError):
        U.zeros_in_delta("z")


def test_mobius_map():
    d = np.array([0.01, -0.2, 1.0, -0.04, 0.0])
    gmap = MobiusMap.from_discriminant(d, np.inf)
    for p in (0.5 + 0.1j, -1.2):
        assert gmap.inverse(gmap(p)) == pytest.approx(p)
    assert np.isinf(gmap(np.inf))

    gmap = MobiusMap.from_discriminant(d, 4.0)
    assert complex(gmap(np.inf)) == pytest.approx(4.0)
    assert gmap.inverse(4.0) == np.inf


def test_uniformize_with_periods(simple_steps, simple_U):
    curve = curve_data(simple_steps, simple_U.z)
    U = uniformize(curve, curve_periods=simple_U.periods)
    assert U.w2 == simple_U.w2
    assert U.lattice == simple_U.lattice
