import numpy as np
import pytest

from qwalk.continuation.continuation import (
    DeltaValues,
    continue_r_y,
    delta_representatives,
    r_x_continued,
    r_y_continued,
)
from qwalk.continuation.poles import f_y
from qwalk.elliptic.curve import curve_data
from qwalk.elliptic.uniformization import uniformize
from qwalk.walk.oracle import boundary_gf


@pytest.fixture
def kreweras_delta(kreweras_U, kreweras_table):
    return DeltaValues(kreweras_U, kreweras_table)


def test_delta_values(kreweras_U, kreweras_table, kreweras_delta):
    U = kreweras_U
    omega = U.named_points["y1"]
    y = complex(U.y(omega))
    expected = U.z * y * boundary_gf(kreweras_table, "y-axis", y, U.z)
    assert kreweras_delta.r_y(omega) == pytest.approx(expected)

    # K(0, 0) = 0 for Kreweras walks
    assert kreweras_delta.k00q00 == 0
    x = complex(U.x(omega))
    assert kreweras_delta.r_x(omega) == pytest.approx(x * y - expected)

    with pytest.raises(ValueError):
        kreweras_delta.r_y(0)


def test_delta_representatives(kreweras_U):
    omega = kreweras_U.named_points["y1"] + 2.3 * kreweras_U.w3
    options = delta_representatives(kreweras_U, omega)
    assert len(options) > 0
    margins = [m for _, m in options]
    assert margins == sorted(margins, reverse=True)
    assert all(m > 0 for m in margins)


def test_continuation_in_delta(kreweras_U, kreweras_table, kreweras_delta):
    omega = kreweras_U.named_points["y1"] + 0.05j * abs(kreweras_U.w1)
    assert r_y_continued(kreweras_U, kreweras_table, omega) == pytest.approx(
        kreweras_delta.r_y(omega), rel=1e-9
    )


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_continuation_matches_counts(kreweras_steps, kreweras_table, z):
    U = uniformize(curve_data(kreweras_steps, z))
    for fraction in (0.02, 0.06):
        omega = U.named_points["y1"] + fraction * 1j * abs(U.w1)
        y = complex(U.y(omega))
        expected = z * y * boundary_gf(kreweras_table, "y-axis", y, z)
        assert r_y_continued(U, kreweras_table, omega) == pytest.approx(
            expected, rel=1e-8
        )


@pytest.mark.parametrize("shift", [1, 2, -1])
def test_shift_relation(kreweras_U, kreweras_table, shift):
    U = kreweras_U
    omega = U.named_points["y1"] + 0.3 * U.w3 + 0.1j * abs(U.w1)
    r_y = r_y_continued(U, kreweras_table, omega)
    shifted = r_y_continued(U, kreweras_table, omega + shift * U.w3)

    if shift > 0:
        expected = sum(f_y(U, omega + t * U.w3) for t in range(shift))
    else:
        expected = -f_y(U, omega - U.w3)
    assert shifted - r_y == pytest.approx(expected, rel=1e-8, abs=1e-10)


@pytest.mark.parametrize("offset", [0.2, 1.7, -1.4])
def test_kernel_relation(simple_U, simple_table, offset):
    U = simple_U
    omega = U.named_points["y1"] + offset * U.w3 + 0.07j * abs(U.w1)
    r_x = r_x_continued(U, simple_table, omega)
    r_y = r_y_continued(U, simple_table, omega)
    k00q00 = DeltaValues(U, simple_table).k00q00
    xy = complex(U.x(omega) * U.y(omega))
    scale = max(1.0, abs(r_x), abs(r_y), abs(xy))
    assert abs(r_x + r_y - k00q00 - xy) < 1e-8 * scale


def test_continue_r_y_custom_base(simple_U):
    # a base that is zero on Δ leaves the accumulated f_y values
    omega = simple_U.named_points["y1"] + 1.0 * simple_U.w3 + 0.05j
    value = continue_r_y(simple_U, omega, lambda w: 0j)
    assert np.isfinite(value)
