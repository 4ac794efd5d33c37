import numpy as np
import pytest

from qwalk.continuation.continuation import DeltaValues
from qwalk.elliptic.weierstrass import wp
from qwalk.models.kreweras import (
    constants_check,
    cubic_roots,
    defining_constants,
    doubled_lattice,
    doubled_lattice_data,
    invariants,
    is_kreweras,
    kreweras_constants,
    kreweras_excursions,
    kreweras_uniformization,
    q00_closed,
    q00_from_r,
    q00_from_wp12,
    qx0_closed,
    qx0_from_constants,
    r_from_W,
    ry_half_shift,
    ry_zeta,
    solve_W,
    special_values_12,
    wp12_thirds,
    x_half_shift,
)
from qwalk.walk.oracle import boundary_gf
from qwalk.walk.stepset import parse_stepset


def test_solve_W():
    w = solve_W(0.1)
    assert w == pytest.approx(0.1 * (2 + w**3), rel=1e-13)
    assert w == pytest.approx(0.2, rel=1e-2)

    with pytest.raises(ValueError):
        solve_W(0.4)


def test_excursions(kreweras_table):
    assert [kreweras_excursions(n) for n in range(5)] == [1, 2, 16, 192, 2816]
    for n in range(1, 21):
        assert kreweras_table.q(0, 0, 3 * n) == kreweras_excursions(n)


def test_closed_forms_match_counts(kreweras_table):
    z = 0.1
    assert q00_closed(z) == pytest.approx(
        boundary_gf(kreweras_table, "origin", 0, z), rel=1e-12
    )
    for x in (0.5, -0.7, 0.3 + 0.4j):
        assert qx0_closed(z, x) == pytest.approx(
            boundary_gf(kreweras_table, "x-axis", x, z), rel=1e-10
        )
    assert qx0_closed(z, 0) == pytest.approx(q00_closed(z))
    assert qx0_from_constants(z, 0.5) == pytest.approx(qx0_closed(z, 0.5), rel=1e-12)


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_cubic_roots(z):
    g2, g3 = invariants(z)
    roots = cubic_roots(g2, g3)
    for root in roots:
        assert 4 * root**3 - g2 * root + g3 == pytest.approx(0, abs=1e-12)
    assert roots[1] < roots[2] < roots[0]
    assert roots[0] == pytest.approx(r_from_W(z), rel=1e-9)
    assert q00_from_r(z) == pytest.approx(q00_closed(z), rel=1e-8)


def test_lattice_data(kreweras_U):
    z = kreweras_U.z
    g2, g3 = kreweras_U.lattice.invariants
    assert complex(g2) == pytest.approx(invariants(z)[0], rel=1e-7)
    assert complex(g3) == pytest.approx(invariants(z)[1], rel=1e-7)

    e2, g2_12, g3_12 = doubled_lattice_data(z)
    lat = doubled_lattice(kreweras_U)
    assert complex(lat.invariants[0]) == pytest.approx(g2_12, rel=1e-7)
    assert complex(lat.invariants[1]) == pytest.approx(g3_12, rel=1e-7)
    assert complex(wp(lat, kreweras_U.w2)) == pytest.approx(e2, rel=1e-7)

    third, two_thirds = wp12_thirds(z)
    assert complex(wp(lat, kreweras_U.w2 / 3)) == pytest.approx(third, rel=1e-7)
    assert complex(wp(lat, 2 * kreweras_U.w2 / 3)) == pytest.approx(
        two_thirds, rel=1e-7
    )


def test_q00_from_wp12(kreweras_U):
    assert q00_from_wp12(kreweras_U) == pytest.approx(q00_closed(0.1), rel=1e-7)


def test_x_half_shift(kreweras_U):
    consts = kreweras_constants(kreweras_U.z)
    x = np.array([0.3, -1.2, 2 + 1j])
    assert x_half_shift(kreweras_U.z, x_half_shift(kreweras_U.z, x)) == pytest.approx(
        x, rel=1e-10
    )
    assert x_half_shift(kreweras_U.z, np.inf) == consts.x1


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_special_values(z):
    values = special_values_12(kreweras_uniformization(z))
    assert values["wp12_half"] == pytest.approx(values["wp12_half_closed"], rel=1e-6)
    assert values["wp12_sixth"] == pytest.approx(
        values["wp12_sixth_closed"], rel=1e-6
    )


def test_ry_zeta(kreweras_U, kreweras_table):
    delta = DeltaValues(kreweras_U, kreweras_table)
    w1 = abs(kreweras_U.w1)
    for offset in (0.03j * w1, 0.08j * w1):
        omega = kreweras_U.named_points["y1"] + offset
        assert ry_zeta(kreweras_U, omega) == pytest.approx(delta.r_y(omega), rel=1e-7)


def test_constants_check(kreweras_U):
    residuals = constants_check(kreweras_U)
    assert set(residuals) == {"defining", "identified"}
    assert set(residuals["identified"]) == {"alpha", "beta", "gamma", "delta"}
    assert max(residuals["identified"].values()) < 1e-6
    assert max(residuals["defining"].values()) < 1e-6


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_defining_constants(z):
    values = defining_constants(kreweras_uniformization(z))
    w = solve_W(z)
    assert values["alpha"] == pytest.approx(1 / (2 * z), rel=1e-7)
    assert values["beta"] == pytest.approx(-1, rel=1e-7)
    assert values["gamma"] == pytest.approx(-1 / w, rel=1e-7)
    assert values["delta"] == pytest.approx(1, rel=1e-7)


def test_half_shift(kreweras_U):
    consts = kreweras_constants(kreweras_U.z)
    lat = doubled_lattice(kreweras_U)
    w2 = kreweras_U.w2
    omega = w2 / 3 + 0.05 * w2 * np.exp(1j * np.array([0.3, 1.9, 4.1]))
    x = kreweras_U.x(omega)

    shifted = wp(lat, omega + w2 / 2)
    assert consts.wp12_half_shift(x) == pytest.approx(shifted, rel=1e-7)
    assert consts.wp12_half_shift(x, sqrt_sign=-1) == pytest.approx(
        wp(lat, w2 / 2 - omega), rel=1e-7
    )
    assert consts.reciprocal_half(x) == pytest.approx(
        1 / (shifted - wp(lat, w2 / 2)), rel=1e-6
    )
    assert consts.reciprocal_sixth(x) == pytest.approx(
        1 / (shifted - wp(lat, w2 / 6)), rel=1e-6
    )

    nu = 0.21 * w2 + 0.13 * kreweras_U.w1
    assert ry_half_shift(kreweras_U, nu) == pytest.approx(
        ry_zeta(kreweras_U, nu + kreweras_U.w3 / 2 - w2 / 2), rel=1e-8
    )


def test_is_kreweras():
    assert is_kreweras(parse_stepset("NE,S,W"))
    assert not is_kreweras(parse_stepset("E,S,NW"))
