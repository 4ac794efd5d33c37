import numpy as np
import pytest

from qwalk.continuation.poles import (
    PrincipalPart,
    algebraicity_test,
    f_x,
    f_y,
    fx_poles,
    fy_poles,
    grouped_orbit_parts,
    orbit_sum,
    pole_ledger_y,
)
from qwalk.elliptic.curve import curve_data
from qwalk.elliptic.uniformization import uniformize
from qwalk.walk.stepset import parse_stepset


@pytest.fixture(params=["simple", "kreweras", "infinite"])
def U(request, simple_U, kreweras_U, infinite_U):
    return {"simple": simple_U, "kreweras": kreweras_U, "infinite": infinite_U}[
        request.param
    ]


def _samples(U):
    return np.array([0.21, 0.58, 0.83]) * U.w2 + np.array([0.1, 0.3, 0.15]) * U.w1


def test_principal_part():
    part = PrincipalPart(0.5, {1: 2.0, 2: -1j})
    assert part.order == 2
    assert part.residue == 2
    assert part.scale() == 2
    assert part(1.5) == pytest.approx(2 - 1j)
    assert part.shifted(1.0).pole == 1.5
    assert part.to_report() == {"pole": 0.5 + 0j, "coeffs": {"1": 2 + 0j, "2": -1j}}
    assert PrincipalPart(0, {}).residue == 0


def test_f_forms(U):
    omega = _samples(U)
    assert f_y(U, omega) == pytest.approx(f_y(U, omega, form="derivative"), rel=1e-7)
    assert f_x(U, omega) == pytest.approx(f_x(U, omega, form="derivative"), rel=1e-7)

    with pytest.raises(ValueError):
        f_y(U, omega, form="series")


def test_f_y_periodicity(U):
    omega = _samples(U)
    assert f_y(U, omega + U.w1) == pytest.approx(f_y(U, omega), rel=1e-8)
    assert f_y(U, omega + U.w2) == pytest.approx(f_y(U, omega), rel=1e-8)


def test_poles_residues(U):
    for parts in (fy_poles(U), fx_poles(U)):
        assert len(parts) > 0
        assert all(1 <= p.order <= 3 for p in parts)
        scale = max(p.scale() for p in parts)
        assert abs(sum(p.residue for p in parts)) < 1e-7 * max(scale, 1)


def test_poles_are_poles(U):
    for part in fy_poles(U):
        near = abs(f_y(U, part.pole + 1e-5 * U.w2))
        assert near > 5 * abs(f_y(U, part.pole + 1e-4 * U.w2))


def test_simple_fy_poles(simple_U):
    parts = fy_poles(simple_U)
    assert len(parts) == 2
    assert all(p.order == 2 for p in parts)
    coeff = 1 / (4 * simple_U.z**2)
    assert sorted(p.coeffs[2].real for p in parts) == pytest.approx(
        [-coeff, coeff], rel=1e-6
    )


@pytest.mark.parametrize(
    "uniformization,k,l,verdict",
    [
        pytest.param("kreweras_U", 2, 3, "algebraic", id="kreweras"),
        pytest.param("simple_U", 1, 2, "holonomic-transcendental", id="simple"),
    ],
)
def test_algebraicity(uniformization, k, l, verdict, request):  # noqa: E741
    U = request.getfixturevalue(uniformization)
    result = algebraicity_test(U, k, l, n_samples=6, seed=3)
    assert result.verdict == verdict
    assert result.algebraic == (verdict == "algebraic")
    assert result.seed == 3


@pytest.mark.parametrize("z", [0.05, 0.12, 0.2])
@pytest.mark.parametrize(
    "stepset_str,k,l,verdict",
    [
        pytest.param("W,S,NE", 2, 3, "algebraic", id="kreweras"),
        pytest.param("E,W,N,S", 1, 2, "holonomic-transcendental", id="simple"),
    ],
)
def test_algebraicity_across_z(stepset_str, k, l, verdict, z):  # noqa: E741
    U = uniformize(curve_data(parse_stepset(stepset_str), z))
    assert algebraicity_test(U, k, l, n_samples=6, seed=1).verdict == verdict


def test_orbit_sum_kreweras(kreweras_U):
    omega = _samples(kreweras_U)
    assert np.abs(orbit_sum(kreweras_U, 2, 3, omega)) == pytest.approx(0, abs=1e-7)

    poles = fy_poles(kreweras_U)
    grouped = grouped_orbit_parts(kreweras_U, 3, poles)
    scale = max(p.scale() for p in poles)
    assert max(p.scale() for p in grouped) < 1e-7 * scale


def test_pole_ledger_simple(simple_U):
    ledger = pole_ledger_y(simple_U, 1, 2)
    assert len(ledger) > 0
    assert all(p.order <= 3 for p in ledger)
    for part in ledger:
        assert abs(part.pole.imag) <= abs(simple_U.w1) / 2
